"""Differential forms and vector fields on coordinate charts.

Forms are stored in the canonical antisymmetric representation: one
:class:`~bmkit.scalars.ScalarField` coefficient per strictly increasing
multi-index, zero coefficients omitted.  All operations are pure and the
objects are immutable after construction, so evaluation is thread-safe.

Exterior derivatives use analytic coefficient partials when present and
otherwise fall back to 4th-order finite differences that wrap periodic axes
and switch to one-sided stencils within two steps of interval endpoints.
On spacetime charts the derivative splits as d = d_spatial + dx0 ^ d/dx0;
both pieces are exposed separately.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .charts import Chart
from .errors import ChartMismatchError, DegreeError, DomainError
from .scalars import ScalarField, ZERO, constant, from_function

DEFAULT_FD_STEP = 1e-4

MultiIndex = tuple[int, ...]


def increasing_indices(dim: int, degree: int) -> list[MultiIndex]:
    return list(itertools.combinations(range(dim), degree))


def merge_indices(left: MultiIndex, right: MultiIndex):
    """Sign and sorted union of two increasing index tuples, or None on overlap.

    The sign is the parity of the shuffle putting left+right in increasing
    order (the coefficient sign of dx^left ^ dx^right).
    """
    if set(left) & set(right):
        return None
    inversions = sum(1 for i in left for j in right if j < i)
    merged = tuple(sorted(left + right))
    return (-1.0 if inversions % 2 else 1.0), merged


def insert_index(j: int, idx: MultiIndex):
    """Sign and result of dx^j ^ dx^idx, or None if j already appears."""
    return merge_indices((j,), idx)


@dataclass(frozen=True)
class DifferentialForm:
    """Degree-k form: coefficients over strictly increasing multi-indices."""

    chart: Chart
    degree: int
    coeffs: dict[MultiIndex, ScalarField] = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.degree <= self.chart.dim:
            raise DegreeError(
                f"degree {self.degree} out of range for dim {self.chart.dim}")
        for idx in self.coeffs:
            if len(idx) != self.degree or any(
                    not 0 <= a < self.chart.dim for a in idx) or list(idx) != sorted(set(idx)):
                raise DegreeError(f"bad multi-index {idx} for degree {self.degree}")

    # -- access ----------------------------------------------------------

    def coefficient(self, idx: MultiIndex) -> ScalarField:
        idx = tuple(idx)
        if list(idx) != sorted(set(idx)):
            raise DegreeError(
                f"coefficients are stored on strictly increasing multi-indices; "
                f"got {idx}")
        return self.coeffs.get(idx, ZERO)

    @property
    def indices(self) -> list[MultiIndex]:
        return increasing_indices(self.chart.dim, self.degree)

    def coefficient_table(self, pts: np.ndarray) -> np.ndarray:
        """Values of every canonical coefficient at pts, shape (N, n_indices)."""
        pts = self.chart.as_points(pts)
        cols = [self.coefficient(idx)(pts) for idx in self.indices]
        return np.stack(cols, axis=-1) if cols else np.zeros(pts.shape[:-1] + (0,))

    def max_abs(self, pts: np.ndarray) -> float:
        table = self.coefficient_table(pts)
        return float(np.max(np.abs(table))) if table.size else 0.0

    @property
    def is_spatial(self) -> bool:
        """True when no stored index touches the chart's time axis."""
        t = self.chart.time_axis
        return t is None or all(t not in idx for idx in self.coeffs)

    # -- linear structure ---------------------------------------------------

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        _require_same_chart(self, other)
        if self.degree != other.degree:
            raise DegreeError("cannot add forms of different degree")
        out = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            out[idx] = out[idx] + c if idx in out else c
        return make_form(self.chart, self.degree, out)

    def __sub__(self, other: "DifferentialForm") -> "DifferentialForm":
        return self + (-other)

    def __neg__(self) -> "DifferentialForm":
        return make_form(self.chart, self.degree,
                         {idx: -c for idx, c in self.coeffs.items()})

    def __mul__(self, s) -> "DifferentialForm":
        if not isinstance(s, ScalarField):
            s = constant(float(s))
        return make_form(self.chart, self.degree,
                         {idx: s * c for idx, c in self.coeffs.items()})

    __rmul__ = __mul__

    @property
    def has_analytic_partials(self) -> bool:
        return all(c.has_partials for c in self.coeffs.values())


@dataclass(frozen=True)
class VectorField:
    """Vector field with one ScalarField component per chart axis."""

    chart: Chart
    components: tuple[ScalarField, ...]

    def __post_init__(self):
        if len(self.components) != self.chart.dim:
            raise DegreeError("component count != chart dimension")

    def component(self, axis: int) -> ScalarField:
        return self.components[axis]

    def evaluate(self, pts: np.ndarray) -> np.ndarray:
        pts = self.chart.as_points(pts)
        return np.stack([c(pts) for c in self.components], axis=-1)

    def __neg__(self) -> "VectorField":
        return VectorField(self.chart, tuple(-c for c in self.components))

    def __mul__(self, s) -> "VectorField":
        if not isinstance(s, ScalarField):
            s = constant(float(s))
        return VectorField(self.chart, tuple(s * c for c in self.components))

    __rmul__ = __mul__


# -- constructors ---------------------------------------------------------


def make_form(chart: Chart, degree: int, coeffs: dict) -> DifferentialForm:
    """Build a form, normalizing keys and dropping exact-zero coefficients."""
    clean = {}
    for idx, c in coeffs.items():
        idx = tuple(int(a) for a in idx)
        if not isinstance(c, ScalarField):
            c = constant(float(c))
        if not c.is_zero:
            clean[idx] = c
    return DifferentialForm(chart, degree, clean)


def zero_form(chart: Chart, degree: int) -> DifferentialForm:
    return DifferentialForm(chart, degree, {})


def scalar_form(chart: Chart, c) -> DifferentialForm:
    return make_form(chart, 0, {(): c})


def dx(chart: Chart, axis: int) -> DifferentialForm:
    """Basis covector dx^axis."""
    return make_form(chart, 1, {(int(axis),): constant(1.0)})


def one_form(chart: Chart, comps: dict[int, ScalarField]) -> DifferentialForm:
    return make_form(chart, 1, {(a,): c for a, c in comps.items()})


def vector_field(chart: Chart, comps: dict[int, ScalarField]) -> VectorField:
    parts = [ZERO] * chart.dim
    for a, c in comps.items():
        parts[int(a)] = c if isinstance(c, ScalarField) else constant(float(c))
    return VectorField(chart, tuple(parts))


def _require_same_chart(a, b):
    if a.chart is not b.chart and a.chart != b.chart:
        raise ChartMismatchError(
            f"operands on different charts: {a.chart.name} vs {b.chart.name}")


# -- wedge ----------------------------------------------------------------


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    """Exterior product a ^ b with shuffle signs."""
    _require_same_chart(a, b)
    degree = a.degree + b.degree
    if degree > a.chart.dim:
        raise DegreeError(
            f"wedge degree {degree} exceeds chart dimension {a.chart.dim}")
    out: dict[MultiIndex, ScalarField] = {}
    for ia, ca in a.coeffs.items():
        for ib, cb in b.coeffs.items():
            merged = merge_indices(ia, ib)
            if merged is None:
                continue
            sign, idx = merged
            term = (ca * cb) if sign > 0 else -(ca * cb)
            out[idx] = out[idx] + term if idx in out else term
    return make_form(a.chart, degree, out)


# -- finite differences ----------------------------------------------------

# 4th-order central and one-sided (5-point) first-derivative stencils.
_CENTRAL = ((-2, 1.0 / 12), (-1, -8.0 / 12), (1, 8.0 / 12), (2, -1.0 / 12))
_FORWARD = ((0, -25.0 / 12), (1, 48.0 / 12), (2, -36.0 / 12), (3, 16.0 / 12), (4, -3.0 / 12))
_BACKWARD = tuple((-o, -w) for o, w in _FORWARD)


def _stencil_eval(chart: Chart, fn, pts, axis, h, stencil):
    total = np.zeros(pts.shape[:-1])
    for offset, weight in stencil:
        shifted = np.array(pts, copy=True)
        shifted[..., axis] += offset * h
        total += weight * fn(chart.wrap(shifted))
    return total / h


def fd_partial(chart: Chart, sf: ScalarField, axis: int,
               base_step: float = DEFAULT_FD_STEP) -> ScalarField:
    """Finite-difference d(sf)/dx_axis as a numeric-only ScalarField.

    Periodic axes wrap stencil points; within 2h of a finite interval
    endpoint the stencil clamps to the one-sided 4th-order formula.
    Points outside the chart domain raise DomainError.
    """
    ax = chart.axes[axis]
    h = base_step * ax.fd_scale()

    def value(pts):
        pts = np.asarray(pts, dtype=float)
        chart.require_inside(pts)
        x = pts[..., axis]
        if ax.is_periodic or (np.isinf(ax.lo) and np.isinf(ax.hi)):
            return _stencil_eval(chart, sf, pts, axis, h, _CENTRAL)
        out = np.empty(pts.shape[:-1])
        near_lo = x < ax.lo + 2 * h
        near_hi = x > ax.hi - 2 * h
        mid = ~(near_lo | near_hi)
        for mask, stencil in ((mid, _CENTRAL), (near_lo, _FORWARD), (near_hi, _BACKWARD)):
            if np.any(mask):
                out[mask] = _stencil_eval(chart, sf, pts[mask], axis, h, stencil)
        return out

    return from_function(value)


def partial_field(chart: Chart, sf: ScalarField, axis: int, mode: str = "auto",
                  step: float = DEFAULT_FD_STEP) -> ScalarField:
    """d(sf)/dx_axis: analytic when available (per mode), else finite differences."""
    if mode not in ("auto", "analytic", "fd"):
        raise ValueError(f"unknown differentiation mode {mode!r}")
    if mode != "fd":
        p = sf.partial(axis)
        if p is not None:
            return p
        if mode == "analytic":
            raise DomainError("analytic partials requested but not available")
    return fd_partial(chart, sf, axis, step)


# -- exterior derivative ----------------------------------------------------


def exterior_derivative(a: DifferentialForm, axes: tuple[int, ...] | None = None,
                        mode: str = "auto",
                        step: float = DEFAULT_FD_STEP) -> DifferentialForm:
    """Exterior derivative of a, optionally restricted to a subset of axes.

    With axes = spatial axes of a spacetime chart this is the spatial part
    d_spatial; the full derivative is d = d_spatial + dx0 ^ (d/dx0).
    """
    chart = a.chart
    if a.degree >= chart.dim:
        raise DegreeError("exterior derivative needs degree < chart dimension")
    if axes is None:
        axes = tuple(range(chart.dim))
    out: dict[MultiIndex, ScalarField] = {}
    for idx, c in a.coeffs.items():
        for j in axes:
            ins = insert_index(j, idx)
            if ins is None:
                continue
            sign, new_idx = ins
            dcj = partial_field(chart, c, j, mode, step)
            term = dcj if sign > 0 else -dcj
            out[new_idx] = out[new_idx] + term if new_idx in out else term
    return make_form(chart, a.degree + 1, out)


def spatial_exterior_derivative(a: DifferentialForm, mode: str = "auto",
                                step: float = DEFAULT_FD_STEP) -> DifferentialForm:
    """The d_spatial piece on a spacetime chart (plain d on 3-d charts)."""
    return exterior_derivative(a, axes=a.chart.spatial_axes, mode=mode, step=step)


def time_derivative(a: DifferentialForm, mode: str = "auto",
                    step: float = DEFAULT_FD_STEP) -> DifferentialForm:
    """Coefficient-wise d/dx0: the Lie derivative along the time translation."""
    t = a.chart.time_axis
    if t is None:
        raise DegreeError("chart has no time axis")
    return make_form(
        a.chart, a.degree,
        {idx: partial_field(a.chart, c, t, mode, step) for idx, c in a.coeffs.items()})


# -- interior product and Lie derivative -------------------------------------


def interior_product(X: VectorField, a: DifferentialForm) -> DifferentialForm:
    """Contraction i_X a on the first slot."""
    _require_same_chart(X, a)
    if a.degree == 0:
        raise DegreeError("interior product needs degree >= 1")
    out: dict[MultiIndex, ScalarField] = {}
    for idx, c in a.coeffs.items():
        for pos, axis in enumerate(idx):
            comp = X.components[axis]
            if comp.is_zero:
                continue
            reduced = idx[:pos] + idx[pos + 1:]
            term = comp * c if pos % 2 == 0 else -(comp * c)
            out[reduced] = out[reduced] + term if reduced in out else term
    return make_form(a.chart, a.degree - 1, out)


def lie_derivative(X: VectorField, a: DifferentialForm, mode: str = "auto",
                   step: float = DEFAULT_FD_STEP) -> DifferentialForm:
    """Cartan formula: L_X a = d(i_X a) + i_X(d a)."""
    _require_same_chart(X, a)
    if a.degree == 0:
        return interior_product(X, exterior_derivative(a, mode=mode, step=step))
    if a.degree == a.chart.dim:
        return exterior_derivative(interior_product(X, a), mode=mode, step=step)
    return (exterior_derivative(interior_product(X, a), mode=mode, step=step)
            + interior_product(X, exterior_derivative(a, mode=mode, step=step)))


# -- flow-pullback cross-check ------------------------------------------------


def _flow_rk4(X: VectorField, pts: np.ndarray, tau: float) -> np.ndarray:
    """One classical RK4 step of the flow of X."""
    chart = X.chart

    def f(p):
        return X.evaluate(chart.wrap(p))

    k1 = f(pts)
    k2 = f(pts + 0.5 * tau * k1)
    k3 = f(pts + 0.5 * tau * k2)
    k4 = f(pts + tau * k3)
    return pts + (tau / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)


def lie_derivative_flow(X: VectorField, a: DifferentialForm, pts: np.ndarray,
                        tau: float = 1e-4, jac_step: float = 1e-5) -> np.ndarray:
    """(flow_tau^* a - a) / tau, coefficient table at pts.

    Independent of the Cartan-formula path: the flow map is integrated with
    RK4 and its Jacobian taken by central differences.  Used to cross-check
    lie_derivative; returns an array matching a.coefficient_table(pts).
    """
    chart = a.chart
    pts = chart.as_points(pts)
    n, dim = pts.shape
    phi = _flow_rk4(X, pts, tau)
    jac = np.empty((n, dim, dim))
    for i in range(dim):
        dp = np.zeros(dim)
        dp[i] = jac_step
        jac[:, :, i] = (_flow_rk4(X, pts + dp, tau) - _flow_rk4(X, pts - dp, tau)) / (2 * jac_step)

    indices = a.indices
    a_at_phi = {idx: a.coefficient(idx)(chart.wrap(phi)) for idx in a.coeffs}
    pulled = np.zeros((n, len(indices)))
    for col, idx_out in enumerate(indices):
        total = np.zeros(n)
        for idx_in, vals in a_at_phi.items():
            sub = jac[:, idx_in, :][:, :, idx_out]
            total += vals * np.linalg.det(sub)
        pulled[:, col] = total
    return (pulled - a.coefficient_table(pts)) / tau
