"""Reeb vector fields of contact forms and stable Hamiltonian structures.

The extraction uses one uniform coordinate formula.  Writing a 2-form as

    Omega = Omega_3 dx1^dx2 + Omega_1 dx2^dx3 + Omega_2 dx3^dx1

the conditions i_Y Omega = 0, i_Y lambda = 1 force Y to be proportional to
(Omega_1, Omega_2, Omega_3), and the normalization gives

    Y = (Omega_1, Omega_2, Omega_3) / (lambda_1 Omega_1 + lambda_2 Omega_2
                                       + lambda_3 Omega_3).

This specializes to both textbook coordinate branches (Omega_3 != 0 and
Omega_3 = 0) without a case split; the denominator is exactly the volume
coefficient of lambda ^ Omega, which a stable Hamiltonian structure keeps
away from zero.  Points where it nearly vanishes raise DegeneratePointError.

Closed forms for the catalog fields (metric duals over squared norms) are
provided as oracles, and every extracted field can report its defining
residuals max |i_Y Omega|, max |i_Y lambda - 1| on a grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog import BeltramiForm, MaxwellFieldSet
from .charts import Chart
from .errors import BmkitError, DegenerateInstantError, DegeneratePointError
from .forms import DifferentialForm, VectorField, interior_product, vector_field
from .metrics import hodge_star, metric_sharp, norm_sq_field
from .scalars import constant
from .verify import SampleGrid, reeb_like_check as verify_reeb_like

__all__ = ["SHSPair", "ReebField", "omega_components", "reeb_from_shs",
           "reeb_vector_field", "normalization_residuals",
           "reeb_closed_form_beltrami", "reeb_for_maxwell",
           "reeb_parallel_ratio", "field_line_generator", "verify_reeb_like"]

DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class SHSPair:
    """A candidate stable Hamiltonian pair (Omega, lambda) on a 3-d chart."""

    Omega: DifferentialForm
    lam: DifferentialForm
    chart: Chart

    def __post_init__(self):
        if self.chart.dim != 3:
            raise BmkitError("SHSPair lives on a 3-d chart")
        if self.Omega.degree != 2 or self.lam.degree != 1:
            raise BmkitError("SHSPair needs a 2-form and a 1-form")


@dataclass(frozen=True)
class ReebField:
    """An extracted Reeb field with its defining residuals on a grid."""

    Y: VectorField
    source: str  # "contact" | "shs"
    normalization_residuals: tuple[float, float]  # (max|i_Y Omega|, max|i_Y lam - 1|)
    pair: SHSPair


def omega_components(Omega: DifferentialForm, pts: np.ndarray) -> np.ndarray:
    """(Omega_1, Omega_2, Omega_3) in the dx2^dx3, dx3^dx1, dx1^dx2 ordering."""
    pts = Omega.chart.as_points(pts)
    return np.stack([
        Omega.coefficient((1, 2))(pts),       # Omega_1 on dx2 ^ dx3
        -Omega.coefficient((0, 2))(pts),      # Omega_2 on dx3 ^ dx1 = -dx1 ^ dx3
        Omega.coefficient((0, 1))(pts),       # Omega_3 on dx1 ^ dx2
    ], axis=-1)


def reeb_from_shs(pair: SHSPair, x) -> np.ndarray:
    """Reeb vector at point(s) x via the uniform formula Y = Omega_vec / (lam . Omega_vec).

    Raises DegeneratePointError where |lam . Omega_vec|, normalized by the
    point-wise magnitudes of lambda and Omega, falls below 1e-10.
    """
    pts = pair.chart.as_points(x)
    ov = omega_components(pair.Omega, pts)
    lam_tab = np.stack([pair.lam.coefficient((i,))(pts) for i in range(3)], axis=-1)
    den = np.einsum("ni,ni->n", lam_tab, ov)
    scale = np.linalg.norm(lam_tab, axis=-1) * np.linalg.norm(ov, axis=-1)
    bad = np.abs(den) <= DEGENERACY_TOL * np.maximum(scale, 1e-300)
    if np.any(bad):
        witness = pts[bad][0].tolist()
        raise DegeneratePointError(
            f"lambda . Omega vanishes (|den| <= {DEGENERACY_TOL} after scaling) "
            f"at {witness}")
    out = ov / den[:, None]
    return out[0] if np.asarray(x).ndim == 1 else out


def reeb_vector_field(pair: SHSPair) -> VectorField:
    """The uniform-formula Reeb field as a VectorField (analytic when inputs are)."""
    o1 = pair.Omega.coefficient((1, 2))
    o2 = -pair.Omega.coefficient((0, 2))
    o3 = pair.Omega.coefficient((0, 1))
    l1, l2, l3 = (pair.lam.coefficient((i,)) for i in range(3))
    den = l1 * o1 + l2 * o2 + l3 * o3
    return vector_field(pair.chart, {0: o1 / den, 1: o2 / den, 2: o3 / den})


def normalization_residuals(Y: VectorField, pair: SHSPair,
                            grid: SampleGrid) -> tuple[float, float]:
    """(max |i_Y Omega|, max |i_Y lambda - 1|) over the grid."""
    pts = grid.points
    contracted = interior_product(Y, pair.Omega)
    m_omega = max((float(np.max(np.abs(c(pts)))) for c in contracted.coeffs.values()),
                  default=0.0)
    pairing = interior_product(Y, pair.lam).coefficient(())(pts)
    m_lam = float(np.max(np.abs(pairing - 1.0)))
    return m_omega, m_lam


def _default_grid(chart: Chart, n: int = 8) -> SampleGrid:
    return SampleGrid.regular(chart, n)


def reeb_closed_form_beltrami(v: BeltramiForm, variant: str = "normalized",
                              grid: SampleGrid | None = None) -> ReebField:
    """Closed-form Reeb fields of the structures built from a Beltrami form v.

    normalized:   Y = sharp(v) / g^{-1}(v, v) for the pair (star3 v, v);
    unnormalized: Z = sharp(v) for the pair (star3 v, v / g^{-1}(v, v)).
    """
    if variant not in ("normalized", "unnormalized"):
        raise BmkitError("variant must be 'normalized' or 'unnormalized'")
    v.require_nonsingular()
    grid = grid or _default_grid(v.chart)
    omega = hodge_star(v.metric, v.form)
    norm2 = norm_sq_field(v.metric, v.form)
    sharp = metric_sharp(v.metric, v.form)
    if variant == "normalized":
        Y = vector_field(v.chart, {i: c / norm2 for i, c in enumerate(sharp.components)})
        pair = SHSPair(omega, v.form, v.chart)
    else:
        Y = sharp
        lam = v.form * (constant(1.0) / norm2)
        pair = SHSPair(omega, lam, v.chart)
    return ReebField(Y, "shs", normalization_residuals(Y, pair, grid), pair)


def reeb_for_maxwell(M: MaxwellFieldSet, which: str = "Y0", x0: float = 0.0,
                     grid: SampleGrid | None = None) -> ReebField:
    """Reeb field Y0 of (B, e) or Y1 of (D, h) on the slice x0 = const.

    Hard-errors with DegenerateInstantError when the selected 1-form
    (e for Y0, h for Y1) vanishes on the slice, which for the Beltrami-
    Maxwell catalog happens exactly at cos(k x0) = 0 resp. sin(k x0) = 0.
    """
    if which not in ("Y0", "Y1"):
        raise BmkitError("which must be 'Y0' or 'Y1'")
    sl = M.at_time(x0)
    grid = grid or _default_grid(sl.chart)
    lam, omega = (sl.e, sl.B) if which == "Y0" else (sl.h, sl.D)
    norm2 = norm_sq_field(sl.metric, lam)
    norms = norm2(grid.points)
    if float(np.min(norms)) <= 1e-18 or float(np.max(norms)) <= 1e-18:
        raise DegenerateInstantError(
            f"{which}: defining 1-form vanishes at x0 = {x0} "
            f"(min norm^2 = {float(np.min(norms)):.3e})")
    sharp = metric_sharp(sl.metric, lam)
    Y = vector_field(sl.chart, {i: c / norm2 for i, c in enumerate(sharp.components)})
    pair = SHSPair(omega, lam, sl.chart)
    return ReebField(Y, "shs", normalization_residuals(Y, pair, grid), pair)


def reeb_parallel_ratio(M: MaxwellFieldSet, x0: float,
                        grid: SampleGrid | None = None) -> float:
    """max componentwise |Y1 - (f_e / f_h) Y0| on the slice (both must exist)."""
    y0 = reeb_for_maxwell(M, "Y0", x0, grid)
    y1 = reeb_for_maxwell(M, "Y1", x0, grid)
    grid = grid or _default_grid(M.chart3)
    if M.f_e is None or M.f_h is None:
        raise BmkitError("field set does not expose amplitude profiles")
    ratio = M.f_e(x0) / M.f_h(x0)
    diff = y1.Y.evaluate(grid.points) - ratio * y0.Y.evaluate(grid.points)
    return float(np.max(np.abs(diff)))


def field_line_generator(M: MaxwellFieldSet, which: str = "e",
                         x0: float = 0.0) -> VectorField:
    """The unnormalized metric dual sharp(e) or sharp(h) on the slice x0.

    Field lines are integral curves of these vector fields; closure is
    invariant under the (positive) reparameterization relating them to the
    normalized Reeb fields.
    """
    if which not in ("e", "h"):
        raise BmkitError("which must be 'e' or 'h'")
    sl = M.at_time(x0)
    lam = sl.e if which == "e" else sl.h
    return metric_sharp(sl.metric, lam)
