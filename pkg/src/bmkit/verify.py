"""Quantitative verifiers for the geometric structures of Maxwell field sets.

Every check evaluates residuals or nondegeneracy margins over a sample grid
and returns a :class:`CheckReport`.  Conventions:

* residual tolerance: 1e-10 when every involved coefficient has analytic
  partials, 1e-6 in finite-difference mode;
* margins ("nonzero anywhere" conditions) are a sampling proxy: the minimum
  over the grid is compared, after normalizing the input forms to unit max
  coefficient, against a 1e-9 floor, and the worst point is reported as a
  witness;
* reports serialize to a stable JSON dict (schema "bmk-report/1" wraps them).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dfield

import numpy as np

from .catalog import MaxwellFieldSet
from .charts import Chart
from .errors import BmkitError, DegreeError
from .forms import (DifferentialForm, VectorField, exterior_derivative,
                    interior_product, lie_derivative,
                    spatial_exterior_derivative, time_derivative, wedge)
from .metrics import MetricField, hodge_star, spatial_hodge

TOL_RESIDUAL_ANALYTIC = 1e-10
TOL_RESIDUAL_FD = 1e-6
TOL_MARGIN = 1e-9
TOL_AGREEMENT = 1e-8


@dataclass(frozen=True)
class SampleGrid:
    """A batch of chart points used for residual and margin scans."""

    chart: Chart
    points: np.ndarray  # (N, dim)
    spec: dict

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @staticmethod
    def _axis_values(ax, count, bounds):
        if bounds is not None:
            lo, hi = bounds
            return np.linspace(lo, hi, count, endpoint=not ax.is_periodic)
        if ax.is_periodic:
            return np.linspace(0.0, ax.period, count, endpoint=False)
        lo = ax.lo if math.isfinite(ax.lo) else 0.0
        hi = ax.hi if math.isfinite(ax.hi) else 2.0 * math.pi
        return np.linspace(lo, hi, count)

    @classmethod
    def regular(cls, chart: Chart, counts, bounds: dict | None = None) -> "SampleGrid":
        """Regular lattice; periodic axes omit the duplicate endpoint.

        counts: one integer per axis or a single integer for all.
        bounds: optional {axis_index: (lo, hi)} overrides (used to pick a
        window on unbounded axes; the default window is [0, 2pi]).
        """
        if isinstance(counts, int):
            counts = (counts,) * chart.dim
        counts = tuple(int(c) for c in counts)
        if len(counts) != chart.dim or any(c < 2 for c in counts):
            raise BmkitError("grid needs >= 2 points per axis")
        bounds = bounds or {}
        axes_pts = [cls._axis_values(ax, c, bounds.get(i))
                    for i, (ax, c) in enumerate(zip(chart.axes, counts))]
        mesh = np.meshgrid(*axes_pts, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
        return cls(chart, pts, {"kind": "regular", "counts": list(counts),
                                "chart": chart.name})

    @classmethod
    def random(cls, chart: Chart, n: int, seed: int = 0,
               bounds: dict | None = None) -> "SampleGrid":
        """Uniform random points (seeded), same default windows as regular()."""
        rng = np.random.default_rng(seed)
        bounds = bounds or {}
        cols = []
        for i, ax in enumerate(chart.axes):
            if i in bounds:
                lo, hi = bounds[i]
            elif ax.is_periodic:
                lo, hi = 0.0, ax.period
            else:
                lo = ax.lo if math.isfinite(ax.lo) else 0.0
                hi = ax.hi if math.isfinite(ax.hi) else 2.0 * math.pi
            cols.append(rng.uniform(lo, hi, n))
        pts = np.stack(cols, axis=-1)
        return cls(chart, pts, {"kind": "random", "n": int(n), "seed": int(seed),
                                "chart": chart.name})

    def with_time(self, chart4: Chart, x0_values) -> "SampleGrid":
        """Product of this spatial grid with a list of x0 instants."""
        x0_values = np.atleast_1d(np.asarray(x0_values, dtype=float))
        blocks = [np.concatenate([np.full((self.n, 1), t), self.points], axis=1)
                  for t in x0_values]
        pts = np.concatenate(blocks, axis=0)
        return SampleGrid(chart4, pts,
                          {"kind": "product_time", "base": self.spec,
                           "x0": [float(t) for t in x0_values]})


@dataclass
class CheckReport:
    """Outcome of one structure check on one grid."""

    check: str
    passed: bool
    max_residual: float
    min_margin: float | None
    tolerance: dict
    witness: list = dfield(default_factory=list)
    grid: dict = dfield(default_factory=dict)
    details: dict = dfield(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "check": self.check,
            "pass": bool(self.passed),
            "max_residual": float(self.max_residual),
            "min_margin": None if self.min_margin is None else float(self.min_margin),
            "tolerance": self.tolerance,
            "witness": self.witness,
            "grid": self.grid,
            "details": self.details,
        }


# -- helpers -----------------------------------------------------------------


def _max_abs(form: DifferentialForm, pts: np.ndarray):
    """(max |coeff|, witness point). Zero forms report 0 at the first point."""
    table = form.coefficient_table(pts)
    if table.size == 0:
        return 0.0, pts[0].tolist()
    flat = np.abs(table)
    per_point = flat.max(axis=1)
    i = int(np.argmax(per_point))
    return float(per_point[i]), pts[i].tolist()


def _min_abs_coeff(form: DifferentialForm, idx, pts: np.ndarray):
    vals = np.abs(form.coefficient(tuple(idx))(pts))
    i = int(np.argmin(vals))
    return float(vals[i]), pts[i].tolist()


def _mode_tol(*forms: DifferentialForm) -> tuple[str, float]:
    analytic = all(f.has_analytic_partials for f in forms)
    if analytic:
        return "analytic", TOL_RESIDUAL_ANALYTIC
    return "fd", TOL_RESIDUAL_FD


def _vol_index(chart: Chart) -> tuple[int, ...]:
    return tuple(range(chart.dim))


# -- checks -------------------------------------------------------------------


def beltrami_residual(v: DifferentialForm, k: float, g: MetricField,
                      grid: SampleGrid, tol: float | None = None) -> CheckReport:
    """max |star3 d v - k v| over the grid; also reports |star3 d star3 v|."""
    if g.chart.dim != 3 or g.signature != "riemannian":
        raise DegreeError("beltrami_residual needs a 3-d Riemannian metric")
    mode, auto_tol = _mode_tol(v)
    tol = auto_tol if tol is None else tol
    resid = hodge_star(g, exterior_derivative(v)) - float(k) * v
    max_res, witness = _max_abs(resid, grid.points)
    div = hodge_star(g, exterior_derivative(hodge_star(g, v)))
    max_div, _ = _max_abs(div, grid.points)
    return CheckReport(
        "beltrami", max_res <= tol, max_res, None,
        {"residual": tol}, [witness], grid.spec,
        {"k": float(k), "divergence_residual": max_div, "mode": mode})


def maxwell_residuals(M: MaxwellFieldSet, grid4: SampleGrid,
                      tol: float | None = None) -> CheckReport:
    """All four decomposed Maxwell residuals plus the 4-d dF0, dF1 cross-check.

    The decomposed and 4-d residuals are compared coefficient-by-coefficient
    (the 4-d derivative splits as d = d_spatial + dx0 ^ d/dx0), and their
    disagreement is reported and required to stay below 1e-8.
    """
    if grid4.chart.time_axis is None:
        raise DegreeError("maxwell_residuals needs a spacetime grid")
    c0 = M.c0
    mode, auto_tol = _mode_tol(M.e, M.h, M.B, M.D)
    tol = auto_tol if tol is None else tol
    pts = grid4.points

    faraday = spatial_exterior_derivative(M.e) + c0 * time_derivative(M.B)
    gauss_b = spatial_exterior_derivative(M.B)
    gauss_d = spatial_exterior_derivative(M.D)
    ampere = spatial_exterior_derivative(M.h) - c0 * time_derivative(M.D)
    d_f0 = exterior_derivative(M.F0)
    d_f1 = exterior_derivative(M.F1)

    parts = {
        "faraday": _max_abs(faraday, pts),
        "gauss_magnetic": _max_abs(gauss_b, pts),
        "gauss_electric": _max_abs(gauss_d, pts),
        "ampere": _max_abs(ampere, pts),
        "dF0": _max_abs(d_f0, pts),
        "dF1": _max_abs(d_f1, pts),
    }

    # Appendix-style split: dF0 = -(faraday) ^ dx0 - c0 d_spatial B, and
    # dF1 = -(ampere)/c0 ^ dx0 + d_spatial D.  Compare signed coefficients.
    agree = 0.0
    for idx in d_f0.indices:
        if 0 in idx:
            spatial_idx = tuple(i for i in idx if i != 0)
            a = d_f0.coefficient(idx)(pts) + faraday.coefficient(spatial_idx)(pts)
            b = d_f1.coefficient(idx)(pts) + ampere.coefficient(spatial_idx)(pts) / c0
        else:
            a = d_f0.coefficient(idx)(pts) + c0 * gauss_b.coefficient(idx)(pts)
            b = d_f1.coefficient(idx)(pts) - gauss_d.coefficient(idx)(pts)
        agree = max(agree, float(np.max(np.abs(a))), float(np.max(np.abs(b))))

    max_res = max(v for v, _ in parts.values())
    worst = max(parts.items(), key=lambda kv: kv[1][0])
    passed = max_res <= tol and agree <= TOL_AGREEMENT
    return CheckReport(
        "maxwell", passed, max_res, None,
        {"residual": tol, "agreement": TOL_AGREEMENT},
        [worst[1][1]], grid4.spec,
        {"parts": {k: v for k, (v, _) in parts.items()},
         "decomposed_vs_4d": agree, "mode": mode})


def constitutive_residuals(M: MaxwellFieldSet, grid4: SampleGrid,
                           tol: float = 1e-12) -> CheckReport:
    """|D - eps0 *3 e|, |B - mu0 *3 h|, and the 4-d check |F1 + eps0 * F0|."""
    pts = grid4.points
    r_d = M.D - M.eps0 * spatial_hodge(M.metric3, M.e)
    r_b = M.B - M.mu0 * spatial_hodge(M.metric3, M.h)
    r_4d = M.F1 + M.eps0 * hodge_star(M.metric4, M.F0)
    m_d, w_d = _max_abs(r_d, pts)
    m_b, _ = _max_abs(r_b, pts)
    m_4, _ = _max_abs(r_4d, pts)
    max_res = max(m_d, m_b)
    return CheckReport(
        "constitutive", max_res <= tol and m_4 <= 1e-10, max_res, None,
        {"residual": tol, "residual_4d": 1e-10}, [w_d], grid4.spec,
        {"D_vs_star_e": m_d, "B_vs_star_h": m_b, "F1_plus_eps0_star_F0": m_4})


def _numerically_zero(form: DifferentialForm, pts, zero_scale) -> bool:
    """True when the form's grid maximum is round-off dust next to zero_scale.

    Rescaling a field and its reference together leaves this invariant, so
    pass/fail stays scale-covariant; what it catches is a structurally
    time-modulated field sampled at an instant where its amplitude vanishes
    (up to float pi) rather than a genuinely small field.
    """
    if zero_scale is None or zero_scale <= 0.0:
        return False
    return _max_abs(form, pts)[0] <= 1e-12 * zero_scale


def contact_margin(lam: DifferentialForm, grid: SampleGrid,
                   tol_margin: float = TOL_MARGIN,
                   zero_scale: float | None = None) -> CheckReport:
    """min |volume coefficient of lambda ^ d lambda| over the grid.

    The pass criterion uses the margin normalized by max|lambda| max|d lambda|
    so that it is invariant under constant rescaling of lambda.  zero_scale,
    when given, is the global amplitude of the field family lambda was sliced
    from; a lambda that is round-off dust next to it reports margin exactly 0.
    """
    chart = lam.chart
    if chart.dim != 3:
        raise DegreeError("contact_margin works on 3-d forms")
    pts = grid.points
    if _numerically_zero(lam, pts, zero_scale):
        return CheckReport("contact", False, 0.0, 0.0, {"margin": tol_margin},
                           [pts[0].tolist()], grid.spec,
                           {"normalized_margin": 0.0, "degenerate_zero_form": True})
    dlam = exterior_derivative(lam)
    w = wedge(lam, dlam)
    raw, witness = _min_abs_coeff(w, _vol_index(chart), pts)
    scale = _max_abs(lam, pts)[0] * _max_abs(dlam, pts)[0]
    normalized = raw / scale if scale > 0 else 0.0
    return CheckReport(
        "contact", normalized >= tol_margin, 0.0, raw,
        {"margin": tol_margin}, [witness], grid.spec,
        {"normalized_margin": normalized, "scale": scale})


def shs_check(Omega: DifferentialForm, lam: DifferentialForm, grid: SampleGrid,
              tol: float | None = None, tol_margin: float = TOL_MARGIN,
              zero_scales: tuple[float, float] | None = None) -> CheckReport:
    """Stable-Hamiltonian-structure check for a pair (Omega, lambda).

    Reports (a) max |d Omega|, (b) the min |lambda ^ Omega| margin, and
    (c) a pointwise estimate of the proportionality factor in
    d lambda = f * Omega together with the residual of that relation.
    Points where max|Omega| falls below 1e-8 of its grid maximum are
    flagged as ill-posed for the estimate and excluded from the f statistics.
    zero_scales = (scale_Omega, scale_lambda) are global field amplitudes;
    a member that is round-off dust next to its scale fails with margin 0.
    """
    chart = lam.chart
    if chart.dim != 3:
        raise DegreeError("shs_check works on 3-d forms")
    pts = grid.points
    mode, auto_tol = _mode_tol(Omega, lam)
    tol = auto_tol if tol is None else tol
    if zero_scales is not None and (
            _numerically_zero(Omega, pts, zero_scales[0])
            or _numerically_zero(lam, pts, zero_scales[1])):
        return CheckReport("shs", False, 0.0, 0.0,
                           {"residual": tol, "margin": tol_margin},
                           [pts[0].tolist()], grid.spec,
                           {"normalized_margin": 0.0, "degenerate_zero_form": True})

    d_omega = exterior_derivative(Omega)
    closure, _ = _max_abs(d_omega, pts)

    pairing = wedge(lam, Omega)
    raw_margin, w_margin = _min_abs_coeff(pairing, _vol_index(chart), pts)
    scale = _max_abs(lam, pts)[0] * _max_abs(Omega, pts)[0]
    normalized = raw_margin / scale if scale > 0 else 0.0

    dlam = exterior_derivative(lam)
    omega_tab = Omega.coefficient_table(pts)
    dlam_tab = dlam.coefficient_table(pts)
    omega_max = np.max(np.abs(omega_tab), axis=1)
    global_max = float(np.max(omega_max)) if omega_max.size else 0.0
    well_posed = omega_max > 1e-8 * max(global_max, 1e-300)
    pick = np.argmax(np.abs(omega_tab), axis=1)
    rows = np.arange(len(pts))
    with np.errstate(divide="ignore", invalid="ignore"):
        f_est = dlam_tab[rows, pick] / omega_tab[rows, pick]
    f_vals = f_est[well_posed]
    resid = dlam_tab - f_est[:, None] * omega_tab
    resid[~well_posed] = 0.0
    prop_resid = float(np.max(np.abs(resid))) if resid.size else 0.0

    details = {
        "closure_residual": closure,
        "proportionality_residual": prop_resid,
        "normalized_margin": normalized,
        "mode": mode,
        "n_illposed": int(np.sum(~well_posed)),
    }
    if f_vals.size:
        details["f_mean"] = float(np.mean(f_vals))
        details["f_min"] = float(np.min(f_vals))
        details["f_max"] = float(np.max(f_vals))
        details["f_spread"] = float(np.max(f_vals) - np.min(f_vals))
    resid_scale = max(1.0, _max_abs(dlam, pts)[0])
    passed = (closure <= tol and normalized >= tol_margin
              and prop_resid <= tol * resid_scale and not np.any(~well_posed))
    return CheckReport("shs", passed, max(closure, prop_resid), raw_margin,
                       {"residual": tol, "margin": tol_margin},
                       [w_margin], grid.spec, details)


def symplectic_margin(F: DifferentialForm, grid4: SampleGrid,
                      companion: tuple[DifferentialForm, DifferentialForm] | None = None,
                      tol: float | None = None,
                      tol_margin: float = TOL_MARGIN, label: str = "F") -> CheckReport:
    """min |F ^ F| and max |dF| on a 4-d grid (plus a 2-form ^ 1-form margin).

    companion, when given, is the (two-form, one-form) pair whose 3-form
    product margin (B ^ e for F0, D ^ h for F1) is reported alongside.
    """
    chart = F.chart
    if chart.dim != 4:
        raise DegreeError("symplectic_margin works on 4-d 2-forms")
    pts = grid4.points
    mode, auto_tol = _mode_tol(F)
    tol = auto_tol if tol is None else tol
    ff = wedge(F, F)
    raw, witness = _min_abs_coeff(ff, _vol_index(chart), pts)
    f_max = _max_abs(F, pts)[0]
    normalized = raw / (f_max * f_max) if f_max > 0 else 0.0
    d_f = exterior_derivative(F)
    closure, _ = _max_abs(d_f, pts)
    details = {"normalized_margin": normalized, "closure_residual": closure,
               "mode": mode}
    if companion is not None:
        two, one = companion
        prod = wedge(two, one)
        spatial_vol = tuple(i for i in range(chart.dim) if i != chart.time_axis)
        m3, _ = _min_abs_coeff(prod, spatial_vol, pts)
        details["companion_margin"] = m3
    passed = normalized >= tol_margin and closure <= tol
    return CheckReport(f"symplectic_{label}", passed, closure, raw,
                       {"residual": tol, "margin": tol_margin},
                       [witness], grid4.spec, details)


def poynting_form(M: MaxwellFieldSet) -> DifferentialForm:
    """The Poynting 2-form e ^ h."""
    return wedge(M.e, M.h)


def parallel_check(M: MaxwellFieldSet, grid4: SampleGrid,
                   tol: float | None = None) -> CheckReport:
    """max |e ^ h| over the grid; passes when the fields are parallel."""
    pts = grid4.points
    mode, auto_tol = _mode_tol(M.e, M.h)
    tol = auto_tol if tol is None else tol
    s = poynting_form(M)
    max_res, witness = _max_abs(s, pts)
    scale = max(1.0, _max_abs(M.e, pts)[0] * _max_abs(M.h, pts)[0])
    return CheckReport("parallel", max_res <= tol * scale, max_res, None,
                       {"residual": tol}, [witness], grid4.spec,
                       {"mode": mode, "scale": scale})


def energy_forms(M: MaxwellFieldSet) -> tuple[DifferentialForm, DifferentialForm]:
    """Vacuum energy 3-forms; the media variants (e^D/2, h^B/2) coincide in vacuo."""
    return M.energy_forms()


def conservation_along(Y: VectorField, forms, grid: SampleGrid, names=None,
                       mode: str = "fd", tol: float | None = None) -> CheckReport:
    """max coefficient of L_Y(form) over the grid, per form.

    Lie derivatives use the Cartan formula; mode="fd" forces finite-difference
    coefficient partials (the independent evaluation path), mode="auto" uses
    analytic partials when available.
    """
    forms = list(forms)
    names = list(names) if names is not None else [f"form{i}" for i in range(len(forms))]
    tol = (TOL_RESIDUAL_FD if mode == "fd" else TOL_RESIDUAL_ANALYTIC) if tol is None else tol
    per = {}
    worst = (0.0, grid.points[0].tolist())
    for name, f in zip(names, forms):
        lf = lie_derivative(Y, f, mode=mode)
        m, w = _max_abs(lf, grid.points)
        per[name] = m
        if m >= worst[0]:
            worst = (m, w)
    return CheckReport("conservation", worst[0] <= tol, worst[0], None,
                       {"residual": tol}, [worst[1]], grid.spec,
                       {"per_form": per, "mode": mode})


def reeb_like_check(Z: VectorField, lam: DifferentialForm, grid: SampleGrid,
                    tol: float | None = None,
                    tol_margin: float = TOL_MARGIN) -> CheckReport:
    """max |i_Z d lambda| and min i_Z lambda over the grid (Reeb-like conditions)."""
    pts = grid.points
    mode, auto_tol = _mode_tol(lam)
    tol = auto_tol if tol is None else tol
    dlam = exterior_derivative(lam)
    contracted = interior_product(Z, dlam)
    max_res, w_res = _max_abs(contracted, pts)
    pairing = interior_product(Z, lam).coefficient(())(pts)
    i = int(np.argmin(pairing))
    min_pair = float(pairing[i])
    passed = max_res <= tol and min_pair > tol_margin
    return CheckReport("reeb_like", passed, max_res, min_pair,
                       {"residual": tol, "margin": tol_margin},
                       [w_res, pts[i].tolist()], grid.spec, {"mode": mode})
