"""Field-line integration, closed-orbit detection, and seed surveys.

Fixed-step classical RK4 keeps traces reproducible and makes the
forward-backward reversibility and step-halving order checks exact
statements about the integrator.  Trajectories are integrated in unwrapped
coordinates (fields are evaluated at wrapped points), so winding numbers on
periodic axes fall out of plain coordinate differences.

Closure detection scans a trace for returns to its seed in the minimal-image
chart distance, then sharpens each candidate with a golden-section
minimization of the distance along re-integrated sub-steps.  A survey that
finds no return only ever reports "none found within budget": absence of a
numerical witness decides nothing.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .charts import Chart
from .errors import BmkitError
from .forms import VectorField

NONE_FOUND = "none found within budget"
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class OrbitTrace:
    """Samples of one integral curve, in unwrapped coordinates."""

    chart: Chart
    seed: np.ndarray
    step: float
    samples: np.ndarray  # (m, dim), samples[0] == seed
    s: np.ndarray        # (m,) curve parameter values
    status: str          # "completed" | "exited_domain"
    speed_min: float
    speed_max: float

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    def wrapped(self) -> np.ndarray:
        return self.chart.wrap(self.samples)

    def winding(self) -> np.ndarray:
        """Net winding numbers of the full trace, per axis."""
        return self.chart.winding(self.samples[-1], self.samples[0])


@dataclass(frozen=True)
class ClosureResult:
    """Outcome of closed-orbit detection on one trace."""

    closed: bool
    period_estimate: float
    return_distance: float
    winding: tuple[int, ...]
    method: str = "recurrence"
    note: str = ""

    def to_json_dict(self) -> dict:
        return {
            "closed": bool(self.closed),
            "period_estimate": float(self.period_estimate) if self.closed else None,
            "return_distance": float(self.return_distance),
            "winding": list(self.winding),
            "method": self.method,
            "note": self.note,
        }


def _rk4_stages(Y: VectorField, state: np.ndarray, step: float):
    chart = Y.chart

    def f(p):
        return Y.evaluate(chart.wrap(p))

    k1 = f(state)
    k2 = f(state + 0.5 * step * k1)
    k3 = f(state + 0.5 * step * k2)
    k4 = f(state + step * k3)
    return state + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4), k1


def integrate_batch(Y: VectorField, seeds: np.ndarray, step: float, n_steps: int):
    """RK4-integrate several seeds in lockstep.

    Returns (samples (n_steps+1, N, dim) with NaN after exit, lengths (N,),
    statuses).  A trajectory stops when its next state would leave an
    interval axis; the offending step is not committed.
    """
    chart = Y.chart
    seeds = chart.as_points(seeds)
    if step <= 0:
        raise BmkitError("step must be > 0")
    n = seeds.shape[0]
    samples = np.full((n_steps + 1, n, chart.dim), np.nan)
    samples[0] = seeds
    lengths = np.full(n, n_steps + 1, dtype=int)
    active = np.arange(n)
    state = seeds.copy()
    for i in range(1, n_steps + 1):
        if active.size == 0:
            break
        new_state, _ = _rk4_stages(Y, state, step)
        inside = chart.contains(new_state)
        if not np.all(inside):
            lengths[active[~inside]] = i
            active = active[inside]
            state = new_state[inside]
        else:
            state = new_state
        samples[i, active] = state
    statuses = ["completed" if lengths[j] == n_steps + 1 else "exited_domain"
                for j in range(n)]
    return samples, lengths, statuses


def integrate(Y: VectorField, seed, step: float, n_steps: int) -> OrbitTrace:
    """Trace one field line with fixed-step RK4."""
    chart = Y.chart
    seed = chart.as_points(seed)[0]
    samples, lengths, statuses = integrate_batch(Y, seed[None, :], step, n_steps)
    m = int(lengths[0])
    traj = samples[:m, 0, :]
    speeds = np.linalg.norm(Y.evaluate(chart.wrap(traj)), axis=-1)
    return OrbitTrace(chart, seed, step, traj, step * np.arange(m),
                      statuses[0], float(np.min(speeds)), float(np.max(speeds)))


def _position_at(Y: VectorField, base: np.ndarray, ds: float, step: float) -> np.ndarray:
    """Advance a single unwrapped state by parameter ds with RK4 sub-steps <= step."""
    if ds == 0.0:
        return base.copy()
    n = max(1, int(math.ceil(abs(ds) / step)))
    h = ds / n
    state = base[None, :].copy()
    for _ in range(n):
        state, _ = _rk4_stages(Y, state, h)
    return state[0]


def _refine_return(Y: VectorField, trace: OrbitTrace, j: int, tol: float):
    """Golden-section minimize the seed distance over [s_{j-1}, s_{j+1}]."""
    chart = trace.chart
    seed = trace.samples[0]
    base = trace.samples[j - 1]
    s_lo = trace.s[j - 1]
    s_hi = trace.s[min(j + 1, trace.n_samples - 1)]
    if s_hi <= s_lo:
        s_hi = s_lo + trace.step

    def dist(s):
        x = _position_at(Y, base, s - s_lo, trace.step)
        return float(chart.distance(x, seed)), x

    a, b = s_lo, s_hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, _ = dist(c)
    fd, _ = dist(d)
    for _ in range(60):
        if b - a < 1e-13 * max(1.0, abs(b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc, _ = dist(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd, _ = dist(d)
    s_star = 0.5 * (a + b)
    f_star, x_star = dist(s_star)
    return s_star, f_star, x_star


def detect_closure(trace: OrbitTrace, tol: float = 1e-5,
                   Y: VectorField | None = None) -> ClosureResult:
    """Scan a trace for a return to its seed within tol (chart distance).

    The first candidate with refined return distance < tol and parameter
    > 10 * step wins; its per-axis winding numbers certify closure on tori.
    Y re-integrates sub-steps during refinement; omit it to accept the
    sampled minimum without refinement.
    """
    if trace.n_samples < 100:
        raise BmkitError("detect_closure needs at least 100 samples")
    chart = trace.chart
    seed = trace.samples[0]
    if trace.speed_max <= 1e-14:
        return ClosureResult(False, math.nan, 0.0,
                             tuple(0 for _ in range(chart.dim)),
                             note="stationary point")
    d = chart.distance(trace.samples, seed)
    min_period = 10.0 * trace.step
    coarse = max(tol, 1.5 * trace.step * trace.speed_max)
    best_dist = math.inf
    m = trace.n_samples
    candidates = []
    for j in range(1, m - 1):
        if trace.s[j] <= min_period:
            continue
        if d[j] <= coarse and d[j] <= d[j - 1] and d[j] <= d[j + 1]:
            candidates.append(j)
    for j in candidates:
        if Y is not None:
            s_star, dist_star, x_star = _refine_return(Y, trace, j, tol)
        else:
            s_star, dist_star, x_star = trace.s[j], float(d[j]), trace.samples[j]
        best_dist = min(best_dist, dist_star)
        if dist_star < tol and s_star > min_period:
            winding = tuple(int(w) for w in chart.winding(x_star, seed))
            return ClosureResult(True, float(s_star), float(dist_star), winding)
    eligible = d[trace.s > min_period]
    sampled_min = float(np.min(eligible)) if eligible.size else math.inf
    best = best_dist if best_dist < math.inf else sampled_min
    return ClosureResult(False, math.nan, best,
                         tuple(0 for _ in range(chart.dim)), note=NONE_FOUND)


# -- surveys -------------------------------------------------------------------


@dataclass(frozen=True)
class SurveyResult:
    """Per-seed closure results plus deduplicated orbit statistics."""

    seeds: np.ndarray
    results: list[ClosureResult]
    traces: list[OrbitTrace] = field(repr=False, default_factory=list)
    unique_orbits: list[int] = field(default_factory=list)  # representative seed indices
    params: dict = field(default_factory=dict)

    @property
    def n_closed(self) -> int:
        return sum(1 for r in self.results if r.closed)

    @property
    def fraction_closed(self) -> float:
        return self.n_closed / len(self.results) if self.results else 0.0

    @property
    def periods(self) -> list[float]:
        return [r.period_estimate for r in self.results if r.closed]

    def to_json_dict(self) -> dict:
        witnesses = [
            {"seed": list(map(float, s)), "period": r.period_estimate,
             "winding": list(r.winding), "return_distance": r.return_distance}
            for s, r in zip(self.seeds, self.results) if r.closed]
        return {
            "params": self.params,
            "seeds": [list(map(float, s)) for s in self.seeds],
            "results": [r.to_json_dict() for r in self.results],
            "closed_count": self.n_closed,
            "fraction_closed": self.fraction_closed,
            "unique_orbits": list(self.unique_orbits),
            "periods": self.periods,
            "witnesses": witnesses,
        }


def _orbit_point_set(trace: OrbitTrace, result: ClosureResult, cap: int = 256) -> np.ndarray:
    """Unwrapped samples over one period, subsampled for curve comparisons."""
    if result.closed and math.isfinite(result.period_estimate):
        m = min(trace.n_samples, int(result.period_estimate / trace.step) + 2)
    else:
        m = trace.n_samples
    pts = trace.samples[:m]
    if len(pts) > cap:
        pts = pts[np.linspace(0, len(pts) - 1, cap).astype(int)]
    return pts


def _points_to_polyline(chart: Chart, pts: np.ndarray, line: np.ndarray) -> float:
    """sup over pts of the minimal-image distance to the sampled polyline.

    Each point is shifted to its nearest periodic image of the segment start
    before projecting, which is exact for segments much shorter than the
    periods (RK4 steps are).
    """
    seg_a = line[:-1]
    seg_v = line[1:] - seg_a
    delta = pts[:, None, :] - seg_a[None, :, :]
    for i, ax in enumerate(chart.axes):
        if ax.is_periodic:
            delta[..., i] = (delta[..., i] + 0.5 * ax.period) % ax.period - 0.5 * ax.period
    vv = np.einsum("sd,sd->s", seg_v, seg_v)
    vv = np.where(vv > 0, vv, 1.0)
    t = np.clip(np.einsum("psd,sd->ps", delta, seg_v) / vv, 0.0, 1.0)
    closest = delta - t[..., None] * seg_v[None, :, :]
    d = np.linalg.norm(closest, axis=-1)
    return float(d.min(axis=1).max())


def _same_orbit(chart: Chart, a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    """Curves coincide: symmetric point-to-polyline distance below tol."""
    return (_points_to_polyline(chart, a, b) < tol
            and _points_to_polyline(chart, b, a) < tol)


def _worker_count() -> int:
    env = os.environ.get("BMK_THREADS", "")
    if env.strip():
        try:
            return max(1, int(env))
        except ValueError:
            raise BmkitError(f"BMK_THREADS must be an integer, got {env!r}")
    return 1


def closed_orbit_survey(Y: VectorField, seeds, step: float, s_max: float,
                        tol: float = 1e-5, threads: int | None = None) -> SurveyResult:
    """Integrate every seed, detect closures, and deduplicate coinciding orbits.

    Seeds may be a SampleGrid or an (N, dim) array.  Results are ordered by
    seed index regardless of the worker count (BMK_THREADS caps workers when
    threads is None).  Failures to find a return are reported as
    "none found within budget", never as nonexistence.
    """
    chart = Y.chart
    pts = getattr(seeds, "points", seeds)
    pts = chart.as_points(pts)
    n_steps = max(100, int(math.ceil(s_max / step)))
    threads = _worker_count() if threads is None else max(1, threads)

    def run_chunk(idx):
        samples, lengths, statuses = integrate_batch(Y, pts[idx], step, n_steps)
        out = []
        for col, j in enumerate(idx):
            m = int(lengths[col])
            traj = samples[:m, col, :]
            speeds = np.linalg.norm(Y.evaluate(chart.wrap(traj)), axis=-1)
            trace = OrbitTrace(chart, pts[j], step, traj, step * np.arange(m),
                               statuses[col], float(speeds.min()), float(speeds.max()))
            result = (detect_closure(trace, tol, Y) if m >= 100 else
                      ClosureResult(False, math.nan, math.inf,
                                    tuple(0 for _ in range(chart.dim)),
                                    note="trace too short: " + statuses[col]))
            out.append((j, trace, result))
        return out

    indices = np.arange(len(pts))
    if threads > 1 and len(pts) > 1:
        chunks = np.array_split(indices, threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run_chunk, [c for c in chunks if len(c)]))
        flat = [item for part in parts for item in part]
    else:
        flat = run_chunk(indices)
    flat.sort(key=lambda t: t[0])
    traces = [t for _, t, _ in flat]
    results = [r for _, _, r in flat]

    # Deduplicate closed orbits whose sampled curves coincide within 2 * tol.
    reps: list[int] = []
    rep_sets: list[np.ndarray] = []
    for j, (trace, result) in enumerate(zip(traces, results)):
        if not result.closed:
            continue
        pset = _orbit_point_set(trace, result)
        for rep_i, rset in zip(reps, rep_sets):
            if _same_orbit(chart, pset, rset, 2.0 * tol):
                break
        else:
            reps.append(j)
            rep_sets.append(pset)

    return SurveyResult(pts, results, traces, reps,
                        {"step": step, "s_max": s_max, "tol": tol,
                         "n_seeds": int(len(pts))})


# -- Poincare sections ----------------------------------------------------------


@dataclass(frozen=True)
class CrossingSequence:
    """Ordered crossings of one trajectory through a coordinate plane."""

    seed: np.ndarray
    s_values: np.ndarray
    points: np.ndarray  # wrapped crossing points, (m, dim)
    directions: np.ndarray  # +1 / -1
    transversality: np.ndarray  # |Y . normal| at each crossing
    warnings: list[str]


def _section_delta(chart: Chart, coords: np.ndarray, axis: int, value: float) -> np.ndarray:
    u = coords - value
    ax = chart.axes[axis]
    if ax.is_periodic:
        u = (u + 0.5 * ax.period) % ax.period - 0.5 * ax.period
    return u


def poincare_section(Y: VectorField, axis: int, value: float, seeds,
                     s_max: float, step: float = 1e-2,
                     transversality_tol: float = 1e-8) -> list[CrossingSequence]:
    """Crossings of trajectories through the plane x_axis = value.

    Crossing parameters come from linear interpolation sharpened by one
    secant step; each crossing records its direction and |Y^axis| there.
    Tangential crossings (|Y^axis| < tol) are kept but flagged.
    """
    chart = Y.chart
    pts = getattr(seeds, "points", seeds)
    pts = chart.as_points(pts)
    n_steps = int(math.ceil(s_max / step))
    out = []
    for seed in pts:
        trace = integrate(Y, seed, step, n_steps)
        u = _section_delta(chart, trace.samples[:, axis], axis, value)
        cross = np.where((u[:-1] * u[1:] < 0)
                         & (np.abs(u[1:] - u[:-1]) < 0.45 * _axis_span(chart, axis)))[0]
        s_list, x_list, dir_list, trans_list, warns = [], [], [], [], []
        for i in cross:
            s1, f1 = trace.s[i], u[i]
            f2 = u[i + 1]
            s_lin = s1 + trace.step * f1 / (f1 - f2)
            x_lin = _position_at(Y, trace.samples[i], s_lin - s1, step)
            f_lin = float(_section_delta(chart, np.atleast_1d(x_lin[axis]), axis, value)[0])
            if f_lin != f1:
                s_ref = s_lin - f_lin * (s_lin - s1) / (f_lin - f1)
            else:
                s_ref = s_lin
            x_ref = _position_at(Y, trace.samples[i], s_ref - s1, step)
            y_axis = float(Y.evaluate(chart.wrap(x_ref[None, :]))[0, axis])
            if abs(y_axis) < transversality_tol:
                warns.append(f"tangential crossing at s = {s_ref:.6g}")
            s_list.append(s_ref)
            x_list.append(chart.wrap(x_ref))
            dir_list.append(1.0 if f2 > f1 else -1.0)
            trans_list.append(abs(y_axis))
        out.append(CrossingSequence(
            seed, np.array(s_list),
            np.array(x_list) if x_list else np.zeros((0, chart.dim)),
            np.array(dir_list), np.array(trans_list), warns))
    return out


def _axis_span(chart: Chart, axis: int) -> float:
    ax = chart.axes[axis]
    if ax.is_periodic:
        return ax.period
    return math.inf


# -- export ---------------------------------------------------------------------


def write_orbit_csv(trace: OrbitTrace, path: str) -> None:
    """Orbit CSV: s, wrapped coordinates, completed-wrap counters per periodic axis."""
    chart = trace.chart
    wrapped = trace.wrapped()
    periodic = [i for i, ax in enumerate(chart.axes) if ax.is_periodic]
    displacement = trace.samples - trace.samples[0]
    wraps = {i: np.floor(displacement[:, i] / chart.axes[i].period).astype(int)
             for i in periodic}
    header = ["s"] + list(chart.labels) + [f"wind_{chart.labels[i]}" for i in periodic]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(trace.n_samples):
            row = ([f"{trace.s[i]:.12g}"]
                   + [f"{x:.12g}" for x in wrapped[i]]
                   + [str(int(wraps[j][i])) for j in periodic])
            writer.writerow(row)


def write_vector_field_csv(Y: VectorField, pts: np.ndarray, path: str) -> None:
    """Sampled component table: coordinates then components, one row per point."""
    chart = Y.chart
    pts = chart.as_points(pts)
    values = Y.evaluate(pts)
    header = list(chart.labels) + [f"Y_{lab}" for lab in chart.labels]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for p, v in zip(pts, values):
            writer.writerow([f"{x:.12g}" for x in p] + [f"{x:.12g}" for x in v])
