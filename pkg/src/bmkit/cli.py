"""Command-line front end.

Subcommands: ``catalog`` (list buildable fields), ``verify`` (run structure
checks, write a JSON report), ``reeb`` (sample a Reeb field to CSV),
``trace`` (integrate field lines, write orbit CSVs), ``survey``
(closed-orbit search over a seed grid, JSON summary).

Exit codes: 0 all requested checks passed (or informational command),
1 at least one check failed, 2 configuration/usage error.  Human-readable
summaries go to stderr; stdout stays silent unless --stdout-json.
Reports use the "bmk-report/1" schema and are byte-deterministic for a
fixed config when --no-meta strips versions and timings.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .catalog import (CATALOG, BeltramiForm, MaxwellFieldSet, NONDIMENSIONAL,
                      SI, build_catalog_field)
from .errors import BmkitError, ConfigError, DegenerateInstantError
from .metrics import hodge_star, metric_sharp
from .orbits import closed_orbit_survey, detect_closure, integrate, write_orbit_csv, \
    write_vector_field_csv
from .reeb import reeb_closed_form_beltrami, reeb_for_maxwell
from .verify import (SampleGrid, beltrami_residual, conservation_along,
                     constitutive_residuals, contact_margin, maxwell_residuals,
                     parallel_check, shs_check, symplectic_margin)

SCHEMA = "bmk-report/1"

MAXWELL_CHECKS = ("maxwell", "constitutive", "parallel", "symplectic_f0",
                  "symplectic_f1", "contact_e", "contact_h", "shs_be", "shs_dh",
                  "conservation_y0", "conservation_y1", "beltrami")
BELTRAMI_CHECKS = ("beltrami", "contact", "shs")


# -- field spec micro-syntax: name{key=value,...} ------------------------------


def parse_field_spec(text: str):
    """Parse ``name{key=value,...}`` with nested specs; returns (name, params)."""
    text = text.strip()
    spec, pos = _parse_spec(text, 0)
    if pos != len(text):
        raise ConfigError(f"trailing characters in field spec: {text[pos:]!r}")
    return spec


def _parse_word(text, pos):
    start = pos
    while pos < len(text) and (text[pos].isalnum() or text[pos] in "_.+-"):
        pos += 1
    if start == pos:
        raise ConfigError(f"expected a name at position {pos} of {text!r}")
    return text[start:pos], pos


def _parse_spec(text, pos):
    name, pos = _parse_word(text, pos)
    params = {}
    if pos < len(text) and text[pos] == "{":
        pos += 1
        while True:
            if pos >= len(text):
                raise ConfigError(f"unterminated '{{' in field spec {text!r}")
            if text[pos] == "}":
                pos += 1
                break
            key, pos = _parse_word(text, pos)
            if pos >= len(text) or text[pos] != "=":
                raise ConfigError(f"expected '=' after {key!r} in {text!r}")
            pos += 1
            word, after = _parse_word(text, pos)
            if after < len(text) and text[after] == "{":
                value, pos = _parse_spec(text, pos)
            else:
                value, pos = _coerce_value(word), after
            params[key] = value
            if pos < len(text) and text[pos] == ",":
                pos += 1
    return (name, params), pos


def _coerce_value(word: str):
    try:
        return int(word)
    except ValueError:
        pass
    try:
        return float(word)
    except ValueError:
        pass
    return word


def build_field(spec_text: str, constants):
    name, params = parse_field_spec(spec_text)
    return build_catalog_field(name, params, constants)


# -- verify orchestration --------------------------------------------------------


def _parse_counts(text: str, dim: int) -> tuple[int, ...]:
    parts = [p for p in text.split(",") if p.strip()]
    try:
        counts = tuple(int(p) for p in parts)
    except ValueError:
        raise ConfigError(f"bad grid spec {text!r}")
    if len(counts) == 1:
        counts = counts * dim
    if len(counts) != dim:
        raise ConfigError(f"grid spec {text!r} needs 1 or {dim} counts")
    if any(c < 2 for c in counts):
        raise ConfigError("grid counts must be >= 2")
    return counts


def _applicable_checks(target) -> tuple[str, ...]:
    if isinstance(target, BeltramiForm):
        return BELTRAMI_CHECKS
    checks = [c for c in MAXWELL_CHECKS if c != "beltrami" or target.base is not None]
    return tuple(checks)


def _run_verify(args) -> int:
    constants = SI if args.constants == "si" else NONDIMENSIONAL
    target = build_field(args.field, constants)
    requested = _applicable_checks(target) if args.checks == ["all"] else tuple(args.checks)
    for c in requested:
        if c not in _applicable_checks(target):
            raise ConfigError(
                f"check {c!r} not applicable to {args.field!r}; "
                f"choose from {', '.join(_applicable_checks(target))} or 'all'")
    x0_list = [float(x) for x in args.x0] or [0.25 * math.pi]

    reports = []
    skipped = []

    if isinstance(target, BeltramiForm):
        grid = SampleGrid.regular(target.chart, _parse_counts(args.grid, 3))
        if "beltrami" in requested:
            reports.append(beltrami_residual(target.form, target.k_expected,
                                             target.metric, grid))
        if "contact" in requested:
            reports.append(contact_margin(target.form, grid))
        if "shs" in requested:
            omega = hodge_star(target.metric, target.form)
            reports.append(shs_check(omega, target.form, grid))
    else:
        reports.extend(_run_maxwell_checks(
            target, requested, x0_list, args, skipped))

    failed = [r for r in reports if not r.passed]
    report = {
        "schema": SCHEMA,
        "command": "verify",
        "config": {
            "field": args.field,
            "x0": x0_list,
            "grid": args.grid,
            "tgrid": args.tgrid,
            "t_window": args.t_window,
            "checks": list(requested),
            "constants": args.constants,
        },
        "checks": [r.to_json_dict() for r in reports],
        "skipped": skipped,
        "summary": {
            "n_checks": len(reports),
            "n_passed": len(reports) - len(failed),
            "n_failed": len(failed),
            "n_skipped": len(skipped),
        },
    }
    _emit(args, report)
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] {r.check}: max_residual={r.max_residual:.3e}"
              + (f" min_margin={r.min_margin:.3e}" if r.min_margin is not None else ""),
              file=sys.stderr)
    for s in skipped:
        print(f"[SKIP] {s['check']}: {s['reason']}", file=sys.stderr)
    return 1 if failed else 0


def _run_maxwell_checks(M: MaxwellFieldSet, requested, x0_list, args, skipped):
    reports = []
    counts3 = _parse_counts(args.grid, 3)
    grid3 = SampleGrid.regular(M.chart3, counts3)
    w = args.t_window
    t_values = np.unique(np.concatenate(
        [np.linspace(x0 - w, x0 + w, args.tgrid) for x0 in x0_list]))
    grid4 = grid3.with_time(M.chart4, t_values)

    if "maxwell" in requested:
        reports.append(maxwell_residuals(M, grid4))
    if "constitutive" in requested:
        reports.append(constitutive_residuals(M, grid4))
    if "parallel" in requested:
        reports.append(parallel_check(M, grid4))
    if "symplectic_f0" in requested:
        reports.append(symplectic_margin(M.F0, grid4, companion=(M.B, M.e), label="F0"))
    if "symplectic_f1" in requested:
        reports.append(symplectic_margin(M.F1, grid4, companion=(M.D, M.h), label="F1"))
    if "beltrami" in requested and M.base is not None:
        bgrid = SampleGrid.regular(M.base.chart, counts3)
        reports.append(beltrami_residual(M.base.form, M.base.k_expected,
                                         M.base.metric, bgrid))

    # Global field amplitudes over the window; slice checks use them to tell a
    # degenerate instant (field numerically zero) from a genuinely small field.
    scales = {name: form.max_abs(grid4.points)
              for name, form in (("e", M.e), ("h", M.h), ("B", M.B), ("D", M.D))}

    for x0 in x0_list:
        sl = M.at_time(x0)
        tag = f"@x0={x0:.6g}"
        if "contact_e" in requested:
            r = contact_margin(sl.e, grid3, zero_scale=scales["e"])
            r.check = f"contact_e{tag}"
            reports.append(r)
        if "contact_h" in requested:
            r = contact_margin(sl.h, grid3, zero_scale=scales["h"])
            r.check = f"contact_h{tag}"
            reports.append(r)
        if "shs_be" in requested:
            r = shs_check(sl.B, sl.e, grid3, zero_scales=(scales["B"], scales["e"]))
            r.check = f"shs_be{tag}"
            reports.append(r)
        if "shs_dh" in requested:
            r = shs_check(sl.D, sl.h, grid3, zero_scales=(scales["D"], scales["h"]))
            r.check = f"shs_dh{tag}"
            reports.append(r)
        for name, which, forms in (("conservation_y0", "Y0", "eB"),
                                   ("conservation_y1", "Y1", "hD")):
            if name not in requested:
                continue
            try:
                rb = reeb_for_maxwell(M, which, x0, grid3)
            except DegenerateInstantError as exc:
                if not args.allow_degenerate:
                    raise ConfigError(
                        f"{name}{tag}: {exc} (pass --allow-degenerate to skip)")
                skipped.append({"check": f"{name}{tag}", "reason": str(exc)})
                continue
            ee, eh = sl.energy_forms()
            flist = [sl.e, sl.B, ee, eh] if forms == "eB" else [sl.h, sl.D, ee, eh]
            fnames = (["e", "B", "E_e", "E_h"] if forms == "eB"
                      else ["h", "D", "E_e", "E_h"])
            r = conservation_along(rb.Y, flist, grid3, fnames)
            r.check = f"{name}{tag}"
            reports.append(r)
    return reports


# -- other commands ----------------------------------------------------------------


def _run_catalog(args) -> int:
    entries = []
    for name in sorted(CATALOG):
        e = CATALOG[name]
        entries.append({
            "name": e.name,
            "kind": e.kind,
            "identity": e.identity,
            "summary": e.summary,
            "params": {p: {"type": t, "default": d} for p, (t, d) in e.params.items()},
        })
    if args.json:
        print(json.dumps({"schema": SCHEMA, "catalog": entries},
                         indent=2, sort_keys=True))
    else:
        for e in entries:
            params = ", ".join(f"{p}={spec['default']}" for p, spec in e["params"].items())
            print(f"{e['name']}({params})")
            print(f"    {e['summary']}")
            print(f"    identity: {e['identity']}")
    return 0


def _field_line_vector(target, which: str, x0: float):
    if isinstance(target, BeltramiForm):
        return metric_sharp(target.metric, target.form), target.chart
    sl = target.at_time(x0)
    lam = sl.e if which == "e" else sl.h
    return metric_sharp(sl.metric, lam), sl.chart


def _parse_seeds(args, chart):
    if args.seeds:
        rows = []
        for block in args.seeds.split(";"):
            block = block.strip()
            if not block:
                continue
            try:
                row = [float(x) for x in block.split(",")]
            except ValueError:
                raise ConfigError(f"malformed seed {block!r}")
            if len(row) != chart.dim:
                raise ConfigError(
                    f"seed {block!r} has {len(row)} coordinates, chart needs {chart.dim}")
            rows.append(row)
        if not rows:
            raise ConfigError("empty seed list")
        return np.array(rows)
    counts = _parse_counts(args.seed_grid, chart.dim)
    return SampleGrid.regular(chart, counts).points


def _run_trace(args) -> int:
    constants = SI if args.constants == "si" else NONDIMENSIONAL
    target = build_field(args.field, constants)
    Y, chart = _field_line_vector(target, args.which, args.x0)
    seeds = _parse_seeds(args, chart)
    n_steps = max(100, int(math.ceil(args.s_max / args.step)))
    results = []
    for i, seed in enumerate(seeds):
        trace = integrate(Y, seed, args.step, n_steps)
        closure = detect_closure(trace, args.tol, Y) if trace.n_samples >= 100 else None
        if args.out_prefix:
            path = f"{args.out_prefix}_{i:03d}.csv"
            write_orbit_csv(trace, path)
        results.append({
            "seed": [float(x) for x in seed],
            "status": trace.status,
            "closure": closure.to_json_dict() if closure else None,
        })
    n_closed = sum(1 for r in results if r["closure"] and r["closure"]["closed"])
    report = {
        "schema": SCHEMA,
        "command": "trace",
        "config": {"field": args.field, "which": args.which, "x0": args.x0,
                   "step": args.step, "s_max": args.s_max, "tol": args.tol},
        "orbits": results,
        "summary": {"n_seeds": len(results), "closed_count": n_closed},
    }
    _emit(args, report)
    print(f"traced {len(results)} field lines; {n_closed} closed "
          f"(tol={args.tol:g}, s_max={args.s_max:g})", file=sys.stderr)
    return 0


def _run_survey(args) -> int:
    constants = SI if args.constants == "si" else NONDIMENSIONAL
    target = build_field(args.field, constants)
    Y, chart = _field_line_vector(target, args.which, args.x0)
    seeds = _parse_seeds(args, chart)
    survey = closed_orbit_survey(Y, seeds, args.step, args.s_max, args.tol)
    report = {
        "schema": SCHEMA,
        "command": "survey",
        "config": {"field": args.field, "which": args.which, "x0": args.x0,
                   "step": args.step, "s_max": args.s_max, "tol": args.tol},
        "survey": survey.to_json_dict(),
    }
    _emit(args, report)
    print(f"survey: {survey.n_closed}/{len(survey.results)} seeds closed, "
          f"{len(survey.unique_orbits)} distinct orbits", file=sys.stderr)
    return 0


def _run_reeb(args) -> int:
    constants = SI if args.constants == "si" else NONDIMENSIONAL
    target = build_field(args.field, constants)
    if isinstance(target, BeltramiForm):
        variant = "normalized" if args.which in ("y", "y0", "y1") else "unnormalized"
        rb = reeb_closed_form_beltrami(target, variant)
        chart = target.chart
    else:
        which = {"y0": "Y0", "y1": "Y1"}.get(args.which)
        if which is None:
            raise ConfigError("for Maxwell fields --which must be y0 or y1")
        rb = reeb_for_maxwell(target, which, args.x0)
        chart = target.chart3
    grid = SampleGrid.regular(chart, _parse_counts(args.grid, chart.dim))
    write_vector_field_csv(rb.Y, grid.points, args.out)
    r_omega, r_lam = rb.normalization_residuals
    print(f"wrote {args.out}; residuals: |i_Y Omega| <= {r_omega:.3e}, "
          f"|i_Y lambda - 1| <= {r_lam:.3e}", file=sys.stderr)
    return 0


# -- entry point ---------------------------------------------------------------------


def _emit(args, report: dict) -> None:
    if not getattr(args, "no_meta", False):
        report["meta"] = {
            "bmkit": __version__,
            "numpy": np.__version__,
            "elapsed_s": round(time.time() - args._t0, 3),
        }
    text = json.dumps(report, indent=2, sort_keys=True)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    if getattr(args, "stdout_json", False):
        print(text)


def _add_common(p, out_default=None):
    p.add_argument("--constants", choices=("nondim", "si"), default="nondim",
                   help="physical constants preset (default nondimensional)")
    p.add_argument("--out", default=out_default, help="output file path")
    p.add_argument("--stdout-json", action="store_true",
                   help="print the JSON report to stdout")
    p.add_argument("--no-meta", action="store_true",
                   help="omit versions/timing for byte-deterministic reports")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bmk",
        description="Beltrami-Maxwell exterior-calculus toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list catalog fields")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_run_catalog)

    p = sub.add_parser("verify", help="run structure checks")
    p.add_argument("--field", required=True, help="catalog spec, e.g. "
                   "beltrami_maxwell{v=t3_mode{n=1,c=1},e0=1}")
    p.add_argument("--x0", action="append", default=[], type=float,
                   help="instant(s) for slice checks (default pi/4)")
    p.add_argument("--grid", default="8", help="spatial grid counts, e.g. 8 or 8,8,8")
    p.add_argument("--tgrid", type=int, default=6, help="time samples per instant")
    p.add_argument("--t-window", type=float, default=0.35,
                   help="half-width of the time window around each instant")
    p.add_argument("--checks", nargs="+", default=["all"],
                   help=f"subset of: {', '.join(MAXWELL_CHECKS)} (or 'all')")
    p.add_argument("--allow-degenerate", action="store_true",
                   help="skip (rather than reject) checks at degenerate instants")
    _add_common(p)
    p.set_defaults(func=_run_verify)

    p = sub.add_parser("reeb", help="sample a Reeb field to CSV")
    p.add_argument("--field", required=True)
    p.add_argument("--which", choices=("y0", "y1", "y", "z"), default="y0",
                   help="y0/y1 for Maxwell sets; y (normalized) or z for Beltrami forms")
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--grid", default="6")
    _add_common(p, out_default="reeb.csv")
    p.set_defaults(func=_run_reeb)

    for cmd, fn, helptext in (("trace", _run_trace, "trace field lines, write orbit CSVs"),
                              ("survey", _run_survey, "closed-orbit survey over seeds")):
        p = sub.add_parser(cmd, help=helptext)
        p.add_argument("--field", required=True)
        p.add_argument("--which", choices=("e", "h"), default="e")
        p.add_argument("--x0", type=float, default=0.0)
        p.add_argument("--seeds", default="",
                       help="semicolon-separated points, e.g. '0,0,0;1,2,3'")
        p.add_argument("--seed-grid", default="3",
                       help="regular seed lattice counts (used when --seeds is empty)")
        p.add_argument("--step", type=float, default=1e-2)
        p.add_argument("--s-max", type=float, default=50.0)
        p.add_argument("--tol", type=float, default=1e-5)
        if cmd == "trace":
            p.add_argument("--out-prefix", default="",
                           help="write one CSV per seed: PREFIX_###.csv")
        _add_common(p)
        p.set_defaults(func=fn)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    args._t0 = time.time()
    if os.environ.get("BMK_THREADS", "").strip():
        try:
            int(os.environ["BMK_THREADS"])
        except ValueError:
            print("error: BMK_THREADS must be an integer", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegenerateInstantError as exc:
        print(f"error: degenerate instant: {exc}", file=sys.stderr)
        return 2
    except BmkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
