"""Command-line front end.

Subcommands: analyze (invariant pipeline + admissibility report), compare
(equivalence of two curves), reconstruct (integrate a prescription), cycle
(three-point cycles / flatness), presets (list built-in curves).

Exit codes: 0 ok or equivalent, 1 error, 2 inadmissible, 3 not equivalent.
All floats are emitted through %.12e so identical configurations produce
byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cycles import AT_INFINITY, cycle_contains, cycle_through, is_flat, mobius_fit
from .errors import JacobiError, NoFit
from .geom import admissibility_report
from .frames import equivalent_reduced
from .matcurve import PRESET_NAMES, SampleGrid, curve_from_json, preset_curve
from .pipeline import analyze
from .reconstruct import curve_from_frame, integrate_frame, prescription_from_json
from .symspace import LagrangianChartPoint

FLOAT_FMT = "%.12e"


def _fmt(x):
    return FLOAT_FMT % float(x)


def _stable(obj):
    """Recursively quantize floats so JSON output is byte-stable."""
    if isinstance(obj, (float, np.floating)):
        return float(_fmt(obj))
    if isinstance(obj, (int, np.integer, bool, str)) or obj is None:
        return obj
    if isinstance(obj, np.ndarray):
        return _stable(obj.tolist())
    if isinstance(obj, dict):
        return {k: _stable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_stable(v) for v in obj]
    return obj


def _emit_json(obj, path=None):
    text = json.dumps(_stable(obj), indent=2, sort_keys=True)
    if path is None:
        print(text)
    else:
        Path(path).write_text(text + "\n")


def _invariant_csv(reduced, path):
    n = reduced.n
    header = ["t", "arclength", "zeta"]
    header += [f"k_{i + 1}" for i in range(n)]
    header += [f"sigma_{i + 1}{j + 1}" for i in range(n) for j in range(i + 1, n)]
    k = reduced.curvatures()
    lines = [",".join(header)]
    for r in range(reduced.ts.size):
        row = [reduced.ts[r], reduced.arclength[r], reduced.zeta[r]]
        row += list(k[r])
        row += [reduced.Sigma[r, i, j] for i in range(n) for j in range(i + 1, n)]
        lines.append(",".join(_fmt(x) for x in row))
    Path(path).write_text("\n".join(lines) + "\n")


def _load_curve(args):
    if args.preset:
        return preset_curve(args.preset)
    if not args.input:
        raise JacobiError("no curve given: pass INPUT.json or --preset NAME")
    return curve_from_json(json.loads(Path(args.input).read_text()))


# Table curves use one-sided derivative stencils at this many boundary
# nodes, where the third-derivative error is orders of magnitude worse than
# in the interior; default grids skip them.
TABLE_TRIM = 3


def _grid_for(curve, args):
    if curve.kind == "table":
        # tables evaluate only at their own nodes: snap the window to the
        # node set and drop the one-sided boundary nodes
        ts = curve.table_ts
        k = TABLE_TRIM if ts.size >= 2 * TABLE_TRIM + 7 else 0
        lo = ts[k] if args.t0 is None else max(args.t0, ts[k])
        hi = ts[-1 - k] if args.t1 is None else min(args.t1, ts[-1 - k])
        idx = np.nonzero((ts >= lo - 1e-12) & (ts <= hi + 1e-12))[0]
        if idx.size < 7:
            raise JacobiError("table window keeps too few samples")
        return SampleGrid(ts[idx[0]], ts[idx[-1]], idx.size)
    t0 = args.t0 if args.t0 is not None else curve.domain[0]
    t1 = args.t1 if args.t1 is not None else curve.domain[1]
    return SampleGrid(t0, t1, args.m)


def _offset_reduced(curve, grid, reduced):
    """Shift the arclength origin back to the table start after trimming.

    The arc element over the skipped prefix is estimated by extrapolating
    the zeta spline; this keeps arclength-based comparisons aligned with
    analyses that cover the full window.
    """
    if curve.kind != "table":
        return reduced
    ts = curve.table_ts
    if grid.t0 <= ts[0]:
        return reduced
    from dataclasses import replace

    from scipy.interpolate import CubicSpline

    z = CubicSpline(reduced.ts, reduced.zeta)
    prefix = np.linspace(ts[0], grid.t0, 33)
    offset = float(np.trapezoid(z(prefix), prefix))
    return replace(reduced, arclength=reduced.arclength + offset)


def _strict_factor(args):
    return 0.1 if args.strict else 1.0


def _reduced_payload(reduced):
    return {
        "n": reduced.n,
        "t": reduced.ts,
        "arclength": reduced.arclength,
        "zeta": reduced.zeta,
        "k": reduced.curvatures(),
        "Sigma": reduced.Sigma,
    }


def cmd_analyze(args):
    curve = _load_curve(args)
    grid = _grid_for(curve, args)
    s = _strict_factor(args)
    report = admissibility_report(curve, grid, adm_tol=args.tol_adm * s)
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    if not report.admissible:
        payload = {"admissibility": report.to_dict(), "curve": curve.name}
        _emit_json(payload, out / "analysis.json" if out else None)
        return 2
    ana = analyze(curve, grid, adm_tol=args.tol_adm * s)
    reduced = _offset_reduced(curve, grid, ana.reduced)
    payload = {
        "curve": curve.name,
        "grid": {"t0": grid.t0, "t1": grid.t1, "m": grid.m},
        "admissibility": report.to_dict(),
        "invariants": _reduced_payload(reduced),
    }
    formats = args.format.split(",")
    if "json" in formats:
        _emit_json(payload, out / "analysis.json" if out else None)
    if "csv" in formats and out:
        _invariant_csv(reduced, out / "invariants.csv")
    return 0


def cmd_compare(args):
    def load(spec_str):
        if spec_str in PRESET_NAMES:
            return preset_curve(spec_str)
        return curve_from_json(json.loads(Path(spec_str).read_text()))

    a_curve, b_curve = load(args.a), load(args.b)
    s = _strict_factor(args)

    def run(curve):
        grid = _grid_for(curve, args)
        rep = admissibility_report(curve, grid, adm_tol=args.tol_adm * s)
        return rep, grid

    rep_a, grid_a = run(a_curve)
    rep_b, grid_b = run(b_curve)
    out = Path(args.out) / "compare.json" if args.out else None
    if out:
        out.parent.mkdir(parents=True, exist_ok=True)
    if not (rep_a.admissible and rep_b.admissible):
        _emit_json(
            {"verdict": "inadmissible",
             "a": rep_a.to_dict(), "b": rep_b.to_dict()}, out)
        return 2
    ana_a = analyze(a_curve, grid_a)
    ana_b = analyze(b_curve, grid_b)
    red_a = _offset_reduced(a_curve, grid_a, ana_a.reduced)
    red_b = _offset_reduced(b_curve, grid_b, ana_b.reduced)
    tol = args.tol_equiv * s
    verdict, eps, k_dev, s_dev = equivalent_reduced(red_a, red_b, tol=tol)
    _emit_json(
        {
            "verdict": "equivalent" if verdict else "not-equivalent",
            "tolerance": tol,
            "sign_pattern": None if eps is None else [int(e) for e in eps],
            "k_deviation": k_dev,
            "sigma_deviation": s_dev,
            "arclength": {"a": red_a.arclength[-1],
                          "b": red_b.arclength[-1]},
        },
        out,
    )
    return 0 if verdict else 3


def cmd_reconstruct(args):
    p = prescription_from_json(json.loads(Path(args.input).read_text()))
    frames, resid = integrate_frame(p, resid_max=args.tol_resid)
    points, segments = curve_from_frame(frames)
    first = next((pt for pt in points if pt is not None), None)
    n = p.n
    table = {
        "n": n,
        "kind": "table",
        "name": "reconstructed",
        "domain": [p.ts[0], p.ts[-1]],
        "samples": {
            "t": list(p.ts),
            "S": [None if pt is None else pt.S for pt in points],
        },
    }
    report = {
        "warnings": p.warnings,
        "symplecticity_residual": resid,
        "segments": segments,
        "in_chart_samples": sum(pt is not None for pt in points),
    }
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
        _emit_json(table, out / "curve.json")
        _emit_json(report, out / "reconstruct.json")
    else:
        _emit_json({"curve": table, "report": report})
    return 0 if first is not None else 1


def cmd_cycle(args):
    out = Path(args.out) / "cycle.json" if args.out else None
    if out:
        out.parent.mkdir(parents=True, exist_ok=True)
    if args.points:
        data = json.loads(Path(args.points).read_text())
        pts = [LagrangianChartPoint(np.asarray(p, dtype=float))
               for p in data["points"]]
        if len(pts) < 3:
            raise JacobiError("need at least three points")
        cyc = cycle_through(pts[0], pts[1], pts[2])
        members = [cycle_contains(cyc, p, tol=args.tol_member)
                   for p in pts[3:]]
        _emit_json(
            {
                "regular": cyc.regular,
                "infinity": cyc.infinity.S,
                "base": cyc.base,
                "direction": cyc.direction,
                "extra_points_contained": members,
            },
            out,
        )
        return 0
    curve = _load_curve(args)
    grid = _grid_for(curve, args)
    flat = is_flat(curve, grid, tol=args.tol_flat)
    payload = {"curve": curve.name, "flat": flat}
    if flat:
        from .matcurve import sample_curve

        jets = sample_curve(curve, grid)
        try:
            coeffs, direction, resid = mobius_fit(jets)
            payload["mobius"] = {"coeffs": list(coeffs),
                                 "direction": direction,
                                 "residual": resid}
        except NoFit as e:
            payload["mobius"] = {"error": str(e)}
    _emit_json(payload, out)
    return 0


def cmd_presets(args):
    _emit_json({"presets": list(PRESET_NAMES)})
    return 0


def build_parser():
    p = argparse.ArgumentParser(
        prog="jacobi",
        description="Curvature invariants of curves of Lagrangian subspaces",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("input", nargs="?", help="curve JSON file")
            sp.add_argument("--preset", choices=PRESET_NAMES)
        sp.add_argument("--t0", type=float, default=None)
        sp.add_argument("--t1", type=float, default=None)
        sp.add_argument("-m", type=int, default=201)
        sp.add_argument("--out", default=None)
        sp.add_argument("--format", default="json,csv")
        sp.add_argument("--strict", action="store_true")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--tol-adm", type=float, default=1e-10)
        sp.add_argument("--tol-equiv", type=float, default=1e-4)
        sp.add_argument("--tol-flat", type=float, default=1e-8)
        sp.add_argument("--tol-member", type=float, default=1e-8)
        sp.add_argument("--tol-resid", type=float, default=1e-6)

    sp = sub.add_parser("analyze", help="run the invariant pipeline")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("compare", help="test two curves for equivalence")
    sp.add_argument("a", help="curve JSON file or preset name")
    sp.add_argument("b", help="curve JSON file or preset name")
    common(sp, needs_input=False)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("reconstruct", help="integrate a prescription")
    sp.add_argument("input", help="prescription JSON file")
    common(sp, needs_input=False)
    sp.set_defaults(func=cmd_reconstruct)

    sp = sub.add_parser("cycle", help="three-point cycles and flatness")
    common(sp)
    sp.add_argument("--points", default=None,
                    help="JSON file with {'points': [S1, S2, S3, ...]}")
    sp.set_defaults(func=cmd_cycle)

    sp = sub.add_parser("presets", help="list built-in curves")
    sp.set_defaults(func=cmd_presets)
    return p


def main(argv=None):
    threads = os.environ.get("JACOBI_NUM_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except JacobiError as e:
        print(json.dumps({"error": type(e).__name__, "message": str(e)}),
              file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(json.dumps({"error": "FileNotFound", "message": str(e)}),
              file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
