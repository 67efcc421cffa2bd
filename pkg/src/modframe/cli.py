"""Batch command line: load JSON inputs, run analyses, emit reports.

Exit codes: 0 success, 2 verification failure (not a frame, resolution
defect, gram mismatch, ...), 1 I/O or schema error. Every failure also
prints a one-line machine-readable record on stderr. Randomized probes are
driven by ``--seed`` (default 0) so reports are byte-identical for
identical inputs; numbers round-trip exactly through their JSON encoding.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import frames as fr
from . import invariants as inv
from . import module_space as ms
from . import resolution as rs
from . import sampling as sp
from . import serialize as sz
from . import tight
from .errors import ModframeError, ParseError, VerificationFailed

THEOREM_LINES = {
    "analyze": "exercises: two-sided frame-bound inequality via the spectrum of the frame operator G",
    "dual": "exercises: canonical dual reconstruction x = sum_j <x, S(x_j)> x_j with S = pinv(G)",
    "tighten": "exercises: symmetric approximation optimality (Hilbert-Schmidt certificate ||P - |T*|||) and the Loewdin orthogonalization",
    "distance": "exercises: quadratic closeness / nearness measures; d is finite exactly for similar frames",
    "balan": "exercises: Balan minimal-distance theorem, minima (sqrt D - sqrt C)/(sqrt D + sqrt C) and (log D - log C)/4",
    "invariant": "exercises: uniqueness of the normalized tight inner product; matching Gram data yields the connecting unitary",
    "modcheck": "exercises: frame verification, reconstruction identity, and the zero-divisor-aware Riesz kernel test",
    "resolution": "exercises: resolutions sum b_i* b_i = 1 as normalized tight module frames; polar factors b_i = u_i (b_i* b_i)^(1/2) and the endpoint identity",
    "example56": "exercises: the phase family of tight frames at equal analysis-map distance max(1, 4|sin(phi/2)|)",
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload = args.handler(args)
    except ParseError as exc:
        _error_record("ParseError", exc)
        return 1
    except FileNotFoundError as exc:
        _error_record("FileNotFound", exc)
        return 1
    except json.JSONDecodeError as exc:
        _error_record("ParseError", exc)
        return 1
    except (VerificationFailed, ModframeError) as exc:
        _error_record(type(exc).__name__, exc)
        return 2
    _emit(args, payload)
    return 0


def _error_record(kind: str, exc):
    print(json.dumps({"error": kind, "message": str(exc)}), file=sys.stderr)


def _emit(args, payload):
    fmt = args.format
    if fmt == "json":
        text = sz.dumps({k: v for k, v in payload.items() if k != "csv"}) + "\n"
    elif fmt == "csv":
        text = _to_csv(payload)
    else:
        text = _to_text(args.subcommand, payload)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _to_csv(payload):
    rows = payload.get("csv")
    if rows is None:
        raise ParseError("this subcommand has no CSV form; use --format json")
    header, data = rows
    lines = [",".join(header)]
    for row in data:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def _to_text(sub, payload):
    lines = [f"modframe {sub}", THEOREM_LINES[sub]]
    blob = {k: v for k, v in payload.items() if k not in ("csv",)}
    lines.append(sz.dumps(_strip_bulky(blob)))
    return "\n".join(lines) + "\n"


def _strip_bulky(obj, depth=0):
    if isinstance(obj, dict):
        out = {}
        for k, v in obj.items():
            if k in ("support", "elements", "coords", "entries", "gram", "blocks", "vectors", "b") and depth >= 0:
                out[k] = "..."
            else:
                out[k] = _strip_bulky(v, depth + 1)
        return out
    if isinstance(obj, list) and len(obj) > 24:
        return obj[:24] + ["..."]
    return obj


def _tol(args) -> float:
    tol = args.tol
    if tol is None:
        env = os.environ.get("MODFRAME_TOL")
        if env:
            try:
                tol = float(env)
            except ValueError as exc:
                raise ParseError(f"bad MODFRAME_TOL {env!r}") from exc
    if tol is None:
        tol = 1e-9
    if not tol > 0.0:
        raise ParseError(f"tolerance must be positive, got {tol}")
    return tol


def _load(path):
    with open(path) as fh:
        return json.load(fh)


# -- subcommand handlers ---------------------------------------------------

def cmd_analyze(args):
    frame = sz.frame_from_json(_load(args.input))
    report = fr.analyze(frame, tol=_tol(args))
    doc = sz.report_to_json(report)
    if not report.is_frame:
        raise VerificationFailed(
            f"the sequence does not generate its submodule (bounds {report.lower}, {report.upper})"
        )
    return doc


def cmd_dual(args):
    tol = _tol(args)
    frame = sz.frame_from_json(_load(args.input))
    dual = fr.canonical_dual(frame, tol=tol)
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.probes):
        x = sp.module_vector(rng, frame.shape, frame.rank)
        if frame.module.projection is not None:
            x = ms.apply(frame.module.projection, x)
        diff = fr.reconstruct(frame, x, tol=tol) - x
        worst = max(worst, ms.vector_norm(diff) / (1.0 + ms.vector_norm(x)))
    if worst > max(tol * 100, 1e-7):
        raise VerificationFailed(f"reconstruction residual {worst:.3e}")
    return {
        "dual": sz.frame_to_json(dual),
        "reconstruction_residual": worst,
        "probes": args.probes,
    }


def cmd_tighten(args):
    x = sz.hilbert_frame_from_json(_load(args.input))
    sa = tight.symmetric_approximation(x)
    tm = tight.closest_tight_multiple(x)
    c, d = x.bounds()
    return {
        "bounds": {"lower": c, "upper": d},
        "symmetric_approximation": sz.hilbert_frame_to_json(sa.frame),
        "certificate": sa.certificate,
        "summed_square": sa.summed_square,
        "tight_defect": sa.tight_defect,
        "multiplier": tm.multiplier,
        "multiple_distance": tm.distance,
        "same_span_guaranteed": sa.same_span_guaranteed,
    }


def cmd_distance(args):
    x = sz.hilbert_frame_from_json(_load(args.input))
    y = sz.hilbert_frame_from_json(_load(args.second))
    rep = tight.nearness(x, y)
    # similarity = equality of the analysis-map ranges inside C^k
    px = _row_space_projection(x.analysis())
    py = _row_space_projection(y.analysis())
    similar = bool(np.abs(px - py).max() <= 1e-8)
    doc = {
        "c_yx": _inf_safe(rep.c_yx),
        "c_xy": _inf_safe(rep.c_xy),
        "d": _inf_safe(rep.d),
        "similar": similar,
    }
    if similar != (not math.isinf(rep.d)):
        raise VerificationFailed("nearness and similarity disagree")
    return doc


def _row_space_projection(t):
    from . import matrix_core as mc

    u, s, _ = mc.svd(t)
    keep = s > 1e-10 * s.max(initial=0.0)
    return u[:, keep] @ u[:, keep].conj().T


def _inf_safe(v):
    return "inf" if math.isinf(v) else v


def cmd_balan(args):
    x = sz.hilbert_frame_from_json(_load(args.input))
    bm = tight.balan_minimizers(x)
    achieved_c = tight.quadratic_closeness(x, bm.arithmetic)
    achieved_cxy = tight.quadratic_closeness(bm.harmonic, x)
    rep = tight.nearness(x, bm.geometric)
    return {
        "bounds": {"lower": bm.bounds[0], "upper": bm.bounds[1]},
        "multipliers": list(bm.multipliers),
        "min_closeness": bm.min_closeness,
        "min_nearness": bm.min_nearness,
        "achieved": {"c_yx": achieved_c, "c_xy": achieved_cxy, "d": rep.d},
        "arithmetic": sz.hilbert_frame_to_json(bm.arithmetic),
        "harmonic": sz.hilbert_frame_to_json(bm.harmonic),
        "geometric": sz.hilbert_frame_to_json(bm.geometric),
    }


def cmd_invariant(args):
    tol = _tol(args)
    frame = sz.frame_from_json(_load(args.input))
    metric, gi = inv.normalized_tight_inner_product(frame, tol=tol)
    doc = {
        "metric": sz.operator_to_json(metric),
        "invariant": sz.gram_invariant_to_json(gi),
        "projection_defect": gi.projection_defect(),
    }
    if args.second:
        other = sz.frame_from_json(_load(args.second))
        _, gi2 = inv.normalized_tight_inner_product(other, tol=tol)
        gap = inv.gram_gap(gi, gi2)
        doc["comparison"] = {"gap": gap, "match": bool(gap <= max(tol * 100, 1e-7))}
        if args.permutations:
            doc["comparison"]["permutation"] = _permutation_search(gi, gi2, tol)
    return doc


def _permutation_search(a, b, tol):
    """Brute-force relabeling of the second invariant; practical for k <= 8."""
    from itertools import permutations

    if a.k != b.k:
        return None
    if a.k > 8:
        raise ParseError("permutation search is limited to k <= 8")
    best = None
    for perm in permutations(range(a.k)):
        permuted = tuple(tuple(b.gram[i][j] for j in perm) for i in perm)
        gap = inv.gram_gap(a, inv.GramInvariant(k=a.k, gram=permuted))
        if best is None or gap < best[1]:
            best = (perm, gap)
        if gap <= max(tol * 100, 1e-7):
            return {"perm": list(perm), "gap": gap, "match": True}
    return {"perm": list(best[0]), "gap": best[1], "match": False}


def cmd_modcheck(args):
    tol = _tol(args)
    frame = sz.frame_from_json(_load(args.input))
    report = fr.analyze(frame, tol=tol)
    doc = {"report": sz.report_to_json(report)}
    if not report.is_frame:
        raise VerificationFailed("the sequence does not generate its submodule")
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.probes):
        x = sp.module_vector(rng, frame.shape, frame.rank)
        if frame.module.projection is not None:
            x = ms.apply(frame.module.projection, x)
        diff = fr.reconstruct(frame, x, tol=tol) - x
        worst = max(worst, ms.vector_norm(diff) / (1.0 + ms.vector_norm(x)))
    rz = fr.riesz_check(frame, tol=tol)
    doc.update(
        {
            "reconstruction_residual": worst,
            "riesz": {
                "is_riesz_basis": rz.is_riesz_basis,
                "is_orthogonal_hilbert_basis": rz.is_orthogonal_hilbert_basis,
                "kernel_generators": rz.kernel_generators,
                "max_summand_residual": rz.max_summand_residual,
            },
        }
    )
    if worst > max(tol * 100, 1e-7):
        raise VerificationFailed(f"reconstruction residual {worst:.3e}")
    return doc


def cmd_resolution(args):
    seq = sz.resolution_from_json(_load(args.input))
    tol = _tol(args) * (1.0 + seq.count)
    rep = rs.verify_resolution(seq, tol=tol, rng=np.random.default_rng(args.seed))
    doc = {
        "verify": {
            "passed": rep.passed,
            "sum_residual": rep.sum_residual,
            "reconstruction_residual": rep.reconstruction_residual,
            "note": rep.note,
        }
    }
    if not rep.passed:
        raise VerificationFailed(f"resolution defect {rep.sum_residual:.3e}")
    rng_rep = rs.frame_transform_range(seq, tol=tol)
    pol = rs.polar_factorization(seq, tol=tol)
    coeff = rs.coefficient_inequality(seq, tol=tol)
    doc.update(
        {
            "range_projection": {
                "idempotency_residual": rng_rep.idempotency_residual,
                "isometry_residual": rng_rep.isometry_residual,
                "decomposition_residual": rng_rep.decomposition_residual,
            },
            "polar": {
                "factors": [
                    {"u": sz.matrix_to_json(u), "m": sz.matrix_to_json(m)}
                    for u, m in pol.factors
                ],
                "reconstruction_residual": pol.reconstruction_residual,
                "support_residual": pol.support_residual,
                "moduli_sum_residual": pol.moduli_sum_residual,
            },
            "coefficient": {
                "endpoint_residual": coeff.endpoint_residual,
                "dominance_defect": coeff.dominance_defect,
            },
        }
    )
    return doc


def cmd_example56(args):
    n = args.dim
    if args.phi is not None:
        phis = [args.phi]
    else:
        lim = 2.0 * math.asin(0.25)
        phis = np.linspace(-lim, lim, args.count).tolist()
    rows = []
    for phi in phis:
        _, dist = tight.example_56_family(phi, n=n)
        rows.append((phi, dist))
    return {
        "dim": n,
        "points": [{"phi": p, "distance": d} for p, d in rows],
        "csv": (("phi", "distance"), rows),
    }


def build_parser():
    parser = argparse.ArgumentParser(
        prog="modframe",
        description="frame analysis for Hilbert modules over matrix algebras",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=None,
                       help="verification tolerance (default: MODFRAME_TOL or 1e-9)")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized probes")
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--probes", type=int, default=8, help="random probe count")

    p = sub.add_parser("analyze", help="frame bounds and tightness of a module frame")
    p.add_argument("input")
    common(p)
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("dual", help="canonical dual frame plus reconstruction residual")
    p.add_argument("input")
    common(p)
    p.set_defaults(handler=cmd_dual)

    p = sub.add_parser("tighten", help="symmetric approximation and closest tight multiple")
    p.add_argument("input")
    common(p)
    p.set_defaults(handler=cmd_tighten)

    p = sub.add_parser("distance", help="closeness and nearness of two Hilbert-space frames")
    p.add_argument("input")
    p.add_argument("second")
    common(p)
    p.set_defaults(handler=cmd_distance)

    p = sub.add_parser("balan", help="minimal-distance tight frames for the three measures")
    p.add_argument("input")
    common(p)
    p.set_defaults(handler=cmd_balan)

    p = sub.add_parser("invariant", help="normalized tight Gram invariant (optionally compare two frames)")
    p.add_argument("input")
    p.add_argument("second", nargs="?", default=None)
    p.add_argument("--permutations", action="store_true",
                   help="brute-force element relabeling when comparing (k <= 8)")
    common(p)
    p.set_defaults(handler=cmd_invariant)

    p = sub.add_parser("modcheck", help="full verification battery for a module frame")
    p.add_argument("input")
    common(p)
    p.set_defaults(handler=cmd_modcheck)

    p = sub.add_parser("resolution", help="verify a resolution of the identity")
    p.add_argument("input")
    common(p)
    p.set_defaults(handler=cmd_resolution)

    p = sub.add_parser("example56", help="phase sweep of the equal-distance tight family")
    p.add_argument("--phi", type=float, default=None, help="single phase value")
    p.add_argument("--count", type=int, default=21, help="sweep point count")
    p.add_argument("--dim", type=int, default=4, help="truncation dimension (>= 3)")
    common(p)
    p.set_defaults(handler=cmd_example56)

    return parser


if __name__ == "__main__":
    sys.exit(main())
