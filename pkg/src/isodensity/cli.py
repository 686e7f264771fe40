"""Command-line front end.

Exit codes: 0 when every checked inequality holds, 2 when an inequality
fails inside its hypotheses, 1 for usage, input or numerical errors. Errors
are reported as a single JSON line on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from ._validation import check_order, check_scalar, check_series_order
from .conformal import replay_proof
from .exceptions import IsodensityError, NotFoundError
from .geometry import Disk, load_domain
from .greens import disk_green, flucher_bound, holder_step, level_identities, star_green
from .hardy_sobolev import (
    TestFunction,
    annular_ramp,
    ckn_admissible,
    coarea_check,
    exponent_map,
    hs_ratio,
    layer_cake_check,
    tent,
)
from .measures import deficit
from .reporting import dumps, to_csv, write_atomic
from .search import perturbation_scan, translate_scan, two_ball_threshold

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2
FLUX_TOL = 1e-7


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _point(text: str) -> complex:
    vals = _float_list(text)
    if len(vals) != 2:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}")
    return complex(*vals)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--quad-order", type=int, default=256)
    common.add_argument("--tol", type=float, default=1e-9)

    parser = _Parser(prog="isodensity", description="Weighted isoperimetric inequalities in the plane.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", parents=[common], help="deficit of one domain")
    p.add_argument("--domain", required=True)
    p.add_argument("--p", type=float, required=True)

    p = sub.add_parser("scan", parents=[common], help="deficit of one domain over a grid of p")
    p.add_argument("--domain", required=True)
    p.add_argument("--p", type=_float_list, required=True, help="comma-separated exponents")

    p = sub.add_parser("replay", parents=[common], help="conformal replay of the proof chain")
    p.add_argument("--domain", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--series-n", type=int, default=256)

    p = sub.add_parser("hs", parents=[common], help="weighted Sobolev ratio of a gauge test function")
    p.add_argument("--domain", help="base domain (star about the origin)")
    p.add_argument("--testfn", help="test function JSON file; overrides --domain/--profile")
    p.add_argument("--profile", choices=("tent", "ramp"), default="tent")
    p.add_argument("--eps", type=float, default=0.1, help="ramp width for --profile ramp")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, help="also report the CKN exponent triple of (p, q)")

    p = sub.add_parser("green", parents=[common], help="Green identities and the weighted Flucher bound")
    p.add_argument("--domain", required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--x", type=_point, default=0j, help="singularity 'x,y' (disks about the origin only)")
    p.add_argument("--series-n", type=int, default=256)

    p = sub.add_parser("search", help="perturbation, translation and two-ball searches")
    kinds = p.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    k = kinds.add_parser("perturb", parents=[common])
    k.add_argument("--p", type=float, required=True)
    k.add_argument("--K", type=int, default=6)
    k.add_argument("--amp", type=float, default=0.1)
    k.add_argument("--n", type=int, default=100)
    k.add_argument("--seed", type=int, default=0)
    k = kinds.add_parser("translate", parents=[common])
    k.add_argument("--r", type=float, default=1.0)
    k.add_argument("--p", type=float, required=True)
    k.add_argument("--offsets", type=_float_list, required=True)
    k = kinds.add_parser("two-ball", parents=[common])
    k.add_argument("--r", type=float, default=1.0)
    k.add_argument("--p", type=float, required=True)

    p = sub.add_parser("thresholds", parents=[common], help="two-ball separation thresholds over p")
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--p", type=_float_list, required=True)
    return parser


# --------------------------------------------------------------------------
# Subcommands: each returns (payload, violated)
# --------------------------------------------------------------------------


def _deficit_csv(reports) -> str:
    return to_csv(["p", "lhs", "rhs", "deficit", "verdict"],
                  ([r.p, r.lhs, r.rhs, r.deficit, r.verdict] for r in reports))


def _cmd_verify(a):
    check_scalar(a.p, "p", lo=-1)
    rep = deficit(load_domain(a.domain), a.p, a.tol, a.quad_order)
    text = _deficit_csv([rep]) if a.format == "csv" else dumps(rep.to_dict())
    return text, rep.verdict == "fails"


def _cmd_scan(a):
    for p in a.p:
        check_scalar(p, "p", lo=-1)
    d = load_domain(a.domain)
    reports = [deficit(d, p, a.tol, a.quad_order) for p in a.p]
    if a.format == "csv":
        text = _deficit_csv(reports)
    else:
        text = dumps({"reports": [r.to_dict() for r in reports]})
    return text, any(r.verdict == "fails" for r in reports)


def _cmd_replay(a):
    check_scalar(a.p, "p", lo=-1)
    check_series_order(a.series_n)
    rep = replay_proof(load_domain(a.domain), a.p, a.series_n)
    payload = rep.to_dict()
    if a.format == "csv":
        text = to_csv(["r", "A_r", "S_r"], zip(rep.r_values, rep.A_r, rep.S_r))
    else:
        text = dumps(payload)
    return text, not rep.chain_monotone


def _cmd_hs(a):
    check_scalar(a.p, "p", lo=-1, hi=1, lo_open=True)
    if a.testfn:
        with open(a.testfn, encoding="utf-8") as fh:
            u = TestFunction.from_dict(json.load(fh))
    else:
        if not a.domain:
            raise UsageError("hs needs --domain or --testfn")
        base = load_domain(a.domain)
        u = tent(base) if a.profile == "tent" else annular_ramp(base, a.eps)
    ratio = hs_ratio(u, a.p)
    cake = layer_cake_check(u, a.p, order=a.quad_order)
    co = coarea_check(u, a.p, order=a.quad_order)
    payload = {"p": a.p, "lhs": ratio.lhs, "rhs": ratio.rhs, "ratio": ratio.ratio,
               "layer_cake": list(cake), "coarea": list(co)}
    if a.q is not None:
        e = exponent_map(Fraction(str(a.p)), Fraction(str(a.q)))
        payload["exponents"] = {"alpha": float(e.alpha), "gamma": float(e.gamma), "r": float(e.r),
                                "admissible": ckn_admissible(e)}
    violated = ratio.ratio > 1 + 1e-7 or cake[0] > cake[1] + 1e-7 or cake[1] > cake[2] + 1e-7
    if a.format == "csv":
        text = to_csv(["p", "eps", "lhs", "rhs", "ratio"],
                      [[a.p, a.eps if a.profile == "ramp" and not a.testfn else "", ratio.lhs,
                        ratio.rhs, ratio.ratio]])
    else:
        text = dumps(payload)
    return text, violated


def _cmd_green(a):
    check_scalar(a.beta, "beta", hi=2)
    d = load_domain(a.domain)
    if isinstance(d, Disk) and d.center == 0:
        g = disk_green(d.radius, a.x)
    else:
        if a.x != 0:
            raise UsageError("a singularity away from the origin is only supported for disks about the origin")
        check_series_order(a.series_n)
        g = star_green(d, a.series_n)
    rep = flucher_bound(g, a.beta)
    levels = level_identities(g, [0.0, 0.1, 0.5, 1.0])
    payload = rep.to_dict()
    payload["levels"] = [{"t": l.t, "energy": l.energy, "flux": l.flux} for l in levels]
    payload["holder"] = list(holder_step(g, a.beta))
    violated = (not rep.holds or payload["holder"][0] > payload["holder"][1] + 1e-7
                or any(abs(l.flux - 1) > FLUX_TOL for l in levels))
    if a.format == "csv":
        text = to_csv(["beta", "lhs", "rhs"], [[rep.beta, rep.lhs, rep.rhs]])
    else:
        text = dumps(payload)
    return text, violated


def _cmd_search(a):
    if a.kind == "two-ball":
        t = two_ball_threshold(a.r, a.p, a.quad_order)
        payload = {"r": a.r, "p": a.p, "separation": t.separation, "bracket": [t.lower, t.upper],
                   "evaluations": t.evaluations}
        if a.format == "csv":
            return to_csv(["r", "p", "separation"], [[a.r, a.p, t.separation]]), False
        return dumps(payload), False
    if a.kind == "perturb":
        res = perturbation_scan(a.p, a.K, a.amp, a.n, a.seed, a.quad_order, a.tol)
    else:
        res = translate_scan(a.r, a.p, a.offsets, a.quad_order, a.tol)
    text = res.to_csv() if a.format == "csv" else dumps(res.summary())
    return text, bool(res.violations)


def _cmd_thresholds(a):
    rows = []
    for p in a.p:
        try:
            s = two_ball_threshold(a.r, p, a.quad_order).separation
        except NotFoundError:
            s = None
        rows.append({"p": p, "separation": s})
    if a.format == "csv":
        return to_csv(["p", "separation"],
                      [[r["p"], "" if r["separation"] is None else r["separation"]] for r in rows]), False
    return dumps({"r": a.r, "thresholds": rows}), False


COMMANDS = {
    "verify": _cmd_verify,
    "scan": _cmd_scan,
    "replay": _cmd_replay,
    "hs": _cmd_hs,
    "green": _cmd_green,
    "search": _cmd_search,
    "thresholds": _cmd_thresholds,
}


def _fail(kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": " ".join(str(message).split())}) + "\n")
    return EXIT_ERROR


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if hasattr(args, "quad_order"):
            check_order(args.quad_order)
            check_scalar(args.tol, "tol", lo=0)
        text, violated = COMMANDS[args.command](args)
        if not text.endswith("\n"):
            text += "\n"
        if args.out:
            write_atomic(args.out, text)
        else:
            sys.stdout.write(text)
    except UsageError as exc:
        return _fail("usage", exc)
    except OSError as exc:
        return _fail("io", f"{exc.strerror or exc}: {exc.filename or ''}")
    except json.JSONDecodeError as exc:
        return _fail("io", f"invalid JSON: {exc}")
    except (KeyError, TypeError) as exc:
        return _fail("input", f"malformed input: {exc}")
    except IsodensityError as exc:
        return _fail(type(exc).__name__, exc)
    except ValueError as exc:
        return _fail("value", exc)
    return EXIT_VIOLATION if violated else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
