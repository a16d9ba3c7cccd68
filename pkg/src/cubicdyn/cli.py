"""Command line front end.

Exit codes: 0 success, 1 input error, 2 unresolved or inconclusive.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import sys

from . import atlas, blaschke, brjuno, cubic, lamina, rays

EXIT_OK, EXIT_INPUT, EXIT_UNRESOLVED = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def parse_complex(s: str) -> complex:
    """'re,im', or anything complex() accepts ('0.5', '1+2j')."""
    s = s.strip()
    try:
        if "," in s:
            re_, im_ = s.split(",")
            return complex(float(re_), float(im_))
        return complex(s.replace(" ", ""))
    except ValueError:
        raise InputError(f"cannot parse complex number {s!r}") from None


def _floats(s: str, n: int | None = None) -> list[float]:
    try:
        out = [float(x) for x in s.split(",")]
    except ValueError:
        raise InputError(f"cannot parse number list {s!r}") from None
    if n is not None and len(out) != n:
        raise InputError(f"expected {n} comma-separated numbers, got {s!r}")
    return out


def _lambda(args) -> complex:
    if getattr(args, "theta", None) is not None:
        th = args.theta
        t = float(brjuno.golden_mean(64)) if th == "golden" else float(th)
        return cmath.exp(2j * math.pi * t)
    if args.lam is None:
        raise InputError("give --lambda or --theta")
    return parse_complex(args.lam)


def _emit(obj, out=None):
    text = json.dumps(atlas._jsonable(obj), indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _add_lambda(p):
    p.add_argument("--lambda", dest="lam", help="multiplier at 0, 're,im' or '0.5'")
    p.add_argument("--theta", help="use lambda = exp(2 pi i theta); 'golden' for (sqrt5 - 1)/2")


# --------------------------------------------------------------------------
# subcommands


def cmd_slice(args):
    if args.spec:
        with open(args.spec) as fh:
            spec = atlas.SliceSpec.from_json(fh.read())
    else:
        if not (args.window and args.res):
            raise InputError("give a spec file or --window and --res")
        w, h = args.res.lower().split("x")
        spec = atlas.SliceSpec(_lambda(args), tuple(_floats(args.window, 4)), (int(w), int(h)))
    res = atlas.render_slice(spec, workers=args.workers, out_prefix=args.out)
    _emit({"counts": res.counts(), "png": args.out + ".png" if args.out else None,
           "csv": args.out + ".csv" if args.out else None})
    return EXIT_OK


def cmd_classify(args):
    c = atlas.classify_point(_lambda(args), parse_complex(args.b))
    _emit(c.to_dict())
    return EXIT_UNRESOLVED if c.label == "Unresolved" else EXIT_OK


def cmd_ray(args):
    p = cubic.CubicParams(_lambda(args), parse_complex(args.b))
    theta = lamina.angle(args.angle)
    cfg = rays.RayConfig()
    ray = rays.trace_ray(p, theta, args.t_min, cfg)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(ray.to_csv())
    rec = rays.land_rational_ray(p, theta, cfg)
    out = rec.to_dict()
    out["ray_ok"] = ray.ok
    out["ray_points"] = len(ray.points)
    _emit(out)
    return EXIT_UNRESOLVED if rec.status == "unresolved" or not ray.ok else EXIT_OK


def cmd_lamination(args):
    with open(args.file) as fh:
        lam = lamina.Lamination.from_text(fh.read())
    rep = lamina.check_sibling_invariant(lam)
    gs = lamina.gaps(lam)
    out = rep.to_dict()
    out["leaves"] = [str(c) for c in lam]
    out["gaps"] = [{**g.to_dict(), "degree": lamina.gap_degree(g, lam.degree)} for g in gs]
    _emit(out)
    return EXIT_OK


def cmd_brjuno(args):
    if args.quotients:
        try:
            qs = [int(x) for x in args.quotients.split(",")]
        except ValueError:
            raise InputError(f"cannot parse quotient list {args.quotients!r}") from None
        cf = brjuno.ContinuedFraction.from_quotients(qs)
    elif args.theta_value:
        th = args.theta_value
        x = brjuno.golden_mean(args.prec) if th == "golden" else th
        cf = brjuno.cf_expand(x, args.N)
    else:
        raise InputError("give --theta or --quotients")
    out = cf.to_dict()
    if len(cf.convergents) >= 2:
        sums = brjuno.brjuno_partial_sums(cf)
        out.update(sums.to_dict())
    out["precision_exhausted"] = cf.truncated
    _emit(out)
    return EXIT_OK


def cmd_blaschke(args):
    if args.s:
        B = blaschke.GeneralBlaschke(parse_complex(args.a), parse_complex(args.s))
        Q, rho = blaschke.normalize(B)
    else:
        Q, rho = blaschke.NormalizedBlaschke(parse_complex(args.a)), 1 + 0j
    a = Q.a
    out = {"a": a, "rotation": rho, "expansion_margin": blaschke.expansion_margin(Q)}
    if a != 0:
        c = blaschke.critical_point_in_disk(Q)
        out.update({"critical_point": c, "critical_value": blaschke.critical_value(Q),
                    "critical_value_formula": blaschke.critical_value(Q, formula=True),
                    "critical_orbit_min": blaschke.critical_orbit_near_circle(a, args.m)})
    if args.z:
        z = parse_complex(args.z)
        out.update({"z": z, "value": blaschke.evaluate(Q, z), "derivative": blaschke.derivative(Q, z)})
    _emit(out)
    return EXIT_OK


def cmd_centers(args):
    pts = cubic.center_points(_lambda(args), args.n, args.branch)
    _emit({"n": args.n, "count": len(pts), "centers": [q.to_dict() for q in pts]})
    return EXIT_OK if pts else EXIT_UNRESOLVED


def cmd_perturb_path(args):
    base = cubic.CubicParams(_lambda(args), parse_complex(args.b))
    ladder = _floats(args.eps_ladder)
    rep = atlas.perturbation_path_report(base, ladder, lamination_q=args.lamination_q)
    _emit(rep.to_dict())
    return EXIT_OK if rep.stabilized else EXIT_UNRESOLVED


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="cubicdyn", description="Dynamics of lam z + b z^2 + z^3.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("slice", help="render a lambda-slice of the b-plane")
    p.add_argument("spec", nargs="?", help="SliceSpec JSON file")
    _add_lambda(p)
    p.add_argument("--window", help="x0,x1,y0,y1")
    p.add_argument("--res", help="WxH")
    p.add_argument("--out", help="output prefix for .png and .csv")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("classify", help="label one parameter")
    _add_lambda(p)
    p.add_argument("--b", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("ray", help="trace and land one external ray")
    _add_lambda(p)
    p.add_argument("--b", default="0")
    p.add_argument("--angle", required=True, help="p/q")
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--csv", help="write the ray polyline here")
    p.set_defaults(func=cmd_ray)

    p = sub.add_parser("lamination", help="lamination utilities")
    lsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    q = lsub.add_parser("check", help="sibling invariance and gaps of a leaf file")
    q.add_argument("file")
    q.set_defaults(func=cmd_lamination)

    p = sub.add_parser("brjuno", help="continued fraction and Brjuno sums")
    p.add_argument("--theta", dest="theta_value", help="decimal string, or 'golden'")
    p.add_argument("--quotients", help="comma-separated a_1,...,a_N")
    p.add_argument("-N", type=int, default=40)
    p.add_argument("--prec", type=int, default=512, help="bits for 'golden'")
    p.set_defaults(func=cmd_brjuno)

    p = sub.add_parser("blaschke", help="quadratic Blaschke product data")
    p.add_argument("--a", required=True)
    p.add_argument("--s", help="rotation; given s, --a is b of s z (b - z)/(1 - conj(b) z)")
    p.add_argument("--z", help="evaluation point")
    p.add_argument("--m", type=int, default=20)
    p.set_defaults(func=cmd_blaschke)

    p = sub.add_parser("centers", help="solve f^n(c) = 0 for b")
    _add_lambda(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--branch", type=int, choices=(1, 2))
    p.set_defaults(func=cmd_centers)

    p = sub.add_parser("perturb-path", help="classify f_eps down a ladder of eps")
    _add_lambda(p)
    p.add_argument("--b", required=True)
    p.add_argument("--eps-ladder", required=True, help="comma-separated, decreasing")
    p.add_argument("--lamination-q", type=int, default=0)
    p.set_defaults(func=cmd_perturb_path)
    return ap


_VALUE_OPTS = {"--lambda", "--theta", "--window", "--b", "--a", "--s", "--z", "--eps-ladder", "--quotients"}


def _glue_negative_values(argv):
    # argparse reads '-3,3,-3,3' as an option; attach such values to their flag
    out, it = [], iter(argv)
    for a in it:
        if a in _VALUE_OPTS:
            v = next(it, None)
            if v is not None and v.startswith("-"):
                out.append(f"{a}={v}")
                continue
            out.append(a)
            if v is not None:
                out.append(v)
        else:
            out.append(a)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_glue_negative_values(argv))
    try:
        return args.func(args)
    except cubic.UnresolvedError as e:
        print(f"unresolved: {e}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except (InputError, ValueError, TypeError, OSError, ZeroDivisionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
