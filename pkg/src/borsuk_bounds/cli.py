"""Command line interface.

Exit codes: 0 success, 1 a verification failed, 2 bad input or domain error.
"""
import argparse
from dataclasses import asdict
from fractions import Fraction
import sys

from . import bounds, capcover, geometry, lemma2, lemma3, partition
from .exceptions import DomainError, RejectedInputError
from .report import emit_report

DEFAULT_SEED = 0xB0B5


def _seed(text):
    value = int(text, 0)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _number(text):
    # accepts fractions such as 5/9 so boundary values can be given exactly
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _emit(data, args, fmt="json", **kw):
    text = emit_report(data, fmt, getattr(args, "out", None), **kw)
    if getattr(args, "out", None) is None:
        sys.stdout.write(text)


def _r10(x):
    return round(float(x), 10)


def cmd_bounds_sweep(args):
    rows = bounds.sweep(args.start, args.stop, args.step)
    _emit({"columns": list(bounds.SWEEP_COLUMNS), "rows": rows}, args, "csv")
    return 0


def cmd_bounds_best(args):
    id, base = bounds.best_bound(args.b)
    _emit({"id": id.name, "base": _r10(base)}, args)
    return 0


def cmd_bounds_value(args):
    id = bounds.BoundId.parse(args.id)
    _emit({"id": id.name, "b": args.b, "base": _r10(bounds.bound_base(id, args.b))}, args)
    return 0


def cmd_bounds_crossover(args):
    root = bounds.crossover(args.id1, args.id2, args.lo, args.hi)
    data = {"id1": bounds.BoundId.parse(args.id1).name, "id2": bounds.BoundId.parse(args.id2).name}
    if root is None:
        data["result"] = "NO_CROSSING"
    else:
        data["b"] = _r10(root)
    _emit(data, args)
    return 0


def cmd_bounds_dominance(args):
    violations = [asdict(v) for v in bounds.dominance_check(args.grid)]
    if args.format == "markdown-table":
        _emit(violations, args, "markdown-table", columns=["b", "claim", "lhs", "rhs"],
              title=f"dominance violations (grid {args.grid})")
    else:
        _emit({"grid_size": args.grid, "violations": violations}, args)
    return 0 if not violations else 1


def cmd_verify_lemma2(args):
    s = lemma2.verify_lemma2(args.samples, args.seed, args.tol)
    _emit(s.to_dict(), args)
    return 0 if s.ok else 1


def cmd_verify_lemma3(args):
    s = lemma3.verify_lemma3(args.samples, args.seed)
    _emit(s.to_dict(), args)
    return 0 if s.ok else 1


def cmd_verify_identity(args):
    s = lemma3.verify_identity(args.samples, args.seed, dim=args.dim, m=args.m, s=args.s)
    _emit(s.to_dict(), args)
    return 0 if s.ok else 1


def cmd_jung(args):
    X = geometry.load_points(args.input)
    rep = geometry.jung_check(X)
    data = rep.to_dict()
    data.update(n=int(X.shape[1]), points=int(X.shape[0]))
    _emit(data, args)
    return 0 if rep.ok else 1


def cmd_partition(args):
    X = geometry.load_points(args.input)
    part = partition.partition_set(X, args.b, args.strategy, args.epsilon)
    check = partition.verify_partition(X, part.labels, args.b)
    data = partition.partition_to_dict(part, args.b, args.strategy, args.epsilon, X.shape[1])
    _emit(data, args)
    return 0 if check.ok else 1


def cmd_cover_circle(args):
    count = capcover.circle_cover_count(args.r, args.rho)
    data = {"r": args.r, "rho": args.rho, "oracle_count": count,
            "rogers_reference": capcover.rogers_reference(2, args.r, args.rho)}
    if args.mesh:
        cover = capcover.greedy_cap_cover(2, args.r, args.rho, args.mesh, args.seed)
        data.update(greedy_count=len(cover), certified=cover.certified, seed=args.seed,
                    mesh=cover.mesh_size)
        _emit(data, args)
        return 0 if cover.certified else 1
    _emit(data, args)
    return 0


def cmd_cover_sphere(args):
    cover = capcover.greedy_cap_cover(3, args.r, args.rho, args.mesh, args.seed)
    data = {"r": args.r, "rho": args.rho, "seed": args.seed, "count": len(cover),
            "certified": cover.certified, "uncovered_check_points": cover.uncovered,
            "mesh": cover.mesh_size, "check_mesh": cover.check_size,
            "mesh_covering_radius": cover.mesh_radius,
            "rogers_reference": capcover.rogers_reference(3, args.r, args.rho)}
    _emit(data, args)
    return 0 if cover.certified else 1


def cmd_hierarchy(args):
    h = capcover.build_hierarchy(args.dim, args.r, args.lam, args.eps, args.delta,
                                 args.mesh, args.seed)
    rep = capcover.verify_hierarchy(h)
    _emit({"hierarchy": h.to_dict(), "verification": rep.to_dict()}, args)
    return 0 if rep.structural_ok else 1


def build_parser():
    p = argparse.ArgumentParser(prog="borsuk-bounds",
                                description="Bounds, lemma checks and constructions for partitions "
                                            "into parts of smaller diameter.")
    sub = p.add_subparsers(dest="command", required=True)

    def out(sp):
        sp.add_argument("--out", help="output file (default: stdout)")

    b = sub.add_parser("bounds", help="closed-form bound bases").add_subparsers(
        dest="action", required=True)
    sp = b.add_parser("sweep", help="CSV of every base over a grid of b")
    sp.add_argument("--from", dest="start", type=float, required=True)
    sp.add_argument("--to", dest="stop", type=float, required=True)
    sp.add_argument("--step", type=float, required=True)
    out(sp)
    sp.set_defaults(func=cmd_bounds_sweep)
    sp = b.add_parser("best", help="smallest base at b")
    sp.add_argument("--b", type=float, required=True)
    out(sp)
    sp.set_defaults(func=cmd_bounds_best)
    sp = b.add_parser("value", help="one base at b")
    sp.add_argument("--id", required=True)
    sp.add_argument("--b", type=float, required=True)
    out(sp)
    sp.set_defaults(func=cmd_bounds_value)
    sp = b.add_parser("crossover", help="b where two bases are equal")
    sp.add_argument("--id1", required=True)
    sp.add_argument("--id2", required=True)
    sp.add_argument("--lo", type=float, default=0.01)
    sp.add_argument("--hi", type=float, default=0.99)
    out(sp)
    sp.set_defaults(func=cmd_bounds_crossover)
    sp = b.add_parser("dominance", help="check the ordering claims on a grid")
    sp.add_argument("--grid", type=int, default=10_000)
    sp.add_argument("--format", choices=["json", "markdown-table"], default="json")
    out(sp)
    sp.set_defaults(func=cmd_bounds_dominance)

    v = sub.add_parser("verify", help="Monte Carlo verification runs").add_subparsers(
        dest="action", required=True)
    sp = v.add_parser("lemma2", help="closed-form maximum vs golden-section oracle")
    sp.add_argument("--samples", type=int, default=10_000)
    sp.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    sp.add_argument("--tol", type=float, default=1e-6)
    out(sp)
    sp.set_defaults(func=cmd_verify_lemma2)
    sp = v.add_parser("lemma3", help="cap-distance ratio chain")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    out(sp)
    sp.set_defaults(func=cmd_verify_lemma3)
    sp = v.add_parser("identity", help="circumsphere identity and diameter consequence")
    sp.add_argument("--dim", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--s", type=int)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    out(sp)
    sp.set_defaults(func=cmd_verify_identity)

    sp = sub.add_parser("jung", help="enclosing radius vs Jung's bound for a point file")
    sp.add_argument("--input", required=True)
    out(sp)
    sp.set_defaults(func=cmd_jung)

    sp = sub.add_parser("partition", help="partition a point file into parts of diameter < b")
    sp.add_argument("--input", required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--strategy", choices=["shrunk", "split", "orthant"], default="shrunk")
    sp.add_argument("--epsilon", type=float, default=0.01)
    out(sp)
    sp.set_defaults(func=cmd_partition)

    c = sub.add_parser("cover", help="cap coverings").add_subparsers(dest="action", required=True)
    sp = c.add_parser("circle", help="exact circle count (and a greedy cover with --mesh)")
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--rho", type=float, required=True)
    sp.add_argument("--mesh", type=int)
    sp.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    out(sp)
    sp.set_defaults(func=cmd_cover_circle)
    sp = c.add_parser("sphere", help="greedy cover of the 2-sphere")
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--rho", type=float, required=True)
    sp.add_argument("--mesh", type=int, default=capcover.DEFAULT_MESH[3])
    sp.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    out(sp)
    sp.set_defaults(func=cmd_cover_sphere)

    sp = sub.add_parser("hierarchy", help="nested cap coverings with structural verification")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--lambda", dest="lam", type=_number, required=True,
                    help="in (1/2, 5/9]; fractions like 5/9 are accepted")
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--mesh", type=int)
    sp.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
    out(sp)
    sp.set_defaults(func=cmd_hierarchy)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, RejectedInputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
