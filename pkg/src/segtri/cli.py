"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 infeasible target,
3 conversion collision, 4 invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io
from .conversion import bbm_convert, revised_convert
from .errors import DecompositionError, ValidationError
from .fixtures import DEMOS
from .market import fmt, optimal_price_set
from .plot import triangle_csv, triangle_svg
from .segmentation import joint_distribution, non_optimal_prices, revise, surplus, triangle
from .synthesis import is_unit_elastic, prop3_point_set, synthesize_direct
from .verify import prop3_search, verify_direct

EXIT_OK, EXIT_VERIFY, EXIT_INFEASIBLE, EXIT_COLLISION, EXIT_INVALID = 0, 1, 2, 3, 4


class InvalidInput(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INVALID)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _prices(ks) -> str:
    return "{" + ", ".join(str(k + 1) for k in ks) + "}"


def cmd_analyze(args) -> int:
    inst = io.load_instance(args.instance)
    tri = triangle(inst)
    P = optimal_price_set(inst.grid, inst.aggregate)
    unit = is_unit_elastic(inst)
    info = {
        "K": inst.K,
        "pi_star": io.format_rational(tri.pi_star),
        "w_star": io.format_rational(tri.w_star),
        "optimal_price_indices": list(P),
        "unit_elastic": unit,
    }
    if unit:
        info["prop3_points"] = [io.format_rational(q) for q in prop3_point_set(inst)]
    if args.format == "json":
        sys.stdout.write(json.dumps(info) + "\n")
        return EXIT_OK
    print(f"K = {inst.K}")
    print(f"valuations = {fmt(inst.grid)}")
    print(f"aggregate x* = {inst.aggregate}")
    print(f"pi* = {tri.pi_star}")
    print(f"w* = {tri.w_star}")
    print(f"optimal prices of x* (1-based) = {_prices(P)}")
    print(f"x* = x^V: {'yes' if unit else 'no'}")
    if unit:
        print("attainable u at pi = pi*: " + ", ".join(map(str, prop3_point_set(inst))))
    return EXIT_OK


def cmd_synthesize(args) -> int:
    inst = io.load_instance(args.instance)
    u, pi = io.parse_rational(args.u), io.parse_rational(args.pi)
    res = synthesize_direct(inst, u, pi)
    if not res.success:
        print(f"infeasible: {res.reason}")
        return EXIT_INFEASIBLE
    _emit(io.dumps(io.direct_to_doc(res.direct)), args.out)
    a = res.achieved
    print(f"achieved u = {a.u}, pi = {a.pi} (route {res.route})", file=sys.stdout if args.out else sys.stderr)
    return EXIT_OK


def cmd_convert_direct(args) -> int:
    doc = io.load_segmentation(args.file)
    if args.revised:
        rho = doc.revised() if doc.kind != io.GENERAL else revise(*doc.general())
        out = revised_convert(rho)
        _emit(io.dumps(io.revised_to_doc(out)), args.out)
        return EXIT_OK
    if doc.kind == io.REVISED:
        raise InvalidInput("revised segmentation given; use --revised")
    seg, rule = doc.general()
    outcome = bbm_convert(seg, rule)
    if not outcome.success:
        for c in outcome.collisions:
            lhs = " = ".join(f"x^{k + 1}" for k in c.prices)
            print(f"collision: {lhs} = {c.market}")
        return EXIT_COLLISION
    _emit(io.dumps(io.direct_to_doc(outcome.direct)), args.out)
    return EXIT_OK


def _load_points(path: str | None):
    if not path:
        return []
    text = io.read_text(path).strip()
    if not text:
        return []
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path}: not valid JSON ({exc})") from exc
    if isinstance(raw, dict):
        raw = raw.get("points", [])
    if not isinstance(raw, list) or any(not isinstance(p, list) or len(p) != 2 for p in raw):
        raise InvalidInput("points must be a list of [u, pi] pairs")
    return [(io.parse_rational(u), io.parse_rational(pi)) for u, pi in raw]


def cmd_triangle(args) -> int:
    inst = io.load_instance(args.instance)
    points = _load_points(args.points)
    render = triangle_svg if args.emit == "svg" else triangle_csv
    _emit(render(inst, points), args.out)
    return EXIT_OK


def cmd_demo(args) -> int:
    if args.name not in DEMOS:
        raise InvalidInput(f"unknown demo {args.name!r}; choose from {', '.join(DEMOS)}")
    seg, rule = DEMOS[args.name]()
    if args.format == "json":
        sys.stdout.write(io.dumps(io.general_to_doc(seg, rule)))
        return EXIT_OK
    inst = seg.instance
    print(f"{args.name}: V = {fmt(inst.grid)}, x* = {inst.aggregate}")
    print("segmentation and pricing:")
    for x, w, row in zip(seg.markets, seg.weights, rule.rows):
        print(f"  sigma{x} = {w}, phi = {fmt(row)}")
    pt, tot = surplus(seg, rule)
    print(f"surplus: u = {pt.u}, pi = {pt.pi}, total = {tot}")
    joint = joint_distribution(seg, rule)
    print("joint distribution (rows: valuation, columns: price):")
    for j, r in enumerate(joint.mass):
        print(f"  v={inst.grid[j]}: " + "  ".join(str(m) for m in r))
    outcome = bbm_convert(seg, rule)
    print("pooling by posted price:")
    for e in outcome.induced:
        print(f"  price {inst.grid[e.price]}: weight {e.weight}, x^{e.price + 1} = {e.market}")
    for c in outcome.collisions:
        print("collision: " + " = ".join(f"x^{k + 1}" for k in c.prices) + f" = {c.market}")
        print("  no direct segmentation reproduces this joint distribution")
    fixed = revised_convert(revise(seg, rule))
    print("revised definition, pooled over (market, price) pairs:")
    for a in fixed.atoms:
        print(f"  sigma'({a.market}, price {inst.grid[a.price]}) = {a.weight}")
    same = fixed.joint_distribution() == joint
    print(f"joint distribution preserved: {'yes' if same else 'no'}")
    return EXIT_OK


def cmd_verify(args) -> int:
    doc = io.load_segmentation(args.file)
    lines: list[str] = []
    ok = True
    try:
        if doc.kind == io.DIRECT:
            rep = verify_direct(doc.instance, doc.direct(check=False))
            lines.append(str(rep))
            ok = rep.overall
        elif doc.kind == io.REVISED:
            doc.revised()
            lines.append("ok   revised segmentation valid")
        else:
            seg, rule = doc.general()
            bad = non_optimal_prices(seg, rule)
            for i, k in bad:
                lines.append(f"FAIL optimal: price index {k} posted on non-optimal segment {seg.markets[i]}")
            ok = not bad
            if ok:
                lines.append("ok   segmentation and pricing valid")
    except ValidationError as exc:
        lines.append(f"FAIL invariant: {exc}")
        ok = False
    print("\n".join(lines), file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_search(args) -> int:
    inst = io.load_instance(args.instance)
    if not is_unit_elastic(inst):
        raise InvalidInput("search needs an aggregate equal to x^V")
    rep = prop3_search(inst, args.trials, seed=args.seed)
    print(str(rep))
    return EXIT_OK if rep.overall else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="segtri", description="Exact market segmentation and surplus-triangle tools.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="triangle quantities of an instance")
    a.add_argument("instance")
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("synthesize", help="direct segmentation reaching a target (u, pi)")
    s.add_argument("instance")
    s.add_argument("--u", required=True)
    s.add_argument("--pi", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_synthesize)

    c = sub.add_parser("convert", help="pool a segmentation into a direct one")
    c.add_argument("file", help="segmentation file, or - for stdin")
    c.add_argument("--revised", action="store_true", help="use (market, price) pairs; always succeeds")
    c.add_argument("--out")
    c.set_defaults(func=cmd_convert_direct)

    t = sub.add_parser("triangle", help="CSV or SVG of the surplus triangle")
    t.add_argument("instance")
    t.add_argument("--emit", choices=("csv", "svg"), default="csv")
    t.add_argument("--points", help="JSON list of [u, pi] pairs to overlay")
    t.add_argument("--out")
    t.set_defaults(func=cmd_triangle)

    d = sub.add_parser("demo", help="narrated counterexample")
    d.add_argument("name")
    d.add_argument("--format", choices=("text", "json"), default="text")
    d.set_defaults(func=cmd_demo)

    v = sub.add_parser("verify", help="check a segmentation file")
    v.add_argument("file")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("search", help="random search on an equal-revenue aggregate")
    r.add_argument("instance")
    r.add_argument("--trials", type=int, default=1000)
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(func=cmd_search)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InvalidInput, ValidationError, DecompositionError, OSError, TypeError, ZeroDivisionError) as exc:
        print(f"segtri: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
