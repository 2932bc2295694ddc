"""Command line front end.

Exit codes: 0 success, 1 runtime error, 2 usage error, 3 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time

import numpy as np

from . import errors
from .bruhat import (
    covering_relations, hasse_dot, involution_action, position_space, space_to_json,
)
from .domain import (
    load_group_spec, render_sphere, sample_limit_set, schottky_example, sphere_space,
)
from .flags import canonicalize, default_eps, relative_position
from .ideals import (
    census_to_json, enumerate_balanced, grassmannian_exists,
    grassmannian_fixed_point_oracle, is_balanced, minimal_fat_ideal,
)
from .io import format_matrix, parse_element, parse_type, read_matrices
from .representations import (
    block_transversality, hitchin_w0,
)
from .weyl import GroupContext, compose, identity, to_matrix

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2, 3

log = logging.getLogger("oriflag")


class UsageError(Exception):
    pass


class Mismatch(Exception):
    pass


def _ctx(args) -> GroupContext:
    try:
        return GroupContext(args.n, args.projective)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _w0(args, ctx):
    if args.w0 == "hitchin":
        w = hitchin_w0(ctx.n)
        if w.projective != ctx.projective:
            raise UsageError("--w0 hitchin needs --projective exactly when n is even")
        return w
    try:
        return parse_element(args.w0, ctx.projective)
    except ValueError as exc:
        raise UsageError(f"bad --w0: {exc}") from exc


def _space(args, ctx, w0=None):
    if getattr(args, "sphere", False):
        if ctx.projective:
            raise UsageError("--sphere needs odd n")
        return sphere_space(ctx.n)
    extra = [compose(w0, w0)] if w0 is not None else []
    try:
        R = parse_type(ctx, args.R, extra)
        S = parse_type(ctx, args.S)
    except (ValueError, errors.InvalidParabolicType) as exc:
        raise UsageError(f"bad type spec: {exc}") from exc
    return position_space(ctx, R, S, force=args.force)


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_weyl(args) -> int:
    ctx = _ctx(args)
    space = position_space(ctx, force=args.force)
    action = involution_action(space, _w0(args, ctx)) if args.w0 else None
    if args.format == "dot":
        _write(args.out, hasse_dot(space, action, name="weyl"))
    else:
        _write(args.out, space_to_json(space))
    log.info("%d elements, %d covering relations", len(space), len(covering_relations(space)))
    return EXIT_OK


def cmd_positions(args) -> int:
    ctx = _ctx(args)
    space = _space(args, ctx)
    if args.format == "dot":
        _write(args.out, hasse_dot(space))
    elif args.format == "json":
        _write(args.out, space_to_json(space))
    else:
        lines = [f"classes={len(space)}"]
        for i in range(len(space)):
            below = [space.label(j) for j in range(len(space)) if j != i and space.leq(j, i)]
            lines.append(f"[{i}] {space.label(i)}  >  " + (", ".join(below) if below else "-"))
        _write(args.out, "\n".join(lines))
    return EXIT_OK


def cmd_ideals(args) -> int:
    ctx = _ctx(args)
    w0 = _w0(args, ctx)
    space = _space(args, ctx, w0)
    action = involution_action(space, w0)
    t = time.perf_counter()
    census = enumerate_balanced(space, action)
    log.info("enumeration took %.3fs", time.perf_counter() - t)
    print(f"count={census.count} classes={len(census.mbar_classes)}")
    if args.json:
        _write(args.json, census_to_json(census))
    if args.list:
        for I in census.ideals:
            print("{" + ", ".join(I.labels()) + "}")
    if args.verify:
        if not all(is_balanced(I, action) for I in census.ideals):
            raise Mismatch("an enumerated ideal is not balanced")
        if census.count:
            if minimal_fat_ideal(space, action) not in census.ideals:
                raise Mismatch("greedy minimal fat ideal missing from the census")
        again = enumerate_balanced(space, action, shuffle_seed=args.seed)
        if {I.members for I in again.ideals} != {I.members for I in census.ideals}:
            raise Mismatch("census depends on the branching order")
        print("verify: ok")
    return EXIT_OK


def cmd_grassmannian(args) -> int:
    if args.n < 3:
        raise UsageError("--n must be at least 3")
    bad = 0
    for k in range(1, args.n):
        closed = grassmannian_exists(args.n, k)
        oracle = grassmannian_fixed_point_oracle(args.n, k)
        note = "" if closed == oracle else "  (oracle disagrees)"
        bad += closed != oracle
        print(f"k={k}: {'exists' if closed else 'no'}{note}")
    if bad:
        raise Mismatch(f"{bad} rows disagree with the fixed-point oracle")
    return EXIT_OK


def cmd_relpos(args) -> int:
    ctx = _ctx(args)
    space = _space(args, ctx)
    mats = []
    for path in (args.a, args.b):
        m = read_matrices(path)[0]
        if len(m) != ctx.n:
            raise UsageError(f"{path}: expected a {ctx.n}x{ctx.n} matrix")
        mats.append(m)
    eps = args.eps if args.eps is not None else default_eps()
    F1, F2 = (canonicalize(np.array(m, dtype=float), eps) for m in mats)
    cls = relative_position(F1, F2, space, eps=eps, snap=args.snap)
    if cls == space.class_of[identity(ctx)]:
        print("identity")
    else:
        print(space.label(cls))
    return EXIT_OK


def cmd_wk(args) -> int:
    n, k = args.n, args.k
    if n % 2 == 0 and k != 0:
        raise UsageError("block types need odd n")
    if not 0 <= k <= n - 1:
        raise UsageError("need 0 <= k <= n-1")
    try:
        computed, formula = block_transversality(n, k)
        verdict = "match"
    except errors.VerificationError as exc:
        print(str(exc))
        verdict = "MISMATCH"
        computed = formula = None
    if computed is not None:
        print("computed (canonical form):")
        print(format_matrix(to_matrix(computed)))
        print("formula (canonical form):")
        print(format_matrix(to_matrix(formula)))
    print(f"verdict: {verdict}")
    if verdict != "match":
        raise Mismatch("w_k disagrees with the closed form")
    return EXIT_OK


def cmd_domain_render(args) -> int:
    if args.group:
        with open(args.group, encoding="utf-8") as fh:
            spec = load_group_spec(json.load(fh))
    else:
        spec = schottky_example(3, args.length)
    if spec.n != 3:
        raise UsageError("rendering supports n = 3 only")
    space = sphere_space(3)
    w0 = parse_element(args.w0)
    action = involution_action(space, w0)
    census = enumerate_balanced(space, action)
    if not 0 <= args.ideal < census.count:
        raise UsageError(f"--ideal must be in 0..{census.count - 1}")
    ideal = census.ideals[args.ideal]
    twist = parse_element(args.twist) if args.twist else None
    t = time.perf_counter()
    samples = sample_limit_set(spec, args.L, twist=twist)
    img = render_sphere(spec, args.L, ideal, args.width, args.height, tol=args.tol, samples=samples)
    img.save(args.out)
    log.info("rendered %d samples in %.2fs", len(samples), time.perf_counter() - t)
    print(f"wrote {args.out} ({args.width}x{args.height}, {len(samples)} limit flags, "
          f"ideal {{{', '.join(ideal.labels())}}})")
    return EXIT_OK


def _add_group(p, n_default=None):
    p.add_argument("--n", type=int, required=n_default is None, default=n_default)
    p.add_argument("--projective", action="store_true", help="work in PSL(n) (n even)")
    p.add_argument("--force", action="store_true", help="allow large full posets (n >= 5)")


def _add_types(p):
    p.add_argument("--R", default=None, help="left type, e.g. 'theta=1;E=-+-'")
    p.add_argument("--S", default=None, help="right type, same syntax")
    p.add_argument("--sphere", action="store_true",
                   help="use the oriented-line space on S^{n-1} instead of --R/--S")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oriflag", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0, help="seed for randomised checks")
    parser.add_argument("--jobs", type=int, default=1, help="worker count (accepted for scripting; work is single-threaded)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    weyl = sub.add_parser("weyl", help="the extended Weyl group")
    wsub = weyl.add_subparsers(dest="weyl_command", required=True)
    order = wsub.add_parser("order", help="refined Bruhat order of the full group")
    _add_group(order)
    order.add_argument("--w0", default=None, help="draw the involution of this transverse element")
    order.add_argument("--format", choices=("dot", "json"), default="dot")
    order.add_argument("--out", default=None)
    order.set_defaults(func=cmd_weyl)

    pos = sub.add_parser("positions", help="the poset of relative positions R\\W/S")
    _add_group(pos)
    _add_types(pos)
    pos.add_argument("--format", choices=("text", "dot", "json"), default="text")
    pos.add_argument("--out", default=None)
    pos.set_defaults(func=cmd_positions)

    ide = sub.add_parser("ideals", help="census of balanced ideals")
    _add_group(ide)
    _add_types(ide)
    ide.add_argument("--w0", required=True, help="antidiag:+,-,+ or 'hitchin'")
    ide.add_argument("--json", default=None, help="write the census as JSON")
    ide.add_argument("--list", action="store_true", help="print every ideal")
    ide.add_argument("--verify", action="store_true")
    ide.set_defaults(func=cmd_ideals)

    gr = sub.add_parser("grassmannian", help="existence table for oriented Grassmannians")
    gr.add_argument("--n", type=int, required=True)
    gr.add_argument("--verify", action="store_true", help="(always on) cross-check with the oracle")
    gr.set_defaults(func=cmd_grassmannian)

    rp = sub.add_parser("relpos", help="relative position of two flags given as matrices")
    _add_group(rp)
    _add_types(rp)
    rp.add_argument("a")
    rp.add_argument("b")
    rp.add_argument("--eps", type=float, default=None)
    rp.add_argument("--snap", action="store_true", help="resolve ambiguous pivots instead of failing")
    rp.set_defaults(func=cmd_relpos)

    wk = sub.add_parser("wk", help="transversality type of a block embedding")
    wk.add_argument("--n", type=int, required=True)
    wk.add_argument("--k", type=int, required=True, help="block size; 0 for the irreducible case")
    wk.add_argument("--verify", action="store_true", help="(always on) compare with the closed form")
    wk.set_defaults(func=cmd_wk)

    dom = sub.add_parser("domain", help="domains of discontinuity")
    dsub = dom.add_subparsers(dest="domain_command", required=True)
    rend = dsub.add_parser("render", help="rasterise K on S^2 as a PPM image")
    rend.add_argument("--group", default=None, help="JSON group spec; default is a rank 2 Schottky group")
    rend.add_argument("--length", type=float, default=1.5, help="translation parameter of the default group")
    rend.add_argument("--L", type=int, default=8, help="maximal word length")
    rend.add_argument("--width", type=int, default=400)
    rend.add_argument("--height", type=int, default=200)
    rend.add_argument("--w0", default="antidiag:+,-,+")
    rend.add_argument("--ideal", type=int, default=0, help="index into the sorted census")
    rend.add_argument("--twist", default=None, help="right M-bar twist of the lift, e.g. diag:-,+,-")
    rend.add_argument("--tol", type=float, default=None, help="membership tolerance (default pi/height)")
    rend.add_argument("--out", required=True)
    rend.set_defaults(func=cmd_domain_render)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    random.seed(args.seed)
    np.random.seed(args.seed)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"oriflag: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Mismatch as exc:
        print(f"oriflag: verification failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except errors.VerificationError as exc:
        print(f"oriflag: verification failed: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (errors.OriflagError, ValueError, OSError) as exc:
        print(f"oriflag: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
