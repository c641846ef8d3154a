"""Command-line front end.

Exit codes: 0 for success (Found / CrossingFree / lemma upheld), 1 for a
negative verdict (NotFound, Violation, chain too short, configuration
found), 2 for input errors.  The TREELINES_SEED environment variable
supplies the default --seed.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from . import embed, io_formats, lineset, ramsey, svg, unstretch
from .geometry import Segment
from .lineset import ColorClasses, LineSetError, all_region_indices, \
    classify_cap_cup, longest_cap_cup, region_hull, verify_general_position


def _default_seed() -> int:
    try:
        return int(os.environ.get("TREELINES_SEED", "0"))
    except ValueError:
        return 0


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="treelines",
        description="Exact tools for crossing-free tree embeddings on "
                    "line arrangements.",
        epilog="TREELINES_SEED sets the default --seed for randomized "
               "subcommands.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="general position, slope order and "
                                       "cap/cup structure of a line file")
    p.add_argument("lines")

    p = sub.add_parser("extract-cap", help="largest cap or cup subset")
    p.add_argument("lines")

    p = sub.add_parser("extract-monotone",
                       help="monotone angle-gap chain")
    p.add_argument("lines")

    p = sub.add_parser("extract-doubling",
                       help="doubling angle-gap chain")
    p.add_argument("lines")

    p = sub.add_parser("check", help="verify an embedding file")
    p.add_argument("instance")
    p.add_argument("embedding")

    p = sub.add_parser("solve", help="search for a crossing-free embedding")
    p.add_argument("instance")
    p.add_argument("--refine", type=int, default=4)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--seed", type=int, default=_default_seed())

    p = sub.add_parser("scan", help="solve every bijection of an "
                                    "assignment-free instance")
    p.add_argument("instance")
    p.add_argument("--refine", type=int, default=4)
    p.add_argument("--budget", type=int, default=1000)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--force", action="store_true",
                   help="allow n > 7 despite the factorial cost")

    p = sub.add_parser("unstretch",
                       help="frame validation plus configuration search")
    p.add_argument("lines6")
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=_default_seed())

    p = sub.add_parser("regions", help="region partition hulls")
    p.add_argument("lines")
    p.add_argument("--c", type=int, required=True, dest="classes")
    p.add_argument("--svg", dest="svg_out")

    p = sub.add_parser("render", help="draw an instance (and embedding)")
    p.add_argument("instance")
    p.add_argument("embedding", nargs="?")
    p.add_argument("--svg", dest="svg_out", required=True)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (io_formats.ParseError, LineSetError, embed.EmbedError,
            unstretch.FrameError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "analyze":
        ls = io_formats.parse_lines(_read(args.lines))
        print(f"lines: {len(ls)}")
        print("general position: yes")
        print("slope order: " +
              " ".join(f"{l.id}:{l.slope}" for l in ls))
        print(f"cap/cup: {classify_cap_cup(ls).value}")
        return 0

    if cmd == "extract-cap":
        ls = io_formats.parse_lines(_read(args.lines))
        kind, sub_ls = longest_cap_cup(ls)
        ids = sorted(l.id for l in ls
                     if any(l.slope == m.slope and
                            l.dual_offset == m.dual_offset for m in sub_ls))
        print(f"{kind.value}: size {len(sub_ls)}")
        print("ids: " + " ".join(map(str, ids)))
        return 0

    if cmd == "extract-monotone":
        ls = io_formats.parse_lines(_read(args.lines))
        chain = ramsey.extract_monotone_gaps(ls)
        print(f"direction: {chain.direction.value}")
        print("ids: " + " ".join(map(str, chain.ids)))
        return 0

    if cmd == "extract-doubling":
        ls = io_formats.parse_lines(_read(args.lines))
        try:
            chain = ramsey.extract_doubling(ls)
        except ramsey.ChainTooShort as exc:
            print(f"no chain: {exc}")
            return 1
        print(f"variant: {chain.variant.value}")
        print("ids: " + " ".join(map(str, chain.ids)))
        return 0

    if cmd == "check":
        ls, tree, asg = io_formats.parse_instance(_read(args.instance))
        emb = io_formats.parse_embedding(_read(args.embedding), tree.n)
        report = embed.check_embedding(ls, tree, asg, emb)
        for w in report.warnings:
            print(f"warning: {w}")
        if report.crossing_free:
            print("CrossingFree")
            return 0
        for v in report.violations:
            print(f"Violation: {v.kind.value} witness={v.witness}")
        return 1

    if cmd == "solve":
        ls, tree, asg = io_formats.parse_instance(_read(args.instance))
        res = embed.solve(ls, tree, asg, args.refine, args.budget, args.seed)
        if res.found:
            print("Found")
            sys.stdout.write(io_formats.serialize_embedding(res.embedding))
            return 0
        print(f"NotFound after {res.nodes} nodes and {res.restarts} "
              f"restarts (not a proof of non-embeddability)")
        return 1

    if cmd == "scan":
        ls, tree, _ = io_formats.parse_instance(_read(args.instance),
                                                require_assign=False)
        report = embed.scan_universality(ls, tree, args.refine, args.budget,
                                         seed=args.seed, force=args.force)
        print(f"found {len(report.found)}/{report.total}")
        for iota in report.candidates:
            print("candidate witness (unproven): " +
                  " ".join(map(str, iota)))
        return 0 if report.all_found else 1

    if cmd == "unstretch":
        ls = io_formats.parse_lines(_read(args.lines6))
        frame = unstretch.validate_frame(ls, [l.id for l in ls])
        print(f"frame: {frame.cap_cup.value}, {frame.variant.value} variant")
        cfg = unstretch.feasibility_search(frame, args.samples, args.seed)
        if cfg is None:
            print(f"no configuration found in {args.samples} samples")
            return 0
        print("configuration found:")
        for j, e in enumerate(cfg.edges, 1):
            print(f"  e{j}: ({e.p.x}, {e.p.y}) -- ({e.q.x}, {e.q.y})")
        cv = unstretch.derive_chain(frame, cfg)
        try:
            verdict = unstretch.lemma24_check(cv).value
        except unstretch.HypothesisFail as exc:
            verdict = f"hypothesis failed: {exc}"
        print(f"chain check: {verdict}")
        return 1

    if cmd == "regions":
        ls = io_formats.parse_lines(_read(args.lines))
        cc = ColorClasses(args.classes, len(ls))
        scene = svg.SvgScene(lines=list(ls), points=ls.intersection_points())
        for r in all_region_indices(cc):
            h = region_hull(ls, cc, r)
            scene.hulls.append(h)
            kind = "bounded" if h.bounded else "unbounded"
            print(f"R_{{{r.a},{r.b}}}: {h.side_count} sides, {kind}")
        if args.svg_out:
            with open(args.svg_out, "wb") as fh:
                fh.write(svg.render_svg(scene))
            print(f"wrote {args.svg_out}")
        return 0

    if cmd == "render":
        ls, tree, asg = io_formats.parse_instance(_read(args.instance))
        scene = svg.SvgScene(lines=list(ls), points=ls.intersection_points())
        if args.embedding:
            emb = io_formats.parse_embedding(_read(args.embedding), tree.n)
            pts = [emb.point_of(ls, asg, v) for v in range(tree.n)]
            scene.vertices = [(pts[v], str(v)) for v in range(tree.n)]
            scene.segments = [Segment(pts[u], pts[v])
                              for u, v in tree.edges if pts[u] != pts[v]]
        with open(args.svg_out, "wb") as fh:
            fh.write(svg.render_svg(scene))
        print(f"wrote {args.svg_out}")
        return 0

    raise AssertionError(f"unhandled command {cmd}")


if __name__ == "__main__":
    sys.exit(main())
