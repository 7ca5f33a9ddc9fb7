"""Command-line interface: JSON reports on stdout, exit codes for CI.

Exit codes: 0 success or pass, 1 usage or parse error, 2 check failure,
3 unknown verdict.
"""

from __future__ import annotations

import argparse
import datetime
import hashlib
import json
import sys

from . import __version__
from .core import (Chain, TowerError, build_skeleton, components, dump_tower,
                   is_chain_connected, is_hausdorff_tower, loads_tower, make_chain)
from .cover import (CoverError, TowerMap, build_cover, end_coset, image_subgroup, lift_chain,
                    loads_cover, loads_map)
from .gp import (DEFAULT_WORD_BOUND, CechGroup, SubgroupSpec, escaping_profile,
                 is_closed_subgroup, is_locally_uniform_joinable,
                 is_semilocally_simply_uniform_joinable)
from .pi1 import (DEFAULT_BUDGET, DEFAULT_MAX_COSETS, Overflow, abelian_rank, format_word,
                  parse_word, present_pi1)

SCHEMA = 1
EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_UNKNOWN = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class _Inputs:
    """Reads input files once and records their digests for the header."""

    def __init__(self):
        self.digests = []
        self._stdin = None

    def read(self, path: str) -> str:
        if path == "-":
            if self._stdin is None:
                self._stdin = sys.stdin.read()
            text = self._stdin
        else:
            try:
                with open(path, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise UsageError(f"cannot read {path}: {exc.strerror}") from None
        self.digests.append(hashlib.sha256(text.encode()).hexdigest())
        return text


def _subgroup(arg: str, inputs: _Inputs) -> SubgroupSpec:
    """Inline words ("g1^3, g2"), inline JSON, or a path to subgroup JSON."""
    text = arg.strip()
    if text.startswith("{"):
        return SubgroupSpec.from_dict(json.loads(text))
    if text.endswith(".json"):
        return SubgroupSpec.from_dict(json.loads(inputs.read(text)))
    return SubgroupSpec.parse(text)


def _seq(arg: str) -> tuple:
    parts = [p for p in arg.replace(",", " ").split() if p]
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise UsageError(f"chain must be a list of point ids, got {arg!r}") from None


# ---------------------------------------------------------------------------
# commands: each returns (exit code, result dict, budgets, bounds)

def cmd_space_validate(a, inputs):
    tower = loads_tower(inputs.read(a.file))
    haus, witness = is_hausdorff_tower(tower)
    return EXIT_OK, {
        "valid": True,
        "points": tower.n,
        "levels": tower.k,
        "pairs_per_level": [len(tower.level(i)) for i in range(1, tower.k + 1)],
        "components_per_level": [len(components(tower, i)) for i in range(1, tower.k + 1)],
        "chain_connected": is_chain_connected(tower),
        "hausdorff": haus,
        "hausdorff_witness": list(witness) if witness else None,
    }, {}, {}


def cmd_pi1(a, inputs):
    tower = loads_tower(inputs.read(a.file))
    tower.check_point(a.basepoint)
    level = a.level if a.level is not None else tower.k
    pres = present_pi1(build_skeleton(tower, level), a.basepoint)
    rank, torsion = abelian_rank(pres)
    return EXIT_OK, {
        "level": level,
        "basepoint": a.basepoint,
        "generators": pres.rank,
        "relators": sum(1 for r in pres.relators if r),
        "edges": pres.n_edges,
        "triangles": len(pres.triangles),
        "components": pres.n_components,
        "generator_edges": [list(e) for e in pres.generators],
        "relator_words": [format_word(r) for r in pres.relators if r],
        "abelian": {"rank": rank, "torsion": torsion},
    }, {}, {}


def cmd_cech(a, inputs):
    tower = loads_tower(inputs.read(a.file))
    G = CechGroup(tower, a.basepoint)
    return EXIT_OK, G.to_dict(), {}, {}


def cmd_cover_build(a, inputs):
    tower = loads_tower(inputs.read(a.file))
    tower.check_point(a.basepoint)
    H = _subgroup(a.subgroup, inputs)
    cv = build_cover(tower, a.basepoint, H, a.max_cosets, a.budget, strict=not a.lenient)
    budgets = {"max_cosets": a.max_cosets, "budget": a.budget}
    if isinstance(cv, Overflow):
        return EXIT_UNKNOWN, {"overflow": {"max_cosets": cv.max_cosets, "defined": cv.defined,
                                           "live": cv.live}}, budgets, {}
    img = image_subgroup(cv)
    result = {
        "index": cv.index,
        "points": cv.total.n,
        "fiber_sizes": sorted({len(cv.fiber(y)) for y in cv.group.component}),
        "components_per_level": [len(components(cv.total, i)) for i in range(1, cv.total.k + 1)],
        "image_generators": [format_word(w) for w in img.generators],
        "cover": cv.to_dict(),
    }
    if a.write:
        with open(a.write, "w", encoding="utf-8") as fh:
            fh.write(cv.dumps() + "\n")
        result["written"] = True
    return EXIT_OK, result, budgets, {}


def cmd_cover_lift(a, inputs):
    cv = loads_cover(inputs.read(a.cover), a.max_cosets, a.budget)
    seq = _seq(a.chain)
    level = a.level if a.level is not None else cv.base.k
    chain = make_chain(cv.base, level, seq)
    start = a.start if a.start is not None else cv.point_id(seq[0], 0)
    lift, unique = lift_chain(cv, chain, start)
    return EXIT_OK, {
        "level": level,
        "chain": list(seq),
        "lift": list(lift.seq),
        "lift_points": [list(cv.points[t]) for t in lift.seq],
        "start_coset": cv.points[start][1],
        "end_coset": cv.points[lift.end][1],
        "closed": lift.end == start,
        "unique": unique,
    }, {"max_cosets": a.max_cosets, "budget": a.budget}, {}


def cmd_verify_map(a, inputs):
    from .verify import (FAIL, PASS, UNKNOWN, check_approx_uniqueness, check_chain_lifting,
                         check_generalized_path_lifting, check_generates_structure,
                         check_uniqueness_of_chain_lifts, classify_map, GENERALIZED, UNIFORM)
    src = loads_tower(inputs.read(a.src))
    dst = loads_tower(inputs.read(a.dst))
    f = loads_map(inputs.read(a.map), src, dst)
    budgets = {"max_cosets": a.max_cosets}
    bounds = {"word_bound": a.word_bound}
    if a.classify:
        c = classify_map(f, a.word_bound, a.max_cosets)
        code = {UNIFORM: EXIT_OK, GENERALIZED: EXIT_OK, "Neither": EXIT_FAIL}.get(c["label"], EXIT_UNKNOWN)
        return code, c, budgets, bounds
    reports = [check_generates_structure(f), check_chain_lifting(f),
               check_uniqueness_of_chain_lifts(f), check_approx_uniqueness(f),
               check_generalized_path_lifting(f, a.word_bound, a.max_cosets)]
    verdicts = [r.verdict for r in reports]
    code = EXIT_FAIL if FAIL in verdicts else EXIT_UNKNOWN if UNKNOWN in verdicts else EXIT_OK
    return code, {"reports": [r.to_dict() for r in reports]}, budgets, bounds


def cmd_verify_laws(a, inputs):
    from .laws import law_harness
    r = law_harness(a.suite, a.seed, a.instances, a.max_cosets, not a.no_corpus)
    code = EXIT_FAIL if r["conclusion_failures"] else EXIT_UNKNOWN if r["unknown"] else EXIT_OK
    return code, r, {"max_cosets": a.max_cosets}, {"instances": a.instances}


def cmd_analyze_subgroup(a, inputs):
    tower = loads_tower(inputs.read(a.file))
    G = CechGroup(tower, a.basepoint)
    H = _subgroup(a.subgroup, inputs)
    verdict, info = is_closed_subgroup(G, H, a.budget, a.word_bound, a.search_limit)
    _, ssuj = is_semilocally_simply_uniform_joinable(G, a.budget, a.word_bound, a.search_limit)
    result = {"subgroup": H.to_dict(), "closed": verdict.value, "analysis": info,
              "injectivity_profile": ssuj}
    if a.word:
        result["candidate"] = escaping_profile(G, H, parse_word(a.word), a.budget)
    code = {"Yes": EXIT_OK, "No": EXIT_FAIL}.get(verdict.value, EXIT_UNKNOWN)
    return code, result, {"budget": a.budget}, {"word_bound": a.word_bound,
                                                 "search_limit": a.search_limit}


def cmd_analyze_tower(a, inputs):
    tower = loads_tower(inputs.read(a.file))
    G = CechGroup(tower, a.basepoint)
    luj, luj_profile = is_locally_uniform_joinable(G, a.budget, a.max_cosets)
    ssuj, ssuj_profile = is_semilocally_simply_uniform_joinable(G, a.budget, a.word_bound,
                                                                a.search_limit)
    result = {
        "ranks": [G.level_rank(j) for j in range(1, G.k + 1)],
        "chain_connected": is_chain_connected(tower),
        "locally_uniform_joinable": luj.value,
        "joinability_profile": luj_profile,
        "semilocally_simply_uniform_joinable": ssuj.value,
        "injectivity_profile": ssuj_profile,
    }
    code = {"Yes": EXIT_OK, "No": EXIT_FAIL}.get(luj.value, EXIT_UNKNOWN)
    return code, result, {"budget": a.budget, "max_cosets": a.max_cosets}, {
        "word_bound": a.word_bound, "search_limit": a.search_limit}


def cmd_corpus_list(a, inputs):
    from .corpus import RECIPES
    return EXIT_OK, {"recipes": [{"name": r.name, "usage": r.usage,
                                  "defaults": [str(p) for p in r.params]}
                                 for r in RECIPES.values()]}, {}, {}


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="unicover", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"unicover {__version__}")
    p.add_argument("--summary", action="store_true", help="one-line summary on stderr")
    p.add_argument("--out", help="write the report here instead of stdout")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def budget(sp):
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help=f"rewrite-search node budget (default {DEFAULT_BUDGET})")

    def cosets(sp):
        sp.add_argument("--max-cosets", type=int, default=DEFAULT_MAX_COSETS,
                        help=f"coset enumeration limit (default {DEFAULT_MAX_COSETS})")

    space = sub.add_parser("space").add_subparsers(dest="action", required=True,
                                                     parser_class=_Parser)
    sp = space.add_parser("validate")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_space_validate)

    sp = sub.add_parser("pi1")
    sp.add_argument("file")
    sp.add_argument("--level", type=int)
    sp.add_argument("--basepoint", type=int, default=0)
    sp.set_defaults(func=cmd_pi1)

    sp = sub.add_parser("cech")
    sp.add_argument("file")
    sp.add_argument("--basepoint", type=int, default=0)
    sp.set_defaults(func=cmd_cech)

    cover = sub.add_parser("cover").add_subparsers(dest="action", required=True,
                                                     parser_class=_Parser)
    sp = cover.add_parser("build")
    sp.add_argument("file")
    sp.add_argument("--subgroup", required=True,
                    help='words like "g1^3, g2" or subgroup JSON (inline or file)')
    sp.add_argument("--basepoint", type=int, default=0)
    sp.add_argument("--lenient", action="store_true",
                    help="drop pairs with undecided membership instead of failing")
    sp.add_argument("--write", help="also write the cover dump to this path")
    cosets(sp)
    budget(sp)
    sp.set_defaults(func=cmd_cover_build)

    sp = cover.add_parser("lift")
    sp.add_argument("cover")
    sp.add_argument("--chain", required=True)
    sp.add_argument("--level", type=int)
    sp.add_argument("--start", type=int, help="total point id (default: trivial coset)")
    cosets(sp)
    budget(sp)
    sp.set_defaults(func=cmd_cover_lift)

    verify = sub.add_parser("verify").add_subparsers(dest="action", required=True,
                                                       parser_class=_Parser)
    sp = verify.add_parser("map")
    sp.add_argument("src")
    sp.add_argument("dst")
    sp.add_argument("--map", required=True)
    sp.add_argument("--classify", action="store_true")
    sp.add_argument("--word-bound", type=int, default=6)
    cosets(sp)
    sp.set_defaults(func=cmd_verify_map)

    sp = verify.add_parser("laws")
    sp.add_argument("--suite", default="all")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--instances", type=int, default=50)
    sp.add_argument("--no-corpus", action="store_true")
    sp.add_argument("--max-cosets", type=int, default=2_000)
    sp.set_defaults(func=cmd_verify_laws)

    analyze = sub.add_parser("analyze").add_subparsers(dest="action", required=True,
                                                         parser_class=_Parser)
    sp = analyze.add_parser("subgroup")
    sp.add_argument("file")
    sp.add_argument("--subgroup", required=True)
    sp.add_argument("--basepoint", type=int, default=0)
    sp.add_argument("--word", help="candidate limit word to profile")
    sp.add_argument("--word-bound", type=int, default=DEFAULT_WORD_BOUND)
    sp.add_argument("--search-limit", type=int, default=2_000)
    budget(sp)
    sp.set_defaults(func=cmd_analyze_subgroup)

    sp = analyze.add_parser("tower")
    sp.add_argument("file")
    sp.add_argument("--basepoint", type=int, default=0)
    sp.add_argument("--word-bound", type=int, default=DEFAULT_WORD_BOUND)
    sp.add_argument("--search-limit", type=int, default=2_000)
    cosets(sp)
    budget(sp)
    sp.set_defaults(func=cmd_analyze_tower)

    corpus = sub.add_parser("corpus").add_subparsers(dest="action", required=True,
                                                       parser_class=_Parser)
    sp = corpus.add_parser("list")
    sp.set_defaults(func=cmd_corpus_list)
    sp = corpus.add_parser("emit")
    sp.add_argument("name")
    sp.add_argument("params", nargs="*")
    sp.set_defaults(func=None)
    return p


def _echo(argv, files) -> list:
    """Command line with input paths replaced by placeholders."""
    out = []
    for arg in argv:
        out.append("<input>" if arg in files else arg)
    return out


def _emit(payload: dict, out_path: str | None):
    text = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    inputs = _Inputs()
    try:
        args = build_parser().parse_args(argv)
        if args.verb == "corpus" and args.action == "emit":
            from .corpus import emit
            try:
                tower = emit(args.name, *args.params)
            except (TypeError, ValueError) as exc:
                raise UsageError(str(exc)) from None
            sys.stdout.write(dump_tower(tower) + "\n")
            return EXIT_OK
        code, result, budgets, bounds = args.func(args, inputs)
    except UsageError as exc:
        _emit({"schema": SCHEMA, "error": {"type": "usage", "message": str(exc)}}, None)
        return EXIT_USAGE
    except (TowerError, CoverError, ValueError, KeyError) as exc:
        kind = type(exc).__name__
        msg = exc.args[0] if exc.args else str(exc)
        _emit({"schema": SCHEMA, "error": {"type": kind, "message": str(msg)}}, None)
        return EXIT_USAGE
    files = {getattr(args, k) for k in ("file", "cover", "src", "dst", "map")
             if isinstance(getattr(args, k, None), str)}
    header = {
        "tool": "unicover",
        "version": __version__,
        "command": _echo(argv, files),
        "inputs_sha256": inputs.digests,
        "budgets": budgets,
        "bounds": bounds,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
    }
    _emit({"schema": SCHEMA, "header": header, "exit_code": code, "result": result}, args.out)
    if args.summary:
        sys.stderr.write(f"unicover {args.verb}: exit {code}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
