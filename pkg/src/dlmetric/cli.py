"""Command line entry point: ``dlmetric [global flags] <command> [flags]``.

Exit codes: 0 success, 1 a verification failed, 2 usage or input error,
3 resource budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from .errors import CacheError, DLError, ParamError, ParseError, ResourceError
from .geometry import project, project_relative, projection_to_dict, tree_distance
from .group import elem_to_dict, format_word, invert, multiply, parse_elem_or_word
from .metric import explain, geodesic_word, quasi_geodesic, word_length
from .oracle import (
    bfs_ball,
    cone_census,
    dead_end_scan,
    load_ball,
    save_ball,
    states_for_budget,
    verify_formula,
)
from .ring import validate_params
from .witnesses import cone_witness, deadend_witness, hn_sweep

log = logging.getLogger("dlmetric")

SCHEMA_VERSION = 1
EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 1, 2, 3


def _residues(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad residue list {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dlmetric", description=__doc__.splitlines()[0])
    ap.add_argument("--d", type=int, default=3, help="number of trees (default 3)")
    ap.add_argument("--q", type=int, default=2, help="ring order / branching (default 2)")
    ap.add_argument("--residues", type=_residues, default=None, help="l_1,...,l_{d-1}")
    ap.add_argument("--cache", help="ball cache file (JSON lines)")
    ap.add_argument("--out", help="write the main output here instead of stdout")
    ap.add_argument("--mem-budget", type=int, default=None, help="byte budget for BFS")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ball", help="compute a BFS ball and its growth series")
    p.add_argument("--radius", type=int, required=True)

    p = sub.add_parser("verify", help="compare the formula with BFS distances")
    p.add_argument("--radius", type=int, required=True)

    for name, help_ in (("len", "length, formula breakdown and a geodesic"),
                        ("qgeo", "quasi-geodesic word and its bounds")):
        p = sub.add_parser(name, help=help_)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--word", help='generator word, e.g. "u1:1 m1,2:0"')
        src.add_argument("--elem", help="element JSON")

    p = sub.add_parser("dist", help="distance between two elements")
    p.add_argument("--g", required=True, help="element JSON or word")
    p.add_argument("--h", required=True, help="element JSON or word")

    p = sub.add_parser("dead-ends", help="scan a ball for dead end elements")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--horizon", type=int, default=3, help="depth search horizon")

    p = sub.add_parser("witness", help="build and certify witness elements")
    p.add_argument("family", choices=["dead-end", "cone"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--horizon", type=int, default=None)

    p = sub.add_parser("hn", help="exhaustive length bound over H_n")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("cone-census", help="count distinct k-cone keys per radius")
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--k", type=int, default=2)
    return ap


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj) -> None:
    _emit(args, json.dumps(obj, indent=2, sort_keys=False) + "\n")


def _emit_csv(args, header: list[str], rows) -> None:
    buf = io.StringIO()
    buf.write(f"# schema_version={SCHEMA_VERSION}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    _emit(args, buf.getvalue())


def _ball(args, params):
    """Fresh or cached ball of the requested radius."""
    if args.cache and os.path.exists(args.cache):
        ball = load_ball(args.cache, params)
        if ball.radius == args.radius:
            log.info("using cached ball %s", args.cache)
            return ball
        log.info("cache radius %d != %d, recomputing", ball.radius, args.radius)
    ball = bfs_ball(params, args.radius, states_for_budget(args.mem_budget))
    if args.cache:
        save_ball(ball, args.cache)
    return ball


def _header(params) -> dict:
    return {"schema_version": SCHEMA_VERSION, **params.header()}


def cmd_ball(args, params) -> int:
    ball = bfs_ball(params, args.radius, states_for_budget(args.mem_budget))
    if args.cache:
        save_ball(ball, args.cache)
    _emit_csv(args, ["radius", "sphere", "ball"], ball.growth_rows())
    return 0


def cmd_verify(args, params) -> int:
    ball = _ball(args, params)
    rep = verify_formula(ball, args.jobs)
    out = _header(params)
    out.update(
        radius=ball.radius,
        cache_hit=ball.cache_hit,
        checked=rep.checked,
        mismatches=len(rep.mismatches),
        mismatch_examples=[
            {"element": elem_to_dict(g), "bfs": r, "formula": f} for g, r, f in rep.mismatches[:20]
        ],
    )
    _emit_json(args, out)
    print(f"{rep.checked} elements checked, {len(rep.mismatches)} mismatches "
          f"({rep.seconds:.1f}s)", file=sys.stderr)
    return 0 if rep.ok else EXIT_FAIL


def _element(args, params):
    return parse_elem_or_word(params, args.word if args.word is not None else args.elem)


def cmd_len(args, params) -> int:
    g = _element(args, params)
    proj = project(params, g)
    word = geodesic_word(params, g)
    out = _header(params)
    out.update(
        element=elem_to_dict(g),
        projection=projection_to_dict(proj),
        length=word_length(proj),
        formula=explain(proj),
        geodesic=format_word(word),
        geodesic_length=len(word),
    )
    _emit_json(args, out)
    return 0 if len(word) == out["length"] else EXIT_FAIL


def cmd_qgeo(args, params) -> int:
    g = _element(args, params)
    proj = project(params, g)
    word = quasi_geodesic(params, g)
    f, dt = word_length(proj), tree_distance(proj)
    expected = sum(m + l for m, l in proj[:-1]) + 2 * proj[-1][1]
    out = _header(params)
    out.update(
        element=elem_to_dict(g),
        projection=projection_to_dict(proj),
        word=format_word(word),
        word_length=len(word),
        expected_word_length=expected,
        length=f,
        tree_distance=dt,
        bounds_ok=f <= len(word) <= 2 * dt and len(word) == expected,
    )
    _emit_json(args, out)
    return 0 if out["bounds_ok"] else EXIT_FAIL


def cmd_dist(args, params) -> int:
    g = parse_elem_or_word(params, args.g)
    h = parse_elem_or_word(params, args.h)
    rel = project_relative(params, g, h)
    dist = word_length(rel)
    cross = word_length(project(params, multiply(params, invert(params, g), h)))
    out = _header(params)
    out.update(
        g=elem_to_dict(g),
        h=elem_to_dict(h),
        relative_projection=projection_to_dict(rel),
        distance=dist,
        cross_check=cross,
        agree=dist == cross,
    )
    _emit_json(args, out)
    return 0 if dist == cross else EXIT_FAIL


def cmd_dead_ends(args, params) -> int:
    ball = _ball(args, params)
    reps = dead_end_scan(ball, args.horizon)
    out = _header(params)
    out.update(
        radius=ball.radius,
        cache_hit=ball.cache_hit,
        certified_up_to_length=ball.radius - 1,
        horizon=args.horizon,
        dead_ends=[r.to_dict() for r in reps],
    )
    _emit_json(args, out)
    return 0


def cmd_witness(args, params) -> int:
    if args.family == "dead-end":
        _, cert = deadend_witness(params, args.n, args.horizon)
    else:
        _, _, cert = cone_witness(params, args.n)
    _emit_json(args, cert)
    return 0 if cert["ok"] else EXIT_FAIL


def cmd_hn(args, params) -> int:
    rep = hn_sweep(params.d, args.n)
    _emit_json(args, rep)
    return 0 if rep["ok"] else EXIT_FAIL


def cmd_cone_census(args, params) -> int:
    ball = _ball(args, params)
    rows = cone_census(ball, args.k, args.jobs)
    _emit_csv(args, ["radius", "sphere_keys", "cumulative_keys"],
              [(r["radius"], r["sphere_keys"], r["cumulative_keys"]) for r in rows])
    return 0


COMMANDS = {
    "ball": cmd_ball,
    "verify": cmd_verify,
    "len": cmd_len,
    "qgeo": cmd_qgeo,
    "dist": cmd_dist,
    "dead-ends": cmd_dead_ends,
    "witness": cmd_witness,
    "hn": cmd_hn,
    "cone-census": cmd_cone_census,
}


def run(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        params = validate_params(args.d, args.q, args.residues)
        if params.warn:
            log.warning("q=%d has a prime factor <= d-1=%d; the Cayley graph identification "
                        "is not guaranteed, rely on `verify`", params.q, params.d - 1)
        return COMMANDS[args.command](args, params)
    except (ParamError, ParseError, CacheError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except DLError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
