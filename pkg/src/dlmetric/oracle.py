"""Brute-force ground truth: BFS balls in the Cayley graph and what they certify.

Ball distances come only from group multiplication.  Lengths of elements
outside a stored ball are taken from the formula, which :func:`verify_formula`
checks against the ball first.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable

from .errors import (
    CacheParamError,
    CacheVersionError,
    CorruptCacheError,
    ParseError,
    ResourceError,
)
from .group import (
    GroupElem,
    elem_from_dict,
    elem_to_dict,
    generator_elem,
    generators,
    identity,
    multiply,
)
from .metric import length
from .ring import RingParams

FORMAT_VERSION = 1
DEFAULT_MAX_STATES = 10_000_000
# rough resident size of one stored element, used to turn a byte budget into states
BYTES_PER_STATE = 400


def states_for_budget(mem_budget: int | None) -> int:
    if mem_budget is None:
        return DEFAULT_MAX_STATES
    return max(1, mem_budget // BYTES_PER_STATE)


def pmap(fn: Callable, items: list, jobs: int = 1, chunksize: int = 256) -> list:
    """Order-preserving map, optionally across worker processes."""
    if jobs <= 1 or len(items) < 2 * chunksize:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=chunksize))


@dataclass
class BallTable:
    params: RingParams
    radius: int
    entries: dict = field(default_factory=dict)
    cache_hit: bool = False

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, g: GroupElem) -> bool:
        return g in self.entries

    def dist(self, g: GroupElem) -> int | None:
        return self.entries.get(g)

    def spheres(self) -> list[int]:
        out = [0] * (self.radius + 1)
        for r in self.entries.values():
            out[r] += 1
        return out

    def growth_rows(self) -> list[tuple[int, int, int]]:
        rows, total = [], 0
        for r, n in enumerate(self.spheres()):
            total += n
            rows.append((r, n, total))
        return rows

    def sorted_items(self) -> list[tuple[GroupElem, int]]:
        return sorted(self.entries.items())


def bfs_ball(params: RingParams, radius: int, max_states: int = DEFAULT_MAX_STATES) -> BallTable:
    if radius < 0:
        raise ValueError("radius must be non-negative")
    gens = [generator_elem(params, s) for s in generators(params)]
    e = identity(params)
    entries = {e: 0}
    frontier = [e]
    for r in range(1, radius + 1):
        nxt = []
        for g in frontier:
            for s in gens:
                h = multiply(params, g, s)
                if h not in entries:
                    entries[h] = r
                    nxt.append(h)
            if len(entries) > max_states:
                raise ResourceError(
                    f"ball exceeds {max_states} states while expanding sphere {r} "
                    f"(frontier size {len(frontier)}, {len(entries)} stored)"
                )
        frontier = nxt
    return BallTable(params, radius, entries)


def neighbors(params: RingParams, g: GroupElem) -> list[GroupElem]:
    return [multiply(params, g, generator_elem(params, s)) for s in generators(params)]


# -- formula verification ----------------------------------------------------


@dataclass
class VerifyReport:
    checked: int
    mismatches: list
    seconds: float

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _length_of(params: RingParams, g: GroupElem) -> int:
    return length(params, g)


def verify_formula(ball: BallTable, jobs: int = 1) -> VerifyReport:
    t0 = time.perf_counter()
    items = ball.sorted_items()
    lengths = pmap(partial(_length_of, ball.params), [g for g, _ in items], jobs)
    bad = [(g, r, f) for (g, r), f in zip(items, lengths) if r != f]
    return VerifyReport(len(items), bad, time.perf_counter() - t0)


# -- dead ends ---------------------------------------------------------------


@dataclass(frozen=True)
class DeadEndReport:
    element: GroupElem
    length: int
    is_dead_end: bool
    depth: int | None  # None: no escape found within the horizon

    def to_dict(self) -> dict:
        return {
            "element": elem_to_dict(self.element),
            "length": self.length,
            "is_dead_end": self.is_dead_end,
            "depth": "exceeds-horizon" if self.depth is None else self.depth,
        }


def is_dead_end(params: RingParams, g: GroupElem) -> bool:
    n = length(params, g)
    return all(length(params, h) <= n for h in neighbors(params, g))


def dead_end_depth(params: RingParams, g: GroupElem, horizon: int) -> int | None:
    """Length of the shortest generator product from ``g`` leaving its own ball.

    Returns ``None`` when no escape exists within ``horizon`` steps.
    """
    if not is_dead_end(params, g):
        raise ValueError("dead_end_depth needs a dead end element")
    n = length(params, g)
    gens = [generator_elem(params, s) for s in generators(params)]
    seen = {g}
    frontier = [g]
    for r in range(1, horizon + 1):
        nxt = []
        for x in frontier:
            for s in gens:
                y = multiply(params, x, s)
                if y in seen:
                    continue
                if length(params, y) > n:
                    return r
                seen.add(y)
                nxt.append(y)
        frontier = nxt
    return None


def _dead_end_in_ball(ball: BallTable, g: GroupElem) -> bool:
    r = ball.entries[g]
    return all(ball.entries[h] <= r for h in neighbors(ball.params, g))


def dead_end_scan(ball: BallTable, horizon: int = 3) -> list[DeadEndReport]:
    """All dead ends of length at most ``radius - 1``, certified by ball distances.

    Depths come from :func:`dead_end_depth` and therefore from the formula.
    """
    out = []
    for g, r in ball.sorted_items():
        if r < ball.radius and _dead_end_in_ball(ball, g):
            out.append(DeadEndReport(g, r, True, dead_end_depth(ball.params, g, horizon)))
    return out


# -- cone types --------------------------------------------------------------


@dataclass(frozen=True)
class ConeKey:
    k: int
    words: tuple  # sorted tuple of generator words

    def dead_end_distance(self) -> int | None:
        """Shortest outbound word that cannot be extended, if shorter than k."""
        ext = {w[:-1] for w in self.words}
        best = None
        for w in ((),) + self.words:
            if len(w) < self.k and w not in ext:
                if best is None or len(w) < best:
                    best = len(w)
        return best

    def to_dict(self) -> dict:
        return {"k": self.k, "words": [[s.token() for s in w] for w in self.words]}


def cone_key(params: RingParams, g: GroupElem, k: int) -> ConeKey:
    if k < 1:
        raise ValueError("cone depth k must be at least 1")
    gens = generators(params)
    cache: dict = {}

    def flen(x: GroupElem) -> int:
        v = cache.get(x)
        if v is None:
            v = cache[x] = length(params, x)
        return v

    words = []

    def extend(x: GroupElem, fx: int, prefix: tuple) -> None:
        for s in gens:
            y = multiply(params, x, generator_elem(params, s))
            if flen(y) == fx + 1:
                w = prefix + (s,)
                words.append(w)
                if len(w) < k:
                    extend(y, fx + 1, w)

    extend(g, flen(g), ())
    return ConeKey(k, tuple(sorted(words)))


def _key_of(params: RingParams, k: int, g: GroupElem) -> ConeKey:
    return cone_key(params, g, k)


def cone_census(ball: BallTable, k: int, jobs: int = 1) -> list[dict]:
    """Distinct cone keys per sphere and cumulatively up to each radius."""
    items = ball.sorted_items()
    keys = pmap(partial(_key_of, ball.params, k), [g for g, _ in items], jobs, chunksize=64)
    per_sphere: list[set] = [set() for _ in range(ball.radius + 1)]
    for (g, r), key in zip(items, keys):
        per_sphere[r].add(key)
    rows, seen = [], set()
    for r, ks in enumerate(per_sphere):
        seen |= ks
        rows.append({"radius": r, "sphere_keys": len(ks), "cumulative_keys": len(seen)})
    return rows


# -- persistence -------------------------------------------------------------


def save_ball(ball: BallTable, path: str | os.PathLike) -> None:
    header = {"format_version": FORMAT_VERSION, **ball.params.header(), "radius": ball.radius}
    header["entries"] = len(ball)
    with open(path, "w") as fh:
        fh.write(json.dumps(header, separators=(",", ":")) + "\n")
        for g, r in ball.sorted_items():
            fh.write(json.dumps({"elem": elem_to_dict(g), "dist": r}, separators=(",", ":")) + "\n")


def load_ball(path: str | os.PathLike, params: RingParams) -> BallTable:
    with open(path) as fh:
        lines = fh.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise CorruptCacheError("empty file", 1)
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise CorruptCacheError(f"bad header: {exc.msg}", 1) from None
    if header.get("format_version") != FORMAT_VERSION:
        raise CacheVersionError(
            f"cache format {header.get('format_version')!r}, expected {FORMAT_VERSION}"
        )
    if {k: header.get(k) for k in ("d", "q", "residues")} != params.header():
        raise CacheParamError(
            f"cache built for d={header.get('d')}, q={header.get('q')}, "
            f"residues={header.get('residues')}; current d={params.d}, q={params.q}, "
            f"residues={list(params.residues)}"
        )
    radius = header.get("radius")
    if not isinstance(radius, int) or radius < 0:
        raise CorruptCacheError("header radius missing or invalid", 1)
    entries = {}
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            obj = json.loads(line)
            g = elem_from_dict(params, obj["elem"])
            r = obj["dist"]
        except (json.JSONDecodeError, KeyError, TypeError, ParseError) as exc:
            raise CorruptCacheError(f"unreadable entry ({exc})", lineno) from None
        if not isinstance(r, int) or not 0 <= r <= radius:
            raise CorruptCacheError(f"distance {r!r} outside 0..{radius}", lineno)
        entries[g] = r
    expected = header.get("entries")
    if expected is not None and expected != len(entries):
        raise CorruptCacheError(
            f"expected {expected} entries, found {len(entries)} (truncated file?)", len(lines) + 1
        )
    return BallTable(params, radius, entries, cache_hit=True)

