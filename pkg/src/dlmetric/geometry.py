"""Group elements as vertices of the Diestel-Leader graph.

The tree-i vertex of ``(a, P)`` is the ball of radius ``h_i`` around ``P`` in
the tree-i expansion, where ``h_i = k_i`` for ``i < d`` and
``h_d = -(k_1 + ... + k_{d-1})``.  A projection is a tuple of ``d`` pairs
``(m_i, l_i)``: the distances from the reference vertex and from the element's
vertex to their confluence in tree ``i``.
"""

from __future__ import annotations

from typing import Sequence

from .errors import InfeasibleProjection
from .group import Generator, GroupElem, Kind
from .ring import RingParams, digits, rat_sub, valuation

Projection = tuple  # tuple[tuple[int, int], ...]


def heights(g: GroupElem) -> tuple:
    return g.k + (-sum(g.k),)


def project(params: RingParams, g: GroupElem) -> Projection:
    pairs = []
    for i, h in enumerate(heights(g), start=1):
        c = min(0, h, valuation(params, g.p, i))
        pairs.append((-c, h - c))
    return tuple(pairs)


def project_relative(params: RingParams, g: GroupElem, base: GroupElem) -> Projection:
    """Projection of ``g`` seen from ``base`` instead of the identity."""
    diff = rat_sub(params, g.p, base.p)
    pairs = []
    for i, (hg, hb) in enumerate(zip(heights(g), heights(base)), start=1):
        c = min(hg, hb, valuation(params, diff, i))
        pairs.append((hb - c, hg - c))
    return tuple(pairs)


def tree_distance(proj: Projection) -> int:
    return sum(m + l for m, l in proj)


def check_projection(proj: Sequence[Sequence[int]], d: int | None = None) -> Projection:
    """Validate a candidate projection and return it as a tuple of pairs."""
    pairs = tuple((int(m), int(l)) for m, l in proj)
    if d is not None and len(pairs) != d:
        raise InfeasibleProjection(f"expected {d} pairs, got {len(pairs)}")
    if len(pairs) < 2:
        raise InfeasibleProjection("a projection needs at least two pairs")
    for idx, (m, l) in enumerate(pairs, start=1):
        if m < 0 or l < 0:
            raise InfeasibleProjection(f"pair {idx} = ({m}, {l}) has a negative entry")
    bal = sum(l - m for m, l in pairs)
    if bal:
        raise InfeasibleProjection(f"sum of l_i - m_i is {bal}, must be 0")
    return pairs


def edge_type_of(s: Generator, d: int) -> tuple[int, int]:
    """(up, down) tree indices of the edge type e_up - e_down realized by ``s``."""
    if s.kind is Kind.UP:
        return (s.i, d)
    if s.kind is Kind.DOWN:
        return (d, s.i)
    return (s.i, s.j)


def generator_for(edge: tuple[int, int], b: int, d: int) -> Generator:
    """The generator of the given edge type with offset ``b``."""
    up, down = edge
    if down == d:
        return Generator.up(up, b)
    if up == d:
        return Generator.down(down, b)
    return Generator.mixed(up, down, b)


def tree_digits(params: RingParams, g: GroupElem, i: int, lo: int, hi: int) -> list[int]:
    return digits(params, g.p, i, lo, hi)


def tree_vertex(params: RingParams, g: GroupElem, i: int) -> tuple:
    """Hashable address of the tree-i vertex: height plus digits below it."""
    h = heights(g)[i - 1]
    v = valuation(params, g.p, i)
    if v >= h:
        return (h, None, ())
    return (h, v, tuple(digits(params, g.p, i, v, h)))


def vertex_tuple(params: RingParams, g: GroupElem) -> tuple:
    return tuple(tree_vertex(params, g, i) for i in range(1, params.d + 1))


def projection_to_dict(proj: Projection) -> dict:
    return {"pairs": [list(p) for p in proj]}


def projection_from_dict(obj: dict, d: int | None = None) -> Projection:
    return check_projection(obj["pairs"], d)

