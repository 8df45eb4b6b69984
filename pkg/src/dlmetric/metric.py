"""Word length with respect to S_{d,q}, computed from the projection.

For a permutation ``sigma`` of the trees (stored 0-based) the candidate
length is ``m[sigma[0]] + l[sigma[-1]] + max_i A_i`` where the cut sums
``A_i`` are described in :func:`a_values`; the word length is the minimum of
the candidates over all ``d!`` permutations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import FormulaError
from .geometry import (
    Projection,
    edge_type_of,
    generator_for,
    heights,
    project,
    project_relative,
)
from .group import Generator, GroupElem, generator_elem, generators, identity, step
from .ring import RingParams, digits, rat_scale

Permutation = tuple  # tuple[int, ...], 0-based images sigma(1..d)


@lru_cache(maxsize=None)
def permutations(d: int) -> tuple:
    return tuple(itertools.permutations(range(d)))


def a_values(proj: Projection, sigma: Permutation) -> list[int]:
    """Cut sums ``[A_2, ..., A_d]`` for the tree order ``sigma``.

    ``A_i = m_s2 + ... + m_si + l_si + ... + l_s(d-1)`` for ``2 <= i <= d-1``
    and ``A_d`` is the sum of all ``m``.
    """
    d = len(sigma)
    m = [proj[s][0] for s in sigma]
    l = [proj[s][1] for s in sigma]
    out = []
    for i in range(1, d - 1):
        out.append(sum(m[1 : i + 1]) + sum(l[i : d - 1]))
    out.append(sum(m))
    return out


def _f(m: list, l: list, total_m: int, sigma: Permutation) -> int:
    # running sums over the middle positions; A_d = total_m is the floor
    inner = sigma[1:-1]
    best = total_m
    acc_m = 0
    tail_l = 0
    for s in inner:
        tail_l += l[s]
    for s in inner:
        acc_m += m[s]
        if acc_m + tail_l > best:
            best = acc_m + tail_l
        tail_l -= l[s]
    return m[sigma[0]] + l[sigma[-1]] + best


def f_sigma(proj: Projection, sigma: Permutation) -> int:
    m = [p[0] for p in proj]
    return _f(m, [p[1] for p in proj], sum(m), sigma)


def word_length(proj: Projection) -> int:
    m = [p[0] for p in proj]
    l = [p[1] for p in proj]
    total_m = sum(m)
    return min(_f(m, l, total_m, s) for s in permutations(len(proj)))


def length(params: RingParams, g: GroupElem) -> int:
    """Word length of a group element, via its projection."""
    return word_length(project(params, g))


def minimizing_permutations(proj: Projection) -> tuple[frozenset, frozenset]:
    """The argmin set of permutations and its subset with ``l[sigma[0]] != 0``."""
    if not any(m or l for m, l in proj):
        raise ValueError("the trivial projection has no meaningful minimizers")
    vals = {s: f_sigma(proj, s) for s in permutations(len(proj))}
    best = min(vals.values())
    theta = frozenset(s for s, v in vals.items() if v == best)
    theta_prime = frozenset(s for s in theta if proj[s[0]][1] != 0)
    if not theta_prime:
        raise FormulaError(f"no minimizing permutation starts in a tree with l != 0: {proj}")
    return theta, theta_prime


@dataclass(frozen=True)
class FormulaBreakdown:
    sigma: Permutation
    a_values: tuple
    per_i: tuple
    f_sigma: int

    def to_dict(self) -> dict:
        return {
            "sigma": [s + 1 for s in self.sigma],
            "a_values": list(self.a_values),
            "per_i": list(self.per_i),
            "f_sigma": self.f_sigma,
        }


def breakdown(proj: Projection, sigma: Permutation) -> FormulaBreakdown:
    a = a_values(proj, sigma)
    base = proj[sigma[0]][0] + proj[sigma[-1]][1]
    per_i = tuple(base + x for x in a)
    return FormulaBreakdown(tuple(sigma), tuple(a), per_i, max(per_i))


def explain(proj: Projection) -> dict:
    value = word_length(proj)
    out = {"projection": [list(p) for p in proj], "length": value}
    if value == 0:
        out.update(theta=[], theta_prime=[], breakdown=None)
        return out
    theta, theta_prime = minimizing_permutations(proj)
    chosen = min(theta_prime)
    out["breakdown"] = breakdown(proj, chosen).to_dict()
    out["theta"] = [[s + 1 for s in p] for p in sorted(theta)]
    out["theta_prime"] = [[s + 1 for s in p] for p in sorted(theta_prime)]
    return out


# -- geodesics ---------------------------------------------------------------


def descent_step(params: RingParams, g: GroupElem) -> Generator:
    """First generator in canonical order that shortens ``g`` by one."""
    if g.is_identity():
        raise ValueError("the identity has no descent")
    target = length(params, g) - 1
    for s in generators(params):
        if length(params, step(params, g, s)) == target:
            return s
    raise FormulaError(f"no generator decreases the length of {g}")


def geodesic_word(params: RingParams, g: GroupElem) -> tuple:
    """A word of minimal length evaluating to ``g``."""
    letters = []
    cur = g
    while not cur.is_identity():
        s = descent_step(params, cur)
        letters.append(s)
        cur = step(params, cur, s)
    # g s_1 ... s_n = 1, so g = s_n^-1 ... s_1^-1
    return tuple(s.inverse(params.q) for s in reversed(letters))


def schedule(proj: Projection) -> list[tuple[tuple[int, int], int, bool]]:
    """Edge-type blocks ``(edge, count, copy_digits)`` of the quasi-geodesic.

    Descend every tree ``i < d`` to its confluence while climbing tree ``d``,
    climb each tree ``i < d`` to the target, then make a detour of length
    ``l_d`` in tree 1 that lowers tree ``d`` to its confluence and climbs it
    back to the target.  ``copy_digits`` marks the blocks whose climbs must
    follow the target's digits.
    """
    d = len(proj)
    blocks = []
    for i in range(1, d):
        blocks.append(((d, i), proj[i - 1][0], False))
    for i in range(1, d):
        blocks.append(((i, d), proj[i - 1][1], True))
    ld = proj[d - 1][1]
    blocks.append(((1, d), ld, False))
    blocks.append(((d, 1), ld, True))
    return blocks


def _climb_offset(params: RingParams, cur: GroupElem, edge: tuple[int, int], want: int) -> int:
    # the new digit is linear in b: digit(P) + b * digit(a * P_s(b=1))
    up = edge[0]
    h = heights(cur)[up - 1]
    have = digits(params, cur.p, up, h, h + 1)[0]
    unit_gen = generator_elem(params, generator_for(edge, 1, params.d))
    shift = digits(params, rat_scale(params, unit_gen.p, cur.k), up, h, h + 1)[0]
    try:
        inv = pow(shift, -1, params.q)
    except ValueError:
        raise FormulaError(f"offset digit {shift} is not a unit mod {params.q}") from None
    return (want - have) * inv % params.q


def quasi_geodesic(params: RingParams, g: GroupElem) -> tuple:
    """A word following the quasi-geodesic edge-type schedule and ending at ``g``."""
    d = params.d
    word = []
    cur = identity(params)
    for edge, count, copy in schedule(project(params, g)):
        up = edge[0]
        for _ in range(count):
            b = 0
            if copy:
                h = heights(cur)[up - 1]
                want = digits(params, g.p, up, h, h + 1)[0]
                b = _climb_offset(params, cur, edge, want)
            s = generator_for(edge, b, d)
            word.append(s)
            cur = step(params, cur, s)
    if cur != g:
        raise FormulaError(f"schedule for {g} ended at {cur}")
    return tuple(word)


def distance(params: RingParams, g: GroupElem, h: GroupElem) -> int:
    return word_length(project_relative(params, g, h))


def edge_types(word: Sequence[Generator], d: int) -> list[tuple[int, int]]:
    return [edge_type_of(s, d) for s in word]
