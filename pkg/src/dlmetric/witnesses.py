"""Elements with prescribed projections and the two witness families.

``realize`` builds an element directly from a target projection: the height
vector fixes the diagonal entry, and a single term per tree pins the
confluence depth where the target needs it (``(t+l_i)^-m_i`` for tree ``i``,
``t^(m_d - 1)`` for the tree at infinity).
"""

from __future__ import annotations

from typing import Sequence

from .errors import FormulaError, ParamError
from .geometry import Projection, check_projection, project
from .group import GroupElem, elem_to_dict, generator_elem, generators, multiply
from .metric import explain, length, word_length
from .oracle import dead_end_depth, is_dead_end
from .ring import RationalForm, RingParams, rat_add, zero

SCHEMA_VERSION = 1


def realize(params: RingParams, target: Sequence[Sequence[int]]) -> GroupElem:
    pairs = check_projection(target, params.d)
    d = params.d
    k = tuple(l - m for m, l in pairs[:-1])
    p = zero(params)
    for i, (m, l) in enumerate(pairs[:-1]):
        if m and l:
            den = [0] * (d - 1)
            den[i] = m
            p = rat_add(params, p, RationalForm((1,), tuple(den)))
    m, l = pairs[-1]
    if m and l:
        mono = (0,) * (m - 1) + (1,)
        p = rat_add(params, p, RationalForm(mono, (0,) * (d - 1)))
    g = GroupElem(k, p)
    got = project(params, g)
    if got != pairs:
        raise FormulaError(f"realized element projects to {got}, wanted {pairs}")
    return g


def _cert_base(params: RingParams, kind: str, n: int) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "d": params.d,
        "q": params.q,
        "residues": list(params.residues),
        "n": n,
    }


def deadend_witness(params: RingParams, n: int, horizon: int | None = None) -> tuple[GroupElem, dict]:
    """An element with projection ((n,n),...,(n,n)) and its certificate."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if horizon is None:
        # observed depths are 2n + 1, so this horizon usually reports the exact value
        horizon = 2 * n + 2
    target = ((n, n),) * params.d
    g = realize(params, target)
    proj = project(params, g)
    f = word_length(proj)
    dead = is_dead_end(params, g)
    depth = dead_end_depth(params, g, horizon) if dead else 0
    # an unescaped horizon still bounds the depth from below
    depth_lb = horizon + 1 if depth is None else depth
    claims = {
        "length_equals_(d+2)n": f == (params.d + 2) * n,
        "is_dead_end": dead,
        "depth_at_least_n": dead and depth_lb >= n,
    }
    cert = _cert_base(params, "dead-end", n)
    cert.update(
        element=elem_to_dict(g),
        projection=[list(p) for p in proj],
        length=f,
        expected_length=(params.d + 2) * n,
        depth="exceeds-horizon" if depth is None else depth,
        depth_horizon=horizon,
        claims=claims,
        ok=all(claims.values()),
        formula=explain(proj),
    )
    return g, cert


def cone_projections(d: int, n: int) -> tuple[Projection, list[Projection]]:
    """Projections of the cone witness and of the points along its geodesic."""
    if d < 3:
        raise ParamError("the cone-type witness family needs d >= 3")
    base = [(j * n, (j + 1) * n) for j in range(2, d)] + [(d * n, 3 * n), (2 * n, n)]
    path = []
    for i in range(1, n + 1):
        pts = list(base)
        pts[0] = (2 * n, 3 * n - i)
        pts[-1] = (2 * n, n + i)
        path.append(tuple(pts))
    return tuple(base), path


def _ball_around(params: RingParams, g: GroupElem, radius: int) -> list[GroupElem]:
    gens = [generator_elem(params, s) for s in generators(params)]
    seen = {g}
    frontier = [g]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for s in gens:
                y = multiply(params, x, s)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


def cone_witness(params: RingParams, n: int) -> tuple[GroupElem, list[GroupElem], dict]:
    if n < 1:
        raise ValueError("n must be at least 1")
    base, path_projs = cone_projections(params.d, n)
    g = realize(params, base)
    path = [realize(params, p) for p in path_projs]
    f = length(params, g)
    sum_m = sum(m for m, _ in base)
    path_lengths = [length(params, x) for x in path]
    nearby_dead = [x for x in _ball_around(params, g, n - 1) if is_dead_end(params, x)]
    claims = {
        "length_equals_3n_plus_sum_m": f == 3 * n + sum_m,
        "path_lengths_increase": path_lengths == [f + i for i in range(1, n + 1)],
        "endpoint_is_dead_end": is_dead_end(params, path[-1]),
        "no_dead_end_within_n_minus_1": not nearby_dead,
    }
    cert = _cert_base(params, "cone", n)
    cert.update(
        element=elem_to_dict(g),
        projection=[list(p) for p in base],
        length=f,
        expected_length=3 * n + sum_m,
        path=[
            {"i": i, "projection": [list(p) for p in pp], "length": fl, "element": elem_to_dict(x)}
            for i, (pp, fl, x) in enumerate(zip(path_projs, path_lengths, path), start=1)
        ],
        nearby_dead_ends=[elem_to_dict(x) for x in nearby_dead],
        claims=claims,
        ok=all(claims.values()),
        formula=explain(base),
    )
    return g, path, cert


def _hn_projections(d: int, n: int):
    def rec(idx: int, pairs: list, bal: int):
        if idx == d:
            if bal == 0:
                yield tuple(pairs)
            return
        for m in range(n + 1):
            for l in range(m + n + 1):
                pairs.append((m, l))
                yield from rec(idx + 1, pairs, bal + l - m)
                pairs.pop()

    return rec(0, [], 0)


def hn_sweep(d: int, n: int) -> dict:
    """Exhaustive length bound check over all projections in H_n."""
    bound = (d + 2) * n
    count = 0
    best = -1
    maximizers: list = []
    violations: list = []
    for proj in _hn_projections(d, n):
        count += 1
        f = word_length(proj)
        if f > bound:
            violations.append([list(p) for p in proj])
        if f > best:
            best, maximizers = f, [proj]
        elif f == best:
            maximizers.append(proj)
    diagonal = ((n, n),) * d
    return {
        "schema_version": SCHEMA_VERSION,
        "d": d,
        "n": n,
        "projections": count,
        "bound": bound,
        "max_length": best,
        "maximizers": [[list(p) for p in m] for m in maximizers],
        "diagonal_is_maximizer": diagonal in maximizers,
        "violations": violations,
        "ok": not violations and best == bound and diagonal in maximizers,
    }
