import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlmetric.geometry import edge_type_of, project, tree_distance
from dlmetric.group import (
    Generator,
    eval_word,
    generator_elem,
    generators,
    identity,
    invert,
    multiply,
)
from dlmetric.metric import (
    a_values,
    breakdown,
    descent_step,
    distance,
    edge_types,
    explain,
    f_sigma,
    geodesic_word,
    length,
    minimizing_permutations,
    permutations,
    quasi_geodesic,
    schedule,
    word_length,
)
from dlmetric.ring import validate_params
from dlmetric.witnesses import realize

from _support import projections

P3 = validate_params(3, 2)
PARAMS = {2: validate_params(2, 2), 3: P3, 4: validate_params(4, 5)}


def literal_f(proj):
    """The length formula transcribed with 1-based indices, no shortcuts."""
    d = len(proj)
    best = None
    for perm in itertools.permutations(range(1, d + 1)):
        m = {i: proj[perm[i - 1] - 1][0] for i in range(1, d + 1)}
        l = {i: proj[perm[i - 1] - 1][1] for i in range(1, d + 1)}
        vals = []
        for i in range(2, d + 1):
            if i == d:
                a = sum(m[j] for j in range(1, d + 1))
            else:
                a = sum(m[j] for j in range(2, i + 1)) + sum(l[k] for k in range(i, d))
            vals.append(m[1] + l[d] + a)
        f = max(vals)
        best = f if best is None else min(best, f)
    return best


def proj_cases(top=12):
    return st.sampled_from([2, 3, 4]).flatmap(lambda d: projections(d, top))


def nontrivial(proj):
    return any(m or l for m, l in proj)


# -- examples ----------------------------------------------------------------


def test_a_values_examples():
    ident = (0, 1, 2)
    assert a_values(((0, 0),) * 3, ident) == [0, 0]
    assert a_values(((1, 1),) * 3, ident) == [2, 3]
    assert a_values(((2, 3), (3, 3), (2, 1)), ident) == [6, 7]
    assert a_values(((1, 1), (1, 1)), (0, 1)) == [2]


@pytest.mark.parametrize(
    "proj,value",
    [
        (((0, 0),) * 3, 0),
        (((1, 1),) * 3, 5),
        (((2, 2),) * 3, 10),
        (((3, 3),) * 3, 15),
        (((2, 3), (3, 3), (2, 1)), 10),
        (((0, 1), (0, 0), (1, 0)), 1),
        (((0, 0), (2, 2)), 4),
    ],
)
def test_word_length_examples(proj, value):
    assert word_length(proj) == value


def test_minimizers_of_generator_projection():
    theta, theta_prime = minimizing_permutations(((0, 1), (0, 0), (1, 0)))
    assert (0, 2, 1) in theta_prime
    assert theta_prime <= theta


def test_symmetric_projection_minimized_by_everything():
    theta, _ = minimizing_permutations(((2, 2),) * 3)
    assert theta == frozenset(permutations(3))


def test_trivial_projection_has_no_minimizers():
    with pytest.raises(ValueError):
        minimizing_permutations(((0, 0),) * 3)


def test_explain_layout():
    out = explain(((2, 3), (3, 3), (2, 1)))
    assert out["length"] == 10
    bd = out["breakdown"]
    assert bd["f_sigma"] == max(bd["per_i"]) == 10
    assert sorted(bd["sigma"]) == [1, 2, 3]
    assert bd["sigma"] in out["theta_prime"]


# -- formula properties ------------------------------------------------------


@settings(max_examples=300)
@given(proj_cases())
def test_matches_literal_definition(proj):
    assert word_length(proj) == literal_f(proj)


@settings(max_examples=300)
@given(proj_cases(), st.data())
def test_breakdown_consistent(proj, data):
    sigma = tuple(data.draw(st.permutations(range(len(proj)))))
    bd = breakdown(proj, sigma)
    base = proj[sigma[0]][0] + proj[sigma[-1]][1]
    assert bd.per_i == tuple(base + a for a in bd.a_values)
    assert bd.f_sigma == max(bd.per_i) == f_sigma(proj, sigma)


@settings(max_examples=300)
@given(proj_cases())
def test_zero_only_at_trivial(proj):
    assert (word_length(proj) == 0) == (not nontrivial(proj))


@settings(max_examples=300)
@given(proj_cases(), st.data())
def test_permutation_invariance(proj, data):
    pi = data.draw(st.permutations(range(len(proj))))
    assert word_length(tuple(proj[i] for i in pi)) == word_length(proj)


@settings(max_examples=300)
@given(proj_cases(20))
def test_sandwich(proj):
    f, dt = word_length(proj), tree_distance(proj)
    assert dt <= 2 * f and f <= 2 * dt


@settings(max_examples=300)
@given(proj_cases())
def test_some_minimizer_starts_with_nonzero_l(proj):
    if nontrivial(proj):
        _, theta_prime = minimizing_permutations(proj)
        assert theta_prime


@settings(max_examples=300)
@given(proj_cases())
def test_rotation_forward_never_hurts(proj):
    # l at the first tree zero: moving that tree to the end does not increase f_sigma
    d = len(proj)
    for sigma in permutations(d):
        if proj[sigma[0]][1] == 0:
            tau = sigma[1:] + sigma[:1]
            assert f_sigma(proj, sigma) >= f_sigma(proj, tau)


@settings(max_examples=300)
@given(proj_cases())
def test_rotation_of_empty_tree_preserves(proj):
    d = len(proj)
    for sigma in permutations(d):
        if proj[sigma[-1]] == (0, 0):
            tau = sigma[-1:] + sigma[:-1]
            assert f_sigma(proj, sigma) == f_sigma(proj, tau)


@settings(max_examples=300)
@given(proj_cases())
def test_index_set_reduction(proj):
    if not nontrivial(proj):
        return
    d = len(proj)
    for chi in permutations(d):
        a = dict(zip(range(2, d + 1), a_values(proj, chi)))
        full = max(a.values())
        l = [proj[chi[j - 1]][1] for j in range(1, d + 1)]  # l[j-1] is l_chi(j)
        if l[d - 1] == 0:
            n = max(j for j in range(1, d) if l[j - 1] != 0)
            assert full == max([a[i] for i in range(2, n + 1)] + [a[d]])
        if l[0] == 0:
            k = min(j for j in range(2, d + 1) if l[j - 1] != 0)
            assert full == max(a[i] for i in range(k, d + 1))


@settings(max_examples=300)
@given(proj_cases())
def test_sufficient_condition_for_minimum(proj):
    d = len(proj)
    ends = {s: proj[s[0]][0] + proj[s[-1]][1] for s in permutations(d)}
    least = min(ends.values())
    f = word_length(proj)
    for sigma, e in ends.items():
        a = a_values(proj, sigma)
        if e == least and a[-1] == max(a):
            assert f == f_sigma(proj, sigma)


# -- element level -----------------------------------------------------------


def elems(top=6):
    def build(d, proj):
        return PARAMS[d], realize(PARAMS[d], proj)

    return st.sampled_from([2, 3, 4]).flatmap(
        lambda d: projections(d, top).map(lambda pr: build(d, pr))
    )


@settings(max_examples=150)
@given(elems())
def test_inverse_symmetry(case):
    params, g = case
    assert length(params, invert(params, g)) == length(params, g)


@settings(max_examples=150)
@given(elems())
def test_unit_step_and_descent(case):
    params, g = case
    f = length(params, g)
    steps = [length(params, multiply(params, g, generator_elem(params, s))) - f for s in generators(params)]
    assert all(abs(x) <= 1 for x in steps)
    if f:
        assert -1 in steps
        s = descent_step(params, g)
        assert length(params, multiply(params, g, generator_elem(params, s))) == f - 1


def test_descent_examples():
    u = Generator.up(1, 1)
    assert descent_step(P3, generator_elem(P3, u)) == Generator.down(1, 1)
    g = realize(P3, ((1, 1),) * 3)
    s = descent_step(P3, g)
    assert length(P3, multiply(P3, g, generator_elem(P3, s))) == 4
    with pytest.raises(ValueError):
        descent_step(P3, identity(P3))


def test_geodesic_examples():
    assert geodesic_word(P3, identity(P3)) == ()
    u = Generator.up(1, 0)
    assert geodesic_word(P3, generator_elem(P3, u)) == (u,)
    g = realize(P3, ((1, 1),) * 3)
    w = geodesic_word(P3, g)
    assert len(w) == 5 and eval_word(P3, w) == g


@settings(max_examples=100)
@given(elems(5))
def test_geodesic_word_property(case):
    params, g = case
    w = geodesic_word(params, g)
    assert len(w) == length(params, g)
    assert eval_word(params, w) == g


def test_schedule_blocks():
    blocks = schedule(((1, 2), (0, 1), (3, 1)))
    assert blocks == [
        ((3, 1), 1, False),
        ((3, 2), 0, False),
        ((1, 3), 2, True),
        ((2, 3), 1, True),
        ((1, 3), 1, False),
        ((3, 1), 1, True),
    ]


def test_quasi_geodesic_examples():
    assert quasi_geodesic(P3, identity(P3)) == ()
    u = Generator.up(1, 1)
    w = quasi_geodesic(P3, generator_elem(P3, u))
    assert len(w) == 1 and edge_type_of(w[0], 3) == (1, 3)
    g = realize(P3, ((1, 1),) * 3)
    w = quasi_geodesic(P3, g)
    assert len(w) == 6
    assert eval_word(P3, w) == g
    assert length(P3, g) <= len(w) <= 2 * tree_distance(project(P3, g))


@settings(max_examples=100)
@given(elems(5))
def test_quasi_geodesic_follows_schedule(case):
    params, g = case
    proj = project(params, g)
    w = quasi_geodesic(params, g)
    assert eval_word(params, w) == g
    want = [e for e, n, _ in schedule(proj) for _ in range(n)]
    assert edge_types(w, params.d) == want
    assert len(w) == sum(m + l for m, l in proj[:-1]) + 2 * proj[-1][1]


def test_distance_reductions():
    g = realize(P3, ((2, 3), (3, 3), (2, 1)))
    e = identity(P3)
    assert distance(P3, g, g) == 0
    assert distance(P3, e, g) == length(P3, g) == 10

