import random

import pytest

from cohomlab.errors import UsageError
from cohomlab.field import make_field
from cohomlab.matgroup import (
    PSL,
    SL,
    borel_subgroup,
    build_group,
    canonical_sign,
    cyclic_group,
    involutions,
    mat_det,
    mat_mul,
    permutation_group,
    projective_action,
    projective_line,
    psl2_order,
    sl2_lift,
    sl2_order,
    sl2_project,
    trivial_group,
)

QS = [3, 5, 7, 9, 11, 13]


@pytest.mark.parametrize("q", QS + [25, 27])
def test_orders_match_formula(q):
    assert build_group(q, SL).order == sl2_order(q) == q * (q * q - 1)
    assert build_group(q, PSL).order == psl2_order(q) == q * (q * q - 1) // 2


@pytest.mark.parametrize("q", QS)
def test_elements_are_distinct_canonical_and_unimodular(q):
    f = make_field(q)
    g = build_group(q, PSL)
    assert len(set(g.elements)) == g.order
    for m in g.elements:
        assert mat_det(f, m) == 1
        assert canonical_sign(f, m) == m


@pytest.mark.parametrize("q", QS)
def test_gen_images_and_tree(q):
    g = build_group(q, PSL)
    f = g.gf
    rng = random.Random(q)
    for i in rng.sample(range(g.order), min(30, g.order)):
        for x, gen in enumerate(g.generators):
            prod = canonical_sign(f, mat_mul(f, g.elements[i], g.elements[gen]))
            assert g.elements[g.gen_images[i, x]] == prod
        assert g.evaluate(g.word_of(i)) == i
    g.check_tree()


def test_mult_table_is_associative():
    g = build_group(5, PSL)
    t = g.mult_table()
    rng = random.Random(0)
    for _ in range(2000):
        a, b, c = (rng.randrange(g.order) for _ in range(3))
        assert t[t[a, b], c] == t[a, t[b, c]]
    for a in range(g.order):
        assert t[a, g.inverse(a)] == 0


@pytest.mark.parametrize("q", QS)
def test_projective_action_is_a_right_action(q):
    g = build_group(q, PSL)
    line = projective_line(g)
    rng = random.Random(q)
    for _ in range(200):
        a, b = rng.randrange(g.order), rng.randrange(g.order)
        ab = g.multiply(a, b)
        # point moves by a, then by b
        assert [line.perm_of[b][line.perm_of[a][i]] for i in range(q + 1)] == list(line.perm_of[ab])
    assert sorted(projective_action(g, 1)) == list(range(q + 1))


@pytest.mark.parametrize("q", QS)
def test_borel_is_point_stabilizer(q):
    g = build_group(q, PSL)
    line = projective_line(g)
    b = borel_subgroup(g)
    assert b.order == q * (q - 1) // 2
    stab = {g.elements[i] for i in range(g.order) if line.perm_of[i][q] == q}
    assert set(b.elements) == stab


@pytest.mark.parametrize("q", [3, 5, 7, 9])
def test_sl_lift_and_projection(q):
    p, s = build_group(q, PSL), build_group(q, SL)
    for i in range(p.order):
        assert sl2_project(p, s, sl2_lift(p, s, i)) == i
    # SL2(q) has -I as its only involution
    assert len(involutions(s)) == 1


def test_generator_order_changes_tree_not_group():
    a = build_group(9, PSL)
    b = build_group(9, PSL, generator_order=[2, 0, 1])
    assert set(a.elements) == set(b.elements)
    with pytest.raises(UsageError):
        build_group(9, PSL, generator_order=[0, 0, 1])


def test_fixture_groups():
    assert cyclic_group(5).order == 5
    assert trivial_group().order == 1
    s3 = permutation_group([(1, 0, 2), (1, 2, 0)])
    assert s3.order == 6
    with pytest.raises(UsageError):
        cyclic_group(0)
