import itertools

import numpy as np
import pytest

from cohomlab import f2mod
from cohomlab.errors import ContractViolation
from cohomlab.f2mod import (
    Submodule,
    decompose_two_dim_commutant,
    endomorphism_dim,
    fixed_points,
    gf2_inverse,
    is_irreducible,
    quotient_module,
    spin,
    unique_minimal_check,
)
from cohomlab.gf2 import BitVec, Subspace
from oracles import context, naive_rank, naive_spin_dim, span


def brute_submodules(m):
    """All submodules of a small module, as frozensets of int vectors."""
    found = set()
    for v in range(1 << m.dim):
        found.add(frozenset(span([b.bits for b in spin(m, BitVec(m.dim, v)).basis])))
    # sums of cyclic submodules give everything else
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(found), 2):
            s = frozenset(span(list(a | b)))
            if s not in found:
                found.add(s)
                changed = True
    return found


def brute_commutant_dim(m):
    d = m.dim
    count = 0
    for bits in range(1 << (d * d)):
        e = np.array([(bits >> i) & 1 for i in range(d * d)], dtype=np.uint8).reshape(d, d)
        if all(np.array_equal((e @ a) & 1, (a @ e) & 1) for a in m.gen_action):
            count += 1
    return count.bit_length() - 1


def test_gf2_inverse():
    rng = np.random.default_rng(3)
    for _ in range(40):
        a = rng.integers(0, 2, size=(6, 6), dtype=np.uint8)
        if naive_rank(a.tolist()) < 6:
            with pytest.raises(ContractViolation):
                gf2_inverse(a)
            continue
        assert np.array_equal((a @ gf2_inverse(a)) & 1, np.eye(6, dtype=np.uint8))


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_structure_of_V_W_U(q):
    ctx = context(q)
    assert ctx.V.dim == q + 1
    assert fixed_points(ctx.V).space == ctx.I_in_V.space
    assert fixed_points(ctx.W).dim == 0
    assert ctx.W.dim == q
    assert ctx.U.dim == q - 1
    assert endomorphism_dim(ctx.U) == 2


def test_submodule_lattice_of_V_for_q3_by_brute_force():
    ctx = context(3)
    subs = brute_submodules(ctx.V)
    nonzero = [s for s in subs if len(s) > 1]
    minimal = [s for s in nonzero if not any(t < s and len(t) > 1 for t in nonzero)]
    assert minimal == [frozenset({0, ctx.ones})]
    assert unique_minimal_check(ctx.V, "exhaustive", ctx.I_in_V).passed


@pytest.mark.parametrize("q", [3, 5])
def test_commutant_dims_match_brute_force(q):
    ctx = context(q)
    assert endomorphism_dim(ctx.U) == brute_commutant_dim(ctx.U)
    assert endomorphism_dim(ctx.I) == 1


def test_irreducibility_matches_submodule_enumeration():
    for q in (3, 5):
        ctx = context(q)
        subs = brute_submodules(ctx.U)
        assert is_irreducible(ctx.U).passed == (len(subs) == 2)
    # V is never irreducible: I is a proper submodule
    assert not is_irreducible(context(5).V).passed


@pytest.mark.parametrize("q,kind", [(3, "field"), (5, "field"), (7, "split"), (9, "split"), (11, "field"), (13, "field")])
def test_U_decomposition(q, kind):
    ctx = context(q)
    dec = decompose_two_dim_commutant(ctx.U)
    assert dec.kind == kind
    assert dec.summands_absolutely_irreducible
    if kind == "split":
        assert dec.summand_dims == [(q - 1) // 2, (q - 1) // 2]
        assert not is_irreducible(ctx.U).passed
    else:
        assert is_irreducible(ctx.U).passed


def test_sampled_mode_is_seeded():
    ctx = context(7)
    a = unique_minimal_check(ctx.V, "sampled", ctx.I_in_V, samples=200, seed=4)
    b = unique_minimal_check(ctx.V, "sampled", ctx.I_in_V, samples=200, seed=4)
    assert a == b and a.passed and a.mode == "sampled"


def test_quotient_project_lift():
    ctx = context(5)
    quo = ctx.quotient
    for v in range(1 << ctx.V.dim):
        w = quo.project(v)
        assert quo.project(quo.lift(w)) == w
        for x in range(ctx.psl.ngens):
            assert quo.project(ctx.V.apply(v, x)) == ctx.W.apply(w, x)


def test_submodule_rejects_non_invariant_space():
    ctx = context(5)
    with pytest.raises(ContractViolation):
        Submodule(ctx.V, Subspace(ctx.V.dim, [0b1]))


def test_derived_submodule_of_W_has_codimension_one():
    ctx = context(7)
    u = f2mod.derived_submodule(ctx.W)
    assert u.dim == ctx.W.dim - 1


def test_quotient_module_of_trivial_pieces():
    ctx = context(3)
    w, quo = quotient_module(ctx.V, ctx.I_in_V)
    assert w.dim == 3
    w.check_relators()


@pytest.mark.parametrize("q,expected", [(5, {4}), (7, {3, 6}), (9, {4, 8})])
def test_spin_dims_of_U_by_naive_closure(q, expected):
    """Orbit closure without library code: U splits over GF(2) exactly for q = 7, 9 here."""
    U = context(q).U
    dims = set()
    for bits in range(1, 1 << U.dim):
        v = np.array([(bits >> i) & 1 for i in range(U.dim)], dtype=np.int64)
        dims.add(naive_spin_dim([a.astype(np.int64) for a in U.gen_action], v))
    assert dims == expected
