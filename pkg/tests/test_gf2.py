import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cohomlab.errors import ContractViolation, InconsistentSystem
from cohomlab.gf2 import (
    BitMat,
    BitVec,
    Eliminator,
    Subspace,
    kernel_basis,
    rank,
    rref,
    solve_affine,
    subspace_ops,
)
from oracles import all_vectors, mat_vec, naive_rank, span, to_int

matrices = st.integers(1, 12).flatmap(
    lambda cols: st.lists(st.lists(st.integers(0, 1), min_size=cols, max_size=cols), min_size=1, max_size=14)
)


def test_bitvec_roundtrips():
    v = BitVec.from_list([1, 0, 1, 1, 0, 0, 0, 0, 1])
    assert v.to_list() == [1, 0, 1, 1, 0, 0, 0, 0, 1]
    assert BitVec.from_hex(9, v.hex()) == v
    assert v.weight() == 4
    assert v.support() == [0, 2, 3, 8]
    assert (v ^ v).is_zero()
    assert BitVec.ones(5).bits == 31
    assert BitVec.unit(5, 3)[3] == 1


def test_bitvec_rejects_overflow():
    with pytest.raises(ValueError):
        BitVec(3, 8)


def test_bitmat_dense_roundtrip_beyond_one_word():
    rng = np.random.default_rng(1)
    a = rng.integers(0, 2, size=(7, 150), dtype=np.uint8)
    m = BitMat.from_dense(a)
    assert np.array_equal(m.to_dense(), a)
    assert m.row(3).to_list() == a[3].tolist()


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rank_and_kernel_against_exhaustive(rows):
    cols = len(rows[0])
    m = BitMat.from_dense(np.array(rows, dtype=np.uint8))
    assert rank(m) == naive_rank(rows)
    kernel = {to_int(v) for v in all_vectors(cols) if not any(mat_vec(rows, v))}
    basis = kernel_basis(m)
    assert len(basis) == cols - rank(m)
    assert span([b.bits for b in basis]) == kernel


@settings(max_examples=150, deadline=None)
@given(matrices, st.data())
def test_solve_affine_against_exhaustive(rows, data):
    cols = len(rows[0])
    b = data.draw(st.lists(st.integers(0, 1), min_size=len(rows), max_size=len(rows)))
    m = BitMat.from_dense(np.array(rows, dtype=np.uint8))
    solutions = [to_int(v) for v in all_vectors(cols) if mat_vec(rows, v) == b]
    if not solutions:
        with pytest.raises(InconsistentSystem) as info:
            solve_affine(m, BitVec.from_list(b))
        assert info.value.augmented_rank == info.value.rank + 1
        return
    x = solve_affine(m, BitVec.from_list(b))
    assert x.bits in solutions
    # free variables are set to zero, which gives the least solution as an integer
    assert x.bits == min(solutions)


def test_rref_is_reduced():
    rng = np.random.default_rng(7)
    a = rng.integers(0, 2, size=(20, 90), dtype=np.uint8)
    rows, pivots = rref(BitMat.from_dense(a))
    assert len(rows) == len(pivots) == naive_rank(a.tolist())
    assert len(set(pivots)) == len(pivots)
    for i, r in enumerate(rows):
        for j, p in enumerate(pivots):
            assert (r >> p & 1) == (i == j)


def test_eliminator_order_invariance():
    rng = random.Random(11)
    for trial in range(20):
        cols = rng.randint(1, 80)
        rows = [rng.getrandbits(cols) for _ in range(rng.randint(1, 60))]
        reference = Eliminator(cols)
        reference.absorb_all(rows)
        expected = sorted(reference.basis_ints())
        for _ in range(3):
            shuffled = rows[:]
            rng.shuffle(shuffled)
            e = Eliminator(cols)
            e.absorb_all(shuffled)
            assert sorted(e.basis_ints()) == expected
        assert reference.rank == naive_rank([[r >> i & 1 for i in range(cols)] for r in rows])


def test_eliminator_contains_and_reduce():
    e = Eliminator(6)
    assert e.absorb(0b000110)
    assert e.absorb(0b011000)
    assert not e.absorb(0b011110)
    assert e.contains(0b011110)
    assert not e.contains(0b1)
    assert e.reduce(0b011110) == 0


@settings(max_examples=100, deadline=None)
@given(
    st.integers(1, 8).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(st.integers(0, (1 << n) - 1), max_size=5),
            st.lists(st.integers(0, (1 << n) - 1), max_size=5),
        )
    )
)
def test_subspace_ops_against_enumeration(case):
    n, a, b = case
    sa, sb = span(a), span(b)
    ops = subspace_ops([BitVec(n, v) for v in a], [BitVec(n, v) for v in b], n)
    assert span([v.bits for v in ops["sum"]]) == span(a + b)
    assert span([v.bits for v in ops["intersection"]]) == sa & sb
    assert all(ops["contains"](v) == (v in sa) for v in range(1 << n))
    assert ops["quotient_dim"] == (len(sa).bit_length() - len(sb).bit_length() if sb <= sa else None)
    A, B = Subspace(n, a), Subspace(n, b)
    if sb <= sa:
        assert A.quotient_dim(B) == A.dim - B.dim
    else:
        with pytest.raises(ContractViolation):
            A.quotient_dim(B)


def test_subspace_equality_ignores_spanning_set():
    assert Subspace(4, [0b0011, 0b0101]) == Subspace(4, [0b0110, 0b0011])
    assert Subspace(4, [0b0011]) != Subspace(4, [0b0101])
