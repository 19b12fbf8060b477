import itertools

import pytest

from cohomlab.errors import UsageError
from cohomlab.field import check_odd_prime_power, is_irreducible, make_field, primitive_element

SUPPORTED = [3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27]


@pytest.mark.parametrize("q", SUPPORTED)
def test_field_axioms_exhaustive(q):
    f = make_field(q)
    els = list(range(q))
    for a in els:
        assert f.add(a, 0) == a and f.mul(a, 1) == a
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
        for b in els:
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            if a and b:
                assert f.mul(a, b) != 0
    for a, b, c in itertools.product(els, repeat=3):
        assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


@pytest.mark.parametrize("q", SUPPORTED)
def test_frobenius_is_additive_and_primitive_has_full_order(q):
    f = make_field(q)
    p = f.p
    for a in range(q):
        for b in range(q):
            assert f.pow(f.add(a, b), p) == f.add(f.pow(a, p), f.pow(b, p))
        assert f.pow(a, q) == a
    assert f.order(f.primitive) == q - 1
    assert len({f.pow(f.primitive, i) for i in range(q - 1)}) == q - 1
    # least such code
    assert all(f.order(c) != q - 1 for c in range(1, f.primitive))


def test_fixed_tables():
    f9 = make_field(9)
    assert tuple(f9.modulus) == (1, 0, 1)  # x^2 + 1
    assert f9.primitive == 4  # 1 + x
    assert f9.mul(3, 3) == 2  # x * x = -1
    f27 = make_field(27)
    assert tuple(f27.modulus) == (1, 2, 0, 1)  # x^3 + 2x + 1
    assert f27.primitive == 3
    assert [make_field(q).primitive for q in (3, 5, 7)] == [2, 2, 3]


def test_modulus_is_smallest_irreducible():
    for q, (p, e) in [(9, (3, 2)), (25, (5, 2)), (27, (3, 3))]:
        f = make_field(q)
        assert is_irreducible(list(f.modulus), p)
        # every smaller monic candidate (in (a_{e-1}, ..., a_0) order) is reducible
        target = tuple(reversed(f.modulus[:e]))
        for cand in itertools.product(range(p), repeat=e):
            if cand >= target:
                break
            assert not is_irreducible(list(reversed(cand)) + [1], p)


def test_element_wrapper():
    f = make_field(9)
    a = primitive_element(f)
    assert a ** 8 == 1
    assert a * a.inverse() == 1
    assert (a + 1) - 1 == a
    assert -a + a == 0
    with pytest.raises(ZeroDivisionError):
        f.inv(0)


@pytest.mark.parametrize("q", [1, 2, 4, 6, 8, 15, 0, -3, 49.0, "9"])
def test_rejects_unsupported_q(q):
    with pytest.raises(UsageError):
        check_odd_prime_power(q)
