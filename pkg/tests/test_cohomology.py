import pytest

from cohomlab.cohomology import (
    EMBEDS,
    NOT_EMBEDS,
    DEFAULT_GUARD,
    delta_image,
    embedding_decide,
    h1,
    h1_of_U,
    h2_bar,
    ker_phi_dim,
    shapiro_compare,
    witness_verify,
)
from cohomlab.errors import GuardError, UsageError
from cohomlab.f2mod import trivial_module
from cohomlab.gf2 import BitVec
from cohomlab.matgroup import cyclic_group, permutation_group
from cohomlab.presentation import relators_from_cayley
from oracles import brute_h1_dim, context, eval_lifted


@pytest.mark.parametrize("name", ["I", "V", "W", "U"])
def test_h1_against_brute_force_q3(name):
    ctx = context(3)
    m = ctx.module(name)
    assert h1(ctx.pres, m).dim == brute_h1_dim(ctx.pres, m)


def test_h1_borel_against_brute_force():
    ctx = context(5)
    assert h1(ctx.borel_pres, ctx.T).dim == brute_h1_dim(ctx.borel_pres, ctx.T)


def test_h1_of_cyclic_groups_with_trivial_coefficients():
    # H^1(Z_n, F2) = Hom(Z_n, F2)
    for n, expected in [(2, 1), (3, 0), (4, 1), (6, 1)]:
        g = cyclic_group(n)
        assert h1(relators_from_cayley(g), trivial_module(g)).dim == expected


@pytest.mark.parametrize(
    "gens,expected",
    [
        ([(1, 0)], 1),  # Z2
        ([(1, 2, 0)], 0),  # Z3
        ([(1, 2, 3, 0)], 1),  # Z4
        ([(1, 0, 3, 2), (2, 3, 0, 1)], 3),  # Klein four
        ([(1, 0, 2), (1, 2, 0)], 1),  # S3
    ],
)
def test_h2_bar_on_known_groups(gens, expected):
    g = permutation_group(gens)
    assert h2_bar(g, trivial_module(g)).dim == expected


def test_h2_guard():
    ctx = context(7)
    with pytest.raises(GuardError) as info:
        h2_bar(ctx.psl, ctx.I)
    assert "--guard-order 168" in str(info.value)
    assert DEFAULT_GUARD == 100


def test_h2_module_group_mismatch():
    ctx = context(3)
    with pytest.raises(UsageError):
        h2_bar(ctx.borel, ctx.I)


def test_shapiro_degree_two_q3():
    rep = shapiro_compare(3, 2)
    assert rep.match and rep.group_dim == rep.borel_dim == 0


@pytest.mark.parametrize("q", [3, 5, 7, 9, 11, 13])
def test_shapiro_degree_one(q):
    rep = shapiro_compare(context(q), 1)
    assert rep.match


def brute_embeds(ctx) -> bool:
    V = ctx.V
    k, d = ctx.pres.ngens, V.dim
    for code in range(1 << (k * d)):
        u = [(code >> (x * d)) & ((1 << d) - 1) for x in range(k)]
        if all(
            eval_lifted(r.letters, V, u) == (0, ctx.ones if e else 0)
            for r, e in zip(ctx.pres.relators, ctx.eps)
        ):
            return True
    return False


@pytest.mark.parametrize("q", [3, 5])
def test_embedding_against_brute_force(q):
    ctx = context(q)
    verdict = embedding_decide(ctx)
    assert verdict.embeds == brute_embeds(ctx)


@pytest.mark.parametrize("q,expected", [(3, EMBEDS), (5, NOT_EMBEDS), (7, EMBEDS), (9, NOT_EMBEDS)])
def test_connecting_map_and_kernel(q, expected):
    ctx = context(q)
    verdict = embedding_decide(ctx)
    assert verdict.verdict == expected
    delta = delta_image(ctx)
    assert delta.dim == (1 if expected == EMBEDS else 0)
    assert ker_phi_dim(ctx, verdict, delta) == delta.dim
    res = h1_of_U(ctx, delta)
    assert (res.h1_I, res.h1_U) == (0, 2)


def test_witness_verify_rejects_tampering():
    ctx = context(7)
    verdict = embedding_decide(ctx)
    good = witness_verify(ctx, verdict.witness)
    assert good.passed and good.closure_size == 336
    assert set(good.checks) == {"relators", "closure_size", "meets_V_in_I", "covers_G", "unique_involution"}
    bad = list(verdict.witness)
    bad[0] = bad[0] ^ BitVec.unit(bad[0].length, 0)
    rep = witness_verify(ctx, bad)
    assert not rep.passed and rep.failure.startswith("relators")
    # adding ones to a generator lift changes the relator signs
    shifted = [verdict.witness[0] ^ BitVec.ones(ctx.V.dim)] + list(verdict.witness[1:])
    assert not witness_verify(ctx, shifted).passed
    with pytest.raises(UsageError):
        witness_verify(ctx, verdict.witness[:1])


def test_witness_is_deterministic():
    a = embedding_decide(7)
    b = embedding_decide(7)
    assert a.witness_digest() == b.witness_digest()
