"""Slow, obviously-correct reference implementations used as test oracles."""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from cohomlab.cohomology import PSL2Context


def naive_rank(rows: list[list[int]]) -> int:
    m = [list(r) for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c]:
                m[i] = [a ^ b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def all_vectors(n: int):
    for bits in itertools.product((0, 1), repeat=n):
        yield list(bits)


def mat_vec(rows: list[list[int]], v: list[int]) -> list[int]:
    return [sum(a & b for a, b in zip(r, v)) & 1 for r in rows]


def span(vectors: list[int]) -> set[int]:
    out = {0}
    for v in vectors:
        out |= {x ^ v for x in out}
    return out


def to_int(bits) -> int:
    return sum(int(b) << i for i, b in enumerate(bits))


def eval_lifted(word, module, u: list[int]) -> tuple[int, int]:
    """Evaluate a word on lifts ``(x, u_x)`` in the split extension, one letter at a time."""
    atlas = module.atlas
    g, v = 0, 0
    for x, inv in word:
        if inv:
            # (x, u)^-1 = (x^-1, u A_x^-1)
            ux = _row_mul(u[x], module.gen_inverse[x])
            g = int(atlas.gen_inv_images[g, x])
            v = _row_mul(v, module.gen_inverse[x]) ^ ux
        else:
            g = int(atlas.gen_images[g, x])
            v = _row_mul(v, module.gen_action[x]) ^ u[x]
    return g, v


def _row_mul(v: int, a: np.ndarray) -> int:
    out = 0
    for i in range(a.shape[0]):
        if v >> i & 1:
            out ^= to_int(a[i])
    return out


def brute_h1_dim(pres, module) -> int:
    """Enumerate every assignment of generator values and test all relators directly."""
    d, k = module.dim, pres.ngens
    z = 0
    for code in range(1 << (d * k)):
        u = [(code >> (x * d)) & ((1 << d) - 1) for x in range(k)]
        if all(eval_lifted(r.letters, module, u) == (0, 0) for r in pres.relators):
            z += 1
    b = set()
    for v in range(1 << d):
        b.add(tuple(_row_mul(v, module.gen_action[x]) ^ v for x in range(k)))
    return (z.bit_length() - 1) - (len(b).bit_length() - 1)


@lru_cache(maxsize=None)
def context(q: int) -> PSL2Context:
    return PSL2Context(q)


def naive_spin_dim(gen_actions, v: np.ndarray) -> int:
    """Dimension of the smallest invariant subspace containing v, by plain numpy closure."""
    seen = {tuple(v)}
    frontier = [v]
    while frontier:
        nxt = []
        for w in frontier:
            for a in gen_actions:
                img = (w @ a) & 1
                key = tuple(img)
                if key not in seen:
                    seen.add(key)
                    nxt.append(img)
        frontier = nxt
    return naive_rank([list(s) for s in seen])
