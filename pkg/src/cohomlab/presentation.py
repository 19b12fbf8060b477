"""Presentations read off the Cayley graph, and linearization of words.

Every non-tree edge ``g -> g*x`` of the BFS spanning tree gives the relator
``word(g) x word(g*x)^-1``; by covering-space theory these relators present
the group.  A word is a tuple of letters ``(generator, inverted)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConsistencyError, UsageError
from .matgroup import PSL, SL, GroupAtlas, mat_neg

Letter = tuple[int, bool]


@dataclass(frozen=True)
class Word:
    letters: tuple[Letter, ...] = ()

    @classmethod
    def of(cls, letters: Iterable[Sequence]) -> Word:
        return cls(tuple((int(x), bool(i)) for x, i in letters))

    def reduced(self) -> Word:
        out: list[Letter] = []
        for x, inv in self.letters:
            if out and out[-1] == (x, not inv):
                out.pop()
            else:
                out.append((x, inv))
        return Word(tuple(out))

    def inverse(self) -> Word:
        return Word(tuple((x, not inv) for x, inv in reversed(self.letters)))

    def is_reduced(self) -> bool:
        return all(a != (b[0], not b[1]) for a, b in zip(self.letters, self.letters[1:]))

    def exponent_sum(self, x: int) -> int:
        return sum(-1 if inv else 1 for y, inv in self.letters if y == x)

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"x{x}^-1" if inv else f"x{x}" for x, inv in self.letters)


@dataclass(eq=False)
class Presentation:
    """Generators of ``atlas`` plus one relator per non-tree Cayley edge.

    ``edges[r] = (g, x, h)`` records the edge ``g -> h = g*x`` behind relator ``r``.
    """

    atlas: GroupAtlas
    relators: list[Word]
    edges: np.ndarray

    @property
    def ngens(self) -> int:
        return self.atlas.ngens

    @property
    def nrel(self) -> int:
        return len(self.relators)


def word_for_element(atlas: GroupAtlas, g: int) -> Word:
    return Word(tuple(atlas.word_of(g)))


def relators_from_cayley(atlas: GroupAtlas) -> Presentation:
    n, k = atlas.order, atlas.ngens
    words = [word_for_element(atlas, g) for g in range(n)]
    relators, edges = [], []
    for g in range(n):
        for x in range(k):
            h = int(atlas.gen_images[g, x])
            if atlas.parent[h, 0] == g and atlas.parent[h, 1] == x:
                continue
            r = (words[g] * Word(((x, False),)) * words[h].inverse()).reduced()
            relators.append(r)
            edges.append((g, x, h))
    expected = n * k - (n - 1)
    if len(relators) != expected:
        raise ConsistencyError(f"{len(relators)} relators, expected {expected}")
    for r in relators:
        if atlas.evaluate(r.letters) != 0:
            raise ConsistencyError(f"relator {r} does not evaluate to the identity")
    return Presentation(atlas, relators, np.array(edges, dtype=np.int64).reshape(-1, 3))


def fox_coefficients(word: Word, module) -> list[np.ndarray]:
    """Matrices ``A_x`` with: lifting x to (x, u_x) gives the word vector part ``sum_x u_x A_x``.

    Vectors are rows and act by right multiplication.  Scanning right to left
    with ``S = action(suffix)``, a letter x adds ``S`` to ``A_x`` and a letter
    x^-1 adds ``action(x)^-1 S``.
    """
    d = module.dim
    out = [np.zeros((d, d), dtype=np.uint8) for _ in range(module.atlas.ngens)]
    s = np.eye(d, dtype=np.uint8)
    for x, inv in reversed(word.letters):
        a = module.gen_inverse[x] if inv else module.gen_action[x]
        if inv:
            s = (a @ s) & 1
            out[x] ^= s
        else:
            out[x] ^= s
            s = (a @ s) & 1
    return out


def _matmul2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # float32 BLAS is exact here: entries are 0/1 and dimensions are small
    return (np.matmul(a.astype(np.float32), b.astype(np.float32)).astype(np.int64) & 1).astype(np.uint8)


def prefix_fox(module) -> np.ndarray:
    """Fox coefficients of every BFS word: array ``(order, k, d, d)``."""
    atlas = module.atlas
    k, d = atlas.ngens, module.dim
    pref = np.zeros((atlas.order, k, d, d), dtype=np.uint8)
    eye = np.eye(d, dtype=np.uint8)
    acts = module.gen_action
    for i in atlas.bfs_order[1:]:
        g, x = atlas.parent[i]
        # A(w x) = A(w) action(x) + [y == x] I
        pref[i] = (pref[g] @ acts[x]) & 1
        pref[i, x] ^= eye
    return pref


def relator_fox_table(pres: Presentation, module, chunk: int = 2048) -> np.ndarray:
    """Fox coefficients of every relator: array ``(nrel, k, d, d)``.

    For ``r = w(g) x w(h)^-1`` additivity gives
    ``A(r) = (A(w(g)) action(x) + [y == x] I - A(w(h))) action(h)^-1``,
    which equals the right-to-left scan of the freely reduced relator.
    """
    if module.atlas is not pres.atlas:
        raise UsageError("module and presentation belong to different groups")
    k, d = pres.ngens, module.dim
    pref = prefix_fox(module)
    acts = np.asarray(module.gen_action, dtype=np.uint8)
    inv_elem = module.element_inverse_actions
    out = np.empty((pres.nrel, k, d, d), dtype=np.uint8)
    eye = np.eye(d, dtype=np.uint8)
    for start in range(0, pres.nrel, chunk):
        sl = slice(start, start + chunk)
        g, x, h = pres.edges[sl, 0], pres.edges[sl, 1], pres.edges[sl, 2]
        t = _matmul2(pref[g], acts[x][:, None])
        t[np.arange(len(x)), x] ^= eye
        t ^= pref[h]
        out[sl] = _matmul2(t, inv_elem[h][:, None])
    return out


def relator_sign_pattern(pres: Presentation, atlas_sl: GroupAtlas) -> list[int]:
    """Evaluate each PSL2 relator on the canonical SL2 lifts: 1 where it gives -I."""
    atlas = pres.atlas
    if atlas.kind != PSL or atlas_sl.kind != SL or atlas.q != atlas_sl.q:
        raise UsageError("need a PSL presentation and the SL atlas for the same q")
    for gp, gs in zip(atlas.generators, atlas_sl.generators):
        if atlas.elements[gp] != atlas_sl.elements[gs]:
            raise ConsistencyError("SL generators are not the canonical lifts of the PSL generators")
    minus = atlas_sl.index[mat_neg(atlas_sl.gf, atlas_sl.elements[0])]
    eps = []
    for r in pres.relators:
        v = atlas_sl.evaluate(r.letters)
        if v == 0:
            eps.append(0)
        elif v == minus:
            eps.append(1)
        else:
            raise ConsistencyError(f"relator {r} lifts to a non-central element of SL2")
    return eps
