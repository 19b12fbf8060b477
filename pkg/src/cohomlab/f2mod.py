"""Right modules over GF(2)[G] for an enumerated group G.

A module is given by one invertible 0/1 matrix per generator; row vectors are
acted on from the right, ``v -> v A_x``.  Vectors inside a module are plain
ints (bit i = coordinate i) or :class:`BitVec` at the public surface.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, ContractViolation, UsageError
from .gf2 import BitMat, BitVec, Eliminator, Subspace, iter_bits, kernel_basis, rank
from .matgroup import GroupAtlas, ProjLine

T, I, V, W, U, CUSTOM = "T", "I", "V", "W", "U", "custom"

EXHAUSTIVE_MAX_DIM = 14
DEFAULT_SAMPLES = 100_000


def gf2_inverse(a: np.ndarray) -> np.ndarray:
    """Inverse of a square 0/1 matrix over GF(2); raises if singular."""
    n = a.shape[0]
    aug = np.concatenate([a.astype(np.uint8) & 1, np.eye(n, dtype=np.uint8)], axis=1)
    for c in range(n):
        nz = np.flatnonzero(aug[c:, c])
        if nz.size == 0:
            raise ContractViolation("matrix is singular over GF(2)")
        p = c + nz[0]
        if p != c:
            aug[[c, p]] = aug[[p, c]]
        hit = aug[:, c].astype(bool)
        hit[c] = False
        aug[hit] ^= aug[c]
    return aug[:, n:].copy()


def _row_ints(a: np.ndarray) -> list[int]:
    weights = 1 << np.arange(a.shape[1], dtype=object)
    return [int((row.astype(object) * weights).sum()) for row in a]


class _Applier:
    """Right multiplication of int row vectors by a fixed matrix, 8 bits at a time."""

    __slots__ = ("tables",)

    def __init__(self, a: np.ndarray):
        rows = _row_ints(a)
        self.tables = []
        for start in range(0, len(rows), 8):
            chunk = rows[start:start + 8] + [0] * 8
            t = [0] * 256
            for byte in range(1, 256):
                low = byte & -byte
                t[byte] = t[byte ^ low] ^ chunk[low.bit_length() - 1]
            self.tables.append(t)

    def __call__(self, v: int) -> int:
        out = 0
        for t in self.tables:
            out ^= t[v & 0xFF]
            v >>= 8
        return out


@dataclass(eq=False)
class F2Module:
    atlas: GroupAtlas
    dim: int
    gen_action: list[np.ndarray]
    label: str = CUSTOM

    def __post_init__(self):
        if len(self.gen_action) != self.atlas.ngens:
            raise UsageError(f"{len(self.gen_action)} action matrices for {self.atlas.ngens} generators")
        acts = []
        for a in self.gen_action:
            a = np.asarray(a, dtype=np.uint8) & 1
            if a.shape != (self.dim, self.dim):
                raise UsageError(f"action matrix has shape {a.shape}, expected {(self.dim, self.dim)}")
            acts.append(a)
        self.gen_action = acts
        self.gen_inverse = [gf2_inverse(a) for a in acts]
        self.check_relators()

    @cached_property
    def element_actions(self) -> np.ndarray:
        """Action matrix of every group element, accumulated along the BFS tree."""
        atlas, d = self.atlas, self.dim
        out = np.empty((atlas.order, d, d), dtype=np.uint8)
        out[0] = np.eye(d, dtype=np.uint8)
        for i in atlas.bfs_order[1:]:
            g, x = atlas.parent[i]
            out[i] = (out[g] @ self.gen_action[x]) & 1
        return out

    @cached_property
    def element_inverse_actions(self) -> np.ndarray:
        atlas, d = self.atlas, self.dim
        out = np.empty((atlas.order, d, d), dtype=np.uint8)
        out[0] = np.eye(d, dtype=np.uint8)
        for i in atlas.bfs_order[1:]:
            g, x = atlas.parent[i]
            out[i] = (self.gen_inverse[x] @ out[g]) & 1
        return out

    def check_relators(self, chunk: int = 4096) -> None:
        """Every Cayley relator acts trivially.

        The relator of the non-tree edge ``g -> h = g x`` acts as
        ``A(g) A_x A(h)^-1``, so it is trivial exactly when ``A(g) A_x = A(h)``.
        """
        atlas = self.atlas
        acts = np.asarray(self.gen_action, dtype=np.uint8).reshape(atlas.ngens, self.dim, self.dim)
        elem = self.element_actions
        g = np.repeat(np.arange(atlas.order), atlas.ngens)
        x = np.tile(np.arange(atlas.ngens), atlas.order)
        h = atlas.gen_images.reshape(-1)
        for s in range(0, len(g), chunk):
            sl = slice(s, s + chunk)
            prod = (np.matmul(elem[g[sl]].astype(np.float32), acts[x[sl]].astype(np.float32))
                    .astype(np.int64) & 1)
            if not np.array_equal(prod.astype(np.uint8), elem[h[sl]]):
                raise ConsistencyError(f"module {self.label} does not respect the group relators")

    @cached_property
    def _appliers(self) -> list[_Applier]:
        return [_Applier(a) for a in self.gen_action]

    def apply(self, v: int, x: int) -> int:
        """``v A_x`` for an int row vector."""
        return self._appliers[x](v)

    def act(self, v: BitVec, g: int) -> BitVec:
        """``v`` times the action of group element ``g``."""
        rows = _row_ints(self.element_actions[g])
        out = 0
        for i in iter_bits(v.bits):
            out ^= rows[i]
        return BitVec(self.dim, out)

    def __repr__(self) -> str:
        return f"F2Module({self.label}, dim={self.dim}, |G|={self.atlas.order})"


@dataclass(eq=False)
class Submodule:
    parent: F2Module
    space: Subspace

    def __post_init__(self):
        for b in self.space.basis_ints():
            for x in range(self.parent.atlas.ngens):
                if not self.space.contains(self.parent.apply(b, x)):
                    raise ContractViolation("subspace is not closed under the group action")

    @classmethod
    def spanned_by(cls, parent: F2Module, vectors: Sequence[BitVec | int]) -> Submodule:
        return cls(parent, Subspace(parent.dim, vectors))

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def basis(self) -> list[BitVec]:
        return self.space.basis

    def contains(self, v: BitVec | int) -> bool:
        return self.space.contains(v)

    def __repr__(self) -> str:
        return f"Submodule(dim={self.dim} of {self.parent.label})"


def perm_module(atlas: GroupAtlas, projline: ProjLine) -> F2Module:
    """The permutation module on the projective line: basis vector i goes to i.g."""
    n = projline.npoints
    acts = []
    for g in atlas.generators:
        a = np.zeros((n, n), dtype=np.uint8)
        a[np.arange(n), projline.perm_of[g]] = 1
        acts.append(a)
    return F2Module(atlas, n, acts, V)


def trivial_module(atlas: GroupAtlas, dim: int = 1, label: str = T) -> F2Module:
    return F2Module(atlas, dim, [np.eye(dim, dtype=np.uint8) for _ in range(atlas.ngens)], label)


def fixed_points(m: F2Module) -> Submodule:
    """Vectors fixed by every generator, i.e. the kernel of all ``A_x - 1`` stacked."""
    d = m.dim
    eye = np.eye(d, dtype=np.uint8)
    if m.atlas.ngens == 0:
        return Submodule(m, Subspace(d, [1 << i for i in range(d)]))
    stacked = np.concatenate([(a ^ eye).T for a in m.gen_action], axis=0)
    return Submodule(m, Subspace(d, kernel_basis(BitMat.from_dense(stacked))))


def _spin_ints(m: F2Module, seeds: Sequence[int], stop: Subspace | None = None,
               order: Sequence[int] | None = None) -> tuple[Eliminator, bool]:
    """Closure of ``seeds`` under the generators; optionally stop once ``stop`` is covered."""
    e = Eliminator(m.dim)
    queue = [s for s in seeds if e.absorb(s)]
    gens = list(order) if order is not None else range(m.atlas.ngens)
    targets = stop.basis_ints() if stop is not None else []
    if targets and all(e.contains(t) for t in targets):
        return e, True
    while queue:
        v = queue.pop()
        for x in gens:
            w = m.apply(v, x)
            if e.absorb(w):
                queue.append(w)
                if targets and all(e.contains(t) for t in targets):
                    return e, True
    return e, bool(targets) and all(e.contains(t) for t in targets)


def spin(m: F2Module, seed: BitVec, order: Sequence[int] | None = None) -> Submodule:
    """Smallest submodule containing ``seed``."""
    if seed.length != m.dim:
        raise UsageError(f"seed has length {seed.length}, module has dimension {m.dim}")
    e, _ = _spin_ints(m, [seed.bits], order=order)
    return Submodule(m, Subspace(m.dim, e.basis_ints()))


@dataclass(eq=False)
class Quotient:
    """Coordinates of ``parent / sub`` on the non-pivot columns of the echelon basis of ``sub``."""

    parent: F2Module
    sub: Submodule
    complement: list[int]

    def project(self, v: BitVec | int) -> int:
        x = self.sub.space.reduce(v)
        out = 0
        for t, c in enumerate(self.complement):
            if (x >> c) & 1:
                out |= 1 << t
        return out

    def lift(self, w: BitVec | int) -> int:
        """Linear (not module) section: scatter onto the complement columns."""
        w = w.bits if isinstance(w, BitVec) else w
        out = 0
        for t in iter_bits(w):
            out |= 1 << self.complement[t]
        return out


def quotient_module(m: F2Module, s: Submodule, label: str = CUSTOM) -> tuple[F2Module, Quotient]:
    if s.parent is not m:
        raise ContractViolation("submodule belongs to a different module")
    pivots = set(s.space.pivot_columns())
    comp = [c for c in range(m.dim) if c not in pivots]
    quo = Quotient(m, s, comp)
    k = len(comp)
    acts = []
    for x in range(m.atlas.ngens):
        a = np.zeros((k, k), dtype=np.uint8)
        for t, c in enumerate(comp):
            img = quo.project(m.apply(1 << c, x))
            for j in iter_bits(img):
                a[t, j] = 1
        acts.append(a)
    return F2Module(m.atlas, k, acts, label), quo


def submodule_module(s: Submodule, label: str = CUSTOM) -> F2Module:
    """The submodule as a module in its own right, in echelon-basis coordinates."""
    basis = s.space.basis_ints()
    pivots = s.space.pivot_columns()
    m = s.parent
    k = len(basis)
    acts = []
    for x in range(m.atlas.ngens):
        a = np.zeros((k, k), dtype=np.uint8)
        for i, b in enumerate(basis):
            img = m.apply(b, x)
            if not s.space.contains(img):
                raise ContractViolation("subspace is not closed under the group action")
            for j, p in enumerate(pivots):
                a[i, j] = (img >> p) & 1
        acts.append(a)
    return F2Module(m.atlas, k, acts, label)


def derived_submodule(m: F2Module) -> Submodule:
    """Span of ``v A_x - v``: the smallest submodule with trivial quotient."""
    vecs = []
    for x in range(m.atlas.ngens):
        for i in range(m.dim):
            vecs.append(m.apply(1 << i, x) ^ (1 << i))
    sub = Submodule(m, Subspace(m.dim, vecs))
    if m.label == W and sub.dim != m.dim - 1:
        raise ConsistencyError(
            f"derived submodule of W has codimension {m.dim - sub.dim}; W should have a unique maximal submodule of codimension 1"
        )
    return sub


@dataclass
class MinimalityVerdict:
    passed: bool
    mode: str
    checked: int
    counterexample: BitVec | None = None


def unique_minimal_check(m: F2Module, mode: str = "exhaustive", target: Submodule | None = None,
                         samples: int = DEFAULT_SAMPLES, seed: int = 0) -> MinimalityVerdict:
    """Whether every nonzero vector spins up a submodule containing ``target``.

    ``target`` defaults to the fixed points of ``m``.  Sampled mode is evidence
    only; exhaustive mode is a proof and requires dim <= 14.
    """
    if target is None:
        target = fixed_points(m)
    if target.dim == 0:
        return MinimalityVerdict(False, mode, 0)
    if mode == "exhaustive":
        if m.dim > EXHAUSTIVE_MAX_DIM:
            raise UsageError(f"exhaustive mode needs dim <= {EXHAUSTIVE_MAX_DIM}, got {m.dim}")
        vectors = range(1, 1 << m.dim)
    elif mode == "sampled":
        rng = random.Random(seed)
        vectors = (rng.randrange(1, 1 << m.dim) for _ in range(samples))
    else:
        raise UsageError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")
    n = 0
    for v in vectors:
        n += 1
        _, ok = _spin_ints(m, [v], stop=target.space)
        if not ok:
            return MinimalityVerdict(False, mode, n, BitVec(m.dim, v))
    return MinimalityVerdict(True, mode, n)


def is_irreducible(m: F2Module, mode: str = "exhaustive", samples: int = DEFAULT_SAMPLES,
                   seed: int = 0) -> MinimalityVerdict:
    """Every nonzero vector spins up the whole module."""
    whole = Submodule(m, Subspace(m.dim, [1 << i for i in range(m.dim)]))
    return unique_minimal_check(m, mode, whole, samples, seed)


def endomorphism_dim(m: F2Module) -> int:
    """Dimension of ``{E : E A_x = A_x E for every generator x}``.

    With E flattened row-major, ``E A`` is ``kron(1, A^T) vec(E)`` and ``A E``
    is ``kron(A, 1) vec(E)``.
    """
    d = m.dim
    if m.atlas.ngens == 0:
        return d * d
    eye = np.eye(d, dtype=np.uint8)
    blocks = [(np.kron(eye, a.T) ^ np.kron(a, eye)) & 1 for a in m.gen_action]
    return d * d - rank(BitMat.from_dense(np.concatenate(blocks, axis=0)))


def endomorphism_basis(m: F2Module) -> list[np.ndarray]:
    """Basis of the commutant as ``dim x dim`` matrices."""
    d = m.dim
    eye = np.eye(d, dtype=np.uint8)
    if m.atlas.ngens == 0:
        return [np.eye(d * d, dtype=np.uint8)[i].reshape(d, d) for i in range(d * d)]
    blocks = [(np.kron(eye, a.T) ^ np.kron(a, eye)) & 1 for a in m.gen_action]
    ker = kernel_basis(BitMat.from_dense(np.concatenate(blocks, axis=0)))
    out = []
    for v in ker:
        e = np.zeros(d * d, dtype=np.uint8)
        e[v.support()] = 1
        out.append(e.reshape(d, d))
    return out


@dataclass
class Decomposition:
    """How a module with a 2-dimensional commutant looks over GF(2).

    ``kind`` is ``"field"`` when the commutant is GF(4), ``"split"`` when it is
    GF(2) x GF(2) and the module is the direct sum of the two idempotent
    images, or ``"other"``.  ``summands_absolutely_irreducible`` certifies that
    the module becomes a sum of two non-isomorphic absolutely irreducible
    modules over an extension field.
    """

    kind: str
    summand_dims: list[int]
    summands_absolutely_irreducible: bool | None = None


def decompose_two_dim_commutant(m: F2Module, mode: str = "exhaustive",
                                samples: int = DEFAULT_SAMPLES) -> Decomposition:
    basis = endomorphism_basis(m)
    if len(basis) != 2:
        return Decomposition("other", [])
    eye = np.eye(m.dim, dtype=np.uint8)
    nonscalar = [e for e in (basis[0], basis[1], basis[0] ^ basis[1]) if not np.array_equal(e, eye) and e.any()]
    for e in nonscalar:
        if np.array_equal((e @ e) & 1, e):
            summands = []
            ok = True
            for proj in (e, e ^ eye):
                sub = Submodule(m, Subspace(m.dim, [BitVec.from_list(row) for row in proj]))
                mod = submodule_module(sub)
                summands.append(sub.dim)
                sub_mode = mode if mod.dim <= EXHAUSTIVE_MAX_DIM else "sampled"
                ok = ok and endomorphism_dim(mod) == 1 and is_irreducible(mod, sub_mode, samples).passed
            return Decomposition("split", summands, ok)
    # irreducible with commutant GF(4): over GF(4) it splits into two conjugate absolutely irreducibles
    sub_mode = mode if m.dim <= EXHAUSTIVE_MAX_DIM else "sampled"
    return Decomposition("field", [m.dim], is_irreducible(m, sub_mode, samples).passed)
