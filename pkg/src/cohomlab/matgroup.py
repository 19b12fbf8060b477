"""Enumerated groups: SL2(q), PSL2(q), Borel subgroups, and small test fixtures.

Every group is a :class:`GroupAtlas`: a list of hashable element keys closed
under a multiplication rule, discovered by breadth-first search over the right
Cayley graph ``g -> g*x``.  All higher layers refer to elements by index.
Matrices act on row vectors from the right, so ``(x : y) . M = (xa + yc : xb + yd)``.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Hashable, Sequence

import numpy as np

from .errors import ConsistencyError, UsageError
from .field import FieldTable, check_odd_prime_power, make_field

log = logging.getLogger(__name__)

SL = "SL"
PSL = "PSL"
BOREL = "BOREL"
FIXTURE = "FIXTURE"

Mat2 = tuple  # (a, b, c, d) field codes, row-major

SOFT_MAX_Q = 27


def sl2_order(q: int) -> int:
    return q * (q * q - 1)


def psl2_order(q: int) -> int:
    return q * (q * q - 1) // 2


def mat_mul(f: FieldTable, m: Mat2, n: Mat2) -> Mat2:
    a, b, c, d = m
    e, g, h, k = n
    add, mul = f.add_t, f.mul_t
    return (
        add[mul[a][e]][mul[b][h]],
        add[mul[a][g]][mul[b][k]],
        add[mul[c][e]][mul[d][h]],
        add[mul[c][g]][mul[d][k]],
    )


def mat_neg(f: FieldTable, m: Mat2) -> Mat2:
    return tuple(f.neg_t[x] for x in m)


def mat_adjugate(f: FieldTable, m: Mat2) -> Mat2:
    a, b, c, d = m
    return (d, f.neg_t[b], f.neg_t[c], a)


def mat_det(f: FieldTable, m: Mat2) -> int:
    a, b, c, d = m
    return f.sub(f.mul(a, d), f.mul(b, c))


def canonical_sign(f: FieldTable, m: Mat2) -> Mat2:
    """Representative of ``{m, -m}`` whose first nonzero entry has the smaller code."""
    for x in m:
        if x:
            return m if x < f.neg_t[x] else mat_neg(f, m)
    raise UsageError("zero matrix has no projective class")


@dataclass(eq=False)
class GroupAtlas:
    """A fully enumerated group with a BFS spanning tree of its Cayley graph.

    ``gen_images[i, j]`` is the index of ``elements[i] * generator_j``.
    ``parent[i] = (g, x)`` is the tree edge ``g -> g*x`` reaching ``i``
    (``(-1, -1)`` for the identity, which is element 0).
    """

    kind: str
    elements: list
    generators: list[int]
    gen_images: np.ndarray
    parent: np.ndarray
    mul_key: Callable = field(repr=False)
    inv_key: Callable = field(repr=False)
    q: int | None = None
    gf: FieldTable | None = field(default=None, repr=False)
    gen_keys: list = field(default_factory=list, repr=False)
    index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.index:
            self.index = {k: i for i, k in enumerate(self.elements)}
        self.gen_images = np.asarray(self.gen_images, dtype=np.int64)
        self.parent = np.asarray(self.parent, dtype=np.int64).reshape(-1, 2)
        if not self.gen_keys:
            self.gen_keys = [self.elements[g] for g in self.generators]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def ngens(self) -> int:
        return len(self.generators)

    @cached_property
    def gen_inv_images(self) -> np.ndarray:
        """``gen_inv_images[i, j]`` is the index of ``elements[i] * generator_j^-1``."""
        out = np.empty_like(self.gen_images)
        rows = np.arange(self.order)
        for j in range(self.ngens):
            out[self.gen_images[:, j], j] = rows
        return out

    @cached_property
    def bfs_order(self) -> np.ndarray:
        """Element indices sorted so every element comes after its tree parent."""
        depth = self.depth
        return np.argsort(depth, kind="stable")

    @cached_property
    def depth(self) -> np.ndarray:
        depth = np.full(self.order, -1, dtype=np.int64)
        depth[0] = 0
        pending = list(range(1, self.order))
        while pending:
            rest = []
            for i in pending:
                p = self.parent[i, 0]
                if depth[p] >= 0:
                    depth[i] = depth[p] + 1
                else:
                    rest.append(i)
            if len(rest) == len(pending):
                raise ConsistencyError("spanning tree has a cycle or disconnected part")
            pending = rest
        return depth

    def word_of(self, i: int) -> list[tuple[int, bool]]:
        """The BFS word of element ``i``: generator letters, none inverted."""
        letters = []
        while i != 0:
            g, x = self.parent[i]
            letters.append((int(x), False))
            i = int(g)
        letters.reverse()
        return letters

    def multiply(self, i: int, j: int) -> int:
        return self.index[self.mul_key(self.elements[i], self.elements[j])]

    def inverse(self, i: int) -> int:
        return self.index[self.inv_key(self.elements[i])]

    identity = 0

    def evaluate(self, letters: Sequence[tuple[int, bool]], start: int = 0) -> int:
        """Right-multiply ``start`` by the letters of a word, using generator tables."""
        g = start
        fwd, inv = self.gen_images, self.gen_inv_images
        for x, is_inv in letters:
            g = int(inv[g, x] if is_inv else fwd[g, x])
        return g

    def element_order(self, i: int) -> int:
        n, g = 1, i
        while g != 0:
            g = self.multiply(g, i)
            n += 1
        return n

    def mult_table(self) -> np.ndarray:
        """Full ``order x order`` multiplication table (only for small groups)."""
        n = self.order
        table = np.empty((n, n), dtype=np.int64)
        table[0] = np.arange(n)
        # (g x) h = g (x h), filled along the tree
        for i in self.bfs_order[1:]:
            g, x = self.parent[i]
            table[i] = table[g][self._gen_left_table[x]]
        return table

    @cached_property
    def _gen_left_table(self) -> np.ndarray:
        # _gen_left_table[x, h] = index of generator_x * h
        n = self.order
        out = np.empty((self.ngens, n), dtype=np.int64)
        for x, gx in enumerate(self.generators):
            out[x] = [self.multiply(gx, h) for h in range(n)]
        return out

    def check_tree(self) -> None:
        """Every tree edge is a Cayley edge and every BFS word evaluates to its element."""
        for i in range(1, self.order):
            g, x = self.parent[i]
            if self.gen_images[g, x] != i:
                raise ConsistencyError(f"tree edge into {i} is not a Cayley edge")
        for i in range(self.order):
            if self.evaluate(self.word_of(i)) != i:
                raise ConsistencyError(f"BFS word of element {i} does not evaluate to it")


def closure(
    identity: Hashable,
    gen_keys: Sequence[Hashable],
    mul: Callable,
    inv: Callable,
    kind: str,
    expected_order: int | None = None,
    q: int | None = None,
    field_table: FieldTable | None = None,
) -> GroupAtlas:
    """Enumerate the group generated by ``gen_keys`` by BFS from ``identity``."""
    elements = [identity]
    index = {identity: 0}
    parent = [(-1, -1)]
    images: list[list[int]] = []
    queue = deque([0])
    k = len(gen_keys)
    while queue:
        i = queue.popleft()
        g = elements[i]
        row = []
        for x, gx in enumerate(gen_keys):
            h = mul(g, gx)
            j = index.get(h)
            if j is None:
                j = len(elements)
                index[h] = j
                elements.append(h)
                parent.append((i, x))
                queue.append(j)
                if expected_order is not None and j >= expected_order:
                    raise ConsistencyError(
                        f"{kind} closure exceeded the expected order {expected_order}"
                    )
            row.append(j)
        images.append(row)
    if expected_order is not None and len(elements) != expected_order:
        raise ConsistencyError(
            f"{kind} generators produce {len(elements)} elements, expected {expected_order}"
        )
    gen_idx = [index[gx] for gx in gen_keys]
    return GroupAtlas(
        kind=kind,
        elements=elements,
        generators=gen_idx,
        gen_images=np.array(images, dtype=np.int64).reshape(len(elements), k),
        parent=np.array(parent, dtype=np.int64),
        mul_key=mul,
        inv_key=inv,
        q=q,
        gf=field_table,
        gen_keys=list(gen_keys),
        index=index,
    )


def standard_generators(f: FieldTable) -> list[Mat2]:
    """u = [[1,1],[0,1]], w = [[0,1],[-1,0]], and [[1,a],[0,1]] for a primitive a when e > 1."""
    one, m1 = 1, f.neg(1)
    gens = [(one, one, 0, one), (0, one, m1, 0)]
    if f.e > 1:
        gens.append((one, f.primitive, 0, one))
    return gens


def _matrix_ops(f: FieldTable, kind: str):
    if kind == SL:
        def mul(m, n):
            return mat_mul(f, m, n)

        def inv(m):
            return mat_adjugate(f, m)
    else:
        def mul(m, n):
            return canonical_sign(f, mat_mul(f, m, n))

        def inv(m):
            return canonical_sign(f, mat_adjugate(f, m))
    return mul, inv


def build_group(q: int, kind: str = PSL, generator_order: Sequence[int] | None = None) -> GroupAtlas:
    """Enumerate SL2(q) or PSL2(q) from the standard generators.

    ``generator_order`` permutes the generator list, which changes the BFS tree
    (and hence the derived presentation) but not the group.
    """
    check_odd_prime_power(q)
    if kind not in (SL, PSL):
        raise UsageError(f"kind must be SL or PSL, got {kind!r}")
    if q > SOFT_MAX_Q:
        log.warning("q = %d exceeds the tested range; enumeration may use a lot of memory", q)
    f = make_field(q)
    gens = standard_generators(f)
    if generator_order is not None:
        if sorted(generator_order) != list(range(len(gens))):
            raise UsageError("generator_order must be a permutation of the generator indices")
        gens = [gens[i] for i in generator_order]
    mul, inv = _matrix_ops(f, kind)
    if kind == PSL:
        gens = [canonical_sign(f, g) for g in gens]
    expected = sl2_order(q) if kind == SL else psl2_order(q)
    return closure((1, 0, 0, 1), gens, mul, inv, kind, expected, q, f)


@dataclass(eq=False)
class ProjLine:
    """Points of P^1(F_q): index i < q is (x_i : 1) with code(x_i) = i, index q is (1 : 0)."""

    q: int
    perm_of: np.ndarray  # (order, q+1): point i moves to perm_of[g, i]

    @property
    def npoints(self) -> int:
        return self.q + 1

    def points(self) -> list[tuple[int, int]]:
        return [(i, 1) for i in range(self.q)] + [(1, 0)]


def point_image(f: FieldTable, point: int, m: Mat2) -> int:
    a, b, c, d = m
    q = f.q
    if point == q:
        x, y = a, b
    else:
        x = f.add(f.mul(point, a), c)
        y = f.add(f.mul(point, b), d)
    return q if y == 0 else f.div(x, y)


def projective_action(atlas: GroupAtlas, g: int) -> list[int]:
    """The permutation of the q+1 projective points induced by element ``g``."""
    if atlas.gf is None:
        raise UsageError("projective action needs a matrix group")
    m = atlas.elements[g]
    return [point_image(atlas.gf, i, m) for i in range(atlas.q + 1)]


def projective_line(atlas: GroupAtlas) -> ProjLine:
    """Permutations of all elements, built along the BFS tree and spot-checked."""
    if atlas.gf is None:
        raise UsageError("projective action needs a matrix group")
    q = atlas.q
    n = q + 1
    gen_perms = np.array([projective_action(atlas, g) for g in atlas.generators], dtype=np.int64)
    perms = np.empty((atlas.order, n), dtype=np.int64)
    perms[0] = np.arange(n)
    for i in atlas.bfs_order[1:]:
        g, x = atlas.parent[i]
        # right action: the point moves by g first, then by x
        perms[i] = gen_perms[x][perms[g]]
    for i in range(0, atlas.order, max(1, atlas.order // 50)):
        if list(perms[i]) != projective_action(atlas, i):
            raise ConsistencyError(f"projective permutation of element {i} is inconsistent")
    return ProjLine(q, perms)


def borel_subgroup(atlas: GroupAtlas) -> GroupAtlas:
    """Stabilizer of the point (1 : 0) as a group in its own right.

    Under the right action on row vectors this is the set of matrices with
    b = 0, generated by the lower unipotent [[1,0],[1,1]] (plus [[1,0],[a,1]]
    for a primitive a when e > 1) and the diagonal [[a,0],[0,1/a]].
    """
    if atlas.kind != PSL or atlas.gf is None:
        raise UsageError("the Borel subgroup is taken inside PSL2(q)")
    f, q = atlas.gf, atlas.q
    a = f.primitive
    gens = [(1, 0, 1, 1)]
    if f.e > 1:
        gens.append((1, 0, a, 1))
    gens.append((a, 0, 0, f.inv(a)))
    gens = [canonical_sign(f, g) for g in gens]
    for g in gens:
        if point_image(f, q, g) != q:
            raise ConsistencyError("Borel generator does not fix (1 : 0)")
    mul, inv = _matrix_ops(f, PSL)
    expected = q * (q - 1) // 2
    h = closure((1, 0, 0, 1), gens, mul, inv, BOREL, expected, q, f)
    stab = sum(1 for m in atlas.elements if m[1] == 0)
    if stab != h.order:
        raise ConsistencyError(f"stabilizer has {stab} elements but the Borel closure has {h.order}")
    return h


def sl2_lift(atlas_psl: GroupAtlas, atlas_sl: GroupAtlas, g: int) -> int:
    """Canonical-sign section PSL2(q) -> SL2(q)."""
    if atlas_psl.q != atlas_sl.q or atlas_psl.kind != PSL or atlas_sl.kind != SL:
        raise UsageError("need a PSL and an SL atlas for the same q")
    return atlas_sl.index[atlas_psl.elements[g]]


def sl2_project(atlas_psl: GroupAtlas, atlas_sl: GroupAtlas, s: int) -> int:
    return atlas_psl.index[canonical_sign(atlas_psl.gf, atlas_sl.elements[s])]


def involutions(atlas: GroupAtlas) -> list[int]:
    """Indices of the elements of order exactly 2."""
    return [i for i in range(1, atlas.order) if atlas.multiply(i, i) == 0]


# Small fixture groups given by permutations (tuples, composed left to right).

def perm_mul(p: tuple, r: tuple) -> tuple:
    """Apply ``p`` then ``r``."""
    return tuple(r[i] for i in p)


def perm_inv(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def permutation_group(gens: Sequence[Sequence[int]], degree: int | None = None) -> GroupAtlas:
    """Fixture group generated by permutations of ``range(degree)``."""
    gens = [tuple(g) for g in gens]
    if degree is None:
        degree = len(gens[0]) if gens else 0
    identity = tuple(range(degree))
    return closure(identity, gens, perm_mul, perm_inv, FIXTURE)


def cyclic_group(n: int) -> GroupAtlas:
    if n < 1:
        raise UsageError("cyclic group order must be positive")
    return permutation_group([tuple((i + 1) % n for i in range(n))], n)


def trivial_group() -> GroupAtlas:
    return permutation_group([], 1)
