"""Dense bit-packed linear algebra over GF(2).

Vectors are Python ints (bit ``i`` is coordinate ``i``) wrapped in
:class:`BitVec`; matrices keep their rows packed into 64-bit words in a numpy
array so that tall systems can be eliminated column by column with vectorized
XORs.  :class:`Eliminator` is the streaming counterpart for systems with far
too many rows to hold at once (bar-resolution differentials).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import ContractViolation, InconsistentSystem, UsageError

WORD_BITS = 64
_WORD = np.dtype("<u8")


def iter_bits(x: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``x`` in increasing order."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class BitVec:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise UsageError("negative length")
        if self.bits < 0 or self.bits >> self.length:
            raise UsageError(f"bits exceed declared length {self.length}")

    @classmethod
    def zeros(cls, n: int) -> BitVec:
        return cls(n, 0)

    @classmethod
    def ones(cls, n: int) -> BitVec:
        return cls(n, (1 << n) - 1)

    @classmethod
    def unit(cls, n: int, i: int) -> BitVec:
        if not 0 <= i < n:
            raise UsageError(f"index {i} out of range for length {n}")
        return cls(n, 1 << i)

    @classmethod
    def from_list(cls, values: Iterable[int]) -> BitVec:
        values = list(values)
        bits = 0
        for i, v in enumerate(values):
            if v & 1:
                bits |= 1 << i
        return cls(len(values), bits)

    @classmethod
    def from_hex(cls, n: int, text: str) -> BitVec:
        return cls(n, int(text, 16) if text else 0)

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def hex(self) -> str:
        width = max(1, (self.length + 3) // 4)
        return format(self.bits, f"0{width}x")

    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0

    def dot(self, other: BitVec) -> int:
        self._check(other)
        return (self.bits & other.bits).bit_count() & 1

    def support(self) -> list[int]:
        return list(iter_bits(self.bits))

    def _check(self, other: BitVec) -> None:
        if other.length != self.length:
            raise UsageError(f"length mismatch {self.length} != {other.length}")

    def __xor__(self, other: BitVec) -> BitVec:
        self._check(other)
        return BitVec(self.length, self.bits ^ other.bits)

    __add__ = __xor__

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.length

    def __repr__(self) -> str:
        return "BitVec(" + "".join(str(b) for b in self.to_list()) + ")"


def _nwords(cols: int) -> int:
    return max(1, (cols + WORD_BITS - 1) // WORD_BITS)


def int_to_words(x: int, nwords: int) -> np.ndarray:
    return np.frombuffer(x.to_bytes(nwords * 8, "little"), dtype=_WORD)


def words_to_int(row: np.ndarray) -> int:
    return int.from_bytes(np.ascontiguousarray(row, dtype=_WORD).tobytes(), "little")


def pack_dense(arr: np.ndarray) -> np.ndarray:
    """Pack a 2-D 0/1 array into rows of little-endian 64-bit words."""
    arr = np.asarray(arr)
    if arr.ndim != 2:
        raise UsageError("expected a 2-D array")
    rows, cols = arr.shape
    nbytes = _nwords(cols) * 8
    packed = np.packbits(arr.astype(np.uint8) & 1, axis=1, bitorder="little")
    out = np.zeros((rows, nbytes), dtype=np.uint8)
    out[:, : packed.shape[1]] = packed
    return out.view(_WORD)


def unpack_int(x: int, n: int) -> np.ndarray:
    """Bits of ``x`` as a uint8 array of length ``n``."""
    raw = np.frombuffer(x.to_bytes((n + 7) // 8 or 1, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n]


class BitMat:
    """Immutable row-major GF(2) matrix with rows packed into 64-bit words."""

    __slots__ = ("cols", "data")

    def __init__(self, data: np.ndarray, cols: int):
        data = np.ascontiguousarray(data, dtype=_WORD)
        if data.ndim != 2 or data.shape[1] != _nwords(cols):
            raise UsageError("packed data does not match column count")
        data.setflags(write=False)
        self.data = data
        self.cols = cols

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @classmethod
    def from_rows(cls, rows: Iterable[BitVec | int], cols: int) -> BitMat:
        nw = _nwords(cols)
        rows = list(rows)
        if any(isinstance(r, BitVec) and r.length != cols for r in rows):
            raise UsageError("row length does not match column count")
        ints = [r.bits if isinstance(r, BitVec) else r for r in rows]
        if any(x >> cols for x in ints):
            raise UsageError("row has bits beyond column count")
        data = np.zeros((len(ints), nw), dtype=_WORD)
        for i, x in enumerate(ints):
            if x:
                data[i] = int_to_words(x, nw)
        return cls(data, cols)

    @classmethod
    def from_dense(cls, arr) -> BitMat:
        arr = np.asarray(arr)
        if arr.ndim != 2:
            raise UsageError("expected a 2-D array")
        return cls(pack_dense(arr), arr.shape[1])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> BitMat:
        return cls(np.zeros((rows, _nwords(cols)), dtype=_WORD), cols)

    @classmethod
    def identity(cls, n: int) -> BitMat:
        return cls.from_rows([1 << i for i in range(n)], n)

    def to_dense(self) -> np.ndarray:
        raw = self.data.view(np.uint8)
        return np.unpackbits(raw, axis=1, bitorder="little")[:, : self.cols]

    def row(self, i: int) -> BitVec:
        return BitVec(self.cols, words_to_int(self.data[i]))

    def row_ints(self) -> list[int]:
        return [words_to_int(r) for r in self.data]

    def mul_vec(self, v: BitVec) -> BitVec:
        """Matrix times column vector."""
        if v.length != self.cols:
            raise UsageError("vector length does not match column count")
        out = 0
        for i, r in enumerate(self.row_ints()):
            if (r & v.bits).bit_count() & 1:
                out |= 1 << i
        return BitVec(self.rows, out)

    def hstack_column(self, v: BitVec) -> BitMat:
        """Append ``v`` as an extra last column."""
        if v.length != self.rows:
            raise UsageError("column length does not match row count")
        dense = np.concatenate([self.to_dense(), unpack_int(v.bits, v.length)[:, None]], axis=1)
        return BitMat.from_dense(dense)

    def __eq__(self, other) -> bool:
        return isinstance(other, BitMat) and self.cols == other.cols and np.array_equal(self.data, other.data)

    def __repr__(self) -> str:
        return f"BitMat({self.rows}x{self.cols})"


def _rref_packed(data: np.ndarray, cols: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of packed rows; pivots chosen leftmost first.

    Returns only the nonzero (pivot) rows.  Zero rows below the pivot block are
    dropped periodically, which keeps very tall redundant systems cheap.
    """
    data = np.array(data, dtype=_WORD, copy=True)
    pivots: list[int] = []
    r = 0
    one = np.uint64(1)
    for c in range(cols):
        if r == data.shape[0]:
            break
        w = c // WORD_BITS
        b = np.uint64(c % WORD_BITS)
        below = (data[r:, w] >> b) & one
        nz = np.flatnonzero(below)
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            data[[r, p]] = data[[p, r]]
        hit = ((data[:, w] >> b) & one).astype(bool)
        hit[r] = False
        if hit.any():
            data[hit] ^= data[r]
        pivots.append(c)
        r += 1
        if len(pivots) % 16 == 0 and data.shape[0] - r > 64:
            keep = data[r:].any(axis=1)
            data = np.concatenate([data[:r], data[r:][keep]])
    return data[:r], pivots


def rref(m: BitMat) -> tuple[list[int], list[int]]:
    """Reduced echelon rows (as ints) and their pivot columns."""
    red, pivots = _rref_packed(m.data, m.cols)
    return [words_to_int(row) for row in red], pivots


def rank(m: BitMat) -> int:
    return len(_rref_packed(m.data, m.cols)[1])


def kernel_basis(m: BitMat) -> list[BitVec]:
    """Basis of ``{v : m.v = 0}``, one vector per free column in increasing order."""
    rows, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = 1 << f
        for row, p in zip(rows, pivots):
            if (row >> f) & 1:
                v |= 1 << p
        basis.append(BitVec(m.cols, v))
    return basis


def solve_affine(a: BitMat, b: BitVec) -> BitVec:
    """Solve ``a.u = b``; free variables are set to zero.

    With leftmost pivots this is the solution with the smallest integer value
    ``sum u_i 2^i``.  Raises :class:`InconsistentSystem` carrying both ranks
    when there is no solution.
    """
    if b.length != a.rows:
        raise UsageError(f"right-hand side has length {b.length}, matrix has {a.rows} rows")
    aug = a.hstack_column(b)
    rows, pivots = rref(aug)
    n = a.cols
    if pivots and pivots[-1] == n:
        raise InconsistentSystem(len(pivots) - 1, len(pivots))
    u = 0
    for row, p in zip(rows, pivots):
        if (row >> n) & 1:
            u |= 1 << p
    return BitVec(n, u)


class Eliminator:
    """Streaming row eliminator keeping fully reduced pivot rows.

    Each pivot row is keyed by its lowest set bit, and no other pivot row has
    that bit set.  Reducing an incoming row therefore costs one XOR per pivot
    column present in the row.
    """

    def __init__(self, cols: int):
        self.cols = cols
        self.pivots: dict[int, int] = {}
        self.mask = 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: BitVec | int) -> int:
        x = row.bits if isinstance(row, BitVec) else row
        hit = x & self.mask
        pivots = self.pivots
        while hit:
            low = hit & -hit
            x ^= pivots[low.bit_length() - 1]
            hit ^= low
        return x

    def absorb(self, row: BitVec | int) -> bool:
        if isinstance(row, BitVec) and row.length != self.cols:
            raise UsageError(f"row length {row.length} != {self.cols}")
        x = self.reduce(row)
        if not x:
            return False
        low = x & -x
        c = low.bit_length() - 1
        pivots = self.pivots
        for k, p in pivots.items():
            if p & low:
                pivots[k] = p ^ x
        pivots[c] = x
        self.mask |= low
        return True

    def absorb_all(self, rows: Iterable[BitVec | int]) -> int:
        for r in rows:
            self.absorb(r)
        return self.rank

    def contains(self, row: BitVec | int) -> bool:
        return self.reduce(row) == 0

    def basis(self) -> list[BitVec]:
        return [BitVec(self.cols, self.pivots[c]) for c in sorted(self.pivots)]

    def basis_ints(self) -> list[int]:
        return [self.pivots[c] for c in sorted(self.pivots)]


def stream_absorb(e: Eliminator, row: BitVec) -> bool:
    return e.absorb(row)


class Subspace:
    """A subspace of GF(2)^n stored as a reduced echelon basis."""

    def __init__(self, n: int, vectors: Iterable[BitVec | int] = ()):
        self.n = n
        self._elim = Eliminator(n)
        for v in vectors:
            if isinstance(v, BitVec) and v.length != n:
                raise UsageError("vector length mismatch")
            self._elim.absorb(v)

    @property
    def dim(self) -> int:
        return self._elim.rank

    @property
    def basis(self) -> list[BitVec]:
        return self._elim.basis()

    def basis_ints(self) -> list[int]:
        return self._elim.basis_ints()

    def pivot_columns(self) -> list[int]:
        return sorted(self._elim.pivots)

    def contains(self, v: BitVec | int) -> bool:
        return self._elim.contains(v)

    def reduce(self, v: BitVec | int) -> int:
        return self._elim.reduce(v)

    def contains_subspace(self, other: Subspace) -> bool:
        return all(self.contains(v) for v in other.basis_ints())

    def __add__(self, other: Subspace) -> Subspace:
        self._check(other)
        return Subspace(self.n, self.basis_ints() + other.basis_ints())

    def intersection(self, other: Subspace) -> Subspace:
        # Zassenhaus: rows (a | a) and (b | 0) with the left block in the low bits.
        self._check(other)
        n = self.n
        e = Eliminator(2 * n)
        for a in self.basis_ints():
            e.absorb(a | (a << n))
        for b in other.basis_ints():
            e.absorb(b)
        return Subspace(n, [e.pivots[c] >> n for c in e.pivots if c >= n])

    def quotient_dim(self, other: Subspace) -> int:
        """``dim self - dim other``; requires ``other`` to lie in ``self``."""
        self._check(other)
        if not self.contains_subspace(other):
            raise ContractViolation("quotient requested by a subspace that is not contained")
        return self.dim - other.dim

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.n == other.n and self.basis_ints() == other.basis_ints()

    def _check(self, other: Subspace) -> None:
        if other.n != self.n:
            raise UsageError("ambient dimension mismatch")

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in GF(2)^{self.n})"


def subspace_ops(basis_a: Sequence[BitVec], basis_b: Sequence[BitVec], n: int | None = None) -> dict:
    """Sum, intersection, membership in A and (when B is inside A) quotient dimension."""
    vecs = list(basis_a) + list(basis_b)
    if n is None:
        if not vecs:
            raise UsageError("cannot infer ambient dimension from two empty bases")
        n = vecs[0].length
    a, b = Subspace(n, basis_a), Subspace(n, basis_b)
    inter = a.intersection(b)
    return {
        "sum": (a + b).basis,
        "intersection": inter.basis,
        "contains": a.contains,
        "quotient_dim": a.quotient_dim(b) if a.contains_subspace(b) else None,
    }
