"""Arithmetic in GF(q) for odd prime powers q = p^e.

An element is encoded by the integer whose base-p digits are its polynomial
coefficients (a_{e-1}, ..., a_0), most significant first.  The modulus is the
lexicographically smallest monic irreducible polynomial of degree e, and the
primitive element is the smallest code of multiplicative order q - 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from .errors import UsageError


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``q = p**e``, or None if q is not a prime power."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    e, r = 0, q
    while r % p == 0:
        r //= p
        e += 1
    return (p, e) if r == 1 else None


def check_odd_prime_power(q) -> tuple[int, int]:
    if not isinstance(q, int) or isinstance(q, bool):
        raise UsageError(f"q must be an integer, got {q!r}")
    pe = prime_power(q)
    if pe is None:
        raise UsageError(f"q = {q} is not a prime power")
    if pe[0] == 2:
        raise UsageError(f"q = {q} is even; only odd prime powers are supported")
    return pe


# Polynomials over GF(p) are coefficient lists, lowest degree first.

def _poly_mulmod(a: list[int], b: list[int], mod: list[int], p: int) -> list[int]:
    e = len(mod) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    # mod is monic
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k]
        if c:
            for j in range(e + 1):
                prod[k - e + j] = (prod[k - e + j] - c * mod[j]) % p
    return (prod + [0] * e)[:e]


def _poly_divides(d: list[int], f: list[int], p: int) -> bool:
    """Whether monic ``d`` divides ``f``."""
    r = list(f)
    dd = len(d) - 1
    for k in range(len(r) - 1, dd - 1, -1):
        c = r[k]
        if c:
            for j in range(dd + 1):
                r[k - dd + j] = (r[k - dd + j] - c * d[j]) % p
    return not any(r[:dd])


def is_irreducible(coeffs: list[int], p: int) -> bool:
    """Irreducibility of a monic polynomial by trial division by monic factors."""
    e = len(coeffs) - 1
    for deg in range(1, e // 2 + 1):
        for tail in product(range(p), repeat=deg):
            d = list(reversed(tail)) + [1]
            if _poly_divides(d, coeffs, p):
                return False
    return True


def _smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    # candidates in lexicographic order of (a_{e-1}, ..., a_0)
    for digits in product(range(p), repeat=e):
        coeffs = list(reversed(digits)) + [1]
        if is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise AssertionError("no irreducible polynomial found")


def _decode(code: int, p: int, e: int) -> list[int]:
    out = []
    for _ in range(e):
        code, r = divmod(code, p)
        out.append(r)
    return out


def _encode(coeffs: list[int], p: int) -> int:
    code = 0
    for c in reversed(coeffs):
        code = code * p + c
    return code


@dataclass(frozen=True, eq=False)
class FieldTable:
    p: int
    e: int
    modulus: tuple[int, ...]  # lowest degree first, monic
    add_t: tuple[tuple[int, ...], ...] = field(repr=False)
    mul_t: tuple[tuple[int, ...], ...] = field(repr=False)
    neg_t: tuple[int, ...] = field(repr=False)
    primitive: int = 0
    exp_t: tuple[int, ...] = field(repr=False, default=())
    log_t: tuple[int, ...] = field(repr=False, default=())

    @property
    def q(self) -> int:
        return self.p ** self.e

    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        return self.add_t[a][b]

    def neg(self, a: int) -> int:
        return self.neg_t[a]

    def sub(self, a: int, b: int) -> int:
        return self.add_t[a][self.neg_t[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_t[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.q)
        return self.exp_t[(-self.log_t[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul_t[a][self.inv(b)]

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if n == 0 else 0
        return self.exp_t[(self.log_t[a] * n) % (self.q - 1)]

    def order(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        n, x = 1, a
        while x != 1:
            x = self.mul_t[x][a]
            n += 1
        return n

    def decode(self, code: int) -> tuple[int, ...]:
        """Coefficients (a_{e-1}, ..., a_0)."""
        if not 0 <= code < self.q:
            raise UsageError(f"code {code} out of range for GF({self.q})")
        return tuple(reversed(_decode(code, self.p, self.e)))

    def encode(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) != self.e or any(not 0 <= c < self.p for c in coeffs):
            raise UsageError(f"bad coefficient tuple {coeffs!r}")
        return _encode(list(reversed(coeffs)), self.p)

    def element(self, code: int) -> FieldElement:
        return FieldElement(self, code)

    def __repr__(self) -> str:
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldTable:
    p, e = check_odd_prime_power(q)
    modulus = (0, 1) if e == 1 else _smallest_irreducible(p, e)
    if e == 1:
        add_t = tuple(tuple((a + b) % p for b in range(p)) for a in range(p))
        mul_t = tuple(tuple((a * b) % p for b in range(p)) for a in range(p))
    else:
        polys = [_decode(c, p, e) for c in range(q)]
        add_t = tuple(
            tuple(_encode([(x + y) % p for x, y in zip(polys[a], polys[b])], p) for b in range(q))
            for a in range(q)
        )
        mod = list(modulus)
        mul_t = tuple(
            tuple(_encode(_poly_mulmod(polys[a], polys[b], mod, p), p) for b in range(q))
            for a in range(q)
        )
    neg_t = tuple(next(b for b in range(q) if add_t[a][b] == 0) for a in range(q))

    prim = None
    for g in range(2, q):
        x, n = g, 1
        while x != 1:
            x = mul_t[x][g]
            n += 1
        if n == q - 1:
            prim = g
            break
    exp_t = [1] * (q - 1)
    for i in range(1, q - 1):
        exp_t[i] = mul_t[exp_t[i - 1]][prim]
    log_t = [0] * q
    for i, x in enumerate(exp_t):
        log_t[x] = i
    return FieldTable(p, e, modulus, add_t, mul_t, neg_t, prim, tuple(exp_t), tuple(log_t))


def primitive_element(f: FieldTable) -> FieldElement:
    return FieldElement(f, f.primitive)


@dataclass(frozen=True)
class FieldElement:
    """A field element with operator overloading; internal code uses raw codes."""

    field: FieldTable
    code: int

    def __post_init__(self):
        if not 0 <= self.code < self.field.q:
            raise UsageError(f"code {self.code} out of range")

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise UsageError("elements of different fields")
            return other.code
        if isinstance(other, int):
            return self._embed(other)
        raise TypeError(f"cannot combine a field element with {type(other).__name__}")

    def _embed(self, n: int) -> int:
        # integers land in the prime field, whose codes are the residues mod p
        return n % self.field.p

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.code, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.code, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.code))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.code, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.code, self._other(other)))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.code, n))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv(self.code))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return other.field is self.field and other.code == self.code
        if isinstance(other, int):
            return self.code == self._embed(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.q, self.code))

    def __repr__(self) -> str:
        return f"GF({self.field.q})[{self.code}]"
