"""Low-degree cohomology over GF(2) and the SL2(q) embedding question.

H^1 is computed from a presentation: a 1-cocycle is an assignment of module
vectors to generators whose lifts ``(x, f_x)`` satisfy every relator in the
split extension, so Z^1 is the kernel of the stacked relator Fox matrices.
H^2 is computed from the normalized bar complex for small groups only.

Embedding SL2(q) into the wreath product Z2 wr PSL2(q) is decided by one affine
system: lifts ``(x, u_x)`` must make every relator ``r`` evaluate to
``(1, eps_r * ones)`` where ``eps_r`` records whether ``r`` lifts to -I in SL2(q).
"""

from __future__ import annotations

import hashlib
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import f2mod
from .errors import ConsistencyError, GuardError, InconsistentSystem, UsageError
from .f2mod import F2Module, Quotient, Submodule
from .field import check_odd_prime_power, make_field
from .gf2 import BitMat, BitVec, Eliminator, Subspace, kernel_basis, pack_dense, solve_affine, words_to_int
from .matgroup import PSL, SL, GroupAtlas, borel_subgroup, build_group, involutions, projective_line
from .presentation import Presentation, relator_fox_table, relator_sign_pattern, relators_from_cayley

log = logging.getLogger(__name__)

DEFAULT_GUARD = 100
EMBEDS = "EMBEDS"
NOT_EMBEDS = "NOT_EMBEDS"


class PSL2Context:
    """Everything derived from one q, built lazily and shared between computations."""

    def __init__(self, q: int, generator_order: Sequence[int] | None = None,
                 psl: GroupAtlas | None = None, sl: GroupAtlas | None = None):
        check_odd_prime_power(q)
        self.q = q
        self.generator_order = generator_order
        if psl is not None:
            self.__dict__["psl"] = psl
        if sl is not None:
            self.__dict__["sl"] = sl

    @cached_property
    def field(self):
        return make_field(self.q)

    @cached_property
    def psl(self) -> GroupAtlas:
        return build_group(self.q, PSL, self.generator_order)

    @cached_property
    def sl(self) -> GroupAtlas:
        return build_group(self.q, SL, self.generator_order)

    @cached_property
    def projline(self):
        return projective_line(self.psl)

    @cached_property
    def pres(self) -> Presentation:
        return relators_from_cayley(self.psl)

    @cached_property
    def V(self) -> F2Module:
        return f2mod.perm_module(self.psl, self.projline)

    @cached_property
    def ones(self) -> int:
        return (1 << (self.q + 1)) - 1

    @cached_property
    def I_in_V(self) -> Submodule:
        return Submodule.spanned_by(self.V, [self.ones])

    @cached_property
    def I(self) -> F2Module:
        return f2mod.trivial_module(self.psl, 1, f2mod.I)

    @cached_property
    def _quotient(self) -> tuple[F2Module, Quotient]:
        return f2mod.quotient_module(self.V, self.I_in_V, f2mod.W)

    @property
    def W(self) -> F2Module:
        return self._quotient[0]

    @property
    def quotient(self) -> Quotient:
        return self._quotient[1]

    @cached_property
    def U_in_W(self) -> Submodule:
        return f2mod.derived_submodule(self.W)

    @cached_property
    def U(self) -> F2Module:
        return f2mod.submodule_module(self.U_in_W, f2mod.U)

    @cached_property
    def borel(self) -> GroupAtlas:
        return borel_subgroup(self.psl)

    @cached_property
    def borel_pres(self) -> Presentation:
        return relators_from_cayley(self.borel)

    @cached_property
    def T(self) -> F2Module:
        return f2mod.trivial_module(self.borel, 1, f2mod.T)

    @cached_property
    def eps(self) -> list[int]:
        return relator_sign_pattern(self.pres, self.sl)

    def system(self, module: F2Module) -> np.ndarray:
        return _system_cache(self, module)

    def module(self, name: str) -> F2Module:
        try:
            return {"I": self.I, "V": self.V, "W": self.W, "U": self.U}[name]
        except KeyError:
            raise UsageError(f"unknown module {name!r}") from None


def _system_cache(ctx: PSL2Context, module: F2Module) -> np.ndarray:
    cache = ctx.__dict__.setdefault("_systems", {})
    key = id(module)
    if key not in cache:
        cache[key] = (module, relator_system(ctx.pres, module))
    return cache[key][1]


def relator_system(pres: Presentation, m: F2Module) -> np.ndarray:
    """Dense 0/1 matrix: row ``r*d + c``, column ``x*d + j`` holds ``A_x(r)[j, c]``.

    Multiplying by the concatenated generator vectors ``(u_x)_x`` gives the
    vector parts of all relators, relator by relator.
    """
    fox = relator_fox_table(pres, m)
    nrel, k, d, _ = fox.shape
    return np.ascontiguousarray(fox.transpose(0, 3, 1, 2)).reshape(nrel * d, k * d)


def _split(v: int, k: int, d: int) -> list[int]:
    mask = (1 << d) - 1
    return [(v >> (x * d)) & mask for x in range(k)]


def _join(parts: Sequence[int], d: int) -> int:
    out = 0
    for x, p in enumerate(parts):
        out |= p << (x * d)
    return out


@dataclass
class H1Result:
    module: F2Module = field(repr=False)
    z1_basis: list[BitVec]
    b1_basis: list[BitVec]
    dim: int

    def values(self, z: BitVec) -> list[BitVec]:
        """Per-generator values of a cocycle given in concatenated coordinates."""
        d = self.module.dim
        return [BitVec(d, p) for p in _split(z.bits, self.module.atlas.ngens, d)]


def coboundary_vectors(m: F2Module) -> list[int]:
    """``(v A_x - v)_x`` for each basis vector v, in concatenated coordinates."""
    d, k = m.dim, m.atlas.ngens
    return [_join([m.apply(1 << i, x) ^ (1 << i) for x in range(k)], d) for i in range(d)]


def h1(pres: Presentation, m: F2Module, system: np.ndarray | None = None) -> H1Result:
    if m.atlas is not pres.atlas:
        raise UsageError("module and presentation belong to different groups")
    d, k = m.dim, m.atlas.ngens
    n = d * k
    if system is None:
        system = relator_system(pres, m)
    z1 = kernel_basis(BitMat.from_dense(system))
    zspace = Subspace(n, z1)
    bspace = Subspace(n, coboundary_vectors(m))
    if not zspace.contains_subspace(bspace):
        raise ConsistencyError("a coboundary fails the relator equations")
    return H1Result(m, zspace.basis, bspace.basis, zspace.dim - bspace.dim)


@dataclass
class H2BarResult:
    order: int
    module: str
    dim: int
    method: str = "bar"
    rank_d1: int = 0
    rank_d2: int = 0


def h2_bar(atlas: GroupAtlas, m: F2Module, guard: int = DEFAULT_GUARD) -> H2BarResult:
    """dim H^2 from normalized inhomogeneous cochains on non-identity elements.

    ``(d g)(a, b, c) = g(b, c) + g(ab, c) + g(a, bc) + g(a, b) c`` and
    ``(d f)(a, b) = f(a) b + f(ab) + f(b)``; terms with an identity argument vanish.
    """
    n = atlas.order
    if n > guard:
        raise GuardError(n, guard)
    if m.atlas is not atlas:
        raise UsageError("module belongs to a different group")
    d = m.dim
    mt = atlas.mult_table().tolist()
    acts = m.element_actions
    nn = n - 1
    # cols_of[g][c]: columns j with (v g)[c] depending on v[j]
    cols_of = [[np.flatnonzero(acts[g][:, c]).tolist() for c in range(d)] for g in range(n)]

    def c2(a, b, c):
        return ((a - 1) * nn + (b - 1)) * d + c

    e2 = Eliminator(nn * nn * d)
    for a in range(1, n):
        for b in range(1, n):
            ab = mt[a][b]
            for c3 in range(1, n):
                bc = mt[b][c3]
                abc_cols = cols_of[c3]
                for c in range(d):
                    row = 1 << c2(b, c3, c)
                    if ab:
                        row ^= 1 << c2(ab, c3, c)
                    if bc:
                        row ^= 1 << c2(a, bc, c)
                    for j in abc_cols[c]:
                        row ^= 1 << c2(a, b, j)
                    if row:
                        e2.absorb(row)
    e1 = Eliminator(nn * d)
    for a in range(1, n):
        for b in range(1, n):
            ab = mt[a][b]
            for c in range(d):
                row = 1 << ((b - 1) * d + c)
                if ab:
                    row ^= 1 << ((ab - 1) * d + c)
                for j in cols_of[b][c]:
                    row ^= 1 << ((a - 1) * d + j)
                if row:
                    e1.absorb(row)
    dim = nn * nn * d - e2.rank - e1.rank
    if dim < 0:
        raise ConsistencyError("negative H^2 dimension: B^2 is not inside Z^2")
    return H2BarResult(n, m.label, dim, "bar", e1.rank, e2.rank)


@dataclass
class ShapiroReport:
    q: int
    degree: int
    group_dim: int | None
    borel_dim: int | None
    match: bool | None
    note: str = ""


def shapiro_compare(ctx: PSL2Context | int, degree: int, guard: int = DEFAULT_GUARD) -> ShapiroReport:
    """Compare ``H^i(G, V)`` with ``H^i(B, T)`` computed on separate code paths."""
    ctx = ctx if isinstance(ctx, PSL2Context) else PSL2Context(ctx)
    if degree == 1:
        g = h1(ctx.pres, ctx.V, ctx.system(ctx.V)).dim
        b = h1(ctx.borel_pres, ctx.T).dim
        return ShapiroReport(ctx.q, 1, g, b, g == b)
    if degree == 2:
        b = h2_bar(ctx.borel, ctx.T, guard).dim
        if ctx.q != 3:
            return ShapiroReport(ctx.q, 2, None, b, None, "group side only computed for q = 3")
        g = h2_bar(ctx.psl, ctx.V, guard).dim
        return ShapiroReport(ctx.q, 2, g, b, g == b)
    raise UsageError("degree must be 1 or 2")


def _column_ints(system: np.ndarray) -> list[int]:
    packed = pack_dense(np.ascontiguousarray(system.T))
    return [words_to_int(row) for row in packed]


def coboundary_patterns(pres: Presentation, m: F2Module, system: np.ndarray | None = None) -> Subspace:
    """Relator patterns reachable by changing generator lifts by vectors of ``m``.

    Coordinates are ``r*d + c`` for relator r and module coordinate c.
    """
    if system is None:
        system = relator_system(pres, m)
    return Subspace(pres.nrel * m.dim, _column_ints(system))


@dataclass
class DeltaImage:
    space: Subspace
    coboundaries: Subspace
    dim: int
    cocycle_patterns: list[int] = field(repr=False, default_factory=list)


def _apply_system(system: np.ndarray, u: int, ncols: int) -> np.ndarray:
    vec = np.array([(u >> i) & 1 for i in range(ncols)], dtype=np.float32)
    return (system.astype(np.float32) @ vec).astype(np.int64) & 1


def delta_image(ctx: PSL2Context) -> DeltaImage:
    """Image of the connecting map H^1(G, W) -> H^2(G, I) in relator-pattern coordinates.

    Each Z^1(G, W) basis cocycle is lifted to V through the linear section;
    its relator defects must lie in I, and the 0/1 pattern of those defects
    represents the connecting-map image.
    """
    pres, V, quo = ctx.pres, ctx.V, ctx.quotient
    k, dv, dw = pres.ngens, V.dim, ctx.W.dim
    zw = h1(pres, ctx.W, ctx.system(ctx.W))
    sys_v = ctx.system(V)
    patterns = []
    for z in zw.z1_basis:
        lifted = _join([quo.lift(f) for f in _split(z.bits, k, dw)], dv)
        defects = _apply_system(sys_v, lifted, k * dv).reshape(pres.nrel, dv)
        row_sum = defects.sum(axis=1)
        if np.any((row_sum != 0) & (row_sum != dv)):
            raise ConsistencyError("a connecting-map defect lies outside I")
        patterns.append(sum(1 << int(r) for r in np.flatnonzero(defects[:, 0])))
    cob = coboundary_patterns(pres, ctx.I, ctx.system(ctx.I))
    total = Subspace(pres.nrel, cob.basis_ints() + patterns)
    return DeltaImage(total, cob, total.dim - cob.dim, patterns)


@dataclass
class EmbeddingVerdict:
    q: int
    verdict: str
    witness: list[BitVec] | None = None
    certificate: tuple[int, int] | None = None

    @property
    def embeds(self) -> bool:
        return self.verdict == EMBEDS

    def witness_digest(self) -> str | None:
        if self.witness is None:
            return None
        text = ",".join(v.hex() for v in self.witness)
        return hashlib.sha256(text.encode()).hexdigest()


def embedding_decide(ctx: PSL2Context | int) -> EmbeddingVerdict:
    """Does Z2 wr PSL2(q) (on the projective line) contain SL2(q)?

    A solution ``(u_x)`` of the relator system yields a homomorphism from
    ``<x, z | r = z^eps_r, z^2, z central>``, which is SL2(q), onto the
    subgroup generated by ``(x, u_x)`` and ``(1, ones)``; its kernel is
    central and misses z, so it is injective.
    """
    ctx = ctx if isinstance(ctx, PSL2Context) else PSL2Context(ctx)
    pres, V = ctx.pres, ctx.V
    d, k = V.dim, pres.ngens
    a = BitMat.from_dense(ctx.system(V))
    eps = np.repeat(np.array(ctx.eps, dtype=np.uint8), d)
    b = BitVec(len(eps), words_to_int(pack_dense(eps[None, :])[0]))
    try:
        u = solve_affine(a, b)
    except InconsistentSystem as exc:
        return EmbeddingVerdict(ctx.q, NOT_EMBEDS, certificate=(exc.rank, exc.augmented_rank))
    return EmbeddingVerdict(ctx.q, EMBEDS, witness=[BitVec(d, p) for p in _split(u.bits, k, d)])


@dataclass
class WitnessReport:
    q: int
    passed: bool
    checks: dict[str, bool]
    closure_size: int = 0
    failure: str | None = None
    transcript: list[str] = field(default_factory=list)

    def digest(self) -> str:
        return hashlib.sha256("\n".join(self.transcript).encode()).hexdigest()


class Wreath:
    """Z2 wr_rho G as pairs (g, v) with ``(g1, v1)(g2, v2) = (g1 g2, v1 rho(g2) + v2)``."""

    def __init__(self, ctx: PSL2Context):
        self.ctx = ctx
        self.atlas = ctx.psl
        self.perms = ctx.projline.perm_of
        self.n = ctx.q + 1

    def permute(self, v: int, g: int) -> int:
        perm = self.perms[g]
        out = 0
        while v:
            low = v & -v
            out |= 1 << int(perm[low.bit_length() - 1])
            v ^= low
        return out

    def mul(self, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
        return self.atlas.multiply(a[0], b[0]), self.permute(a[1], b[0]) ^ b[1]

    def inv(self, a: tuple[int, int]) -> tuple[int, int]:
        gi = self.atlas.inverse(a[0])
        return gi, self.permute(a[1], gi)


def witness_verify(ctx: PSL2Context | int, witness: Sequence[BitVec]) -> WitnessReport:
    """Check that ``(x, u_x)`` and ``z = (1, ones)`` generate a copy of SL2(q) meeting V in I."""
    ctx = ctx if isinstance(ctx, PSL2Context) else PSL2Context(ctx)
    q, G, V = ctx.q, ctx.psl, ctx.V
    n = G.order
    ones = ctx.ones
    checks: dict[str, bool] = {}
    transcript = [f"q={q}", "witness=" + ",".join(v.hex() for v in witness)]
    if len(witness) != G.ngens or any(v.length != V.dim for v in witness):
        raise UsageError(f"witness must be {G.ngens} vectors of length {V.dim}")
    u = [v.bits for v in witness]
    inv_appliers = [f2mod._Applier(a) for a in V.gen_inverse]
    # (x, u)^-1 = (x^-1, u rho(x)^-1)
    u_inv = [inv_appliers[x](u[x]) for x in range(G.ngens)]

    def report(fail: str | None, size: int = 0) -> WitnessReport:
        for name in ("relators", "closure_size", "meets_V_in_I", "covers_G", "unique_involution"):
            checks.setdefault(name, False)
        return WitnessReport(q, fail is None, checks, size, fail, transcript)

    # (a) relators evaluate to z^eps
    fwd, back = G.gen_images, G.gen_inv_images
    for r, (word, e) in enumerate(zip(ctx.pres.relators, ctx.eps)):
        g, v = 0, 0
        for x, is_inv in word.letters:
            if is_inv:
                g, v = int(back[g, x]), inv_appliers[x](v) ^ u_inv[x]
            else:
                g, v = int(fwd[g, x]), V.apply(v, x) ^ u[x]
        if g != 0 or v != (ones if e else 0):
            transcript.append(f"relator {r} fails")
            return report(f"relators: relator {r} ({word}) evaluates to ({g}, {v:x})")
    checks["relators"] = True
    transcript.append(f"relators ok: {ctx.pres.nrel}")

    # (b) closure of {(x, u_x), z}
    seen = {(0, 0): None}
    queue = deque([(0, 0)])
    limit = 2 * n
    while queue:
        g, v = queue.popleft()
        succ = [(int(fwd[g, x]), V.apply(v, x) ^ u[x]) for x in range(G.ngens)]
        succ.append((g, v ^ ones))
        for s in succ:
            if s not in seen:
                seen[s] = None
                queue.append(s)
                if len(seen) > limit:
                    transcript.append("closure too large")
                    return report(f"closure_size: exceeds {limit}", len(seen))
    size = len(seen)
    checks["closure_size"] = size == limit
    transcript.append(f"closure {size}")
    if not checks["closure_size"]:
        return report(f"closure_size: {size} != {limit}", size)

    # (c) H meets V exactly in I
    kernel = sorted(v for g, v in seen if g == 0)
    checks["meets_V_in_I"] = kernel == [0, ones]
    # (d) HV = E, i.e. H maps onto G
    checks["covers_G"] = len({g for g, _ in seen}) == n
    # (e) the only involution is z, as in SL2(q)
    wr = Wreath(ctx)
    square_is_one = {0} | set(involutions(G))
    invols = [(g, v) for g, v in seen if g in square_is_one and (g, v) != (0, 0)
              and wr.permute(v, g) ^ v == 0]
    checks["unique_involution"] = invols == [(0, ones)]
    transcript.append(f"kernel {kernel} involutions {len(invols)}")
    for name in ("meets_V_in_I", "covers_G", "unique_involution"):
        if not checks[name]:
            return report(f"{name}: failed", size)
    return report(None, size)


def ker_phi_dim(ctx: PSL2Context | int, verdict: EmbeddingVerdict | None = None,
                delta: DeltaImage | None = None) -> int:
    """dim Ker(H^2(G,I) -> H^2(G,V)), by the embedding verdict and by the connecting map."""
    ctx = ctx if isinstance(ctx, PSL2Context) else PSL2Context(ctx)
    verdict = verdict or embedding_decide(ctx)
    delta = delta or delta_image(ctx)
    by_verdict = 1 if verdict.embeds else 0
    if delta.dim != by_verdict:
        raise ConsistencyError(f"embedding verdict gives {by_verdict} but dim Im(delta) = {delta.dim}")
    eps = sum(1 << r for r, e in enumerate(ctx.eps) if e)
    if delta.coboundaries.contains(eps):
        raise ConsistencyError("the SL2 relator signs are a coboundary pattern, so SL2 would split")
    if delta.space.contains(eps) != verdict.embeds:
        raise ConsistencyError("sign pattern membership in Im(delta) disagrees with the verdict")
    return by_verdict


@dataclass
class H1UResult:
    q: int
    h1_U: int
    h1_W: int
    h1_V: int
    h1_I: int
    im_delta: int
    note: str = "F2-total; the U+/U- split is not computed"


def h1_of_U(ctx: PSL2Context | int, delta: DeltaImage | None = None) -> H1UResult:
    ctx = ctx if isinstance(ctx, PSL2Context) else PSL2Context(ctx)
    dims = {name: h1(ctx.pres, ctx.module(name), ctx.system(ctx.module(name))).dim for name in "IVWU"}
    delta = delta or delta_image(ctx)
    if dims["I"] != 0:
        raise ConsistencyError(f"H^1(G, I) has dimension {dims['I']}, expected 0")
    if dims["W"] != dims["U"] - 1:
        raise ConsistencyError(f"dim H^1(G,W) = {dims['W']} but dim H^1(G,U) - 1 = {dims['U'] - 1}")
    if dims["W"] != dims["V"] + delta.dim:
        raise ConsistencyError(
            f"dim H^1(G,W) = {dims['W']} but dim H^1(G,V) + dim Im(delta) = {dims['V'] + delta.dim}"
        )
    return H1UResult(ctx.q, dims["U"], dims["W"], dims["V"], dims["I"], delta.dim)
