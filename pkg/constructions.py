"""constructions.py
Every arc-producing procedure: o-polynomial hyperovals, the two lifting
constructions (the trace lift through a relative trace, the complement lift
through a direct complement of F_q in F_{q^m}), the q/4, q/8 and q/16
families, the Lunelli-Sce hyperoval and the admissible-tuple search.

All constructions are pure; each returns a census-verified `KMArc` and raises
`InternalError` if the census disagrees with the advertised type.
"""
from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

import config
import f2linalg
import plane
from arcs import KMArc, verify_km
from errors import (AdmissibilityError, ConstructionError, InternalError,
                    NotAKMArc, RankError)
from f2linalg import Subgroup
from gf2e import FieldCtx, element_hex, linear_combination
from plane import Triple
from symmetry import Collineation

logger = logging.getLogger(__name__)

FAMILIES = ("km", "gw-a", "gw-b", "gw-c", "q4", "q8", "q16", "lunelli-sce", "regular")
LUNELLI_SCE_DEGREE = 4


def _f(lam: Sequence[int]) -> Tuple[int, int, int]:
    """(f1, f2, f3) at (x, y, z) = lam over F2."""
    x, y, z = lam
    return ((x + y + z + y * z) & 1, (y + z + x * z) & 1, (z + x * y) & 1)


def _check_type(arc: KMArc, t: int, what: str) -> KMArc:
    if arc.t != t or not arc.report.is_km:
        raise InternalError(f"{what} produced {arc.report.summary()}, expected type {t}")
    return arc


def _verified(ctx: FieldCtx, points, what: str) -> KMArc:
    try:
        return KMArc.verified(ctx, points)
    except NotAKMArc as e:
        raise InternalError(f"{what} is not a KM-arc: {e}") from e


# ---------------------------------------------------------------------------
# O-polynomials and hyperovals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OPolynomial:
    """A permutation g of F_q' whose set {(1, g(x), x)} + (0,1,0) + (0,0,1) is a hyperoval."""

    ctx: FieldCtx
    kind: str
    table: Tuple[int, ...]
    n: Optional[int] = None

    def __post_init__(self):
        if len(self.table) != self.ctx.q:
            raise ConstructionError(f"o-polynomial table has {len(self.table)} entries, need {self.ctx.q}")
        report = verify_km(self.ctx, self.points())
        if not (report.is_km and report.t == 2):
            raise ConstructionError(f"{self.kind} map is not an o-polynomial: {report.summary()}")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def points(self) -> List[Triple]:
        pts: List[Triple] = [(1, y, x) for x, y in enumerate(self.table)]
        return pts + [(0, 1, 0), (0, 0, 1)]

    def hyperoval(self) -> KMArc:
        return KMArc.verified(self.ctx, self.points())

    @classmethod
    def translation(cls, ctx: FieldCtx, n: int = 1) -> "OPolynomial":
        """x -> x^(2^n), gcd(n, h') = 1."""
        if ctx.h < 2 or math.gcd(n, ctx.h) != 1:
            raise ConstructionError(f"x^(2^{n}) is not an o-polynomial of GF(2^{ctx.h})")
        return cls(ctx, "translation", tuple(ctx.frobenius(x, n) for x in range(ctx.q)), n)

    @classmethod
    def explicit(cls, ctx: FieldCtx, values: Sequence[int]) -> "OPolynomial":
        return cls(ctx, "explicit", tuple(ctx.check(int(v)) for v in values))

    @classmethod
    def lunelli_sce(cls) -> "OPolynomial":
        g = opolynomial_from_hyperoval(_lunelli_normal_form())
        return cls(g.ctx, "lunelli_sce", g.table)

    def describe(self) -> dict:
        out = {"kind": self.kind, "h": self.ctx.h}
        if self.n is not None:
            out["n"] = self.n
        if self.kind == "explicit":
            out["table"] = [element_hex(v) for v in self.table]
        return out


def opolynomial_hyperoval(g: OPolynomial) -> KMArc:
    return g.hyperoval()


def regular_hyperoval(ctx: FieldCtx) -> KMArc:
    """Conic plus nucleus, as the hyperoval of x -> x^2."""
    return OPolynomial.translation(ctx, 1).hyperoval()


def opolynomial_from_hyperoval(H: KMArc) -> OPolynomial:
    """Read g off a hyperoval through (0,1,0) and (0,0,1)."""
    if not H.is_hyperoval or not H.report.is_km:
        raise ConstructionError("expected a hyperoval")
    if (0, 1, 0) not in H or (0, 0, 1) not in H:
        raise ConstructionError("hyperoval must contain (0,1,0) and (0,0,1)")
    table = [0] * H.q
    for P in H.points:
        if P[0] == 1:
            table[P[2]] = P[1]
    return OPolynomial(H.ctx, "explicit", tuple(table))


def _lunelli_normal_form() -> KMArc:
    """Lunelli-Sce hyperoval moved by (x, y, z) -> (x, y, y + z) so that it contains (0,1,0)."""
    H = lunelli_sce()
    shear = Collineation(H.ctx, ((1, 0, 0), (0, 1, 0), (0, 1, 1)), 0)
    return KMArc.verified(H.ctx, shear.apply_points(H.points))


def lunelli_sce() -> KMArc:
    """The Lunelli-Sce hyperoval of PG(2,16), z^4 = z + 1."""
    ctx = FieldCtx.for_degree(LUNELLI_SCE_DEGREE)
    zeta = [ctx.power(2, i) for i in range(4)]
    pts: List[Triple] = [(0, 1, 1), (0, 0, 1)]
    for lam in itertools.product((0, 1), repeat=4):
        x = zeta[1] * lam[0] ^ zeta[2] * lam[1] ^ zeta[3] * lam[2] ^ lam[3]
        fs = _f(lam[:3])
        y = (zeta[2] if fs[0] else 0) ^ (zeta[1] if fs[1] else 0) ^ (zeta[0] if fs[2] else 0)
        pts.append((1, x, y))
    return _check_type(_verified(ctx, pts, "Lunelli-Sce"), 2, "Lunelli-Sce")


# ---------------------------------------------------------------------------
# Completion on X = 0
# ---------------------------------------------------------------------------

def complete_on_x0(ctx: FieldCtx, affine: Sequence[Triple]) -> List[Triple]:
    """Points of X = 0 completing an affine point set to a KM-arc.

    P on X = 0 belongs to the arc iff every other line through P meets the
    affine part in an odd number of points; all even means P is left out.
    """
    arr = np.asarray(affine, dtype=np.int64)
    if arr.size and np.any(arr[:, 0] != 1):
        raise ConstructionError("completion expects affine points (1, y, z)")
    q = ctx.q
    ys = arr[:, 1] if arr.size else np.zeros(0, dtype=np.int64)
    zs = arr[:, 2] if arr.size else np.zeros(0, dtype=np.int64)
    out: List[Triple] = []
    candidates = [((0, 0, 1), ys)] + [((0, 1, c), zs ^ ctx.mul_array(c, ys)) for c in range(q)]
    for P, keys in candidates:
        parity = np.bincount(keys, minlength=q) & 1
        if parity.all():
            out.append(P)
        elif parity.any():
            raise ConstructionError(f"affine set has mixed parity through {P}; no KM-arc completion")
    return out


def direct_complement(big: FieldCtx, small_h: int) -> Tuple[int, Subgroup]:
    """(k, I) with k least such that Tr(k) = 1 onto GF(2^small_h) and I = ker(x -> Tr(kx))."""
    k = next(x for x in range(1, big.q) if big.trace_rel(x, small_h) == 1)
    images = [big.trace_rel(big.mul(k, 1 << j), small_h) for j in range(big.h)]
    return k, Subgroup(big, f2linalg.linear_kernel(images, big.h))


# ---------------------------------------------------------------------------
# Trace lift and complement lift
# ---------------------------------------------------------------------------

def construct_km(h: int, i: int, g: OPolynomial) -> KMArc:
    """KM-arc of type 2^i in PG(2, 2^h) from an o-polynomial of GF(2^(h-i))."""
    hp = h - i
    if i < 1 or hp < 2 or h % hp:
        raise ConstructionError(f"need 1 <= i, h - i >= 2 and (h - i) | h; got h={h}, i={i}")
    if g.ctx.h != hp:
        raise ConstructionError(f"o-polynomial lives over GF(2^{g.ctx.h}), need GF(2^{hp})")
    ctx = FieldCtx.for_degree(h)
    emb = ctx.embedding(g.ctx)
    back = {v: x for x, v in enumerate(emb)}
    affine = [(1, emb[g(back[ctx.trace_rel(x, hp)])], x) for x in range(ctx.q)]
    arc = _verified(ctx, affine + complete_on_x0(ctx, affine), "trace lift")
    _check_type(arc, 1 << i, "trace lift")
    if arc.nucleus != plane.NUCLEUS:
        raise InternalError(f"trace lift nucleus {arc.nucleus}, expected (0,0,1)")
    return arc


GW_VARIANTS = ("A", "B", "C")


def construct_gw(H: KMArc, variant: str, h_ext: int, verify: bool = True) -> KMArc:
    """Lift an arc of PG(2,q) to PG(2,q^h_ext) through the canonical direct complement."""
    variant = variant.upper()
    if variant not in GW_VARIANTS:
        raise ConstructionError(f"unknown variant {variant!r}")
    if h_ext < 2:
        raise ConstructionError("extension degree must be at least 2")
    small = H.ctx
    if small.h * h_ext > 16:
        raise ConstructionError(f"GF(2^{small.h * h_ext}) is beyond the supported fields")
    if not H.report.is_km:
        raise ConstructionError("input is not a KM-arc")
    if variant == "A" and not (H.is_hyperoval and plane.NUCLEUS in H):
        raise ConstructionError("variant A needs a hyperoval through (0,0,1)")
    if variant == "B" and not (H.is_hyperoval and plane.NUCLEUS not in H):
        raise ConstructionError("variant B needs a hyperoval missing (0,0,1)")
    if variant == "C" and (H.is_hyperoval or H.nucleus != plane.NUCLEUS):
        raise ConstructionError("variant C needs a KM-arc of type t > 2 with nucleus (0,0,1)")

    big = FieldCtx.for_degree(small.h * h_ext)
    e = big.embedding(small)
    k, I = direct_complement(big, small.h)
    I_elems = np.asarray(I.elements(), dtype=np.int64)
    affine: List[Triple] = []
    for P in H.points:
        if P[0] != 1:
            continue
        x, y = e[P[1]], e[P[2]]
        affine.extend((1, x, int(v)) for v in (I_elems ^ y))
    points = affine + complete_on_x0(big, affine)
    expected = {"A": 1, "B": 2, "C": H.t}[variant] * small.q ** (h_ext - 1)
    logger.info("complement lift (%s): q=%d -> q=%d, k=%s, expecting type %d",
                variant, small.q, big.q, element_hex(k), expected)
    if not verify:
        if len(points) != big.q + expected:
            raise InternalError(f"complement lift produced {len(points)} points")
        return KMArc(big, points)
    return _check_type(_verified(big, points, "complement lift"), expected, "complement lift")


# ---------------------------------------------------------------------------
# The q/4 family
# ---------------------------------------------------------------------------

def q4_gamma(ctx: FieldCtx, alpha: int, beta: int) -> Tuple[int, int]:
    """(gamma, xi) = ((beta+1)/(alpha beta+1), alpha beta gamma)."""
    ab = ctx.mul(alpha, beta)
    gamma = ctx.div(beta ^ 1, ab ^ 1)
    return gamma, ctx.mul(ab, gamma)


def q4_translation_alphas(ctx: FieldCtx, beta: int) -> List[int]:
    """The alphas for which the q/4 arc of (alpha, beta) is a translation KM-arc."""
    ib = ctx.inv(beta)
    cands = {ctx.mul(ib, ib), 1 ^ ib, beta, ctx.inv(ctx.sqrt(beta)), ctx.inv(beta ^ 1)}
    return sorted(a for a in cands if a not in (0, 1) and ctx.mul(a, beta) != 1)


def construct_q4(ctx: FieldCtx, alpha: int, beta: int, a: int = 0, b: int = 0) -> KMArc:
    """KM-arc of type q/4: five trace-condition sets on X = 0 and four lines Y = cX."""
    if ctx.h < 3:
        raise ConstructionError("the q/4 family needs q >= 8")
    alpha, beta = ctx.check(alpha), ctx.check(beta)
    if alpha in (0, 1) or beta in (0, 1):
        raise ConstructionError("alpha and beta must lie outside {0, 1}")
    if ctx.mul(alpha, beta) == 1:
        raise ConstructionError("alpha * beta must differ from 1")
    if a not in (0, 1) or b not in (0, 1):
        raise ConstructionError("a and b are bits")

    gamma, xi = q4_gamma(ctx, alpha, beta)
    i_a = ctx.inv(alpha)
    i_ag = ctx.inv(ctx.mul(alpha, gamma))
    i_ab = ctx.inv(ctx.mul(alpha, beta))
    i_xi = ctx.inv(xi)
    z = np.arange(ctx.q, dtype=np.int64)

    def tr_of(c):
        return ctx.trace_array(ctx.mul_array(c, z))

    tz = ctx.trace_array(z)
    conditions = [
        ((0, 1), (tz == 0) & (tr_of(i_a) == a)),
        ((1, 0), (tz == 0) & (tr_of(i_ag) == 0)),
        ((1, 1), (tz == 1) & (tr_of(i_ab) == b)),
        ((1, gamma), (tr_of(i_ag) == (a ^ 1)) & (tr_of(i_xi) == (b ^ 1))),
        ((1, beta ^ 1), (tr_of(i_ab) == (a ^ b ^ 1)) & (tr_of(i_xi) == b)),
    ]
    pts: List[Triple] = []
    for (x0, x1), mask in conditions:
        pts.extend((x0, x1, int(v)) for v in z[mask])
    arc = _verified(ctx, pts, "q/4 construction")
    return _check_type(arc, ctx.q // 4, "q/4 construction")


# ---------------------------------------------------------------------------
# The q/8 family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TraceData:
    """Trace-kernel S of the alphas and the dual elements beta_j (least coset leaders)."""

    S: Subgroup
    betas: Tuple[int, ...]


def _trace_data(ctx: FieldCtx, alphas: Sequence[int], duals: int) -> TraceData:
    n = len(alphas)
    betas = []
    for j in range(duals):
        target = [0] * n
        target[j] = 1
        betas.append(f2linalg.solve_trace_system(ctx, alphas, target))
    return TraceData(f2linalg.trace_kernel(ctx, alphas), tuple(betas))


def _affine_cosets(ctx: FieldCtx, alphas: Sequence[int], data: TraceData) -> List[Triple]:
    S = np.asarray(data.S.elements(), dtype=np.int64)
    pts: List[Triple] = []
    for lam in itertools.product((0, 1), repeat=len(alphas)):
        x = 0
        for l, a in zip(lam, alphas):
            if l:
                x ^= a
        y = 0
        for fj, b in zip(_f(lam[:3]), data.betas):
            if fj:
                y ^= b
        pts.extend((1, x, int(s)) for s in (S ^ y))
    return pts


def q8_data(ctx: FieldCtx, alphas: Sequence[int]) -> TraceData:
    if len(alphas) != 3:
        raise ConstructionError("the q/8 family takes three alphas")
    if ctx.h < 4:
        raise ConstructionError("the q/8 family needs q >= 16")
    alphas = [ctx.check(a) for a in alphas]
    if not f2linalg.independent(alphas):
        raise ConstructionError("alphas must be F2-independent")
    return _trace_data(ctx, alphas, 3)


def construct_q8(ctx: FieldCtx, alphas: Sequence[int]) -> KMArc:
    """Elation KM-arc of type q/8 (a hyperoval at q = 16)."""
    data = q8_data(ctx, alphas)
    affine = _affine_cosets(ctx, alphas, data)
    squares = [ctx.mul(a, a) for a in alphas]
    S0 = f2linalg.trace_kernel(ctx, squares).elements()
    arc = _verified(ctx, affine + [(0, 1, x) for x in S0], "q/8 construction")
    return _check_type(arc, max(2, ctx.q // 8), "q/8 construction")


# ---------------------------------------------------------------------------
# The q/16 family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AdmissibleTuple:
    ctx: FieldCtx
    alphas: Tuple[int, int, int, int]

    def __post_init__(self):
        ctx = self.ctx
        if len(self.alphas) != 4:
            raise AdmissibilityError("length", f"got {len(self.alphas)} elements")
        object.__setattr__(self, "alphas", tuple(ctx.check(int(a)) for a in self.alphas))
        if not f2linalg.independent(self.alphas):
            raise AdmissibilityError("independence", "alphas are F2-dependent")
        a4 = self.alphas[3]
        for i, a in enumerate(self.alphas[:3], start=1):
            if f2linalg.coordinates(self.alphas, ctx.div(ctx.mul(a, a), a4)) is None:
                raise AdmissibilityError("divisibility", f"alpha_{i}^2 / alpha_4 is outside the span")

    @property
    def span(self) -> Subgroup:
        return f2linalg.span(self.ctx, self.alphas)

    @property
    def alpha(self) -> int:
        return select_alpha_q16(self.ctx, self.alphas)

    def data(self) -> TraceData:
        return _trace_data(self.ctx, self.alphas, 3)

    def to_hex(self) -> List[str]:
        return [element_hex(a) for a in self.alphas]


def _q16_hyperplane(ctx: FieldCtx, alphas: Sequence[int]) -> Tuple[int, ...]:
    """Rows a_i + e_i (bit j <-> alpha_{j+1}) with a_i the coordinates of alpha_i^2/alpha_4."""
    a4 = alphas[3]
    rows = []
    for i in range(3):
        coords = f2linalg.coordinates(alphas, ctx.div(ctx.mul(alphas[i], alphas[i]), a4))
        if coords is None:
            raise AdmissibilityError("divisibility", f"alpha_{i + 1}^2 / alpha_4 is outside the span")
        v = sum(c << j for j, c in enumerate(coords)) ^ (1 << i)
        rows.append(v)
    return f2linalg.rref(rows)


def _bits_of(b: Sequence[int]) -> int:
    return sum(c << j for j, c in enumerate(b))


def valid_alpha_vectors(ctx: FieldCtx, alphas: Sequence[int]) -> List[Tuple[int, ...]]:
    """Every coefficient vector b whose alpha = sum b_j alpha_j makes the q/16 set independent."""
    hyper = _q16_hyperplane(ctx, alphas)
    out = []
    for b in itertools.product((0, 1), repeat=4):
        if f2linalg.coordinates(hyper, _bits_of(b)) is None:
            out.append(b)
    return out


def select_alpha_q16(ctx: FieldCtx, alphas: Sequence[int]) -> int:
    """alpha in the span of alphas with {a_i(a_i + a_4)} + {a_4 alpha} independent; least b."""
    hyper = _q16_hyperplane(ctx, alphas)
    for b in itertools.product((0, 1), repeat=4):
        if f2linalg.coordinates(hyper, _bits_of(b)) is not None:
            continue
        alpha = linear_combination(b, alphas)
        a4 = alphas[3]
        check = [ctx.mul(a, a ^ a4) for a in alphas[:3]] + [ctx.mul(a4, alpha)]
        if not f2linalg.independent(check):
            raise InternalError("selected alpha leaves the q/16 conditions dependent")
        return alpha
    raise InternalError("no alpha outside the q/16 hyperplane")


def q16_s0(ctx: FieldCtx, alphas: Sequence[int], alpha: Optional[int] = None) -> List[int]:
    """z-values of the points (0,1,z) on X = 0."""
    if alpha is None:
        alpha = select_alpha_q16(ctx, alphas)
    a4 = alphas[3]
    conds = [ctx.mul(a, a ^ a4) for a in alphas[:3]] + [ctx.mul(a4, alpha)]
    x0 = f2linalg.solve_trace_system(ctx, conds, [0, 0, 0, 1])
    kern = f2linalg.trace_kernel(ctx, conds)
    return sorted(x0 ^ s for s in kern.elements())


def construct_q16(ctx: FieldCtx, alphas: Sequence[int]) -> KMArc:
    """Elation KM-arc of type q/16; at q = 16 the Lunelli-Sce hyperoval up to PGammaL.

    The family proper starts at q = 64. GF(32) has no admissible tuple, so every
    input there fails the divisibility check, and q = 16 only closes up because
    the nucleus (0,0,1) is added to make a hyperoval.
    """
    if ctx.h < 4:
        raise AdmissibilityError("field size", "the q/16 family needs q >= 16")
    tup = AdmissibleTuple(ctx, tuple(alphas))  # type: ignore[arg-type]
    try:
        data = tup.data()
        S0 = q16_s0(ctx, tup.alphas)
    except RankError as e:
        raise AdmissibilityError("trace system", str(e)) from e
    pts = _affine_cosets(ctx, tup.alphas, data) + [(0, 1, x) for x in S0]
    if ctx.q == 16:
        pts.append(plane.NUCLEUS)
    arc = _verified(ctx, pts, "q/16 construction")
    return _check_type(arc, max(2, ctx.q // 16), "q/16 construction")


# ---------------------------------------------------------------------------
# Same-span witnesses and group elements
# ---------------------------------------------------------------------------

def _shear(ctx: FieldCtx, c: int, d: int) -> Collineation:
    return Collineation(ctx, ((1, 0, 0), (c, 1, 0), (d, 0, 1)), 0)


def q8_witness_same_span(ctx: FieldCtx, alphas: Sequence[int], kind: str) -> Tuple[Tuple[int, ...], Collineation]:
    """(alphas', g) with g(arc(alphas)) = arc(alphas') for the two moves generating GL(3,2)."""
    a1, a2, a3 = alphas
    b1, b2, b3 = q8_data(ctx, alphas).betas
    if kind == "add":
        return (a1 ^ a2, a2, a3), _shear(ctx, a2 ^ a3, b1 ^ b3)
    if kind == "rotate":
        return (a3, a1, a2), _shear(ctx, a1 ^ a2, b2 ^ b3)
    raise ValueError(f"unknown move {kind!r}")


def q16_witness_same_span(ctx: FieldCtx, alphas: Sequence[int], kind: str) -> Tuple[Tuple[int, ...], Collineation]:
    """Same as the q/8 witnesses, for quadruples; alpha_4 is fixed by both moves."""
    a1, a2, a3, a4 = alphas
    b1, b2, b3 = AdmissibleTuple(ctx, tuple(alphas)).data().betas  # type: ignore[arg-type]
    if kind == "add":
        return (a1 ^ a4, a1 ^ a2, a3, a4), _shear(ctx, a1 ^ a3, b3)
    if kind == "rotate":
        return (a3, a1, a2, a4), _shear(ctx, a1 ^ a2, b2 ^ b3)
    raise ValueError(f"unknown move {kind!r}")


def scaled_frobenius_witness(ctx: FieldCtx, k: int, phi: int) -> Collineation:
    """(diag(1, k, 1/k), phi): carries the arc of (a_i) to the arc of (k a_i^(2^phi))."""
    if k == 0:
        raise ValueError("k must be nonzero")
    return Collineation(ctx, ((1, 0, 0), (0, k, 0), (0, 0, ctx.inv(k))), phi)


def scale_alphas(ctx: FieldCtx, alphas: Sequence[int], k: int, phi: int) -> Tuple[int, ...]:
    return tuple(ctx.mul(k, ctx.frobenius(a, phi)) for a in alphas)


def q16_elation_group(tup: AdmissibleTuple) -> List[Collineation]:
    """The q/8 elations (1,x,y) -> (1, x + c alpha_4, y + s), c in F2, s in S."""
    ctx = tup.ctx
    S = tup.data().S.elements()
    a4 = tup.alphas[3]
    return [_shear(ctx, c * a4, s) for c in (0, 1) for s in S]


def span_orbit_scan(T1: Subgroup, T2: Subgroup) -> List[Tuple[int, int]]:
    """Every (phi, k) with k * T1^(2^phi) = T2."""
    ctx = T1.ctx
    if T1.rank != T2.rank:
        return []
    hits = []
    for phi in range(ctx.h):
        T = f2linalg.frobenius_image(T1, phi)
        if T.rank == 0:
            return [(phi, 1)] if T2.rank == 0 else []
        t0 = T.basis[-1]
        for u in T2.elements():
            if u == 0:
                continue
            k = ctx.div(u, t0)
            if f2linalg.scale(T, k).basis == T2.basis:
                hits.append((phi, k))
    return hits


# ---------------------------------------------------------------------------
# Admissible-tuple search
# ---------------------------------------------------------------------------

@dataclass
class AdmissibleClass:
    """One equivalence class of admissible spans, keyed by its least member."""

    representative: Subgroup
    members: List[Subgroup] = field(default_factory=list)

    @property
    def admissible_tuple(self) -> AdmissibleTuple:
        b = self.representative.basis
        return AdmissibleTuple(self.representative.ctx, (b[0], b[1], b[2], 1))

    def to_dict(self) -> dict:
        return {"span": self.representative.to_hex(), "tuple": self.admissible_tuple.to_hex(),
                "members": len(self.members)}


def _frobenius_invariant(S: Subgroup) -> bool:
    return f2linalg.frobenius_image(S, 1).basis == S.basis


def _grow(ctx: FieldCtx, T: Subgroup, rank: int) -> List[Subgroup]:
    """Frobenius-invariant subgroups of the given rank containing T, reached by adding one orbit."""
    out = []
    seen = set()
    for x in range(1, ctx.q):
        # T is squaring-closed, so x and each conjugate coset leader give the same closure
        if T.reduce(x) != x:
            continue
        if min(T.reduce(ctx.frobenius(x, k)) for k in range(1, ctx.h)) < x:
            continue
        U = f2linalg.frobenius_closure(ctx, T.basis + (x,))
        if U.rank <= rank and U.basis not in seen:
            seen.add(U.basis)
            out.append(U)
    return out


def invariant_spans(ctx: FieldCtx, rank: int = 4, threads: Optional[int] = None) -> List[Subgroup]:
    """All squaring-closed subgroups of the given rank that contain 1."""
    workers = max(1, config.THREADS if threads is None else threads)
    start = f2linalg.span(ctx, [1])
    found: Dict[Tuple[int, ...], Subgroup] = {}
    frontier = [start]
    while frontier:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                grown = list(pool.map(lambda T: _grow(ctx, T, rank), frontier))
        else:
            grown = [_grow(ctx, T, rank) for T in frontier]
        nxt: Dict[Tuple[int, ...], Subgroup] = {}
        for batch in grown:
            for U in batch:
                if U.rank == rank:
                    found[U.basis] = U
                elif U.basis not in nxt:
                    nxt[U.basis] = U
        frontier = [nxt[k] for k in sorted(nxt)]
    return [found[k] for k in sorted(found)]


def _class_key(T: Subgroup, members: set) -> Tuple[int, ...]:
    ctx = T.ctx
    keys = [T.basis]
    for t in T.elements():
        if t == 0:
            continue
        for phi in range(ctx.h):
            U = f2linalg.scale(f2linalg.frobenius_image(T, phi), ctx.inv(ctx.frobenius(t, phi)))
            if U.basis in members:
                keys.append(U.basis)
    return min(keys)


def admissible_search(ctx: FieldCtx, threads: Optional[int] = None) -> List[AdmissibleClass]:
    """Classes of admissible tuples (a1, a2, a3, 1), one per span orbit under T -> k T^phi."""
    if ctx.h < 4:
        return []
    spans = invariant_spans(ctx, 4, threads)
    by_basis = {T.basis: T for T in spans}
    classes: Dict[Tuple[int, ...], AdmissibleClass] = {}
    for T in spans:
        key = _class_key(T, set(by_basis))
        cls = classes.setdefault(key, AdmissibleClass(by_basis[key]))
        cls.members.append(T)
    out = [classes[k] for k in sorted(classes)]
    logger.info("GF(2^%d): %d admissible spans in %d classes", ctx.h, len(spans), len(out))
    return out


# ---------------------------------------------------------------------------
# Regression corpus
# ---------------------------------------------------------------------------

@dataclass
class CorpusEntry:
    family: str
    params: dict
    arc: KMArc


OFF_NUCLEUS_SHIFT: Tuple[Triple, Triple, Triple] = ((1, 0, 1), (0, 1, 0), (0, 0, 1))


def off_nucleus_hyperoval(ctx: FieldCtx) -> KMArc:
    """Regular hyperoval moved by (x, y, z) -> (x + z, y, z); it misses (0,0,1)."""
    g = Collineation(ctx, OFF_NUCLEUS_SHIFT, 0)
    return KMArc.verified(ctx, g.apply_points(regular_hyperoval(ctx).points))


def _largest_proper_divisor(h: int) -> Optional[int]:
    divs = [d for d in range(2, h) if h % d == 0]
    return max(divs) if divs else None


def q4_default_parameters(ctx: FieldCtx) -> Tuple[int, int]:
    """Least (alpha, beta) in the q/4 parameter domain."""
    for beta in range(2, ctx.q):
        for alpha in range(2, ctx.q):
            if ctx.mul(alpha, beta) != 1:
                return alpha, beta
    raise ConstructionError("no q/4 parameters")  # pragma: no cover


def build_corpus(qs: Sequence[int], threads: Optional[int] = None) -> List[CorpusEntry]:
    """One arc per family that exists at each q."""
    out: List[CorpusEntry] = []
    for q in qs:
        h = q.bit_length() - 1
        if q != 1 << h or h < 2:
            raise ValueError(f"{q} is not a power of two >= 4")
        ctx = FieldCtx.for_degree(h)
        out.append(CorpusEntry("regular", {"q": q}, regular_hyperoval(ctx)))
        if h == LUNELLI_SCE_DEGREE:
            out.append(CorpusEntry("lunelli-sce", {"q": q}, lunelli_sce()))
        hp = _largest_proper_divisor(h)
        if hp:
            small = FieldCtx.for_degree(hp)
            g = OPolynomial.translation(small, 1)
            out.append(CorpusEntry("km", {"h": h, "i": h - hp, "g": g.describe()},
                                   construct_km(h, h - hp, g)))
            m = h // hp
            out.append(CorpusEntry("gw-a", {"q_small": small.q, "h": m},
                                   construct_gw(regular_hyperoval(small), "A", m)))
            out.append(CorpusEntry("gw-b", {"q_small": small.q, "h": m},
                                   construct_gw(off_nucleus_hyperoval(small), "B", m)))
        if h >= 3:
            alpha, beta = q4_default_parameters(ctx)
            out.append(CorpusEntry("q4", {"alpha": element_hex(alpha), "beta": element_hex(beta)},
                                   construct_q4(ctx, alpha, beta)))
        if h >= 4:
            out.append(CorpusEntry("q8", {"alphas": ["1", "2", "4"]}, construct_q8(ctx, (1, 2, 4))))
            classes = admissible_search(ctx, threads)
            if classes:
                tup = classes[0].admissible_tuple
                out.append(CorpusEntry("q16", {"alphas": tup.to_hex()}, construct_q16(ctx, tup.alphas)))
        if h == 8:
            small = FieldCtx.for_degree(4)
            a, b = q4_default_parameters(small)
            out.append(CorpusEntry("gw-c", {"q_small": 16, "h": 2},
                                   construct_gw(construct_q4(small, a, b), "C", 2)))
    return out
