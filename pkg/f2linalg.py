"""f2linalg.py
F2-linear algebra on GF(2^h) viewed as an h-dimensional vector space over F2.

Vectors are int bitsets (the same ints gf2e uses for field elements).
An additive subgroup is kept as a fully reduced row-echelon basis, pivots
strictly decreasing, so two equal subgroups always carry identical bases and
membership is a single reduction pass.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from errors import RankError
from gf2e import FieldCtx, element_hex

ENUMERATION_LIMIT = 20


def _pivot(v: int) -> int:
    return v.bit_length() - 1


def rref(vectors: Iterable[int]) -> Tuple[int, ...]:
    """Canonical reduced echelon basis of the F2-span of `vectors`."""
    rows: Dict[int, int] = {}
    for v in vectors:
        v = int(v)
        for p in sorted(rows, reverse=True):
            if (v >> p) & 1:
                v ^= rows[p]
        if not v:
            continue
        p = _pivot(v)
        for q, r in rows.items():
            if (r >> p) & 1:
                rows[q] = r ^ v
        rows[p] = v
    return tuple(rows[p] for p in sorted(rows, reverse=True))


def kernel(rows: Sequence[int], n: int) -> Tuple[int, ...]:
    """Basis of {y in F2^n : parity(r & y) = 0 for every r in rows}."""
    ech = rref(rows)
    pivots = {_pivot(r): r for r in ech}
    out = []
    for f in range(n):
        if f in pivots:
            continue
        y = 1 << f
        for p, r in pivots.items():
            if (r >> f) & 1:
                y |= 1 << p
        out.append(y)
    return rref(out)


def linear_kernel(images: Sequence[int], n: int) -> Tuple[int, ...]:
    """Basis of {y in F2^n : XOR of images[j] over set bits j of y is 0}."""
    if len(images) != n:
        raise ValueError(f"expected {n} images, got {len(images)}")
    rows: Dict[int, Tuple[int, int]] = {}
    out = []
    for j, img in enumerate(images):
        v, combo = int(img), 1 << j
        for p in sorted(rows, reverse=True):
            if (v >> p) & 1:
                v ^= rows[p][0]
                combo ^= rows[p][1]
        if v:
            rows[_pivot(v)] = (v, combo)
        else:
            out.append(combo)
    return rref(out)


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


# ---------------------------------------------------------------------------
# Subgroup
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subgroup:
    ctx: FieldCtx
    basis: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return 1 << len(self.basis)

    def reduce(self, x: int) -> int:
        """Least element of the coset x + S."""
        for b in self.basis:
            if (x >> _pivot(b)) & 1:
                x ^= b
        return x

    def __contains__(self, x: object) -> bool:
        return self.reduce(int(x)) == 0  # type: ignore[arg-type]

    def __len__(self) -> int:
        return self.size

    def elements(self) -> List[int]:
        if self.rank > ENUMERATION_LIMIT:
            raise ValueError(f"refusing to enumerate a subgroup of rank {self.rank}")
        out = [0]
        for b in self.basis:
            out += [x ^ b for x in out]
        return sorted(out)

    def to_hex(self) -> List[str]:
        return [element_hex(b) for b in self.basis]

    def __repr__(self) -> str:
        return f"Subgroup(rank={self.rank}, basis=[{', '.join(self.to_hex())}])"


def span(ctx: FieldCtx, elems: Iterable[int]) -> Subgroup:
    return Subgroup(ctx, rref(int(e) for e in elems))


def whole_field(ctx: FieldCtx) -> Subgroup:
    return span(ctx, (1 << j for j in range(ctx.h)))


def contains(S: Subgroup, x: int) -> bool:
    return int(x) in S


def coset_leader(S: Subgroup, x: int) -> int:
    return S.reduce(int(x))


def elements(S: Subgroup) -> List[int]:
    return S.elements()


def independent(elems: Sequence[int]) -> bool:
    return len(rref(int(e) for e in elems)) == len(elems)


def is_coset(values: Iterable[int], S: Subgroup) -> bool:
    """True iff values = v + S; the empty set counts as a coset."""
    vals = set(int(v) for v in values)
    if not vals:
        return True
    if len(vals) != S.size:
        return False
    v0 = next(iter(vals))
    return all(S.reduce(v ^ v0) == 0 for v in vals)


def trace_functional(ctx: FieldCtx, b: int) -> int:
    """Bit j is Tr(b * z^j), so Tr(b * y) = parity(functional & y)."""
    m = 0
    for j in range(ctx.h):
        m |= ctx.trace(ctx.mul(b, 1 << j)) << j
    return m


def trace_dual(S: Subgroup) -> Subgroup:
    """{y : Tr(x y) = 0 for all x in S}."""
    ctx = S.ctx
    rows = [trace_functional(ctx, b) for b in S.basis]
    return Subgroup(ctx, kernel(rows, ctx.h))


def trace_kernel(ctx: FieldCtx, elems: Iterable[int]) -> Subgroup:
    """{x : Tr(a x) = 0 for every a in elems}."""
    return trace_dual(span(ctx, elems))


def solve_trace_system(ctx: FieldCtx, alphas: Sequence[int], targets: Sequence[int]) -> int:
    """Least x with Tr(alphas[i] * x) = targets[i] for every i."""
    if len(alphas) != len(targets):
        raise ValueError("alphas and targets differ in length")
    if len(alphas) > ctx.h:
        raise RankError(f"{len(alphas)} conditions exceed dimension {ctx.h}")
    if not independent(alphas):
        raise RankError("alphas are F2-dependent")

    # Augmented elimination: bit h carries the right-hand side.
    aug = [trace_functional(ctx, a) | ((t & 1) << ctx.h) for a, t in zip(alphas, targets)]
    mask = ctx.q - 1
    rows: Dict[int, int] = {}
    for v in aug:
        for p in sorted(rows, reverse=True):
            if (v >> p) & 1:
                v ^= rows[p]
        if not v & mask:
            if v:
                raise RankError("trace system is inconsistent")
            continue
        p = _pivot(v & mask)
        for q, r in rows.items():
            if (r >> p) & 1:
                rows[q] = r ^ v
        rows[p] = v
    x = 0
    for p, r in rows.items():
        if (r >> ctx.h) & 1:
            x |= 1 << p
    for a, t in zip(alphas, targets):
        if ctx.trace(ctx.mul(a, x)) != (t & 1):
            raise RankError("trace system is inconsistent")  # pragma: no cover
    return trace_kernel(ctx, alphas).reduce(x)


def coordinates(basis: Sequence[int], x: int) -> Optional[Tuple[int, ...]]:
    """Coefficients (c_i) with x = sum c_i basis[i], or None when x is outside the span."""
    if not independent(basis):
        raise RankError("coordinates need an independent list")
    n = len(basis)
    # Each row tracks which original vectors it combines.
    rows: Dict[int, Tuple[int, int]] = {}
    for i, b in enumerate(basis):
        v, combo = int(b), 1 << i
        for p in sorted(rows, reverse=True):
            if (v >> p) & 1:
                v ^= rows[p][0]
                combo ^= rows[p][1]
        rows[_pivot(v)] = (v, combo)
    x, combo = int(x), 0
    for p in sorted(rows, reverse=True):
        if (x >> p) & 1:
            x ^= rows[p][0]
            combo ^= rows[p][1]
    if x:
        return None
    return tuple((combo >> i) & 1 for i in range(n))


def scale(S: Subgroup, k: int) -> Subgroup:
    return span(S.ctx, (S.ctx.mul(k, b) for b in S.basis))


def frobenius_image(S: Subgroup, k: int) -> Subgroup:
    return span(S.ctx, (S.ctx.frobenius(b, k) for b in S.basis))


def join(S: Subgroup, T: Subgroup) -> Subgroup:
    return span(S.ctx, S.basis + T.basis)


def frobenius_closure(ctx: FieldCtx, elems: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing elems and closed under squaring."""
    S = span(ctx, elems)
    while True:
        T = span(ctx, S.basis + tuple(ctx.mul(b, b) for b in S.basis))
        if T.basis == S.basis:
            return S
        S = T


def subgroups_of_rank(ctx: FieldCtx, r: int) -> List[Subgroup]:
    """Every rank-r subgroup of GF(2^h), each in canonical form."""
    h = ctx.h
    if not 0 <= r <= h:
        raise ValueError(f"rank {r} outside 0..{h}")
    out: List[Subgroup] = []
    for pivots in itertools.combinations(range(h - 1, -1, -1), r):
        pivot_set = set(pivots)
        free = [[f for f in range(p) if f not in pivot_set] for p in pivots]
        choices = [range(1 << len(fs)) for fs in free]
        for picks in itertools.product(*choices):
            basis = []
            for p, fs, pick in zip(pivots, free, picks):
                v = 1 << p
                for j, f in enumerate(fs):
                    if (pick >> j) & 1:
                        v |= 1 << f
                basis.append(v)
            out.append(Subgroup(ctx, tuple(basis)))
    return out


def parse_subgroup(ctx: FieldCtx, hex_basis: Sequence[str]) -> Subgroup:
    return span(ctx, (ctx.parse(t) for t in hex_basis))
