"""plane.py
The Desarguesian plane PG(2, q), q = 2^h.

Points and lines are int triples over a `FieldCtx`, normalized so the first
nonzero coordinate is 1.  Both are enumerated in lexicographic order,

    (0,0,1), (0,1,z) for z in F_q, (1,y,z) for y, z in F_q,

and that order defines their integer index.  Incidence is the dot product.
The 3x3 matrix helpers at the bottom are what symmetry.py builds
collineations from.
"""
from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np

from errors import DegenerateError
from gf2e import FieldCtx, element_hex

Triple = Tuple[int, int, int]
Matrix = Tuple[Triple, Triple, Triple]

X0: Triple = (1, 0, 0)       # the line X = 0
NUCLEUS: Triple = (0, 0, 1)  # canonical t-nucleus


# ---------------------------------------------------------------------------
# Points and lines
# ---------------------------------------------------------------------------

def normalize(ctx: FieldCtx, v: Sequence[int]) -> Triple:
    a, b, c = (int(x) for x in v)
    if a:
        if a == 1:
            return (1, b, c)
        ia = ctx.inv(a)
        return (1, ctx.mul(b, ia), ctx.mul(c, ia))
    if b:
        if b == 1:
            return (0, 1, c)
        return (0, 1, ctx.div(c, b))
    if c:
        return (0, 0, 1)
    raise DegenerateError("the zero vector is not a projective point")


def cross(ctx: FieldCtx, u: Sequence[int], v: Sequence[int]) -> Triple:
    m = ctx.mul
    return (m(u[1], v[2]) ^ m(u[2], v[1]),
            m(u[2], v[0]) ^ m(u[0], v[2]),
            m(u[0], v[1]) ^ m(u[1], v[0]))


def dot(ctx: FieldCtx, u: Sequence[int], v: Sequence[int]) -> int:
    m = ctx.mul
    return m(u[0], v[0]) ^ m(u[1], v[1]) ^ m(u[2], v[2])


def incident(ctx: FieldCtx, P: Sequence[int], line: Sequence[int]) -> bool:
    return dot(ctx, P, line) == 0


def line_through(ctx: FieldCtx, P: Sequence[int], Q: Sequence[int]) -> Triple:
    P, Q = normalize(ctx, P), normalize(ctx, Q)
    if P == Q:
        raise DegenerateError(f"no unique line through the single point {P}")
    return normalize(ctx, cross(ctx, P, Q))


def meet(ctx: FieldCtx, l: Sequence[int], m: Sequence[int]) -> Triple:
    l, m = normalize(ctx, l), normalize(ctx, m)
    if l == m:
        raise DegenerateError(f"a line does not meet itself in a point: {l}")
    return normalize(ctx, cross(ctx, l, m))


def points_on_line(ctx: FieldCtx, line: Sequence[int]) -> List[Triple]:
    """The q+1 points of `line`, sorted."""
    a0, a1, a2 = normalize(ctx, line)
    q = ctx.q
    pts: List[Triple] = []
    if a2 == 0:
        pts.append((0, 0, 1))
    if a2:
        pts.append((0, 1, ctx.div(a1, a2)))
        ia2 = ctx.inv(a2)
        for y in range(q):
            pts.append((1, y, ctx.mul(a0 ^ ctx.mul(a1, y), ia2)))
    elif a1 == 0:
        pts.extend((0, 1, z) for z in range(q))
    else:
        y = ctx.div(a0, a1)
        pts.extend((1, y, z) for z in range(q))
    pts.sort()
    return pts


def lines_through(ctx: FieldCtx, P: Sequence[int]) -> List[Triple]:
    """The pencil of P; by duality these are the 'points' of the line P."""
    return points_on_line(ctx, P)


def all_points(ctx: FieldCtx) -> List[Triple]:
    q = ctx.q
    pts: List[Triple] = [(0, 0, 1)]
    pts.extend((0, 1, z) for z in range(q))
    pts.extend((1, y, z) for y in range(q) for z in range(q))
    return pts


def all_lines(ctx: FieldCtx) -> List[Triple]:
    return all_points(ctx)


def count(ctx: FieldCtx) -> int:
    return ctx.q * ctx.q + ctx.q + 1


def point_index(ctx: FieldCtx, P: Sequence[int]) -> int:
    a, b, c = normalize(ctx, P)
    if a:
        return 1 + ctx.q + b * ctx.q + c
    if b:
        return 1 + c
    return 0


line_index = point_index


def point_at(ctx: FieldCtx, i: int) -> Triple:
    q = ctx.q
    if not 0 <= i < count(ctx):
        raise IndexError(f"index {i} outside PG(2,{q})")
    if i == 0:
        return (0, 0, 1)
    if i <= q:
        return (0, 1, i - 1)
    y, z = divmod(i - 1 - q, q)
    return (1, y, z)


line_at = point_at


def triple_hex(v: Sequence[int]) -> List[str]:
    return [element_hex(x) for x in v]


def parse_triple(ctx: FieldCtx, items: Sequence[str]) -> Triple:
    if len(items) != 3:
        raise ValueError(f"expected three coordinates, got {len(items)}")
    return normalize(ctx, [ctx.parse(s) for s in items])


# ---------------------------------------------------------------------------
# Vectorized pair-to-line map (census work)
# ---------------------------------------------------------------------------

def normalized_index_array(ctx: FieldCtx, a0, a1, a2) -> np.ndarray:
    """Canonical index of each (a0, a1, a2) row; rows must be nonzero."""
    a0 = np.asarray(a0, dtype=np.int64)
    a1 = np.asarray(a1, dtype=np.int64)
    a2 = np.asarray(a2, dtype=np.int64)
    lead = np.where(a0 != 0, a0, np.where(a1 != 0, a1, a2))
    if np.any(lead == 0):
        raise DegenerateError("zero vector in a coordinate array")
    il = ctx.inv_array(lead)
    b1 = ctx.mul_array(a1, il)
    b2 = ctx.mul_array(a2, il)
    q = ctx.q
    return np.where(a0 != 0, 1 + q + b1 * q + b2, np.where(a1 != 0, 1 + b2, 0))


def pair_lines(ctx: FieldCtx, points: Sequence[Triple]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """For every pair i < j of distinct points: (i, j, index of line P_i P_j)."""
    n = len(points)
    if n < 2:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty, empty
    arr = np.array(points, dtype=np.int64)
    I_, J_, L_ = [], [], []
    for i in range(n - 1):
        u = arr[i]
        v = arr[i + 1:]
        c0 = ctx.mul_array(u[1], v[:, 2]) ^ ctx.mul_array(u[2], v[:, 1])
        c1 = ctx.mul_array(u[2], v[:, 0]) ^ ctx.mul_array(u[0], v[:, 2])
        c2 = ctx.mul_array(u[0], v[:, 1]) ^ ctx.mul_array(u[1], v[:, 0])
        I_.append(np.full(n - 1 - i, i, dtype=np.int64))
        J_.append(np.arange(i + 1, n, dtype=np.int64))
        L_.append(normalized_index_array(ctx, c0, c1, c2))
    return np.concatenate(I_), np.concatenate(J_), np.concatenate(L_)


# ---------------------------------------------------------------------------
# 3x3 matrices over GF(2^h)
# ---------------------------------------------------------------------------

def identity_matrix() -> Matrix:
    return ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def mat_from_columns(c0: Sequence[int], c1: Sequence[int], c2: Sequence[int]) -> Matrix:
    return ((c0[0], c1[0], c2[0]), (c0[1], c1[1], c2[1]), (c0[2], c1[2], c2[2]))


def mat_transpose(M: Matrix) -> Matrix:
    return tuple(zip(*M))  # type: ignore[return-value]


def mat_apply(ctx: FieldCtx, M: Matrix, v: Sequence[int]) -> Triple:
    m = ctx.mul
    return tuple(m(r[0], v[0]) ^ m(r[1], v[1]) ^ m(r[2], v[2]) for r in M)  # type: ignore[return-value]


def mat_mul(ctx: FieldCtx, A: Matrix, B: Matrix) -> Matrix:
    cols = [mat_apply(ctx, A, col) for col in zip(*B)]
    return mat_from_columns(*cols)


def mat_scale(ctx: FieldCtx, M: Matrix, k: int) -> Matrix:
    return tuple(tuple(ctx.mul(k, x) for x in row) for row in M)  # type: ignore[return-value]


def mat_frobenius(ctx: FieldCtx, M: Matrix, k: int) -> Matrix:
    return tuple(tuple(ctx.frobenius(x, k) for x in row) for row in M)  # type: ignore[return-value]


def mat_det(ctx: FieldCtx, M: Matrix) -> int:
    m = ctx.mul
    (a, b, c), (d, e, f), (g, h, i) = M
    return (m(a, m(e, i) ^ m(f, h))
            ^ m(b, m(d, i) ^ m(f, g))
            ^ m(c, m(d, h) ^ m(e, g)))


def mat_inv(ctx: FieldCtx, M: Matrix) -> Matrix:
    det = mat_det(ctx, M)
    if det == 0:
        raise DegenerateError("singular matrix")
    m = ctx.mul
    (a, b, c), (d, e, f), (g, h, i) = M
    adj = ((m(e, i) ^ m(f, h), m(c, h) ^ m(b, i), m(b, f) ^ m(c, e)),
           (m(f, g) ^ m(d, i), m(a, i) ^ m(c, g), m(c, d) ^ m(a, f)),
           (m(d, h) ^ m(e, g), m(b, g) ^ m(a, h), m(a, e) ^ m(b, d)))
    return mat_scale(ctx, adj, ctx.inv(det))


def mat_normalize(ctx: FieldCtx, M: Matrix) -> Matrix:
    """Scale so the first nonzero entry (row-major) is 1."""
    for row in M:
        for x in row:
            if x:
                return mat_scale(ctx, M, ctx.inv(x)) if x != 1 else M
    raise DegenerateError("zero matrix")


def frame_matrix(ctx: FieldCtx, points: Sequence[Sequence[int]]) -> Matrix:
    """Columns a P0, b P1, c P2 with a P0 + b P1 + c P2 = P3.

    The matrix sends the standard frame e0, e1, e2, e0+e1+e2 to the four
    given points.
    """
    P0, P1, P2, P3 = points
    base = mat_from_columns(P0, P1, P2)
    if mat_det(ctx, base) == 0:
        raise DegenerateError("first three frame points are collinear")
    a, b, c = mat_apply(ctx, mat_inv(ctx, base), P3)
    if not (a and b and c):
        raise DegenerateError("frame points are not in general position")
    return mat_from_columns([ctx.mul(a, x) for x in P0],
                            [ctx.mul(b, x) for x in P1],
                            [ctx.mul(c, x) for x in P2])


def matrix_hex(M: Matrix) -> List[List[str]]:
    return [triple_hex(row) for row in M]


def parse_matrix(ctx: FieldCtx, rows: Sequence[Sequence[str]]) -> Matrix:
    if len(rows) != 3:
        raise ValueError("a collineation matrix has three rows")
    return tuple(tuple(ctx.parse(s) for s in row) for row in rows)  # type: ignore[return-value]
