"""symmetry.py
Collineations of PG(2,q), elation and translation tests for KM-arcs,
stabilizers and PGammaL-equivalence by frame search.

A collineation is a pair (M, k) acting on column vectors as v -> M * v^(2^k).
Every collineation stabilising a KM-arc of type t > 2 fixes its t-nucleus, so
both arcs are first moved into the canonical frame (one t-secant -> X = 0,
nucleus -> (0,0,1)).  There a collineation is pinned down by the images of
three arc points on three distinct t-secants, and the map it induces on the
pencil of lines through the nucleus prunes almost every candidate before any
3x3 matrix is formed.  Hyperovals (and arcs with fewer than three t-secants)
fall back to ordered 4-point frames.
"""
from __future__ import annotations

import itertools
import logging
import threading
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

import config
import f2linalg
import plane
from arcs import KMArc
from errors import BudgetExceeded, DegenerateError, NoNucleusError
from f2linalg import Subgroup
from gf2e import FieldCtx
from plane import Matrix, Triple

logger = logging.getLogger(__name__)

PROBES = 8


# ---------------------------------------------------------------------------
# Collineations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Collineation:
    ctx: FieldCtx
    matrix: Matrix
    frob: int = 0

    def __post_init__(self):
        if plane.mat_det(self.ctx, self.matrix) == 0:
            raise DegenerateError("collineation matrix is singular")
        object.__setattr__(self, "matrix", plane.mat_normalize(self.ctx, self.matrix))
        object.__setattr__(self, "frob", self.frob % self.ctx.h)

    def apply_point(self, P: Sequence[int]) -> Triple:
        ctx = self.ctx
        v = [ctx.frobenius(x, self.frob) for x in P] if self.frob else P
        return plane.normalize(ctx, plane.mat_apply(ctx, self.matrix, v))

    def apply_line(self, line: Sequence[int]) -> Triple:
        ctx = self.ctx
        v = [ctx.frobenius(x, self.frob) for x in line] if self.frob else line
        inv_t = plane.mat_transpose(plane.mat_inv(ctx, self.matrix))
        return plane.normalize(ctx, plane.mat_apply(ctx, inv_t, v))

    def apply_points(self, points: Sequence[Sequence[int]]) -> List[Triple]:
        if not points:
            return []
        rows = _apply_rows(self.ctx, self.matrix, self.frob, np.asarray(points, dtype=np.int64))
        return [tuple(r) for r in rows.tolist()]  # type: ignore[misc]

    def compose(self, other: "Collineation") -> "Collineation":
        """self after other."""
        ctx = self.ctx
        M2 = plane.mat_frobenius(ctx, other.matrix, self.frob)
        return Collineation(ctx, plane.mat_mul(ctx, self.matrix, M2), self.frob + other.frob)

    __matmul__ = compose

    def inverse(self) -> "Collineation":
        ctx = self.ctx
        Minv = plane.mat_inv(ctx, self.matrix)
        return Collineation(ctx, plane.mat_frobenius(ctx, Minv, -self.frob % ctx.h), -self.frob)

    def is_identity(self) -> bool:
        return self.frob == 0 and self.matrix == plane.identity_matrix()

    def is_elation(self, include_identity: bool = True) -> bool:
        """Projectivity of the form c(I + N) with N nonzero and N^2 = 0."""
        if self.frob:
            return False
        if self.is_identity():
            return include_identity
        ctx, M = self.ctx, self.matrix
        c = M[0][0] ^ M[1][1] ^ M[2][2]
        if c == 0:
            return False
        A = tuple(tuple(M[i][j] ^ (c if i == j else 0) for j in range(3)) for i in range(3))
        if all(x == 0 for row in A for x in row):
            return False  # pragma: no cover
        A2 = plane.mat_mul(ctx, A, A)  # type: ignore[arg-type]
        return all(x == 0 for row in A2 for x in row)

    def elation_axis(self) -> Optional[Triple]:
        """Line of fixed points of a non-identity elation, else None."""
        if not self.is_elation(include_identity=False):
            return None
        M = self.matrix
        c = M[0][0] ^ M[1][1] ^ M[2][2]
        # M + cI has rank one; each nonzero row is the axis
        rows = [tuple(x ^ (c if i == j else 0) for j, x in enumerate(r)) for i, r in enumerate(M)]
        return plane.normalize(self.ctx, next(r for r in rows if any(r)))

    def to_dict(self) -> dict:
        return {"matrix": plane.matrix_hex(self.matrix), "frob": self.frob}

    @classmethod
    def from_dict(cls, ctx: FieldCtx, data: dict) -> "Collineation":
        return cls(ctx, plane.parse_matrix(ctx, data["matrix"]), int(data.get("frob", 0)))


def identity(ctx: FieldCtx) -> Collineation:
    return Collineation(ctx, plane.identity_matrix(), 0)


def _normalize_rows(ctx: FieldCtx, rows: np.ndarray) -> np.ndarray:
    a0, a1, a2 = rows[:, 0], rows[:, 1], rows[:, 2]
    lead = np.where(a0 != 0, a0, np.where(a1 != 0, a1, a2))
    il = ctx.inv_array(lead)
    return np.stack([ctx.mul_array(a0, il), ctx.mul_array(a1, il), ctx.mul_array(a2, il)], axis=1)


def _apply_rows(ctx: FieldCtx, M: Matrix, frob: int, pts: np.ndarray) -> np.ndarray:
    v = ctx.pow_array(pts, 1 << frob) if frob else pts
    out = np.zeros_like(v)
    for k in range(3):
        out[:, k] = (ctx.mul_array(M[k][0], v[:, 0])
                     ^ ctx.mul_array(M[k][1], v[:, 1])
                     ^ ctx.mul_array(M[k][2], v[:, 2]))
    return _normalize_rows(ctx, out)


def apply_collineation(arc: KMArc, g: Collineation) -> KMArc:
    """Image of the arc under g, re-verified by census."""
    if g.ctx != arc.ctx:
        raise ValueError("collineation and arc live over different fields")
    return KMArc.verified(arc.ctx, g.apply_points(arc.points))


def canonical_frame(ctx: FieldCtx, line: Sequence[int], point: Sequence[int]) -> Collineation:
    """Projectivity sending `line` to X = 0 and `point` (on it) to (0,0,1)."""
    line = plane.normalize(ctx, line)
    N = plane.normalize(ctx, point)
    if not plane.incident(ctx, N, line):
        raise ValueError(f"{N} is not on {line}")
    O = next(P for P in plane.all_points(ctx) if not plane.incident(ctx, P, line))
    R = next(P for P in plane.points_on_line(ctx, line) if P != N)
    return Collineation(ctx, plane.mat_inv(ctx, plane.mat_from_columns(O, R, N)), 0)


def elation(ctx: FieldCtx, center: Sequence[int], axis: Sequence[int], aux: int) -> Collineation:
    """Elation with the given centre and axis; in the canonical frame (1,x,y) -> (1,x,y+aux)."""
    if not plane.incident(ctx, center, axis):
        raise ValueError("the centre of an elation lies on its axis")
    tau = canonical_frame(ctx, axis, center)
    E = Collineation(ctx, ((1, 0, 0), (0, 1, 0), (ctx.check(aux), 0, 1)), 0)
    return tau.inverse().compose(E).compose(tau)


def translation(ctx: FieldCtx, a: int, b: int) -> Collineation:
    """(1,x,y) -> (1,x+a,y+b); the elations with axis X = 0."""
    return Collineation(ctx, ((1, 0, 0), (a, 1, 0), (b, 0, 1)), 0)


# ---------------------------------------------------------------------------
# Elation and translation arcs
# ---------------------------------------------------------------------------

@dataclass
class ElationReport:
    is_elation_arc: bool
    elation_lines: List[Tuple[Triple, Subgroup]] = field(default_factory=list)
    centers: Dict[Triple, List[Triple]] = field(default_factory=dict)
    is_translation: Dict[Triple, bool] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "is_elation_arc": self.is_elation_arc,
            "elation_lines": [{"line": plane.triple_hex(l), "subgroup": S.to_hex(),
                               "centers": [plane.triple_hex(c) for c in self.centers.get(l, [])],
                               "translation": self.is_translation.get(l, False)}
                              for l, S in self.elation_lines],
        }


def _columns(points: Iterable[Triple]) -> Dict[int, List[int]]:
    cols: Dict[int, List[int]] = {}
    for P in points:
        if P[0] == 1:
            cols.setdefault(P[1], []).append(P[2])
    return cols


def _common_coset_subgroup(ctx: FieldCtx, cols: Dict[int, List[int]], t: int) -> Optional[Subgroup]:
    """S of size t with every column a coset of S, if it exists."""
    if not cols:
        return None
    first = cols[min(cols)]
    if len(first) != t:
        return None
    z0 = first[0]
    S = f2linalg.span(ctx, (z ^ z0 for z in first))
    if S.size != t:
        return None
    if all(f2linalg.is_coset(col, S) for col in cols.values()):
        return S
    return None


def _axis_subgroup(arc: KMArc, line: Triple, center: Triple, t: int) -> Optional[Subgroup]:
    tau = canonical_frame(arc.ctx, line, center)
    return _common_coset_subgroup(arc.ctx, _columns(tau.apply_points(arc.points)), t)


def elation_subgroup(arc: KMArc, line: Sequence[int]) -> Optional[Subgroup]:
    """S when `line` is an elation line of the arc, else None.

    For a hyperoval the line must be a secant and S belongs to the first
    centre on it, in line order, that gives a coset partition.
    """
    ctx = arc.ctx
    line = plane.normalize(ctx, line)
    if arc.is_hyperoval:
        if _secant_size(arc, line) != 2:
            return None
        for C in plane.points_on_line(ctx, line):
            if C not in arc:
                S = _axis_subgroup(arc, line, C, 2)
                if S is not None:
                    return S
        return None
    if line not in arc.t_secants:
        return None
    return _axis_subgroup(arc, line, arc.nucleus, arc.t)


def first_elation_line(arc: KMArc) -> Optional[Tuple[Triple, Subgroup]]:
    """The least elation line with its subgroup; stops at the first hit."""
    if arc.is_hyperoval:
        I_, J_, L_ = plane.pair_lines(arc.ctx, arc.points)
        candidates = [plane.line_at(arc.ctx, i) for i in sorted(set(L_.tolist()))]
    else:
        candidates = arc.t_secants
    for line in candidates:
        S = elation_subgroup(arc, line)
        if S is not None:
            return line, S
    return None


def is_elation_arc(arc: KMArc) -> ElationReport:
    report = ElationReport(False)
    if arc.is_hyperoval:
        for line, center, S in _hyperoval_elations(arc):
            if line not in report.centers:
                report.elation_lines.append((line, S))
                report.centers[line] = []
            report.centers[line].append(center)
    else:
        N = arc.nucleus
        for line in arc.t_secants:
            S = _axis_subgroup(arc, line, N, arc.t)
            if S is not None:
                report.elation_lines.append((line, S))
                report.centers[line] = [N]
    report.is_elation_arc = bool(report.elation_lines)
    for line, _ in report.elation_lines:
        report.is_translation[line] = is_translation_arc(arc, line)
    return report


def _hyperoval_elations(arc: KMArc):
    """(axis, centre, S) for every non-trivial stabilising elation of a hyperoval."""
    ctx = arc.ctx
    I_, J_, L_ = plane.pair_lines(ctx, arc.points)
    for idx in sorted(set(L_.tolist())):
        line = plane.line_at(ctx, idx)
        for C in plane.points_on_line(ctx, line):
            if C in arc:
                continue
            S = _axis_subgroup(arc, line, C, 2)
            if S is not None:
                yield line, C, S


def _frame_for_axis(arc: KMArc, line: Triple) -> Collineation:
    ctx = arc.ctx
    if not arc.is_hyperoval and plane.incident(ctx, arc.nucleus, line):
        return canonical_frame(ctx, line, arc.nucleus)
    return canonical_frame(ctx, line, plane.points_on_line(ctx, line)[0])


def axis_elation_group(arc: KMArc, line: Sequence[int]) -> List[Tuple[int, int]]:
    """All elations with axis `line` stabilising the arc, as (a, b) translations of the frame chart."""
    ctx = arc.ctx
    line = plane.normalize(ctx, line)
    tau = _frame_for_axis(arc, line)
    affine = sorted(P for P in tau.apply_points(arc.points) if P[0] == 1)
    if not affine:
        return [(0, 0)]
    pset = set(affine)
    _, y0, z0 = affine[0]
    group = []
    for _, y, z in affine:
        a, b = y ^ y0, z ^ z0
        if all((1, yy ^ a, zz ^ b) in pset for _, yy, zz in affine):
            group.append((a, b))
    return sorted(group)


def _secant_size(arc: KMArc, line: Triple) -> int:
    return sum(1 for P in arc.points if plane.incident(arc.ctx, P, line))


def is_translation_arc(arc: KMArc, line: Sequence[int]) -> bool:
    """Whether the elations with axis `line` act transitively on the arc points off it."""
    line = plane.normalize(arc.ctx, line)
    m = _secant_size(arc, line)
    if m != arc.t:
        raise ValueError(f"{line} is a {m}-secant, not a {arc.t}-secant")
    return len(axis_elation_group(arc, line)) == len(arc) - m


def translation_lines(arc: KMArc) -> List[Triple]:
    if arc.is_hyperoval:
        I_, J_, L_ = plane.pair_lines(arc.ctx, arc.points)
        candidates = [plane.line_at(arc.ctx, i) for i in sorted(set(L_.tolist()))]
    else:
        candidates = arc.t_secants
    return [line for line in candidates if is_translation_arc(arc, line)]


# ---------------------------------------------------------------------------
# Frame search
# ---------------------------------------------------------------------------

class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0
        self.found = 0
        self._lock = threading.Lock()

    def spend(self, n: int) -> None:
        with self._lock:
            self.used += n
            if self.used > self.limit:
                raise BudgetExceeded(
                    f"frame search exceeded its budget of {self.limit} candidates",
                    lower_bound=self.found)

    def hit(self) -> None:
        with self._lock:
            self.found += 1


def _norm2(ctx: FieldCtx, a: int, b: int) -> Tuple[int, int]:
    if a:
        return (1, ctx.div(b, a)) if a != 1 else (1, b)
    return (0, 1)


def _frame2(ctx: FieldCtx, u1, u2, u3):
    """2x2 matrix (columns x*u1, y*u2) sending e1, e2, e1+e2 to u1, u2, u3."""
    m = ctx.mul
    det = m(u1[0], u2[1]) ^ m(u1[1], u2[0])
    if det == 0:
        return None
    x = ctx.div(m(u3[0], u2[1]) ^ m(u3[1], u2[0]), det)
    y = ctx.div(m(u1[0], u3[1]) ^ m(u1[1], u3[0]), det)
    if not (x and y):
        return None
    return ((m(x, u1[0]), m(y, u2[0])), (m(x, u1[1]), m(y, u2[1])))


def _inv2(ctx: FieldCtx, F):
    (a, b), (c, d) = F
    det = ctx.mul(a, d) ^ ctx.mul(b, c)
    i = ctx.inv(det)
    return ((ctx.mul(d, i), ctx.mul(b, i)), (ctx.mul(c, i), ctx.mul(a, i)))


def _mul2(ctx: FieldCtx, A, B):
    m = ctx.mul
    return tuple(tuple(m(A[i][0], B[0][j]) ^ m(A[i][1], B[1][j]) for j in range(2)) for i in range(2))


def _frob_triple(ctx: FieldCtx, P: Sequence[int], k: int) -> Triple:
    if k == 0:
        return tuple(P)  # type: ignore[return-value]
    return tuple(ctx.frobenius(x, k) for x in P)  # type: ignore[return-value]


class _FrameSearch:
    """Collineations mapping point set A onto point set B.

    With `nucleus=True` both sets are given in the canonical frame, nucleus
    (0,0,1), and the t-secants are the groups of points sharing (X : Y).
    """

    def __init__(self, ctx: FieldCtx, A: Sequence[Triple], B: Sequence[Triple],
                 nucleus: bool, budget: _Budget, first_only: bool):
        self.ctx = ctx
        self.A = list(A)
        self.B = list(B)
        self.Bset = frozenset(B)
        self.nucleus = nucleus
        self.budget = budget
        self.first_only = first_only
        if nucleus:
            self.pencil_A = self._pencil(self.A)
            self.pencil_B = self._pencil(self.B)
            keys = sorted(self.pencil_A)
            self.lines = keys[:3]
            self.frame = [(0, 0, 1)] + [self.pencil_A[k][0] for k in self.lines]
        else:
            self.frame = self._general_frame(self.A)

    def _pencil(self, pts: Sequence[Triple]) -> Dict[Tuple[int, int], List[Triple]]:
        out: Dict[Tuple[int, int], List[Triple]] = {}
        for P in pts:
            out.setdefault(_norm2(self.ctx, P[0], P[1]), []).append(P)
        return out

    def _general_frame(self, pts: Sequence[Triple]) -> List[Triple]:
        ctx = self.ctx
        for quad in itertools.combinations(pts, 4):
            try:
                plane.frame_matrix(ctx, quad)
            except DegenerateError:
                continue
            return list(quad)
        raise DegenerateError("point set contains no frame")

    def _inner_row(self, P: Sequence[int], u: Sequence[int]) -> int:
        m = self.ctx.mul
        return m(P[0], u[0]) ^ m(P[1], u[1]) ^ m(P[2], u[2])

    def run(self, sigma: int) -> List[Collineation]:
        ctx = self.ctx
        src = [_frob_triple(ctx, P, sigma) for P in self.frame]
        FS = plane.frame_matrix(ctx, src)
        FSinv = plane.mat_inv(ctx, FS)
        coords = [plane.mat_apply(ctx, FSinv, _frob_triple(ctx, P, sigma)) for P in self.A]
        # probe points spread over the set, then everything
        step = max(1, len(coords) // PROBES)
        probes = coords[::step][:PROBES]
        found: List[Collineation] = []
        if self.nucleus:
            targets = self._pencil_targets(sigma)
        else:
            targets = self._general_targets()
        for P0, P1, P2, third in targets:
            base = plane.mat_from_columns(P0, P1, P2)
            if plane.mat_det(ctx, base) == 0:
                continue
            Binv = plane.mat_inv(ctx, base)
            self.budget.spend(len(third))
            for P3 in third:
                a, b, c = plane.mat_apply(ctx, Binv, P3)
                if not (a and b and c):
                    continue
                cols = ([ctx.mul(a, x) for x in P0], [ctx.mul(b, x) for x in P1],
                        [ctx.mul(c, x) for x in P2])
                if not self._maps_into(cols, probes) or not self._maps_into(cols, coords):
                    continue
                FT = plane.mat_from_columns(*cols)
                found.append(Collineation(ctx, plane.mat_mul(ctx, FT, FSinv), sigma))
                self.budget.hit()
                if self.first_only:
                    return found
        return found

    def _maps_into(self, cols, coords) -> bool:
        ctx, Bset = self.ctx, self.Bset
        m = ctx.mul
        c0, c1, c2 = cols
        for x, y, z in coords:
            v0 = m(x, c0[0]) ^ m(y, c1[0]) ^ m(z, c2[0])
            v1 = m(x, c0[1]) ^ m(y, c1[1]) ^ m(z, c2[1])
            v2 = m(x, c0[2]) ^ m(y, c1[2]) ^ m(z, c2[2])
            if v0:
                if v0 != 1:
                    i = ctx.inv(v0)
                    v1, v2 = m(v1, i), m(v2, i)
                key = (1, v1, v2)
            elif v1:
                key = (0, 1, ctx.div(v2, v1))
            else:
                key = (0, 0, 1)
            if key not in Bset:
                return False
        return True

    def _general_targets(self):
        B = self.B
        for P0, P1, P2 in itertools.permutations(B, 3):
            yield P0, P1, P2, [P for P in B if P not in (P0, P1, P2)]

    def surviving_pencil_maps(self, sigma: int) -> List[Tuple[Tuple[int, int], ...]]:
        """Ordered target t-secant triples whose induced pencil map carries every source t-secant onto a target t-secant."""
        ctx = self.ctx
        src_keys = [_frob_triple(ctx, k + (0,), sigma)[:2] for k in sorted(self.pencil_A)]
        u = [_frob_triple(ctx, k + (0,), sigma)[:2] for k in self.lines]
        Fu = _frame2(ctx, *u)
        if Fu is None:  # pragma: no cover
            raise DegenerateError("source t-secants coincide")
        Fu_inv = _inv2(ctx, Fu)
        target_keys = sorted(self.pencil_B)
        key_set = set(target_keys)
        out = []
        m = ctx.mul
        for triple in itertools.permutations(target_keys, 3):
            Fm = _frame2(ctx, *triple)
            if Fm is None:
                continue
            T = _mul2(ctx, Fm, Fu_inv)
            ok = True
            for k in src_keys:
                img = _norm2(ctx, m(T[0][0], k[0]) ^ m(T[0][1], k[1]),
                             m(T[1][0], k[0]) ^ m(T[1][1], k[1]))
                if img not in key_set:
                    ok = False
                    break
            if ok:
                out.append(triple)
        return out

    def _pencil_targets(self, sigma: int):
        maps = self.surviving_pencil_maps(sigma)
        logger.debug("sigma=%d: %d pencil maps survive", sigma, len(maps))
        N = (0, 0, 1)
        for m1, m2, m3 in maps:
            third = self.pencil_B[m3]
            for P1 in self.pencil_B[m1]:
                for P2 in self.pencil_B[m2]:
                    yield N, P1, P2, third


def _search(A: KMArc, B: KMArc, first_only: bool, budget: Optional[int],
            threads: Optional[int]) -> Tuple[List[Collineation], _Budget]:
    """All (or the first) collineations g with g(A) = B."""
    ctx = A.ctx
    limit = config.BUDGET if budget is None else budget
    workers = max(1, config.THREADS if threads is None else threads)
    counter = _Budget(limit)

    use_nucleus = not A.is_hyperoval and len(A.t_secants) >= 3
    if use_nucleus:
        tau_A = canonical_frame(ctx, A.t_secants[0], A.nucleus)
        tau_B = tau_A if B is A else canonical_frame(ctx, B.t_secants[0], B.nucleus)
        pts_A = tau_A.apply_points(A.points)
        pts_B = pts_A if B is A else tau_B.apply_points(B.points)
    else:
        tau_A = tau_B = identity(ctx)
        pts_A, pts_B = list(A.points), list(B.points)

    engine = _FrameSearch(ctx, sorted(pts_A), sorted(pts_B), use_nucleus, counter, first_only)
    sigmas = list(range(ctx.h))
    results: Dict[int, List[Collineation]] = {}
    if workers == 1:
        for s in sigmas:
            results[s] = engine.run(s)
            if first_only and results[s]:
                break
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for s, found in zip(sigmas, pool.map(engine.run, sigmas)):
                results[s] = found

    tau_B_inv = tau_B.inverse()
    out: List[Collineation] = []
    for s in sorted(results):
        for g in results[s]:
            out.append(tau_B_inv.compose(g).compose(tau_A))
        if first_only and out:
            break
    logger.info("frame search q=%d: %d candidates, %d hits", ctx.q, counter.used, len(out))
    return out, counter


def equivalent(a: KMArc, b: KMArc, budget: Optional[int] = None,
               threads: Optional[int] = None) -> Optional[Collineation]:
    """A collineation g with g(a) = b, or None when the exhaustive search finds none."""
    if a.ctx != b.ctx:
        raise ValueError("arcs live over different fields")
    if len(a) != len(b) or not a.report.is_km or not b.report.is_km:
        return None
    found, _ = _search(a, b, True, budget, threads)
    return found[0] if found else None


# ---------------------------------------------------------------------------
# Stabilizer
# ---------------------------------------------------------------------------

@dataclass
class StabilizerReport:
    """`elation_order` is the largest stabilizing elation group with a single axis,
    identity included; `elation_count` counts elations over every axis."""

    order: int
    generators: List[Collineation]
    orbits: List[List[Triple]]
    projectivity_order: int
    elation_order: int
    elation_count: int = 1
    axis_elation_orders: Dict[Triple, int] = field(default_factory=dict)
    elements: List[Collineation] = field(default_factory=list, repr=False)

    @property
    def orbit_sizes(self) -> List[int]:
        return sorted(len(o) for o in self.orbits)

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "projectivity_order": self.projectivity_order,
            "elation_order": self.elation_order,
            "elation_count": self.elation_count,
            "axis_elation_orders": [{"axis": plane.triple_hex(line), "order": n}
                                    for line, n in sorted(self.axis_elation_orders.items())],
            "orbit_sizes": self.orbit_sizes,
            "generators": [g.to_dict() for g in self.generators],
        }


def _permutation(g: Collineation, index: Dict[Triple, int], points: Sequence[Triple]) -> Tuple[int, ...]:
    return tuple(index[P] for P in g.apply_points(points))


def _generators(elements: List[Collineation], points: Sequence[Triple]) -> List[Collineation]:
    """Greedy generating set: keep an element whenever it leaves the current closure."""
    index = {P: i for i, P in enumerate(points)}
    perms = {id(g): (_permutation(g, index, points), g.frob) for g in elements}
    ident = (tuple(range(len(points))), 0)
    h = elements[0].ctx.h if elements else 1
    closure = {ident}
    gens: List[Collineation] = []
    gen_perms: List[Tuple[Tuple[int, ...], int]] = []

    def mult(x, y):
        return tuple(x[0][i] for i in y[0]), (x[1] + y[1]) % h

    for g in elements:
        pg = perms[id(g)]
        if pg in closure:
            continue
        gens.append(g)
        gen_perms.append(pg)
        queue = list(closure)
        while queue:
            x = queue.pop()
            for y in gen_perms:
                z = mult(x, y)
                if z not in closure:
                    closure.add(z)
                    queue.append(z)
    return gens


def _orbits(points: Sequence[Triple], gens: Sequence[Collineation]) -> List[List[Triple]]:
    index = {P: i for i, P in enumerate(points)}
    parent = list(range(len(points)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for g in gens:
        for i, Q in enumerate(g.apply_points(points)):
            a, b = find(i), find(index[Q])
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: Dict[int, List[Triple]] = {}
    for i, P in enumerate(points):
        groups.setdefault(find(i), []).append(P)
    return sorted(groups.values(), key=lambda o: (len(o), o))


def stabilizer(arc: KMArc, budget: Optional[int] = None,
               threads: Optional[int] = None) -> StabilizerReport:
    """Setwise stabilizer of the arc in PGammaL(3,q)."""
    if not arc.report.is_km:
        raise ValueError("stabilizer needs a verified KM-arc")
    elements, _ = _search(arc, arc, False, budget, threads)
    elements.sort(key=lambda g: (g.frob, g.matrix))
    gens = _generators(elements, arc.points)
    axes = Counter(a for a in (g.elation_axis() for g in elements) if a is not None)
    by_axis = {line: n + 1 for line, n in axes.items()}
    return StabilizerReport(
        order=len(elements),
        generators=gens,
        orbits=_orbits(arc.points, gens),
        projectivity_order=sum(1 for g in elements if g.frob == 0),
        elation_order=max(by_axis.values(), default=1),
        elation_count=1 + sum(axes.values()),
        axis_elation_orders=by_axis,
        elements=elements,
    )


def pgammal_order(ctx: FieldCtx) -> int:
    q = ctx.q
    return ctx.h * q ** 3 * (q ** 3 - 1) * (q ** 2 - 1)
