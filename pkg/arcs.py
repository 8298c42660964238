"""arcs.py
KM-arcs: the line census, t-nucleus, secant sections and the
Vandermonde / F2-linear-set / linear-pencil checks.

A point set A of PG(2,q) is a KM-arc of type t when |A| = q + t and every
line meets A in 0, 2 or t points.  For t > 2 the q/t + 1 t-secants pass
through one point, the t-nucleus.
"""
from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

import f2linalg
import plane
from errors import DegenerateError, NoNucleusError, NotAKMArc
from gf2e import FieldCtx
from plane import Triple

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Census
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    is_km: bool
    size: int
    q: int
    t: Optional[int]
    nucleus: Optional[Triple] = None
    secant_count: int = 0
    histogram: Dict[int, int] = field(default_factory=dict)
    witness: Optional[Triple] = None
    witness_size: Optional[int] = None
    reason: str = ""
    t_secants: List[Triple] = field(default_factory=list)

    def summary(self) -> str:
        if self.is_km:
            kind = "hyperoval" if self.t == 2 else f"KM-arc of type {self.t}"
            tail = f", nucleus {self.nucleus}" if self.nucleus else ""
            return f"{kind} in PG(2,{self.q}), {self.size} points{tail}"
        where = f" at line {self.witness} ({self.witness_size} points)" if self.witness else ""
        return f"not a KM-arc: {self.reason}{where}"

    def to_dict(self) -> dict:
        return {
            "is_km": self.is_km,
            "size": self.size,
            "q": self.q,
            "t": self.t,
            "nucleus": plane.triple_hex(self.nucleus) if self.nucleus else None,
            "secant_count": self.secant_count,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "witness": plane.triple_hex(self.witness) if self.witness else None,
            "witness_size": self.witness_size,
            "reason": self.reason,
        }


def _canonical_points(ctx: FieldCtx, points: Iterable[Sequence[int]]) -> Tuple[Triple, ...]:
    return tuple(sorted({plane.normalize(ctx, p) for p in points}))


def line_sizes(ctx: FieldCtx, points: Sequence[Triple]) -> Tuple[Dict[int, int], np.ndarray]:
    """Sizes of all lines meeting `points` in >= 2 points, plus tangents per point.

    Returns ({line index: size}, array of 1-secant counts per point).
    """
    n = len(points)
    I_, J_, L_ = plane.pair_lines(ctx, points)
    sizes: Dict[int, int] = {}
    if L_.size:
        lines, pairs = np.unique(L_, return_counts=True)
        m = (1 + np.sqrt(1 + 8 * pairs.astype(np.float64))).round().astype(np.int64) // 2
        sizes = dict(zip(lines.tolist(), m.tolist()))
    total = plane.count(ctx)
    keys = np.unique(np.concatenate([I_, J_]) * total + np.concatenate([L_, L_]))
    secants_through = np.bincount(keys // total, minlength=n) if n else np.zeros(0, dtype=np.int64)
    tangents = (ctx.q + 1) - secants_through
    return sizes, tangents


def _least_tangent(ctx: FieldCtx, points: Sequence[Triple], tangents: np.ndarray,
                   secant_lines: Dict[int, int]) -> Optional[int]:
    best = None
    for i in np.nonzero(tangents)[0].tolist():
        for line in plane.lines_through(ctx, points[i]):
            idx = plane.line_index(ctx, line)
            if idx not in secant_lines and (best is None or idx < best):
                best = idx
                break
    return best


def verify_km(ctx: FieldCtx, points: Iterable[Sequence[int]]) -> VerificationReport:
    """Full line census of `points`; failures are reported, never raised."""
    pts = _canonical_points(ctx, points)
    if not pts:
        raise ValueError("verify_km needs a nonempty point set")
    q, n = ctx.q, len(pts)
    t = n - q
    sizes, tangents = line_sizes(ctx, pts)

    hist: Dict[int, int] = {}
    for m in sizes.values():
        hist[m] = hist.get(m, 0) + 1
    ones = int(tangents.sum())
    if ones:
        hist[1] = ones
    zeros = plane.count(ctx) - len(sizes) - ones
    if zeros:
        hist[0] = zeros

    report = VerificationReport(is_km=False, size=n, q=q, t=t if t >= 2 else None, histogram=hist)
    allowed = {0, 2, t} if 2 <= t <= q else {0, 2}

    bad = [idx for idx, m in sizes.items() if m not in allowed]
    tangent_idx = _least_tangent(ctx, pts, tangents, sizes) if ones else None
    if tangent_idx is not None:
        bad.append(tangent_idx)
    if not 2 <= t <= q:
        report.reason = f"size {n} is not q + t with 2 <= t <= q"
    elif q % t:
        report.reason = f"type {t} does not divide q = {q}"
    elif bad:
        report.reason = "line meets the set in a forbidden number of points"
    if report.reason:
        if bad:
            w = min(bad)
            report.witness = plane.line_at(ctx, w)
            report.witness_size = 1 if w == tangent_idx else sizes[w]
        return report

    if t == 2:
        report.is_km = True
        report.secant_count = hist.get(2, 0)
        return report

    secants = sorted(idx for idx, m in sizes.items() if m == t)
    report.t_secants = [plane.line_at(ctx, i) for i in secants]
    report.secant_count = len(secants)
    if len(secants) < 2:
        report.reason = "fewer than two t-secants"
        report.witness = report.t_secants[0] if secants else None
        report.witness_size = t if secants else None
        return report
    N = plane.meet(ctx, report.t_secants[0], report.t_secants[1])
    for line in report.t_secants[2:]:
        if not plane.incident(ctx, N, line):
            report.reason = "t-secants are not concurrent"
            report.witness, report.witness_size = line, t
            return report
    report.nucleus = N
    report.is_km = True
    logger.debug("census q=%d: type %d, %d t-secants, nucleus %s", q, t, len(secants), N)
    return report


# ---------------------------------------------------------------------------
# KM-arc value object
# ---------------------------------------------------------------------------

class KMArc:
    """A point set together with its (lazily computed) census."""

    def __init__(self, ctx: FieldCtx, points: Iterable[Sequence[int]],
                 report: Optional[VerificationReport] = None):
        self.ctx = ctx
        self.points: Tuple[Triple, ...] = _canonical_points(ctx, points)
        self._report = report

    @classmethod
    def verified(cls, ctx: FieldCtx, points: Iterable[Sequence[int]]) -> "KMArc":
        arc = cls(ctx, points)
        if not arc.report.is_km:
            raise NotAKMArc(arc.report.summary(), arc.report)
        return arc

    @property
    def report(self) -> VerificationReport:
        if self._report is None:
            self._report = verify_km(self.ctx, self.points)
        return self._report

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def t(self) -> int:
        return len(self.points) - self.ctx.q

    @property
    def is_hyperoval(self) -> bool:
        return self.t == 2

    @functools.cached_property
    def point_set(self) -> frozenset:
        return frozenset(self.points)

    @property
    def nucleus(self) -> Triple:
        return t_nucleus(self)

    @property
    def t_secants(self) -> List[Triple]:
        if self.is_hyperoval:
            raise NoNucleusError("a hyperoval has no distinguished t-secants")
        return list(self.report.t_secants)

    @functools.cached_property
    def sections(self) -> Dict[Triple, List[Triple]]:
        """Arc points on each t-secant."""
        out: Dict[Triple, List[Triple]] = {}
        for line in self.t_secants:
            out[line] = [P for P in self.points if plane.incident(self.ctx, P, line)]
        return out

    def __contains__(self, P: object) -> bool:
        return P in self.point_set

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, KMArc) and self.ctx == other.ctx and self.points == other.points

    def __hash__(self) -> int:
        return hash((self.ctx, self.points))

    def __repr__(self) -> str:
        return f"KMArc(q={self.q}, size={len(self.points)}, t={self.t})"


def t_nucleus(arc: KMArc) -> Triple:
    if arc.t == 2:
        raise NoNucleusError("a hyperoval (t = 2) has no t-nucleus")
    rep = arc.report
    if not rep.is_km or rep.nucleus is None:
        raise NotAKMArc(rep.summary(), rep)
    return rep.nucleus


# ---------------------------------------------------------------------------
# Line charts
# ---------------------------------------------------------------------------

class LineChart:
    """Affine coordinate on a line: `infinity` -> oo, the least two other points -> 0, 1."""

    def __init__(self, ctx: FieldCtx, line: Sequence[int], infinity: Sequence[int]):
        self.ctx = ctx
        self.line = plane.normalize(ctx, line)
        self.infinity = plane.normalize(ctx, infinity)
        if not plane.incident(ctx, self.infinity, self.line):
            raise ValueError(f"{self.infinity} is not on {self.line}")
        others = [P for P in plane.points_on_line(ctx, self.line) if P != self.infinity]
        self.zero, self.unit = others[0], others[1]
        self._coords = self._solver()
        u1, v1 = self._uv(self.unit)
        self._scale = ctx.div(v1, u1)

    def _solver(self) -> Tuple[int, int, int]:
        p, n = self.zero, self.infinity
        for i, j in ((0, 1), (0, 2), (1, 2)):
            det = self.ctx.mul(p[i], n[j]) ^ self.ctx.mul(p[j], n[i])
            if det:
                return i, j, det
        raise DegenerateError("chart base points coincide")  # pragma: no cover

    def _uv(self, r: Sequence[int]) -> Tuple[int, int]:
        ctx, (i, j, det) = self.ctx, self._coords
        p, n = self.zero, self.infinity
        u = ctx.div(ctx.mul(r[i], n[j]) ^ ctx.mul(r[j], n[i]), det)
        v = ctx.div(ctx.mul(p[i], r[j]) ^ ctx.mul(p[j], r[i]), det)
        return u, v

    def value(self, P: Sequence[int]) -> int:
        P = plane.normalize(self.ctx, P)
        if P == self.infinity:
            raise ValueError("the point at infinity has no affine value")
        u, v = self._uv(P)
        return self.ctx.div(self.ctx.div(v, u), self._scale)

    def point(self, value: int) -> Triple:
        lam = self.ctx.mul(value, self._scale)
        p, n = self.zero, self.infinity
        return plane.normalize(self.ctx, [p[k] ^ self.ctx.mul(lam, n[k]) for k in range(3)])


def line_chart(ctx: FieldCtx, line: Sequence[int], infinity: Sequence[int]) -> LineChart:
    return LineChart(ctx, line, infinity)


def section_values(arc: KMArc, line: Sequence[int]) -> List[int]:
    """Affine values of the arc points on a t-secant, nucleus at infinity."""
    line = plane.normalize(arc.ctx, line)
    chart = LineChart(arc.ctx, line, arc.nucleus)
    return sorted(chart.value(P) for P in arc.points if plane.incident(arc.ctx, P, line))


# ---------------------------------------------------------------------------
# Vandermonde and F2-linear sets
# ---------------------------------------------------------------------------

def vandermonde_check(ctx: FieldCtx, section: Sequence[int], t: int) -> bool:
    """True iff sum(y^k) = 0 for every 1 <= k <= t-2."""
    if len(section) != t:
        raise ValueError(f"section has {len(section)} values, expected {t}")
    if t <= 2:
        return True
    ys = np.asarray(section, dtype=np.int64)
    for k in range(1, t - 1):
        if np.bitwise_xor.reduce(ctx.pow_array(ys, k)) != 0:
            return False
    return True


@dataclass
class LinearityReport:
    linear: bool
    heads: List[Triple]
    reason: str = ""


def _is_affine_subspace(values: Sequence[int], j: int) -> bool:
    vals = sorted(set(values))
    if len(vals) != 1 << j:
        return False
    v0 = vals[0]
    return len(f2linalg.rref(v ^ v0 for v in vals)) == j


def f2linear_section_check(ctx: FieldCtx, line_points: Iterable[Sequence[int]]) -> LinearityReport:
    """Heads H of the set: with H at infinity the other points form an F2-coset."""
    pts = sorted({plane.normalize(ctx, P) for P in line_points})
    if len(pts) < 2:
        raise ValueError("need at least two points")
    line = plane.line_through(ctx, pts[0], pts[1])
    for P in pts[2:]:
        if not plane.incident(ctx, P, line):
            raise ValueError(f"{P} is not on the line {line} through the other points")
    n = len(pts) - 1
    if n & (n - 1) or n < 2:
        return LinearityReport(False, [], f"{len(pts)} points is not 2^j + 1 with j >= 1")
    j = n.bit_length() - 1
    heads = []
    for H in pts:
        chart = LineChart(ctx, line, H)
        if _is_affine_subspace([chart.value(P) for P in pts if P != H], j):
            heads.append(H)
    return LinearityReport(bool(heads), heads, "" if heads else "no point works as head")


def auxiliary_line(arc: KMArc) -> Triple:
    """The least line missing the t-nucleus."""
    N = arc.nucleus
    for i in range(plane.count(arc.ctx)):
        line = plane.line_at(arc.ctx, i)
        if not plane.incident(arc.ctx, N, line):
            return line
    raise DegenerateError("every line passes through the nucleus")  # pragma: no cover


def pencil_points(arc: KMArc) -> Dict[Triple, Triple]:
    """t-secant -> its intersection with the auxiliary line."""
    aux = auxiliary_line(arc)
    return {line: plane.meet(arc.ctx, line, aux) for line in arc.t_secants}


@dataclass
class PencilReport:
    linear: bool
    head_lines: List[Triple]


def linear_pencil_check(arc: KMArc) -> PencilReport:
    """Whether the t-secants form an F2-linear pencil, and its head lines."""
    duals = pencil_points(arc)
    back = {P: line for line, P in duals.items()}
    res = f2linear_section_check(arc.ctx, duals.values())
    return PencilReport(res.linear, sorted(back[H] for H in res.heads))


def sections_vandermonde(arc: KMArc) -> bool:
    """Every t-secant section is a Vandermonde set (vacuous for hyperovals)."""
    if arc.is_hyperoval:
        return True
    return all(vandermonde_check(arc.ctx, section_values(arc, line), arc.t)
               for line in arc.t_secants)
