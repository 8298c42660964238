"""certificates.py
JSON arc certificates: the point set plus the claims a reader can re-check
from the points alone.

    {
      "schema": 1,
      "field": {"h": 6, "modulus": "5b"},
      "points": [["0", "1", "3a"], ...],
      "claims": {"t": 8, "nucleus": ["0", "0", "1"],
                 "elation_line": ["1", "0", "0"], "subgroup": ["20", "11", ...],
                 "family": "q8", "parameters": {...}, "stabilizer_order": null},
      "provenance": "construct --family q8 --q 64 ..."
    }

Elements are lowercase hex in the polynomial basis of the stated modulus.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import f2linalg
import plane
from arcs import KMArc, VerificationReport, verify_km
from gf2e import FieldCtx
from symmetry import elation_subgroup, first_elation_line, stabilizer

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


class CertificateError(ValueError):
    """Unreadable or structurally invalid certificate."""


@dataclass
class ArcCertificate:
    ctx: FieldCtx
    points: List[plane.Triple]
    claims: Dict[str, Any] = field(default_factory=dict)
    provenance: str = ""

    def arc(self) -> KMArc:
        return KMArc(self.ctx, self.points)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "field": self.ctx.to_dict(),
            "points": [plane.triple_hex(P) for P in self.points],
            "claims": self.claims,
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ArcCertificate":
        if data.get("schema") != SCHEMA_VERSION:
            raise CertificateError(f"unsupported schema {data.get('schema')!r}")
        try:
            ctx = FieldCtx.from_dict(data["field"])
            points = [plane.parse_triple(ctx, P) for P in data["points"]]
        except (KeyError, TypeError, ValueError) as e:
            raise CertificateError(f"malformed certificate: {e}") from e
        return cls(ctx, points, dict(data.get("claims", {})), str(data.get("provenance", "")))


def certificate_for(arc: KMArc, family: str = "", parameters: Optional[dict] = None,
                    provenance: str = "", stabilizer_order: Optional[int] = None) -> ArcCertificate:
    """Certificate whose claims are read off the arc itself."""
    rep = arc.report
    claims: Dict[str, Any] = {
        "t": rep.t,
        "nucleus": plane.triple_hex(rep.nucleus) if rep.nucleus else None,
        "elation_line": None,
        "subgroup": None,
        "family": family,
        "parameters": parameters or {},
        "stabilizer_order": stabilizer_order,
    }
    first = first_elation_line(arc) if rep.is_km else None
    if first is not None:
        line, S = first
        claims["elation_line"] = plane.triple_hex(line)
        claims["subgroup"] = S.to_hex()
    return ArcCertificate(arc.ctx, list(arc.points), claims, provenance)


def write_certificate(cert: ArcCertificate, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(cert.to_dict(), f, indent=2)
    logger.info("wrote certificate %s (%d points)", path, len(cert.points))


def read_certificate(path: Union[str, Path]) -> ArcCertificate:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (IOError, json.JSONDecodeError) as e:
        raise CertificateError(f"cannot read {path}: {e}") from e
    return ArcCertificate.from_dict(data)


@dataclass
class CertificateCheck:
    ok: bool
    report: VerificationReport
    mismatches: List[str] = field(default_factory=list)


def _check_elation_claims(arc: KMArc, claims: Dict[str, Any], mismatches: List[str]) -> None:
    """A null elation_line claims the arc has none; a null subgroup claims no S."""
    if "elation_line" not in claims and "subgroup" not in claims:
        return
    claimed = claims.get("elation_line")
    if claimed is None:
        first = first_elation_line(arc)
        if first is not None and "elation_line" in claims:
            mismatches.append(f"elation_line: claimed none, found {plane.triple_hex(first[0])}")
        S = first[1] if first else None
    else:
        S = elation_subgroup(arc, plane.parse_triple(arc.ctx, claimed))
        if S is None:
            mismatches.append(f"elation_line: {claimed} is not an elation line")
            return
    if "subgroup" not in claims:
        return
    if claims["subgroup"] is None:
        if S is not None:
            mismatches.append(f"subgroup: claimed none, found {S.to_hex()}")
    elif S is None or f2linalg.parse_subgroup(arc.ctx, claims["subgroup"]).basis != S.basis:
        found = S.to_hex() if S is not None else None
        mismatches.append(f"subgroup: claimed {claims['subgroup']}, found {found}")


def check_certificate(cert: ArcCertificate, check_stabilizer: bool = False) -> CertificateCheck:
    """Recompute every claim from the points; any disagreement fails the check."""
    ctx = cert.ctx
    report = verify_km(ctx, cert.points)
    out = CertificateCheck(report.is_km, report)
    if not report.is_km:
        out.mismatches.append(report.summary())
        return out
    claims = cert.claims

    def differs(name: str, actual: Any) -> None:
        if name in claims and claims[name] != actual:
            out.mismatches.append(f"{name}: claimed {claims[name]!r}, found {actual!r}")

    differs("t", report.t)
    differs("nucleus", plane.triple_hex(report.nucleus) if report.nucleus else None)

    arc = KMArc(ctx, cert.points, report)
    _check_elation_claims(arc, claims, out.mismatches)
    if check_stabilizer and claims.get("stabilizer_order") is not None:
        differs("stabilizer_order", stabilizer(arc).order)

    out.ok = not out.mismatches
    return out
