import contextlib
import io
import json
import os
import sys
import tempfile

import plane
from certificates import certificate_for, check_certificate, read_certificate
from constructions import OPolynomial, construct_km, construct_q8, regular_hyperoval
from gf2e import FieldCtx
from main import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, main, report_rows
from symmetry import translation_lines


def _run(*argv):
    """(exit code, stdout) of one CLI call."""
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        code = main(list(argv))
    return code, out.getvalue()


def test_construct_and_verify_round_trip():
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "q8.json")
        code, _ = _run("construct", "--family", "q8", "--q", "32", "--alphas", "1,2,4", "--out", path)
        assert code == EXIT_OK
        cert = read_certificate(path)
        assert cert.claims["t"] == 4
        assert cert.claims["elation_line"] is not None
        assert len(cert.claims["subgroup"]) == 2
        assert cert.claims["family"] == "q8"
        assert "construct" in cert.provenance
        code, out = _run("verify", path)
        assert code == EXIT_OK and "✅" in out


def test_tampered_certificates_fail():
    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "km.json")
        assert _run("construct", "--family", "km", "--q", "16", "--i", "2", "--out", path)[0] == EXIT_OK
        with open(path, encoding="utf-8") as f:
            data = json.load(f)

        dropped = dict(data, points=data["points"][1:])
        bad_claim = dict(data, claims=dict(data["claims"], t=8))
        for i, variant in enumerate((dropped, bad_claim)):
            p = os.path.join(d, f"bad{i}.json")
            with open(p, "w", encoding="utf-8") as f:
                json.dump(variant, f)
            assert _run("verify", p)[0] == EXIT_FAIL

        garbage = os.path.join(d, "garbage.json")
        with open(garbage, "w", encoding="utf-8") as f:
            f.write("{not json")
        assert _run("verify", garbage)[0] == EXIT_USAGE
        assert _run("verify", os.path.join(d, "missing.json"))[0] == EXIT_USAGE


def test_usage_errors():
    assert _run("construct", "--family", "q16", "--q", "32")[0] == EXIT_USAGE
    assert _run("construct", "--family", "q8", "--q", "12")[0] == EXIT_USAGE
    assert _run("construct", "--family", "q8", "--q", "32", "--alphas", "1,2")[0] == EXIT_USAGE
    assert _run("construct", "--family", "q8", "--q", "32", "--alphas", "1,2,3")[0] == EXIT_USAGE
    assert _run("construct", "--family", "nope")[0] == EXIT_USAGE
    assert _run()[0] == EXIT_USAGE


def test_inspection_commands():
    with tempfile.TemporaryDirectory() as d:
        km = os.path.join(d, "km.json")
        q8 = os.path.join(d, "q8.json")
        assert _run("construct", "--family", "km", "--q", "16", "--out", km)[0] == EXIT_OK
        assert _run("construct", "--family", "q8", "--q", "32", "--out", q8)[0] == EXIT_OK

        code, out = _run("translation", km)
        assert code == EXIT_OK and "translation line" in out
        code, out = _run("translation", q8)
        assert code == EXIT_OK and "no translation line" in out

        code, out = _run("elation", km, "--json")
        assert code == EXIT_OK and json.loads(out)["is_elation_arc"]

        code, out = _run("stabilizer", q8, "--json")
        assert code == EXIT_OK and json.loads(out)["order"] == 16

        assert _run("--seed", "7", "equiv", km)[0] == EXIT_OK
        assert _run("equiv", km, km)[0] == EXIT_OK


def test_subcommand_budget_and_translation_line():
    with tempfile.TemporaryDirectory() as d:
        km = os.path.join(d, "km.json")
        q8 = os.path.join(d, "q8.json")
        ls = os.path.join(d, "lunelli.json")
        assert _run("construct", "--family", "km", "--q", "16", "--out", km)[0] == EXIT_OK
        assert _run("construct", "--family", "q8", "--q", "32", "--out", q8)[0] == EXIT_OK
        assert _run("construct", "--family", "lunelli-sce", "--out", ls)[0] == EXIT_OK

        assert _run("stabilizer", ls, "--budget", "5")[0] == EXIT_BUDGET
        assert _run("--budget", "5", "stabilizer", ls, "--budget", "100000000")[0] == EXIT_OK
        assert _run("equiv", ls, ls, "--budget", "0")[0] == EXIT_BUDGET

        km_arc = read_certificate(km).arc()
        axis = translation_lines(km_arc)[0]
        code, out = _run("translation", km, "--line", ",".join(plane.triple_hex(axis)))
        assert code == EXIT_OK and "translation line" in out

        q8_arc = read_certificate(q8).arc()
        secant = q8_arc.t_secants[0]
        assert _run("translation", q8, "--line", ",".join(plane.triple_hex(secant)))[0] == EXIT_FAIL
        tangent = next(l for l in plane.all_lines(q8_arc.ctx)
                       if sum(plane.incident(q8_arc.ctx, P, l) for P in q8_arc.points) != q8_arc.t)
        assert _run("translation", q8, "--line", ",".join(plane.triple_hex(tangent)))[0] == EXIT_USAGE
        assert _run("translation", q8, "--line", "1,0")[0] == EXIT_USAGE


def test_equiv_exit_codes():
    with tempfile.TemporaryDirectory() as d:
        reg = os.path.join(d, "regular.json")
        ls = os.path.join(d, "lunelli.json")
        assert _run("construct", "--family", "regular", "--q", "16", "--out", reg)[0] == EXIT_OK
        assert _run("construct", "--family", "lunelli-sce", "--out", ls)[0] == EXIT_OK
        assert _run("--budget", "1000", "equiv", reg, ls)[0] == EXIT_BUDGET
        assert _run("equiv", reg, ls)[0] == EXIT_FAIL


def test_admissible_and_report():
    code, out = _run("admissible", "64", "--json")
    assert code == EXIT_OK and len(json.loads(out)) == 1
    code, out = _run("admissible", "32", "--json")
    assert code == EXIT_OK and json.loads(out) == []
    code, out = _run("report", "--q", "16", "--json")
    assert code == EXIT_OK
    rows = {r["family"]: r for r in json.loads(out)}
    assert rows["km"]["translation"] is True
    assert rows["regular"]["elation"] is None
    assert all(r["km"] for r in rows.values())


def test_report_rows_and_certificates_in_process():
    rows = report_rows([32])
    assert [r["family"] for r in rows] == ["regular", "q4", "q8"]
    arc = construct_q8(FieldCtx.for_degree(6), (1, 2, 4))
    cert = certificate_for(arc, "q8", {"alphas": ["1", "2", "4"]})
    assert check_certificate(cert).ok
    cert.claims["subgroup"] = ["1"]
    assert not check_certificate(cert).ok


def test_null_elation_claims_are_rechecked():
    km = construct_km(4, 2, OPolynomial.translation(FieldCtx.for_degree(2), 1))
    H = regular_hyperoval(FieldCtx.for_degree(4))
    for arc in (km, H):
        cert = certificate_for(arc, "x")
        assert cert.claims["elation_line"] is not None
        assert check_certificate(cert).ok

        no_line = certificate_for(arc, "x")
        no_line.claims["elation_line"] = None
        no_line.claims["subgroup"] = None
        result = check_certificate(no_line)
        assert not result.ok
        assert any(m.startswith("elation_line") for m in result.mismatches)

        no_group = certificate_for(arc, "x")
        no_group.claims["subgroup"] = None
        assert not check_certificate(no_group).ok

    off = certificate_for(km, "x")
    off.claims["elation_line"] = plane.triple_hex(next(
        l for l in plane.all_lines(km.ctx) if l not in km.t_secants))
    assert not check_certificate(off).ok


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_") and callable(fn):
            try:
                fn()
                print(f"✅ {name}")
            except Exception as e:
                failed += 1
                print(f"❌ {name}: {e!r}")
    sys.exit(1 if failed else 0)
