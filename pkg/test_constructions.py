import sys

import config
import f2linalg
import plane
from constructions import (AdmissibleTuple, OPolynomial, admissible_search, build_corpus,
                           complete_on_x0, construct_gw, construct_km, construct_q4,
                           construct_q8, construct_q16, direct_complement, lunelli_sce,
                           off_nucleus_hyperoval, opolynomial_from_hyperoval, q4_gamma,
                           q8_witness_same_span, q16_elation_group, q16_s0,
                           q16_witness_same_span, regular_hyperoval, scale_alphas,
                           scaled_frobenius_witness, select_alpha_q16, span_orbit_scan,
                           valid_alpha_vectors)
from errors import AdmissibilityError, ConstructionError
from gf2e import FieldCtx, linear_combination
from symmetry import Collineation, is_elation_arc

F4 = FieldCtx.for_degree(2)
F16 = FieldCtx.for_degree(4)
F32 = FieldCtx.for_degree(5)
F64 = FieldCtx.for_degree(6)
F128 = FieldCtx.for_degree(7)
F256 = FieldCtx.for_degree(8)


def _skip_slow(name):
    if not config.RUN_SLOW_TESTS:
        print(f"⏭️  {name} skipped (set KMARC_SLOW_TESTS=1)")
        return True
    return False


def _raises(exc, fn, *args, **kwargs):
    try:
        fn(*args, **kwargs)
    except exc as e:
        return e
    raise AssertionError(f"{fn.__name__}{args} did not raise {exc.__name__}")


def _maps_onto(g, X, Y):
    return set(g.apply_points(X.points)) == set(Y.points)


def _q64_tuple():
    return admissible_search(F64)[0].admissible_tuple


# ---------------------------------------------------------------------------
# Hyperovals
# ---------------------------------------------------------------------------

def test_opolynomials():
    g = OPolynomial.translation(F16, 1)
    assert all(g(x) == F16.mul(x, x) for x in range(16))
    assert opolynomial_from_hyperoval(g.hyperoval()).table == g.table
    assert OPolynomial.translation(F32, 2).hyperoval().is_hyperoval
    _raises(ConstructionError, OPolynomial.translation, F16, 2)
    _raises(ConstructionError, OPolynomial.explicit, F4, [0, 0, 0, 0])
    _raises(ConstructionError, OPolynomial.explicit, F4, [0, 1])
    L = OPolynomial.lunelli_sce()
    assert L.ctx.h == 4 and L.describe()["kind"] == "lunelli_sce"
    H = L.hyperoval()
    assert (0, 1, 0) in H and (0, 0, 1) in H


def test_lunelli_sce_hyperoval():
    H = lunelli_sce()
    assert H.report.is_km and H.t == 2 and len(H) == 18
    assert plane.NUCLEUS in H


def test_completion_parity():
    ctx = F16
    affine = [(1, ctx.mul(x, x), x) for x in range(ctx.q)]
    assert complete_on_x0(ctx, affine) == [(0, 0, 1), (0, 1, 0)]
    _raises(ConstructionError, complete_on_x0, ctx, [(1, 0, 0)])
    _raises(ConstructionError, complete_on_x0, ctx, [(0, 1, 0)])


def test_direct_complement():
    k, I = direct_complement(F256, 4)
    assert F256.trace_rel(k, 4) == 1
    assert I.rank == 4
    assert all(F256.trace_rel(F256.mul(k, x), 4) == 0 for x in I.elements())
    assert set(I.elements()) & set(F256.subfield(4)) == {0}


# ---------------------------------------------------------------------------
# Lifting constructions
# ---------------------------------------------------------------------------

def test_construct_km_types():
    for h, i, small in ((4, 2, F4), (6, 3, FieldCtx.for_degree(3)), (6, 4, F4)):
        arc = construct_km(h, i, OPolynomial.translation(small, 1))
        assert arc.t == 1 << i and arc.q == 1 << h
        assert arc.nucleus == plane.NUCLEUS
        assert arc.report.secant_count == arc.q // arc.t + 1
    arc = construct_km(8, 4, OPolynomial.lunelli_sce())
    assert arc.t == 16 and arc.report.is_km
    g = OPolynomial.translation(F4, 1)
    _raises(ConstructionError, construct_km, 5, 3, g)
    _raises(ConstructionError, construct_km, 6, 3, g)
    _raises(ConstructionError, construct_km, 4, 0, OPolynomial.translation(F16, 1))


def test_construct_gw_variants():
    A = construct_gw(regular_hyperoval(F4), "A", 2)
    assert A.q == 16 and A.t == 4
    B = construct_gw(off_nucleus_hyperoval(F4), "b", 2)
    assert B.q == 16 and B.t == 8
    km = construct_km(4, 2, OPolynomial.translation(F4, 1))
    C = construct_gw(km, "C", 2)
    assert C.q == 256 and C.t == 64
    _raises(ConstructionError, construct_gw, off_nucleus_hyperoval(F4), "A", 2)
    _raises(ConstructionError, construct_gw, regular_hyperoval(F4), "B", 2)
    _raises(ConstructionError, construct_gw, regular_hyperoval(F4), "C", 2)
    _raises(ConstructionError, construct_gw, regular_hyperoval(F4), "D", 2)
    _raises(ConstructionError, construct_gw, regular_hyperoval(F4), "A", 1)
    _raises(ConstructionError, construct_gw, regular_hyperoval(F16), "A", 5)


def test_lifted_arcs_are_elation_arcs_on_x0():
    X0 = plane.X0
    for arc in (construct_km(4, 2, OPolynomial.translation(F4, 1)),
                construct_km(6, 3, OPolynomial.translation(FieldCtx.for_degree(3), 1)),
                construct_gw(regular_hyperoval(F4), "A", 2),
                construct_gw(regular_hyperoval(FieldCtx.for_degree(3)), "A", 2)):
        rep = is_elation_arc(arc)
        assert rep.is_elation_arc
        assert X0 in dict(rep.elation_lines)


def test_variant_c_transfers_the_elation_line():
    X0 = plane.X0
    beta = 2
    translation_arc = construct_km(4, 2, OPolynomial.translation(F4, 1))
    other = construct_q4(F16, 4, beta)
    for H in (translation_arc, other):
        before = X0 in dict(is_elation_arc(H).elation_lines) if X0 in H.t_secants else False
        lifted = construct_gw(H, "C", 2)
        after = X0 in dict(is_elation_arc(lifted).elation_lines)
        assert before == after
    assert X0 in dict(is_elation_arc(construct_gw(translation_arc, "C", 2)).elation_lines)


def test_variant_b_of_a_q8_hyperoval_is_a_q8_arc():
    alphas = (1, 2, 4)
    lifted = construct_gw(construct_q8(F16, alphas), "B", 2)
    k, _ = direct_complement(F256, 4)
    e = F256.embedding(F16)
    direct = construct_q8(F256, [F256.mul(k, e[a]) for a in alphas])
    g = Collineation(F256, ((1, 0, 0), (0, F256.inv(k), 0), (0, 0, 1)), 0)
    assert lifted.t == direct.t == 32
    assert _maps_onto(g, direct, lifted)


def test_variant_a_of_lunelli_sce_is_a_q16_arc():
    k, _ = direct_complement(F256, 4)
    e = F256.embedding(F16)
    zeta = 2
    alphas = [F256.mul(k, e[F16.power(zeta, j)]) for j in (1, 2, 3)] + [k]
    lifted = construct_gw(lunelli_sce(), "A", 2)
    direct = construct_q16(F256, alphas)
    g = Collineation(F256, ((1, 0, 0), (0, k, 0), (0, 0, 1)), 0)
    assert lifted.t == direct.t == 16
    assert _maps_onto(g, lifted, direct)


# ---------------------------------------------------------------------------
# q/4, q/8, q/16 families
# ---------------------------------------------------------------------------

def test_q4_family():
    gamma, xi = q4_gamma(F16, 4, 2)
    assert gamma == F16.div(3, F16.mul(4, 2) ^ 1)
    assert xi == F16.mul(F16.mul(4, 2), gamma)
    for ctx in (FieldCtx.for_degree(3), F16, F32):
        for alpha, beta in ((2, 3), (4, 2), (5, 7)):
            if ctx.mul(alpha, beta) == 1:
                continue
            for a, b in ((0, 0), (1, 0), (0, 1), (1, 1)):
                arc = construct_q4(ctx, alpha, beta, a, b)
                assert arc.t == ctx.q // 4 and arc.report.is_km
    _raises(ConstructionError, construct_q4, F16, 1, 2)
    _raises(ConstructionError, construct_q4, F16, 2, F16.inv(2))
    _raises(ConstructionError, construct_q4, F4, 2, 3)
    _raises(ConstructionError, construct_q4, F16, 2, 3, 2, 0)


def test_q8_family():
    assert construct_q8(F16, (1, 2, 4)).is_hyperoval
    for ctx, t in ((F32, 4), (F64, 8), (F128, 16)):
        arc = construct_q8(ctx, (1, 2, 4))
        assert arc.t == t
        assert plane.X0 in dict(is_elation_arc(arc).elation_lines)
    _raises(ConstructionError, construct_q8, F32, (1, 2, 3))
    _raises(ConstructionError, construct_q8, F32, (1, 2))
    _raises(ConstructionError, construct_q8, FieldCtx.for_degree(3), (1, 2, 4))


def test_q16_at_16_is_lunelli_sce():
    assert construct_q16(F16, (2, 4, 8, 1)) == lunelli_sce()


def test_admissibility_invariants():
    assert _raises(AdmissibilityError, AdmissibleTuple, F64, (1, 2, 4)).invariant == "length"
    assert _raises(AdmissibilityError, AdmissibleTuple, F64, (1, 2, 3, 1)).invariant == "independence"
    assert _raises(AdmissibilityError, AdmissibleTuple, F64, (2, 4, 8, 1)).invariant == "divisibility"
    e = _raises(AdmissibilityError, construct_q16, FieldCtx.for_degree(3), (1, 2, 4, 3))
    assert e.invariant == "field size"
    assert isinstance(e, ConstructionError) and isinstance(e, ValueError)
    for S in f2linalg.subgroups_of_rank(F32, 4):
        assert _raises(AdmissibilityError, construct_q16, F32, S.basis).invariant == "divisibility"


def test_q16_family_at_64():
    tup = _q64_tuple()
    arc = construct_q16(F64, tup.alphas)
    assert arc.t == 4
    assert plane.X0 in dict(is_elation_arc(arc).elation_lines)
    vectors = valid_alpha_vectors(F64, tup.alphas)
    assert len(vectors) == 8
    s0 = q16_s0(F64, tup.alphas)
    assert len(s0) == F64.q // 16
    for b in vectors:
        assert q16_s0(F64, tup.alphas, linear_combination(b, tup.alphas)) == s0
    assert select_alpha_q16(F64, tup.alphas) == tup.alpha


def test_q16_elation_group_stabilizes():
    tup = _q64_tuple()
    arc = construct_q16(F64, tup.alphas)
    group = q16_elation_group(tup)
    assert len(group) == 8
    assert len({g.matrix for g in group}) == 8
    for g in group:
        assert g.is_elation()
        assert _maps_onto(g, arc, arc)


def test_q16_family_at_128():
    for cls in admissible_search(F128):
        arc = construct_q16(F128, cls.admissible_tuple.alphas)
        assert arc.t == 8 and arc.report.is_km


# ---------------------------------------------------------------------------
# Same-span witnesses
# ---------------------------------------------------------------------------

def test_q8_same_span_witnesses():
    alphas = (1, 2, 4)
    arc = construct_q8(F64, alphas)
    for kind in ("add", "rotate"):
        new, g = q8_witness_same_span(F64, alphas, kind)
        assert f2linalg.span(F64, new).basis == f2linalg.span(F64, alphas).basis
        assert _maps_onto(g, arc, construct_q8(F64, new))
    _raises(ValueError, q8_witness_same_span, F64, alphas, "swap")


def test_q16_same_span_witnesses():
    tup = _q64_tuple()
    arc = construct_q16(F64, tup.alphas)
    for kind in ("add", "rotate"):
        new, g = q16_witness_same_span(F64, tup.alphas, kind)
        assert new[3] == tup.alphas[3]
        assert _maps_onto(g, arc, construct_q16(F64, new))


def test_scaled_frobenius_witness():
    k, phi = F64.exp(5), 2
    g = scaled_frobenius_witness(F64, k, phi)
    alphas = (1, 2, 4)
    assert _maps_onto(g, construct_q8(F64, alphas),
                      construct_q8(F64, scale_alphas(F64, alphas, k, phi)))
    tup = _q64_tuple()
    assert _maps_onto(g, construct_q16(F64, tup.alphas),
                      construct_q16(F64, scale_alphas(F64, tup.alphas, k, phi)))
    _raises(ValueError, scaled_frobenius_witness, F64, 0, 1)


# ---------------------------------------------------------------------------
# Admissible search
# ---------------------------------------------------------------------------

def test_admissible_search_small_fields():
    assert admissible_search(FieldCtx.for_degree(3)) == []
    assert admissible_search(F32) == []
    classes = admissible_search(F16)
    assert len(classes) == 1
    assert set(classes[0].representative.elements()) == set(range(16))
    classes = admissible_search(F64)
    assert len(classes) == 1
    F4_, F8_ = (f2linalg.span(F64, F64.subfield(d)) for d in (2, 3))
    join = f2linalg.join(F4_, F8_)
    assert join.basis in {T.basis for T in classes[0].members}
    assert classes[0].to_dict()["members"] == len(classes[0].members)


def test_admissible_search_128_has_two_classes():
    classes = admissible_search(F128)
    assert len(classes) == 2
    p = lambda e: F128.power(2, e)
    T1 = f2linalg.span(F128, [p(1), p(2), p(4), 1])
    T2 = f2linalg.span(F128, [p(11), p(22), p(44), 1])
    owner = [{T.basis for T in c.members} for c in classes]
    i1 = next(i for i, m in enumerate(owner) if T1.basis in m)
    i2 = next(i for i, m in enumerate(owner) if T2.basis in m)
    assert i1 != i2
    assert span_orbit_scan(T1, T2) == []
    assert span_orbit_scan(T1, T1)


def test_admissible_search_256():
    classes = admissible_search(F256)
    assert len(classes) == 1
    assert f2linalg.span(F256, F256.subfield(4)).basis in {T.basis for T in classes[0].members}


# ---------------------------------------------------------------------------
# Corpus
# ---------------------------------------------------------------------------

def test_corpus_at_16_and_32():
    entries = build_corpus([16, 32])
    fams16 = [e.family for e in entries if e.arc.q == 16]
    fams32 = [e.family for e in entries if e.arc.q == 32]
    assert fams16 == ["regular", "lunelli-sce", "km", "gw-a", "gw-b", "q4", "q8", "q16"]
    assert fams32 == ["regular", "q4", "q8"]
    assert all(e.arc.report.is_km for e in entries)
    types = {e.family: e.arc.t for e in entries if e.arc.q == 16}
    assert types == {"regular": 2, "lunelli-sce": 2, "km": 4, "gw-a": 4, "gw-b": 8,
                     "q4": 4, "q8": 2, "q16": 2}
    _raises(ValueError, build_corpus, [12])


def test_corpus_census():
    for e in build_corpus([8, 16, 32, 64, 128]):
        arc, rep = e.arc, e.arc.report
        assert rep.is_km, (e.family, arc.q)
        assert len(arc) == arc.q + arc.t
        if arc.t > 2:
            assert arc.nucleus == plane.NUCLEUS
            assert rep.secant_count == arc.q // arc.t + 1


def test_corpus_at_256():
    if _skip_slow("test_corpus_at_256"):
        return
    entries = build_corpus([256])
    assert "gw-c" in [e.family for e in entries]
    assert all(e.arc.report.is_km for e in entries)


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
