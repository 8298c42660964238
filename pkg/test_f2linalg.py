import itertools
import random
import sys

import config
import f2linalg
from errors import RankError
from gf2e import FieldCtx, linear_combination


def _enumerate_span(elems):
    out = {0}
    for e in elems:
        out |= {x ^ e for x in out}
    return out


def test_rref_is_canonical():
    ctx = FieldCtx.for_degree(6)
    rng = random.Random(config.SEED)
    for _ in range(300):
        elems = [rng.randrange(ctx.q) for _ in range(rng.randrange(1, 5))]
        S = f2linalg.span(ctx, elems)
        mixed = [elems[0]] + [e ^ elems[0] for e in elems[1:]]
        assert f2linalg.span(ctx, mixed).basis == S.basis
        assert set(S.elements()) == _enumerate_span(elems)
        pivots = [b.bit_length() for b in S.basis]
        assert pivots == sorted(pivots, reverse=True)


def test_span_membership_and_independence():
    ctx = FieldCtx.for_degree(5)
    assert f2linalg.span(ctx, []).rank == 0
    assert f2linalg.span(ctx, [7, 7]).rank == 1
    S = f2linalg.span(ctx, [3, 5])
    assert S.size == 4
    assert f2linalg.contains(S, 0)
    assert f2linalg.contains(S, 3 ^ 5)
    assert not f2linalg.contains(S, 1)
    assert f2linalg.independent([1, 2, 4])
    assert not f2linalg.independent([3, 5, 6])
    assert not f2linalg.independent([0])


def test_subgroup_counts():
    """Gaussian binomials [5,3]_2 = 155 and [4,2]_2 = 35."""
    for h, r, n in ((5, 3, 155), (4, 2, 35), (6, 1, 63)):
        subs = f2linalg.subgroups_of_rank(FieldCtx.for_degree(h), r)
        assert len(subs) == n
        assert len({S.basis for S in subs}) == n
        assert all(S.rank == r for S in subs)


def test_reduce_gives_least_coset_element():
    ctx = FieldCtx.for_degree(5)
    for S in f2linalg.subgroups_of_rank(ctx, 2)[:40]:
        elems = S.elements()
        for x in range(ctx.q):
            assert S.reduce(x) == min(x ^ s for s in elems)
            assert f2linalg.coset_leader(S, x) == S.reduce(x)


def test_trace_kernel_matches_enumeration():
    for h in range(3, 7):
        ctx = FieldCtx.for_degree(h)
        rng = random.Random(config.SEED + h)
        for _ in range(20):
            elems = [rng.randrange(1, ctx.q) for _ in range(rng.randrange(1, 4))]
            K = f2linalg.trace_kernel(ctx, elems)
            expected = {x for x in range(ctx.q) if all(ctx.trace(ctx.mul(a, x)) == 0 for a in elems)}
            assert set(K.elements()) == expected
            rank = len(f2linalg.rref(elems))
            assert K.size == 1 << (h - rank)


def test_trace_dual_is_an_involution():
    ctx = FieldCtx.for_degree(6)
    for r in range(ctx.h + 1):
        for S in f2linalg.subgroups_of_rank(ctx, r)[:25]:
            D = f2linalg.trace_dual(S)
            assert D.rank == ctx.h - r
            assert f2linalg.trace_dual(D).basis == S.basis


def test_solve_trace_system():
    ctx = FieldCtx.for_degree(7)
    alphas = [1, 2, 4]
    for targets in itertools.product((0, 1), repeat=3):
        x = f2linalg.solve_trace_system(ctx, alphas, targets)
        assert [ctx.trace(ctx.mul(a, x)) for a in alphas] == list(targets)
        sols = [y for y in range(ctx.q)
                if [ctx.trace(ctx.mul(a, y)) for a in alphas] == list(targets)]
        assert x == min(sols)
    for bad in ([1, 2, 3], [5] * 8):
        try:
            f2linalg.solve_trace_system(ctx, bad, [0] * len(bad))
        except RankError:
            continue
        raise AssertionError(f"{bad} accepted")


def test_coordinates():
    ctx = FieldCtx.for_degree(6)
    basis = [0b1, 0b110, 0b101000]
    for coeffs in itertools.product((0, 1), repeat=3):
        x = linear_combination(coeffs, basis)
        assert f2linalg.coordinates(basis, x) == coeffs
    assert f2linalg.coordinates(basis, 0b10) is None
    try:
        f2linalg.coordinates([1, 1], 1)
    except RankError:
        pass
    else:
        raise AssertionError("dependent basis accepted")


def test_is_coset_against_enumeration():
    ctx = FieldCtx.for_degree(4)
    S = f2linalg.span(ctx, [0b11, 0b1000])
    for v in range(ctx.q):
        coset = [v ^ s for s in S.elements()]
        assert f2linalg.is_coset(coset, S)
        assert not f2linalg.is_coset(coset[:-1] + [coset[0] ^ 1], S)
    assert f2linalg.is_coset([], S)
    assert not f2linalg.is_coset([0, 1, 2], S)


def test_scalars_fixing_a_codimension_two_subgroup_lie_in_f4():
    for h in (4, 6):
        ctx = FieldCtx.for_degree(h)
        fixed = 0
        for S in f2linalg.subgroups_of_rank(ctx, h - 2):
            for alpha in range(2, ctx.q):
                if f2linalg.scale(S, alpha).basis == S.basis:
                    assert ctx.mul(alpha, alpha) == alpha ^ 1, (h, S, alpha)
                    fixed += 1
        assert fixed > 0


def test_frobenius_closure_and_images():
    ctx = FieldCtx.for_degree(6)
    omega = ctx.exp(21)  # order 3
    F4 = f2linalg.frobenius_closure(ctx, [omega])
    assert set(F4.elements()) == set(ctx.subfield(2))
    F8 = f2linalg.span(ctx, ctx.subfield(3))
    T = f2linalg.join(F4, F8)
    assert T.rank == 4
    assert f2linalg.frobenius_image(T, 1).basis == T.basis
    assert f2linalg.scale(F8, ctx.exp(9)).basis == F8.basis


def test_linear_kernel():
    assert f2linalg.linear_kernel([1, 1, 2], 3) == (0b011,)
    assert f2linalg.linear_kernel([1, 2, 4], 3) == ()
    ctx = FieldCtx.for_degree(8)
    k = 1
    images = [ctx.trace_rel(ctx.mul(k, 1 << j), 4) for j in range(8)]
    K = f2linalg.Subgroup(ctx, f2linalg.linear_kernel(images, 8))
    assert set(K.elements()) == {x for x in range(ctx.q) if ctx.trace_rel(x, 4) == 0}


def test_kernel_of_rows():
    rows = [0b101, 0b011]
    K = f2linalg.kernel(rows, 3)
    for y in _enumerate_span(K):
        assert all(bin(r & y).count("1") % 2 == 0 for r in rows)
    assert len(K) == 1


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
