import random
from fractions import Fraction as F

import pytest

from lcivt.hensel import poly_eval, poly_mul
from lcivt.lcnum import LC, LcNumber, eps
from lcivt.pseries import (
    PolyMulSeries,
    PolySeries,
    RatFunSeries,
    TermRuleSeries,
    evaluate,
    partial_sum,
)
from lcivt.rootfind import (
    RootReport,
    count_zeros,
    ivt_root,
    monic_real_roots,
    multiplicity_at,
    poly_roots,
    target_extreme_kind,
    track_extremes,
    track_partial_sum_zeros,
)

from conftest import E, L

ONE = LcNumber.one(LC)
ZERO = LcNumber.zero(LC)


def num(q):
    return LcNumber.from_scalar(LC, q)


def binomial_sqrt(u, order):
    acc, pw, coeff = ONE, ONE, F(1)
    for k in range(1, order):
        coeff *= (F(1, 2) - (k - 1)) / k
        pw = pw * u
        acc = acc + pw * coeff
    return acc


def double_zero_series():
    num_ = [num(2), -(eps() * 2) - eps(2)]
    den = [ONE, -eps()]
    return PolyMulSeries([1, -2, 1], RatFunSeries(LC, num_, den))


# ------------------------------------------------------------- monic poly roots


def test_perturbed_square_root():
    p = [-(ONE + eps()), ZERO, ONE]
    reports = monic_real_roots(p, ZERO, num(2), E(8))
    assert len(reports) == 1
    r = reports[0]
    assert r.multiplicity == 1
    want = binomial_sqrt(eps(), 10)  # sqrt(1+eps) = 1 + eps/2 - eps^2/8 + ...
    assert (r.root - want).is_zero_below(E(8))


def test_exact_double_root():
    p = [ONE, -2 * ONE, ONE]
    reports = monic_real_roots(p, ZERO, num(2), E(8))
    assert [(str(r.root), r.multiplicity, r.exact) for r in reports] == [("1", 2, True)]


def test_ramified_root():
    p = [-eps(), ZERO, ONE]
    reports = monic_real_roots(p, ZERO, ONE, E(8))
    assert len(reports) == 1
    assert str(reports[0].root) == "eps^(1/2)"
    assert reports[0].multiplicity == 1


def test_complex_pair_is_dropped():
    assert poly_roots([eps(), ZERO, ONE], E(8)) == []


def test_polygon_completeness_planted():
    rng = random.Random(3)
    cut = E(10)
    for _ in range(20):
        roots = []
        seen = set()
        for _ in range(rng.randint(2, 4)):
            q = F(rng.randint(-6, 6), rng.choice((1, 2)))
            e = rng.randint(0, 3)
            r = rng.randint(-2, 2)
            key = (q, e, r)
            if key in seen:
                continue
            seen.add(key)
            roots.append(num(q) + LcNumber.monomial(E(e), r) if e else num(q + r))
        # drop exact duplicates
        uniq = []
        for c in roots:
            if not any((c - d).is_exact_zero for d in uniq):
                uniq.append(c)
        poly = [ONE]
        for c in uniq:
            poly = poly_mul(poly, [-c, ONE])
        hits = poly_roots(poly, cut)
        assert sum(h.multiplicity for h in hits) == len(uniq)
        for c in uniq:
            assert any((h.value - c).is_zero_below(cut) for h in hits)


def test_deep_pair_merges_unresolved():
    c = ONE + eps()
    deep = c + LcNumber.monomial(E(30), 1)
    poly = poly_mul([-c, ONE], [-deep, ONE])
    hits = poly_roots(poly, E(10))
    assert len(hits) == 1
    assert hits[0].multiplicity == 2
    assert hits[0].unresolved


# -------------------------------------------------------------------- ivt_root


def fixed_point_oracle(depth):
    """c with c = 1 - eps*c^2, iterated with plain arithmetic only."""
    c = ONE
    for _ in range(depth):
        c = (ONE - eps() * c * c).truncate(E(depth))
    return c


def test_ivt_on_quadratic_series():
    s = PolySeries(LC, [-ONE, ONE, eps()])
    rep = ivt_root(s, ZERO, num(F(3, 2)), E(8))
    want = fixed_point_oracle(12)
    assert (rep.root - want).is_zero_below(E(8))
    assert rep.multiplicity == 1
    assert rep.residual_valuation == E(8)
    assert rep.certificate["endpoint_signs"] == (-1, 1)


def test_ivt_on_square_root_series():
    s = PolySeries(LC, [-(ONE + eps()), ZERO, ONE])
    rep = ivt_root(s, ZERO, num(2), E(8))
    assert (rep.root - binomial_sqrt(eps(), 10)).is_zero_below(E(8))


def test_ivt_rejects_no_sign_change():
    s = PolySeries(LC, [ONE, ZERO, ONE])
    with pytest.raises(ValueError, match="sign change"):
        ivt_root(s, ZERO, ONE, E(6))


def test_ivt_alternating_square_series():
    s = TermRuleSeries(LC, -1, [1], ("poly", [0, 0, 1]))
    cut = E(12)
    rep = ivt_root(s, eps(-4), eps(-6), cut)
    assert evaluate(s, rep.root, cut).is_zero_below(cut)
    assert rep.root.compare(eps(-4)) > 0
    assert rep.root.compare(eps(-6)) < 0
    assert rep.root.valuation() == E(-5)


# ------------------------------------------------------------------ count_zeros


def test_count_zeros_examples():
    s = PolySeries(LC, [-ONE, ONE, eps()])
    assert count_zeros(s, ZERO, num(2), E(8))[0] == 1
    assert count_zeros(s, num(F(3, 2)), num(2), E(8))[0] == 0
    planted = PolyMulSeries([ONE, -2 * ONE - eps(), ONE], PolySeries(LC, [ONE]))
    n, reports = count_zeros(planted, ZERO, num(2), E(8))
    assert n == 2
    assert all(r.multiplicity == 1 for r in reports)


def test_count_zeros_matches_sign_alternations():
    # simple-root series: the count equals the sign alternations of S over a
    # refinement adapted to the isolated roots
    u = PolySeries(LC, [ONE, eps(), eps(2)])
    planted = PolyMulSeries(
        poly_mul([-num(F(1, 3)), ONE],
                 poly_mul([-ONE - eps(), ONE], [-num(F(7, 4)), ONE])), u)
    a, b = ZERO, num(2)
    n, reports = count_zeros(planted, a, b, E(10))
    assert n == 3
    cuts = [a]
    ordered = sorted(reports, key=lambda r: r.root.standard_part().as_fraction())
    for first, second in zip(ordered, ordered[1:]):
        mid = (first.root + second.root) * F(1, 2)
        cuts.append(mid)
    cuts.append(b)
    signs = [evaluate(planted, x, E(6)).sign() for x in cuts]
    alternations = sum(1 for i in range(len(signs) - 1) if signs[i] != signs[i + 1])
    assert alternations == n


# -------------------------------------------------------------- multiplicity_at


def test_multiplicity_of_double_zero():
    t = double_zero_series()
    assert multiplicity_at(t, ONE, E(10)) == 2


def test_multiplicity_simple_and_triple():
    s = PolySeries(LC, [-ONE, ONE, eps()])
    root = ivt_root(s, ZERO, num(F(3, 2)), E(10))
    assert multiplicity_at(s, root.root, E(10)) == 1
    c0 = num(F(1, 2))
    lin = [-c0, ONE]
    cube = poly_mul(poly_mul(lin, lin), lin)
    s3 = PolySeries(LC, poly_mul(cube, [ONE, eps()]))
    assert multiplicity_at(s3, c0, E(10)) == 3


def test_multiplicity_rejects_non_root():
    s = PolySeries(LC, [-ONE, ONE, eps()])
    with pytest.raises(ValueError, match="not a certified root"):
        multiplicity_at(s, num(7), E(8))


def test_odd_order_iff_sign_change():
    for mult, changes in ((1, True), (2, False), (3, True)):
        c0 = ONE
        poly = [ONE]
        for _ in range(mult):
            poly = poly_mul(poly, [-c0, ONE])
        s = PolySeries(LC, poly_mul(poly, [ONE, eps()]))
        assert multiplicity_at(s, c0, E(10)) == mult
        delta = num(F(1, 4))
        sa = evaluate(s, c0 - delta, E(6)).sign()
        sb = evaluate(s, c0 + delta, E(6)).sign()
        assert (sa * sb == -1) == changes


# --------------------------------------------------------------------- tracking


def test_track_zeros_quadratic_series():
    s = PolySeries(LC, [-ONE, ONE, eps()])
    target = ivt_root(s, ZERO, num(F(3, 2)), E(10))
    records = track_partial_sum_zeros(s, target, [1, 2], (ZERO, num(F(3, 2))))
    by_n = {r.n: r for r in records}
    (kind, loc, dist), = by_n[1].items
    assert kind == "zero" and str(loc) == "1"
    assert dist == E(1)
    (kind, loc, dist), = by_n[2].items
    assert dist is None  # coincides with the target below the cutoff


def test_track_zeros_planted_strictly_increasing():
    target_root = ONE + eps()
    u = TermRuleSeries(LC, 1, [1], ("poly", [0, 2]))  # sum eps^(2n) X^n
    s = PolyMulSeries([-target_root, ONE], u)
    target = ivt_root(s, num(F(1, 2)), num(F(3, 2)), E(12))
    records = track_partial_sum_zeros(s, target, [2, 4, 6],
                                      (num(F(1, 2)), num(F(3, 2))))
    dists = []
    for rec in records:
        vals = [dv for _, _, dv in rec.items if dv is not None]
        assert vals
        dists.append(min(vals))
        # oracle: plain iteration solves S_n directly, no polygon machinery
        coeffs = partial_sum(s, rec.n)
        x = ONE
        for _ in range(14):
            fx = poly_eval(coeffs, x)
            dx = poly_eval([coeffs[i] * i for i in range(1, len(coeffs))], x)
            x = (x - fx.div(dx, E(14))).truncate(E(14))
        oracle_dist = (x - target.root).valuation()
        assert min(vals) == oracle_dist
    assert dists == sorted(dists)
    assert len(set(dists)) == len(dists)


def test_track_zeros_polynomial_terminates_exactly():
    s = PolySeries(LC, [-ONE, ONE, eps()])
    target = ivt_root(s, ZERO, num(F(3, 2)), E(10))
    records = track_partial_sum_zeros(s, target, [2], (ZERO, num(F(3, 2))))
    (kind, loc, dist), = records[0].items
    assert dist is None


def test_track_zeros_requires_odd_target():
    t = double_zero_series()
    fake = RootReport(root=ONE, multiplicity=2, residual_valuation=None,
                      interval=(ZERO, num(2)))
    with pytest.raises(ValueError, match="odd"):
        track_partial_sum_zeros(t, fake, [3], (ZERO, num(2)))


def test_track_extremes_double_zero():
    t = double_zero_series()
    target = RootReport(root=ONE, multiplicity=2, residual_valuation=None,
                        interval=(num(F(3, 4)), num(F(5, 4))))
    assert target_extreme_kind(t, target) == "min"
    window = (num(F(3, 4)), num(F(5, 4)))
    records = track_extremes(t, target, [5, 10], window)
    dists = []
    for rec in records:
        mins = [(loc, dv) for kind, loc, dv in rec.items if kind == "min"]
        assert mins
        loc, dv = mins[0]
        assert dv is not None and dv.sign() > 0
        dists.append(dv)
    assert dists[0].compare(dists[1]) <= 0
    # and the partial sums themselves have no root near 1
    for n in (5, 10):
        coeffs = partial_sum(t, n)
        hits = poly_roots(coeffs, E(12), window=window)
        hits = [h for h in hits
                if h.value.compare(window[0]) >= 0 and h.value.compare(window[1]) <= 0]
        assert hits == []


def test_track_extremes_exact_square():
    s = PolySeries(LC, [ONE, -2 * ONE, ONE])
    target = RootReport(root=ONE, multiplicity=2, residual_valuation=None,
                        interval=(ZERO, num(2)))
    records = track_extremes(s, target, [2, 3], (ZERO, num(2)))
    for rec in records:
        (kind, loc, dist), = rec.items
        assert kind == "min"
        assert str(loc) == "1"
        assert dist is None


def test_track_extremes_requires_even_target():
    s = PolySeries(LC, [-ONE, ONE, eps()])
    rep = ivt_root(s, ZERO, num(F(3, 2)), E(8))
    with pytest.raises(ValueError, match="even"):
        track_extremes(s, rep, [3], (ZERO, num(2)))


# ------------------------------------------------------------ hahn-mode engine


def test_hahn_pipeline_end_to_end():
    from lcivt.hensel import n_poly_root
    from lcivt.lcnum import HAHN, Exponent, eps_n

    one = LcNumber.one(HAHN)
    zero = LcNumber.zero(HAHN)
    cut = Exponent.hahn({1: 6})

    # distinguished root at a mixed-index cutoff
    r = n_poly_root([eps_n(2), one, one], Exponent.hahn({2: 1, 1: 4}))
    assert (r + eps_n(2)).is_zero_below(Exponent.hahn({2: 1, 1: 4}))

    # the fixed-point series root, now over the hahn field
    s = PolySeries(HAHN, [-one, one, eps_n(1)])
    rep = ivt_root(s, zero, LcNumber.from_scalar(HAHN, 2), cut)
    assert rep.multiplicity == 1
    assert evaluate(s, rep.root, cut).is_zero_below(cut)
    lead = rep.root.terms[:3]
    assert [str(LcNumber.monomial(e, c)) for e, c in lead] == \
        ["1", "-eps[1]", "2*eps[1]^2"]

    # ramified branch in the hahn value group
    hits = poly_roots([-eps_n(2), zero, one], Exponent.hahn({2: 3}))
    assert sorted(str(h.value) for h in hits) == ["-eps[2]^(1/2)", "eps[2]^(1/2)"]
