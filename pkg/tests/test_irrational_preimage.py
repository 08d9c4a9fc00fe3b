from fractions import Fraction

import pytest
from mpmath import mp, mpf, nstr

from sturmjsr.contfrac import CFExpansion, cf_of_quadratic
from sturmjsr.irrational_preimage import (
    IrrationalPreimageError,
    alpha_by_traces,
    alpha_for_irrational,
    convergent_intervals,
    partial_log_alpha,
    product_log_term,
    rho_sequence,
    rigor_certificate,
    tau_recurrence_golden,
)
from sturmjsr.precision import Ball

Fr = Fraction

GOLDEN_GAMMA = (Fr(3, 2), Fr(-1, 2), 5)  # (3 - sqrt(5))/2 = [2,1,1,1,...]


@pytest.fixture(scope="module")
def golden_cf():
    return cf_of_quadratic(*GOLDEN_GAMMA)


def test_tau_recurrence_seeds_and_growth():
    taus = tau_recurrence_golden(6)
    assert taus[:7] == [1, 2, 2, 3, 4, 10, 37]
    assert taus[7] == 366 and taus[8] == 13532


def test_tau_matches_matrix_traces(hmst, golden_cf):
    taus = tau_recurrence_golden(14)
    seq = rho_sequence(hmst, golden_cf, 14)
    for n in range(-1, 15):
        assert seq.tau(n) == taus[n + 2], n


def test_rho_sequence_words_and_convergents(hmst, golden_cf):
    seq = rho_sequence(hmst, golden_cf, 10)
    # q_n are the Fibonacci-style convergent denominators
    assert [seq.q(n) for n in range(0, 8)] == [1, 2, 3, 5, 8, 13, 21, 34]
    for n in range(1, 11):
        w = seq.word(n)
        assert len(w) == seq.q(n)
        assert w.count("1") == seq.p(n)
    # seed words
    assert seq.word(-1) == "1" and seq.word(0) == "0"
    assert seq.word(1) == "01"


def test_rho_seeds(hmst, golden_cf):
    seq = rho_sequence(hmst, golden_cf, 4)
    # rho_0 = rho(A0) = 1, rho_-1 = rho(A1) = 1 for the unipotent pair
    assert abs(seq.rho(0) - 1) < mpf(2) ** -200
    assert abs(seq.rho(-1) - 1) < mpf(2) ** -200
    assert seq.log_rho(0) == 0


def test_rho_growth_doubling(hmst, golden_cf):
    seq = rho_sequence(hmst, golden_cf, 14)
    for n in range(3, 14):
        assert seq.rho(n + 1) >= 2 * seq.rho(n)


def test_rho_strictly_increasing(hmst, golden_cf):
    seq = rho_sequence(hmst, golden_cf, 12)
    for n in range(1, 12):
        assert seq.rho(n + 1) > seq.rho(n)


def test_rigor_certificate_golden(hmst, golden_cf):
    seq = rho_sequence(hmst, golden_cf, 12)
    cert = rigor_certificate(hmst, seq, golden_cf)
    assert cert is not None
    assert cert.n0 == 3 and cert.K == 2 and cert.L == 1
    assert cert.C0 == 16 * 3 * 4 + 1


def test_rigor_certificate_444(hmst):
    cf = cf_of_quadratic(Fr(-2), Fr(1), 5)  # [4,4,4,...]
    seq = rho_sequence(hmst, cf, 10)
    cert = rigor_certificate(hmst, seq, cf)
    assert cert is not None
    assert cert.K == 5
    # B_{n0-1} - K I nonnegative was the binding check
    m = seq.matrix(cert.n0 - 1)
    assert (m.a >= cert.K) and (m.d >= cert.K)


def test_rigor_certificate_needs_bounded_coefficients(hmst):
    # a stream with no derivable bound and none supplied gets no certificate
    cf = CFExpansion.from_list([2, 2, 4, 8, 16, 32, 64, 128, 256], prefix_only=True)
    seq = rho_sequence(hmst, cf, 7)
    assert rigor_certificate(hmst, seq, cf) is None
    # but an explicit coefficient bound revives it
    assert rigor_certificate(hmst, seq, cf, coeff_bound=256) is not None
    # slopes above one half never qualify for the specialised bound
    cf1 = CFExpansion.from_list([1, 2, 2, 2, 2, 2, 2, 2], prefix_only=True)
    seq1 = rho_sequence(hmst, cf1, 6)
    assert rigor_certificate(hmst, seq1, cf1, coeff_bound=2) is None


def test_alpha_star(hmst, golden_cf):
    res = alpha_for_irrational(hmst, golden_cf, digits=29)
    with mp.workprec(200):
        want = mpf("0.74932654633036755794396194809")
        assert abs(res.value - want) < mpf(10) ** -29
    assert res.rigorous
    assert res.error_radius < mpf(10) ** -29
    assert res.terms_used <= 14


def test_section8_quadratic_example(hmst):
    cf = cf_of_quadratic(Fr(-2), Fr(1), 5)
    res = alpha_for_irrational(hmst, cf, digits=10)
    with mp.workprec(120):
        assert abs(res.value - mpf("0.4596704785")) < mpf("0.5e-10")
    assert res.rigorous


def test_reduction_above_one_half(hmst):
    # gamma = (sqrt(5)-1)/2 = [1,1,1,...] maps to 1/alpha(golden mirror)
    cf = CFExpansion.from_periodic([], [1])
    res = alpha_for_irrational(hmst, cf, digits=25)
    base = alpha_for_irrational(hmst, cf_of_quadratic(*GOLDEN_GAMMA), digits=25)
    with mp.workprec(200):
        assert abs(res.value - 1 / base.value) < mpf(10) ** -24
    assert res.rigorous


def test_terms_mode_and_reproducibility(hmst, golden_cf):
    r1 = alpha_for_irrational(hmst, golden_cf, terms=9, prec=256)
    r2 = alpha_for_irrational(hmst, golden_cf, terms=9, prec=256)
    assert mp.nstr(r1.value, 70) == mp.nstr(r2.value, 70)
    assert r1.value == r2.value
    assert r1.terms_used == 9


def test_alpha_rejects_both_modes(hmst, golden_cf):
    with pytest.raises(IrrationalPreimageError):
        alpha_for_irrational(hmst, golden_cf, digits=10, terms=5)


def test_alpha_needs_sturmian_assertion(hmst, golden_cf):
    from sturmjsr.family import MatrixFamily

    bare = MatrixFamily(hmst.a0, hmst.a1, label="bare", asserted_sturmian=False)
    with pytest.raises(IrrationalPreimageError):
        alpha_for_irrational(bare, golden_cf, digits=10)


def test_insufficient_stream_fails_cleanly(hmst):
    from sturmjsr.irrational_preimage import PrecisionError

    cf = CFExpansion.from_list([2, 1, 1], prefix_only=True)
    with pytest.raises(PrecisionError):
        alpha_for_irrational(hmst, cf, digits=40)


def test_trace_product_matches_rho_product(hmst, golden_cf):
    res = alpha_for_irrational(hmst, golden_cf, terms=10, prec=350)
    traced = alpha_by_traces(hmst, golden_cf, 10, prec=350)
    assert abs(traced - res.value) < mpf(10) ** -25


def test_trace_product_reproduces_companion_form(hmst, golden_cf):
    # (1 - tau_{n-2}/(tau_{n-1} tau_n))^((-1)^(n+1) q_n) with the 1/tr(A1)
    # prefactor equals the telescoped trace partial
    taus = tau_recurrence_golden(12)
    seq = rho_sequence(hmst, golden_cf, 12)
    with mp.workprec(300):
        # for these seeds tau_0^(a1 - 1) = trace(A1), so the leading power
        # of the telescoped product exactly absorbs the 1/trace(A1)
        # prefactor and the companion form needs none
        acc = mpf(1)
        for n in range(0, 11):
            t = 1 - mpf(taus[n]) / (mpf(taus[n + 1]) * mpf(taus[n + 2]))
            e = seq.q(n) if n % 2 else -seq.q(n)
            acc *= t ** e
        direct = alpha_by_traces(hmst, golden_cf, 10, prec=300)
        assert abs(acc - direct) < mpf(10) ** -40


def test_first_partial_inside_convergent_sandwich(hmst, golden_cf):
    # the crude N=1 partial of the spectral-radius product already lands
    # between the neighbouring rational steps (trace partials do not)
    from sturmjsr.rational_preimage import preimage_interval

    seq = rho_sequence(hmst, golden_cf, 2, prec=220)
    with mp.workprec(220):
        alpha_1 = mp.exp(partial_log_alpha(seq, 1, 220))
        lo_gap = preimage_interval(hmst, Fr(1, 3), 220).hi.value
        hi_gap = preimage_interval(hmst, Fr(1, 2), 220).lo.value
        assert lo_gap < alpha_1 < hi_gap


def test_trace_product_requires_certificate(hmst):
    cf = CFExpansion.from_list([2, 1, 1, 1, 1, 1, 1, 1], prefix_only=True)
    with pytest.raises(IrrationalPreimageError):
        alpha_by_traces(hmst, cf, 5)


def test_sandwich_against_rational_steps(hmst, golden_cf):
    res = alpha_for_irrational(hmst, golden_cf, digits=25)
    with mp.workprec(300):
        gamma = (3 - mp.sqrt(5)) / 2
        for pq, iv in convergent_intervals(hmst, golden_cf, 9):
            if mpf(pq.numerator) / pq.denominator < gamma:
                assert iv.hi.value < res.value
            else:
                assert res.value < iv.lo.value


def test_partial_values_contract(hmst, golden_cf):
    # depth 12 needs well over 300 bits: the telescoped partials carry
    # magnitudes near q_n log rho_{n+1}, so their differences cancel
    prec = 700
    seq = rho_sequence(hmst, golden_cf, 14, prec=prec)
    with mp.workprec(prec):
        # n = 12 would need another ~300 bits: the true step is ~1e-240
        steps = [
            abs(partial_log_alpha(seq, n + 1, prec) - partial_log_alpha(seq, n, prec))
            for n in range(2, 12)
        ]
        for a, b in zip(steps[2:], steps[3:]):
            assert b < a
        # each step is exactly the dropped product term
        for n in range(3, 11):
            assert abs(product_log_term(seq, n + 1, prec)) >= abs(
                partial_log_alpha(seq, n + 1, prec) - partial_log_alpha(seq, n, prec)
            ) * (1 - mpf(2) ** -40)


def test_term_bound_shape(hmst, golden_cf):
    # |1 - rho_{n+1}/(rho_n^{a_{n+1}} rho_{n-1})| <= C0 / rho_{n-1}^2
    seq = rho_sequence(hmst, golden_cf, 13, prec=300)
    c0 = 193
    with mp.workprec(300):
        for n in range(1, 12):
            lhs = abs(
                1
                - seq.rho(n + 1) / (seq.rho(n) ** seq.coeffs[n] * seq.rho(n - 1))
            )
            assert lhs <= c0 / seq.rho(n - 1) ** 2 + mpf(2) ** -250


def test_kozyakin_alpha_sandwiched(kozyakin):
    cf = cf_of_quadratic(*GOLDEN_GAMMA)
    res = alpha_for_irrational(kozyakin, cf, terms=8, prec=220)
    assert not res.rigorous  # the certificate is specific to the unipotent pair
    with mp.workprec(220):
        gamma = (3 - mp.sqrt(5)) / 2
        for pq, iv in convergent_intervals(kozyakin, cf, 7, prec=220):
            if mpf(pq.numerator) / pq.denominator < gamma:
                assert iv.hi.value < res.value
            else:
                assert res.value < iv.lo.value


def test_kozyakin_reduction_above_one_half(kozyakin):
    # a1 == 1 goes through the swapped family and an inversion; validate
    # against this family's own steps around gamma = (sqrt(5)-1)/2
    cf = CFExpansion.from_periodic([], [1])
    res = alpha_for_irrational(kozyakin, cf, terms=8, prec=220)
    assert not res.rigorous
    with mp.workprec(220):
        gamma = (mp.sqrt(5) - 1) / 2
        for pq in (Fr(1, 2), Fr(2, 3), Fr(3, 5), Fr(5, 8), Fr(8, 13)):
            from sturmjsr.rational_preimage import preimage_interval

            iv = preimage_interval(kozyakin, pq, 220)
            if mpf(pq.numerator) / pq.denominator < gamma:
                assert iv.hi.value < res.value
            else:
                assert res.value < iv.lo.value


def test_float_family_heuristic(bousch_mairesse):
    cf = cf_of_quadratic(*GOLDEN_GAMMA)
    res = alpha_for_irrational(bousch_mairesse, cf, terms=8, prec=220)
    assert not res.rigorous
    assert res.certificate is None
    assert res.value > 0
    # sandwiched by that family's own rational steps
    with mp.workprec(220):
        gamma = (3 - mp.sqrt(5)) / 2
        for pq, iv in convergent_intervals(bousch_mairesse, cf, 7, prec=220):
            if mpf(pq.numerator) / pq.denominator < gamma:
                assert iv.hi.value < res.value
            else:
                assert res.value < iv.lo.value
