"""The unique parameter with a given irrational extremal 1-ratio.

For irrational gamma = [a1, a2, ...] the ratio function takes the value
gamma at exactly one parameter alpha_gamma, obtained as the limit of

    alpha_N = ( rho_N^{q_{N+1}} / rho_{N+1}^{q_N} )^{(-1)^N}

where rho_n is the spectral radius of the matrix B_n built by the word
recursion B_{-1} = A1, B_0 = A0, B_1 = A0^{a1 - 1} A1 and
B_{n+1} = B_n^{a_{n+1}} B_{n-1}.  Equivalently alpha_gamma is the infinite
product (1/rho(A1)) * prod_n (rho_n^{a_{n+1}} rho_{n-1} / rho_{n+1})
^{(-1)^n q_n}; the partial products coincide with alpha_N, and everything
here is accumulated in log space because rho_n grows doubly exponentially.

For the unipotent integer family with a1 >= 2 a checkable certificate
(L, K, n0, C0) turns the truncation error into the rigorous bound
|log alpha_gamma - log alpha_N| <= 2*L*C0 / rho_N for N >= n0, with
C0 = 16 (a1+1) (a1+2) + 1.  Slopes above one half reduce to the mirrored
expansion of 1 - gamma through the transpose symmetry of that family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from mpmath import mp, mpf, log as mlog, exp as mexp, sqrt as msqrt

from .contfrac import CFExpansion, CoefficientsExhausted, cf_complement, convergents
from .family import MatrixFamily, builtin_hmst, dual_family
from .linalg2 import Mat2
from .precision import DEFAULT_PREC

_WORD_CAP = 1_000_000


class IrrationalPreimageError(ValueError):
    pass


class PrecisionError(IrrationalPreimageError):
    """Requested accuracy cannot be reached with the available stream."""


@dataclass
class RhoTauSequence:
    """Per-index data of the matrix recursion, indices -1 .. top.

    Accessors word / p / q / tau / matrix / log_rho / rho take the
    sequence index n directly.  Matrices are kept for the nonnegativity
    checks of the rigor certificate; traces and matrices are exact for
    integral families.
    """

    family_label: str
    prec: int
    unimodular: bool
    coeffs: list[int]  # a_1 .. a_{N+1}
    words: list[Optional[str]] = field(default_factory=list)
    ps: list[int] = field(default_factory=list)
    qs: list[int] = field(default_factory=list)
    taus: list = field(default_factory=list)
    matrices: list[Mat2] = field(default_factory=list)
    log_rhos: list[mpf] = field(default_factory=list)
    rhos: list[mpf] = field(default_factory=list)

    def _i(self, n: int) -> int:
        if n < -1 or n >= len(self.taus) - 1:
            raise IndexError(f"index {n} outside [-1, {len(self.taus) - 2}]")
        return n + 1

    def word(self, n: int) -> Optional[str]:
        return self.words[self._i(n)]

    def p(self, n: int) -> int:
        return self.ps[self._i(n)]

    def q(self, n: int) -> int:
        return self.qs[self._i(n)]

    def tau(self, n: int):
        return self.taus[self._i(n)]

    def matrix(self, n: int) -> Mat2:
        return self.matrices[self._i(n)]

    def log_rho(self, n: int) -> mpf:
        return self.log_rhos[self._i(n)]

    def rho(self, n: int) -> mpf:
        return self.rhos[self._i(n)]

    @property
    def top(self) -> int:
        return len(self.taus) - 2


def _log_rho_from_trace_det(tau, det, prec: int) -> mpf:
    """log of (|tau| + sqrt(tau^2 - 4 det)) / 2 without materializing huge
    powers; tau may be an arbitrary-precision integer or Fraction."""
    with mp.workprec(prec + 24):
        if isinstance(tau, (int, Fraction)):
            tau = Fraction(tau)
            t = mpf(tau.numerator) / tau.denominator
        else:
            t = mpf(tau)
        if isinstance(det, (int, Fraction)):
            det = Fraction(det)
            d = mpf(det.numerator) / det.denominator
        else:
            d = mpf(det)
        disc = t * t - 4 * d
        if disc < 0:
            return mlog(d) / 2
        return mlog((abs(t) + msqrt(disc)) / 2)


def rho_sequence(
    fam: MatrixFamily, cf: CFExpansion, n_top: int, prec: int = DEFAULT_PREC,
    store_words: bool = True,
) -> RhoTauSequence:
    """Matrices, traces and log spectral radii for indices -1 .. n_top.

    Powers use binary exponentiation; integral families stay in exact
    integer or rational arithmetic, with determinants obtained from the
    letter counts rather than the (huge) matrices.
    """
    if n_top < 1:
        raise IrrationalPreimageError("need n_top >= 1")
    coeffs = cf.prefix(n_top + 1)  # a_1 .. a_{n_top + 1}
    seq = RhoTauSequence(
        family_label=fam.label, prec=prec,
        unimodular=fam.is_unimodular(), coeffs=list(coeffs),
    )
    a0, a1 = fam.a0, fam.a1

    def build() -> list[Mat2]:
        mats = [a1, a0, (a0 ** (coeffs[0] - 1)) @ a1]
        for k in range(1, n_top):
            mats.append((mats[-1] ** coeffs[k]) @ mats[-2])
        return mats

    if fam.integral:
        mats = build()
    else:
        with mp.workprec(prec + 24):
            mats = build()
    det0, det1 = a0.det(), a1.det()
    # convergents: ps[i], qs[i] hold (p, q) at sequence index i - 1
    ps = [1, 0]
    qs = [0, 1]
    for a in coeffs:
        ps.append(a * ps[-1] + ps[-2])
        qs.append(a * qs[-1] + qs[-2])
    # words s_n; same index arithmetic as the matrix recursion
    words: list[Optional[str]] = ["1", "0", "0" * (coeffs[0] - 1) + "1"]
    for k in range(1, n_top):
        prev, prev2 = words[-1], words[-2]
        if prev is None or prev2 is None or len(prev) * coeffs[k] + len(prev2) > _WORD_CAP:
            words.append(None)
        else:
            words.append(prev * coeffs[k] + prev2)
    if not store_words:
        words = [None] * len(words)

    for i, m in enumerate(mats):
        n = i - 1  # sequence index
        p_n, q_n = ps[i], qs[i]
        if fam.integral:
            tau = m.trace()
            # letter counts give the determinant without the huge matrices
            ones = p_n if n >= 1 else (0 if n == 0 else 1)
            zeros = (q_n - p_n) if n >= 1 else (1 if n == 0 else 0)
            det = det0 ** zeros * det1 ** ones
        else:
            with mp.workprec(prec + 24):
                tau = m.trace()
                det = m.det()
        logr = _log_rho_from_trace_det(tau, det, prec)
        with mp.workprec(prec):
            seq.rhos.append(mexp(logr))
        seq.words.append(words[i])
        seq.ps.append(p_n)
        seq.qs.append(q_n)
        seq.taus.append(tau)
        seq.matrices.append(m)
        seq.log_rhos.append(logr)
    return seq


def tau_recurrence_golden(n_top: int) -> list[int]:
    """Integer traces tau_-2 .. tau_N for the golden expansion [2,1,1,...]
    on the unipotent family: seeds 1, 2, 2 and tau_{n+1} = tau_n tau_{n-1}
    - tau_{n-2}.  Returned list index k holds tau_{k-2}."""
    if n_top < 0:
        raise IrrationalPreimageError("need n_top >= 0")
    taus = [1, 2, 2]
    while len(taus) < n_top + 3:
        taus.append(taus[-1] * taus[-2] - taus[-3])
    return taus


@dataclass(frozen=True)
class RigorCertificate:
    """Witnesses for the rigorous truncation bound 2*L*C0/rho_N."""

    L: int
    K: int
    n0: int
    C0: int

    def as_json(self) -> dict:
        return {"L": self.L, "K": self.K, "n0": self.n0, "C0": self.C0}


def _is_hmst(fam: MatrixFamily) -> bool:
    h = builtin_hmst()
    return fam.a0.entries() == h.a0.entries() and fam.a1.entries() == h.a1.entries()


def rigor_certificate(
    fam: MatrixFamily,
    seq: RhoTauSequence,
    cf: CFExpansion,
    coeff_bound: Optional[int] = None,
) -> Optional[RigorCertificate]:
    """Smallest n0 >= 3 with witnesses (L, K) for the truncation bound.

    Requirements: the unipotent integer family with a1 >= 2; K - 1 an
    upper bound for every coefficient beyond index n0 + 1 (derivable for
    periodic or finite streams, else supplied by the caller); the matrix
    B_{n0 - 1} - K*I nonnegative; L any integer with q_{n0+1} <= L *
    rho_{n0}.  Returns None when no bound on the coefficients is known.
    """
    if not _is_hmst(fam):
        return None
    a1 = seq.coeffs[0]
    if a1 < 2:
        return None
    c0 = 16 * (a1 + 1) * (a1 + 2) + 1
    for n0 in range(3, seq.top):
        bound = coeff_bound if coeff_bound is not None else cf.tail_bound(n0 + 2)
        if bound is None:
            return None
        k = max(2, bound + 1)
        m = seq.matrix(n0 - 1)
        if not (m - Mat2.identity().scale(k)).is_nonnegative():
            continue
        with mp.workprec(seq.prec):
            ratio = seq.q(n0 + 1) / seq.rho(n0)
            ell = int(mp.floor(ratio)) + 1
        return RigorCertificate(L=ell, K=k, n0=n0, C0=c0)
    return None


@dataclass(frozen=True)
class AlphaResult:
    """Approximation of the unique parameter with the given irrational ratio.

    ``error_radius`` bounds |alpha - value| outwards.  ``rigorous`` is
    True only when a certificate was verified; otherwise the radius is the
    labelled heuristic (four times the last log-space step).
    """

    value: mpf
    error_radius: mpf
    rigorous: bool
    terms_used: int
    certificate: Optional[RigorCertificate]
    prec: int
    gamma_label: str = ""

    def as_json(self) -> dict:
        return {
            "alpha": mp.nstr(self.value, max(20, int(self.prec / 3.3))),
            "radius": mp.nstr(self.error_radius, 6),
            "N": self.terms_used,
            "rigorous": self.rigorous,
            "certificate": self.certificate.as_json() if self.certificate else None,
            "gamma": self.gamma_label,
        }


def partial_log_alpha(seq: RhoTauSequence, n: int, prec: int) -> mpf:
    """log alpha_n in telescoped form, (-1)^n (q_{n+1} log rho_n - q_n
    log rho_{n+1}); identical to the partial product accumulated term by
    term, with less cancellation."""
    with mp.workprec(prec):
        s = seq.q(n + 1) * seq.log_rho(n) - seq.q(n) * seq.log_rho(n + 1)
        return -s if n % 2 else s


def product_log_term(seq: RhoTauSequence, n: int, prec: int) -> mpf:
    """Signed log of the n-th factor of the infinite product."""
    with mp.workprec(prec):
        t = (
            seq.coeffs[n] * seq.log_rho(n)
            + seq.log_rho(n - 1)
            - seq.log_rho(n + 1)
        )
        t *= seq.q(n)
        return -t if n % 2 else t


def alpha_for_irrational(
    fam: MatrixFamily,
    cf: CFExpansion,
    digits: Optional[int] = None,
    terms: Optional[int] = None,
    prec: Optional[int] = None,
    coeff_bound: Optional[int] = None,
    gamma_label: str = "",
) -> AlphaResult:
    """Parameter whose extremal 1-ratio has the given expansion.

    Exactly one of ``digits`` (decimal accuracy target, needs a rigor
    certificate or enough stream to satisfy the heuristic stop rule) and
    ``terms`` (explicit truncation index) may be given; default is
    digits=30.  Working precision auto-escalates until the reported radius
    meets the target.  Expansions with a1 == 1 (ratio above one half) are
    reduced through the complemented expansion: on the transpose-symmetric
    unipotent family the reduction is exact and keeps rigor; other
    families are swapped and the result is flagged heuristic.
    """
    if not fam.asserted_sturmian:
        raise IrrationalPreimageError(
            f"family {fam.label!r} does not assert Sturmian extremality"
        )
    if digits is not None and terms is not None:
        raise IrrationalPreimageError("give digits or terms, not both")
    if digits is None and terms is None:
        digits = 30

    a1 = cf.coefficient(1)
    if a1 == 1:
        mirror = cf_complement(cf)
        base = fam if _is_hmst(fam) else dual_family(fam)
        sub = alpha_for_irrational(
            base, mirror, digits=digits, terms=terms, prec=prec,
            coeff_bound=coeff_bound,
            gamma_label=f"1-({gamma_label or cf.format()})",
        )
        with mp.workprec(sub.prec):
            value = 1 / sub.value
            # log-space radius is invariant under inversion
            radius = value * (mexp(_log_radius_of(sub)) - 1)
        rigorous = sub.rigorous and _is_hmst(fam)
        return AlphaResult(
            value=value, error_radius=radius, rigorous=rigorous,
            terms_used=sub.terms_used, certificate=sub.certificate,
            prec=sub.prec, gamma_label=gamma_label or cf.format(),
        )

    target_bits = None if digits is None else int(digits * 3.3219281) + 2
    work = prec or max(256, (target_bits or 0) + 64)
    escalations = 0
    while True:
        result = _alpha_fixed_prec(
            fam, cf, target_bits, terms, work, coeff_bound, gamma_label
        )
        if result is not None:
            value, radius_log, rigorous, n_used, cert = result
            if target_bits is None or radius_log <= mpf(2) ** (-target_bits):
                with mp.workprec(work):
                    radius_abs = value * (mexp(radius_log) - 1)
                return AlphaResult(
                    value=value, error_radius=radius_abs, rigorous=rigorous,
                    terms_used=n_used, certificate=cert, prec=work,
                    gamma_label=gamma_label or cf.format(),
                )
        escalations += 1
        if escalations > 6:
            raise PrecisionError(
                "radius target not reached; coefficient stream too short "
                "or precision escalation exhausted"
            )
        work *= 2


def _log_radius_of(res: AlphaResult) -> mpf:
    # recover the log-space radius from the stored absolute one
    with mp.workprec(res.prec):
        return mlog(1 + res.error_radius / res.value)


def _alpha_fixed_prec(fam, cf, target_bits, terms, work, coeff_bound, gamma_label):
    """One pass at fixed precision; returns None to request more terms
    (only possible when the stream runs dry before the target is met)."""
    if terms is not None:
        n_used = terms
        seq = rho_sequence(fam, cf, n_used + 1, prec=work, store_words=False)
        cert = rigor_certificate(fam, seq, cf, coeff_bound)
        rigorous = cert is not None and n_used >= cert.n0
    else:
        # grow the sequence until the truncation bound meets the target
        n_try = 8
        while True:
            try:
                seq = rho_sequence(fam, cf, n_try + 1, prec=work, store_words=False)
            except CoefficientsExhausted:
                # stream is dry: use everything available
                avail = len(cf._coeffs)
                if avail < 4:
                    raise PrecisionError("fewer than four coefficients available")
                seq = rho_sequence(fam, cf, avail - 1, prec=work, store_words=False)
                cert = rigor_certificate(fam, seq, cf, coeff_bound)
                n_used = seq.top - 1
                rigorous = cert is not None and n_used >= cert.n0
                break
            cert = rigor_certificate(fam, seq, cf, coeff_bound)
            n_used = _pick_terms(seq, cert, target_bits, work)
            if n_used is not None:
                rigorous = cert is not None and n_used >= cert.n0
                break
            if n_try > 400:
                raise PrecisionError("term growth exhausted without meeting target")
            n_try += 6

    with mp.workprec(work):
        log_alpha = partial_log_alpha(seq, n_used, work)
        value = mexp(log_alpha)
        # first-order rounding slop of the log-space accumulation
        magnitude = abs(seq.q(n_used) * seq.log_rho(n_used + 1)) + 1
        arith = magnitude * (n_used + 4) * mpf(2) ** (-work + 8)
        if rigorous:
            bound = 2 * cert.L * cert.C0 / seq.rho(n_used)
            radius_log = bound + arith
        else:
            step = abs(product_log_term(seq, n_used, work))
            radius_log = 4 * step + arith
    return value, radius_log, rigorous, n_used, cert


def _pick_terms(seq, cert, target_bits, work) -> Optional[int]:
    """Smallest usable truncation index, or None when the sequence is too
    short for the target."""
    with mp.workprec(work):
        tol = mpf(2) ** (-(target_bits or 106))
        if cert is not None:
            for n in range(cert.n0, seq.top):
                if 2 * cert.L * cert.C0 / seq.rho(n) < tol / 2:
                    return n
            return None
        # heuristic stop: two successive tiny steps
        for n in range(2, seq.top):
            s1 = abs(product_log_term(seq, n, work))
            if s1 < tol / 8 and n + 1 <= seq.top - 1:
                s2 = abs(product_log_term(seq, n + 1, work))
                if s2 < tol / 8:
                    return n
        return None


def alpha_by_traces(
    fam: MatrixFamily, cf: CFExpansion, terms: int, prec: int = DEFAULT_PREC,
    coeff_bound: Optional[int] = None,
) -> mpf:
    """Trace-based partial value (tau_N^{q_{N+1}} / tau_{N+1}^{q_N})^{(-1)^N}
    for the unipotent integer family.

    Valid under the same certificate as the rigorous bound (traces and
    spectral radii are interchangeable in the limit exactly when q_n =
    O(rho_{n-1})).  Note the equivalent product form needs the prefactor
    1/trace(A1); the telescoped form used here has it built in.
    """
    if not _is_hmst(fam):
        raise IrrationalPreimageError("trace product is specific to the unipotent family")
    seq = rho_sequence(fam, cf, terms + 1, prec=prec, store_words=False)
    cert = rigor_certificate(fam, seq, cf, coeff_bound)
    if cert is None:
        raise IrrationalPreimageError(
            "no rigor certificate: trace and spectral-radius products may diverge"
        )
    with mp.workprec(prec):
        lt_n = mlog(mpf(seq.tau(terms)))
        lt_n1 = mlog(mpf(seq.tau(terms + 1)))
        s = seq.q(terms + 1) * lt_n - seq.q(terms) * lt_n1
        return mexp(-s if terms % 2 else s)


def convergent_intervals(fam: MatrixFamily, cf: CFExpansion, count: int, prec: int = DEFAULT_PREC):
    """Rational-preimage intervals of the first ``count`` convergents,
    used for the monotone sandwich cross-check of alpha values."""
    from .rational_preimage import preimage_interval

    pairs = convergents(cf, count)
    out = []
    for k in range(1, count + 1):
        p, q = pairs[k + 1]
        if 0 < Fraction(p, q) < 1:
            out.append((Fraction(p, q), preimage_interval(fam, Fraction(p, q), prec)))
    return out
