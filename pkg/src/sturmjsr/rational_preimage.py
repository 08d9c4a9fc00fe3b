"""Closed-form parameter intervals where the extremal 1-ratio is a fixed
rational, plus the concave growth exponent S and the JSR on those intervals.

For a family passing the structural hypotheses, the set of parameters
alpha with ratio p/q is a closed interval with nonempty interior.  With
(u, v) the standard pair of p/q, B1 = M(u), B2 = M(v), A = B1*B2 (written
order; swapping it shifts both endpoints) and P the Perron projection
of A, the interval is

    [ rho(B1*P)^q / rho(A)^q1 ,  rho(A)^q2 / rho(P*B2)^q ]

with q1 = |u|, q2 = |v|.  The degenerate ends: ratio 0 gives [0,
rho(A0)/rho(P0*A1)] when A0 is diagonalisable and the single point {0}
otherwise; ratio 1 gives [rho(P1*A0)/rho(A1), +inf) or the empty set.
Integral families get exact quadratic-field endpoints; float families get
mpf endpoints with a coarse tracked radius.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from mpmath import mp, mpf, log as mlog

from .family import MatrixFamily
from .linalg2 import (
    QuadExt,
    RepeatedEigenvalueError,
    perron_projection,
    quad_compare,
    rank_one_spectral_radius,
    spectral_radius,
    spectral_radius_mpf,
)
from .precision import DEFAULT_PREC, fraction_from_mpf, mpf_from_fraction
from .words import StandardPair, standard_pair_for


class PreimageError(ValueError):
    pass


@dataclass(frozen=True)
class Endpoint:
    """Interval endpoint: mpf value, exact QuadExt when available, and a
    first-order rounding radius for float-family endpoints (None = exact)."""

    value: mpf
    exact: Optional[QuadExt] = None
    radius: Optional[mpf] = None

    def as_json(self) -> dict:
        out = {"dec": mp.nstr(self.value, 30)}
        if self.exact is not None:
            out["exact"] = {
                "a": str(self.exact.a),
                "b": str(self.exact.b),
                "D": self.exact.d,
            }
        if self.radius is not None:
            out["radius"] = mp.nstr(self.radius, 5)
        return out


@dataclass(frozen=True)
class PreimageInterval:
    """Closed parameter interval where the ratio function equals ``fraction``.

    ``lo_unbounded`` marks the ratio-0 interval containing 0;
    ``hi_unbounded`` marks the ratio-1 interval extending to +inf;
    ``degenerate`` marks the single point {0} and the empty set (the
    latter with lo > hi sentinel None endpoints).
    """

    fraction: Fraction
    lo: Optional[Endpoint]
    hi: Optional[Endpoint]
    lo_unbounded: bool = False
    hi_unbounded: bool = False
    degenerate: bool = False
    pair: Optional[StandardPair] = None

    @property
    def empty(self) -> bool:
        return self.lo is None and self.hi is None

    def contains(self, alpha) -> bool:
        """Closed-interval membership, exact whenever endpoints are exact."""
        if self.empty:
            return False
        if self.degenerate:
            return _as_fraction(alpha) == 0
        lo_ok = self.lo_unbounded or _cmp_alpha(alpha, self.lo) >= 0
        hi_ok = self.hi_unbounded or _cmp_alpha(alpha, self.hi) <= 0
        return lo_ok and hi_ok

    def as_json(self) -> dict:
        out: dict = {"p": self.fraction.numerator, "q": self.fraction.denominator}
        if self.empty:
            out["empty"] = True
            return out
        if self.degenerate:
            out["degenerate"] = True
        out["lo"] = self.lo.as_json() if self.lo is not None else {"dec": "0"}
        out["hi"] = self.hi.as_json() if self.hi is not None else {"dec": "+inf"}
        if self.pair is not None:
            out["u"] = self.pair.u
            out["v"] = self.pair.v
        return out


def _as_fraction(alpha) -> Fraction:
    if isinstance(alpha, (int, Fraction)):
        return Fraction(alpha)
    return fraction_from_mpf(alpha)


def _cmp_alpha(alpha, endpoint: Endpoint) -> int:
    """Sign of alpha - endpoint, exact when the endpoint is exact."""
    if endpoint.exact is not None:
        a = _as_fraction(alpha)
        return -quad_compare(endpoint.exact, QuadExt.make(a))
    if isinstance(alpha, (int, Fraction)):
        alpha = mpf_from_fraction(Fraction(alpha), 350)
    diff = alpha - endpoint.value
    return (diff > 0) - (diff < 0)


@dataclass(frozen=True)
class SValue:
    """Growth exponent S(p/q) = (1/q) log rho(M(uv)) along ratio p/q."""

    fraction: Fraction
    value: mpf
    exact_rho: Optional[QuadExt] = None


def _float_radius(value: mpf, q: int, prec: int) -> mpf:
    # first-order rounding model: O(q log q) mpf operations, each <= 1/2 ulp
    ops = 8 * (q + 4) * (q.bit_length() + 2)
    return abs(value) * mpf(2) ** (-prec + 1) * ops


def s_value(fam: MatrixFamily, pq: Fraction, prec: int = DEFAULT_PREC) -> SValue:
    """S at a rational, from the cyclically balanced word of the standard
    pair; S(0) and S(1) are the log spectral radii of the generators.

    Callers are responsible for the structural hypotheses (see
    family.check_technical_hypotheses); concavity and the growth
    interpretation of S are meaningless without them.
    """
    pq = Fraction(pq)
    if not 0 <= pq <= 1:
        raise PreimageError(f"ratio {pq} outside [0, 1]")
    with mp.workprec(prec):
        if pq == 0 or pq == 1:
            rho = spectral_radius(fam.a0 if pq == 0 else fam.a1, prec)
            exact = rho if isinstance(rho, QuadExt) else None
            val = exact.to_mpf(prec) if exact is not None else rho
            return SValue(pq, mlog(val), exact)
        pair = standard_pair_for(pq)
        m = fam.product(pair.uv)
        rho = spectral_radius(m, prec)
        exact = rho if isinstance(rho, QuadExt) else None
        val = exact.to_mpf(prec) if exact is not None else rho
        return SValue(pq, mlog(val) / pq.denominator, exact)


def preimage_interval(
    fam: MatrixFamily, pq: Fraction, prec: int = DEFAULT_PREC
) -> PreimageInterval:
    """The closed interval of parameters whose ratio is p/q in (0, 1)."""
    pq = Fraction(pq)
    if not 0 < pq < 1:
        raise PreimageError(f"need 0 < p/q < 1, got {pq}")
    if not fam.asserted_sturmian:
        raise PreimageError(
            f"family {fam.label!r} does not assert Sturmian extremality"
        )
    pair = standard_pair_for(pq)
    q1, q2 = len(pair.u), len(pair.v)
    q = q1 + q2
    b1 = fam.product(pair.u)
    b2 = fam.product(pair.v)
    a = b1 @ b2
    try:
        p = perron_projection(a, prec)
    except RepeatedEigenvalueError as e:
        raise PreimageError(
            f"degenerate Perron projection for {pq} (hypothesis violation): {e}"
        ) from e
    with mp.workprec(prec):  # float-family products round at `prec`
        rho_b1p = rank_one_spectral_radius(b1 @ p, prec)
        rho_pb2 = rank_one_spectral_radius(p @ b2, prec)
        rho_a = spectral_radius(a, prec)
    if fam.integral:
        lo_exact = rho_b1p ** q / rho_a ** q1
        hi_exact = rho_a ** q2 / rho_pb2 ** q
        return PreimageInterval(
            pq,
            Endpoint(lo_exact.to_mpf(prec), lo_exact),
            Endpoint(hi_exact.to_mpf(prec), hi_exact),
            pair=pair,
        )
    with mp.workprec(prec):
        lo = rho_b1p ** q / rho_a ** q1
        hi = rho_a ** q2 / rho_pb2 ** q
        return PreimageInterval(
            pq,
            Endpoint(lo, None, _float_radius(lo, q, prec)),
            Endpoint(hi, None, _float_radius(hi, q, prec)),
            pair=pair,
        )


def _boundary_interval(
    fam: MatrixFamily, which: int, prec: int
) -> PreimageInterval:
    fixed, other = (fam.a0, fam.a1) if which == 0 else (fam.a1, fam.a0)
    frac = Fraction(which)
    try:
        proj = perron_projection(fixed, prec)
    except RepeatedEigenvalueError:
        if which == 0:
            return PreimageInterval(frac, None, Endpoint(mpf(0)), degenerate=True)
        return PreimageInterval(frac, None, None, degenerate=True)
    with mp.workprec(prec):
        prod = proj @ other
        rho_mixed = rank_one_spectral_radius(prod, prec)
        rho_fixed = spectral_radius(fixed, prec)
    if fam.integral:
        ratio = (rho_fixed / rho_mixed) if which == 0 else (rho_mixed / rho_fixed)
        ratio = ratio if isinstance(ratio, QuadExt) else QuadExt.make(ratio)
        ep = Endpoint(ratio.to_mpf(prec), ratio)
    else:
        with mp.workprec(prec):
            val = (rho_fixed / rho_mixed) if which == 0 else (rho_mixed / rho_fixed)
        ep = Endpoint(val, None, _float_radius(val, 2, prec))
    if which == 0:
        return PreimageInterval(frac, None, ep, lo_unbounded=True)
    return PreimageInterval(frac, ep, None, hi_unbounded=True)


def preimage_zero(fam: MatrixFamily, prec: int = DEFAULT_PREC) -> PreimageInterval:
    """[0, rho(A0)/rho(P0*A1)] when A0 is diagonalisable, else just {0}."""
    return _boundary_interval(fam, 0, prec)


def preimage_one(fam: MatrixFamily, prec: int = DEFAULT_PREC) -> PreimageInterval:
    """[rho(P1*A0)/rho(A1), +inf) when A1 is diagonalisable, else empty."""
    return _boundary_interval(fam, 1, prec)


def varrho_on_interval(
    fam: MatrixFamily,
    pq: Fraction,
    alpha,
    prec: int = DEFAULT_PREC,
    interval: Optional[PreimageInterval] = None,
) -> mpf:
    """JSR of {A0, alpha*A1} for alpha inside the ratio-p/q interval.

    Equals rho(M_alpha(uv))^(1/q), constant-exponent along the whole
    interval; membership is checked (exactly, for integral families) and
    out-of-interval alpha is rejected rather than extrapolated.
    """
    pq = Fraction(pq)
    iv = interval if interval is not None else preimage_interval(fam, pq, prec)
    if not iv.contains(alpha):
        raise PreimageError(f"alpha {alpha} outside the ratio-{pq} interval")
    pair = iv.pair if iv.pair is not None else standard_pair_for(pq)
    with mp.workprec(prec):
        q = pq.denominator
        if fam.integral:
            rho = spectral_radius(fam.product(pair.uv), prec)
            rho = rho.to_mpf(prec) if isinstance(rho, QuadExt) else mpf_from_fraction(rho, prec)
            a = mpf_from_fraction(alpha, prec) if isinstance(alpha, (int, Fraction)) else mpf(alpha)
            return (a ** pq.numerator * rho) ** (mpf(1) / q)
        m = fam.product_scaled(pair.uv, alpha)
        return spectral_radius_mpf(m, prec) ** (mpf(1) / q)


def general_one_over_n_interval(
    fam: MatrixFamily, n: int, prec: int = DEFAULT_PREC
) -> PreimageInterval:
    """Closed-form interval for ratio 1/(n+1) on the unipotent integer
    family, cross-asserted against the generic construction.

    With m = n^2 + 4n, the endpoints are

        (1 + 1/sqrt(m))^(n+1) / (1 + n/2 + sqrt(m)/2)

    and

        (1 + n/2 + sqrt(m)/2)^n / ((n+1)/2 + (n^2+3n-2)/(2m) * sqrt(m))^(n+1).

    A mismatch with the generic route signals an implementation fault and
    raises.
    """
    if fam.label != "hmst":
        raise PreimageError("closed form is specific to the hmst family")
    if n < 1:
        raise PreimageError("need n >= 1")
    m = n * n + 4 * n
    one = Fraction(1)
    lo_base = QuadExt.make(one, Fraction(1, m), m)  # 1 + sqrt(m)/m = 1 + 1/sqrt(m)
    rho_a = QuadExt.make(1 + Fraction(n, 2), Fraction(1, 2), m)
    hi_den = QuadExt.make(Fraction(n + 1, 2), Fraction(n * n + 3 * n - 2, 2 * m), m)
    lo = lo_base ** (n + 1) / rho_a
    hi = rho_a ** n / hi_den ** (n + 1)
    generic = preimage_interval(fam, Fraction(1, n + 1), prec)
    if generic.lo.exact != lo or generic.hi.exact != hi:
        raise PreimageError(
            f"closed form disagrees with generic construction at 1/{n + 1}"
        )
    return generic
