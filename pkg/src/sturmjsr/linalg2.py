"""Exact and high-precision 2x2 matrix arithmetic.

Scalars are either exact (int, Fraction, QuadExt = a + b*sqrt(d) over the
rationals) or mpmath floats at an explicit binary precision.  Matrices are
generic over both kinds; the exact path never touches floating point, so
equalities and orderings of computed spectral data are decidable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from mpmath import mp, mpf, sqrt as msqrt
from sympy import factorint

from .precision import DEFAULT_PREC

Word = str


class LinalgError(ValueError):
    pass


class RepeatedEigenvalueError(LinalgError):
    """Signals a non-diagonalisable (or defective within tolerance) matrix."""


# ---------------------------------------------------------------------------
# squarefree decomposition


_FULL_FACTOR_LIMIT = 10 ** 30
_TRIAL_PRIMES: list[int] = []


def squarefree_split(n: int) -> tuple[int, int]:
    """n = s^2 * d, returns (d, s) with d as square-free as affordable.

    Below 10^30 the factorization is complete and d is exactly squarefree,
    which canonicalizes values for equality tests.  Above that, factoring
    an arbitrary discriminant is not realistic; small prime squares are
    stripped and a perfect-square cofactor is detected, so d may retain
    large square factors.  Sign determination and ordering never need
    squarefreeness, and equality remains consistent between values built
    from the same discriminant, which is the only large-radicand use.
    """
    if n < 0:
        raise LinalgError("negative radicand")
    if n == 0:
        return 0, 1
    if n < _FULL_FACTOR_LIMIT:
        d, s = 1, 1
        for p, e in factorint(n).items():
            if e % 2:
                d *= p
            s *= p ** (e // 2)
        return d, s
    if not _TRIAL_PRIMES:
        from sympy import primerange

        _TRIAL_PRIMES.extend(primerange(2, 10000))
    s = 1
    for p in _TRIAL_PRIMES:
        sq = p * p
        if sq > n:
            break
        while n % sq == 0:
            n //= sq
            s *= p
    root = isqrt(n)
    if root * root == n:
        return 1, s * root
    return n, s


# ---------------------------------------------------------------------------
# quadratic field scalars


@dataclass(frozen=True, slots=True)
class QuadExt:
    """Exact scalar a + b*sqrt(d), a and b rational, d squarefree positive.

    d == 0 encodes a rational value (b is then zero).  Arithmetic mixes
    freely with int and Fraction; two QuadExt operands must share d.
    Comparisons are exact sign determinations, no floating point involved.
    """

    a: Fraction
    b: Fraction
    d: int

    @staticmethod
    def make(a, b=0, d: int = 0) -> "QuadExt":
        """Normalize: extract square factors of d, collapse rational values."""
        a, b = Fraction(a), Fraction(b)
        if b == 0 or d == 0:
            return QuadExt(a, Fraction(0), 0)
        if d < 0:
            raise LinalgError("negative radicand")
        core, s = squarefree_split(d)
        if core == 1:
            return QuadExt(a + b * s, Fraction(0), 0)
        return QuadExt(a, b * s, core)

    # -- helpers ------------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def _coerce(self, other) -> "QuadExt | None":
        if isinstance(other, QuadExt):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(Fraction(other), Fraction(0), 0)
        return None

    def _join(self, other: "QuadExt") -> int:
        if self.d and other.d and self.d != other.d:
            raise LinalgError(f"mixed radicands {self.d} and {other.d}")
        return self.d or other.d

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a + o.a, self.b + o.b, self._join(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join(o)
        if self.d and o.d:
            return QuadExt(
                self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d
            )
        a = QuadExt(self.a * o.a, self.a * o.b + self.b * o.a, d)
        return a if a.b else QuadExt(a.a, Fraction(0), 0)

    __rmul__ = __mul__

    def inverse(self) -> "QuadExt":
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise ZeroDivisionError("zero QuadExt")
        return QuadExt(self.a / norm, -self.b / norm, self.d if self.b else 0)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o * self.inverse()

    def __pow__(self, k: int) -> "QuadExt":
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadExt(Fraction(1), Fraction(0), 0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    # -- order --------------------------------------------------------------

    def sign(self) -> int:
        return _sign_two_term(self.a, self.b, self.d)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.b == 0 and o.b == 0:
            return self.a == o.a
        return self.a == o.a and self.b == o.b and self.d == o.d

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None:
            raise TypeError(f"cannot compare QuadExt with {type(other)}")
        return quad_compare(self, o)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- conversion ---------------------------------------------------------

    def to_mpf(self, prec: int = DEFAULT_PREC) -> mpf:
        with mp.workprec(prec + 8):
            x = mpf(self.a.numerator) / self.a.denominator
            if self.b:
                x += (mpf(self.b.numerator) / self.b.denominator) * msqrt(self.d)
        with mp.workprec(prec):
            return +x

    def __float__(self):
        return float(self.to_mpf(64))

    def __repr__(self):
        if self.b == 0:
            return f"({self.a})"
        return f"({self.a}) + ({self.b})*sqrt({self.d})"


def _sign_rational(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _sign_two_term(a: Fraction, b: Fraction, d: int) -> int:
    """Exact sign of a + b*sqrt(d) for rational a, b and integer d >= 0."""
    if b == 0 or d == 0:
        return _sign_rational(a)
    r = isqrt(d)
    if r * r == d:
        return _sign_rational(a + b * r)
    sa, sb = _sign_rational(a), _sign_rational(b)
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    # opposite signs: compare a^2 with b^2 d
    return sa * _sign_rational(a * a - b * b * d)


def _sign_three_term(r: Fraction, b: Fraction, d: int, c: Fraction, e: int) -> int:
    """Exact sign of r + b*sqrt(d) + c*sqrt(e), d != e both nonsquare."""
    if b == 0:
        return _sign_two_term(r, c, e)
    if c == 0:
        return _sign_two_term(r, b, d)
    if d == e:
        return _sign_two_term(r, b + c, d)
    # t = sign of b*sqrt(d) + c*sqrt(e)
    sb, sc = _sign_rational(b), _sign_rational(c)
    if sb == sc:
        t = sb
    else:
        t = sb * _sign_rational(b * b * d - c * c * e)
    if r == 0:
        return t
    sr = _sign_rational(r)
    if t == 0 or t == sr:
        return sr
    # opposite: compare r^2 with (b sqrt(d) + c sqrt(e))^2
    u = r * r - b * b * d - c * c * e
    v = 2 * b * c
    return sr * _sign_two_term(u, -v, d * e)


def quad_compare(x: QuadExt, y: QuadExt) -> int:
    """Exact three-way comparison, permitting different radicands."""
    if x.b == 0 or y.b == 0 or x.d == y.d:
        d = x.d if x.b else y.d
        return _sign_two_term(x.a - y.a, x.b - y.b, d)
    return _sign_three_term(x.a - y.a, x.b, x.d, -y.b, y.d)


# ---------------------------------------------------------------------------
# 2x2 matrices


@dataclass(frozen=True, slots=True)
class Mat2:
    """Immutable 2x2 matrix over any scalar ring (int/Fraction/QuadExt/mpf)."""

    a: object
    b: object
    c: object
    d: object

    @staticmethod
    def identity() -> "Mat2":
        return Mat2(1, 0, 0, 1)

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __add__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def scale(self, k) -> "Mat2":
        return Mat2(k * self.a, k * self.b, k * self.c, k * self.d)

    def trace(self):
        return self.a + self.d

    def det(self):
        return self.a * self.d - self.b * self.c

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d)

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def map(self, fn) -> "Mat2":
        return Mat2(fn(self.a), fn(self.b), fn(self.c), fn(self.d))

    def is_nonnegative(self) -> bool:
        return all(_scalar_sign(x) >= 0 for x in self.entries())

    def is_positive(self) -> bool:
        return all(_scalar_sign(x) > 0 for x in self.entries())

    def is_exact(self) -> bool:
        return all(isinstance(x, (int, Fraction, QuadExt)) for x in self.entries())

    def __pow__(self, k: int) -> "Mat2":
        if k < 0:
            raise LinalgError("negative matrix power")
        result = Mat2.identity()
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def to_mpf(self, prec: int = DEFAULT_PREC) -> "Mat2":
        return self.map(lambda x: _to_mpf(x, prec))

    def __repr__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


def _scalar_sign(x) -> int:
    if isinstance(x, QuadExt):
        return x.sign()
    return (x > 0) - (x < 0)


def _to_mpf(x, prec: int) -> mpf:
    if isinstance(x, QuadExt):
        return x.to_mpf(prec)
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        with mp.workprec(prec):
            return mpf(x.numerator) / x.denominator
    with mp.workprec(prec):
        return +mpf(x)


def matrix_power(m: Mat2, k: int) -> Mat2:
    """Binary exponentiation; exact over exact scalars."""
    return m ** k


def product_of_word(a0: Mat2, a1: Mat2, w: Word) -> Mat2:
    """Matrix product indexed by a word, last letter leftmost.

    The word u of length m maps to M(u) = A_{u_m} ... A_{u_1}.  This
    reversed convention is enforced here and nowhere else; every consumer
    goes through this function.
    """
    if not w:
        raise LinalgError("empty word has no product")
    result = a1 if w[0] == "1" else a0
    for ch in w[1:]:
        result = (a1 if ch == "1" else a0) @ result
    return result


def product_of_word_scaled(a0: Mat2, a1: Mat2, w: Word, alpha) -> Mat2:
    """Product of the alpha-scaled family {A0, alpha*A1} over the word."""
    return product_of_word(a0, a1.scale(alpha), w)


# ---------------------------------------------------------------------------
# spectra


def _exact_sqrt(x: Fraction) -> QuadExt:
    """sqrt of a nonnegative rational as a QuadExt."""
    if x < 0:
        raise LinalgError("negative radicand")
    if x == 0:
        return QuadExt.make(0)
    n = x.numerator * x.denominator
    d, s = squarefree_split(n)
    if d == 1:
        return QuadExt.make(Fraction(s, x.denominator))
    return QuadExt.make(0, Fraction(s, x.denominator), d)


def eigenvalues_exact(m: Mat2) -> tuple[QuadExt, QuadExt]:
    """Both eigenvalues of an exact matrix with real spectrum, largest first."""
    t, det = Fraction(m.trace()), Fraction(m.det())
    disc = t * t - 4 * det
    if disc < 0:
        raise LinalgError("complex eigenvalues")
    root = _exact_sqrt(disc)
    half = Fraction(1, 2)
    return (root + t) * half, (QuadExt.make(t) - root) * half


def spectral_radius(m: Mat2, prec: int = DEFAULT_PREC):
    """Largest eigenvalue modulus.

    Exact matrices with real spectrum give an exact QuadExt; complex
    spectrum falls back to sqrt(det).  Float matrices evaluate at ``prec``.
    """
    if m.is_exact():
        if any(isinstance(x, QuadExt) and x.b for x in m.entries()):
            raise LinalgError(
                "exact spectral radius needs rational entries; "
                "rank-one products go through rank_one_spectral_radius"
            )
        t = Fraction(m.trace() if not isinstance(m.trace(), QuadExt) else m.trace().a)
        det = Fraction(m.det() if not isinstance(m.det(), QuadExt) else m.det().a)
        disc = t * t - 4 * det
        if disc < 0:
            return _exact_sqrt(det)
        return (_exact_sqrt(disc) + abs(t)) * Fraction(1, 2)
    with mp.workprec(prec):
        t, det = mpf(m.trace()), mpf(m.det())
        disc = t * t - 4 * det
        if disc < 0:
            return msqrt(det)
        return (abs(t) + msqrt(disc)) / 2


def spectral_radius_mpf(m: Mat2, prec: int = DEFAULT_PREC) -> mpf:
    r = spectral_radius(m, prec)
    return r.to_mpf(prec) if isinstance(r, QuadExt) else r


def perron_projection(m: Mat2, prec: int = DEFAULT_PREC) -> Mat2:
    """Projection onto the leading eigenspace along the other eigenspace.

    Equals lim rho(M)^-n M^n for matrices whose leading eigenvalue is the
    spectral radius (nonnegative matrices with positive trace).  Computed
    as (M - lam2 I) / (lam1 - lam2); satisfies P^2 = P, MP = PM = lam1 P,
    det P = 0.  Raises RepeatedEigenvalueError when lam1 == lam2, which is
    exactly the non-diagonalisable case for our inputs.
    """
    if m.is_exact():
        lam1, lam2 = eigenvalues_exact(m)
        if lam1 == lam2:
            raise RepeatedEigenvalueError(f"repeated eigenvalue {lam1} of {m}")
        gap = lam1 - lam2
        return Mat2(
            (QuadExt.make(Fraction(m.a)) - lam2) / gap,
            QuadExt.make(Fraction(m.b)) / gap,
            QuadExt.make(Fraction(m.c)) / gap,
            (QuadExt.make(Fraction(m.d)) - lam2) / gap,
        )
    with mp.workprec(prec):
        t, det = mpf(m.trace()), mpf(m.det())
        disc = t * t - 4 * det
        if disc <= 0 or msqrt(disc) < abs(t) * mpf(2) ** (-prec + 16):
            raise RepeatedEigenvalueError(
                f"eigenvalue gap below tolerance 2^{-prec + 16} for {m}"
            )
        root = msqrt(disc)
        lam2 = (t - root) / 2
        return Mat2(
            (mpf(m.a) - lam2) / root,
            mpf(m.b) / root,
            mpf(m.c) / root,
            (mpf(m.d) - lam2) / root,
        )


def rank_one_spectral_radius(m: Mat2, prec: int = DEFAULT_PREC):
    """Spectral radius |trace| of a matrix with determinant zero.

    Avoids the cancellation-prone quadratic formula for rank-one products
    such as (Perron projection) * (family matrix).  Exact inputs must have
    det exactly zero; float inputs allow a relative tolerance.
    """
    det = m.det()
    if m.is_exact():
        if (det != 0) if not isinstance(det, QuadExt) else det.sign() != 0:
            raise LinalgError(f"determinant {det} is not zero")
        t = m.trace()
        return abs(t) if isinstance(t, QuadExt) else abs(QuadExt.make(Fraction(t)))
    with mp.workprec(prec):
        t = mpf(m.trace())
        scale = max(abs(mpf(x)) for x in m.entries()) or mpf(1)
        if abs(mpf(det)) > scale * scale * mpf(2) ** (-prec + 24):
            raise LinalgError(f"determinant {det} not within rank-one tolerance")
        return abs(t)


# ---------------------------------------------------------------------------
# norms (all submultiplicative)


def operator_norm_rowsum(m: Mat2):
    """Max absolute row sum (the operator norm induced by the sup norm)."""
    r1 = abs(m.a) + abs(m.b)
    r2 = abs(m.c) + abs(m.d)
    return r1 if r1 >= r2 else r2


def frobenius_norm(m: Mat2, prec: int = DEFAULT_PREC) -> mpf:
    with mp.workprec(prec):
        return msqrt(sum(mpf(x) ** 2 for x in m.to_mpf(prec).entries()))


def sigma_norm(m: Mat2, prec: int = DEFAULT_PREC) -> mpf:
    """Largest singular value (operator norm for the Euclidean norm)."""
    with mp.workprec(prec):
        mm = m.to_mpf(prec)
        f2 = sum(mpf(x) ** 2 for x in mm.entries())
        det = mm.det()
        gap = f2 * f2 - 4 * det * det
        if gap < 0:
            gap = mpf(0)
        return msqrt((f2 + msqrt(gap)) / 2)
