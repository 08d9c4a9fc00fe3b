"""One-parameter matrix families {A0, alpha*A1} and their hypothesis checks.

A family fixes the two generators; the parameter alpha only ever scales A1.
Built-ins cover the three standard examples: the unipotent integer pair
(hmst), the exponential triangular pair (Bousch-Mairesse), and the
triangular contraction pair (Kozyakin).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from mpmath import mp, mpf, exp as mexp

from .linalg2 import Mat2, QuadExt, product_of_word
from .precision import DEFAULT_PREC, mpf_from_fraction


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class MatrixFamily:
    """Pair (A0, A1) with the scaling convention A0 fixed, A1 -> alpha*A1.

    ``integral`` marks exact rational entries (enables exact interval
    endpoints downstream).  ``asserted_sturmian`` is an explicit assertion
    that extremal growth follows mechanical-word structure; it is never
    inferred, and results for families lacking it are conditional.
    """

    a0: Mat2
    a1: Mat2
    label: str = "custom"
    integral: bool = True
    asserted_sturmian: bool = False
    prec: int = DEFAULT_PREC

    def __post_init__(self):
        if self.a0.entries() == self.a1.entries():
            raise FamilyError("generators must differ")

    def scaled_a1(self, alpha) -> Mat2:
        return self.a1.scale(alpha)

    def product(self, w: str) -> Mat2:
        if self.integral:
            return product_of_word(self.a0, self.a1, w)
        with mp.workprec(self.prec):
            return product_of_word(self.a0, self.a1, w)

    def product_scaled(self, w: str, alpha) -> Mat2:
        if self.integral and isinstance(alpha, (int, Fraction)):
            return product_of_word(self.a0, self.a1.scale(Fraction(alpha)), w)
        with mp.workprec(self.prec):
            if isinstance(alpha, (int, Fraction)):
                alpha = mpf_from_fraction(alpha, self.prec)
            return product_of_word(self.a0, self.a1.scale(mpf(alpha)), w)

    def is_unimodular(self) -> bool:
        return self.integral and self.a0.det() == 1 and self.a1.det() == 1

    # -- config-file form -------------------------------------------------

    def to_config(self) -> dict:
        def enc(x):
            if isinstance(x, (int, Fraction)):
                f = Fraction(x)
                return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
            return mp.nstr(mpf(x), 40)

        out = {
            "label": self.label,
            "A0": [[enc(self.a0.a), enc(self.a0.b)], [enc(self.a0.c), enc(self.a0.d)]],
            "A1": [[enc(self.a1.a), enc(self.a1.b)], [enc(self.a1.c), enc(self.a1.d)]],
            "asserted_sturmian": self.asserted_sturmian,
        }
        if not self.integral:
            out["prec"] = self.prec
        return out

    @classmethod
    def from_config(cls, cfg: dict) -> "MatrixFamily":
        prec = int(cfg.get("prec", 0))
        integral = prec == 0

        def dec(s):
            if integral:
                return Fraction(str(s))
            with mp.workprec(prec):
                if isinstance(s, str) and "/" in s:
                    f = Fraction(s)
                    return mpf(f.numerator) / f.denominator
                return mpf(str(s))

        try:
            a0 = Mat2(*(dec(x) for row in cfg["A0"] for x in row))
            a1 = Mat2(*(dec(x) for row in cfg["A1"] for x in row))
        except KeyError as e:
            raise FamilyError(f"config missing {e}") from None
        return cls(
            a0,
            a1,
            label=str(cfg.get("label", "custom")),
            integral=integral,
            asserted_sturmian=bool(cfg.get("asserted_sturmian", False)),
            prec=prec or DEFAULT_PREC,
        )

    @classmethod
    def from_config_file(cls, path: str) -> "MatrixFamily":
        with open(path) as fh:
            return cls.from_config(json.load(fh))


def builtin_hmst() -> MatrixFamily:
    """The unipotent integer pair [[1,1],[0,1]], [[1,0],[1,1]] (A0 = A1^T)."""
    return MatrixFamily(
        Mat2(1, 1, 0, 1), Mat2(1, 0, 1, 1), label="hmst", integral=True,
        asserted_sturmian=True,
    )


def builtin_bousch_mairesse(kappa, h0, h1, prec: int = DEFAULT_PREC) -> MatrixFamily:
    """Exponential triangular pair; needs kappa, h0, h1 > 0 and h0 + h1 < 2."""
    with mp.workprec(prec):
        kappa, h0, h1 = mpf(str(kappa)), mpf(str(h0)), mpf(str(h1))
        if not (kappa > 0 and h0 > 0 and h1 > 0 and h0 + h1 < 2):
            raise FamilyError("need kappa, h0, h1 > 0 and h0 + h1 < 2")
        a0 = Mat2(mexp(kappa * h0) + 1, mpf(0), mexp(kappa), mpf(1))
        a1 = Mat2(mpf(1), mexp(kappa), mpf(0), mexp(kappa * h1) + 1)
    return MatrixFamily(
        a0, a1, label="bousch-mairesse", integral=False, asserted_sturmian=True,
        prec=prec,
    )


def builtin_kozyakin(a, b, c, d) -> MatrixFamily:
    """Triangular pair [[a,b],[0,1]], [[1,0],[c,d]] with 0 < a,d < 1 <= bc.

    Only the positive case b, c > 0 is supported; negative b, c would need
    a similarity change of basis that is out of scope here.
    """
    a, b, c, d = (Fraction(str(x)) for x in (a, b, c, d))
    if not (0 < a < 1 and 0 < d < 1 and b > 0 and c > 0 and b * c >= 1):
        raise FamilyError("need 0 < a,d < 1 and b,c > 0 with bc >= 1")
    return MatrixFamily(
        Mat2(a, b, Fraction(0), Fraction(1)),
        Mat2(Fraction(1), Fraction(0), c, d),
        label="kozyakin", integral=True, asserted_sturmian=True,
    )


BUILTINS = {
    "hmst": builtin_hmst,
    "kozyakin": lambda: builtin_kozyakin(Fraction(1, 2), 1, 1, Fraction(1, 2)),
    "bousch-mairesse": lambda: builtin_bousch_mairesse(1, "0.5", "0.5"),
}


def resolve_family(selector: str, prec: int = DEFAULT_PREC) -> MatrixFamily:
    """Builtin name or path to a JSON family config."""
    if selector in BUILTINS:
        return BUILTINS[selector]()
    return MatrixFamily.from_config_file(selector)


def dual_family(fam: MatrixFamily) -> MatrixFamily:
    """Swap the roles of the generators.

    The ratio function of the swapped family, evaluated at 1/alpha, is the
    complement of the original: r(alpha) = 1 - r_swapped(1/alpha).
    """
    return MatrixFamily(
        fam.a1, fam.a0, label=f"dual({fam.label})", integral=fam.integral,
        asserted_sturmian=fam.asserted_sturmian, prec=fam.prec,
    )


# ---------------------------------------------------------------------------
# technical hypothesis checks


@dataclass
class HypothesisReport:
    """Per-condition verdicts; ``overall`` passes only if every checked
    condition passed (unchecked conditions stay None and do not fail it).
    """

    nonnegative: Optional[bool] = None
    invertible: Optional[bool] = None
    positive_trace: Optional[bool] = None
    no_common_invariant_subspace: Optional[bool] = None
    mixed_products_positive: Optional[bool] = None
    mixed_positivity_method: str = ""
    condition_v_spot: Optional[bool] = None
    condition_v_detail: str = "not checked"
    notes: list[str] = field(default_factory=list)

    @property
    def overall(self) -> str:
        checked = [
            v
            for v in (
                self.nonnegative,
                self.invertible,
                self.positive_trace,
                self.no_common_invariant_subspace,
                self.mixed_products_positive,
                self.condition_v_spot,
            )
            if v is not None
        ]
        if not checked:
            return "indeterminate"
        return "pass" if all(checked) else "fail"


def _sign(x) -> int:
    if isinstance(x, QuadExt):
        return x.sign()
    return (x > 0) - (x < 0)


def _eigendirection_quadratic(m: Mat2) -> tuple:
    """Coefficients (c2, c1, c0) of the quadratic whose projective roots
    are the invariant directions (x : 1), plus the (1 : 0) special case
    encoded by c2 == 0."""
    return (m.c, m.d - m.a, -m.b)


def _have_common_invariant_subspace(a0: Mat2, a1: Mat2, tol=None) -> bool:
    """2x2 case: a common invariant subspace is a common eigendirection.

    The invariant directions of each matrix are the roots of a quadratic
    form; a common direction exists iff the two quadratics have a common
    root, detected by the resultant.  A matrix that is scalar makes every
    direction invariant.
    """
    qa, qb = _eigendirection_quadratic(a0), _eigendirection_quadratic(a1)

    def is_zero(x) -> bool:
        if tol is None:
            return _sign(x) == 0
        return abs(x) <= tol

    if all(is_zero(c) for c in qa) or all(is_zero(c) for c in qb):
        return True  # scalar matrix: shares any eigendirection of the other
    a2, a1c, a0c = qa
    b2, b1, b0 = qb
    resultant = (
        (a2 * b0 - a0c * b2) ** 2 - (a2 * b1 - a1c * b2) * (a1c * b0 - a0c * b1)
    )
    return is_zero(resultant)


def check_technical_hypotheses(fam: MatrixFamily, depth: int = 8) -> HypothesisReport:
    """Verify the checkable structural conditions on the generators.

    Nonnegativity, invertibility, positive traces, and absence of a common
    invariant subspace are decided outright (exactly for integral
    families).  Positivity of every mixed product is verified by the
    closed criterion -- strictly positive diagonals plus positive A0*A1 and
    A1*A0 force every mixed product positive, because a positive-diagonal
    factor preserves positivity and every mixed word contains an adjacent
    01 or 10 -- and falls back to exhaustive enumeration up to ``depth``
    when the criterion does not apply.  Extremality spot checks are a
    separate, costlier concern; see the oracle module.
    """
    if depth < 2:
        raise FamilyError("need depth >= 2")
    rep = HypothesisReport()
    a0, a1 = fam.a0, fam.a1
    rep.nonnegative = a0.is_nonnegative() and a1.is_nonnegative()
    tol = None
    if not fam.integral:
        with mp.workprec(fam.prec):
            scale = max(abs(mpf(x)) for x in a0.entries() + a1.entries())
            tol = scale * scale * mpf(2) ** (-fam.prec + 24)
    d0, d1 = a0.det(), a1.det()
    rep.invertible = not (_is_zero(d0, tol) or _is_zero(d1, tol))
    rep.positive_trace = _sign(a0.trace()) > 0 and _sign(a1.trace()) > 0
    rep.no_common_invariant_subspace = not _have_common_invariant_subspace(a0, a1, tol)

    diag_pos = all(_sign(x) > 0 for x in (a0.a, a0.d, a1.a, a1.d))
    if diag_pos and (a0 @ a1).is_positive() and (a1 @ a0).is_positive():
        rep.mixed_products_positive = True
        rep.mixed_positivity_method = "positive-diagonal criterion"
    else:
        ok = True
        for n in range(2, depth + 1):
            for bits in range(1, 2 ** n - 1):  # skip pure words 0^n, 1^n
                w = format(bits, f"0{n}b")
                if not fam.product(w).is_positive():
                    ok = False
                    rep.notes.append(f"non-positive mixed product at word {w}")
                    break
            if not ok:
                break
        rep.mixed_products_positive = ok
        rep.mixed_positivity_method = f"exhaustive to depth {depth}"
    return rep


def _is_zero(x, tol) -> bool:
    if tol is None:
        return _sign(x) == 0
    return abs(x) <= tol
