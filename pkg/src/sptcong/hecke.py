"""Weight 3/2 Hecke operators T(ell^2m) on q-expansions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import InsufficientPrecision, PreconditionViolation, RecursionMismatch
from .numtheory import TRIVIAL, CharacterSpec, is_prime, kronecker
from .series import INF, UNIT, QSeries, scale, sub


@dataclass(frozen=True)
class HeckeSpec:
    ell: int
    m: int = 1
    character: CharacterSpec = TRIVIAL

    def __post_init__(self):
        if self.ell == 2 or not is_prime(self.ell):
            raise ValueError(f"ell={self.ell} must be an odd prime")
        if self.m < 0:
            raise ValueError("m must be nonnegative")
        if self.character.discriminant % self.ell == 0:
            raise ValueError(f"ell={self.ell} divides the character discriminant")

    @property
    def chi_ell(self) -> int:
        return self.character(self.ell)


def _out_precision(series: QSeries, factor: int):
    p = series.q_precision
    return INF if p == INF else p // factor


def apply_T_ell_squared(F: QSeries, ell: int, character: CharacterSpec = TRIVIAL) -> QSeries:
    """F | T(ell^2): b(n) = a(ell^2 n) + chi(ell) (-n/ell) a(n) + ell a(n/ell^2).

    Output precision is floor(q-precision / ell^2).
    """
    F._require_integral()
    l2 = ell * ell
    pout = _out_precision(F, l2)
    chi = character(ell)
    # Legendre symbol of -n depends only on n mod ell
    legendre = [kronecker(-r, ell) for r in range(ell)]
    num, den = F.integer_terms()
    out: dict[int, int] = {}
    for k, c in num.items():
        e = k // UNIT
        if e % l2 == 0 and e // l2 < pout:
            n = e // l2
            out[n] = out.get(n, 0) + c
        if chi and e < pout:
            s = legendre[e % ell]
            if s:
                out[e] = out.get(e, 0) + chi * s * c
        if l2 * e < pout:
            out[l2 * e] = out.get(l2 * e, 0) + ell * c
    prec = INF if pout == INF else UNIT * pout
    return QSeries._raw({UNIT * n: c for n, c in out.items()}, den, prec)


@dataclass
class HeckeTriple:
    """A source series with a memo of its images under T(ell^2m)."""

    F0: QSeries
    ell: int
    character: CharacterSpec = TRIVIAL
    cache: dict = field(default_factory=dict)

    def __post_init__(self):
        HeckeSpec(self.ell, 0, self.character)
        self.cache.setdefault(0, self.F0)

    def T(self, series: QSeries) -> QSeries:
        return apply_T_ell_squared(series, self.ell, self.character)

    def power(self, m: int) -> QSeries:
        """F0 | T(ell^2m) via T(ell^2m) = T(ell^2m-2) T(ell^2) - ell T(ell^2m-4)."""
        if m in self.cache:
            return self.cache[m]
        if m == 1:
            result = self.T(self.F0)
        else:
            result = sub(self.T(self.power(m - 1)), scale(self.power(m - 2), self.ell))
        self.cache[m] = result
        return result

    def source_precision_for(self, m: int, n_out: int) -> int:
        return self.ell ** (2 * m) * n_out


def apply_T_power(triple: HeckeTriple, m: int, n_out=None, order: str = "outer") -> QSeries:
    """F0 | T(ell^2m).

    ``order="outer"`` applies T(ell^2) last (T(ell^2m-2) T(ell^2) in operator
    notation acting on the right); ``"inner"`` applies it first.
    """
    if n_out is not None:
        need = triple.source_precision_for(m, n_out)
        if triple.F0.q_precision < need:
            raise InsufficientPrecision(
                f"T({triple.ell}^{2 * m}) to q^{n_out} needs source precision {need}",
                required=need)
    if order == "outer" or m <= 1:
        return triple.power(m)
    if order != "inner":
        raise ValueError(f"unknown order {order!r}")
    # T(ell^2) first, then T(ell^2m-2) on the image, minus ell T(ell^2m-4)
    image = HeckeTriple(triple.T(triple.F0), triple.ell, triple.character)
    return sub(image.power(m - 1), scale(triple.power(m - 2), triple.ell))


def build_F_m(triple: HeckeTriple, m: int, check_recursion: bool = True) -> QSeries:
    """F_m = F0|T(ell^2m) - chi(ell) F0|T(ell^2m-2); F_0 is F0 itself."""
    if m == 0:
        return triple.F0
    chi = triple.character(triple.ell)
    F_m = sub(triple.power(m), scale(triple.power(m - 1), chi))
    if check_recursion and m >= 2:
        prev = build_F_m(triple, m - 1, check_recursion=False)
        prev2 = build_F_m(triple, m - 2, check_recursion=False)
        rec = sub(triple.T(prev), scale(prev2, triple.ell))
        if not F_m.agrees_with(rec):
            raise RecursionMismatch(
                f"F_{m} disagrees with F_{m - 1}|T - ell F_{m - 2} at index "
                f"{F_m.truncate(rec.precision).first_difference(rec.truncate(F_m.precision))}")
    return F_m


def prop22_closed_form(a0: Callable[[int], Fraction], ell: int, character: CharacterSpec,
                       m: int, n: int, part: str) -> Fraction:
    """Closed-form prediction for the coefficients of F_m.

    part "i":   value of a_m(ell^2 n) - ell a_{m-1}(n)
    part "ii":  a_m(n) when ell does not divide n
    part "iii": a_m(n) when ell exactly divides n
    """
    if m < 1:
        raise PreconditionViolation("closed forms are stated for m >= 1")
    chi = character(ell)
    l2 = ell * ell
    if part == "i":
        return a0(l2 ** (m + 1) * n) - chi * a0(l2 ** m * n)
    if part == "ii":
        if n % ell == 0:
            raise PreconditionViolation(f"part (ii) needs ell={ell} not dividing n={n}")
        total = Fraction(0)
        for k in range(1, m + 1):
            total += (-1) ** k * chi ** k * a0(l2 ** (m - k) * n)
        return a0(l2 ** m * n) + (1 - kronecker(-n, ell)) * total
    if part == "iii":
        if n % ell or n % l2 == 0:
            raise PreconditionViolation(f"part (iii) needs ell={ell} to divide n={n} exactly once")
        return a0(l2 ** m * n) - chi * a0(l2 ** (m - 1) * n)
    raise ValueError(f"unknown part {part!r}")


def coefficient_accessor(series: QSeries) -> Callable[[int], Fraction]:
    return series.q_coeff


__all__ = [
    "HeckeSpec", "HeckeTriple", "apply_T_ell_squared", "apply_T_power", "build_F_m",
    "prop22_closed_form", "coefficient_accessor",
]
