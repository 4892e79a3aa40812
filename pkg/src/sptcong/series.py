"""Truncated Laurent q-series with exact rational coefficients.

Exponents live on the lattice (1/24)Z: a term ``c * q^(k/24)`` is stored
under the integer *index* ``k``.  Integral q-powers are therefore indices
divisible by ``UNIT``.  Coefficients are kept as integer numerators over a
single common denominator; the public view is ``fractions.Fraction``.

``precision`` is an index: every term with index below it is exact, nothing
is known at or above it.  ``math.inf`` marks an exact (finite) series.
"""

from __future__ import annotations

import builtins
import json
import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Iterator, Mapping

from . import _dense
from .errors import (
    DenominatorDivisibleByEll,
    IndivisibleExponent,
    InsufficientPrecision,
    NonIntegralExponent,
    ZeroLeadingCoefficient,
)

UNIT = 24
INF = math.inf


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, Rational):
        return Fraction(c.numerator, c.denominator)
    raise TypeError(f"coefficient {c!r} is not rational")


def _check_precision(p):
    if p == INF:
        return INF
    if isinstance(p, float):
        raise TypeError("precision must be an integer index or math.inf")
    return int(p)


class QSeries:
    """Immutable truncated q-series on the 1/24 exponent lattice."""

    __slots__ = ("_num", "_den", "precision")

    def __init__(self, coeffs: Mapping[int, object] | None = None, precision=INF):
        precision = _check_precision(precision)
        fracs = {}
        for k, c in (coeffs or {}).items():
            c = _as_fraction(c)
            if c and k < precision:
                fracs[int(k)] = c
        den = 1
        for c in fracs.values():
            den = den * c.denominator // math.gcd(den, c.denominator)
        num = {k: c.numerator * (den // c.denominator) for k, c in fracs.items()}
        self._num = num
        self._den = den
        self.precision = precision

    @classmethod
    def _raw(cls, num: dict[int, int], den: int, precision) -> "QSeries":
        # trusted constructor: drops zeros/out-of-range terms, reduces den
        self = object.__new__(cls)
        if precision != INF:
            num = {k: c for k, c in num.items() if c and k < precision}
        else:
            num = {k: c for k, c in num.items() if c}
        if den < 0:
            num = {k: -c for k, c in num.items()}
            den = -den
        if den != 1 and num:
            g = math.gcd(den, *num.values())
            if g > 1:
                den //= g
                num = {k: c // g for k, c in num.items()}
        elif not num:
            den = 1
        self._num = num
        self._den = den
        self.precision = precision
        return self

    # -- construction helpers -------------------------------------------

    @classmethod
    def from_q(cls, coeffs: Mapping[int, object], q_precision=INF) -> "QSeries":
        """Build from a map of *integral q-exponents* to coefficients."""
        prec = INF if q_precision == INF else UNIT * int(q_precision)
        return cls({UNIT * n: c for n, c in coeffs.items()}, prec)

    @classmethod
    def from_dense(cls, coeffs: Iterable[int], q_precision=None, *, start=0, step=1,
                   den=1) -> "QSeries":
        """Integer coefficients ``coeffs[k]`` placed at q-exponent ``start + step*k``."""
        coeffs = list(coeffs)
        if q_precision is None:
            q_precision = start + step * len(coeffs)
        num = {UNIT * (start + step * k): c for k, c in enumerate(coeffs) if c}
        prec = INF if q_precision == INF else UNIT * int(q_precision)
        return cls._raw(num, den, prec)

    @classmethod
    def zero(cls, precision=INF) -> "QSeries":
        return cls._raw({}, 1, _check_precision(precision))

    @classmethod
    def one(cls) -> "QSeries":
        return cls._raw({0: 1}, 1, INF)

    @classmethod
    def monomial(cls, index: int, coeff=1, precision=INF) -> "QSeries":
        return cls({index: coeff}, precision)

    # -- views -----------------------------------------------------------

    @property
    def coeffs(self) -> dict[int, Fraction]:
        d = self._den
        return {k: Fraction(self._num[k], d) for k in sorted(self._num)}

    @property
    def denominator(self) -> int:
        """Least common denominator of all stored coefficients."""
        return self._den

    def integer_terms(self) -> tuple[dict[int, int], int]:
        """Numerator map and the common denominator (read-only use)."""
        return self._num, self._den

    @property
    def min_index(self):
        return min(self._num) if self._num else None

    @property
    def max_index(self):
        return max(self._num) if self._num else None

    @property
    def valuation(self):
        """Lowest stored index, or the precision for an unknown-zero series."""
        return min(self._num) if self._num else self.precision

    @property
    def q_precision(self):
        """Number of integral q-exponents known: exponents n with 24n < precision."""
        if self.precision == INF:
            return INF
        return -((-self.precision) // UNIT)

    def __len__(self) -> int:
        return len(self._num)

    def __iter__(self) -> Iterator[tuple[int, Fraction]]:
        d = self._den
        for k in sorted(self._num):
            yield k, Fraction(self._num[k], d)

    def is_zero(self) -> bool:
        return not self._num

    def is_integral(self) -> bool:
        return self._den == 1

    def has_integral_exponents(self) -> bool:
        return all(k % UNIT == 0 for k in self._num)

    def coeff(self, index: int) -> Fraction:
        """Coefficient at a lattice index."""
        if index >= self.precision:
            raise InsufficientPrecision(
                f"index {index} is at or beyond precision {self.precision}",
                required=index // UNIT + 1,
            )
        c = self._num.get(index)
        return Fraction(c, self._den) if c else Fraction(0)

    def q_coeff(self, n: int) -> Fraction:
        """Coefficient of q^n for an integral exponent n."""
        return self.coeff(UNIT * n)

    def q_coeffs(self) -> dict[int, Fraction]:
        """Map of integral q-exponent to coefficient."""
        self._require_integral()
        d = self._den
        return {k // UNIT: Fraction(self._num[k], d) for k in sorted(self._num)}

    def truncate(self, precision) -> "QSeries":
        precision = _check_precision(precision)
        if precision >= self.precision:
            return self
        return QSeries._raw(self._num, self._den, precision)

    def truncate_q(self, q_precision) -> "QSeries":
        return self.truncate(UNIT * q_precision if q_precision != INF else INF)

    def _require_integral(self):
        for k in self._num:
            if k % UNIT:
                raise NonIntegralExponent(k)

    # -- equality / display ----------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (self.precision == other.precision and self._den == other._den
                and self._num == other._num)

    def __hash__(self):
        return hash((self.precision, self._den, frozenset(self._num.items())))

    def agrees_with(self, other: "QSeries") -> bool:
        """Equality of all terms below the smaller of the two precisions."""
        p = min(self.precision, other.precision)
        return self.truncate(p)._terms_equal(other.truncate(p))

    def _terms_equal(self, other):
        return self._den == other._den and self._num == other._num

    def first_difference(self, other: "QSeries"):
        """Lowest index below the shared precision where the two differ, else None."""
        diff = sub(self, other)
        return diff.min_index

    def __repr__(self):
        shown = []
        for k, c in list(self)[:6]:
            if k % UNIT == 0:
                shown.append(f"{c}*q^{k // UNIT}")
            else:
                shown.append(f"{c}*q^({k}/24)")
        more = " + ..." if len(self) > 6 else ""
        prec = "exact" if self.precision == INF else f"O(q^({self.precision}/24))"
        return f"QSeries({' + '.join(shown) or '0'}{more}; {prec})"

    # -- arithmetic operators --------------------------------------------

    def __add__(self, other):
        if isinstance(other, QSeries):
            return add(self, other)
        return add(self, constant(other))

    __radd__ = __add__

    def __neg__(self):
        return QSeries._raw({k: -c for k, c in self._num.items()}, self._den, self.precision)

    def __sub__(self, other):
        if isinstance(other, QSeries):
            return sub(self, other)
        return sub(self, constant(other))

    def __rsub__(self, other):
        return sub(constant(other), self)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return mul(self, invert(other))
        return scale(self, 1 / _as_fraction(other))

    def __pow__(self, k):
        return pow(self, k)

    # -- serialization ------------------------------------------------------

    def to_json_obj(self) -> dict:
        d = self._den
        terms = []
        for k in sorted(self._num):
            c = self._num[k]
            g = math.gcd(c, d)
            terms.append([k, c // g, d // g])
        prec = None if self.precision == INF else self.precision
        return {"unit": UNIT, "precision": prec, "terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "QSeries":
        if obj.get("unit") != UNIT:
            raise ValueError(f"unsupported exponent unit {obj.get('unit')!r}")
        prec = obj["precision"]
        prec = INF if prec is None else int(prec)
        coeffs = {}
        last = None
        for k, n, d in obj["terms"]:
            if last is not None and k <= last:
                raise ValueError("terms must be strictly sorted by index")
            last = k
            coeffs[k] = Fraction(n, d)
        return cls(coeffs, prec)

    @classmethod
    def from_json(cls, text: str) -> "QSeries":
        return cls.from_json_obj(json.loads(text))


def constant(c, precision=INF) -> QSeries:
    return QSeries({0: c}, precision)


def _pmin(a, b):
    return a if a <= b else b


def add(a: QSeries, b: QSeries) -> QSeries:
    """Coefficientwise sum; precision is the smaller of the two."""
    p = _pmin(a.precision, b.precision)
    da, db = a._den, b._den
    if da == db:
        num = dict(a._num)
        for k, c in b._num.items():
            num[k] = num.get(k, 0) + c
        return QSeries._raw(num, da, p)
    den = da * db // math.gcd(da, db)
    fa, fb = den // da, den // db
    num = {k: c * fa for k, c in a._num.items()}
    for k, c in b._num.items():
        num[k] = num.get(k, 0) + c * fb
    return QSeries._raw(num, den, p)


def sub(a: QSeries, b: QSeries) -> QSeries:
    return add(a, -b)


def scale(a: QSeries, c) -> QSeries:
    """Multiply every coefficient by a rational constant."""
    c = _as_fraction(c)
    if not c:
        return QSeries.zero(a.precision)
    return QSeries._raw({k: v * c.numerator for k, v in a._num.items()},
                        a._den * c.denominator, a.precision)


def shift(a: QSeries, index_offset: int) -> QSeries:
    """Multiply by q^(index_offset/24)."""
    p = a.precision if a.precision == INF else a.precision + index_offset
    return QSeries._raw({k + index_offset: c for k, c in a._num.items()}, a._den, p)


def shift_q(a: QSeries, n: int) -> QSeries:
    return shift(a, UNIT * n)


def _lattice(num_maps, origin_list):
    g = 0
    for num, o in zip(num_maps, origin_list):
        for k in num:
            g = math.gcd(g, k - o)
    return g or 1


def mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product truncated to min(a.prec + val(b), b.prec + val(a))."""
    va, vb = a.valuation, b.valuation
    p = _pmin(a.precision + vb, b.precision + va)
    if not a._num or not b._num:
        return QSeries.zero(p)
    den = a._den * b._den
    oa, ob = va, vb
    # only terms that can land below p matter
    if p != INF:
        an = {k: c for k, c in a._num.items() if k + ob < p}
        bn = {k: c for k, c in b._num.items() if k + oa < p}
    else:
        an, bn = a._num, b._num
    if not an or not bn:
        return QSeries.zero(p)
    if len(an) * len(bn) <= 4096 or min(len(an), len(bn)) <= 4:
        out: dict[int, int] = {}
        for i, x in an.items():
            for j, y in bn.items():
                k = i + j
                if k < p:
                    out[k] = out.get(k, 0) + x * y
        return QSeries._raw(out, den, p)
    g = _lattice([an, bn], [oa, ob])
    la = (max(an) - oa) // g + 1
    lb = (max(bn) - ob) // g + 1
    n = la + lb - 1
    if p != INF:
        n = min(n, -((oa + ob - p) // g))
    da = [0] * la
    for k, c in an.items():
        da[(k - oa) // g] = c
    db = [0] * lb
    for k, c in bn.items():
        db[(k - ob) // g] = c
    if a is b:
        db = da
    prod = _dense.mul_trunc(da, db, n)
    base = oa + ob
    return QSeries._raw({base + g * i: c for i, c in enumerate(prod) if c}, den, p)


def invert(a: QSeries, precision=None) -> QSeries:
    """Multiplicative inverse.

    The result is known to index ``a.precision - 2*val(a)``; for an exact
    input a target ``precision`` (index) must be given.
    """
    if not a._num:
        raise ZeroLeadingCoefficient("cannot invert a series with no known nonzero term")
    v = a.min_index
    p = a.precision - 2 * v if a.precision != INF else INF
    if precision is not None:
        p = _pmin(p, _check_precision(precision))
    if p == INF:
        if len(a._num) == 1:
            c = Fraction(a._num[v], a._den)
            return QSeries({-v: 1 / c}, INF)
        raise ValueError("inverse of an exact non-monomial series needs a target precision")
    if p <= -v:
        return QSeries.zero(p)
    g = _lattice([a._num], [v])
    n = -((-v - p) // g)  # relative terms needed: indices -v + g*k < p
    dense = [0] * n
    for k, c in a._num.items():
        r = (k - v) // g
        if r < n:
            dense[r] = c
    coeffs, d = _dense.inverse(dense, n)
    # 1/a = den * q^(-v) * sum coeffs[k] / d^(k+1) x^k
    if d == 1:
        num = {-v + g * k: c for k, c in enumerate(coeffs) if c}
        return scale(QSeries._raw(num, 1, p), a._den)
    out = {-v + g * k: Fraction(c * a._den, d ** (k + 1)) for k, c in enumerate(coeffs) if c}
    return QSeries(out, p)


def pow(a: QSeries, k: int) -> QSeries:
    """Integer power by repeated squaring; negative powers go through invert."""
    if k == 0:
        return QSeries.one()
    if k < 0:
        return pow(invert(a), -k)
    result = None
    base = a
    while True:
        if k & 1:
            result = base if result is None else mul(result, base)
        k >>= 1
        if not k:
            return result
        base = mul(base, base)


def q_derivative(a: QSeries) -> QSeries:
    """q d/dq: the term c*q^n becomes n*c*q^n."""
    a._require_integral()
    return QSeries._raw({k: c * (k // UNIT) for k, c in a._num.items()}, a._den, a.precision)


def dilate(a: QSeries, t: int) -> QSeries:
    """Substitute q -> q^t (tau -> t*tau)."""
    if t < 1:
        raise ValueError("dilation factor must be a positive integer")
    p = a.precision if a.precision == INF else a.precision * t
    return QSeries._raw({k * t: c for k, c in a._num.items()}, a._den, p)


def restrict_progression(a: QSeries, r: int, modulus: int) -> QSeries:
    """Keep the terms whose q-exponent is congruent to r modulo ``modulus``."""
    a._require_integral()
    r %= modulus
    return QSeries._raw({k: c for k, c in a._num.items() if (k // UNIT) % modulus == r},
                        a._den, a.precision)


def rescale_exponents(a: QSeries, t: int) -> QSeries:
    """Substitute tau -> tau/t on a series supported on q-exponents divisible by t."""
    if t < 1:
        raise ValueError("rescale factor must be a positive integer")
    for k in sorted(a._num):
        if k % (UNIT * t):
            if k % UNIT:
                raise NonIntegralExponent(k)
            raise IndivisibleExponent(k // UNIT, t)
    p = a.precision if a.precision == INF else -((-a.precision) // t)
    return QSeries._raw({k // t: c for k, c in a._num.items()}, a._den, p)


def reduce_mod(a: QSeries, ell: int, m: int = 1) -> QSeries:
    """Canonical residues in [0, ell^m) of every coefficient, read ell-adically."""
    modulus = ell ** m
    den = a._den
    out = {}
    inv_cache: dict[int, int] = {}
    for k, c in a._num.items():
        g = math.gcd(c, den)
        d = den // g
        if d % ell == 0:
            raise DenominatorDivisibleByEll(k, ell)
        if d == 1:
            r = (c // g) % modulus
        else:
            inv = inv_cache.get(d)
            if inv is None:
                inv = inv_cache[d] = builtins.pow(d, -1, modulus)
            r = (c // g) * inv % modulus
        if r:
            out[k] = r
    return QSeries._raw(out, 1, a.precision)


def is_zero_mod(a: QSeries, ell: int, m: int = 1) -> bool:
    return reduce_mod(a, ell, m).is_zero()


def sum_series(items: Iterable[QSeries]) -> QSeries:
    total = None
    for s in items:
        total = s if total is None else add(total, s)
    return total if total is not None else QSeries.zero()
