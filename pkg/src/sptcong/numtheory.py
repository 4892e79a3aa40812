"""Scalar number theory: Kronecker symbols, valuations, class numbers, Sturm bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import HalfIntegralWeightUnsupported, ZeroInput


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), extended to all integers a, n."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    v = (n & -n).bit_length() - 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
        n >>= v
    # Jacobi symbol (a/n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class CharacterSpec:
    """The quadratic character n -> (D/n)."""

    discriminant: int = 1

    def __call__(self, n: int) -> int:
        return kronecker(self.discriminant, n)

    @property
    def is_trivial(self) -> bool:
        return self.discriminant == 1


TRIVIAL = CharacterSpec(1)
CHI_3 = CharacterSpec(3)
CHI_12 = CharacterSpec(12)


def ell_adic_valuation(x, ell: int) -> int:
    """v_ell of a nonzero rational."""
    x = Fraction(x)
    if not x:
        raise ZeroInput("valuation of zero is undefined")
    return _vint(x.numerator, ell) - _vint(x.denominator, ell)


def _vint(n: int, ell: int) -> int:
    n = abs(n)
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def delta(ell: int, m: int) -> int:
    """Least positive integer d with 24*d = 1 (mod ell^m)."""
    if math.gcd(24, ell) != 1:
        raise ValueError(f"ell={ell} is not coprime to 24")
    mod = ell ** m
    d = pow(24, -1, mod)
    return d if d else mod


def sigma1(n: int) -> int:
    if n < 1:
        raise ValueError("sigma1 is defined for n >= 1")
    total = 0
    r = math.isqrt(n)
    for d in range(1, r + 1):
        if n % d == 0:
            total += d
            e = n // d
            if e != d:
                total += e
    return total


def sigma1_table(n_max: int) -> list[int]:
    """[sigma1(0)=0, sigma1(1), ..., sigma1(n_max - 1)] by sieving."""
    sig = np.zeros(max(n_max, 1), dtype=np.int64)
    for d in range(1, n_max):
        sig[d::d] += d
    return [int(x) for x in sig[:n_max]]


def _reduced_forms(n: int):
    # reduced (a, b, c): |b| <= a <= c, b^2 - 4ac = -n, b >= 0 on the boundary
    a = 1
    while 3 * a * a <= n:
        # b has the parity of n
        start = -a if (a + n) % 2 == 0 else -a + 1
        for b in range(start, a + 1, 2):
            t = b * b + n
            if t % (4 * a):
                continue
            c = t // (4 * a)
            if c < a:
                continue
            if b < 0 and (b == -a or a == c):
                continue
            yield a, b, c
        a += 1


def _form_weight(a: int, b: int, c: int) -> Fraction:
    if a == c and b == 0:
        return Fraction(1, 2)
    if a == b == c:
        return Fraction(1, 3)
    return Fraction(1)


@lru_cache(maxsize=None)
def hurwitz_class_number(n: int) -> Fraction:
    """H(n) by enumerating reduced positive definite forms of discriminant -n.

    H(0) = -1/12 by convention.
    """
    if n < 0:
        raise ValueError("H(n) is defined for n >= 0")
    if n == 0:
        return Fraction(-1, 12)
    if n % 4 in (1, 2):
        return Fraction(0)
    return sum((_form_weight(*f) for f in _reduced_forms(n)), Fraction(0))


def hurwitz_table(n_max: int) -> list[Fraction]:
    """[H(0), ..., H(n_max - 1)], enumerating every reduced form once."""
    twelve = [0] * n_max
    if n_max > 0:
        twelve[0] = -1
    a = 1
    while 3 * a * a < n_max:
        for b in range(-a + 1, a + 1):
            c = a
            while True:
                disc = 4 * a * c - b * b
                if disc >= n_max:
                    break
                if not (b < 0 and a == c):
                    if a == c and b == 0:
                        twelve[disc] += 6
                    elif a == b == c:
                        twelve[disc] += 4
                    else:
                        twelve[disc] += 12
                c += 1
        a += 1
    return [Fraction(t, 12) for t in twelve]


def psl2_index(level: int) -> int:
    """[SL2(Z) : Gamma0(level)] = level * prod_{p | level} (1 + 1/p)."""
    mu = level
    n = level
    p = 2
    while p * p <= n:
        if n % p == 0:
            mu = mu // p * (p + 1)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        mu = mu // n * (n + 1)
    return mu


def sturm_bound(weight_times_2: int, level: int) -> int:
    """floor(k * mu / 12) for integral weight k = weight_times_2 / 2 on Gamma0(level)."""
    if weight_times_2 % 2:
        raise HalfIntegralWeightUnsupported(
            f"weight {weight_times_2}/2 is not integral")
    k = weight_times_2 // 2
    return k * psl2_index(level) // 12


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    return all(n % p for p in range(3, r + 1, 2))
