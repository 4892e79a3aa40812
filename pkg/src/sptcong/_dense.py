"""Dense integer polynomial kernels.

Truncated products go through Kronecker substitution: both operands are
packed into one big integer with a fixed number of bytes per slot,
multiplied by GMP, and unpacked with a signed-digit carry sweep.  Small or
very lopsided products use the schoolbook loop instead.
"""

from __future__ import annotations

import gmpy2

_SCHOOLBOOK_WORK = 40_000
_RECURRENCE_LENGTH = 48


def _pack(coeffs: list[int], nbytes: int) -> int:
    pos = b"".join((c if c > 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    value = int.from_bytes(pos, "little")
    if any(c < 0 for c in coeffs):
        neg = b"".join((-c if c < 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
        value -= int.from_bytes(neg, "little")
    return value


def _unpack(value: int, nbytes: int, n: int) -> list[int]:
    negative = value < 0
    if negative:
        value = -value
    data = value.to_bytes(max(n * nbytes, (value.bit_length() + 7) // 8), "little")
    full = 1 << (8 * nbytes)
    half = full >> 1
    out = []
    carry = 0
    from_bytes = int.from_bytes
    for i in range(n):
        v = from_bytes(data[i * nbytes:(i + 1) * nbytes], "little") + carry
        if v >= half:
            out.append(v - full)
            carry = 1
        else:
            out.append(v)
            carry = 0
    if negative:
        out = [-c for c in out]
    return out


def _schoolbook(a: list[int], b: list[int], n: int) -> list[int]:
    out = [0] * n
    nz_b = [(j, y) for j, y in enumerate(b[:n]) if y]
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        lim = n - i
        for j, y in nz_b:
            if j >= lim:
                break
            out[i + j] += x * y
    return out


def mul_trunc(a: list[int], b: list[int], n: int) -> list[int]:
    """First ``n`` coefficients of the product of two dense sequences."""
    if n <= 0:
        return []
    a = a[:n]
    b = b[:n]
    nza = sum(1 for x in a if x)
    nzb = sum(1 for x in b if x)
    if nza == 0 or nzb == 0:
        return [0] * n
    if nza * nzb <= _SCHOOLBOOK_WORK or min(nza, nzb) <= 8:
        if nzb > nza:
            a, b = b, a
        return _schoolbook(a, b, n)
    ma = max(abs(x) for x in a)
    mb = ma if b is a else max(abs(x) for x in b)
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 2
    nbytes = (bits + 7) // 8
    pa = gmpy2.mpz(_pack(a, nbytes))
    if b is a:
        prod = pa * pa
    else:
        prod = pa * gmpy2.mpz(_pack(b, nbytes))
    return _unpack(int(prod), nbytes, n)


def _inverse_unit(a: list[int], n: int) -> list[int]:
    # a[0] == 1; Newton doubling b <- b + b*(1 - a*b)
    if n <= _RECURRENCE_LENGTH:
        nz = [(j, x) for j, x in enumerate(a[1:n], start=1) if x]
        b = [1] + [0] * (n - 1)
        for k in range(1, n):
            s = 0
            for j, x in nz:
                if j > k:
                    break
                s += x * b[k - j]
            b[k] = -s
        return b
    h = (n + 1) // 2
    b = _inverse_unit(a, h)
    e = mul_trunc(a, b, n)
    # e = 1 + O(x^h)
    tail = mul_trunc(b, e[h:], n - h)
    return b + [-c for c in tail]


def inverse(a: list[int], n: int) -> tuple[list[int], int]:
    """Inverse of an integer series with nonzero constant term.

    Returns ``(c, d)`` with the true inverse coefficients ``c[k] / d**(k+1)``;
    ``d`` is the constant term, so unit constant terms give integers.
    """
    a0 = a[0]
    if a0 == 0:
        raise ZeroDivisionError("constant term is zero")
    if a0 == 1:
        return _inverse_unit(a, n), 1
    if a0 == -1:
        return [-c for c in _inverse_unit([-x for x in a[:n]], n)], 1
    # substitute x -> a0*y to obtain a unit series with integer coefficients
    scaled = [x * a0 ** (k - 1) if k else 1 for k, x in enumerate(a[:n])]
    return _inverse_unit(scaled, n), a0
