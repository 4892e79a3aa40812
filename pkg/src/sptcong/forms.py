"""Named q-expansions: eta quotients, Eisenstein and theta series, the
mock modular forms attached to the smallest-parts functions, and the
Hecke-built forms G, F, H and their overpartition counterparts.

Every builder takes a q-precision ``N`` and returns a series known for all
q-exponents below ``N``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import cache
from .errors import DecompositionMismatch, InsufficientPrecision, SelfCheckFailure
from .generators import (
    Statistic,
    overpartition_series,
    pentagonal,
    statistic_series,
)
from .hecke import HeckeTriple, build_F_m
from .numtheory import CHI_3, TRIVIAL, hurwitz_class_number, hurwitz_table, sigma1_table
from .series import (
    INF,
    UNIT,
    QSeries,
    add,
    dilate,
    invert,
    mul,
    q_derivative,
    rescale_exponents,
    scale,
    shift,
    shift_q,
    sub,
)
from .series import pow as spow

SELF_CHECK_PREFIX = 300
DEFAULT_MAX_SOURCE = 2_000_000


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


# -- eta quotients -------------------------------------------------------

@dataclass(frozen=True)
class EtaQuotientSpec:
    """prod eta(delta * tau)^r over ``factors`` = ((delta, r), ...)."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((int(d), int(r)) for d, r in self.factors))
        for d, _ in self.factors:
            if d < 1:
                raise ValueError(f"dilation {d} must be positive")

    @property
    def leading_index(self) -> int:
        return sum(d * r for d, r in self.factors)

    @property
    def weight_times_2(self) -> int:
        return sum(r for _, r in self.factors)


def euler_power(r: int, K: int) -> QSeries:
    """prod (1 - q^n)^r to q-precision K."""
    def build(k):
        base = QSeries.from_dense(pentagonal(k), k)
        if r >= 0:
            return spow(base, r).truncate_q(k)
        if r == -1:
            return statistic(Statistic.P, k)
        return spow(statistic(Statistic.P, k), -r).truncate_q(k)
    return cache.get(f"euler-{r}", max(K, 1), build, persist=False)


def eta_quotient(spec: EtaQuotientSpec | tuple, N: int) -> QSeries:
    """Expansion of the eta quotient, known below q^N."""
    if not isinstance(spec, EtaQuotientSpec):
        spec = EtaQuotientSpec(tuple(spec))
    lead = spec.leading_index
    target = UNIT * N
    rel = target - lead
    if rel <= 0:
        return QSeries.zero(target)
    out = QSeries.one()
    for d, r in spec.factors:
        if r == 0:
            continue
        k = _ceil_div(rel, UNIT * d)
        out = mul(out, dilate(euler_power(r, k), d))
    if out.precision == INF:
        out = out.truncate(rel)
    return shift(out, lead).truncate(target)


def eisenstein_E2(N: int) -> QSeries:
    """1 - 24 sum sigma(n) q^n."""
    N = max(N, 1)
    sig = sigma1_table(N)
    return QSeries.from_dense([1] + [-24 * s for s in sig[1:]], N)


def theta(N: int) -> QSeries:
    """sum over all integers n of q^(n^2)."""
    N = max(N, 1)
    c = [0] * N
    c[0] = 1
    k = 1
    while k * k < N:
        c[k * k] = 2
        k += 1
    return QSeries.from_dense(c, N)


# -- named forms -----------------------------------------------------------

class FormName(enum.Enum):
    S = "s"
    M = "m"
    MSTAR = "mstar"
    PBAR = "pbar"
    SBAR = "sbar"
    MBAR = "mbar"
    FBAR = "fbar"
    E = "e"
    HBAR = "hbar"
    GBAR = "gbar"
    R = "r"
    S2 = "s2"
    M2 = "m2"
    ZAGIER_H = "zagier_h"
    G_LM = "g_lm"
    F_LM = "f_lm"
    H_LM = "h_lm"
    GBAR_LM = "gbar_lm"
    FBAR_LM = "fbar_lm"
    HBAR_LM = "hbar_lm"
    E2 = "e2"
    THETA = "theta"


PARAMETRIZED = frozenset({FormName.G_LM, FormName.F_LM, FormName.H_LM,
                          FormName.GBAR_LM, FormName.FBAR_LM, FormName.HBAR_LM})


@dataclass(frozen=True)
class NamedForm:
    name: FormName
    params: tuple[int, int] | None
    series: QSeries


def statistic(stat: Statistic | str, n: int) -> QSeries:
    """Statistic generating function through the shared cache."""
    stat = Statistic(stat)
    return cache.get(f"stat-{stat.value}", max(n, 1),
                     lambda k: statistic_series(stat, _round_up(k)))


def _round_up(n: int) -> int:
    # coarse grid so that nearby requests share one build
    step = 1 << max(n.bit_length() - 4, 0)
    return -(-n // step) * step


def _E(N: int) -> QSeries:
    # 2 E2(2 tau) - E2(tau)
    return sub(scale(dilate(eisenstein_E2(_ceil_div(N, 2)), 2), 2), eisenstein_E2(N))


def _spt_lift(values: QSeries, N: int, modulus: int, signed: bool = False) -> QSeries:
    # sum c(n) q^(modulus*n - 1), optionally with (-1)^n
    if signed:
        num, den = values.integer_terms()
        values = QSeries._raw({k: -c if (k // UNIT) % 2 else c for k, c in num.items()},
                              den, values.precision)
    return shift_q(dilate(values, modulus), -1).truncate_q(N)


def _b_S(N):
    return _spt_lift(statistic(Statistic.SPT, _ceil_div(N + 1, 24)), N, 24)


def _b_M(N):
    K = _ceil_div(N + 1, 24)
    p = _spt_lift(statistic(Statistic.P, K), N, 24)
    return add(_b_S(N), scale(q_derivative(p), Fraction(1, 12)))


def _b_MSTAR(N):
    return scale(_b_M(N), -12)


def _b_PBAR(N):
    return eta_quotient(((2, 1), (1, -2)), N)


def _b_SBAR(N):
    return statistic(Statistic.SPTBAR1, N)


def _b_MBAR(N):
    pbar = _b_PBAR(N)
    e2 = eisenstein_E2(N)
    e22 = dilate(eisenstein_E2(_ceil_div(N, 2)), 2)
    return add(_b_SBAR(N), scale(mul(pbar, sub(e2, scale(e22, 4))), Fraction(1, 12)))


def _fbar_sum_times4(N: int) -> QSeries:
    # 4 * (1/4 + 2 sum_{k>=1} (-1)^k q^(k^2+k) / (1+q^k)^2); the -k term equals the +k term
    c = np.zeros(N, dtype=object)
    c[0] = 1
    k = 1
    while k * k + k < N:
        e = k * k + k
        m = len(range(e, N, k))
        j = np.arange(m, dtype=np.int64)
        sign = -1 if k % 2 else 1
        c[e::k] += 8 * sign * ((-1) ** j) * (j + 1)
        k += 1
    return QSeries.from_dense([int(x) for x in c], N)


def _b_FBAR(N):
    N = max(N, 1)
    return mul(_b_PBAR(N), _fbar_sum_times4(N))


def _b_HBAR(N):
    return mul(_E(N), _b_PBAR(N))


def _b_R(N):
    return eta_quotient(((8, 1), (16, -2)), N)


def _b_GBAR(N):
    e8 = dilate(_E(_ceil_div(N + 1, 8)), 8)
    return mul(e8, _b_R(N)).truncate_q(N)


def _b_S2(N):
    return _spt_lift(statistic(Statistic.M2SPT, _ceil_div(N + 1, 8)), N, 8, signed=True)


def _b_M2(N):
    r = _b_R(N)
    e16 = dilate(eisenstein_E2(_ceil_div(N + 1, 16)), 16)
    e8 = dilate(eisenstein_E2(_ceil_div(N + 1, 8)), 8)
    return add(_b_S2(N), scale(mul(r, sub(e16, e8)), Fraction(1, 24))).truncate_q(N)


def _b_ZAGIER_H(N):
    N = max(N, 1)
    table = hurwitz_table(N)
    return QSeries.from_q({n: h for n, h in enumerate(table) if h}, N)


def _check_source(need: int, cap: int, what: str):
    if need > cap:
        raise InsufficientPrecision(
            f"{what} needs source precision {need}, above the cap {cap}", required=need)


def _b_G_LM(N, ell, m, cap):
    L = ell ** (2 * m)
    need = max(L * N, 1)
    _check_source(need, cap, f"G_{{{ell},{m}}} to q^{N}")
    mstar = _b_MSTAR(need)
    triple = HeckeTriple(mstar, ell, CHI_3)
    chi = CHI_3(ell)
    G = sub(build_F_m(triple, m), scale(mstar, chi ** m * ell ** m))
    return G.truncate_q(N)


def _b_F_LM(N, ell, m, cap):
    L = ell ** (2 * m)
    G = _b_G_LM(N - L, ell, m, cap)
    eta = eta_quotient(((24, L),), N + L)
    return mul(G, eta).truncate_q(N)


def _b_H_LM(N, ell, m, cap):
    return rescale_exponents(_b_F_LM(24 * N, ell, m, cap), 24)


def _b_GBAR_LM(N, ell, m, cap):
    L = ell ** (2 * m)
    need = max(L * N, 1)
    _check_source(need, cap, f"Gbar_{{{ell},{m}}} to q^{N}")
    triple = HeckeTriple(_b_GBAR(need), ell, TRIVIAL)
    return build_F_m(triple, m).truncate_q(N)


def _b_FBAR_LM(N, ell, m, cap):
    L = ell ** (2 * m)
    G = _b_GBAR_LM(N - L, ell, m, cap)
    eta = eta_quotient(((16, 2 * L), (8, -L)), N + L)
    return mul(G, eta).truncate_q(N)


def _b_HBAR_LM(N, ell, m, cap):
    return rescale_exponents(_b_FBAR_LM(8 * N, ell, m, cap), 8)


_BUILDERS = {
    FormName.S: _b_S,
    FormName.M: _b_M,
    FormName.MSTAR: _b_MSTAR,
    FormName.PBAR: _b_PBAR,
    FormName.SBAR: _b_SBAR,
    FormName.MBAR: _b_MBAR,
    FormName.FBAR: _b_FBAR,
    FormName.E: _E,
    FormName.HBAR: _b_HBAR,
    FormName.GBAR: _b_GBAR,
    FormName.R: _b_R,
    FormName.S2: _b_S2,
    FormName.M2: _b_M2,
    FormName.ZAGIER_H: _b_ZAGIER_H,
    FormName.E2: eisenstein_E2,
    FormName.THETA: theta,
    FormName.G_LM: _b_G_LM,
    FormName.F_LM: _b_F_LM,
    FormName.H_LM: _b_H_LM,
    FormName.GBAR_LM: _b_GBAR_LM,
    FormName.FBAR_LM: _b_FBAR_LM,
    FormName.HBAR_LM: _b_HBAR_LM,
}


# -- self-checks: a second evaluation order per definition ----------------

def _sc_lift(N, stat, modulus, signed, extra=None):
    K = _ceil_div(N + 1, modulus)
    vals = statistic(stat, K)
    out = {}
    for n in range(K):
        e = modulus * n - 1
        if e >= N:
            break
        c = vals.q_coeff(n)
        if signed and n % 2:
            c = -c
        if extra is not None:
            c += extra(n, e)
        if c:
            out[e] = c
    return QSeries.from_q(out, N)


def _selfcheck_reference(name: FormName, N: int) -> QSeries | None:
    if name is FormName.S:
        return _sc_lift(N, Statistic.SPT, 24, False)
    if name in (FormName.M, FormName.MSTAR):
        P = statistic(Statistic.P, _ceil_div(N + 1, 24))
        ref = _sc_lift(N, Statistic.SPT, 24, False,
                       lambda n, e: Fraction(e, 12) * P.q_coeff(n))
        return ref if name is FormName.M else scale(ref, -12)
    if name is FormName.PBAR:
        return overpartition_series(N)
    if name is FormName.MBAR:
        pbar = _b_PBAR(N)
        e2 = eisenstein_E2(N)
        e22 = dilate(eisenstein_E2(_ceil_div(N, 2)), 2)
        return add(_b_SBAR(N), sub(scale(mul(pbar, e2), Fraction(1, 12)),
                                   scale(mul(pbar, e22), Fraction(1, 3))))
    if name is FormName.FBAR:
        K = 0
        while K * K - K < N:
            K += 1
        total = QSeries.zero(UNIT * N)
        for n in range(-K, K + 1):
            e = n * n + n
            if e >= N:
                continue
            one_plus = add(QSeries.one(), QSeries.from_q({n: 1}))
            denom = mul(one_plus, one_plus)
            term = shift_q(invert(denom, precision=UNIT * (N - e)), e)
            total = add(total, scale(term, -1 if n % 2 else 1))
        return scale(mul(_b_PBAR(N), total), 4).truncate_q(N)
    if name is FormName.E:
        sig = sigma1_table(N)
        return QSeries.from_q({n: (1 if n == 0 else 24 * sig[n] - (48 * sig[n // 2] if n % 2 == 0 else 0))
                               for n in range(N)}, N)
    if name is FormName.HBAR:
        pbar = _b_PBAR(N)
        e22 = dilate(eisenstein_E2(_ceil_div(N, 2)), 2)
        return sub(scale(mul(e22, pbar), 2), mul(eisenstein_E2(N), pbar))
    if name is FormName.R:
        return _sc_lift(N, Statistic.PODD, 8, True)
    if name is FormName.GBAR:
        r = _b_R(N)
        e16 = dilate(eisenstein_E2(_ceil_div(N + 1, 16)), 16)
        e8 = dilate(eisenstein_E2(_ceil_div(N + 1, 8)), 8)
        return sub(scale(mul(r, e16), 2), mul(r, e8)).truncate_q(N)
    if name is FormName.S2:
        return _sc_lift(N, Statistic.M2SPT, 8, True)
    if name is FormName.M2:
        r = _b_R(N)
        e16 = dilate(eisenstein_E2(_ceil_div(N + 1, 16)), 16)
        e8 = dilate(eisenstein_E2(_ceil_div(N + 1, 8)), 8)
        return add(_b_S2(N), scale(sub(mul(r, e16), mul(r, e8)), Fraction(1, 24))).truncate_q(N)
    if name is FormName.ZAGIER_H:
        return QSeries.from_q({n: hurwitz_class_number(n) for n in range(N)}, N)
    if name is FormName.E2:
        return QSeries.from_q({n: 1 if n == 0 else -24 * sum(d for d in range(1, n + 1) if n % d == 0)
                               for n in range(N)}, N)
    if name is FormName.THETA:
        return QSeries.from_q({n: 1 if n == 0 else 2 for n in range(N)
                               if math.isqrt(n) ** 2 == n}, N)
    return None


def _structural_check(name: FormName, s: QSeries):
    supports = {FormName.S: (24, 23), FormName.M: (24, 23), FormName.MSTAR: (24, 23),
                FormName.R: (8, 7), FormName.GBAR: (8, 7), FormName.S2: (8, 7),
                FormName.M2: (8, 7), FormName.G_LM: (24, 23), FormName.F_LM: (24, 0),
                FormName.GBAR_LM: (8, 7), FormName.FBAR_LM: (8, 0)}
    if name in supports:
        mod, r = supports[name]
        for k in s.coeffs:
            if k % UNIT or (k // UNIT) % mod != r:
                raise SelfCheckFailure(f"{name.value}: term at index {k} outside {r} mod {mod}")


_checked: set = set()


def build(name: FormName | str, params: tuple[int, int] | None = None, N: int = 100, *,
          check: bool = True, max_source_precision: int = DEFAULT_MAX_SOURCE) -> NamedForm:
    """Build a named form to q-precision N, self-checked against a second evaluation."""
    name = FormName(name)
    if name in PARAMETRIZED:
        if params is None:
            raise ValueError(f"{name.value} needs (ell, m)")
        ell, m = (int(x) for x in params)
        if m < 1:
            raise ValueError("m must be at least 1")
        params = (ell, m)
        key = f"form-{name.value}-{ell}-{m}"
        builder = lambda k: _BUILDERS[name](k, ell, m, max_source_precision)  # noqa: E731
    else:
        params = None
        key = f"form-{name.value}"
        builder = _BUILDERS[name]
    s = cache.get(key, N, builder, persist=False)
    if s.q_precision != INF and s.q_precision > N:
        s = s.truncate_q(N)
    if check:
        _structural_check(name, s)
        prefix = min(N, SELF_CHECK_PREFIX)
        tag = (key, prefix)
        if tag not in _checked:
            ref = _selfcheck_reference(name, prefix)
            if ref is not None:
                mine = s.truncate_q(prefix)
                if not mine.agrees_with(ref):
                    raise SelfCheckFailure(
                        f"{name.value} disagrees with its second evaluation at index "
                        f"{mine.truncate(ref.precision).first_difference(ref.truncate(mine.precision))}")
            _checked.add(tag)
    return NamedForm(name, params, s)


def form(name, params=None, N: int = 100, **kw) -> QSeries:
    return build(name, params, N, **kw).series


# -- M - S decompositions --------------------------------------------------

def _first_mismatch(a: QSeries, b: QSeries):
    p = min(a.precision, b.precision)
    idx = a.truncate(p).first_difference(b.truncate(p))
    return None if idx is None else Fraction(idx, UNIT)


def m_minus_s_decomposition(stat: Statistic | str, N: int) -> tuple[QSeries, QSeries]:
    """(M-form, S-form) for the statistic, after asserting the closed form of M - S."""
    stat = Statistic(stat)
    if stat is Statistic.SPT:
        Mf, Sf = form(FormName.M, N=N), form(FormName.S, N=N)
        P = statistic(Statistic.P, _ceil_div(N + 1, 24))
        expected = QSeries.from_q({24 * n - 1: Fraction(24 * n - 1, 12) * P.q_coeff(n)
                                   for n in range(_ceil_div(N + 1, 24))
                                   if 24 * n - 1 < N}, N)
        diff = sub(Mf, Sf)
        for k, c in diff.coeffs.items():
            e = k // UNIT
            if (12 * c) % e if e else c:
                raise DecompositionMismatch(f"12(M - S) at q^{e} is not divisible by {e}", e)
    elif stat is Statistic.SPTBAR1:
        Mf, Sf = form(FormName.MBAR, N=N), form(FormName.SBAR, N=N)
        expected = sub(scale(q_derivative(form(FormName.PBAR, N=N)), 2),
                       scale(form(FormName.HBAR, N=N), Fraction(1, 4)))
        diff = sub(Mf, Sf)
    elif stat is Statistic.M2SPT:
        Mf, Sf = form(FormName.M2, N=N), form(FormName.S2, N=N)
        expected = scale(add(form(FormName.GBAR, N=N), q_derivative(form(FormName.R, N=N))),
                         Fraction(1, 16))
        diff = sub(Mf, Sf)
    else:
        raise ValueError(f"no M - S decomposition for {stat.value}")
    bad = _first_mismatch(diff, expected)
    if bad is not None:
        raise DecompositionMismatch(f"M - S decomposition for {stat.value} fails at q^{bad}", bad)
    return Mf, Sf


__all__ = [
    "EtaQuotientSpec", "eta_quotient", "euler_power", "eisenstein_E2", "theta", "FormName",
    "NamedForm", "PARAMETRIZED", "build", "form", "statistic", "m_minus_s_decomposition",
]
