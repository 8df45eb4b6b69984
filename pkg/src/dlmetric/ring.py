"""Exact arithmetic in Z/qZ[t, (t+l_1)^-1, ..., (t+l_{d-1})^-1].

Polynomials are tuples of residues in ascending degree order with no
trailing zeros; the zero polynomial is the empty tuple.  A ring element is a
:class:`RationalForm`: a numerator polynomial over the denominator
``prod (t + l_i) ** den[i]``, kept canonical by :func:`normalize`.

Tree indices are 1-based: trees ``1..d-1`` are the ``(t+l_i)``-adic
expansions and tree ``d`` is the expansion at infinity in powers of ``1/t``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .errors import ParamError

Poly = tuple  # tuple[int, ...], ascending coefficients

MAX_TREES = 7


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class RingParams:
    """Parameters (d, q, l_1..l_{d-1}) of the coefficient ring and group."""

    d: int
    q: int
    residues: tuple
    warn: bool = False

    @property
    def ngens(self) -> int:
        return self.d * (self.d - 1) * self.q

    def header(self) -> dict:
        return {"d": self.d, "q": self.q, "residues": list(self.residues)}


def validate_params(d: int, q: int, residues: Sequence[int] | None = None) -> RingParams:
    if d < 2:
        raise ParamError(f"d must be at least 2, got {d}")
    if d > MAX_TREES:
        raise ParamError(f"d={d} exceeds the supported maximum {MAX_TREES}")
    if q < 2:
        raise ParamError(f"q must be at least 2, got {q}")
    if residues is None:
        residues = range(d - 1)
    res = tuple(int(r) % q for r in residues)
    if len(res) != d - 1:
        raise ParamError(f"need {d - 1} residues, got {len(res)}")
    if len(set(res)) != len(res):
        raise ParamError(f"residues {res} are not distinct mod {q}")
    for a in range(len(res)):
        for b in range(a + 1, len(res)):
            diff = (res[a] - res[b]) % q
            if math.gcd(diff, q) != 1:
                raise ParamError(
                    f"difference {diff} of residues {res[a]} and {res[b]} is not invertible mod {q}"
                )
    # the Cayley graph identification assumes every prime of q exceeds d-1 once d >= 4
    warn = d >= 4 and any(p <= d - 1 for p in _prime_factors(q))
    return RingParams(d, q, res, warn)


# -- polynomials -------------------------------------------------------------


def trim(coeffs) -> Poly:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_add(a: Poly, b: Poly, q: int) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for j, x in enumerate(b):
        out[j] = (out[j] + x) % q
    return trim(out)


def poly_scale(a: Poly, c: int, q: int) -> Poly:
    c %= q
    if c == 1:
        return a
    return trim(x * c % q for x in a)


def poly_mul(a: Poly, b: Poly, q: int) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(x % q for x in out)


def _step_linear(p: Poly, r: int, q: int) -> Poly:
    out = [0] * (len(p) + 1)
    for j, x in enumerate(p):
        out[j] = (out[j] + r * x) % q
        out[j + 1] = x
    return trim(out)


@lru_cache(maxsize=4096)
def _linear_power(r: int, q: int, times: int) -> Poly:
    p: Poly = (1,)
    for _ in range(times):
        p = _step_linear(p, r, q)
    return p


def mul_linear(p: Poly, r: int, q: int, times: int = 1) -> Poly:
    """Multiply ``p`` by ``(t + r) ** times``."""
    if not p or times == 0:
        return p
    if times == 1:
        return _step_linear(p, r, q)
    return poly_mul(p, _linear_power(r, q, times), q)


def _divrem(p: Poly, r: int, q: int) -> tuple[Poly, int]:
    # synthetic division by the monic (t + r), i.e. evaluation at -r
    if not p:
        return (), 0
    root = -r % q
    quot = [0] * (len(p) - 1)
    acc = p[-1]
    for j in range(len(p) - 2, -1, -1):
        quot[j] = acc
        acc = (p[j] + root * acc) % q
    return trim(quot), acc


def divrem_linear(params: RingParams, p: Poly, i: int) -> tuple[Poly, int]:
    """Divide ``p`` by ``t + l_i``; returns ``(quotient, p(-l_i))``."""
    return _divrem(p, params.residues[i - 1], params.q)


def _order_at(p: Poly, r: int, q: int) -> int:
    """Largest n with (t + r)^n dividing the nonzero polynomial ``p``."""
    n = 0
    while True:
        quot, rem = _divrem(p, r, q)
        if rem:
            return n
        p = quot
        n += 1


# -- rational forms ----------------------------------------------------------


@dataclass(frozen=True, order=True)
class RationalForm:
    num: tuple
    den: tuple

    def is_zero(self) -> bool:
        return not self.num


def zero(params: RingParams) -> RationalForm:
    return RationalForm((), (0,) * (params.d - 1))


def constant(params: RingParams, c: int) -> RationalForm:
    return RationalForm(trim((c % params.q,)), (0,) * (params.d - 1))


def normalize(params: RingParams, num, den) -> RationalForm:
    q = params.q
    num = trim(x % q for x in num)
    if not num:
        return zero(params)
    den = list(den)
    if len(den) != params.d - 1:
        raise ValueError(f"denominator needs {params.d - 1} exponents, got {len(den)}")
    for i, r in enumerate(params.residues):
        if den[i] < 0:
            num = mul_linear(num, r, q, -den[i])
            den[i] = 0
        while den[i] > 0:
            quot, rem = _divrem(num, r, q)
            if rem:
                break
            num = quot
            den[i] -= 1
    return RationalForm(num, tuple(den))


def rat_add(params: RingParams, a: RationalForm, b: RationalForm) -> RationalForm:
    if not a.num:
        return b
    if not b.num:
        return a
    q = params.q
    na, nb = a.num, b.num
    den = []
    for r, ea, eb in zip(params.residues, a.den, b.den):
        if ea < eb:
            na = mul_linear(na, r, q, eb - ea)
        elif eb < ea:
            nb = mul_linear(nb, r, q, ea - eb)
        den.append(max(ea, eb))
    return normalize(params, poly_add(na, nb, q), den)


def rat_neg(params: RingParams, a: RationalForm) -> RationalForm:
    return RationalForm(poly_scale(a.num, -1, params.q), a.den)


def rat_sub(params: RingParams, a: RationalForm, b: RationalForm) -> RationalForm:
    return rat_add(params, a, rat_neg(params, b))


def rat_scale(params: RingParams, a: RationalForm, k: Sequence[int], c: int = 1) -> RationalForm:
    """Multiply ``a`` by ``c * prod (t + l_i) ** k[i]`` (k may be negative)."""
    num = poly_scale(a.num, c, params.q)
    if not num:
        return zero(params)
    den = [e - ki for e, ki in zip(a.den, k)]
    return normalize(params, num, den)


# -- valuations and expansions -----------------------------------------------


def valuation(params: RingParams, p: RationalForm, i: int) -> float | int:
    """Valuation of ``p`` in tree ``i`` (1-based); ``math.inf`` for zero.

    For the tree at infinity the value is shifted down by one, so the
    constant 1 has valuation -1 there.
    """
    if not p.num:
        return math.inf
    if i == params.d:
        return sum(p.den) - len(p.num)
    return _order_at(p.num, params.residues[i - 1], params.q) - p.den[i - 1]


def _series_inverse(s: Sequence[int], n: int, q: int) -> list[int]:
    inv0 = pow(s[0], -1, q)
    out = [inv0] + [0] * (n - 1)
    for k in range(1, n):
        acc = 0
        for j in range(1, min(k, len(s) - 1) + 1):
            acc += s[j] * out[k - j]
        out[k] = -inv0 * acc % q
    return out


def _series_mul(a: Sequence[int], b: Sequence[int], n: int, q: int) -> list[int]:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j in range(min(len(b), n - i)):
                out[i + j] += x * b[j]
    return [x % q for x in out]


def _shift_basis(p: Poly, r: int, q: int) -> list[int]:
    # coefficients of p in powers of (t + r)
    out = []
    while p:
        p, rem = _divrem(p, r, q)
        out.append(rem)
    return out


def digits(params: RingParams, p: RationalForm, i: int, lo: int, hi: int) -> list[int]:
    """Digits of ``p`` at positions ``lo..hi-1`` of its expansion in tree ``i``.

    In tree ``i < d`` position ``n`` holds the coefficient of ``(t+l_i)^n``;
    in tree ``d`` position ``n`` holds the coefficient of ``t^-(n+1)``.
    """
    if lo > hi:
        raise ValueError("lo must not exceed hi")
    if not p.num or hi == lo:
        return [0] * (hi - lo)
    q, d = params.q, params.d
    if i == d:
        # p = s^(E - deg) * N~(s) / D~(s) with s = 1/t and D~(0) = 1
        den_poly: Poly = (1,)
        for r, e in zip(params.residues, p.den):
            den_poly = mul_linear(den_poly, r, q, e)
        shift = len(den_poly) - len(p.num)  # E - deg N
        offset = shift - 1
        n = max(hi - offset, 1)
        numer = list(reversed(p.num))
        series = _series_mul(numer, _series_inverse(list(reversed(den_poly)), n, q), n, q)
    else:
        r = params.residues[i - 1]
        u_num = _shift_basis(p.num, r, q)
        other: Poly = (1,)
        for j, (rj, e) in enumerate(zip(params.residues, p.den)):
            if j != i - 1:
                # (t + l_j) = u + (l_j - l_i) in the local variable u = t + l_i
                other = mul_linear(other, (rj - r) % q, q, e)
        offset = -p.den[i - 1]
        n = max(hi - offset, 1)
        series = _series_mul(u_num, _series_inverse(list(other), n, q), n, q)
    out = []
    for pos in range(lo, hi):
        idx = pos - offset
        out.append(series[idx] if 0 <= idx < len(series) else 0)
    return out
