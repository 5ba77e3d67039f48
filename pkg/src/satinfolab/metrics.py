"""Counting, length and information-budget formulas.

Integer-valued formulas are computed with Python's unbounded integers;
the few real-valued ones use floats (or ``Decimal`` where floats overflow).
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import NamedTuple, Sequence, Union

from .codec import encoded_length, gamma_length

Number = Union[int, float, Fraction]

#: constant in the logarithmic-cost bound 15 n log2 n = D n ln n
D = 15 / math.log(2)

#: below this the exact log2 sum for permutation_info is not used
PERMUTATION_EXACT_MAX_N = 20


class Bracket(NamedTuple):
    low: int
    high: int

    def __contains__(self, value):
        return self.low <= value <= self.high


def _floor_log2(n: int) -> int:
    return n.bit_length() - 1


def _exact_log2(value: int):
    """log2 of a positive integer, as an int when it is a power of two."""
    if value & (value - 1) == 0:
        return value.bit_length() - 1
    return math.log2(value)


def paper_bit_length(n: int, m: int) -> int:
    """floor(log2 n) + 1 + 2n + 2nm: the instance size with a plain binary n-field."""
    if n < 1 or m < 0:
        raise ValueError("need n >= 1 and m >= 0")
    return _floor_log2(n) + 1 + 2 * n + 2 * n * m


def canonical_bit_length(n: int, m: int) -> int:
    """Length of ``codec.encode_instance`` output for an (n, m) instance."""
    return encoded_length(n, m)


def n_field_overhead(n: int) -> int:
    """Extra bits the gamma n-field costs over the plain binary field."""
    return gamma_length(n) - (_floor_log2(n) + 1)


def uniform_length(n: int, K: int):
    """12 n log2 K + log2 K; exact int when K is a power of two."""
    if n < 3 or K < 2:
        raise ValueError("need n >= 3 and K >= 2")
    return (12 * n + 1) * _exact_log2(K)


def logarithmic_length(n: int) -> int:
    """12 n (floor(log2 n) + 2) + floor(log2 n) + 1."""
    if n < 3:
        raise ValueError("need n >= 3")
    k = _floor_log2(n)
    return 12 * n * (k + 2) + k + 1


def bound15(n: int) -> float:
    if n < 3:
        raise ValueError("need n >= 3")
    return 15 * n * math.log2(n)


def bound15_holds(n: int) -> bool:
    """Whether logarithmic_length(n) <= 15 n log2 n, decided exactly."""
    exact = logarithmic_length(n)
    if n & (n - 1) == 0:
        return exact <= 15 * n * (n.bit_length() - 1)
    gap = bound15(n) - exact
    if abs(gap) > 1e-9 * exact:
        return gap > 0
    # too close for floats: 2**exact <= n**(15 n)
    return (1 << exact) <= n ** (15 * n)


def bound15_threshold(limit: int = 1 << 20) -> int:
    """Smallest n such that the 15 n log2 n bound holds for every n' in [n, limit]."""
    first = None
    for n in range(3, limit + 1):
        if bound15_holds(n):
            if first is None:
                first = n
        else:
            first = None
    if first is None:
        raise ValueError(f"bound does not hold at limit={limit}")
    return first


def lambert_w(x: float, tol: float = 1e-15, max_iter: int = 100) -> float:
    """Principal branch of Lambert W for x >= e, by Halley iteration.

    Seeded with ln x - ln ln x.
    """
    if not x >= math.e:
        raise ValueError(f"lambert_w is defined here for x >= e, got {x}")
    lx = math.log(x)
    w = lx - math.log(lx)
    for _ in range(max_iter):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1
        step = f / (ew * wp1 - (w + 2) * f / (2 * wp1))
        w -= step
        if abs(step) <= tol * abs(w):
            break
    return w


def n_lower_bound_threshold() -> int:
    """Smallest integer L for which ln L > ln D."""
    return math.floor(D) + 1


def n_lower_bound(instance_bits: int) -> int:
    """ceil(L / (2 D ln L)): lower bound on variables behind an L-bit instance."""
    L = instance_bits
    if L < n_lower_bound_threshold():
        raise ValueError(f"n_lower_bound needs L >= {n_lower_bound_threshold()}, got {L}")
    return math.ceil(L / (2 * D * math.log(L)))


def info_production(T: int) -> float:
    """T log2 T: the mutual information between time and state over T steps."""
    if T < 2:
        raise ValueError("need T >= 2")
    return T * math.log2(T)


def poly_eval(coeffs: Sequence[Number], x: Number) -> Number:
    """Evaluate a polynomial given ascending coefficients (c0, c1, ...)."""
    total = 0
    for c in reversed(coeffs):
        total = total * x + c
    return total


def _check_budget_args(rho, poly_coeffs):
    if not rho > 0:
        raise ValueError("rho must be positive")
    if not poly_coeffs or any(c < 0 for c in poly_coeffs):
        raise ValueError("polynomial coefficients must be nonempty and nonnegative")
    if not poly_coeffs[-1] > 0:
        raise ValueError("leading coefficient must be positive")


def accessible_info(instance_bits: int, algorithm_bits: int, rho: Number, poly_coeffs: Sequence[Number]) -> Number:
    """|I| + |A| + rho * q(|I|)."""
    _check_budget_args(rho, poly_coeffs)
    return instance_bits + algorithm_bits + rho * poly_eval(poly_coeffs, instance_bits)


def sat_content(instance_bits: int) -> int:
    if instance_bits < 1:
        raise ValueError("need instance_bits >= 1")
    return instance_bits << instance_bits


def _exceeds(L, algorithm_bits, rho, poly_coeffs) -> bool:
    return sat_content(L) > accessible_info(L, algorithm_bits, rho, poly_coeffs)


def crossover(algorithm_bits: int, rho: Number, poly_coeffs: Sequence[Number]) -> int:
    """Smallest |I| whose SAT content exceeds the accessible information.

    Doubling finds an upper bracket, bisection narrows it; the result is
    checked against its predecessor.
    """
    _check_budget_args(rho, poly_coeffs)
    hi = 1
    while not _exceeds(hi, algorithm_bits, rho, poly_coeffs):
        hi *= 2
    lo = hi // 2  # fails, or 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _exceeds(mid, algorithm_bits, rho, poly_coeffs):
            hi = mid
        else:
            lo = mid
    if hi > 1 and _exceeds(hi - 1, algorithm_bits, rho, poly_coeffs):
        raise AssertionError("bisection left a passing predecessor; inequality is not monotone here")
    return hi


def _exact_floor_log2_factorial(N: int) -> int:
    return math.factorial(N).bit_length() - 1


def permutation_info(n: int) -> Union[int, Bracket]:
    """floor(log2 (2^n)!) + 1.

    Exact for n <= 20; beyond that a Stirling-series ``Bracket`` is returned.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if n > PERMUTATION_EXACT_MAX_N:
        return permutation_info_bracket(n)
    N = 1 << n
    if N <= 1 << 12:
        return _exact_floor_log2_factorial(N) + 1
    total = math.fsum(math.log2(k) for k in range(2, N + 1))
    floor = math.floor(total)
    if min(total - floor, floor + 1 - total) < 1e-6:
        floor = _exact_floor_log2_factorial(N)
    return floor + 1


def permutation_info_bracket(n: int) -> Bracket:
    """Bounds on floor(log2 (2^n)!) + 1 from Robbins' Stirling inequalities."""
    if n < 1:
        raise ValueError("need n >= 1")
    N = 1 << n
    with localcontext() as ctx:
        ctx.prec = len(str(N)) + 40
        ln2 = Decimal(2).ln()
        dN = Decimal(N)
        base = dN * n * ln2 - dN + (2 * Decimal(math.pi) * dN).ln() / 2
        lo = (base + 1 / (12 * dN + 1)) / ln2
        hi = (base + 1 / (12 * dN)) / ln2
        slack = Decimal(10) ** -20 * hi
        low = int((lo - slack).to_integral_value(rounding="ROUND_FLOOR")) + 1
        high = int((hi + slack).to_integral_value(rounding="ROUND_FLOOR")) + 1
    return Bracket(low, high)
