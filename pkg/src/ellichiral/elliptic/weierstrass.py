"""Weierstrass expansions: wp derivatives, zeta, and the kernels E_m.

Everything is a univariate LaurentSeries over the g-polynomial scalars, with
g_{2k} for k >= 4 eliminated through the ODE recursion so coefficients live
in Q[g2, g4, g6].
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ..kernel.scalar import G2, Scalar, ONE
from ..kernel.series import LaurentSeries
from .eisenstein import g_scalar, wp_tail_coefficient


@lru_cache(maxsize=None)
def _wp_coeffs(order):
    """Exponent -> Scalar for wp(x) up to x^order."""
    coeffs = {-2: ONE}
    k = 1
    while 2 * k <= order:
        coeffs[2 * k] = wp_tail_coefficient(k)
        k += 1
    return coeffs


def wp_series(r, order, var="x"):
    """r-th derivative of the Weierstrass wp expansion, exact to x^order."""
    if r < 0:
        raise ValueError("r must be >= 0")
    coeffs = {}
    for e, c in _wp_coeffs(order + r).items():
        fall = 1
        for i in range(r):
            fall *= e - i
        if fall:
            coeffs[e - r] = c * fall
    return LaurentSeries.univariate(var, coeffs, order)


def zeta_series(order, var="x"):
    """zeta(x) = x^-1 - sum_k g_{2k+2} x^(2k+1), exact to x^order."""
    coeffs = {-1: ONE}
    k = 0
    while 2 * k + 1 <= order:
        coeffs[2 * k + 1] = -g_scalar(k + 1)
        k += 1
    return LaurentSeries.univariate(var, coeffs, order)


def zeta_derivative_series(m, order, var="x"):
    """m-th derivative of zeta; zeta' = -wp - g2 stays generator-closed."""
    if m == 0:
        return zeta_series(order, var)
    if m == 1:
        return (-wp_series(0, order, var)) - G2
    return (-wp_series(m - 1, order, var))


def em_series(m, order, var="x"):
    """The elliptic kernel E_m in the lattice normalization:

        E_m(x) = x^-m + sum_{j>=1, m+j even} (-1)^j C(m+j-1, j) g_{m+j} x^j.

    E_1 = zeta and E_2 = wp; for m >= 3 this is (-1)^m wp^(m-2)/(m-1)! up to
    a constant, exactly for odd m and with the constant term g_m removed for
    even m.  The constant-free normalization is the one for which the
    trisecant identity holds on the nose (the exponential kernel picks up a
    spurious pure-alpha factor otherwise)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if m == 1:
        return zeta_series(order, var)
    if m == 2:
        return wp_series(0, order, var)
    coeffs = {-m: ONE}
    for j in range(1, order + 1):
        if (m + j) % 2:
            continue
        binom = 1
        for i in range(j):
            binom = binom * (m + j - 1 - i) // (i + 1)
        sign = -1 if j % 2 else 1
        coeffs[j] = g_scalar((m + j) // 2) * (sign * binom)
    return LaurentSeries.univariate(var, coeffs, order)


def em_series_wp_derivative(m, order, var="x"):
    """Oracle form (-1)^m wp^(m-2)/(m-1)! for m >= 3.

    Agrees with em_series exactly for odd m and up to the additive constant
    g_m for even m (wp''/6 = x^-4 + g4 + ..., etc.)."""
    if m < 3:
        raise ValueError("m must be >= 3")
    fact = 1
    for i in range(2, m):
        fact *= i
    sign = -1 if m % 2 else 1
    return wp_series(m - 2, order, var).scale(Fraction(sign, fact))
