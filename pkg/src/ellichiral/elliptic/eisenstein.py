"""Eisenstein data: q-expansions and the g-polynomial recursion.

All modular quantities are stored in the 2-pi-i-normalized form
g_{2k} = G_{2k}/(2 pi i)^{2k}, which makes every coefficient rational:

    g_{2k} = -(B_{2k}/(2k)!) * (1 - (4k/B_{2k}) sum_{n>=1} sigma_{2k-1}(n) q^n)

g2, g4, g6 remain formal symbols of the coefficient field; every higher
g_{2k} is eliminated as a polynomial in g4, g6 through the coefficient
recursion of the Weierstrass ODE (wp'' = 6 wp^2 - 30 g4), e.g.
g8 = (3/7) g4^2.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from ..kernel.scalar import G2, G4, G6, Scalar
from ..kernel.series import QSeries


@lru_cache(maxsize=None)
def bernoulli(n):
    """Bernoulli number B_n (B_1 = -1/2 convention)."""
    if n == 0:
        return Fraction(1)
    # B_n = -1/(n+1) * sum_{k<n} C(n+1, k) B_k
    total = Fraction(0)
    for k in range(n):
        total += comb(n + 1, k) * bernoulli(k)
    return -total / (n + 1)


def _sigma(power, n):
    return sum(d ** power for d in range(1, n + 1) if n % d == 0)


def eisenstein_q(k, order):
    """q-expansion of g_{2k} to the given order (k >= 1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    b = bernoulli(2 * k)
    fact = 1
    for i in range(2, 2 * k + 1):
        fact *= i
    lead = -b / fact
    scale = Fraction(4 * k) / b
    coeffs = [Fraction(1)]
    for n in range(1, order + 1):
        coeffs.append(-scale * _sigma(2 * k - 1, n))
    return QSeries([lead * c for c in coeffs], order)


@lru_cache(maxsize=None)
def wp_tail_coefficient(k):
    """Coefficient c_k of x^(2k) in wp(x) = x^-2 + sum c_k x^(2k), k >= 1.

    c_1 = 3 g4 and c_2 = 5 g6 seed the recursion
    c_m ((2m)(2m-1) - 12) = 6 sum_{i+j=m-1} c_i c_j   (m >= 3),
    which is the x^(2m-2)-coefficient of wp'' = 6 wp^2 - 30 g4.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return G4 * 3
    if k == 2:
        return G6 * 5
    total = Scalar.from_rational(0)
    for i in range(1, k - 1):
        total = total + wp_tail_coefficient(i) * wp_tail_coefficient(k - 1 - i)
    return total * Fraction(6, (2 * k) * (2 * k - 1) - 12)


@lru_cache(maxsize=None)
def g_scalar(k):
    """g_{2k} as a Scalar: the symbol for k <= 3, a g4/g6-polynomial after."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k == 1:
        return G2
    if k == 2:
        return G4
    if k == 3:
        return G6
    return wp_tail_coefficient(k - 1) * Fraction(1, 2 * k - 1)


class EisensteinTable:
    """Map k -> g_{2k} Scalar with an attached q-expansion oracle order."""

    def __init__(self, kmax, q_order=8):
        self.q_order = q_order
        self.values = {k: g_scalar(k) for k in range(1, kmax + 1)}

    def q_expansion(self, k):
        return eisenstein_q(k, self.q_order)

    def rederive(self):
        """Recompute from scratch; the table is idempotent by construction."""
        g_scalar.cache_clear()
        wp_tail_coefficient.cache_clear()
        return {k: g_scalar(k) for k in self.values}


def specialize_to_q(scalar, order):
    """Evaluate a polynomial Scalar at the Eisenstein q-expansions.

    The denominator must be a rational constant; returns a QSeries.  Used as
    the independent divisor-sum cross-check of the ODE recursion.
    """
    if not scalar.den.is_const():
        raise ValueError("can only specialize polynomial scalars")
    series_cache = {1: eisenstein_q(1, order), 2: eisenstein_q(2, order),
                    3: eisenstein_q(3, order)}
    out = QSeries([0], order)
    for exps, coeff in scalar.num.terms.items():
        if any(exps[i] for i in (3, 4)):
            raise ValueError("lam/c have no q-expansion")
        term = QSeries([coeff], order)
        for var_index, k in ((0, 1), (1, 2), (2, 3)):
            for _ in range(exps[var_index]):
                term = term * series_cache[k]
        out = out + term
    return out * (Fraction(1) / scalar.den.const_value())
