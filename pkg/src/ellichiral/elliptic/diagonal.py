"""Diagonal re-expansion: Laurent coefficients of EllFuncs along a divisor.

Every generator has a closed-form expansion around x_i = x_j or x_i = 0
whose coefficients are again EllFuncs one width down, so the expansion

    f = sum_m f^(m) * t^m,   t = x_i - x_j  (or t = x_i)

is computed symbolically: exact coefficients for every m up to the requested
order, with the surviving variables relabelled to 1..n-1 order-preservingly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..errors import UnsupportedError
from ..kernel.scalar import G2, ONE, Scalar, ZERO
from .funcalg import EllFunc
from .weierstrass import wp_series, zeta_series


@dataclass(frozen=True)
class DiagonalExpansion:
    divisor: tuple
    width: int            # width of the source function
    coeffs: dict          # m -> EllFunc of width width-1
    min_index: int
    order: int

    def coefficient(self, m):
        if m > self.order:
            raise ValueError(f"coefficient {m} beyond order {self.order}")
        return self.coeffs.get(m, EllFunc.zero(self.width - 1))

    def support(self):
        return sorted(self.coeffs)


def _relabel(idx, removed):
    return idx if idx < removed else idx - 1


def _fact(m):
    out = 1
    for i in range(2, m + 1):
        out *= i
    return out


@lru_cache(maxsize=None)
def _wp_laurent_coeffs(r, order):
    return {e: c for (e,), c in wp_series(r, order).terms.items()}


@lru_cache(maxsize=None)
def _zeta_laurent_coeffs(order):
    return {e: c for (e,), c in zeta_series(order).terms.items()}


def _sym_expansion(width, sym, divisor, order):
    """Expansion dict m -> EllFunc(width-1) of a single generator symbol."""
    w1 = width - 1
    kind = sym[0]
    if divisor[0] == "diag":
        _, i, j = divisor
        jj = _relabel(j, i)
        if kind == "P":
            _, a, r = sym
            if a != i:
                return {0: EllFunc.P(w1, _relabel(a, i), r)}
            return {m: EllFunc.P(w1, jj, r + m).scale(Fraction(1, _fact(m)))
                    for m in range(order + 1)}
        if kind == "D":
            _, a, b, r = sym
            if i not in (a, b):
                return {0: EllFunc.D(w1, _relabel(a, i), _relabel(b, i), r)}
            if {a, b} == {i, j}:
                sign = 1 if (a == i or r % 2 == 0) else -1
                return {m: EllFunc.one(w1, c * sign)
                        for m, c in _wp_laurent_coeffs(r, order).items()
                        if m <= order}
            k = b if a == i else a
            kk = _relabel(k, i)
            out = {}
            for m in range(order + 1):
                # d^m/dx_i^m wp^(r)(x_i - x_k) = wp^(r+m); for x_k - x_i an
                # extra (-1)^m
                sign = 1 if a == i else (-1 if m % 2 else 1)
                base = EllFunc.D(w1, jj, kk, r + m) if a == i \
                    else EllFunc.D(w1, kk, jj, r + m)
                out[m] = base.scale(Fraction(sign, _fact(m)))
            return out
        # Z-symbols
        _, a, b = sym
        if i not in (a, b):
            return {0: EllFunc.Z(w1, _relabel(a, i), _relabel(b, i))}
        if {a, b} == {i, j}:
            zc = _zeta_laurent_coeffs(order)
            sgn = 1 if a == i else -1
            out = {-1: EllFunc.one(w1, ONE * sgn)}
            for m in range(1, order + 1):
                c = zc.get(m, ZERO)
                taylor = EllFunc.P(w1, jj, m - 1) + (G2 if m == 1 else 0) \
                    if m >= 1 else EllFunc.zero(w1)
                val = EllFunc.one(w1, c) + taylor.scale(Fraction(1, _fact(m)))
                val = val.scale(sgn)
                if not val.is_zero():
                    out[m] = val
            return out
        k = b if a == i else a
        kk = _relabel(k, i)
        out = {}
        if a == i:
            # zeta(x_i, x_k) around x_i = x_j
            out[0] = EllFunc.Z(w1, jj, kk)
            for m in range(1, order + 1):
                val = (EllFunc.P(w1, jj, m - 1)
                       - EllFunc.D(w1, jj, kk, m - 1))
                out[m] = val.scale(Fraction(1, _fact(m)))
        else:
            # zeta(x_k, x_i) around x_i = x_j
            out[0] = EllFunc.Z(w1, kk, jj)
            for m in range(1, order + 1):
                sign = -1 if (m - 1) % 2 else 1
                val = (EllFunc.D(w1, kk, jj, m - 1).scale(sign)
                       - EllFunc.P(w1, jj, m - 1))
                out[m] = val.scale(Fraction(1, _fact(m)))
        return {m: v for m, v in out.items() if not v.is_zero()}

    # divisor x_i = 0
    _, i = divisor
    if kind == "P":
        _, a, r = sym
        if a != i:
            return {0: EllFunc.P(w1, _relabel(a, i), r)}
        return {m: EllFunc.one(w1, c)
                for m, c in _wp_laurent_coeffs(r, order).items() if m <= order}
    if kind == "D":
        _, a, b, r = sym
        if i not in (a, b):
            return {0: EllFunc.D(w1, _relabel(a, i), _relabel(b, i), r)}
        k = b if a == i else a
        kk = _relabel(k, i)
        out = {}
        for m in range(order + 1):
            if a == i:
                sign = -1 if (r + m) % 2 else 1   # wp^(r)(t - x_k)
            else:
                sign = -1 if m % 2 else 1          # wp^(r)(x_k - t)
            out[m] = EllFunc.P(w1, kk, r + m).scale(Fraction(sign, _fact(m)))
        return out
    _, a, b = sym
    if i not in (a, b):
        return {0: EllFunc.Z(w1, _relabel(a, i), _relabel(b, i))}
    k = b if a == i else a
    kk = _relabel(k, i)
    zc = _zeta_laurent_coeffs(order)
    # a == i: zeta(t, x_k) = zeta(t - x_k) - zeta(t) + zeta(x_k):
    #   pole -1/t; Taylor coeff (-1)^m zeta^(m)(x_k)(-1)^? ... using the odd
    #   parity zeta^(m)(-x) = (-1)^(m+1) zeta^(m)(x):
    #   m-coeff = (-1)^m (P_k^(m-1) + d_{m,1} g2)/m!  -  zc[m]
    # a != i: zeta(x_k, t) = zeta(x_k - t) - zeta(x_k) + zeta(t):
    #   pole +1/t; m-coeff = (-1)^(m+1)(P_k^(m-1) + d_{m,1} g2)/m!  +  zc[m]
    pole_sign = -1 if a == i else 1
    out = {-1: EllFunc.one(w1, ONE * pole_sign)}
    for m in range(1, order + 1):
        tay_sign = (-1) ** m if a == i else (-1) ** (m + 1)
        der = EllFunc.P(w1, kk, m - 1) + (G2 if m == 1 else 0)
        val = der.scale(Fraction(tay_sign, _fact(m)))
        val = val + EllFunc.one(w1, zc.get(m, ZERO) * pole_sign)
        if not val.is_zero():
            out[m] = val
    return out


def diagonal_expand(f, divisor, order=None):
    """Expand an EllFunc along a divisor.

    ``divisor`` is ("diag", i, j) for x_i = x_j (x_i eliminated, expansion in
    t = x_i - x_j) or ("zero", i) for x_i = 0.  Coefficients are exact for
    every index up to ``order``.
    """
    width = f.width
    if divisor[0] == "diag":
        _, i, j = divisor
        if i == j or not (1 <= i <= width and 1 <= j <= width):
            raise ValueError(f"bad diagonal divisor {divisor}")
    elif divisor[0] == "zero":
        _, i = divisor
        if not 1 <= i <= width:
            raise ValueError(f"bad divisor {divisor}")
    else:
        raise ValueError(f"unknown divisor {divisor}")
    if width < 1:
        raise UnsupportedError("cannot expand a width-0 function")
    if order is None:
        order = max(f.weights(), default=0) + 2

    total = {}
    min_index = 0
    for mono, coeff in f.terms.items():
        pole = sum(_sym_pole_on(sym, divisor) for sym in mono)
        parts = [{0: EllFunc.one(width - 1, coeff)}]
        parts += [_sym_expansion(width, sym, divisor, order + pole)
                  for sym in mono]
        # a later factor with a pole can lower the total index again, so the
        # per-stage cutoff must allow for the remaining factors' minima
        mins = [min(p.keys(), default=0) for p in parts]
        conv = parts[0]
        for idx in range(1, len(parts)):
            p = parts[idx]
            remaining_min = sum(mins[idx + 1:])
            cutoff = order - remaining_min
            new = {}
            for m1, f1 in conv.items():
                for m2, f2 in p.items():
                    m = m1 + m2
                    if m > cutoff:
                        continue
                    prod = f1 * f2
                    if prod.is_zero():
                        continue
                    cur = new.get(m)
                    new[m] = prod if cur is None else cur + prod
            conv = new
        for m, g in conv.items():
            if g.is_zero():
                continue
            cur = total.get(m)
            total[m] = g if cur is None else cur + g
        min_index = min(min_index, -pole)
    total = {m: g for m, g in total.items() if not g.is_zero()}
    return DiagonalExpansion(divisor=divisor, width=width, coeffs=total,
                             min_index=min(min_index, min(total, default=0)),
                             order=order)


def _sym_pole_on(sym, divisor):
    """Pole order of a generator on the divisor (0 if regular there)."""
    if divisor[0] == "diag":
        _, i, j = divisor
        if sym[0] == "P":
            return 0
        if sym[0] == "D":
            return sym[3] + 2 if {sym[1], sym[2]} == {i, j} else 0
        return 1 if {sym[1], sym[2]} == {i, j} else 0
    _, i = divisor
    if sym[0] == "P":
        return sym[2] + 2 if sym[1] == i else 0
    if sym[0] == "D":
        return 0
    return 1 if i in (sym[1], sym[2]) else 0
