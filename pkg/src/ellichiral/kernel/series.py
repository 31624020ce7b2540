"""Truncated nested Laurent series and rational q-series.

A LaurentSeries lives in the iterated Laurent field attached to the expansion
region |x1| > |x2| > ... > |xn| > 0 (variables listed outermost first).  In
that region every function we expand (products of x_i^k, (x_i-x_j)^k and
convergent tails) has a support satisfying, for each suffix {x_k, ..., x_n},

    e_k + e_{k+1} + ... + e_n  >=  v_k        (certified valuation)

and the representation is exact on the dual window

    e_k + e_{k+1} + ... + e_n  <=  T_k        (truncation order).

Suffix-sum windows combine soundly under multiplication (T_k of the product
is min(Ta_k + vb_k, Tb_k + va_k)), which is what makes coefficient extraction
exact rather than heuristic.  Querying a coefficient outside the window
raises TruncationError, which is distinct from a coefficient being zero.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import RegionMismatchError, TruncationError
from .scalar import Scalar, ZERO, ONE

INF = 10 ** 9


def _suffix_sums(exps):
    out = []
    s = 0
    for e in reversed(exps):
        s += e
        out.append(s)
    out.reverse()
    return out


class LaurentSeries:
    __slots__ = ("vars", "terms", "trunc", "val")

    def __init__(self, vars, terms, trunc, val, _clean=False):
        self.vars = tuple(vars)
        n = len(self.vars)
        self.trunc = tuple(trunc)
        self.val = tuple(val)
        assert len(self.trunc) == n and len(self.val) == n
        if _clean:
            self.terms = terms
        else:
            kept = {}
            for exps, coeff in terms.items():
                if isinstance(coeff, (int, Fraction)):
                    coeff = Scalar.from_rational(coeff)
                if coeff.is_zero():
                    continue
                ss = _suffix_sums(exps)
                if all(s <= t for s, t in zip(ss, self.trunc)):
                    kept[tuple(exps)] = coeff
            self.terms = kept

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(vars, order):
        n = len(vars)
        return LaurentSeries(vars, {}, (order,) * n, (0,) * n, _clean=True)

    @staticmethod
    def constant(vars, value, order):
        s = LaurentSeries.zero(vars, order)
        return s + LaurentSeries(vars, {(0,) * len(vars): value},
                                 (order,) * len(vars), (0,) * len(vars))

    @staticmethod
    def univariate(var, coeffs, order):
        """Series sum coeffs[e] * var**e from a dict e -> coefficient."""
        val = min(coeffs, default=0)
        terms = {(e,): c for e, c in coeffs.items()}
        return LaurentSeries((var,), terms, (order,), (min(val, 0),))

    # -- bookkeeping -------------------------------------------------------

    def _check_region(self, other):
        if self.vars != other.vars:
            raise RegionMismatchError(
                f"regions differ: {self.vars} vs {other.vars}")

    def in_window(self, exps):
        return all(s <= t for s, t in zip(_suffix_sums(exps), self.trunc))

    def coefficient(self, exps):
        exps = tuple(exps)
        if len(exps) != len(self.vars):
            raise ValueError("exponent tuple has wrong length")
        if not self.in_window(exps):
            raise TruncationError(
                f"exponent {exps} outside verified window {self.trunc}",
                required_order=max(_suffix_sums(exps)))
        return self.terms.get(exps, ZERO)

    def is_zero(self):
        return not self.terms

    def support(self):
        return sorted(self.terms)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = LaurentSeries.constant(self.vars, other, INF)
        self._check_region(other)
        trunc = tuple(min(a, b) for a, b in zip(self.trunc, other.trunc))
        val = tuple(min(a, b) for a, b in zip(self.val, other.val))
        terms = dict(self.terms)
        for k, v in other.terms.items():
            s = terms.get(k)
            if s is None:
                terms[k] = v
            else:
                s = s + v
                if s.is_zero():
                    del terms[k]
                else:
                    terms[k] = s
        return LaurentSeries(self.vars, terms, trunc, val)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.from_rational(other)
        if isinstance(other, Scalar):
            other = LaurentSeries.constant(self.vars, other, INF)
        return self + (-other)

    def __neg__(self):
        return LaurentSeries(self.vars,
                             {k: -v for k, v in self.terms.items()},
                             self.trunc, self.val, _clean=True)

    def scale(self, coeff):
        if isinstance(coeff, (int, Fraction)):
            coeff = Scalar.from_rational(coeff)
        if coeff.is_zero():
            return LaurentSeries(self.vars, {}, self.trunc, self.val, _clean=True)
        return LaurentSeries(self.vars,
                             {k: v * coeff for k, v in self.terms.items()},
                             self.trunc, self.val, _clean=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        self._check_region(other)
        trunc = tuple(min(ta + vb, tb + va) for ta, tb, va, vb
                      in zip(self.trunc, other.trunc, self.val, other.val))
        val = tuple(va + vb for va, vb in zip(self.val, other.val))
        out = {}
        for ka, va_ in self.terms.items():
            for kb, vb_ in other.terms.items():
                k = tuple(a + b for a, b in zip(ka, kb))
                ss = _suffix_sums(k)
                if any(s > t for s, t in zip(ss, trunc)):
                    continue
                prod = va_ * vb_
                s = out.get(k)
                if s is None:
                    if not prod.is_zero():
                        out[k] = prod
                else:
                    s = s + prod
                    if s.is_zero():
                        del out[k]
                    else:
                        out[k] = s
        return LaurentSeries(self.vars, out, trunc, val, _clean=True)

    __rmul__ = __mul__

    def power(self, k):
        if k < 0:
            return self.inverse().power(-k)
        out = LaurentSeries.constant(self.vars, ONE, INF)
        for _ in range(k):
            out = out * self
        return out

    # -- calculus ----------------------------------------------------------

    def derivative(self, var):
        i = self.vars.index(var)
        terms = {}
        for k, v in self.terms.items():
            if k[i] == 0:
                continue
            kk = list(k)
            kk[i] -= 1
            terms[tuple(kk)] = v * k[i]
        trunc = tuple(t - 1 if j <= i else t for j, t in enumerate(self.trunc))
        val = tuple(w - 1 if j <= i else w for j, w in enumerate(self.val))
        return LaurentSeries(self.vars, terms, trunc, val)

    def shift_last(self, j):
        """Multiply by (last variable)**j."""
        terms = {k[:-1] + (k[-1] + j,): v for k, v in self.terms.items()}
        trunc = tuple(t + j for t in self.trunc)
        val = tuple(w + j for w in self.val)
        return LaurentSeries(self.vars, terms, trunc, val, _clean=True)

    def coeff_of_last(self, j):
        """Coefficient of (last variable)**j as a series in the outer vars."""
        n = len(self.vars)
        if n < 2:
            raise ValueError("coeff_of_last needs at least two variables")
        terms = {}
        for k, v in self.terms.items():
            if k[-1] == j:
                terms[k[:-1]] = v
        trunc = tuple(t - j for t in self.trunc[:-1])
        val = tuple(w - j for w in self.val[:-1])
        return LaurentSeries(self.vars[:-1], terms, trunc, val, _clean=True)

    def lift_last(self, var):
        """View as a series in vars + (var,) constant in the new variable."""
        terms = {k + (0,): v for k, v in self.terms.items()}
        return LaurentSeries(self.vars + (var,), terms,
                             self.trunc + (INF,), self.val + (0,), _clean=True)

    def last_valuation(self):
        return min((k[-1] for k in self.terms), default=0)

    def inverse(self):
        """Multiplicative inverse of a series with invertible leading part.

        Works recursively: factor out the lowest power of the innermost
        variable, invert its (outer-variable) leading coefficient, then sum
        the geometric series of the remainder.
        """
        if not self.terms:
            raise ZeroDivisionError("inverse of (truncated) zero series")
        if min(self.trunc) >= INF // 2:
            raise TruncationError("inverse needs a finite truncation order; "
                                  "call restrict() first")
        n = len(self.vars)
        v = self.last_valuation()
        if n == 1:
            lead = self.terms.get((v,))
            if lead is None or lead.is_zero():
                raise ZeroDivisionError("no usable leading coefficient")
            inv_lead = lead.inverse()
            order = self.trunc[0] - v
            # r = self / (lead x^v) - 1 has positive valuation
            r = self.shift_last(-v).scale(inv_lead) - ONE
            geo = LaurentSeries.constant(self.vars, ONE, order)
            power = LaurentSeries.constant(self.vars, ONE, order)
            for _ in range(order + 1):
                power = power * (-r)
                if power.is_zero():
                    break
                geo = geo + power
            return geo.shift_last(-v).scale(inv_lead)
        lead = self.coeff_of_last(v)
        inv_lead = lead.inverse().lift_last(self.vars[-1])
        r = self.shift_last(-v) * inv_lead - ONE
        rv = max(r.last_valuation(), 1)
        order = self.trunc[-1] - v
        geo = LaurentSeries.constant(self.vars, ONE, INF)
        power = LaurentSeries.constant(self.vars, ONE, INF)
        for _ in range(0, max(order, 0) + 1, rv):
            power = power * (-r)
            if power.is_zero():
                break
            geo = geo + power
        return (geo * inv_lead).shift_last(-v)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(Fraction(1, 1) / Fraction(other))
        if isinstance(other, Scalar):
            return self.scale(other.inverse())
        self._check_region(other)
        return self * other.inverse()

    # -- misc ---------------------------------------------------------------

    def restrict(self, order):
        """Cap every suffix truncation order at ``order``."""
        trunc = tuple(min(t, order) for t in self.trunc)
        return LaurentSeries(self.vars, self.terms, trunc, self.val)

    def verified_order(self):
        return min(self.trunc)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        if self.vars != other.vars:
            return False
        diff = self - other
        return diff.is_zero()

    def __repr__(self):
        n = len(self.terms)
        return (f"LaurentSeries({'/'.join(self.vars)}, {n} terms, "
                f"trunc={self.trunc})")


def series_multiply(a, b, order):
    """Exact truncated product, capped at suffix order ``order``."""
    if a.vars != b.vars:
        raise RegionMismatchError(f"regions differ: {a.vars} vs {b.vars}")
    return (a * b).restrict(order)


def coefficient(a, exponents):
    """Exact coefficient; raises TruncationError outside the window."""
    return a.coefficient(exponents)


class QSeries:
    """Truncated power series in q with rational coefficients."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs, order):
        coeffs = [Fraction(x) for x in coeffs]
        if len(coeffs) < order + 1:
            coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        self.coeffs = coeffs[: order + 1]
        self.order = order

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries([other], self.order)
        order = min(self.order, other.order)
        return QSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], order)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = QSeries([other], self.order)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries([a * other for a in self.coeffs], self.order)
        order = min(self.order, other.order)
        out = [Fraction(0)] * (order + 1)
        for i, a in enumerate(self.coeffs[: order + 1]):
            if not a:
                continue
            for j, b in enumerate(other.coeffs[: order + 1 - i]):
                out[i + j] += a * b
        return QSeries(out, order)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        order = min(self.order, other.order)
        return self.coeffs[: order + 1] == other.coeffs[: order + 1]

    def __getitem__(self, i):
        if i > self.order:
            raise TruncationError(f"q^{i} beyond truncation {self.order}",
                                  required_order=i)
        return self.coeffs[i]

    def __repr__(self):
        return f"QSeries({self.coeffs}, order={self.order})"
