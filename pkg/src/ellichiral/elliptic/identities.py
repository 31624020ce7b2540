"""Verification of the classical elliptic identities used by the complex.

Each check expands both sides as exact truncated series and reports the
window on which all coefficients vanish; failures are reported rather than
raised.  The Fay trisecant check clears the alpha/beta denominators first
and works with polynomials in (alpha, beta) whose coefficients are
two-variable Laurent series in the region |z| > |w|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..kernel.scalar import ONE, Scalar
from ..kernel.series import INF, LaurentSeries
from .eisenstein import g_scalar
from .funcalg import EllFunc, _difference_expansion_cached, \
    _single_var_expansion
from .weierstrass import em_series, wp_series, zeta_series

IDENTITIES = ("fay", "fay-alpha-beta", "fay-alpha2-beta", "zeta-wp",
              "wp-ode", "zeta-square")


@dataclass
class IdentityReport:
    identity: str
    order: int
    passed: bool
    max_verified_order: int
    detail: str = ""
    failures: list = field(default_factory=list)

    def to_dict(self):
        return {"identity": self.identity, "order": self.order,
                "passed": self.passed,
                "max_verified_order": self.max_verified_order,
                "detail": self.detail, "failures": self.failures}


def verify_identity(identity, order):
    if identity == "wp-ode":
        return _verify_wp_ode(order)
    if identity == "zeta-wp":
        return _verify_zeta_wp(order)
    if identity == "zeta-square":
        return _verify_zeta_square(order)
    if identity == "fay-alpha-beta":
        return _verify_fay_coefficient(order, (1, 1))
    if identity == "fay-alpha2-beta":
        return _verify_fay_coefficient(order, (2, 1))
    if identity == "fay":
        return _verify_fay(order)
    raise ValueError(f"unknown identity {identity!r}; "
                     f"choose from {IDENTITIES}")


def _report(identity, order, diff, extra=""):
    passed = diff.is_zero()
    failures = []
    if not passed:
        failures = [{"exponent": list(e), "value": repr(c)}
                    for e, c in sorted(diff.terms.items())[:10]]
    return IdentityReport(identity=identity, order=order, passed=passed,
                          max_verified_order=diff.verified_order(),
                          detail=extra, failures=failures)


def _verify_wp_ode(order):
    pad = order + 8
    wp = wp_series(0, pad)
    wp1 = wp_series(1, pad)
    expr = (wp1 * wp1 - wp * wp * wp * 4
            + wp.scale(g_scalar(2) * 60)
            + LaurentSeries.constant(("x",), g_scalar(3) * 140, INF))
    return _report("wp-ode", order, expr.restrict(order),
                   "(wp')^2 - 4 wp^3 + 60 g4 wp + 140 g6")


def _verify_zeta_square(order):
    lhs = (EllFunc.Z(2, 1, 2) * EllFunc.Z(2, 1, 2)).embed(order)
    rhs = (EllFunc.P(2, 1) + EllFunc.P(2, 2) + EllFunc.D(2, 1, 2)).embed(order)
    return _report("zeta-square", order, (lhs - rhs).restrict(order),
                   "zeta(x1,x2)^2 - wp(x1) - wp(x2) - wp(x1-x2)")


def _verify_zeta_wp(order):
    """zeta(x,y) = (1/2)(wp'(x) + wp'(y))/(wp(x) - wp(y)) with x = y + t.

    Everything is expanded in the region |y| > |t| and the quotient is
    computed by series division in t.  (The left side has residue 1 on the
    diagonal, which forces the + sign in the numerator: wp'(x) - wp'(y)
    vanishes at x = y.)
    """
    pad = order + 8
    vars = ("y", "t")

    def taylor(series_fn, pole, m_start=0):
        # f(y + t) = sum_{m >= m_start} f^(m)(y) t^m / m!; constructed with
        # the honest window: total >= -pole, t-exponent >= m_start.
        terms = {}
        fact = 1
        for m in range(pad + 1):
            if m:
                fact *= m
            if m < m_start:
                continue
            fm = series_fn(m)
            for (e,), c in fm.terms.items():
                key = (e, m)
                cur = terms.get(key)
                v = c * Fraction(1, fact)
                terms[key] = v if cur is None else cur + v
        return LaurentSeries(vars, terms, (pad, pad), (-pole, m_start))

    def zeta_deriv(m):
        if m == 0:
            return zeta_series(pad)
        extra = LaurentSeries.univariate(
            "x", {0: -g_scalar(1)}, INF) if m == 1 \
            else LaurentSeries.zero(("x",), INF)
        return wp_series(m - 1, pad).scale(-1) + extra

    zeta_t = LaurentSeries(vars,
                           {(0, e): c for (e,), c
                            in zeta_series(pad).terms.items()},
                           (pad, pad), (-1, -1))
    zeta_y = LaurentSeries(vars, {(e, 0): c for (e,), c
                                  in zeta_series(pad).terms.items()},
                           (pad, INF), (-1, 0))
    zeta_xy = taylor(zeta_deriv, 1)
    wp1_y = LaurentSeries(vars, {(e, 0): c for (e,), c
                                 in wp_series(1, pad).terms.items()},
                          (pad, INF), (-3, 0))

    lhs = zeta_t - zeta_xy + zeta_y
    # wp'(x) + wp'(y) = 2 wp'(y) + tail;  wp(x) - wp(y) = tail from m >= 1
    num = taylor(lambda m: wp_series(m + 1, pad), 3) + wp1_y
    den = taylor(lambda m: wp_series(m, pad), 2, m_start=1)
    quot = num * den.inverse()
    diff = (lhs - quot.scale(Fraction(1, 2))).restrict(order)
    return _report("zeta-wp", order, diff,
                   "zeta(x,y) - (wp'(x)+wp'(y))/(2(wp(x)-wp(y))), t = x-y")


# -- Fay trisecant -----------------------------------------------------------

class _ABSeries:
    """Polynomial in (alpha, beta) with LaurentSeries((z, w)) coefficients."""

    def __init__(self, coeffs, degree):
        self.coeffs = {k: v for k, v in coeffs.items() if not v.is_zero()}
        self.degree = degree

    def __add__(self, other):
        deg = min(self.degree, other.degree)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out[k] + v if k in out else v
        return _ABSeries({k: v for k, v in out.items()
                          if sum(k) <= deg}, deg)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, q):
        return _ABSeries({k: v.scale(q) for k, v in self.coeffs.items()},
                         self.degree)

    def __mul__(self, other):
        deg = min(self.degree, other.degree)
        out = {}
        for (p1, q1), v1 in self.coeffs.items():
            for (p2, q2), v2 in other.coeffs.items():
                p, q = p1 + p2, q1 + q2
                if p + q > deg:
                    continue
                prod = v1 * v2
                key = (p, q)
                out[key] = out[key] + prod if key in out else prod
        return _ABSeries(out, deg)


def _exp_ab(s, vars, degree):
    one = LaurentSeries.constant(vars, ONE, INF)
    total = _ABSeries({(0, 0): one}, degree)
    power = _ABSeries({(0, 0): one}, degree)
    fact = 1
    for k in range(1, degree + 1):
        power = power * s
        fact *= k
        if not power.coeffs:
            break
        total = total + power.scale(Fraction(1, fact))
    return total


def _fay_expression(order, series_order=None):
    """The alpha*beta*(alpha+beta)-cleared trisecant combination.

    With E(x,c) = exp part of c*F(x,c) this is

        (a+b) E(z,a) E(w,b) - a E(z,a+b) E(w-z,b) - b E(w,a+b) E(z-w,a),

    an _ABSeries whose coefficients must all vanish.
    """
    deg = order + 1
    pad = 2 * (series_order or order) + 6
    vars = ("z", "w")

    em_z = {}
    em_w = {}
    em_zw = {}
    for m in range(1, deg + 1):
        base = em_series(m, pad)
        em_z[m] = LaurentSeries(vars, {(e, 0): c for (e,), c
                                       in base.terms.items()},
                                (pad, INF), (-m, 0))
        em_w[m] = LaurentSeries(vars, {(0, e): c for (e,), c
                                       in base.terms.items()},
                                (pad, pad), (-m, -m))
        coeffs = tuple(sorted((e, c) for (e,), c in base.terms.items()))
        em_zw[m] = _difference_expansion_cached(2, 1, 2, coeffs, pad, vars)

    def s_series(em_table, keyfun, parity=1):
        # S = sum_m (-1)^(m+1)/m * gamma^m * E_m(x), gamma^m -> keyfun(m)
        coeffs = {}
        for m in range(1, deg + 1):
            c = Fraction((-1) ** (m + 1), m)
            series = em_table[m].scale(c * parity ** m)
            for key, mult in keyfun(m):
                add = series.scale(mult)
                coeffs[key] = coeffs[key] + add if key in coeffs else add
        return _ABSeries(coeffs, deg)

    def pow_alpha(m):
        return [((m, 0), Fraction(1))]

    def pow_beta(m):
        return [((0, m), Fraction(1))]

    def pow_alpha_plus_beta(m):
        out = []
        binom = 1
        for p in range(m + 1):
            if p:
                binom = binom * (m - p + 1) // p
            out.append(((p, m - p), Fraction(binom)))
        return out

    e_z_a = _exp_ab(s_series(em_z, pow_alpha), vars, deg)
    e_w_b = _exp_ab(s_series(em_w, pow_beta), vars, deg)
    e_z_ab = _exp_ab(s_series(em_z, pow_alpha_plus_beta), vars, deg)
    e_w_ab = _exp_ab(s_series(em_w, pow_alpha_plus_beta), vars, deg)
    # E_m(w - z) = (-1)^m E_m(z - w): parity through the difference expansion
    e_wz_b = _exp_ab(s_series(em_zw, pow_beta, parity=-1), vars, deg)
    e_zw_a = _exp_ab(s_series(em_zw, pow_alpha), vars, deg)

    alpha = _ABSeries({(1, 0): LaurentSeries.constant(vars, ONE, INF)}, deg)
    beta = _ABSeries({(0, 1): LaurentSeries.constant(vars, ONE, INF)}, deg)

    return ((alpha + beta) * e_z_a * e_w_b
            - alpha * (e_z_ab * e_wz_b)
            - beta * (e_w_ab * e_zw_a))


def _verify_fay(order):
    """Every coefficient of a^p b^q with p+q <= order must vanish."""
    expr = _fay_expression(order)
    failures = []
    min_window = INF
    for (p, q), series in sorted(expr.coeffs.items()):
        if p + q > order:
            continue
        s = series.restrict(order)
        min_window = min(min_window, s.verified_order())
        if not s.is_zero():
            failures.append({"alpha": p, "beta": q,
                             "exponents": [list(e) for e in s.support()][:5]})
    passed = not failures
    return IdentityReport(
        identity="fay", order=order, passed=passed,
        max_verified_order=min_window if min_window < INF else order,
        detail="alpha*beta*(alpha+beta)-cleared trisecant, coefficients "
               f"of a^p b^q checked for p+q <= {order}",
        failures=failures)


def _verify_fay_coefficient(order, which):
    """Single-coefficient specializations of the cleared trisecant.

    (1,1) encodes zeta(z-w) + zeta(w-z) = 0 (zeta odd); (2,1) encodes
    (zeta(z-w) - zeta(z) + zeta(w))^2 = wp(z) + wp(w) + wp(z-w).
    """
    name = "fay-alpha-beta" if which == (1, 1) else "fay-alpha2-beta"
    expr = _fay_expression(which[0] + which[1], series_order=order)
    series = expr.coeffs.get(which)
    if series is None:
        series = LaurentSeries.zero(("z", "w"), order)
    detail = ("zeta(z-w) + zeta(w-z)" if which == (1, 1) else
              "(zeta(z-w)-zeta(z)+zeta(w))^2 - wp(z) - wp(w) - wp(z-w)")
    return _report(name, order, series.restrict(order), detail)
