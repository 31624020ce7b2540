"""Exact scalars: rational functions in the formal symbols g2, g4, g6.

The coefficient field of the whole workbench is Q(g2, g4, g6) extended by two
grade-0 formal units: ``lam`` (the bookkeeping symbol for 1/(taubar - tau),
used by the configuration-space algebra) and ``c`` (a symbolic central
charge).  g2, g4, g6 carry modular-weight grades 2, 4, 6; lam and c carry
grade 0, so grading statements are unaffected by them.

Polynomials are sparse dicts mapping exponent tuples to Fractions.  A Scalar
is a reduced fraction num/den of such polynomials; denominators other than
rational constants only ever arise from series division, so the expensive
multivariate gcd sits off the hot path.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _int_gcd

VARS = ("g2", "g4", "g6", "lam", "c")
GRADES = (2, 4, 6, 0, 0)
NVARS = len(VARS)
_ZEXP = (0,) * NVARS

_VAR_INDEX = {name: i for i, name in enumerate(VARS)}


def _mono_grade(exps):
    return sum(e * g for e, g in zip(exps, GRADES))


def _mono_key(exps):
    # graded-lex order used for leading terms and canonical printing
    return (sum(exps), exps)


class Poly:
    """Sparse multivariate polynomial over Q in the fixed variables VARS."""

    __slots__ = ("terms",)

    def __init__(self, terms):
        self.terms = terms

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(q):
        q = Fraction(q)
        return Poly({}) if q == 0 else Poly({_ZEXP: q})

    @staticmethod
    def var(name, power=1):
        exps = [0] * NVARS
        exps[_VAR_INDEX[name]] = power
        return Poly({tuple(exps): Fraction(1)})

    # -- predicates --------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_const(self):
        if not self.terms:
            return True
        return len(self.terms) == 1 and _ZEXP in self.terms

    def const_value(self):
        if not self.terms:
            return Fraction(0)
        return self.terms[_ZEXP]

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        big, small = (self.terms, other.terms)
        if len(big) < len(small):
            big, small = small, big
        out = dict(big)
        for k, v in small.items():
            s = out.get(k)
            if s is None:
                out[k] = v
            else:
                s = s + v
                if s:
                    out[k] = s
                else:
                    del out[k]
        return Poly(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Poly({k: -v for k, v in self.terms.items()})

    def __mul__(self, other):
        a, b = self.terms, other.terms
        if not a or not b:
            return Poly({})
        if len(a) == 1 and _ZEXP in a:
            q = a[_ZEXP]
            return Poly({k: v * q for k, v in b.items()})
        if len(b) == 1 and _ZEXP in b:
            q = b[_ZEXP]
            return Poly({k: v * q for k, v in a.items()})
        out = {}
        for ka, va in a.items():
            for kb, vb in b.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                s = out.get(k)
                if s is None:
                    out[k] = va * vb
                else:
                    s = s + va * vb
                    if s:
                        out[k] = s
                    else:
                        del out[k]
        return Poly(out)

    def scale(self, q):
        if q == 0:
            return Poly({})
        return Poly({k: v * q for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- structure ---------------------------------------------------------

    def leading(self):
        """(exps, coeff) of the graded-lex leading term."""
        k = max(self.terms, key=_mono_key)
        return k, self.terms[k]

    def grade(self):
        """Modular grade if homogeneous, else None."""
        grades = self.grades()
        if not grades:
            return 0
        if len(grades) == 1:
            return grades.pop()
        return None

    def grades(self):
        return {_mono_grade(k) for k in self.terms}

    def is_homogeneous(self):
        return len(self.grades()) <= 1

    def max_var(self):
        """Largest variable index occurring, or None for constants."""
        top = None
        for k in self.terms:
            for i in range(NVARS - 1, -1, -1):
                if k[i]:
                    if top is None or i > top:
                        top = i
                    break
        return top

    def degree_in(self, i):
        return max((k[i] for k in self.terms), default=0)

    def coeff_in_var(self, i, d):
        """Coefficient of VARS[i]**d, a Poly in the remaining variables."""
        out = {}
        for k, v in self.terms.items():
            if k[i] == d:
                kk = list(k)
                kk[i] = 0
                out[tuple(kk)] = v
        return Poly(out)

    def content(self):
        """Positive rational content (gcd of coefficients)."""
        num = 0
        den = 1
        for v in self.terms.values():
            num = _int_gcd(num, abs(v.numerator))
            den = den * v.denominator // _int_gcd(den, v.denominator)
        if num == 0:
            return Fraction(0)
        return Fraction(num, den)

    def __repr__(self):
        return f"Poly({poly_to_string(self)})"


P_ZERO = Poly({})
P_ONE = Poly({_ZEXP: Fraction(1)})


def poly_divmod_exact(num, den):
    """Exact quotient num/den; raises ValueError if division is not exact."""
    if den.is_zero():
        raise ZeroDivisionError("poly division by zero")
    if den.is_const():
        return num.scale(1 / den.const_value())
    quot = {}
    rem = dict(num.terms)
    dk, dv = den.leading()
    while rem:
        k = max(rem, key=_mono_key)
        v = rem[k]
        q = tuple(a - b for a, b in zip(k, dk))
        if any(e < 0 for e in q):
            raise ValueError("polynomial division not exact")
        cq = v / dv
        quot[q] = quot.get(q, Fraction(0)) + cq
        for kb, vb in den.terms.items():
            kk = tuple(a + b for a, b in zip(q, kb))
            s = rem.get(kk, Fraction(0)) - cq * vb
            if s:
                rem[kk] = s
            else:
                rem.pop(kk, None)
    return Poly({k: v for k, v in quot.items() if v})


def _pseudo_rem(a, b, i):
    """Pseudo-remainder of a by b, viewed in the variable VARS[i]."""
    da, db = a.degree_in(i), b.degree_in(i)
    lb = b.coeff_in_var(i, db)
    r = a
    while not r.is_zero() and r.degree_in(i) >= db:
        dr = r.degree_in(i)
        lr = r.coeff_in_var(i, dr)
        xshift = Poly.var(VARS[i], dr - db)
        r = r * lb - b * (lr * xshift)
    return r


def poly_gcd(a, b):
    """gcd up to a rational unit (primitive, graded-lex-monic leading 1)."""
    if a.is_zero():
        g = b
    elif b.is_zero():
        g = a
    else:
        g = _gcd_rec(a, b)
    if g.is_zero():
        return g
    _, lead = g.leading()
    return g.scale(1 / lead)


def _primitive(p, i):
    """Content (as Poly in vars < i) and primitive part w.r.t. VARS[i]."""
    coeffs = [p.coeff_in_var(i, d) for d in range(p.degree_in(i) + 1)]
    coeffs = [cde for cde in coeffs if not cde.is_zero()]
    cont = coeffs[0]
    for cde in coeffs[1:]:
        cont = _gcd_rec(cont, cde)
        if cont.is_const():
            break
    if cont.is_const():
        cont = P_ONE
        return cont, p
    return cont, poly_divmod_exact(p, cont)


def _gcd_rec(a, b):
    ia, ib = a.max_var(), b.max_var()
    if ia is None and ib is None:
        return P_ONE
    if ia is None or ib is None:
        # one side constant (nonzero): gcd is a unit
        return P_ONE
    i = max(ia, ib)
    if ia != ib:
        # gcd divides the side free of VARS[i]; recurse into its content
        lo = a if ia < ib else b
        hi = b if ia < ib else a
        cont_hi, _ = _primitive(hi, i)
        return _gcd_rec(lo, cont_hi) if not cont_hi.is_const() else P_ONE
    cont_a, pa = _primitive(a, i)
    cont_b, pb = _primitive(b, i)
    if pa.degree_in(i) < pb.degree_in(i):
        pa, pb = pb, pa
    while not pb.is_zero():
        r = _pseudo_rem(pa, pb, i)
        pa = pb
        if r.is_zero():
            pb = r
        else:
            _, pb = _primitive(r, i)
    cont = _gcd_rec(cont_a, cont_b)
    g = cont * pa
    c = g.content()
    if c not in (0, 1):
        g = g.scale(1 / c)
    return g


class Scalar:
    """Element of the fraction field Q(g2, g4, g6, lam, c), kept reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced=False):
        if den is None:
            den = P_ONE
        if den.is_zero():
            raise ZeroDivisionError("Scalar with zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_rational(q):
        return Scalar(Poly.const(q), P_ONE, _reduced=True)

    @staticmethod
    def var(name):
        return Scalar(Poly.var(name), P_ONE, _reduced=True)

    # -- predicates --------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def is_rational(self):
        return self.num.is_const() and self.den.is_const()

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("not a rational constant")
        return self.num.const_value() / self.den.const_value()

    def is_polynomial(self):
        return self.den.is_const()

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if self.den == other.den:
            return Scalar(self.num + other.num, self.den)
        return Scalar(self.num * other.den + other.num * self.den,
                      self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __neg__(self):
        return Scalar(-self.num, self.den, _reduced=True)

    def __mul__(self, other):
        other = _coerce(other)
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        return Scalar(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero Scalar")
        return Scalar(self.den, self.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Scalar.from_rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.num.is_zero()

    # -- grading -----------------------------------------------------------

    def grade(self):
        """Modular grade of a homogeneous scalar; None if inhomogeneous."""
        gn, gd = self.num.grades(), self.den.grades()
        if len(gn) > 1 or len(gd) > 1:
            return None
        if not gn:
            return 0
        return gn.pop() - (gd.pop() if gd else 0)

    def is_homogeneous(self):
        return self.num.is_homogeneous() and self.den.is_homogeneous()

    def __repr__(self):
        return f"Scalar({scalar_to_string(self)})"


def _reduce(num, den):
    if num.is_zero():
        return P_ZERO, P_ONE
    if den.is_const():
        return num.scale(1 / den.const_value()), P_ONE
    try:
        q = poly_divmod_exact(num, den)
        return q, P_ONE
    except ValueError:
        pass
    g = poly_gcd(num, den)
    if not g.is_const():
        num = poly_divmod_exact(num, g)
        den = poly_divmod_exact(den, g)
        if den.is_const():
            return num.scale(1 / den.const_value()), P_ONE
    _, lead = den.leading()
    return num.scale(1 / lead), den.scale(1 / lead)


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar.from_rational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")


ZERO = Scalar.from_rational(0)
ONE = Scalar.from_rational(1)
G2 = Scalar.var("g2")
G4 = Scalar.var("g4")
G6 = Scalar.var("g6")
LAM = Scalar.var("lam")
CC = Scalar.var("c")


# -- canonical strings -----------------------------------------------------

def _mono_string(exps, coeff):
    parts = []
    for name, e in zip(VARS, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    if not parts:
        return str(coeff)
    body = "*".join(parts)
    if coeff == 1:
        return body
    if coeff == -1:
        return f"-{body}"
    return f"{coeff}*{body}"


def poly_to_string(p):
    """Canonical string with integer coefficients not enforced (raw)."""
    if p.is_zero():
        return "0"
    keys = sorted(p.terms, key=_mono_key, reverse=True)
    out = _mono_string(keys[0], p.terms[keys[0]])
    for k in keys[1:]:
        s = _mono_string(k, p.terms[k])
        out += ("+" + s) if not s.startswith("-") else s
    return out


def scalar_to_string(s):
    """Canonical 'p(g2,g4,g6)/q(g2,g4,g6)' form with integer coefficients."""
    if s.is_zero():
        return "0"
    lcm = 1
    for v in list(s.num.terms.values()) + list(s.den.terms.values()):
        lcm = lcm * v.denominator // _int_gcd(lcm, v.denominator)
    num = s.num.scale(lcm)
    den = s.den.scale(lcm)
    g = 0
    for v in list(num.terms.values()) + list(den.terms.values()):
        g = _int_gcd(g, abs(v.numerator))
    if g > 1:
        num = num.scale(Fraction(1, g))
        den = den.scale(Fraction(1, g))
    _, lead = den.leading()
    if lead < 0:
        num, den = num.scale(-1), den.scale(-1)
    if den == P_ONE:
        return poly_to_string(num)
    return f"({poly_to_string(num)})/({poly_to_string(den)})"


# -- parsing ---------------------------------------------------------------

def parse_poly(text, names=None):
    """Parse '+/-'-separated monomials like '3*g4^2 - 1/2*g2*g6 + 4'.

    ``names`` maps variable names to indices when parsing over a different
    variable set; defaults to VARS.
    """
    if names is None:
        names = _VAR_INDEX
        nvars = NVARS
    else:
        nvars = len(names)
    text = text.replace(" ", "")
    if not text:
        raise ValueError("empty polynomial string")
    out = {}
    i = 0
    sign = 1
    if text[0] in "+-":
        sign = -1 if text[0] == "-" else 1
        i = 1
    term = ""
    chunks = []
    while i <= len(text):
        ch = text[i] if i < len(text) else None
        if ch in ("+", "-", None) and term and term[-1] not in "*/^":
            chunks.append((sign, term))
            term = ""
            sign = -1 if ch == "-" else 1
        elif ch is not None:
            term += ch
        i += 1
    if term:
        raise ValueError(f"dangling term in {text!r}")
    for sign, chunk in chunks:
        coeff = Fraction(sign)
        exps = [0] * nvars
        for factor in chunk.split("*"):
            if not factor:
                raise ValueError(f"empty factor in {chunk!r}")
            if factor[0].isdigit():
                coeff *= Fraction(factor)
                continue
            if "^" in factor:
                base, _, pow_s = factor.partition("^")
                power = int(pow_s)
            else:
                base, power = factor, 1
            if base not in names:
                raise ValueError(f"unknown variable {base!r}")
            exps[names[base]] += power
        k = tuple(exps)
        out[k] = out.get(k, Fraction(0)) + coeff
    return Poly({k: v for k, v in out.items() if v})


def parse_scalar(text):
    text = text.strip()
    if text.startswith("(") and ")/(" in text and text.endswith(")"):
        num_s, _, den_s = text.partition(")/(")
        return Scalar(parse_poly(num_s[1:]), parse_poly(den_s[:-1]))
    # plain polynomial or rational like '-3/7*g4^2' handled by parse_poly
    return Scalar(parse_poly(text))
