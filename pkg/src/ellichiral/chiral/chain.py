"""Chains of the chiral complex and their (d_i + T_i)-normal form.

A degree-n chain is a Scalar combination of terms

    (function monomial of width n) x (a^1, ..., a^n, b)

with the a's and b canonical basis monomials of the vertex algebra.  The
class lives in the quotient by sum_i (d_i + T_i); the stored representative
trades every function derivative for translation operators:

  * width 1 has honest canonical coordinates: P^(r) folds to (-1)^r P T^r
    and 1 (x) T(a) | b dies, so the reduced form projects the a-slot of
    1-terms modulo T V;
  * width >= 2 uses cached reduction certificates m = sum c_h h + sum d_i(g)
    obtained by solving in the finite graded piece of the function algebra,
    giving derivative-free representatives (a section, not claimed minimal).

Total degree tdeg = deg_w(f) + sum of conformal weights - n is preserved by
every operation here and by the differential.
"""

from __future__ import annotations

from functools import lru_cache

from ..errors import UnsupportedError, ValidationError
from ..kernel.scalar import ONE, Scalar, ZERO
from ..kernel.sparse import rref
from ..elliptic.funcalg import (EllFunc, enumerate_monomials,
                                pole_factor_count, sym_weight)
from ..vertexalg.space import VASpace, VAState


def mono_weight(mono):
    return sum(sym_weight(s) for s in mono)


def mono_has_derivative(mono):
    for sym in mono:
        if sym[0] == "P" and sym[2] > 0:
            return True
        if sym[0] == "D" and sym[3] > 0:
            return True
    return False


class Chain:
    """Element of C_n, stored in (d_i + T_i)-reduced normal form."""

    __slots__ = ("space", "degree", "terms")

    def __init__(self, space, degree, terms=None, reduce=True):
        self.space = space
        self.degree = degree
        raw = {}
        for key, coeff in (terms or {}).items():
            if isinstance(coeff, int):
                coeff = Scalar.from_rational(coeff)
            if coeff.is_zero():
                continue
            fmono, states = key
            if len(states) != degree + 1:
                raise ValidationError(
                    f"need {degree + 1} tensor slots, got {len(states)}")
            s = raw.get(key, ZERO) + coeff
            if s.is_zero():
                raw.pop(key, None)
            else:
                raw[key] = s
        self.terms = _reduce_terms(space, degree, raw) if reduce else raw

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_states(space, degree, fmono, states, coeff=ONE):
        return Chain(space, degree, {(tuple(fmono), tuple(states)): coeff})

    @staticmethod
    def zero(space, degree):
        return Chain(space, degree, {}, reduce=False)

    @staticmethod
    def from_ellfunc(space, degree, func: EllFunc, states, coeff=ONE):
        terms = {}
        for fmono, c in func.terms.items():
            terms[(fmono, tuple(states))] = c * coeff
        return Chain(space, degree, terms)

    # -- algebra ---------------------------------------------------------------

    def __add__(self, other):
        if other.degree != self.degree:
            raise ValidationError("chain degrees differ")
        out = dict(self.terms)
        for k, c in other.terms.items():
            s = out.get(k, ZERO) + c
            if s.is_zero():
                out.pop(k, None)
            else:
                out[k] = s
        return Chain(self.space, self.degree, out, reduce=False)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        if isinstance(c, int):
            c = Scalar.from_rational(c)
        if c.is_zero():
            return Chain.zero(self.space, self.degree)
        return Chain(self.space, self.degree,
                     {k: v * c for k, v in self.terms.items()}, reduce=False)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return (isinstance(other, Chain) and self.degree == other.degree
                and self.terms == other.terms)

    # -- grading ----------------------------------------------------------------

    def term_tdeg(self, key, coeff=None):
        fmono, states = key
        w = mono_weight(fmono)
        if coeff is not None:
            g = coeff.grade()
            if g is None:
                raise ValidationError("inhomogeneous coefficient")
            w += g
        return (w + sum(self.space.monomial_weight(m) for m in states)
                - self.degree)

    def tdeg_components(self):
        comps = {}
        for k, c in self.terms.items():
            comps.setdefault(self.term_tdeg(k, c), {})[k] = c
        return {t: Chain(self.space, self.degree, ts, reduce=False)
                for t, ts in sorted(comps.items())}

    def tdegs(self):
        return sorted({self.term_tdeg(k, c) for k, c in self.terms.items()})

    def __repr__(self):
        bits = []
        for (fmono, states), c in sorted(self.terms.items())[:8]:
            from ..kernel.scalar import scalar_to_string
            f = EllFunc(self.degree, {fmono: ONE}, _normal=True)
            bits.append(f"({scalar_to_string(c)})*{f!r}(x){states}")
        more = "" if len(self.terms) <= 8 else f" ... [{len(self.terms)}]"
        return f"Chain(n={self.degree}: " + " + ".join(bits) + more + ")"


# -- reduction ----------------------------------------------------------------


def _reduce_terms(space, degree, raw):
    """Eliminate derivative symbols; canonicalize width-1 completely."""
    width = degree
    out = {}
    work = list(raw.items())
    while work:
        (fmono, states), coeff = work.pop()
        if coeff.is_zero():
            continue
        if not mono_has_derivative(fmono):
            _add_term(out, fmono, states, coeff)
            continue
        cert = _certificate(width, fmono)
        for h, c in cert["free"].items():
            _add_term(out, h, states, coeff * c)
        for (i, g), c in cert["partial"].items():
            new_states = _translate_slot(space, states, i - 1)
            for st2, c2 in new_states:
                work.append(((g, st2), coeff * c * c2 * -1))
    if width == 1:
        out = _canonical_width1(space, out)
    return out


def _add_term(target, fmono, states, coeff):
    key = (fmono, states)
    s = target.get(key, ZERO) + coeff
    if s.is_zero():
        target.pop(key, None)
    else:
        target[key] = s


def _translate_slot(space, states, slot):
    """Apply T to one tensor slot; returns [(states', coeff)] pairs."""
    out = []
    base = VAState(space, {states[slot]: ONE})
    img = space.translate(base, unchecked=True)
    for mono, c in img.terms.items():
        out.append((states[:slot] + (mono,) + states[slot + 1:], c))
    return out


_CERT_CACHE = {}


def _certificate(width, fmono):
    """fmono = sum_h c_h h + sum_i d_i(g) with h derivative-free.

    Solved once per (width, deg_w) graded piece and cached per monomial.
    """
    key = (width, fmono)
    if key in _CERT_CACHE:
        return _CERT_CACHE[key]
    w = mono_weight(fmono)
    _solve_certificates(width, w)
    if key not in _CERT_CACHE:
        raise ValidationError(
            f"monomial {fmono} not covered by the spanning certificate")
    return _CERT_CACHE[key]


def _solve_certificates(width, w):
    """Populate _CERT_CACHE for every derivative monomial at (width, w).

    The coordinate space spans all symbol weights <= w because rewrites can
    trade symbol weight for scalar grade (wp wp -> wp''/6 + 5 g4).
    """
    targets = [m for m in enumerate_monomials(width, w,
                                              include_derivatives=True)
               if mono_has_derivative(m)]
    if not targets:
        return
    monos = []
    free = []
    for w2 in range(w + 1):
        layer = enumerate_monomials(width, w2, include_derivatives=True)
        monos.extend(layer)
        free.extend(m for m in layer if not mono_has_derivative(m))
    index = {m: i for i, m in enumerate(monos)}

    columns = []
    labels = []
    for h in free:
        columns.append({index[h]: ONE})
        labels.append(("free", h))
    lower = []
    for w2 in range(w):
        lower.extend(enumerate_monomials(width, w2,
                                         include_derivatives=True))
    for g in lower:
        gf = EllFunc(width, {g: ONE}, _normal=True)
        for i in range(1, width + 1):
            dg = gf.derivative(i)
            col = {}
            for m2, c2 in dg.terms.items():
                if m2 not in index:
                    raise ValidationError("derivative left the graded piece")
                col[index[m2]] = c2
            if col:
                columns.append(col)
                labels.append(("partial", (i, g)))

    # one rref with all targets appended as extra columns
    ncols = len(columns)
    rows = {}
    for ci, col in enumerate(columns):
        for ri, c in col.items():
            rows.setdefault(ri, {})[ci] = c
    for ti, t in enumerate(targets):
        rows.setdefault(index[t], {})[ncols + ti] = ONE
    pivots, reduced = rref(list(rows.values()))
    piv_rows = {pc: row for pc, row in zip(pivots, reduced)}
    for ti, t in enumerate(targets):
        tcol = ncols + ti
        if tcol in piv_rows:
            raise ValidationError(
                f"spanning failure: {t} not reducible at width {width}")
        cert = {"free": {}, "partial": {}}
        for pc, row in piv_rows.items():
            if pc >= ncols:
                continue
            v = row.get(tcol)
            if v is None or v.is_zero():
                continue
            kind, payload = labels[pc]
            cert[kind][payload] = v
        _CERT_CACHE[(width, t)] = cert


def _canonical_width1(space, terms):
    """Project the a-slot of 1-terms modulo T V (1 (x) Ta | b is exact)."""
    out = {}
    for (fmono, states), coeff in terms.items():
        if fmono != ():
            _add_term(out, fmono, states, coeff)
            continue
        a, b = states
        red = _t_complement_reduce(space, a)
        for mono, c in red.items():
            _add_term(out, (), (mono, b), coeff * c)
    return out


def _t_complement_reduce(space, mono):
    """Express a basis monomial modulo im(T) in complement coordinates."""
    w = space.monomial_weight(mono)
    table = _t_reduction_table(space, w)
    return table.get(mono, {mono: ONE})


_T_TABLES = {}


def _t_reduction_table(space, w):
    """RREF of the T-image span; pivot monomials rewrite into the rest."""
    key = (id(space), w)
    if key in _T_TABLES:
        return _T_TABLES[key]
    basis = space.basis(w)
    index = {m: i for i, m in enumerate(basis)}
    rows = []
    for m in space.basis(w - 1):
        img = space._translate_mono(m)
        row = {index[mm]: c for mm, c in img.items()}
        if row:
            rows.append(row)
    pivots, reduced = rref(rows)
    table = {}
    for pc, row in zip(pivots, reduced):
        table[basis[pc]] = {basis[cc]: -v for cc, v in row.items()
                            if cc != pc}
    _T_TABLES[key] = table
    return table


# -- spanning sets --------------------------------------------------------------


def chain_basis(n, tdeg, space, max_width=3):
    """Spanning set of tdeg-homogeneous normal-form terms of C_n.

    For n = 0 this is the weight-tdeg basis of V (a certified basis); for
    n >= 1 the returned list of (function monomial, states) keys is flagged
    as spanning only -- ranks are computed downstream in faithful
    coordinates rather than assuming linear independence.
    """
    if n > max_width or n > 3:
        raise UnsupportedError("chain widths above 3 are unsupported")
    if tdeg < 0:
        return []
    if n == 0:
        return [((), (m,)) for m in space.basis(tdeg)]
    out = []
    for d in range(0, tdeg + n + 1):
        fmonos = enumerate_monomials(n, d, include_derivatives=False)
        if not fmonos:
            continue
        total = tdeg + n - d
        if total < 0:
            continue
        for states in _state_tuples(space, n + 1, total):
            for fm in fmonos:
                out.append((fm, states))
    return out


def _state_tuples(space, slots, total):
    out = []

    def rec(slot, left, acc):
        if slot == slots - 1:
            for m in space.basis(left):
                out.append(tuple(acc + [m]))
            return
        for w in range(0, left + 1):
            for m in space.basis(w):
                rec(slot + 1, left - w, acc + [m])

    rec(0, total, [])
    return out
