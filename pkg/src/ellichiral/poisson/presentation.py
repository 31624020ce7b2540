"""Finitely presented graded commutative/Poisson algebras.

Ring elements are dicts {monomial: Scalar} with monomials sorted tuples of
generator indices.  Quotients by weight-homogeneous relations are handled by
per-weight linear algebra (echelon normal forms), which keeps every
computation an exact finite rank problem; no general Groebner machinery.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import ValidationError
from ..kernel.scalar import ONE, Scalar, ZERO, parse_scalar, scalar_to_string
from ..kernel.sparse import rref


def _coerce(c):
    return Scalar.from_rational(c) if isinstance(c, (int, Fraction)) else c


def poly_mul(p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(sorted(m1 + m2))
            s = out.get(m, ZERO) + c1 * c2
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
    return out


def poly_add(p, q):
    out = dict(p)
    for m, c in q.items():
        s = out.get(m, ZERO) + c
        if s.is_zero():
            out.pop(m, None)
        else:
            out[m] = s
    return out


def poly_scale(p, c):
    c = _coerce(c)
    if c.is_zero():
        return {}
    return {m: v * c for m, v in p.items()}


def poly_diff(p, gen):
    """Formal partial derivative with respect to generator ``gen``."""
    out = {}
    for mono, c in p.items():
        count = mono.count(gen)
        if not count:
            continue
        pos = mono.index(gen)
        new = mono[:pos] + mono[pos + 1:]
        s = out.get(new, ZERO) + c * count
        if s.is_zero():
            out.pop(new, None)
        else:
            out[new] = s
    return out


class GradedQuotientRing:
    """Shared machinery: weights, monomial enumeration, relation quotients."""

    def __init__(self, generators, relations=()):
        self.generators = tuple(generators)
        self.relations = tuple(
            {tuple(sorted(m)): _coerce(c) for m, c in rel.items()}
            for rel in relations)
        for _, w in self.generators:
            if w <= 0:
                raise ValidationError("generator weights must be positive")
        for rel in self.relations:
            if len({self.mono_weight(m) for m in rel}) > 1:
                raise ValidationError("relations must be weight-homogeneous")
        self._nf = {}
        self._monos = {}

    def mono_weight(self, mono):
        return sum(self.generators[g][1] for g in mono)

    def poly_weights(self, p):
        return {self.mono_weight(m) for m in p}

    def monomials(self, weight):
        """Free commutative monomials of the given weight."""
        if weight in self._monos:
            return self._monos[weight]
        out = []

        def rec(w, min_gen, mono):
            if w == 0:
                out.append(tuple(mono))
                return
            for g in range(min_gen, len(self.generators)):
                wg = self.generators[g][1]
                if wg <= w:
                    rec(w - wg, g, mono + [g])

        rec(weight, 0, [])
        self._monos[weight] = sorted(out)
        return self._monos[weight]

    def _reduction(self, weight):
        if weight in self._nf:
            return self._nf[weight]
        instances = []
        for rel in self.relations:
            w0 = self.mono_weight(next(iter(rel)))
            if w0 > weight:
                continue
            for m in self.monomials(weight - w0):
                instances.append(poly_mul(rel, {m: ONE}))
        monos = self.monomials(weight)
        index = {m: i for i, m in enumerate(monos)}
        rows = []
        for inst in instances:
            row = {index[m]: c for m, c in inst.items()}
            if row:
                rows.append(row)
        pivots, reduced = rref(rows)
        nf = {}
        for pc, row in zip(pivots, reduced):
            nf[monos[pc]] = {monos[cc]: -v for cc, v in row.items()
                             if cc != pc}
        self._nf[weight] = nf
        return nf

    def normal_form(self, p):
        out = {}
        work = list(p.items())
        while work:
            mono, c = work.pop()
            if c.is_zero():
                continue
            nf = self._reduction(self.mono_weight(mono)) if self.relations \
                else {}
            if mono in nf:
                for m2, c2 in nf[mono].items():
                    work.append((m2, c * c2))
            else:
                s = out.get(mono, ZERO) + c
                if s.is_zero():
                    out.pop(mono, None)
                else:
                    out[mono] = s
        return out

    def basis(self, weight):
        nf = self._reduction(weight) if self.relations else {}
        return [m for m in self.monomials(weight) if m not in nf]

    def dim(self, weight):
        return len(self.basis(weight))


@dataclass
class PoissonPres:
    """Graded Poisson algebra presentation.

    brackets[(i, j)] (i < j) is the polynomial {x_i, x_j}; the bracket of
    generators has weight w_i + w_j + bracket_shift.
    """

    generators: tuple
    relations: tuple = ()
    brackets: dict = field(default_factory=dict)
    bracket_shift: int = -1
    name: str = ""

    def __post_init__(self):
        self.ring = GradedQuotientRing(self.generators, self.relations)
        clean = {}
        for (i, j), p in self.brackets.items():
            p = {tuple(sorted(m)): _coerce(c) for m, c in p.items()}
            if i == j:
                if any(not c.is_zero() for c in p.values()):
                    raise ValidationError("{x,x} must vanish")
                continue
            if i > j:
                i, j, p = j, i, poly_scale(p, -1)
            clean[(i, j)] = p
        self.brackets = clean

    def gen_bracket(self, i, j):
        if i == j:
            return {}
        if i < j:
            return self.brackets.get((i, j), {})
        return poly_scale(self.brackets.get((j, i), {}), -1)

    def bracket_gen_poly(self, i, q):
        """{x_i, q} by the Leibniz rule, reduced to normal form."""
        out = {}
        for mono, c in q.items():
            for pos, g in enumerate(mono):
                rest = mono[:pos] + mono[pos + 1:]
                br = self.gen_bracket(i, g)
                if not br:
                    continue
                term = poly_mul(br, {rest: c})
                out = poly_add(out, term)
        return self.ring.normal_form(out)

    def bracket(self, p, q):
        out = {}
        for mono, c in p.items():
            for pos, g in enumerate(mono):
                rest = mono[:pos] + mono[pos + 1:]
                inner = self.bracket_gen_poly(g, q)
                out = poly_add(out, poly_mul(inner, {rest: c}))
        return self.ring.normal_form(out)

    def validate(self, window=6):
        """Antisymmetry/Jacobi/Leibniz on generators up to the window."""
        n = len(self.generators)
        for (i, j), p in self.brackets.items():
            wts = self.ring.poly_weights(p)
            want = self.generators[i][1] + self.generators[j][1] \
                + self.bracket_shift
            if wts and wts != {want}:
                raise ValidationError(
                    f"bracket {{x{i},x{j}}} not of weight {want}")
        gi = [{(i,): ONE} for i in range(n)]
        for x in range(n):
            for y in range(n):
                for z in range(n):
                    lhs = self.bracket(gi[x], self.bracket(gi[y], gi[z]))
                    r1 = self.bracket(self.bracket(gi[x], gi[y]), gi[z])
                    r2 = self.bracket(gi[y], self.bracket(gi[x], gi[z]))
                    diff = poly_add(lhs, poly_scale(poly_add(r1, r2), -1))
                    if diff:
                        raise ValidationError(
                            f"Jacobi fails on generators ({x},{y},{z})")
                # Leibniz {x, yz} = {x,y}z + y{x,z}
                for z in range(n):
                    yz = self.ring.normal_form(poly_mul(gi[y], gi[z]))
                    lhs = self.bracket(gi[x], yz)
                    rhs = poly_add(
                        self.ring.normal_form(
                            poly_mul(self.bracket(gi[x], gi[y]), gi[z])),
                        self.ring.normal_form(
                            poly_mul(gi[y], self.bracket(gi[x], gi[z]))))
                    diff = poly_add(lhs, poly_scale(rhs, -1))
                    if diff:
                        raise ValidationError(
                            f"Leibniz fails on generators ({x},{y},{z})")
        return True

    def to_json(self):
        return {
            "generators": [{"sym": s, "weight": w}
                           for s, w in self.generators],
            "relations": [self._poly_json(r) for r in self.relations],
            "brackets": [{"i": i, "j": j, "poly": self._poly_json(p)}
                         for (i, j), p in sorted(self.brackets.items())],
            "bracket_shift": self.bracket_shift,
        }

    def _poly_json(self, p):
        return [[scalar_to_string(c), list(m)] for m, c in sorted(p.items())]

    @staticmethod
    def from_json(data):
        gens = tuple((g["sym"], int(g["weight"]))
                     for g in data["generators"])

        def poly(entries):
            out = {}
            for c, m in entries:
                coeff = parse_scalar(c) if isinstance(c, str) else _coerce(c)
                out[tuple(sorted(int(x) for x in m))] = coeff
            return out

        return PoissonPres(
            generators=gens,
            relations=tuple(poly(r) for r in data.get("relations", [])),
            brackets={(b["i"], b["j"]): poly(b["poly"])
                      for b in data.get("brackets", [])},
            bracket_shift=int(data.get("bracket_shift", -1)),
        )


def symplectic_plane():
    """C[x, y] with {x, y} = 1 (weights 1, 1; bracket shift -2)."""
    return PoissonPres(generators=(("x", 1), ("y", 1)),
                       brackets={(0, 1): {(): ONE}},
                       bracket_shift=-2, name="symplectic-plane")


@dataclass
class DiffAlgebra:
    """Graded commutative algebra with a degree +1 derivation T.

    ``t_closure_window``, when set, marks the relation list as the
    truncation of a T-closed family: T-stability is then only checked for
    instances whose image stays below that weight.
    """

    generators: tuple
    t_action: dict                 # gen index -> poly (weight w_g + 1)
    relations: tuple = ()
    name: str = ""
    t_closure_window: int = None

    def __post_init__(self):
        self.ring = GradedQuotientRing(self.generators, self.relations)
        self.t_action = {g: {tuple(sorted(m)): _coerce(c)
                             for m, c in p.items()}
                         for g, p in self.t_action.items()}

    def t_gen(self, g):
        return self.t_action.get(g, {})

    def t_poly(self, p):
        out = {}
        for mono, c in p.items():
            for pos, g in enumerate(mono):
                rest = mono[:pos] + mono[pos + 1:]
                out = poly_add(out, poly_mul(self.t_gen(g), {rest: c}))
        return self.ring.normal_form(out)

    def validate(self, window=6):
        """T must map every relation into the relation ideal (per weight)."""
        for rel in self.relations:
            if self.t_closure_window is not None:
                w = self.ring.poly_weights(rel).pop()
                if w + 1 > self.t_closure_window:
                    continue
            img = self.t_poly(rel)
            if img:
                raise ValidationError(
                    "T does not preserve the relation ideal")
        return True
