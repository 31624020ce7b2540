"""Weight-truncated vertex algebra spaces and the exact mode engine.

States are Scalar combinations of canonical monomials; the engine computes
arbitrary products a_(n)b by structural recursion:

  * generator modes act through commutators built from the preset's
    nonnegative products via [a_(k), b_(m)] = sum binom(k,j) (a_(j)b)_(k+m-j);
  * a general monomial g_(m) v acts through the (-1)-product expansion
    (u_(-1)v)_(n) c = sum_j u_(-1-j) (v_(n+j) c) + v_(n-1-j) (u_(j) c)
    after rewriting g_(m) = (T^(s) g)_(-1) with s = -m-1.

Everything is memoized; the advertised cutoff only gates the public mode()
surface (internal recursion extends the basis lazily as needed).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from ..errors import TruncationError, UnsupportedError, ValidationError
from ..kernel.scalar import ONE, Scalar, ZERO
from ..kernel.sparse import rref
from .presets import VAPreset

VACUUM = ()


def _binom(m, j):
    # generalized binomial for possibly negative integer m
    out = Fraction(1)
    for i in range(j):
        out *= Fraction(m - i, i + 1)
    return out


class VAState:
    """Scalar combination of basis monomials, weight-graded."""

    __slots__ = ("space", "terms")

    def __init__(self, space, terms):
        self.space = space
        clean = {}
        for mono, c in terms.items():
            if isinstance(c, (int, Fraction)):
                c = Scalar.from_rational(c)
            if not c.is_zero():
                clean[mono] = c
        self.terms = clean

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, ZERO) + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
        return VAState(self.space, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        if isinstance(c, (int, Fraction)):
            c = Scalar.from_rational(c)
        if c.is_zero():
            return VAState(self.space, {})
        return VAState(self.space, {m: v * c for m, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, VAState) and self.terms == other.terms

    def weight_components(self):
        comps = {}
        for m, c in self.terms.items():
            comps.setdefault(self.space.monomial_weight(m), {})[m] = c
        return {w: VAState(self.space, t) for w, t in sorted(comps.items())}

    def weights(self):
        return sorted({self.space.monomial_weight(m) for m in self.terms})

    def max_weight(self):
        return max((self.space.monomial_weight(m) for m in self.terms),
                   default=0)

    def is_homogeneous(self):
        return len(self.weights()) <= 1

    def __repr__(self):
        bits = []
        for m, c in sorted(self.terms.items()):
            from ..kernel.scalar import scalar_to_string
            name = "|0>" if not m else "*".join(
                f"{self.space.preset.generators[g][0]}({mode})"
                for mode, g in m)
            bits.append(f"({scalar_to_string(c)})*{name}")
        return "VAState(" + (" + ".join(bits) if bits else "0") + ")"


class VASpace:
    """Canonical monomial basis of a preset, enumerated lazily by weight."""

    def __init__(self, preset: VAPreset, cutoff: int):
        if cutoff < 0:
            raise ValueError("cutoff must be >= 0")
        self.preset = preset
        self.cutoff = cutoff
        self._basis = {}
        self._comm_nf = {}
        self._gen_cache = {}
        self._mode_cache = {}
        self._translate_cache = {}
        if preset.kind not in ("pbw", "commutative"):
            raise UnsupportedError(f"unknown preset kind {preset.kind!r}")

    # -- basis ---------------------------------------------------------------

    def monomial_weight(self, mono):
        return sum(self.preset.weight(g) - m - 1 for m, g in mono)

    def _free_monomials(self, weight):
        gens = self.preset.generators
        out = []

        def rec(w, min_pair, mono):
            if w == 0:
                out.append(tuple(mono))
                return
            for g in range(len(gens)):
                wg = gens[g][1]
                for depth in range(0, w - wg + 1):
                    # factor g_(m) with m = -depth-1, weight wg + depth
                    if wg + depth > w:
                        break
                    pair = (-depth - 1, g)
                    if pair < min_pair:
                        continue
                    rec(w - wg - depth, pair, mono + [pair])

        rec(weight, (-(weight + 1), -1), [])
        return sorted(out)

    def basis(self, weight):
        """Canonical basis monomials of the given weight (lazily extended)."""
        if weight < 0:
            return []
        if weight not in self._basis:
            free = self._free_monomials(weight)
            if self.preset.kind == "commutative" and self.preset.relations:
                reduced = self._commutative_reduction(weight)
                free = [m for m in free if m not in reduced]
            self._basis[weight] = free
        return self._basis[weight]

    def dim(self, weight):
        return len(self.basis(weight))

    def dims(self):
        return [self.dim(w) for w in range(self.cutoff + 1)]

    def vacuum(self):
        return VAState(self, {VACUUM: ONE})

    def generator_state(self, sym):
        g = self.preset.gen_index(sym)
        return VAState(self, {((-1, g),): ONE})

    def state(self, terms):
        return VAState(self, terms)

    # -- commutative quotient -------------------------------------------------

    def _commutative_reduction(self, weight):
        """pivot monomial -> {basis monomial: Scalar} rewriting map."""
        if weight in self._comm_nf:
            return self._comm_nf[weight]
        # span all m * T^j(relation) landing at exactly this weight
        rel_instances = []
        for rel in self.preset.relations:
            wts = {self.monomial_weight(m) for m in rel}
            if len(wts) != 1:
                raise ValidationError("relations must be weight-homogeneous")
            w_in = wts.pop()
            inst = rel
            while w_in <= weight:
                pad = weight - w_in
                for m in self._free_monomials(pad):
                    rel_instances.append(self._comm_mono_mult(inst, m))
                inst = self._comm_translate_poly(inst)
                w_in += 1
        monos = self._free_monomials(weight)
        index = {m: i for i, m in enumerate(monos)}
        rows = []
        for inst in rel_instances:
            row = {index[m]: c for m, c in inst.items() if not c.is_zero()}
            if row:
                rows.append(row)
        pivots, reduced = rref(rows)
        nf = {}
        for pc, row in zip(pivots, reduced):
            expansion = {}
            for cc, v in row.items():
                if cc == pc:
                    continue
                expansion[monos[cc]] = -v
            nf[monos[pc]] = expansion
        self._comm_nf[weight] = nf
        return nf

    def _comm_mono_mult(self, poly, mono):
        return {tuple(sorted(m + mono)): c for m, c in poly.items()}

    def _comm_translate_poly(self, poly):
        out = {}
        for mono, c in poly.items():
            for pos, (m, g) in enumerate(mono):
                new = tuple(sorted(mono[:pos] + ((m - 1, g),)
                                   + mono[pos + 1:]))
                s = out.get(new, ZERO) + c * (-m)
                if s.is_zero():
                    out.pop(new, None)
                else:
                    out[new] = s
        return out

    def _comm_nf_state(self, terms):
        """Reduce raw commutative monomials modulo the relation ideal."""
        if not self.preset.relations:
            return dict(terms)
        out = {}
        work = list(terms.items())
        while work:
            mono, c = work.pop()
            w = self.monomial_weight(mono)
            nf = self._commutative_reduction(w)
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

    # -- engine: generator modes ----------------------------------------------

    def _gen_products_state(self, gi, gj, n):
        return self.preset.product(gi, gj, n)

    def _gen_mode_mono(self, g, m, mono):
        """g_(m) applied to a basis monomial; returns {monomial: Scalar}."""
        key = (g, m, mono)
        cached = self._gen_cache.get(key)
        if cached is not None:
            return cached
        if self.preset.kind == "commutative":
            out = self._comm_gen_mode(g, m, mono)
            self._gen_cache[key] = out
            return out
        if not mono:
            out = {((m, g),): ONE} if m <= -1 else {}
            self._gen_cache[key] = out
            return out
        head = mono[0]
        m0, g0 = head
        if (m, g) <= head:
            out = {((m, g),) + mono: ONE}
            self._gen_cache[key] = out
            return out
        rest = mono[1:]
        # commutator part: [g_(m), g0_(m0)] rest
        out = {}
        for n in range(0, self.preset.max_product_n(g, g0) + 1):
            prod = self._gen_products_state(g, g0, n)
            if not prod:
                continue
            b = _binom(m, n)
            if b == 0:
                continue
            for mono_v, cv in prod.items():
                applied = self._mono_mode_mono(mono_v, m + m0 - n, rest)
                for mm, cc in applied.items():
                    s = out.get(mm, ZERO) + cc * cv * b
                    if s.is_zero():
                        out.pop(mm, None)
                    else:
                        out[mm] = s
        # reordered part: g0_(m0) (g_(m) rest)
        inner = self._gen_mode_mono(g, m, rest)
        for mm, cc in inner.items():
            for mmm, ccc in self._gen_mode_mono(g0, m0, mm).items():
                s = out.get(mmm, ZERO) + cc * ccc
                if s.is_zero():
                    out.pop(mmm, None)
                else:
                    out[mmm] = s
        self._gen_cache[key] = out
        return out

    def _comm_gen_mode(self, g, m, mono):
        if m >= 0:
            return {}
        # g_(m) = (T^(s) g)_(-1), multiplication in the commutative algebra
        new = tuple(sorted(mono + ((m, g),)))
        return self._comm_nf_state({new: ONE})

    # -- engine: monomial modes -------------------------------------------------

    def _mono_mode_mono(self, a_mono, k, b_mono):
        """(a_mono)_(k) applied to b_mono; both canonical monomials."""
        key = (a_mono, k, b_mono)
        cached = self._mode_cache.get(key)
        if cached is not None:
            return cached
        # grading bound: result weight must be nonnegative
        wa = self.monomial_weight(a_mono)
        wb = self.monomial_weight(b_mono)
        if wa + wb - k - 1 < 0:
            self._mode_cache[key] = {}
            return {}
        if not a_mono:
            out = {b_mono: ONE} if k == -1 else {}
            self._mode_cache[key] = out
            return out
        if self.preset.kind == "commutative":
            out = self._comm_mono_mode(a_mono, k, b_mono)
            self._mode_cache[key] = out
            return out
        (m0, g0), v = a_mono[0], a_mono[1:]
        s = -m0 - 1
        sign = -1 if s % 2 else 1
        out = {}
        # family 1: (T^(s)g0)_(-1-j) (v_(k+j) b); inner weight
        # wv + wb - (k+j) - 1 with wv = wa - (weight(g0) - m0 - 1)
        wv = wa - (self.preset.weight(g0) - m0 - 1)
        j = 0
        while wv + wb - (k + j) - 1 >= 0:
            inner = self._mono_mode_mono(v, k + j, b_mono)
            if inner:
                b1 = _binom(-1 - j, s) * sign
                if b1:
                    for mm, cc in inner.items():
                        for mmm, ccc in self._gen_mode_mono(
                                g0, -1 - j - s, mm).items():
                            val = out.get(mmm, ZERO) + cc * ccc * b1
                            if val.is_zero():
                                out.pop(mmm, None)
                            else:
                                out[mmm] = val
            j += 1
        # family 2: v_(k-1-j) ((T^(s)g0)_(j) b)
        for j in range(0, max(0, self.preset.weight(g0) + wb + s) + 1):
            b2 = _binom(j, s) * sign
            if b2 == 0:
                continue
            inner = self._gen_mode_mono(g0, j - s, b_mono)
            if not inner:
                continue
            for mm, cc in inner.items():
                applied = self._mono_mode_mono(v, k - 1 - j, mm)
                for mmm, ccc in applied.items():
                    val = out.get(mmm, ZERO) + cc * ccc * b2
                    if val.is_zero():
                        out.pop(mmm, None)
                    else:
                        out[mmm] = val
        self._mode_cache[key] = out
        return out

    def _comm_mono_mode(self, a_mono, k, b_mono):
        if k >= 0:
            return {}
        s = -k - 1
        # a_(-1-s) b = (T^(s) a) * b / with T^(s) = T^s/s!
        poly = {a_mono: ONE}
        fact = 1
        for i in range(s):
            poly = self._comm_translate_poly(poly)
            fact *= i + 1
        out = {}
        for mono, c in poly.items():
            prod = self._comm_nf_state(
                {tuple(sorted(mono + b_mono)): c * Fraction(1, fact)})
            for mm, cc in prod.items():
                val = out.get(mm, ZERO) + cc
                if val.is_zero():
                    out.pop(mm, None)
                else:
                    out[mm] = val
        return out

    # -- public operations ------------------------------------------------------

    def mode(self, a: VAState, n: int, b: VAState, *, unchecked=False):
        """Exact a_(n) b; raises TruncationError if the result would exceed the
        cutoff (pre-checked from the weights, not silently zeroed)."""
        out = {}
        for am, ac in a.terms.items():
            wa = self.monomial_weight(am)
            for bm, bc in b.terms.items():
                wb = self.monomial_weight(bm)
                wr = wa + wb - n - 1
                if wr > self.cutoff and not unchecked:
                    raise TruncationError(
                        f"a_({n})b has weight {wr} beyond cutoff {self.cutoff}",
                        required_order=wr)
                for mm, cc in self._mono_mode_mono(am, n, bm).items():
                    s = out.get(mm, ZERO) + cc * ac * bc
                    if s.is_zero():
                        out.pop(mm, None)
                    else:
                        out[mm] = s
        return VAState(self, out)

    def translate(self, a: VAState, *, unchecked=False):
        """T a = a_(-2)|0>; raises weight by one."""
        out = {}
        for mono, c in a.terms.items():
            w = self.monomial_weight(mono)
            if w + 1 > self.cutoff and not unchecked:
                raise TruncationError(
                    f"T raises weight to {w + 1} beyond cutoff {self.cutoff}",
                    required_order=w + 1)
            for mm, cc in self._translate_mono(mono).items():
                s = out.get(mm, ZERO) + cc * c
                if s.is_zero():
                    out.pop(mm, None)
                else:
                    out[mm] = s
        return VAState(self, out)

    def _translate_mono(self, mono):
        key = mono
        cached = self._translate_cache.get(key)
        if cached is not None:
            return cached
        if self.preset.kind == "commutative":
            out = self._comm_nf_state(self._comm_translate_poly({mono: ONE}))
            self._translate_cache[key] = out
            return out
        if not mono:
            out = {}
            self._translate_cache[key] = out
            return out
        # T(g_(m) v) = -m g_(m-1) v + g_(m) (T v)
        (m, g), v = mono[0], mono[1:]
        out = {}
        for mm, cc in self._gen_mode_mono(g, m - 1, v).items():
            s = out.get(mm, ZERO) + cc * (-m)
            if s.is_zero():
                out.pop(mm, None)
            else:
                out[mm] = s
        for mv, cv in self._translate_mono(v).items():
            for mm, cc in self._gen_mode_mono(g, m, mv).items():
                s = out.get(mm, ZERO) + cc * cv
                if s.is_zero():
                    out.pop(mm, None)
                else:
                    out[mm] = s
        self._translate_cache[key] = out
        return out


def build(preset, cutoff):
    """Spec entry point: enumerate the basis and report dimensions."""
    space = VASpace(preset, cutoff)
    space.dims()
    return space
