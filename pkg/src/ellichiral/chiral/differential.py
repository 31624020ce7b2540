"""The chiral differential, d^2 = 0 verification, and symmetrization.

d = sum_{i<j} (-1)^(n-i) d^(ij) + sum_i (-1)^(n-i) p^(i), where d^(ij) takes
the residue at x_i = x_j of Y(a^i, x_i - x_j) a^j placed in slot j, and
p^(i) the residue at x_i = 0 of Y(a^i, x_i) b.  Residues are computed from
the symbolic diagonal expansions, so every coefficient is exact and tdeg is
preserved term by term.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import permutations

from ..errors import TruncationError, UnsupportedError
from ..kernel.scalar import ONE, Scalar, ZERO
from ..elliptic.diagonal import diagonal_expand
from ..elliptic.funcalg import EllFunc
from .chain import Chain, mono_weight

_DIAG_CACHE = {}


def _expand(width, fmono, divisor, order):
    key = (width, fmono, divisor, order)
    if key not in _DIAG_CACHE:
        f = EllFunc(width, {fmono: ONE}, _normal=True)
        _DIAG_CACHE[key] = diagonal_expand(f, divisor, order=order)
    return _DIAG_CACHE[key]


def differential(chain: Chain) -> Chain:
    """d applied to a chain; the output is in reduced normal form."""
    n = chain.degree
    space = chain.space
    if n == 0:
        return Chain.zero(space, max(n - 1, 0))
    out = {}
    for (fmono, states), coeff in chain.terms.items():
        a_slots = states[:-1]
        b_slot = states[-1]
        weights = [space.monomial_weight(m) for m in states]
        for i in range(1, n + 1):
            sign = -1 if (n - i) % 2 else 1
            # p^(i): residue at x_i = 0, product onto b
            order = weights[i - 1] + weights[-1] - 1
            de = _expand(n, fmono, ("zero", i), max(order, 0))
            for m, fm in de.coeffs.items():
                if m > order:
                    continue
                prod = space._mono_mode_mono(a_slots[i - 1], m, b_slot)
                if not prod:
                    continue
                new_a = a_slots[:i - 1] + a_slots[i:]
                for gmono, gc in fm.terms.items():
                    for rmono, rc in prod.items():
                        key = (gmono, new_a + (rmono,))
                        s = out.get(key, ZERO) + coeff * gc * rc * sign
                        if s.is_zero():
                            out.pop(key, None)
                        else:
                            out[key] = s
            # d^(ij): residue at x_i = x_j, product into slot j
            for j in range(i + 1, n + 1):
                order = weights[i - 1] + weights[j - 1] - 1
                de = _expand(n, fmono, ("diag", i, j), max(order, 0))
                for m, fm in de.coeffs.items():
                    if m > order:
                        continue
                    prod = space._mono_mode_mono(a_slots[i - 1], m,
                                                 a_slots[j - 1])
                    if not prod:
                        continue
                    for gmono, gc in fm.terms.items():
                        for rmono, rc in prod.items():
                            new_a = list(a_slots)
                            new_a[j - 1] = rmono
                            del new_a[i - 1]
                            key = (gmono, tuple(new_a) + (b_slot,))
                            s = out.get(key, ZERO) + coeff * gc * rc * sign
                            if s.is_zero():
                                out.pop(key, None)
                            else:
                                out[key] = s
    return Chain(space, n - 1, out)


def apply_sigma(chain: Chain, sigma) -> Chain:
    """The signed symmetric group action f, a-slots -> permuted with sign."""
    n = chain.degree
    space = chain.space
    perm = tuple(sigma)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{n}")
    sign = _parity(perm)
    out = Chain.zero(space, n)
    for (fmono, states), coeff in chain.terms.items():
        func = EllFunc.one(n)
        for sym in fmono:
            if sym[0] == "P":
                func = func * EllFunc.P(n, perm[sym[1] - 1], sym[2])
            elif sym[0] == "D":
                func = func * EllFunc.D(n, perm[sym[1] - 1],
                                        perm[sym[2] - 1], sym[3])
            else:
                func = func * EllFunc.Z(n, perm[sym[1] - 1],
                                        perm[sym[2] - 1])
        new_a = tuple(states[perm[k] - 1] for k in range(n))
        out = out + Chain.from_ellfunc(space, n, func,
                                       new_a + (states[-1],),
                                       coeff * sign)
    return out


def _parity(perm):
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j] - 1
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def symmetrize(chain: Chain) -> Chain:
    """Canonical representative of the class in Q_n (group averaging)."""
    n = chain.degree
    if n <= 1:
        return chain
    total = Chain.zero(chain.space, n)
    count = 0
    for perm in permutations(range(1, n + 1)):
        total = total + apply_sigma(chain, perm)
        count += 1
    from fractions import Fraction
    return total.scale(Scalar.from_rational(Fraction(1, count)))


@dataclass
class DSquaredReport:
    degree: int
    tdeg_max: int
    checked: int
    passed: bool
    sampled: bool = False
    failures: list = field(default_factory=list)
    representative_ok: bool = True

    def to_dict(self):
        return {"degree": self.degree, "tdeg_max": self.tdeg_max,
                "checked": self.checked, "passed": self.passed,
                "sampled": self.sampled,
                "failures": [repr(f)[:200] for f in self.failures],
                "representative_ok": self.representative_ok}


def verify_d_squared(n, tdeg_max, space, sample_threshold=400, seed=7,
                     jobs=1):
    """d(d(x)) = 0 over the spanning set, plus representative independence.

    Above the size threshold a deterministic random sample is checked, per
    the stated contract; the report records whether sampling happened.
    """
    from .chain import chain_basis
    if n > 3:
        raise UnsupportedError("d^2 checks supported for n <= 3")
    rng = random.Random(seed)
    keys = []
    for t in range(tdeg_max + 1):
        keys.extend(chain_basis(n, t, space))
    sampled = False
    if len(keys) > sample_threshold:
        keys = rng.sample(keys, sample_threshold)
        sampled = True
    failures = []

    def one(key):
        x = Chain(space, n, {key: ONE})
        if x.is_zero():
            return None
        dd = differential(differential(x))
        if not dd.is_zero():
            return (key, dd)
        return None

    if jobs and jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            for res in ex.map(one, keys):
                if res is not None:
                    failures.append(res)
    else:
        for key in keys:
            res = one(key)
            if res is not None:
                failures.append(res)

    rep_ok = representative_independence(n, min(tdeg_max, 3), space,
                                         rng=rng)
    return DSquaredReport(degree=n, tdeg_max=tdeg_max, checked=len(keys),
                          passed=not failures and rep_ok, sampled=sampled,
                          failures=failures, representative_ok=rep_ok)


def representative_independence(n, tdeg_max, space, rng=None, trials=6):
    """d kills (d_i + T_i)-exact chains.

    For n <= 2 the statement d(x + (d_i+T_i)y) = d(x) is checked as an exact
    class computation (the output lives in canonically-coordinatized C_0 or
    C_1).  For n = 3 the stronger generating identities are checked at the
    C~-level: p^(i) and d^(ij) annihilate (d_i + T_i)-exact terms slotwise,
    which is exactly how the vanishing is proved.
    """
    rng = rng or random.Random(11)
    from .chain import chain_basis
    for t in range(tdeg_max + 1):
        keys = chain_basis(n, t, space)
        if not keys:
            continue
        for _ in range(trials):
            key = keys[rng.randrange(len(keys))]
            fmono, states = key
            i = rng.randrange(1, n + 1)
            exact = _d_plus_t_exact(space, n, fmono, states, i)
            if n <= 2:
                img = differential(exact)
                if not img.is_zero():
                    return False
            else:
                if not _annihilates_exact(space, n, fmono, states, i):
                    return False
    return True


def _d_plus_t_exact(space, n, fmono, states, i):
    """(d_i + T_i)(fmono (x) states) as a raw chain (no reduction)."""
    f = EllFunc(n, {fmono: ONE}, _normal=True)
    df = f.derivative(i)
    terms = {}
    for m2, c2 in df.terms.items():
        terms[(m2, states)] = c2
    chain = Chain(space, n, terms, reduce=False)
    from .chain import _translate_slot
    for st2, c2 in _translate_slot(space, states, i - 1):
        extra = Chain(space, n, {(fmono, st2): c2}, reduce=False)
        chain = chain + extra
    return chain


def _annihilates_exact(space, n, fmono, states, i):
    """C~-level check that d((d_i + T_i) x) collapses to relation terms.

    Evaluated honestly: apply the full differential to the exact chain and
    reduce; the class must vanish, which for width-2 output is certified by
    the certificate reduction plus the residual relation span at the
    relevant tdeg (rank test in free coordinates).
    """
    exact = _d_plus_t_exact(space, n, fmono, states, i)
    img = differential(exact)
    if img.is_zero():
        return True
    return _class_is_zero(img)


def _class_is_zero(chain: Chain):
    """Zero test for a reduced chain class via the quotient relation span."""
    if chain.is_zero():
        return True
    if chain.degree <= 1:
        return chain.is_zero()
    space = chain.space
    n = chain.degree
    # rank test: the chain must lie in the span of reduced (d_i+T_i)-images
    from .chain import chain_basis, mono_has_derivative
    from ..elliptic.funcalg import enumerate_monomials
    from ..kernel.sparse import rank
    tdegs = chain.tdegs()
    comps = chain.tdeg_components()
    for t in tdegs:
        comp = comps[t]
        rel_rows = []
        index = {}

        def vec_of(ch):
            row = {}
            for key, c in ch.terms.items():
                if key not in index:
                    index[key] = len(index)
                row[index[key]] = c
            return row

        # (d_i + T_i) raises tdeg by one, so the relation span at tdeg t is
        # generated from terms at tdeg t - 1
        for d in range(0, t - 1 + n + 1):
            for fm in enumerate_monomials(n, d, include_derivatives=True):
                total = t - 1 + n - d
                if total < 0:
                    continue
                from .chain import _state_tuples
                for states in _state_tuples(space, n + 1, total):
                    for i in range(1, n + 1):
                        rel = _d_plus_t_exact(space, n, fm, states, i)
                        rel = Chain(space, n, rel.terms)  # reduce
                        if not rel.is_zero():
                            rel_rows.append(vec_of(rel))
        target = vec_of(comp)
        base = rank(rel_rows)
        if rank(rel_rows + [target]) != base:
            return False
    return True
