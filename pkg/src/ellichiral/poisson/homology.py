"""Kaehler differentials, the Lichnerowicz complex, and Koszul homology.

Wedge elements of degree n are dicts {(mono, gens): Scalar} with ``mono`` a
ring monomial (the coefficient) and ``gens`` a strictly increasing tuple of
generator indices standing for dx_{g1} ^ ... ^ dx_{gn}.  All dimensions are
exact per-weight ranks over the scalar fraction field.
"""

from __future__ import annotations

from ..kernel.scalar import ONE, Scalar, ZERO
from ..kernel.sparse import rank, rref
from .presentation import (DiffAlgebra, GradedQuotientRing, PoissonPres,
                           poly_add, poly_diff, poly_mul, poly_scale)


def _sort_wedge(gens):
    """Sort a gen tuple into increasing order; returns (sorted, sign) or None
    for a repeated factor."""
    gens = list(gens)
    sign = 1
    for i in range(1, len(gens)):
        j = i
        while j > 0 and gens[j - 1] > gens[j]:
            gens[j - 1], gens[j] = gens[j], gens[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(gens)):
        if gens[i - 1] == gens[i]:
            return None
    return tuple(gens), sign


def wedge_add(target, items):
    for k, c in items.items():
        s = target.get(k, ZERO) + c
        if s.is_zero():
            target.pop(k, None)
        else:
            target[k] = s
    return target


def _ring_of(obj):
    return obj.ring if not isinstance(obj, GradedQuotientRing) else obj


def wedge_weight(obj, key):
    ring = _ring_of(obj)
    mono, gens = key
    return ring.mono_weight(mono) + sum(ring.generators[g][1] for g in gens)


def wedge_monomials(obj, n, weight):
    """Wedge monomials (ring-basis coefficient, strict gens) at weight."""
    ring = _ring_of(obj)
    ngen = len(ring.generators)
    out = []

    def rec(start, left, gens):
        if len(gens) == n:
            if left >= 0:
                for mono in ring.basis(left):
                    out.append((mono, tuple(gens)))
            return
        for g in range(start, ngen):
            wg = ring.generators[g][1]
            if wg <= left:
                rec(g + 1, left - wg, gens + [g])

    rec(0, weight, [])
    return sorted(out)


def wedge_relation_span(obj, n, weight):
    """Submodule generators from d(relations) wedged into degree n."""
    ring = _ring_of(obj)
    out = []
    if not ring.relations or n == 0:
        return out
    for rel in ring.relations:
        w_rel = ring.mono_weight(next(iter(rel)))
        # d(rel) = sum_g (d rel/d x_g) dx_g, a degree-1 element of weight w_rel
        drel = {}
        for g in range(len(ring.generators)):
            dg = poly_diff(rel, g)
            for mono, c in dg.items():
                wedge_add(drel, {(mono, (g,)): c})
        # multiply by ring monomials and wedge with n-1 more dx's
        for (m2, gens2) in wedge_monomials_free(ring, n - 1,
                                                weight - w_rel):
            for (mono, (g,)), c in drel.items():
                sorted_w = _sort_wedge((g,) + gens2)
                if sorted_w is None:
                    continue
                gg, sign = sorted_w
                coeff_poly = ring.normal_form(
                    poly_mul({mono: c}, {m2: ONE}))
                vec = {}
                for mm, cc in coeff_poly.items():
                    wedge_add(vec, {(mm, gg): cc * sign})
                if vec:
                    out.append(vec)
    return out


def wedge_monomials_free(ring, n, weight):
    """Like wedge_monomials but with free-monomial coefficients."""
    ngen = len(ring.generators)
    out = []

    def rec(start, left, gens):
        if len(gens) == n:
            if left >= 0:
                for mono in ring.monomials(left):
                    out.append((mono, tuple(gens)))
            return
        for g in range(start, ngen):
            wg = ring.generators[g][1]
            if wg <= left:
                rec(g + 1, left - wg, gens + [g])

    rec(0, weight, [])
    return out


def module_dims(obj, n, window):
    """Per-weight dimensions of wedge^n Omega over the presented ring."""
    dims = []
    for w in range(window + 1):
        monos = wedge_monomials(obj, n, w)
        span = wedge_relation_span(obj, n, w)
        if span:
            index = {m: i for i, m in enumerate(monos)}
            rows = []
            for vec in span:
                reduced = {}
                for (mono, gens), c in vec.items():
                    for mm, cc in _ring_of(obj).normal_form(
                            {mono: c}).items():
                        wedge_add(reduced, {(mm, gens): cc})
                row = {index[k]: c for k, c in reduced.items() if k in index}
                if row:
                    rows.append(row)
            r = rank(rows) if rows else 0
        else:
            r = 0
        dims.append(len(monos) - r)
    return dims


def kaehler(obj, window):
    """Presentation data of Omega: per-weight dims plus the relation span."""
    return {
        "dims": module_dims(obj, 1, window),
        "generators": [{"sym": s, "weight": w}
                       for s, w in _ring_of(obj).generators],
        "module_relations": [
            {str(k): repr(c) for k, c in vec.items()}
            for w in range(window + 1)
            for vec in wedge_relation_span(obj, 1, w)],
    }


def lichnerowicz_d(pres: PoissonPres, element):
    """The Poisson boundary on a wedge element.

    d(a dx_1...dx_n) = sum_i (-1)^(n-i) {x_i, a} dx_1...^i...dx_n
      + sum_{i<j} (-1)^(n-i) a dx_1...^i...d({x_i,x_j})-at-slot-j...dx_n
    """
    ring = pres.ring
    out = {}
    for (mono, gens), coeff in element.items():
        n = len(gens)
        a = {mono: coeff}
        for i in range(1, n + 1):
            sign = -1 if (n - i) % 2 else 1
            xi = gens[i - 1]
            rest = gens[:i - 1] + gens[i:]
            br = pres.bracket_gen_poly(xi, a)
            for mm, cc in br.items():
                wedge_add(out, {(mm, rest): cc * sign})
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                sign = -1 if (n - i) % 2 else 1
                xi, xj = gens[i - 1], gens[j - 1]
                br = pres.gen_bracket(xi, xj)
                if not br:
                    continue
                # dx_i is removed; d({x_i,x_j}) sits in the slot of dx_j
                pre = gens[:j - 1]
                pre = pre[:i - 1] + pre[i:]
                post = gens[j:]
                for g in range(len(ring.generators)):
                    dg = poly_diff(br, g)
                    if not dg:
                        continue
                    sw = _sort_wedge(pre + (g,) + post)
                    if sw is None:
                        continue
                    gg, wsign = sw
                    coeff_poly = ring.normal_form(poly_mul(a, dg))
                    for mm, cc in coeff_poly.items():
                        wedge_add(out, {(mm, gg): cc * sign * wsign})
    return out


def koszul_d(alg: DiffAlgebra, element):
    """Contraction with T: d(b da1^...^dan) = sum (-1)^(n-i) (T a_i) b ..."""
    out = {}
    for (mono, gens), coeff in element.items():
        n = len(gens)
        for i in range(1, n + 1):
            sign = -1 if (n - i) % 2 else 1
            rest = gens[:i - 1] + gens[i:]
            t_gi = alg.t_gen(gens[i - 1])
            coeff_poly = alg.ring.normal_form(
                poly_mul(t_gi, {mono: coeff}))
            for mm, cc in coeff_poly.items():
                wedge_add(out, {(mm, rest): cc * sign})
    return out


def _span_rows(obj, n, weight, index):
    rows = []
    if weight is None or weight < 0:
        return rows
    for vec in wedge_relation_span(obj, n, weight):
        row = {}
        for k, c in vec.items():
            if k not in index:
                index[k] = len(index)
            row[index[k]] = c
        if row:
            rows.append(row)
    return rows


def _complex_rank(obj, d_fun, n, weight, tgt_weight):
    """(quotient dim of wedge^n at weight, rank of d into wedge^(n-1)).

    Both numbers account for the module relations coming from d(relations);
    the boundary maps the domain relation span into the target one, so the
    quotient rank is rank([images | target span]) - rank(target span).
    """
    ring = _ring_of(obj)
    monos = wedge_monomials(obj, n, weight) if weight >= 0 else []
    if not monos:
        return 0, 0
    dom_rank = 0
    if ring.relations:
        dom_index = {m: i for i, m in enumerate(monos)}
        dom_rows = _span_rows(obj, n, weight, dom_index)
        dom_rank = rank(dom_rows) if dom_rows else 0
    dim_dom = len(monos) - dom_rank

    tgt_index = {}
    rows = []
    for m in monos:
        img = d_fun({m: ONE})
        row = {}
        for k, c in img.items():
            if k not in tgt_index:
                tgt_index[k] = len(tgt_index)
            row[tgt_index[k]] = c
        if row:
            rows.append(row)
    extra = _span_rows(obj, n - 1, tgt_weight, tgt_index) \
        if ring.relations else []
    if extra:
        return dim_dom, rank(rows + extra) - rank(extra)
    return dim_dom, rank(rows)


def hp_dims(pres: PoissonPres, n, window):
    """Poisson homology dimensions HP_n per total weight up to the window."""
    pres.validate()
    shift = pres.bracket_shift
    out = []
    for w in range(window + 1):
        dim_n, rank_n = _complex_rank(
            pres, lambda e: lichnerowicz_d(pres, e), n, w, w + shift)
        ker = dim_n - rank_n
        _, rank_in = _complex_rank(
            pres, lambda e: lichnerowicz_d(pres, e), n + 1, w - shift, w)
        out.append(ker - rank_in)
    return out


def koszul_h1(alg: DiffAlgebra, window):
    """H_1 of the Koszul complex of (A, T) per weight up to the window."""
    alg.validate()
    out = []
    for w in range(window + 1):
        dim_1, rank_1 = _complex_rank(
            alg, lambda e: koszul_d(alg, e), 1, w, w + 1)
        ker = dim_1 - rank_1
        _, rank_in = _complex_rank(
            alg, lambda e: koszul_d(alg, e), 2, w - 1, w)
        out.append(ker - rank_in)
    return out
