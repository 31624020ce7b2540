"""Homology dimensions of the chiral complex in degrees 0 and 1.

All ranks are taken in the canonical coordinates of C_0 = V and of C_1
(whose reduced terms are honest quotient coordinates), over the fraction
field Q(g2,g4,g6) -- i.e. at generic tau; specialization can only drop
rank, so kernel dimensions are upper bounds and image dimensions lower
bounds for any particular curve.  Degree 2 and higher would require
certified bases of wider function spaces and are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import UnsupportedError
from ..kernel.scalar import ONE
from ..kernel.sparse import nullspace, rank
from .chain import Chain, chain_basis
from .differential import differential, symmetrize
from .grading import graded_differential, term_e_degree, term_g_degree


@dataclass
class HomologyTable:
    complex: str
    degree: int
    rows: list = field(default_factory=list)

    def dims(self):
        return [r["dim_H"] for r in self.rows]

    def to_dict(self):
        return {"complex": self.complex, "degree": self.degree,
                "rows": self.rows}


class _Coords:
    """Shared sparse coordinate indexing for chain/state vectors."""

    def __init__(self):
        self.index = {}

    def vec(self, terms):
        row = {}
        for key, c in terms.items():
            if key not in self.index:
                self.index[key] = len(self.index)
            row[self.index[key]] = c
        return row


def _spanning_chains(space, n, tdeg):
    out = []
    for key in chain_basis(n, tdeg, space):
        ch = Chain(space, n, {key: ONE})
        if not ch.is_zero():
            out.append(ch)
    return out


def homology_dims(degree, tdeg_max, space, complex="C"):
    """Per-tdeg dim ker - dim im for the requested complex flavour.

    complex: C (ordered), Q (coinvariants), grG (associated graded of the
    Hodge filtration), grE (its E-graded bottom piece, the Theorem-8 left
    side).
    """
    if degree not in (0, 1):
        raise UnsupportedError("homology degrees 0 and 1 only")
    if complex not in ("C", "Q", "grG", "grE"):
        raise ValueError(f"unknown complex {complex!r}")
    table = HomologyTable(complex=complex, degree=degree)
    for t in range(tdeg_max + 1):
        if complex in ("C", "Q"):
            row = _plain_block(degree, t, space, complex)
        elif complex == "grG":
            row = _graded_block(degree, t, space)
        else:
            row = _gre_bottom_block(degree, t, space)
        row["tdeg"] = t
        table.rows.append(row)
    return table


def _plain_block(degree, t, space, complex):
    coords0 = _Coords()
    coords1 = _Coords()
    if degree == 0:
        dim_c0 = space.dim(t)
        images = []
        for ch in _spanning_chains(space, 1, t):
            img = differential(ch)
            if not img.is_zero():
                images.append(coords0.vec(img.terms))
        dim_im = rank(images)
        return {"dim_ker": dim_c0, "dim_im": dim_im,
                "dim_H": dim_c0 - dim_im}
    s1 = _spanning_chains(space, 1, t)
    a1 = [coords1.vec(ch.terms) for ch in s1]
    m1 = []
    for ch in s1:
        img = differential(ch)
        m1.append(coords0.vec(img.terms) if not img.is_zero() else {})
    dim_u1 = rank(a1)
    rank_m1 = rank([r for r in m1 if r])
    ker = dim_u1 - rank_m1
    s2 = _spanning_chains(space, 2, t)
    images = []
    for ch in s2:
        if complex == "Q":
            ch = symmetrize(ch)
        img = differential(ch)
        if not img.is_zero():
            images.append(coords1.vec(img.terms))
    dim_im = rank(images)
    return {"dim_ker": ker, "dim_im": dim_im, "dim_H": ker - dim_im}


def _tagged_blocks(space, n, t):
    """Spanning chains grouped by G-degree (each key is homogeneous)."""
    blocks = {}
    for ch in _spanning_chains(space, n, t):
        # reduced chains may mix degrees; regroup termwise
        for key, c in ch.terms.items():
            g = term_g_degree(space, n, key)
            blocks.setdefault(g, []).append(
                Chain(space, n, {key: c}, reduce=False))
    return blocks


def _graded_block(degree, t, space):
    ker_total = 0
    im_total = 0
    dim_total = 0
    blocks1 = _tagged_blocks(space, max(degree, 1), t)
    if degree == 0:
        coords = {}
        images = {}
        for g, chains in _tagged_blocks(space, 1, t).items():
            for ch in chains:
                img = graded_differential(ch, level="G")
                if img.is_zero():
                    continue
                images.setdefault(g, []).append(img)
        # V-side blocks by std degree
        std_blocks = {}
        for m in space.basis(t):
            std = sum(space.preset.weight(gi) for _, gi in m)
            std_blocks.setdefault(std, []).append(m)
        dim_H = 0
        for std, monos in std_blocks.items():
            co = _Coords()
            rows = [co.vec(img.terms) for img in images.get(std, [])]
            dim_H += len(monos) - rank(rows)
        # account for image blocks hitting empty V-blocks (cannot happen:
        # images live in V)
        return {"dim_ker": sum(len(v) for v in std_blocks.values()),
                "dim_im": sum(len(v) for v in std_blocks.values()) - dim_H,
                "dim_H": dim_H}
    for g, chains in blocks1.items():
        co1 = _Coords()
        co0 = _Coords()
        a1 = [co1.vec(ch.terms) for ch in chains]
        m1 = []
        for ch in chains:
            img = graded_differential(ch, level="G")
            m1.append(co0.vec(img.terms) if not img.is_zero() else {})
        dim_u = rank(a1)
        r1 = rank([r for r in m1 if r])
        ker = dim_u - r1
        images = []
        for ch2 in _tagged_blocks(space, 2, t).get(g, []):
            img = graded_differential(ch2, level="G")
            if not img.is_zero():
                images.append(co1.vec(img.terms))
        im = rank(images)
        ker_total += ker
        im_total += im
        dim_total += dim_u
    return {"dim_ker": ker_total, "dim_im": im_total,
            "dim_H": ker_total - im_total}


def _gre_bottom_block(degree, t, space):
    """grE-degree-(-n) piece of H_n(gr^G C) per tdeg (Theorem-8 left side).

    For n = 0 the E-grading is trivial and this is H_0(gr^G C).  For n = 1:
    quotient H_1 by the image of cycles supported in E_0 (one pole factor or
    more), computed from explicit kernel vectors.
    """
    if degree == 0:
        return _graded_block(0, t, space)
    total = 0
    blocks1 = _tagged_blocks(space, 1, t)
    blocks2 = _tagged_blocks(space, 2, t)
    for g, chains in blocks1.items():
        co1 = _Coords()
        co0 = _Coords()
        a1_rows = [co1.vec(ch.terms) for ch in chains]
        m1_rows = []
        for ch in chains:
            img = graded_differential(ch, level="G")
            m1_rows.append(co0.vec(img.terms) if not img.is_zero() else {})
        dim_u = rank(a1_rows)
        r1 = rank([r for r in m1_rows if r])
        ker = dim_u - r1
        b_rows = []
        for ch2 in blocks2.get(g, []):
            img = graded_differential(ch2, level="G")
            if not img.is_zero():
                b_rows.append(co1.vec(img.terms))
        h_dim = ker - rank(b_rows)
        # cycles supported in E_0 (at least one pole factor)
        e0_positions = [i for i, ch in enumerate(chains)
                        if term_e_degree(1, next(iter(ch.terms))) >= 0]
        kernel_vectors = _kernel_combinations(m1_rows, e0_positions)
        z0_rows = []
        for vec in kernel_vectors:
            combo = {}
            for pos, c in vec.items():
                for col, v in a1_rows[pos].items():
                    s = combo.get(col)
                    combo[col] = v * c if s is None else s + v * c
            combo = {k: v for k, v in combo.items() if not v.is_zero()}
            if combo:
                z0_rows.append(combo)
        drop = rank(z0_rows + b_rows) - rank(b_rows)
        total += h_dim - drop
    return {"dim_ker": None, "dim_im": None, "dim_H": total}


def _kernel_combinations(m1_rows, positions):
    """Kernel of the differential restricted to the given spanning columns."""
    if not positions:
        return []
    rows = {}
    for pi, pos in enumerate(positions):
        for col, v in m1_rows[pos].items():
            rows.setdefault(col, {})[pi] = v
    kernel = nullspace((list(rows.values()), len(positions)))
    return [{positions[pi]: c for pi, c in vec.items()} for vec in kernel]
