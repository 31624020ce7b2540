"""Sparse exact linear algebra over the g-polynomial fraction field.

rank() uses fraction-free Bareiss elimination on denominator-cleared rows,
with pivots chosen by term count to limit coefficient growth.  nullspace()
performs field-coefficient Gauss-Jordan and returns explicit kernel vectors;
it is only used where kernel bases (not just dimensions) are required.
"""

from __future__ import annotations

from fractions import Fraction

from .scalar import (P_ONE, Poly, Scalar, ZERO, ONE,
                     poly_divmod_exact, poly_gcd)


class SparseMatrix:
    """Immutable sparse matrix with Scalar entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows, cols, entries):
        self.rows = rows
        self.cols = cols
        clean = {}
        for (r, c), v in entries.items():
            if isinstance(v, (int, Fraction)):
                v = Scalar.from_rational(v)
            if v.is_zero():
                continue
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError(f"entry ({r},{c}) outside {rows}x{cols}")
            if (r, c) in clean:
                raise ValueError(f"duplicate entry at ({r},{c})")
            clean[(r, c)] = v
        self.entries = clean

    @staticmethod
    def from_rows(row_dicts, cols):
        entries = {}
        for r, row in enumerate(row_dicts):
            for c, v in row.items():
                entries[(r, c)] = v
        return SparseMatrix(len(row_dicts), cols, entries)

    def row_dicts(self):
        out = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def transpose(self):
        return SparseMatrix(self.cols, self.rows,
                            {(c, r): v for (r, c), v in self.entries.items()})

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, {len(self.entries)} nz)"


def _clear_denominators(row):
    """Scale a Scalar row to Poly entries (rank is scale-invariant)."""
    den = P_ONE
    for v in row.values():
        if not v.den.is_const():
            g = poly_gcd(den, v.den)
            den = poly_divmod_exact(den * v.den, g) if not g.is_const() else den * v.den
    out = {}
    for c, v in row.items():
        p = v.num * poly_divmod_exact(den, v.den) if not v.den.is_const() \
            else v.num.scale(1 / v.den.const_value())
        if not p.is_zero():
            out[c] = p
    return out


def _poly_size(p):
    return len(p.terms)


def rank(matrix):
    """Exact rank over Q(g2,g4,g6,lam,c) by fraction-free elimination."""
    if isinstance(matrix, SparseMatrix):
        rows = [
            _clear_denominators(row) for row in matrix.row_dicts() if row
        ]
    else:
        rows = [_clear_denominators(dict(row)) for row in matrix if row]
    rows = [r for r in rows if r]
    prev = P_ONE
    rnk = 0
    while rows:
        # pivot = smallest entry by term count, then densest-column-last
        best = None
        for ri, row in enumerate(rows):
            for c, p in row.items():
                key = (_poly_size(p), len(row), c)
                if best is None or key < best[0]:
                    best = (key, ri, c)
        _, ri, pc = best
        pivot_row = rows.pop(ri)
        pivot = pivot_row[pc]
        rnk += 1
        new_rows = []
        for row in rows:
            a = row.get(pc)
            if a is None:
                # entries still need the Bareiss rescale to stay integral
                nr = {}
                for c, p in row.items():
                    q = poly_divmod_exact(pivot * p, prev)
                    if not q.is_zero():
                        nr[c] = q
                if nr:
                    new_rows.append(nr)
                continue
            nr = {}
            cols = set(row) | set(pivot_row)
            cols.discard(pc)
            for c in cols:
                p = row.get(c)
                q = pivot_row.get(c)
                if p is not None and q is not None:
                    t = pivot * p - a * q
                elif p is not None:
                    t = pivot * p
                else:
                    t = -(a * q)
                if t.is_zero():
                    continue
                t = poly_divmod_exact(t, prev)
                if not t.is_zero():
                    nr[c] = t
            if nr:
                new_rows.append(nr)
        rows = new_rows
        prev = pivot
    return rnk


def rref(row_dicts):
    """Field-coefficient reduced row echelon; returns (pivot_cols, rows)."""
    rows = [dict(r) for r in row_dicts if r]
    pivots = []
    reduced = []
    while rows:
        best = None
        for ri, row in enumerate(rows):
            for c, v in row.items():
                key = (len(v.num.terms) + len(v.den.terms), len(row), c)
                if best is None or key < best[0]:
                    best = (key, ri, c)
        _, ri, pc = best
        prow = rows.pop(ri)
        inv = prow[pc].inverse()
        prow = {c: v * inv for c, v in prow.items()}
        for other in reduced:
            a = other.get(pc)
            if a is None:
                continue
            for c, v in prow.items():
                s = other.get(c, ZERO) - a * v
                if s.is_zero():
                    other.pop(c, None)
                else:
                    other[c] = s
        new_rows = []
        for row in rows:
            a = row.get(pc)
            if a is None:
                new_rows.append(row)
                continue
            nr = {}
            for c in set(row) | set(prow):
                s = row.get(c, ZERO) - a * prow.get(c, ZERO)
                if not s.is_zero():
                    nr[c] = s
            if nr:
                new_rows.append(nr)
        rows = new_rows
        pivots.append(pc)
        reduced.append(prow)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [pivots[i] for i in order], [reduced[i] for i in order]


def nullspace(matrix):
    """Kernel basis (list of sparse column vectors col -> Scalar)."""
    if isinstance(matrix, SparseMatrix):
        rows = matrix.row_dicts()
        ncols = matrix.cols
    else:
        rows, ncols = matrix
    pivots, reduced = rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        vec = {f: ONE}
        for pc, row in zip(pivots, reduced):
            a = row.get(f)
            if a is not None and not a.is_zero():
                vec[pc] = -a
        basis.append(vec)
    return basis
