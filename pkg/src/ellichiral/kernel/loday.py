"""Loday's complex for a finite-dimensional Leibniz algebra.

Chains in degree n are Scalar combinations of basis tensors i1 x ... x in,
stored as dicts keyed by index tuples.  The differential inserts brackets
with the sign (-1)^(n-i), and squares to zero precisely because of the
Leibniz identity [x,[y,z]] = [[x,y],z] + [y,[x,z]], which is validated on
construction.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import ValidationError
from .scalar import Scalar, ZERO


def _coerce(v):
    return Scalar.from_rational(v) if isinstance(v, (int, Fraction)) else v


class LeibnizAlgebra:
    """Bracket given by structure constants: bracket[i][j] = {k: coeff}."""

    def __init__(self, dim, bracket, validate=True):
        self.dim = dim
        self.bracket = {}
        for (i, j), vec in bracket.items():
            clean = {k: _coerce(v) for k, v in vec.items()}
            clean = {k: v for k, v in clean.items() if not v.is_zero()}
            if clean:
                self.bracket[(i, j)] = clean
        if validate:
            self.validate()

    def apply(self, i, j):
        return self.bracket.get((i, j), {})

    def bracket_vectors(self, x, y):
        """Bracket of two coefficient vectors {index: Scalar}."""
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.apply(i, j).items():
                    s = out.get(k, ZERO) + a * b * c
                    if s.is_zero():
                        out.pop(k, None)
                    else:
                        out[k] = s
        return out

    def validate(self):
        for x in range(self.dim):
            for y in range(self.dim):
                for z in range(self.dim):
                    lhs = self.bracket_vectors({x: _coerce(1)},
                                               self.apply(y, z))
                    r1 = self.bracket_vectors(self.apply(x, y),
                                              {z: _coerce(1)})
                    r2 = self.bracket_vectors({y: _coerce(1)},
                                              self.apply(x, z))
                    for k in set(lhs) | set(r1) | set(r2):
                        d = (lhs.get(k, ZERO) - r1.get(k, ZERO)
                             - r2.get(k, ZERO))
                        if not d.is_zero():
                            raise ValidationError(
                                f"Leibniz identity fails at ({x},{y},{z})")

    @staticmethod
    def abelian(dim):
        return LeibnizAlgebra(dim, {}, validate=False)


def loday_differential(alg, chain):
    """d = sum over i<j of (-1)^(n-i) d^(ij) on a degree-n tensor chain.

    ``chain`` maps index tuples (all the same length n) to Scalars; the
    result is a degree n-1 chain.  d^(ij) deletes slot i and replaces the
    entry in slot j with [a^i, a^j].
    """
    out = {}
    for idx, coeff in chain.items():
        coeff = _coerce(coeff)
        n = len(idx)
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                sign = -1 if (n - i) % 2 else 1
                for k, c in alg.apply(idx[i - 1], idx[j - 1]).items():
                    new = idx[: i - 1] + idx[i: j - 1] + (k,) + idx[j:]
                    v = out.get(new, ZERO) + coeff * c * sign
                    if v.is_zero():
                        out.pop(new, None)
                    else:
                        out[new] = v
    return out
