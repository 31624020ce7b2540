"""Axiom verification (Borcherds, skew-symmetry) and filtration degrees."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from ..errors import TruncationError
from .space import VAState, _binom


@dataclass
class CheckReport:
    name: str
    passed: bool
    inconclusive: bool = False
    detail: str = ""
    counterexample: dict = field(default_factory=dict)

    def to_dict(self):
        return {"name": self.name, "passed": self.passed,
                "inconclusive": self.inconclusive, "detail": self.detail,
                "counterexample": {k: repr(v) for k, v
                                   in self.counterexample.items()}}


def verify_borcherds(space, a, b, c, m, n, k):
    """Evaluate both sides of the Borcherds identity independently.

    LHS: sum_j C(m,j) (a_(n+j) b)_(m+k-j) c
    RHS: sum_j (-1)^j C(n,j) [a_(n+m-j) b_(k+j) c - (-1)^n b_(n+k-j) a_(m+j) c]
    """
    try:
        lhs = VAState(space, {})
        j = 0
        while True:
            ab = space.mode(a, n + j, b, unchecked=True)
            if ab.is_zero():
                # quantum field property: once zero by weight, stays zero
                if space_weight_bound(space, a, b, n + j):
                    break
                j += 1
                continue
            coeff = _binom(m, j)
            if coeff:
                lhs = lhs + space.mode(ab, m + k - j, c,
                                       unchecked=True).scale(coeff)
            j += 1
        rhs = VAState(space, {})
        j = 0
        sign_n = -1 if n % 2 else 1
        while True:
            bc = space.mode(b, k + j, c, unchecked=True)
            ac = space.mode(a, m + j, c, unchecked=True)
            if bc.is_zero() and ac.is_zero() and \
                    space_weight_bound(space, b, c, k + j) and \
                    space_weight_bound(space, a, c, m + j):
                break
            coeff = _binom(n, j) * (-1 if j % 2 else 1)
            if coeff:
                t1 = space.mode(a, n + m - j, bc, unchecked=True)
                t2 = space.mode(b, n + k - j, ac, unchecked=True)
                rhs = rhs + (t1 - t2.scale(sign_n)).scale(coeff)
            j += 1
    except TruncationError as exc:
        return CheckReport(name="borcherds", passed=False, inconclusive=True,
                           detail=str(exc))
    diff = lhs - rhs
    return CheckReport(name="borcherds", passed=diff.is_zero(),
                       detail=f"(m,n,k)=({m},{n},{k})",
                       counterexample={} if diff.is_zero()
                       else {"difference": diff})


def space_weight_bound(space, a, b, n):
    """True when a_(n')b = 0 for all n' >= n by the grading alone."""
    wa = a.max_weight() if isinstance(a, VAState) else a
    wb = b.max_weight() if isinstance(b, VAState) else b
    return wa + wb - n - 1 < 0


def verify_skew(space, a, b, order):
    """Compare z^m-coefficients of Y(b,z)a and e^{zT} Y(a,-z)b for |m|<=order.

    Coefficient of z^m on the left is b_(-m-1)a; on the right it is
    sum_j (-1)^(m-j) T^j (a_(j-m-1) b) / j!.
    """
    try:
        for m in range(-order, order + 1):
            lhs = space.mode(b, -m - 1, a, unchecked=True)
            rhs = VAState(space, {})
            fact = 1
            acc = {}
            for j in range(0, order + a.max_weight() + b.max_weight() + 2):
                if j:
                    fact *= j
                inner = space.mode(a, j - m - 1, b, unchecked=True)
                if inner.is_zero():
                    if space_weight_bound(space, a, b, j - m - 1) and \
                            j - m - 1 >= 0:
                        break
                    continue
                term = inner
                for _ in range(j):
                    term = space.translate(term, unchecked=True)
                sign = -1 if (m - j) % 2 else 1
                rhs = rhs + term.scale(Fraction(sign, fact))
            if not (lhs - rhs).is_zero():
                return CheckReport(name="skew", passed=False,
                                   detail=f"z^{m} coefficient differs",
                                   counterexample={"lhs": lhs, "rhs": rhs})
    except TruncationError as exc:
        return CheckReport(name="skew", passed=False, inconclusive=True,
                           detail=str(exc))
    return CheckReport(name="skew", passed=True,
                       detail=f"orders |m| <= {order}")


def li_degree(a: VAState):
    """Li filtration index: min over monomials of sum(n_j), a_(-n-1) depth."""
    if a.is_zero():
        raise ValueError("li_degree of the zero state is undefined")
    return min(sum(-m - 1 for m, _ in mono) for mono in a.terms)


def std_degree(a: VAState, space=None):
    """Standard (good) filtration degree: max total generator weight."""
    if a.is_zero():
        raise ValueError("std_degree of the zero state is undefined")
    space = space or a.space
    return max(sum(space.preset.weight(g) for _, g in mono)
               for mono in a.terms)
