"""Built-in vertex algebra presets and their JSON form.

A preset is a strong generating set with conformal weights plus the
nonnegative products g_(n)h between generators (the lambda-bracket data);
all other structure follows from the Borcherds identity.  Commutative
presets instead carry an optional list of differential-polynomial relations
whose T-closure is imposed on the free commutative algebra.

Basis monomials are tuples of (mode, generator_index) pairs with mode <= -1,
sorted ascending, standing for g1_(m1) g2_(m2) ... |0>.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import ConfigError
from ..kernel.scalar import CC, Scalar


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    return Scalar.from_rational(Fraction(x))


@dataclass(frozen=True)
class VAPreset:
    name: str
    generators: tuple            # ((sym, weight), ...)
    kind: str                    # "pbw" | "commutative"
    products: dict = field(default_factory=dict)
    # (left_idx, right_idx, n >= 0) -> {monomial: Scalar}
    central: Scalar = None      # value of the central parameter, if any
    relations: tuple = ()        # commutative only: (poly dict, ...) with
    # monomials over ((mode, gen), ...) and Scalar coefficients

    def weight(self, gen_index):
        return self.generators[gen_index][1]

    def gen_index(self, sym):
        for i, (s, _) in enumerate(self.generators):
            if s == sym:
                return i
        raise ConfigError(f"unknown generator {sym!r}")

    def product(self, gi, gj, n):
        return self.products.get((gi, gj, n), {})

    def max_product_n(self, gi, gj):
        wi = self.weight(gi) + self.weight(gj) - 1
        return wi

    def to_json(self):
        from ..kernel.scalar import scalar_to_string
        prods = []
        for (i, j, n), val in sorted(self.products.items()):
            prods.append({
                "left": self.generators[i][0],
                "right": self.generators[j][0],
                "n": n,
                "value": [[scalar_to_string(c),
                           [[m, g] for (m, g) in mono]]
                          for mono, c in sorted(val.items())],
            })
        out = {"name": self.name, "kind": self.kind,
               "generators": [{"sym": s, "weight": w}
                              for s, w in self.generators],
               "commutators": prods}
        if self.central is not None:
            from ..kernel.scalar import scalar_to_string as sts
            out["central"] = "c" if self.central == CC else sts(self.central)
        return out

    @staticmethod
    def from_json(data):
        from ..kernel.scalar import parse_scalar
        name = data["name"]
        kind = data.get("kind", "pbw")
        gens = tuple((g["sym"], int(g["weight"]))
                     for g in data["generators"])
        for _, w in gens:
            if w <= 0:
                raise ConfigError("generator weights must be positive")
        central = data.get("central")
        if central is not None:
            central = CC if central == "c" else \
                Scalar.from_rational(Fraction(central))
        sym_index = {s: i for i, (s, _) in enumerate(gens)}
        products = {}
        for entry in data.get("commutators", []):
            i = sym_index[entry["left"]]
            j = sym_index[entry["right"]]
            n = int(entry["n"])
            if n < 0:
                raise ConfigError("only n >= 0 products belong in a preset")
            val = {}
            for coeff_s, mono in entry["value"]:
                coeff = parse_scalar(coeff_s) if isinstance(coeff_s, str) \
                    else _coerce(coeff_s)
                val[tuple((int(m), int(g)) for m, g in mono)] = coeff
            products[(i, j, n)] = val
        return VAPreset(name=name, generators=gens, kind=kind,
                        products=products, central=central)


def heisenberg():
    """Rank-1 free boson at level 1: b of weight 1, b_(1)b = |0>."""
    return VAPreset(
        name="heisenberg",
        generators=(("b", 1),),
        kind="pbw",
        products={(0, 0, 1): {(): _coerce(1)}},
    )


def virasoro(central=None):
    """Universal Virasoro vertex algebra; central charge exact or symbolic."""
    c = CC if central is None else _coerce(central)
    half_c = c * Fraction(1, 2)
    return VAPreset(
        name="virasoro",
        generators=(("omega", 2),),
        kind="pbw",
        products={
            (0, 0, 0): {((-2, 0),): _coerce(1)},   # T omega
            (0, 0, 1): {((-1, 0),): _coerce(2)},   # 2 omega
            (0, 0, 3): {(): half_c},               # (c/2) |0>
        },
        central=c,
    )


def commutative_poly(weights=(1,), relations=()):
    """Free commutative vertex algebra on generators of the given weights,
    optionally modulo the T-closure of differential-polynomial relations.

    Relations are dicts {monomial: coefficient} in the same (mode, gen)
    monomial encoding as basis elements.
    """
    gens = tuple((f"x{i+1}" if len(weights) > 1 else "x", w)
                 for i, w in enumerate(weights))
    rels = tuple({tuple(mono): _coerce(c) for mono, c in r.items()}
                 for r in relations)
    return VAPreset(name="commutative-poly", generators=gens,
                    kind="commutative", relations=rels)


def load_preset(name, central=None):
    if name == "heisenberg":
        return heisenberg()
    if name == "virasoro":
        return virasoro(central)
    if name == "commutative-poly":
        return commutative_poly()
    raise ConfigError(f"unsupported preset {name!r}")


def preset_from_file(path):
    with open(path) as fh:
        return VAPreset.from_json(json.load(fh))
