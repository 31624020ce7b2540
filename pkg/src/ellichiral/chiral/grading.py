"""Hodge filtration tags and the associated graded differentials.

The G-degree of a term is (number of pole factors) - n + (standard
filtration degree of the tensor slots); the E-degree is the function part
alone, (number of pole factors) - n, concentrated in [-n, 0].  The graded
differential keeps the top G (resp. (G, E)) part of the full differential;
a term of higher degree in the output would be a filtration violation and
raises.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ValidationError
from ..elliptic.funcalg import pole_factor_count
from .chain import Chain
from .differential import differential


@dataclass(frozen=True)
class FiltrationTag:
    g_degree: int
    e_degree: int


def term_g_degree(space, degree, key):
    fmono, states = key
    std = sum(space.preset.weight(g) for mono in states for _, g in mono)
    return pole_factor_count(fmono) - degree + std


def term_e_degree(degree, key):
    fmono, _ = key
    return pole_factor_count(fmono) - degree


def hodge_tag(chain: Chain) -> FiltrationTag:
    """Filtration position of a chain: max G over terms, min E."""
    if chain.is_zero():
        raise ValidationError("the zero chain has no filtration tag")
    gs = []
    es = []
    for key in chain.terms:
        gs.append(term_g_degree(chain.space, chain.degree, key))
        es.append(term_e_degree(chain.degree, key))
    return FiltrationTag(g_degree=max(gs), e_degree=min(es))


def graded_differential(chain: Chain, level="G") -> Chain:
    """Image of a (G- or (G,E)-homogeneous) chain in the associated graded.

    Terms of strictly lower degree are dropped; strictly higher output
    degree would contradict filtration stability and raises.
    """
    if chain.is_zero():
        return Chain.zero(chain.space, max(chain.degree - 1, 0))
    space = chain.space
    tag = hodge_tag(chain)
    img = differential(chain)
    out = {}
    for key, coeff in img.terms.items():
        g = term_g_degree(space, img.degree, key)
        if g > tag.g_degree:
            raise ValidationError(
                f"filtration violation: output G-degree {g} exceeds "
                f"{tag.g_degree}")
        if g < tag.g_degree:
            continue
        if level == "E":
            e = term_e_degree(img.degree, key)
            if e < tag.e_degree:
                raise ValidationError(
                    f"E-filtration violation: output E {e} below "
                    f"{tag.e_degree}")
            if e > tag.e_degree:
                continue
        out[key] = coeff
    return Chain(space, img.degree, out, reduce=False)
