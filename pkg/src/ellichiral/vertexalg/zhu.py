"""The Zhu Poisson algebra R_V = V / V_(-2)V and the classical-freeness check.

R_V carries the product a_(-1)b and bracket {a,b} = a_(0)b.  Dimensions are
brute-force spans of V_(-2)V per weight; the Poisson presentation is read
off a section through the all-modes-(-1) monomials, which works exactly when
R_V is a free polynomial ring on the generator images (the shipped presets;
anything else reports an unsupported presentation rather than guessing).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import UnsupportedError
from ..kernel.scalar import ONE, Scalar, ZERO
from ..kernel.sparse import rank, rref
from ..poisson.presentation import DiffAlgebra, PoissonPres
from .space import VASpace, VAState


def _state_vectors(space, weight, states):
    basis = space.basis(weight)
    index = {m: i for i, m in enumerate(basis)}
    rows = []
    for st in states:
        row = {}
        for mono, c in st.items():
            row[index[mono]] = c
        if row:
            rows.append(row)
    return rows, index


def c2_span(space, weight):
    """Spanning states of (V_(-2)V) at the given weight."""
    out = []
    for wa in range(0, weight):
        wb = weight - wa - 1
        if wb < 0:
            continue
        for am in space.basis(wa):
            a = VAState(space, {am: ONE})
            for bm in space.basis(wb):
                b = VAState(space, {bm: ONE})
                st = space.mode(a, -2, b, unchecked=True)
                if not st.is_zero():
                    out.append(st.terms)
    return out


@dataclass
class ZhuReport:
    dims: list
    presentation: PoissonPres = None
    free: bool = True
    detail: str = ""
    bracket_table: dict = field(default_factory=dict)

    def to_dict(self):
        return {"dims": self.dims, "free": self.free, "detail": self.detail,
                "presentation": self.presentation.to_json()
                if self.presentation else None}


def zhu_poisson(space: VASpace, window=None):
    """Graded dimensions and presentation of R_V up to the window."""
    window = space.cutoff if window is None else window
    dims = []
    j_rows_by_weight = {}
    for w in range(window + 1):
        rows, _ = _state_vectors(space, w, c2_span(space, w))
        j_rows_by_weight[w] = rows
        dims.append(space.dim(w) - (rank(rows) if rows else 0))

    gens = space.preset.generators
    # free polynomial dims on the generator images
    free_dims = _poly_dims([w for _, w in gens], window)
    free = dims == free_dims
    detail = "" if free else (
        "R_V is not the free polynomial ring on the generator images; "
        "presentation unsupported")
    pres = None
    brackets = {}
    if free:
        for i in range(len(gens)):
            for j in range(i, len(gens)):
                a = space.generator_state(gens[i][0])
                b = space.generator_state(gens[j][0])
                st = space.mode(a, 0, b, unchecked=True)
                poly = _express_in_r(space, st, window)
                if poly:
                    brackets[(i, j)] = poly
        # diagonal brackets must vanish in R_V for antisymmetry
        for (i, j), poly in brackets.items():
            if i == j and poly:
                raise UnsupportedError(
                    "nonzero {x,x} in R_V; presentation unsupported")
        pres = PoissonPres(
            generators=gens,
            brackets={(i, j): v for (i, j), v in brackets.items() if i < j},
            bracket_shift=-1,
            name=f"R_{space.preset.name}",
        )
    return ZhuReport(dims=dims, presentation=pres, free=free, detail=detail,
                     bracket_table=brackets)


def _poly_dims(weights, window):
    dims = [0] * (window + 1)
    dims[0] = 1
    for wg in weights:
        new = list(dims)
        for w in range(wg, window + 1):
            new[w] += new[w - wg]
        dims = new
    return dims


def _express_in_r(space, state, window):
    """Write a state modulo V_(-2)V as a polynomial in generator images.

    Returns {ring monomial: Scalar} over generator indices; raises if the
    section through all-modes-(-1) monomials fails.
    """
    if state.is_zero():
        return {}
    comps = state.weight_components()
    out = {}
    for w, st in comps.items():
        basis = space.basis(w)
        index = {m: i for i, m in enumerate(basis)}
        j_states = c2_span(space, w)
        columns = []
        tags = []
        for js in j_states:
            columns.append({index[m]: c for m, c in js.items()})
            tags.append(None)
        minus_one = [m for m in basis if all(mode == -1 for mode, _ in m)]
        for m in minus_one:
            columns.append({index[m]: ONE})
            tags.append(tuple(sorted(g for _, g in m)))
        target_col = len(columns)
        rows = _columns_to_rows(columns, {index[m]: c
                                          for m, c in st.terms.items()})
        pivots, reduced = rref(rows)
        if target_col in pivots:
            raise UnsupportedError(
                "state not in the span of V_(-2)V and generator products")
        sol = {}
        for pc, row in zip(pivots, reduced):
            v = row.get(target_col)
            if v is not None and tags[pc] is not None:
                mono = tags[pc]
                s = out.get(mono, ZERO) + v
                if s.is_zero():
                    out.pop(mono, None)
                else:
                    out[mono] = s
    return out


def _columns_to_rows(columns, target):
    """Transpose [columns | target] into row dicts for rref solving."""
    rows = {}
    for ci, col in enumerate(columns):
        for ri, c in col.items():
            rows.setdefault(ri, {})[ci] = c
    for ri, c in target.items():
        rows.setdefault(ri, {})[len(columns)] = c
    return list(rows.values())


@dataclass
class FreenessReport:
    consistent: bool
    witness_weight: int = None
    jr_dims: list = None
    v_dims: list = None
    detail: str = ""

    def to_dict(self):
        return {"consistent": self.consistent,
                "witness_weight": self.witness_weight,
                "jr_dims": self.jr_dims, "v_dims": self.v_dims,
                "detail": self.detail}


def classical_freeness(space: VASpace):
    """Compare arc-algebra dimensions of R_V with dim V per weight.

    Equality on the whole window is reported as "consistent with classically
    free at this cutoff" (a finite check can refute but never certify the
    limit statement); a strict excess of the arc algebra is a witness of
    failure.
    """
    window = space.cutoff
    zhu = zhu_poisson(space, window)
    if not zhu.free:
        raise UnsupportedError(zhu.detail)
    jr = _arc_dims([w for _, w in space.preset.generators], window)
    v_dims = space.dims()
    for w in range(window + 1):
        if jr[w] > v_dims[w]:
            return FreenessReport(
                consistent=False, witness_weight=w, jr_dims=jr,
                v_dims=v_dims,
                detail=f"not classically free, witnessed at weight {w}")
        if jr[w] < v_dims[w]:
            return FreenessReport(
                consistent=False, witness_weight=w, jr_dims=jr,
                v_dims=v_dims,
                detail=f"arc algebra smaller than V at weight {w}; "
                       "surjectivity violated (internal inconsistency)")
    return FreenessReport(
        consistent=True, jr_dims=jr, v_dims=v_dims,
        detail=f"consistent with classically free at cutoff {window}")


def _arc_dims(weights, window):
    """Dims of the free differential polynomial algebra on the generators."""
    vars = []
    for wg in weights:
        k = 0
        while wg + k <= window:
            vars.append(wg + k)
            k += 1
    return _poly_dims(vars, window)


def gr_diff_algebra(space: VASpace, window=None):
    """gr^F V as a graded differential algebra presentation.

    Generators u_{g,k} of weight w_g + k stand for the classes of
    g_(-k-1)|0>, with T u_{g,k} = (k+1) u_{g,k+1}.  For PBW presets the
    associated graded is the free differential polynomial algebra; for
    commutative quotients the preset relations carry over verbatim.
    """
    window = space.cutoff if window is None else window
    gens = []
    gen_index = {}
    for gi, (sym, wg) in enumerate(space.preset.generators):
        k = 0
        while wg + k <= window + 1:
            gen_index[(gi, k)] = len(gens)
            gens.append((f"{sym}[{k}]", wg + k))
            k += 1
    t_action = {}
    for (gi, k), idx in gen_index.items():
        if (gi, k + 1) in gen_index:
            t_action[idx] = {((gen_index[(gi, k + 1)]),): Scalar.from_rational(k + 1)}
        else:
            t_action[idx] = {}
    relations = []
    for rel in space.preset.relations:
        # the differential ideal needs the whole T-closure up to the window
        inst = rel
        while inst:
            w_in = {space.monomial_weight(m) for m in inst}.pop()
            if w_in > window + 1:
                break
            conv = {}
            ok = True
            for mono, c in inst.items():
                try:
                    ring_mono = tuple(sorted(
                        gen_index[(g, -m - 1)] for m, g in mono))
                except KeyError:
                    ok = False
                    break
                conv[ring_mono] = c
            if ok and conv:
                relations.append(conv)
            inst = space._comm_translate_poly(inst)
    return DiffAlgebra(generators=tuple(gens), t_action=t_action,
                       relations=tuple(relations),
                       name=f"gr_{space.preset.name}",
                       t_closure_window=window + 1)
