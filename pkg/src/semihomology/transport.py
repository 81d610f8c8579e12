"""Restriction, induction, units and counits, Tor, and the sign shadow.

Restriction along a comparison functor turns a module over an index category
into a chain complex: the differential in degree n is the action of the
signed coface sum.  The sign shadow v* of a semicubical module is the
augmented semisimplicial module whose degree n is the cube degree n + 1 and
whose cofaces act by the signed difference of the two cube coface families.

Induction (the left adjoint of restriction) is computed as a literal coend:
for each target object, the direct sum of (source space) x (hom into the
image object), divided by the bilinearity relations, with generator actions
induced by precomposition.  Because the source module is only known up to its
truncation, every induction carries a validity window: a target degree is
certified when recomputing with one fewer source layer changes nothing.

Tor with the four named coefficient objects is realized through the explicit
representable resolutions; after the co-Yoneda collapse these are the
restricted complex, the brutal nonnegative truncation, and the degree shift.
``resolution_complex`` and ``tensor_resolution_complex`` keep the uncollapsed
routes available so the collapse itself is testable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chainkit import (
    ChainComplex,
    ChainMap,
    HomologyReport,
    bottom_cokernel,
    brutal_truncation,
    brutal_truncation_map,
    complex_to_module,
    good_truncation,
    good_truncation_basis,
    homology,
    homology_coordinates,
    homology_map,
    make_complex,
    module_map_to_chain_map,
    module_to_complex,
    reindex_shift,
)
from .diagmod import (
    DiagramModule,
    GeneratorId,
    ModuleMap,
    act,
    generators_for,
    hom_kind,
    kind_lower,
    make_module,
    truncate_module,
)
from .exactlin import RatMatrix, quotient_with_section, rank
from .simplexcat import (
    LinComb,
    Morphism,
    apply_functor,
    compose,
    hom_basis,
    hom_index,
    identity_cube,
    identity_inj,
    omega_d,
)


class WindowError(ValueError):
    """A computation would need degrees outside the certified window."""


# -- coefficient objects -------------------------------------------------------

COEFFICIENTS = ("k_point", "k_constant", "k_constant_shifted", "k_point_neg1")


def k_bullet_complex(truncation: int) -> ChainComplex:
    """The constant coefficient object as a complex: every degree is k and the
    differential alternates 0, 1, 0, 1, ... starting with zero into degree 0
    (the alternating sum has n + 1 terms)."""
    dims = {n: 1 for n in range(truncation + 1)}
    diff = {
        n: RatMatrix(1, 1, [sum(Fraction(-1) ** i for i in range(n + 1))])
        for n in range(1, truncation + 1)
    }
    return make_complex(0, truncation, dims, diff)


def k_point_complex(truncation: int) -> ChainComplex:
    """The simple object: k in degree 0 only."""
    return make_complex(0, truncation, {0: 1}, {})


def k_point_to_bullet(truncation: int) -> ChainMap:
    """The degree-0 inclusion of the point into the constant object."""
    src = k_point_complex(truncation)
    tgt = k_bullet_complex(truncation)
    comps = {n: RatMatrix.zeros(1, src.dim(n)) for n in src.degrees()}
    comps[0] = RatMatrix.identity(1)
    return ChainMap(src, tgt, comps)


# -- restriction ------------------------------------------------------------------

_RESTRICT_SOURCE = {"u_delta": "ssimp", "u_square": "scube"}


def restrict(which: str, x: DiagramModule) -> ChainComplex:
    """The chain complex underlying a semisimplicial or semicubical module:
    same dimensions, differential = action of the signed coface sum."""
    if which not in _RESTRICT_SOURCE:
        raise ValueError(f"unknown restriction {which!r}")
    if x.kind != _RESTRICT_SOURCE[which]:
        raise ValueError(
            f"{which} restricts modules of kind {_RESTRICT_SOURCE[which]}, got {x.kind}"
        )
    x.require_valid()
    dims = {n: x.dim(n) for n in x.degrees()}
    diff = {
        n: act(x, apply_functor(which, omega_d(n))) for n in range(1, x.truncation + 1)
    }
    c = make_complex(0, x.truncation, dims, diff)
    c._validated = True  # d o d = 0: the functor kills d(n+1) d(n)
    return c


def restrict_map(which: str, f: ModuleMap) -> ChainMap:
    return ChainMap(restrict(which, f.source), restrict(which, f.target), dict(f.components))


def augmented_chain(x: DiagramModule) -> ChainComplex:
    """The full complex of an augmented module, including degree -1."""
    if x.kind != "aug_ssimp":
        raise ValueError(f"augmented chain needs an aug_ssimp module, got {x.kind}")
    x.require_valid()
    dims = {n: x.dim(n) for n in x.degrees()}
    diff = {
        n: act(x, apply_functor("u_a", omega_d(n))) for n in range(0, x.truncation + 1)
    }
    c = make_complex(-1, x.truncation, dims, diff)
    c._validated = True
    return c


def augmented_chain_map(f: ModuleMap) -> ChainMap:
    return ChainMap(augmented_chain(f.source), augmented_chain(f.target), dict(f.components))


def restrict_v(x: DiagramModule) -> DiagramModule:
    """The sign shadow: degree n of the result is cube degree n + 1, the
    augmentation degree -1 is cube degree 0, and each coface acts by the
    signed difference of the color-1 and color-0 cube cofaces."""
    if x.kind != "scube":
        raise ValueError(f"the sign shadow needs an scube module, got {x.kind}")
    x.require_valid()
    trunc = x.truncation - 1
    dims = {n: x.dim(n + 1) for n in range(-1, trunc + 1)}
    actions = {}
    for g in generators_for("aug_ssimp", trunc):
        n, i = g.degree, g.index
        actions[g] = x.actions[GeneratorId("cube", n + 1, index=i + 1, color=1)] - x.actions[
            GeneratorId("cube", n + 1, index=i + 1, color=0)
        ]
    out = make_module("aug_ssimp", trunc, dims, actions)
    out._validated = True  # the relations are the image of the cube relations
    return out


def restrict_v_map(f: ModuleMap) -> ModuleMap:
    return ModuleMap(
        restrict_v(f.source),
        restrict_v(f.target),
        {n: f.components[n + 1] for n in range(-1, f.source.truncation)},
    )


# -- induction ---------------------------------------------------------------------

_INDUCE = {
    "u_delta": dict(src="chain0", tgt="ssimp", shift=0),
    "u_a": dict(src="chain_neg1", tgt="aug_ssimp", shift=0),
    "v": dict(src="aug_ssimp", tgt="scube", shift=1),
}


@dataclass
class InductionResult:
    module: DiagramModule
    valid_window: tuple[int, int] | None
    presentation: dict[int, list[tuple[int, str, int]]]

    def window_contains(self, n: int) -> bool:
        return self.valid_window is not None and self.valid_window[0] <= n <= self.valid_window[1]


class _RawInduction:
    """One coend computation at a fixed source cap, all target degrees.

    Per target degree a the ambient space has one coordinate per label
    (source degree q, hom element phi: a -> image(q), source basis index i);
    the bilinearity relations span the subspace divided out, and the
    surviving coordinates are the presentation of the quotient.
    """

    def __init__(self, which: str, m: DiagramModule, src_cap: int):
        cfg = _INDUCE[which]
        self.which = which
        self.src_kind = cfg["src"]
        self.src_lower = kind_lower(cfg["src"])
        self.tgt_kind = cfg["tgt"]
        self.tgt_lower = kind_lower(cfg["tgt"])
        self.shift = cfg["shift"]
        self.tgt_trunc = m.truncation + cfg["shift"]
        self.hom = hom_kind(cfg["tgt"])
        self.m = m
        self.src_cap = src_cap
        self.labels: dict[int, list[tuple[int, Morphism, int]]] = {}
        self.index: dict[int, dict[tuple[int, Morphism, int], int]] = {}
        self.proj: dict[int, RatMatrix] = {}
        self.kept: dict[int, list[int]] = {}
        self.dims: dict[int, int] = {}
        for a in range(self.tgt_lower, self.tgt_trunc + 1):
            self._build_degree(a)
        self.actions: dict[GeneratorId, RatMatrix] = {}
        for g in generators_for(self.tgt_kind, self.tgt_trunc):
            self.actions[g] = self._build_action(g)

    def _obj(self, q: int) -> int:
        return q + self.shift

    def _hom(self, a: int, q: int) -> tuple[Morphism, ...]:
        return hom_basis(self.hom, a, self._obj(q))

    def _functor_image(self, g: GeneratorId) -> LinComb:
        if self.which == "v":
            return apply_functor("v", g.as_morphism())
        return apply_functor(self.which, omega_d(g.degree))

    def _build_degree(self, a: int) -> None:
        labels: list[tuple[int, Morphism, int]] = []
        for q in range(self.src_lower, self.src_cap + 1):
            dim_q = self.m.dim(q)
            if dim_q == 0:
                continue
            for phi in self._hom(a, q):
                for i in range(dim_q):
                    labels.append((q, phi, i))
        index = {lab: k for k, lab in enumerate(labels)}
        rel_cols: list[list[Fraction]] = []
        for g in generators_for(self.src_kind, self.src_cap):
            q = g.degree
            if self.m.dim(q) == 0:
                continue
            mg = self.m.actions[g]  # M(g): M_q -> M_{q-1}
            image = self._functor_image(g)
            for phi in self._hom(a, q - 1):
                composed = image.compose(LinComb.of(phi))
                for i in range(self.m.dim(q)):
                    col = [Fraction(0)] * len(labels)
                    for t in range(mg.rows):
                        coeff = mg[t, i]
                        if coeff:
                            col[index[(q - 1, phi, t)]] += coeff
                    for w, c in composed.terms.items():
                        col[index[(q, w, i)]] -= c
                    rel_cols.append(col)
        sub = RatMatrix.from_columns(rel_cols, rows=len(labels))
        proj, kept = quotient_with_section(len(labels), sub)
        self.labels[a] = labels
        self.index[a] = index
        self.proj[a] = proj
        self.kept[a] = kept
        self.dims[a] = proj.rows

    def _build_action(self, h: GeneratorId) -> RatMatrix:
        a = h.degree  # h raises degree a-1 -> a in the target category
        hm = h.as_morphism()
        cols = []
        for k in self.kept[a]:
            q, phi, i = self.labels[a][k]
            cols.append(self.index[a - 1][(q, compose(phi, hm), i)])
        if not cols:
            return RatMatrix.zeros(self.dims[a - 1], 0)
        return self.proj[a - 1].column_select(cols)

    def unit_block(self, n: int) -> RatMatrix:
        """Degree-n component of the unit: basis vector i to the class of
        i (x) identity."""
        a = n + self.shift
        ident: Morphism = identity_cube(a) if self.hom == "scube" else identity_inj(a)
        cols = [self.index[a][(n, ident, i)] for i in range(self.m.dim(n))]
        if not cols:
            return RatMatrix.zeros(self.dims[a], 0)
        return self.proj[a].column_select(cols)


def _induce_full(which: str, m: DiagramModule) -> tuple[InductionResult, _RawInduction]:
    if which not in _INDUCE:
        raise ValueError(f"unknown induction {which!r}")
    cfg = _INDUCE[which]
    if m.kind != cfg["src"]:
        raise ValueError(f"{which} induces from kind {cfg['src']}, got {m.kind}")
    m.require_valid()
    full = _RawInduction(which, m, m.truncation)
    shallow = (
        _RawInduction(which, m, m.truncation - 1)
        if m.truncation - 1 >= kind_lower(cfg["src"])
        else None
    )
    window_top = None
    for a in range(full.tgt_lower, full.tgt_trunc + 1):
        stable = shallow is not None and full.labels[a] == shallow.labels[a]
        if stable:
            for g in generators_for(full.tgt_kind, a):
                if full.actions[g] != shallow.actions[g]:
                    stable = False
                    break
        if not stable:
            break
        window_top = a
    module = make_module(cfg["tgt"], full.tgt_trunc, full.dims, full.actions)
    module._validated = True  # precomposition is functorial on the quotient
    window = (full.tgt_lower, window_top) if window_top is not None else None
    presentation = {
        a: [(q, phi.text(), i) for (q, phi, i) in (full.labels[a][k] for k in full.kept[a])]
        for a in range(full.tgt_lower, full.tgt_trunc + 1)
    }
    return InductionResult(module, window, presentation), full


def induce(which: str, m: DiagramModule) -> InductionResult:
    """Extension of scalars along a comparison functor, with window detection.

    A target degree joins the validity window when dropping the top source
    layer changes neither its coend presentation nor any generator action up
    to that degree.  Modules supported strictly below their truncation get
    the full window; the window is empty when nothing can be certified.
    """
    return _induce_full(which, m)[0]


@dataclass
class AdjunctionMap:
    """A unit or counit together with the window it is certified on."""

    arrow: ChainMap | ModuleMap
    window: tuple[int, int]
    induction: InductionResult


def unit_map(which: str, m: DiagramModule) -> AdjunctionMap:
    """The adjunction unit M -> restrict(induce(M)), truncated to its window.

    A chain map for the chain-to-simplicial inductions; a map of augmented
    modules for the sign embedding.  The unit sends a basis vector to the
    class of (vector tensor identity).
    """
    result, raw = _induce_full(which, m)
    cfg = _INDUCE[which]
    lower = kind_lower(cfg["src"])
    if result.valid_window is None:
        raise WindowError(f"induction along {which} has an empty validity window")
    window_top = min(m.truncation, result.valid_window[1] - cfg["shift"])
    if window_top < lower:
        raise WindowError(f"window too small to express the unit along {which}")
    comps = {n: raw.unit_block(n) for n in range(lower, window_top + 1)}
    induced = result.module
    if which == "v":
        shadow = restrict_v(induced)
        arrow = ModuleMap(
            truncate_module(m, window_top), truncate_module(shadow, window_top), comps
        )
        return AdjunctionMap(arrow, (lower, window_top), result)
    if which == "u_a":
        target = _truncate_complex(augmented_chain(induced), window_top)
    else:
        target = _truncate_complex(restrict("u_delta", induced), window_top)
    source = module_to_complex(truncate_module(m, window_top))
    return AdjunctionMap(ChainMap(source, target, comps), (lower, window_top), result)


def counit_map(which: str, x: DiagramModule) -> AdjunctionMap:
    """The adjunction counit induce(restrict(X)) -> X: a presentation label
    (q, phi, i) is evaluated by acting with phi on the i-th basis vector."""
    cfg = _INDUCE[which]
    if x.kind != cfg["tgt"]:
        raise ValueError(f"the counit along {which} needs a {cfg['tgt']} module, got {x.kind}")
    x.require_valid()
    if which == "u_delta":
        restricted = complex_to_module(restrict("u_delta", x))
    elif which == "u_a":
        restricted = complex_to_module(augmented_chain(x))
    else:
        restricted = restrict_v(x)
    result, raw = _induce_full(which, restricted)
    if result.valid_window is None:
        raise WindowError(f"induction along {which} has an empty validity window")
    window_top = min(x.truncation, result.valid_window[1])
    lower = x.lower
    if window_top < lower:
        raise WindowError(f"window too small to express the counit along {which}")
    act_cache: dict[Morphism, RatMatrix] = {}
    comps = {}
    for a in range(lower, window_top + 1):
        cols = []
        for k in raw.kept[a]:
            q, phi, i = raw.labels[a][k]
            mat = act_cache.get(phi)
            if mat is None:
                mat = act(x, phi)
                act_cache[phi] = mat
            cols.append([mat[r, i] for r in range(mat.rows)])
        comps[a] = RatMatrix.from_columns(cols, rows=x.dim(a))
    arrow = ModuleMap(
        truncate_module(result.module, window_top), truncate_module(x, window_top), comps
    )
    return AdjunctionMap(arrow, (lower, window_top), result)


def _truncate_complex(c: ChainComplex, new_trunc: int) -> ChainComplex:
    dims = {n: c.dim(n) for n in range(c.lower, new_trunc + 1)}
    diff = {n: c.diff[n] for n in range(c.lower + 1, new_trunc + 1)}
    out = make_complex(c.lower, new_trunc, dims, diff)
    out._validated = c._validated
    return out


# -- Tor ------------------------------------------------------------------------

_TOR_LEGAL = {
    ("ssimp", "k_constant"),
    ("scube", "k_constant"),
    ("aug_ssimp", "k_constant_shifted"),
    ("chain0", "k_point"),
    ("chain0", "k_constant"),
    ("chain_neg1", "k_point_neg1"),
}


def tor_complex(kind: str, x: DiagramModule, coeff: str) -> ChainComplex:
    """The complex computing Tor against the named coefficient, after the
    co-Yoneda collapse of the representable resolution."""
    if (kind, coeff) not in _TOR_LEGAL:
        raise ValueError(f"illegal Tor pairing ({kind}, {coeff})")
    if x.kind != kind:
        raise ValueError(f"module has kind {x.kind}, not {kind}")
    if kind == "ssimp":
        return restrict("u_delta", x)
    if kind == "scube":
        return restrict("u_square", x)
    if kind == "aug_ssimp":
        return brutal_truncation(augmented_chain(x))
    if kind == "chain0":
        # the point and constant coefficients define the same Tor functor
        return module_to_complex(x)
    return reindex_shift(module_to_complex(x), 1)


def tor(kind: str, x: DiagramModule, coeff: str) -> HomologyReport:
    return homology(tor_complex(kind, x, coeff))


def tor_map(kind: str, f: ModuleMap, coeff: str) -> dict[int, RatMatrix]:
    """Induced maps on Tor, through the same realized complexes."""
    if (kind, coeff) not in _TOR_LEGAL:
        raise ValueError(f"illegal Tor pairing ({kind}, {coeff})")
    if kind == "ssimp":
        return homology_map(restrict_map("u_delta", f))
    if kind == "scube":
        return homology_map(restrict_map("u_square", f))
    if kind == "aug_ssimp":
        return homology_map(brutal_truncation_map(augmented_chain_map(f)))
    if kind == "chain0":
        return homology_map(module_map_to_chain_map(f))
    cm = module_map_to_chain_map(f)
    shifted = ChainMap(
        reindex_shift(cm.source, 1),
        reindex_shift(cm.target, 1),
        {n + 1: m for n, m in cm.components.items()},
    )
    return homology_map(shifted)


# -- representable resolutions, uncollapsed ----------------------------------------


def resolution_complex(kind: str, c: int, truncation: int) -> ChainComplex:
    """The augmented complex of representables, evaluated at the object c.

    Degree p carries the hom space p -> c, the differential is precomposition
    with the signed coface sum, and degree -1 carries the augmentation target
    (k, except at the initial augmented object, where everything vanishes).
    Exactness is the contractibility of the standard simplex or cube.
    """
    hk = hom_kind(kind)
    lower = kind_lower(kind)
    if not lower <= c <= truncation:
        raise ValueError(f"evaluation object {c} outside truncation")
    which = {"ssimp": "u_delta", "aug_ssimp": "u_a", "scube": "u_square"}[kind]
    dims = {p: len(hom_basis(hk, p, c)) for p in range(0, truncation + 1)}
    dims[-1] = 0 if (kind == "aug_ssimp" and c == -1) else 1
    diff: dict[int, RatMatrix] = {}
    for p in range(1, truncation + 1):
        index_low = hom_index(hk, p - 1, c)
        sign_sum = apply_functor(which, omega_d(p))
        cols = []
        for phi in hom_basis(hk, p, c):
            col = [Fraction(0)] * dims[p - 1]
            for w, coeff in LinComb.of(phi).compose(sign_sum).terms.items():
                col[index_low[w]] += coeff
            cols.append(col)
        diff[p] = RatMatrix.from_columns(cols, rows=dims[p - 1])
    diff[0] = RatMatrix(dims[-1], dims[0], [Fraction(1)] * (dims[-1] * dims[0]))
    return make_complex(-1, truncation, dims, diff)


def tensor_with_representable(
    x: DiagramModule, p: int
) -> tuple[list[tuple[int, Morphism, int]], RatMatrix, list[int]]:
    """The coend X (x)_A A(p, -) as a literal quotient: labels, projection,
    kept coordinates.  Co-Yoneda says the result is X(p); tests compare."""
    hk = hom_kind(x.kind)
    x.require_valid()
    labels: list[tuple[int, Morphism, int]] = []
    for cdeg in range(x.lower, x.truncation + 1):
        if x.dim(cdeg) == 0:
            continue
        for phi in hom_basis(hk, p, cdeg):
            for i in range(x.dim(cdeg)):
                labels.append((cdeg, phi, i))
    index = {lab: k for k, lab in enumerate(labels)}
    rel_cols: list[list[Fraction]] = []
    for g in generators_for(x.kind, x.truncation):
        cdeg = g.degree
        if x.dim(cdeg) == 0:
            continue
        xg = x.actions[g]  # X(g): X_c -> X_{c-1}
        gm = g.as_morphism()
        for phi in hom_basis(hk, p, cdeg - 1):
            pushed = compose(gm, phi)
            for i in range(x.dim(cdeg)):
                col = [Fraction(0)] * len(labels)
                for t in range(xg.rows):
                    coeff = xg[t, i]
                    if coeff:
                        col[index[(cdeg - 1, phi, t)]] += coeff
                col[index[(cdeg, pushed, i)]] -= Fraction(1)
                rel_cols.append(col)
    sub = RatMatrix.from_columns(rel_cols, rows=len(labels))
    proj, kept = quotient_with_section(len(labels), sub)
    return labels, proj, kept


def tensor_resolution_complex(x: DiagramModule, truncation: int | None = None) -> ChainComplex:
    """Tensor X against the whole representable resolution, without co-Yoneda:
    an independent route to the Tor complex."""
    hk = hom_kind(x.kind)
    which = {"ssimp": "u_delta", "aug_ssimp": "u_a", "scube": "u_square"}[x.kind]
    if truncation is None:
        truncation = x.truncation
    data = {p: tensor_with_representable(x, p) for p in range(0, truncation + 1)}
    dims = {p: data[p][1].rows for p in data}
    diff: dict[int, RatMatrix] = {}
    for p in range(1, truncation + 1):
        labels_p, _, kept_p = data[p]
        labels_low, proj_low, _ = data[p - 1]
        index_low = {lab: k for k, lab in enumerate(labels_low)}
        sign_sum = apply_functor(which, omega_d(p))
        cols = []
        for k in kept_p:
            cdeg, phi, i = labels_p[k]
            col = [Fraction(0)] * len(labels_low)
            for w, coeff in LinComb.of(phi).compose(sign_sum).terms.items():
                col[index_low[(cdeg, w, i)]] += coeff
            cols.append(col)
        at_ambient_level = RatMatrix.from_columns(cols, rows=len(labels_low))
        diff[p] = proj_low @ at_ambient_level
    return make_complex(0, truncation, dims, diff)


# -- low-degree exact sequence ------------------------------------------------------


@dataclass
class LowDegreeSequence:
    """0 -> H_0(tau X) -> Tor_0 -> X_{-1} -> H_{-1} -> 0 with its three maps.

    dims = (a, b, c, d) in sequence order; the maps are matrices in the
    pinned homology, coordinate, and quotient bases.
    """

    dims: tuple[int, int, int, int]
    include_tau: RatMatrix
    boundary: RatMatrix
    project: RatMatrix

    def is_exact(self) -> bool:
        a, b, c, d = self.dims
        return (
            (self.boundary @ self.include_tau).is_zero()
            and (self.project @ self.boundary).is_zero()
            and rank(self.include_tau) == a
            and rank(self.boundary) == b - a
            and b - a == c - d
            and rank(self.project) == d
        )


def low_degree_sequence(x: DiagramModule) -> LowDegreeSequence:
    if x.kind != "aug_ssimp":
        raise ValueError("the low-degree sequence needs an aug_ssimp module")
    c = augmented_chain(x)
    tau = good_truncation(c)
    bru = brutal_truncation(c)
    h_tau = homology(tau)
    h_bru = homology(bru)
    kernel_inclusion = good_truncation_basis(c)
    q_cok, d_dim = bottom_cokernel(c)
    alpha = homology_coordinates(h_bru, 0, kernel_inclusion @ h_tau.representatives[0])
    beta = c.diff[0] @ h_bru.representatives[0]
    return LowDegreeSequence(
        (h_tau.dim(0), h_bru.dim(0), c.dim(-1), d_dim), alpha, beta, q_cok
    )
