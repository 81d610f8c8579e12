"""Right modules over the truncated indexing algebras.

A ``DiagramModule`` stores one vector-space dimension per degree inside its
truncation window plus one matrix per one-step generator, in the contravariant
convention: a degree-raising generator g acts by a matrix X(g) of shape
dims[n-1] x dims[n] (face maps lower degree).  ``validate`` checks the
defining relations of the kind exactly; everything downstream assumes a
validated module and treats it as immutable.

Kinds:

* ``ssimp``       -- semisimplicial: coface actions delta(i, n), degrees 0..N.
* ``aug_ssimp``   -- augmented semisimplicial: degrees -1..N, one extra
                     augmentation coface delta(0, 0).
* ``scube``       -- semicubical: two coface families cube(i, 0/1, n).
* ``chain0``      -- nonnegative chain complex: one generator d(n) per degree.
* ``chain_neg1``  -- chain complex in degrees >= -1.

A module asserts nothing above its truncation; operations either stay inside
the window or say so.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .exactlin import RatMatrix, block_diag, rational_from_str, rational_to_str
from .simplexcat import (
    GeneratorId,
    LinComb,
    Morphism,
    coface_factorization,
    cube_coface_factorization,
    CubeMap,
    InjMap,
    compose,
    hom_basis,
    hom_index,
)

KINDS = ("ssimp", "aug_ssimp", "scube", "chain0", "chain_neg1")

_LOWER = {"ssimp": 0, "aug_ssimp": -1, "scube": 0, "chain0": 0, "chain_neg1": -1}
_HOM_KIND = {"ssimp": "ssimp", "aug_ssimp": "aug", "scube": "scube"}

MODULE_FORMAT = "semihomology-module/1"
MAP_FORMAT = "semihomology-map/1"


def kind_lower(kind: str) -> int:
    if kind not in _LOWER:
        raise ValueError(f"unknown module kind {kind!r}")
    return _LOWER[kind]


def hom_kind(kind: str) -> str:
    if kind not in _HOM_KIND:
        raise ValueError(f"kind {kind!r} has no underlying index category")
    return _HOM_KIND[kind]


def generators_for(kind: str, truncation: int) -> list[GeneratorId]:
    """All one-step generators acting inside the truncation, in token order."""
    lower = kind_lower(kind)
    out: list[GeneratorId] = []
    for n in range(lower + 1, truncation + 1):
        if kind in ("ssimp", "aug_ssimp"):
            out.extend(GeneratorId("delta", n, index=i) for i in range(n + 1))
        elif kind == "scube":
            for i in range(1, n + 1):
                out.extend(GeneratorId("cube", n, index=i, color=e) for e in (0, 1))
        else:
            out.append(GeneratorId("d", n))
    return out


@dataclass
class ValidationReport:
    ok: bool
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class DiagramModule:
    kind: str
    truncation: int
    dims: dict[int, int]
    actions: dict[GeneratorId, RatMatrix]
    _validated: bool = field(default=False, repr=False, compare=False)

    @property
    def lower(self) -> int:
        return kind_lower(self.kind)

    def dim(self, n: int) -> int:
        if n < self.lower or n > self.truncation:
            raise ValueError(f"degree {n} outside truncation window [{self.lower}, {self.truncation}]")
        return self.dims.get(n, 0)

    def degrees(self) -> range:
        return range(self.lower, self.truncation + 1)

    def action(self, g: GeneratorId) -> RatMatrix:
        try:
            return self.actions[g]
        except KeyError:
            raise ValueError(f"generator {g.token()} outside truncation") from None

    def require_valid(self) -> None:
        if not self._validated:
            report = validate(self)
            if not report:
                raise ValueError(f"invalid module: {report.message}")

    def is_zero(self) -> bool:
        return all(self.dim(n) == 0 for n in self.degrees())


def make_module(kind: str, truncation: int, dims: dict[int, int],
                actions: dict[GeneratorId, RatMatrix]) -> DiagramModule:
    """Build a module, filling in missing dims/actions with zeros and
    checking shapes eagerly."""
    lower = kind_lower(kind)
    if truncation < lower:
        raise ValueError("truncation below the kind's lower bound")
    full_dims = {n: int(dims.get(n, 0)) for n in range(lower, truncation + 1)}
    if any(d < 0 for d in full_dims.values()):
        raise ValueError("negative dimension")
    full_actions: dict[GeneratorId, RatMatrix] = {}
    for g in generators_for(kind, truncation):
        m = actions.get(g)
        rows, cols = full_dims[g.degree - 1], full_dims[g.degree]
        if m is None:
            m = RatMatrix.zeros(rows, cols)
        if (m.rows, m.cols) != (rows, cols):
            raise ValueError(
                f"action {g.token()} has shape {m.rows}x{m.cols}, expected {rows}x{cols}"
            )
        full_actions[g] = m
    return DiagramModule(kind, truncation, full_dims, full_actions)


def validate(x: DiagramModule) -> ValidationReport:
    """Check the defining identities of the kind, exactly.

    Simplicial and cubical kinds: the contravariant form of the coface
    relations; chain kinds: d o d = 0.  Reports the first violating triple.
    """
    lower = x.lower
    for g in generators_for(x.kind, x.truncation):
        m = x.actions.get(g)
        if m is None or (m.rows, m.cols) != (x.dim(g.degree - 1), x.dim(g.degree)):
            return ValidationReport(False, f"missing or misshaped action {g.token()}")
    if x.kind in ("ssimp", "aug_ssimp"):
        for n in range(lower + 2, x.truncation + 1):
            for j in range(n + 1):
                for i in range(j):
                    lhs = x.actions[GeneratorId("delta", n - 1, index=i)] @ x.actions[GeneratorId("delta", n, index=j)]
                    rhs = x.actions[GeneratorId("delta", n - 1, index=j - 1)] @ x.actions[GeneratorId("delta", n, index=i)]
                    if lhs != rhs:
                        return ValidationReport(
                            False, f"coface relation fails at degree {n} for (i, j) = ({i}, {j})"
                        )
    elif x.kind == "scube":
        for n in range(2, x.truncation + 1):
            for j in range(1, n + 1):
                for i in range(1, j):
                    for eps in (0, 1):
                        for eta in (0, 1):
                            lhs = x.actions[GeneratorId("cube", n - 1, index=i, color=eps)] @ x.actions[GeneratorId("cube", n, index=j, color=eta)]
                            rhs = x.actions[GeneratorId("cube", n - 1, index=j - 1, color=eta)] @ x.actions[GeneratorId("cube", n, index=i, color=eps)]
                            if lhs != rhs:
                                return ValidationReport(
                                    False,
                                    f"cube relation fails at degree {n} for (i, j, eps, eta) = ({i}, {j}, {eps}, {eta})",
                                )
    else:
        for n in range(lower + 2, x.truncation + 1):
            if not (x.actions[GeneratorId("d", n - 1)] @ x.actions[GeneratorId("d", n)]).is_zero():
                return ValidationReport(False, f"d o d != 0 at degree {n}")
    x._validated = True
    return ValidationReport(True)


def representable(kind: str, c: int, truncation: int) -> DiagramModule:
    """The hom-into-c module: degree n carries the hom basis n -> c, and
    generators act by precomposition in the canonical basis order."""
    hk = hom_kind(kind)
    lower = kind_lower(kind)
    if not lower <= c <= truncation:
        raise ValueError(f"object degree {c} outside truncation")
    dims = {n: len(hom_basis(hk, n, c)) for n in range(lower, truncation + 1)}
    actions: dict[GeneratorId, RatMatrix] = {}
    for g in generators_for(kind, truncation):
        n = g.degree
        source_basis = hom_basis(hk, n, c)
        target_index = hom_index(hk, n - 1, c)
        gm = g.as_morphism()
        cols = []
        for phi in source_basis:
            col = [Fraction(0)] * dims[n - 1]
            col[target_index[compose(phi, gm)]] = Fraction(1)
            cols.append(col)
        actions[g] = RatMatrix.from_columns(cols, rows=dims[n - 1])
    mod = make_module(kind, truncation, dims, actions)
    mod._validated = True  # functoriality of precomposition
    return mod


def zero_module(kind: str, truncation: int) -> DiagramModule:
    mod = make_module(kind, truncation, {}, {})
    mod._validated = True
    return mod


def act(x: DiagramModule, phi) -> RatMatrix:
    """The matrix of X(phi) for phi a LinComb, normal form, or generator.

    Normal forms are routed through the canonical coface factorization, so
    the result is independent of how phi was presented (validate guarantees
    the relations).  Requires a validated module.
    """
    x.require_valid()
    if x.kind in ("chain0", "chain_neg1"):
        if isinstance(phi, GeneratorId) and phi.kind == "d":
            return x.action(phi)
        raise ValueError("chain kinds act through their d(n) generators only")
    if isinstance(phi, GeneratorId):
        phi = phi.as_morphism()
    if isinstance(phi, (InjMap, CubeMap)):
        return _act_normal_form(x, phi)
    if isinstance(phi, LinComb):
        out = RatMatrix.zeros(x.dim(phi.source), x.dim(phi.target))
        for f, c in phi.terms.items():
            out = out + _act_normal_form(x, f).scale(c)
        return out
    raise TypeError(f"cannot act by {phi!r}")


def _act_normal_form(x: DiagramModule, f: Morphism) -> RatMatrix:
    if isinstance(f, InjMap):
        word = coface_factorization(f)
    else:
        word = cube_coface_factorization(f)
    out = RatMatrix.identity(x.dim(f.target))
    for g in word:  # outermost first; X(f) = X(inner) @ ... @ X(outer)
        out = x.action(g) @ out
    return out


# -- module maps ---------------------------------------------------------------


@dataclass
class ModuleMap:
    source: DiagramModule
    target: DiagramModule
    components: dict[int, RatMatrix]

    def component(self, n: int) -> RatMatrix:
        return self.components[n]

    def require_checked(self) -> None:
        report = check_map(self)
        if not report:
            raise ValueError(f"not a module map: {report.message}")


def check_map(f: ModuleMap) -> ValidationReport:
    """Exact commutation of the components with every generator action."""
    x, y = f.source, f.target
    if x.kind != y.kind or x.truncation != y.truncation:
        return ValidationReport(False, "source and target kind/truncation differ")
    for n in x.degrees():
        m = f.components.get(n)
        if m is None or (m.rows, m.cols) != (y.dim(n), x.dim(n)):
            return ValidationReport(False, f"missing or misshaped component at degree {n}")
    for g in generators_for(x.kind, x.truncation):
        n = g.degree
        lhs = f.components[n - 1] @ x.actions[g]
        rhs = y.actions[g] @ f.components[n]
        if lhs != rhs:
            return ValidationReport(False, f"component does not commute with {g.token()}")
    return ValidationReport(True)


def identity_map(x: DiagramModule) -> ModuleMap:
    return ModuleMap(x, x, {n: RatMatrix.identity(x.dim(n)) for n in x.degrees()})


def zero_map(x: DiagramModule, y: DiagramModule) -> ModuleMap:
    return ModuleMap(x, y, {n: RatMatrix.zeros(y.dim(n), x.dim(n)) for n in x.degrees()})


def compose_maps(g: ModuleMap, f: ModuleMap) -> ModuleMap:
    """g o f; f acts first."""
    if f.target is not g.source and f.target != g.source:
        raise ValueError("module maps do not compose")
    return ModuleMap(
        f.source, g.target,
        {n: g.components[n] @ f.components[n] for n in f.source.degrees()},
    )


def direct_sum(x: DiagramModule, y: DiagramModule) -> DiagramModule:
    if x.kind != y.kind or x.truncation != y.truncation:
        raise ValueError("direct sum needs matching kind and truncation")
    x.require_valid()
    y.require_valid()
    dims = {n: x.dim(n) + y.dim(n) for n in x.degrees()}
    actions = {
        g: block_diag(x.actions[g], y.actions[g]) for g in generators_for(x.kind, x.truncation)
    }
    mod = make_module(x.kind, x.truncation, dims, actions)
    mod._validated = True
    return mod


def sum_inclusion(x: DiagramModule, y: DiagramModule, which: int) -> ModuleMap:
    """Inclusion of the first (which = 0) or second (which = 1) summand into x (+) y."""
    total = direct_sum(x, y)
    part = (x, y)[which]
    comps = {}
    for n in x.degrees():
        m = [[Fraction(0)] * part.dim(n) for _ in range(total.dim(n))]
        off = 0 if which == 0 else x.dim(n)
        for j in range(part.dim(n)):
            m[off + j][j] = Fraction(1)
        comps[n] = RatMatrix.from_rows(m, cols=part.dim(n))
    return ModuleMap(part, total, comps)


def sum_projection(x: DiagramModule, y: DiagramModule, which: int) -> ModuleMap:
    total = direct_sum(x, y)
    part = (x, y)[which]
    comps = {}
    for n in x.degrees():
        m = [[Fraction(0)] * total.dim(n) for _ in range(part.dim(n))]
        off = 0 if which == 0 else x.dim(n)
        for j in range(part.dim(n)):
            m[j][off + j] = Fraction(1)
        comps[n] = RatMatrix.from_rows(m, cols=total.dim(n))
    return ModuleMap(total, part, comps)


def yoneda_map(kind: str, g: Morphism, truncation: int) -> ModuleMap:
    """The map of representables induced by g: c -> c', post-composition by g.

    Covariant: yoneda_map(g o h) = yoneda_map(g) o yoneda_map(h).
    """
    hk = hom_kind(kind)
    src = representable(kind, g.source, truncation)
    tgt = representable(kind, g.target, truncation)
    comps = {}
    for n in src.degrees():
        basis = hom_basis(hk, n, g.source)
        tgt_index = hom_index(hk, n, g.target)
        cols = []
        for phi in basis:
            col = [Fraction(0)] * tgt.dim(n)
            col[tgt_index[compose(g, phi)]] = Fraction(1)
            cols.append(col)
        comps[n] = RatMatrix.from_columns(cols, rows=tgt.dim(n))
    return ModuleMap(src, tgt, comps)


def truncate_module(x: DiagramModule, new_truncation: int) -> DiagramModule:
    if new_truncation > x.truncation:
        raise ValueError("cannot extend a truncation")
    dims = {n: x.dim(n) for n in range(x.lower, new_truncation + 1)}
    actions = {g: x.actions[g] for g in generators_for(x.kind, new_truncation)}
    mod = make_module(x.kind, new_truncation, dims, actions)
    mod._validated = x._validated
    return mod


def truncate_map(f: ModuleMap, new_truncation: int) -> ModuleMap:
    return ModuleMap(
        truncate_module(f.source, new_truncation),
        truncate_module(f.target, new_truncation),
        {n: f.components[n] for n in range(f.source.lower, new_truncation + 1)},
    )


# -- serialization ---------------------------------------------------------------


def _matrix_to_json(m: RatMatrix) -> list[list[str]]:
    return [[rational_to_str(e) for e in m.row(i)] for i in range(m.rows)]


def _matrix_from_json(rows: list[list[str]], shape: tuple[int, int]) -> RatMatrix:
    entries = [rational_from_str(e) for r in rows for e in r]
    if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
        raise ValueError(f"matrix shape mismatch: expected {shape[0]}x{shape[1]}")
    return RatMatrix(shape[0], shape[1], entries)


def module_to_obj(x: DiagramModule) -> dict:
    return {
        "format": MODULE_FORMAT,
        "kind": x.kind,
        "truncation": x.truncation,
        "dims": {str(n): x.dim(n) for n in x.degrees()},
        "actions": {g.token(): _matrix_to_json(x.actions[g]) for g in generators_for(x.kind, x.truncation)},
    }


def module_from_obj(obj: dict) -> DiagramModule:
    if obj.get("format") != MODULE_FORMAT:
        raise ValueError(f"not a {MODULE_FORMAT} document")
    kind = obj["kind"]
    truncation = int(obj["truncation"])
    dims = {int(k): int(v) for k, v in obj.get("dims", {}).items()}
    full_dims = {n: dims.get(n, 0) for n in range(kind_lower(kind), truncation + 1)}
    actions: dict[GeneratorId, RatMatrix] = {}
    for token, rows in obj.get("actions", {}).items():
        g = GeneratorId.from_token(token)
        shape = (full_dims.get(g.degree - 1, 0), full_dims.get(g.degree, 0))
        actions[g] = _matrix_from_json(rows, shape)
    return make_module(kind, truncation, full_dims, actions)


def module_to_json(x: DiagramModule) -> str:
    return canonical_json(module_to_obj(x))


def module_from_json(text: str) -> DiagramModule:
    return module_from_obj(json.loads(text))


def map_to_obj(f: ModuleMap) -> dict:
    return {
        "format": MAP_FORMAT,
        "kind": f.source.kind,
        "truncation": f.source.truncation,
        "source": module_to_obj(f.source),
        "target": module_to_obj(f.target),
        "components": {
            str(n): _matrix_to_json(f.components[n]) for n in f.source.degrees()
        },
    }


def map_from_obj(obj: dict) -> ModuleMap:
    if obj.get("format") != MAP_FORMAT:
        raise ValueError(f"not a {MAP_FORMAT} document")
    source = module_from_obj(obj["source"])
    target = module_from_obj(obj["target"])
    comps = {}
    for key, rows in obj.get("components", {}).items():
        n = int(key)
        comps[n] = _matrix_from_json(rows, (target.dim(n), source.dim(n)))
    for n in source.degrees():
        comps.setdefault(n, RatMatrix.zeros(target.dim(n), source.dim(n)))
    return ModuleMap(source, target, comps)


def map_to_json(f: ModuleMap) -> str:
    return canonical_json(map_to_obj(f))


def map_from_json(text: str) -> ModuleMap:
    return map_from_obj(json.loads(text))


def canonical_json(obj) -> str:
    """Deterministic serialization: sorted keys, fixed separators, newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
