"""Bundles of spaces over finite sets and the matrix calculus of the
cocontinuous maps between the free 2-spaces they span.

A bundle assigns a SUM space to each base point; a functor matrix is a
rectangular array of SUM spaces, applied to bundles by
fiber_y = (+)_x  xi_x (x) T_x^y  and composed by the sum-of-tensors
formula.  Composition is associative only up to the canonical
distributivity/reassociation permutations, so `associator_witness` and
friends build those permutations explicitly and verify that they are
isometric.

Tensor bases are ordered left factor major throughout; the witness
machinery keys every constructed basis vector by the tuple of leaf
indices behind it, which pins the canonical isomorphisms down as
concrete permutation matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .boolalg import BoolAlg
from .errors import FlavorMismatch, InvalidModel, UnknownPoint
from . import exactla
from .finban import (BifunctorData, CoendResult, FinBanSpace, FinPoset, Flavor,
                     IsoWitness, LinMap, coend, direct_sum, operator_norm,
                     projective_tensor, scalars, zero_space)
from .shcosh import PreCosheaf, from_atom_spaces


@dataclass
class Bundle:
    """base point -> SUM space.  Exponential bundles may carry blocked
    SUP fibers; operations that need plain SUM fibers validate."""

    base: tuple[str, ...]
    fibers: dict[str, FinBanSpace]

    def __post_init__(self):
        if len(set(self.base)) != len(self.base):
            raise InvalidModel("duplicate base points")
        for x in self.base:
            if x not in self.fibers:
                raise InvalidModel(f"missing fiber at {x!r}")

    def fiber(self, x: str) -> FinBanSpace:
        if x not in self.fibers:
            raise UnknownPoint(f"{x!r} is not a base point")
        return self.fibers[x]

    def total_dim(self) -> int:
        return sum(self.fibers[x].dim for x in self.base)

    def require_sum_fibers(self) -> None:
        if any(self.fibers[x].flavor is not Flavor.SUM for x in self.base):
            raise FlavorMismatch("this operation needs plain SUM fibers")


def delta_bundle(base: Sequence[str], x: str, v: FinBanSpace) -> Bundle:
    """v at x, zero elsewhere."""
    base = tuple(base)
    if x not in base:
        raise UnknownPoint(f"{x!r} is not a base point")
    return Bundle(base, {y: v if y == x else zero_space(Flavor.SUM) for y in base})


def constant_bundle(base: Sequence[str], v: FinBanSpace) -> Bundle:
    return Bundle(tuple(base), {y: v for y in base})


def bundle_sum(bundles: Sequence[Bundle]) -> Bundle:
    base = bundles[0].base
    if any(b.base != base for b in bundles):
        raise InvalidModel("bundle sum needs a common base")
    tags = [str(i) for i in range(len(bundles))]
    return Bundle(base, {
        x: direct_sum([b.fiber(x) for b in bundles], tags=tags).space
        for x in base})


def tensor_space_bundle(v: FinBanSpace, xi: Bundle) -> Bundle:
    """Pointwise v (x) fiber (v on the left)."""
    xi.require_sum_fibers()
    return Bundle(xi.base, {x: projective_tensor(v, xi.fiber(x)).space for x in xi.base})


def tensor_bundle(xi: Bundle, zeta: Bundle) -> Bundle:
    """Pointwise tensor of two bundles over the same base."""
    if xi.base != zeta.base:
        raise InvalidModel("tensor needs a common base")
    xi.require_sum_fibers()
    zeta.require_sum_fibers()
    return Bundle(xi.base, {
        x: projective_tensor(xi.fiber(x), zeta.fiber(x)).space for x in xi.base})


# ---------------------------------------------------------------------------
# hom bundles
# ---------------------------------------------------------------------------

def hom_space(a: FinBanSpace, b: FinBanSpace, tag: str = "") -> FinBanSpace:
    """Maps a -> b with the operator norm, as a blocked SUP space: basis
    (source label j, target label i), weight w_b(i)/w_a(j), one weighted
    l1 block per source column and per target block."""
    if a.flavor is not Flavor.SUM:
        raise FlavorMismatch("hom spaces are formed from SUM sources")
    labels = []
    weights = []
    groups = []
    pos = 0
    tgt_groups = b.effective_groups()
    for j in range(a.dim):
        for g in tgt_groups:
            group = []
            for i in g:
                labels.append(f"{tag}{b.basis[i]}<-{a.basis[j]}")
                weights.append(b.weights[i] / a.weights[j])
                group.append(pos)
                pos += 1
            if group:
                groups.append(tuple(group))
    if not labels:
        return zero_space(Flavor.SUP)
    return FinBanSpace(tuple(labels), tuple(weights), Flavor.SUP, tuple(groups))


def tensor_hom_adjunction_witness(xi: Bundle, zeta: Bundle, rho: Bundle) -> IsoWitness:
    """hom(xi (x) zeta, rho)  ~  hom(xi, rho^zeta): both constructions
    enumerate the triples (point, xi column, zeta column, rho row) in the
    same order with equal weights and block structure, so the canonical
    currying bijection is the identity permutation; the witness makes
    that checkable."""
    lhs, _ = hom_bundle(tensor_bundle(xi, zeta), rho)
    _, exponential = hom_bundle(zeta, rho)
    rhs, _ = hom_bundle(xi, exponential)
    if lhs.dim != rhs.dim or lhs.weights != rhs.weights:
        raise InvalidModel("currying bijection does not align the bases")
    if lhs.effective_groups() != rhs.effective_groups():
        raise InvalidModel("currying bijection does not align the blocks")
    return IsoWitness.from_permutation(lhs, rhs, list(range(lhs.dim)))


def hom_bundle(xi: Bundle, zeta: Bundle) -> tuple[FinBanSpace, Bundle]:
    """(the space of bundle maps xi -> zeta, the exponential bundle).

    The hom space is the product over base points of the fiber hom
    spaces: a blocked SUP space whose norm is the sup over points and
    source columns of the weighted l1 column mass."""
    if xi.base != zeta.base:
        raise InvalidModel("hom needs a common base")
    xi.require_sum_fibers()
    fiber_homs = {x: hom_space(xi.fiber(x), zeta.fiber(x), tag=f"{x}:")
                  for x in xi.base}
    if any(fiber_homs[x].dim for x in xi.base):
        total = direct_sum([fiber_homs[x] for x in xi.base], tags=list(xi.base)).space
    else:
        total = zero_space(Flavor.SUP)
    return total, Bundle(xi.base, fiber_homs)


# ---------------------------------------------------------------------------
# functor matrices
# ---------------------------------------------------------------------------

@dataclass
class FunctorMatrix:
    """A matrix of SUM spaces, one entry per (source point, target point)."""

    source_base: tuple[str, ...]
    target_base: tuple[str, ...]
    entries: dict[tuple[str, str], FinBanSpace]

    def __post_init__(self):
        for x in self.source_base:
            for y in self.target_base:
                if (x, y) not in self.entries:
                    raise InvalidModel(f"missing entry at ({x!r}, {y!r})")
                if self.entries[(x, y)].flavor is not Flavor.SUM:
                    raise FlavorMismatch("matrix entries carry the SUM flavor")

    def entry(self, x: str, y: str) -> FinBanSpace:
        return self.entries[(x, y)]

    @staticmethod
    def identity(base: Sequence[str]) -> "FunctorMatrix":
        base = tuple(base)
        return FunctorMatrix(base, base, {
            (x, y): scalars(f"id{x}") if x == y else zero_space(Flavor.SUM)
            for x in base for y in base})


def matrix_from_bundle(xi: Bundle, point: str = "*") -> FunctorMatrix:
    """Bundles over X are matrices X -> point (the base-product view of
    bundles and matrices)."""
    xi.require_sum_fibers()
    return FunctorMatrix(xi.base, (point,), {(x, point): xi.fiber(x) for x in xi.base})


def bundle_from_matrix(t: FunctorMatrix, x: str) -> Bundle:
    """Column x of the matrix, as a bundle over the target base."""
    return Bundle(t.target_base, {y: t.entry(x, y) for y in t.target_base})


# -- keyed construction: every basis vector of a composite space is keyed
#    by the leaf indices behind it, which realises the canonical
#    isomorphisms as permutations -------------------------------------------

Key = frozenset


def _keyed_tensor(a_pairs, b_pairs):
    """Left-major keyed product of [(key, weight)] lists."""
    return [(ka | kb, wa * wb) for ka, wa in a_pairs for kb, wb in b_pairs]


def _keyed_entry(tree, x: str, y: str):
    """Enumerate (key, weight) pairs of the entry at (x, y) of a composite
    matrix tree, in the exact order the constructed space uses.

    tree is either ("leaf", name, FunctorMatrix) or ("comp", left, right)
    meaning left o right.
    """
    kind = tree[0]
    if kind == "leaf":
        _, name, mat = tree
        space = mat.entry(x, y)
        return [(Key({(name, x, y, j)}), space.weights[j]) for j in range(space.dim)]
    _, left, right = tree
    mid = _tree_source(left)
    out = []
    for m in mid:
        out.extend(_keyed_tensor(_keyed_entry(left, m, y), _keyed_entry(right, x, m)))
    return out


def _tree_source(tree):
    return tree[2].source_base if tree[0] == "leaf" else _tree_source(tree[2])


def _tree_target(tree):
    return tree[2].target_base if tree[0] == "leaf" else _tree_target(tree[1])


def _tree_space(tree, x: str, y: str) -> FinBanSpace:
    """The space the actual constructions produce for this entry."""
    if tree[0] == "leaf":
        return tree[2].entry(x, y)
    _, left, right = tree
    mid = _tree_source(left)
    parts = [projective_tensor(_tree_space(left, m, y), _tree_space(right, x, m)).space
             for m in mid]
    return direct_sum(parts, tags=list(mid)).space if parts else zero_space(Flavor.SUM)


def compose(s: FunctorMatrix, t: FunctorMatrix) -> FunctorMatrix:
    """(s o t)_x^z = (+)_y  s_y^z (x) t_x^y."""
    if t.target_base != s.source_base:
        raise InvalidModel("inner bases do not match")
    tree = ("comp", ("leaf", "S", s), ("leaf", "T", t))
    entries = {
        (x, z): _tree_space(tree, x, z)
        for x in t.source_base for z in s.target_base}
    return FunctorMatrix(t.source_base, s.target_base, entries)


def permutation_witness(space_a: FinBanSpace, keys_a, space_b: FinBanSpace,
                        keys_b) -> IsoWitness:
    """The canonical permutation matching equal keys, as an IsoWitness."""
    if len(keys_a) != len(keys_b):
        raise InvalidModel("keyed spaces have different dimensions")
    position = {k: i for i, (k, _) in enumerate(keys_b)}
    if len(position) != len(keys_b):
        raise InvalidModel("keys are not unique")
    image = []
    for k, w in keys_a:
        if k not in position:
            raise InvalidModel("keys do not match")
        image.append(position[k])
    return IsoWitness.from_permutation(space_a, space_b, image)


def associator_witness(r: FunctorMatrix, s: FunctorMatrix, t: FunctorMatrix,
                       x: str, w: str) -> IsoWitness:
    """Canonical iso between the (x, w) entries of (r s) t and r (s t)."""
    left_tree = ("comp", ("comp", ("leaf", "R", r), ("leaf", "S", s)), ("leaf", "T", t))
    right_tree = ("comp", ("leaf", "R", r), ("comp", ("leaf", "S", s), ("leaf", "T", t)))
    return permutation_witness(
        _tree_space(left_tree, x, w), _keyed_entry(left_tree, x, w),
        _tree_space(right_tree, x, w), _keyed_entry(right_tree, x, w))


def reassociation_witness(tree_a, tree_b, x: str, w: str) -> IsoWitness:
    """Canonical permutation between two bracketings of the same composite."""
    return permutation_witness(
        _tree_space(tree_a, x, w), _keyed_entry(tree_a, x, w),
        _tree_space(tree_b, x, w), _keyed_entry(tree_b, x, w))


# -- application of matrices to bundles -------------------------------------

def _keyed_fiber(tree, y: str):
    """tree: ("bundle", name, Bundle) or ("apply", matrix_tree, bundle_tree)."""
    kind = tree[0]
    if kind == "bundle":
        _, name, xi = tree
        space = xi.fiber(y)
        return [(Key({(name, y, j)}), space.weights[j]) for j in range(space.dim)]
    _, mat_tree, bun_tree = tree
    base = _apply_tree_base(bun_tree)
    out = []
    for x in base:
        out.extend(_keyed_tensor(_keyed_fiber(bun_tree, x), _keyed_entry(mat_tree, x, y)))
    return out


def _apply_tree_base(tree):
    return tree[2].base if tree[0] == "bundle" else _tree_target(tree[1])


def _apply_tree_space(tree, y: str) -> FinBanSpace:
    if tree[0] == "bundle":
        return tree[2].fiber(y)
    _, mat_tree, bun_tree = tree
    base = _apply_tree_base(bun_tree)
    parts = [projective_tensor(_apply_tree_space(bun_tree, x),
                               _tree_space(mat_tree, x, y)).space for x in base]
    return direct_sum(parts, tags=list(base)).space if parts else zero_space(Flavor.SUM)


def apply_matrix(t: FunctorMatrix, xi: Bundle) -> Bundle:
    """fiber_y = (+)_x  xi_x (x) t_x^y."""
    if xi.base != t.source_base:
        raise InvalidModel("bundle base must be the matrix source base")
    xi.require_sum_fibers()
    tree = ("apply", ("leaf", "T", t), ("bundle", "xi", xi))
    return Bundle(t.target_base, {y: _apply_tree_space(tree, y) for y in t.target_base})


def apply_compose_witness(s: FunctorMatrix, t: FunctorMatrix, xi: Bundle,
                          z: str) -> IsoWitness:
    """Canonical iso  (s (t xi))_z  ~  ((s o t) xi)_z: applying after
    applying equals applying the composite."""
    two_steps = ("apply", ("leaf", "S", s), ("apply", ("leaf", "T", t), ("bundle", "xi", xi)))
    one_step = ("apply", ("comp", ("leaf", "S", s), ("leaf", "T", t)), ("bundle", "xi", xi))
    return permutation_witness(
        _apply_tree_space(two_steps, z), _keyed_fiber(two_steps, z),
        _apply_tree_space(one_step, z), _keyed_fiber(one_step, z))


def identity_application_witness(xi: Bundle, y: str) -> IsoWitness:
    """(identity matrix applied to xi)_y  ~  xi_y."""
    ident = FunctorMatrix.identity(xi.base)
    tree = ("apply", ("leaf", "I", ident), ("bundle", "xi", xi))
    applied = _apply_tree_space(tree, y)
    keys = _keyed_fiber(tree, y)
    fiber = xi.fiber(y)
    fiber_keys = [(Key({("xi", y, j), ("I", y, y, 0)}), fiber.weights[j])
                  for j in range(fiber.dim)]
    return permutation_witness(applied, keys, fiber, fiber_keys)


def decomposition_witness(xi: Bundle, y: str) -> IsoWitness:
    """Canonical iso between the fiber of the delta-sum  (+)_x xi_x (x) d_x
    at y and xi_y (the coordinate decomposition of a bundle)."""
    xi.require_sum_fibers()
    line = scalars("1")
    summands = [tensor_space_bundle(xi.fiber(x), delta_bundle(xi.base, x, line))
                for x in xi.base]
    total = bundle_sum(summands)
    fiber = total.fiber(y)
    idx_y = xi.base.index(y)
    keys = []
    for i, x in enumerate(xi.base):
        piece = summands[i].fiber(y)
        for j in range(piece.dim):
            keys.append((Key({("xi", x, j)}), piece.weights[j]))
    target = xi.fiber(y)
    target_keys = [(Key({("xi", y, j)}), target.weights[j]) for j in range(target.dim)]
    del idx_y
    return permutation_witness(fiber, keys, target, target_keys)


# ---------------------------------------------------------------------------
# discrete direct integrals
# ---------------------------------------------------------------------------

@dataclass
class DiscreteCosheafMeasure:
    """A space-valued measure on the powerset of a finite base: its value
    on a point is a SUM space."""

    base: tuple[str, ...]
    weight: dict[str, FinBanSpace]

    def __post_init__(self):
        for x in self.base:
            if x not in self.weight:
                raise InvalidModel(f"missing weight at {x!r}")
            if self.weight[x].flavor is not Flavor.SUM:
                raise FlavorMismatch("weights carry the SUM flavor")

    def as_bundle(self) -> Bundle:
        return Bundle(self.base, dict(self.weight))


@dataclass
class DiscreteIntegral:
    total: FinBanSpace
    indefinite: PreCosheaf
    base_algebra: BoolAlg


def direct_integral_discrete(xi: Bundle, mu: DiscreteCosheafMeasure) -> DiscreteIntegral:
    """(+)_x xi_x (x) mu(x), together with the indefinite integral
    E |-> (+)_{x in E} xi_x (x) mu(x) as a cosheaf on the powerset of the
    base."""
    if xi.base != mu.base:
        raise InvalidModel("bundle and measure bases differ")
    xi.require_sum_fibers()
    algebra = BoolAlg(tuple(sorted(xi.base)))
    atom_spaces = {
        x: projective_tensor(xi.fiber(x), mu.weight[x]).space for x in xi.base}
    indefinite = from_atom_spaces(algebra, atom_spaces)
    return DiscreteIntegral(indefinite.space(algebra.top), indefinite, algebra)


def integral_tensor_naturality_witness(xi: Bundle, mu: DiscreteCosheafMeasure,
                                       v: FinBanSpace) -> IsoWitness:
    """Cocontinuous value-side maps commute with the integral: tensoring
    the integral with v is canonically the integral of the pointwise
    tensored bundle (keys match across the two constructions)."""
    if v.flavor is not Flavor.SUM:
        raise FlavorMismatch("tensoring needs a SUM space")
    plain = direct_integral_discrete(xi, mu)
    tensored_bundle = Bundle(
        xi.base, {x: projective_tensor(xi.fiber(x), v).space for x in xi.base})
    routed = direct_integral_discrete(tensored_bundle, mu)
    lhs = projective_tensor(plain.total, v).space
    algebra = plain.base_algebra
    lhs_keys = []
    for x in algebra.atoms:
        fx, wx = xi.fiber(x), mu.weight[x]
        for j in range(fx.dim):
            for m in range(wx.dim):
                for q in range(v.dim):
                    lhs_keys.append((Key({("xi", x, j), ("mu", x, m), ("v", q)}),
                                     fx.weights[j] * wx.weights[m] * v.weights[q]))
    rhs_keys = []
    for x in algebra.atoms:
        fx, wx = xi.fiber(x), mu.weight[x]
        for j in range(fx.dim):
            for q in range(v.dim):
                for m in range(wx.dim):
                    rhs_keys.append((Key({("xi", x, j), ("v", q), ("mu", x, m)}),
                                     fx.weights[j] * v.weights[q] * wx.weights[m]))
    return permutation_witness(lhs, lhs_keys, routed.total, rhs_keys)


# ---------------------------------------------------------------------------
# discrete Kan extension
# ---------------------------------------------------------------------------

@dataclass
class PosetFunctor:
    """A functor from a thin finite category into spaces: one space per
    object, one map per generating arrow; path independence is validated."""

    index: FinPoset
    spaces: dict[str, FinBanSpace]
    arrow_maps: dict[tuple[str, str], LinMap]

    def validate(self) -> None:
        from .errors import NotAFunctor
        for f in self.index.arrows:
            m = self.arrow_maps.get(f)
            if m is None:
                raise NotAFunctor("missing arrow map")
            if m.source != self.spaces[f[0]] or m.target != self.spaces[f[1]]:
                raise NotAFunctor("arrow map endpoints do not match")
        for a in self.index.objects:
            for b in self.index.objects:
                if a == b or not self.index.leq(a, b):
                    continue
                mats = []
                for path in self.index.paths(a, b):
                    if not path:
                        continue
                    m = self.arrow_maps[path[0]]
                    for step in path[1:]:
                        m = self.arrow_maps[step] @ m
                    mats.append(m.matrix)
                if any(m != mats[0] for m in mats):
                    raise NotAFunctor("arrow maps are path dependent")

    def path_map(self, a: str, b: str) -> LinMap:
        path = self.index.paths(a, b)[0]
        m = LinMap.identity(self.spaces[a])
        for step in path:
            m = self.arrow_maps[step] @ m
        return m


@dataclass
class KanExtension:
    values: dict[str, CoendResult]
    eta: dict[str, LinMap]  # F(n) -> Lan(I n) presentation


def kan_extension_discrete(f: PosetFunctor, point_map: Mapping[str, str],
                           target: FinPoset) -> KanExtension:
    """Left Kan extension of f along the object map into a thin target:
    value at a = coend over m of hom(point_map(m), a) (x) f(m), with hom
    of a thin category a line or zero."""
    f.validate()
    m_index = f.index
    for m in m_index.objects:
        if point_map[m] not in target.objects:
            raise InvalidModel("object map lands outside the target")
    for a, b in m_index.arrows:
        if not target.leq(point_map[a], point_map[b]):
            raise InvalidModel("object map is not monotone")

    values: dict[str, CoendResult] = {}
    for a in target.objects:
        def space(x: str, y: str, a=a) -> FinBanSpace:
            if target.leq(point_map[x], a):
                return f.spaces[y]
            return zero_space(Flavor.SUM)

        def left(arrow, y: str, a=a) -> LinMap:
            src_obj, tgt_obj = arrow
            src = space(tgt_obj, y, a)
            tgt = space(src_obj, y, a)
            if src.dim and tgt.dim:
                return LinMap(src, tgt, LinMap.identity(src).matrix)
            return LinMap.zero(src, tgt)

        def right(x: str, arrow, a=a) -> LinMap:
            src = space(x, arrow[0], a)
            tgt = space(x, arrow[1], a)
            if src.dim == 0:
                return LinMap.zero(src, tgt)
            return LinMap(src, tgt, f.arrow_maps[arrow].matrix)

        bif = BifunctorData(m_index, space, left, right)
        values[a] = coend(bif, label=f"lan[{a}]")

    eta = {}
    for n in m_index.objects:
        a = point_map[n]
        eta[n] = values[a].wedges[n]
    return KanExtension(values, eta)


def kan_restriction_is_isometric(kan: KanExtension, f: PosetFunctor,
                                 point_map: Mapping[str, str]) -> bool:
    """When the object map is fully faithful (m <= n iff Im <= In), the
    extension restricted along it recovers f up to isometric isomorphism;
    decided with the true quotient norms of the coend presentations."""
    for n in f.index.objects:
        res = kan.values[point_map[n]]
        eta = kan.eta[n]
        if eta.source.dim != eta.target.dim:
            return False
        inv = exactla_invert_ok(eta)
        if inv is None:
            return False
        q = res.quotient
        if q.norm_of_map_into(eta) > 1:
            return False
        if operator_norm(compose_with_projection(inv, q)) > 1:
            return False
    return True


def exactla_invert_ok(m: LinMap) -> Optional[LinMap]:
    if m.source.dim != m.target.dim:
        return None
    if m.source.dim == 0:
        return LinMap.zero(m.target, m.source)
    inv = exactla.invert(m.matrix)
    if inv is None:
        return None
    return LinMap(m.target, m.source, tuple(tuple(r) for r in inv))


def compose_with_projection(m: LinMap, q) -> LinMap:
    """m o projection, for norms out of a quotient presentation."""
    return m @ q.projection
