"""Desk-scale Banach spaces: weighted l1 / weighted sup spaces over Q.

A FinBanSpace is an ordered basis with positive rational weights and a
flavor:

  SUM  --  norm(v) = sum_i w_i |v_i|           (coproduct side)
  SUP  --  norm(v) = max_i w_i |v_i|           (product side)

SUP spaces may additionally carry a block structure (`groups`), giving
norm(v) = max over blocks of the weighted l1 sum inside the block.  This
is the "sup over operator-norm blocks" convention used for hom spaces:
the operator norm of a map between SUM spaces is the sup over source
basis columns of a weighted l1 expression, so spaces of such maps are
exactly of this shape.  Plain SUP is the singleton-block case.

Operator norms are exact: a weighted l1 (or blocked sup) unit ball is a
polytope, so the sup of a convex function over it is attained at one of
finitely many vertices.

Quotients of SUM spaces are handled honestly: the quotient of a weighted
l1 space need not be a weighted l1 space, so `quotient` returns a
weighted presentation whose weights are exact on basis rays, together
with an LP oracle (`class_norm`) for the true quotient norm of any
vector and metric-surjection rules for operator norms in and out of the
quotient.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from .errors import FlavorMismatch, InvalidModel, NotAFunctor
from . import exactla
from .exactla import ONE, ZERO

Vector = tuple[Fraction, ...]


class Flavor(Enum):
    SUM = "sum"
    SUP = "sup"


def vec(*xs) -> Vector:
    return tuple(Fraction(x) for x in xs)


def vec_add(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(k: Fraction, a: Vector) -> Vector:
    return tuple(k * x for x in a)


def zero_vec(dim: int) -> Vector:
    return (ZERO,) * dim


def basis_vec(dim: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(dim))


@dataclass(frozen=True)
class FinBanSpace:
    basis: tuple[str, ...]
    weights: tuple[Fraction, ...]
    flavor: Flavor
    groups: Optional[tuple[tuple[int, ...], ...]] = None

    def __post_init__(self):
        if len(self.basis) != len(self.weights):
            raise InvalidModel("one weight per basis label required")
        if len(set(self.basis)) != len(self.basis):
            raise InvalidModel("duplicate basis labels")
        if any(w <= 0 for w in self.weights):
            raise InvalidModel("weights must be strictly positive")
        if self.groups is not None:
            if self.flavor is not Flavor.SUP:
                raise InvalidModel("blocked norms only make sense for SUP spaces")
            seen = sorted(i for g in self.groups for i in g)
            if seen != list(range(self.dim)):
                raise InvalidModel("groups must partition the basis indices")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def effective_groups(self) -> tuple[tuple[int, ...], ...]:
        if self.flavor is Flavor.SUM:
            return (tuple(range(self.dim)),) if self.dim else ()
        if self.groups is None:
            return tuple((i,) for i in range(self.dim))
        return self.groups

    def norm(self, v: Sequence[Fraction]) -> Fraction:
        if len(v) != self.dim:
            raise InvalidModel("vector/basis length mismatch")
        if self.dim == 0:
            return ZERO
        if self.flavor is Flavor.SUM:
            return sum((w * abs(x) for w, x in zip(self.weights, v)), ZERO)
        best = ZERO
        for g in self.effective_groups():
            s = sum((self.weights[i] * abs(v[i]) for i in g), ZERO)
            if s > best:
                best = s
        return best

    def zero(self) -> Vector:
        return zero_vec(self.dim)

    def basis_vector(self, i: int) -> Vector:
        return basis_vec(self.dim, i)

    def ball_extreme_points(self, cap: int = 4096) -> Iterator[Vector]:
        """Vertices of the unit ball.

        SUM: +-e_j / w_j.  SUP/blocked: one +-e_i / w_i choice per block
        (the ball is a product of block l1 balls).  Raises FlavorMismatch
        when the vertex count would exceed `cap`.
        """
        if self.dim == 0:
            return iter(())
        if self.flavor is Flavor.SUM:
            def sum_points():
                for j in range(self.dim):
                    for sign in (ONE, -ONE):
                        v = list(zero_vec(self.dim))
                        v[j] = sign / self.weights[j]
                        yield tuple(v)
            return sum_points()
        groups = self.effective_groups()
        count = 1
        for g in groups:
            count *= 2 * len(g)
            if count > cap:
                raise FlavorMismatch(
                    f"unit ball of this space has more than {cap} vertices")

        def sup_points():
            choices = [[(i, s) for i in g for s in (ONE, -ONE)] for g in groups]
            for pick in itertools.product(*choices):
                v = list(zero_vec(self.dim))
                for i, s in pick:
                    v[i] = s / self.weights[i]
                yield tuple(v)
        return sup_points()

    def dual_extreme_functionals(self, cap: int = 65536) -> Iterator[Vector]:
        """Vertices of the dual unit ball, as coordinate functionals
        phi with pairing phi . v.

        SUM: sign vectors scaled by the weights (2^dim of them).
        SUP/blocked: a sign pattern on a single block, zero elsewhere.
        """
        if self.dim == 0:
            return iter(())
        if self.flavor is Flavor.SUM:
            if 2 ** self.dim > cap:
                raise FlavorMismatch("dual ball too large to enumerate")

            def sum_duals():
                for signs in itertools.product((ONE, -ONE), repeat=self.dim):
                    yield tuple(s * w for s, w in zip(signs, self.weights))
            return sum_duals()

        def sup_duals():
            for g in self.effective_groups():
                for signs in itertools.product((ONE, -ONE), repeat=len(g)):
                    phi = list(zero_vec(self.dim))
                    for s, i in zip(signs, g):
                        phi[i] = s * self.weights[i]
                    yield tuple(phi)
        return sup_duals()


def scalars(label: str = "1") -> FinBanSpace:
    return FinBanSpace((label,), (ONE,), Flavor.SUM)


def zero_space(flavor: Flavor = Flavor.SUM) -> FinBanSpace:
    return FinBanSpace((), (), flavor)


def sum_space(labels: Sequence[str], weights: Optional[Sequence] = None) -> FinBanSpace:
    ws = tuple(Fraction(w) for w in weights) if weights is not None else (ONE,) * len(labels)
    return FinBanSpace(tuple(labels), ws, Flavor.SUM)


def sup_space(labels: Sequence[str], weights: Optional[Sequence] = None) -> FinBanSpace:
    ws = tuple(Fraction(w) for w in weights) if weights is not None else (ONE,) * len(labels)
    return FinBanSpace(tuple(labels), ws, Flavor.SUP)


# ---------------------------------------------------------------------------
# linear maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinMap:
    source: FinBanSpace
    target: FinBanSpace
    matrix: tuple[tuple[Fraction, ...], ...]  # target rows x source columns

    def __post_init__(self):
        if len(self.matrix) != self.target.dim:
            raise InvalidModel("matrix row count must match the target dimension")
        if any(len(row) != self.source.dim for row in self.matrix):
            raise InvalidModel("matrix column count must match the source dimension")

    def __call__(self, v: Sequence[Fraction]) -> Vector:
        if len(v) != self.source.dim:
            raise InvalidModel("vector/source mismatch")
        return tuple(sum((row[j] * v[j] for j in range(len(v))), ZERO)
                     for row in self.matrix)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.matrix)

    def compose(self, inner: "LinMap") -> "LinMap":
        """self after inner.  Dimensions are taken from the spaces so that
        zero-dimensional middles still produce the right zero matrix."""
        if inner.target != self.source:
            raise InvalidModel("composition mismatch")
        mid = self.source.dim
        rows = tuple(
            tuple(sum((self.matrix[i][k] * inner.matrix[k][j] for k in range(mid)), ZERO)
                  for j in range(inner.source.dim))
            for i in range(self.target.dim))
        return LinMap(inner.source, self.target, rows)

    def __matmul__(self, inner: "LinMap") -> "LinMap":
        return self.compose(inner)

    def add(self, other: "LinMap") -> "LinMap":
        if other.source != self.source or other.target != self.target:
            raise InvalidModel("addition needs equal source and target")
        return LinMap(self.source, self.target, tuple(
            tuple(a + b for a, b in zip(r1, r2))
            for r1, r2 in zip(self.matrix, other.matrix)))

    def scale(self, k: Fraction) -> "LinMap":
        return LinMap(self.source, self.target, tuple(
            tuple(k * x for x in row) for row in self.matrix))

    def is_identity(self) -> bool:
        if self.source.dim != self.target.dim:
            return False
        return all(
            self.matrix[i][j] == (ONE if i == j else ZERO)
            for i in range(self.target.dim) for j in range(self.source.dim))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.matrix for x in row)

    def operator_norm(self) -> Fraction:
        return operator_norm(self)

    @staticmethod
    def identity(space: FinBanSpace) -> "LinMap":
        return LinMap(space, space, tuple(
            tuple(ONE if i == j else ZERO for j in range(space.dim))
            for i in range(space.dim)))

    @staticmethod
    def zero(source: FinBanSpace, target: FinBanSpace) -> "LinMap":
        return LinMap(source, target, tuple(
            zero_vec(source.dim) for _ in range(target.dim)))

    @staticmethod
    def from_columns(source: FinBanSpace, target: FinBanSpace,
                     cols: Sequence[Sequence[Fraction]]) -> "LinMap":
        if len(cols) != source.dim:
            raise InvalidModel("one column per source basis vector required")
        rows = tuple(
            tuple(Fraction(cols[j][i]) for j in range(source.dim))
            for i in range(target.dim))
        return LinMap(source, target, rows)


def _monomial_data(t: LinMap) -> Optional[list[tuple[int, int, Fraction]]]:
    """(source col, target row, coefficient) triples when the matrix has at
    most one nonzero per row and per column; None otherwise."""
    entries = []
    used_rows = set()
    for j in range(t.source.dim):
        col = t.column(j)
        nz = [i for i, x in enumerate(col) if x != 0]
        if len(nz) > 1:
            return None
        if nz:
            i = nz[0]
            if i in used_rows:
                return None
            used_rows.add(i)
            entries.append((j, i, col[i]))
    return entries


def operator_norm(t: LinMap) -> Fraction:
    """Exact operator norm.

    SUM sources use the column rule (valid against any target norm);
    monomial matrices from SUP/blocked sources have a closed form; other
    SUP/blocked sources fall back to vertex enumeration of the source
    ball, which is finite but exponential, so it is capped.
    """
    if t.source.dim == 0 or t.target.dim == 0:
        return ZERO
    if t.source.flavor is Flavor.SUM:
        best = ZERO
        for j in range(t.source.dim):
            val = t.target.norm(t.column(j)) / t.source.weights[j]
            if val > best:
                best = val
        return best
    mono = _monomial_data(t)
    if mono is not None:
        source_groups = t.source.effective_groups()
        target_groups = t.target.effective_groups()
        ratio = {}
        for j, i, c in mono:
            ratio[j] = (i, abs(c) * t.target.weights[i] / t.source.weights[j])
        best = ZERO
        for h in target_groups:
            hset = set(h)
            total = ZERO
            for g in source_groups:
                cand = [ratio[j][1] for j in g if j in ratio and ratio[j][0] in hset]
                if cand:
                    total += max(cand)
            if total > best:
                best = total
        return best
    best = ZERO
    for v in t.source.ball_extreme_points():
        val = t.target.norm(t(v))
        if val > best:
            best = val
    return best


@dataclass(frozen=True)
class IsoWitness:
    forward: LinMap
    backward: LinMap

    def is_valid(self) -> bool:
        return (self.backward @ self.forward).is_identity() and \
               (self.forward @ self.backward).is_identity()

    def is_isometric(self) -> bool:
        return self.is_valid() and \
            operator_norm(self.forward) <= 1 and operator_norm(self.backward) <= 1

    @staticmethod
    def from_permutation(source: FinBanSpace, target: FinBanSpace,
                         image_index: Sequence[int]) -> "IsoWitness":
        """Witness for e_j |-> e_{image_index[j]}."""
        if sorted(image_index) != list(range(source.dim)) or source.dim != target.dim:
            raise InvalidModel("not a permutation of matched bases")
        fwd_cols = [basis_vec(target.dim, image_index[j]) for j in range(source.dim)]
        inv = [0] * source.dim
        for j, i in enumerate(image_index):
            inv[i] = j
        bwd_cols = [basis_vec(source.dim, inv[i]) for i in range(target.dim)]
        return IsoWitness(
            LinMap.from_columns(source, target, fwd_cols),
            LinMap.from_columns(target, source, bwd_cols))


# ---------------------------------------------------------------------------
# direct sums and tensors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirectSum:
    space: FinBanSpace
    parts: tuple[FinBanSpace, ...]
    injections: tuple[LinMap, ...]
    projections: tuple[LinMap, ...]
    offsets: tuple[int, ...]

    def mediate_from_cone(self, cone: Sequence[LinMap]) -> LinMap:
        """For SUM sums: the unique map T with T o inj_x = cone_x."""
        if self.space.flavor is not Flavor.SUM:
            raise FlavorMismatch("cones out of a sum need the SUM flavor")
        if len(cone) != len(self.parts):
            raise InvalidModel("one cone leg per summand required")
        target = cone[0].target
        if any(leg.target != target for leg in cone):
            raise InvalidModel("cone legs must share a target")
        cols: list[Vector] = []
        for leg, part in zip(cone, self.parts):
            if leg.source != part:
                raise InvalidModel("cone leg source must be the summand")
            cols.extend(leg.column(j) for j in range(part.dim))
        return LinMap.from_columns(self.space, target, cols)

    def mediate_to_cone(self, cone: Sequence[LinMap]) -> LinMap:
        """For SUP products: the unique map T with proj_x o T = cone_x."""
        if self.space.flavor is not Flavor.SUP:
            raise FlavorMismatch("cones into a product need the SUP flavor")
        if len(cone) != len(self.parts):
            raise InvalidModel("one cone leg per factor required")
        source = cone[0].source
        if any(leg.source != source for leg in cone):
            raise InvalidModel("cone legs must share a source")
        rows: list[tuple[Fraction, ...]] = []
        for leg, part in zip(cone, self.parts):
            if leg.target != part:
                raise InvalidModel("cone leg target must be the factor")
            rows.extend(leg.matrix)
        return LinMap(source, self.space, tuple(rows))


def direct_sum(spaces: Sequence[FinBanSpace],
               tags: Optional[Sequence[str]] = None) -> DirectSum:
    """Disjoint-union basis with inherited weights.

    SUM inputs give the coproduct (norms add); SUP inputs give the
    product (norms max, block structures concatenated).
    """
    if not spaces:
        raise InvalidModel("direct_sum needs at least one space")
    flavor = spaces[0].flavor
    if any(s.flavor is not flavor for s in spaces):
        raise FlavorMismatch("direct_sum needs a single flavor")
    if tags is None:
        tags = [str(k) for k in range(len(spaces))]
    labels: list[str] = []
    weights: list[Fraction] = []
    offsets: list[int] = []
    groups: list[tuple[int, ...]] = []
    pos = 0
    for tag, s in zip(tags, spaces):
        offsets.append(pos)
        labels.extend(f"{tag}:{b}" for b in s.basis)
        weights.extend(s.weights)
        if flavor is Flavor.SUP:
            groups.extend(tuple(pos + i for i in g) for g in s.effective_groups())
        pos += s.dim
    grouped = tuple(groups) if flavor is Flavor.SUP and any(
        s.groups is not None for s in spaces) else None
    total = FinBanSpace(tuple(labels), tuple(weights), flavor, grouped)
    injections = []
    projections = []
    for off, s in zip(offsets, spaces):
        inj_cols = [basis_vec(total.dim, off + j) for j in range(s.dim)]
        injections.append(LinMap.from_columns(s, total, inj_cols))
        proj_rows = tuple(basis_vec(total.dim, off + i) for i in range(s.dim))
        projections.append(LinMap(total, s, proj_rows))
    return DirectSum(total, tuple(spaces), tuple(injections), tuple(projections),
                     tuple(offsets))


@dataclass(frozen=True)
class TensorProduct:
    space: FinBanSpace
    left: FinBanSpace
    right: FinBanSpace

    def index(self, i: int, j: int) -> int:
        return i * self.right.dim + j

    def pure(self, v: Sequence[Fraction], w: Sequence[Fraction]) -> Vector:
        """The bilinear embedding (v, w) |-> v (x) w."""
        out = [ZERO] * self.space.dim
        for i, x in enumerate(v):
            if x == 0:
                continue
            base = i * self.right.dim
            for j, y in enumerate(w):
                if y != 0:
                    out[base + j] = x * y
        return tuple(out)


def projective_tensor(a: FinBanSpace, b: FinBanSpace) -> TensorProduct:
    """Product basis with multiplied weights, left factor major.

    For weighted l1 factors this weighted l1 norm equals the projective
    norm (infimum over representations); `projective_norm_oracle` below
    recomputes that infimum by LP so the identity stays testable.
    """
    if a.flavor is not Flavor.SUM or b.flavor is not Flavor.SUM:
        raise FlavorMismatch("the projective tensor is built on SUM spaces")
    labels = tuple(f"{x}(x){y}" for x in a.basis for y in b.basis)
    weights = tuple(wa * wb for wa in a.weights for wb in b.weights)
    return TensorProduct(FinBanSpace(labels, weights, Flavor.SUM), a, b)


def projective_norm_oracle(a: FinBanSpace, b: FinBanSpace,
                           u: Sequence[Fraction]) -> Fraction:
    """inf over representations u = sum_n a_n (x) b_n of sum ||a_n|| ||b_n||.

    Any representation can be regrouped so that the right factors are
    vertices of the right unit ball without increasing the cost, which
    makes the infimum a finite LP: minimise the total weighted l1 mass of
    the left coefficient vectors, one per right-ball vertex, subject to
    reproducing u.
    """
    verts = list(b.ball_extreme_points())
    n, m = a.dim, b.dim
    if n * m == 0:
        return ZERO
    k = len(verts)
    # variables: c[t][i] split into +/- parts, t over vertices, i over a-basis
    nv = 2 * k * n
    cost = []
    for _ in range(2):
        for _t in range(k):
            cost.extend(a.weights)
    rows = []
    rhs = []
    for i in range(n):
        for j in range(m):
            row = [ZERO] * nv
            for t in range(k):
                coeff = verts[t][j]
                if coeff != 0:
                    row[t * n + i] = coeff
                    row[k * n + t * n + i] = -coeff
            rows.append(row)
            rhs.append(u[i * m + j])
    value, _ = exactla.simplex_min(cost, rows, rhs)
    return value


# ---------------------------------------------------------------------------
# quotients (metric surjections from SUM spaces)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientSpace:
    """A quotient A / span(relations) of a SUM space.

    `space` is a weighted presentation on a complement basis, exact on
    basis rays; `class_norm` is the true quotient norm (an LP over the
    relation span), and the operator-norm helpers below use the metric
    surjection A -> A/S so that isometry claims about quotients are
    decided against the true norm, not the presentation.
    """

    ambient: FinBanSpace
    relations: tuple[Vector, ...]
    space: FinBanSpace
    projection: LinMap       # ambient -> space (coordinates mod relations)
    section: LinMap          # space -> ambient (complement basis inclusion)
    _row_space: tuple[Vector, ...] = field(repr=False, default=())

    def class_norm(self, ambient_vector: Sequence[Fraction]) -> Fraction:
        """True quotient norm of the class of an ambient vector."""
        if not self._row_space:
            return self.ambient.norm(ambient_vector)
        return exactla.min_weighted_l1_over_affine(
            self.ambient.weights, list(ambient_vector), [list(r) for r in self._row_space])

    def norm(self, v: Sequence[Fraction]) -> Fraction:
        """True quotient norm of a presentation vector."""
        return self.class_norm(self.section(v))

    def projection_norm(self) -> Fraction:
        """Norm of the projection against the true quotient norm (<= 1)."""
        best = ZERO
        for j in range(self.ambient.dim):
            val = self.class_norm(self.ambient.basis_vector(j)) / self.ambient.weights[j]
            if val > best:
                best = val
        return best

    def norm_of_map_from(self, t: LinMap) -> Fraction:
        """||T|| for T : quotient -> B, via T o projection (the quotient
        ball is the image of the ambient ball)."""
        if t.source != self.space:
            raise InvalidModel("map must start at the quotient presentation")
        return operator_norm(t @ self.projection)

    def norm_of_map_into(self, t: LinMap) -> Fraction:
        """||T|| for T : B -> quotient (B a SUM space), using the true
        quotient norm on the columns."""
        if t.target != self.space:
            raise InvalidModel("map must land in the quotient presentation")
        if t.source.flavor is not Flavor.SUM:
            raise FlavorMismatch("norms into a quotient are computed from SUM sources")
        best = ZERO
        for j in range(t.source.dim):
            val = self.norm(t.column(j)) / t.source.weights[j]
            if val > best:
                best = val
        return best

    def iso_isometric(self, forward: LinMap, backward: LinMap) -> bool:
        """Is (forward, backward) an isometric isomorphism between the
        quotient (true norm) and a SUM space?"""
        if not (backward @ forward).is_identity() or not (forward @ backward).is_identity():
            return False
        return self.norm_of_map_from(forward) <= 1 and self.norm_of_map_into(backward) <= 1


def quotient(a: FinBanSpace, span_vectors: Sequence[Sequence[Fraction]],
             label: str = "q") -> QuotientSpace:
    """A / span(span_vectors) with LP quotient norms.

    The presentation basis is the set of ambient coordinates that are
    free in the reduced row form of the span; spanning everything gives
    the zero space.
    """
    if a.flavor is not Flavor.SUM:
        raise FlavorMismatch("quotients are taken of SUM spaces")
    rows = [list(v) for v in span_vectors if any(x != 0 for x in v)]
    for v in rows:
        if len(v) != a.dim:
            raise InvalidModel("relation vector has the wrong length")
    red, pivots = exactla.rref(rows)
    red = [tuple(r) for r in red[:len(pivots)]]
    free = [j for j in range(a.dim) if j not in pivots]

    def reduce_vector(v: Sequence[Fraction]) -> Vector:
        work = list(v)
        for row, c in zip(red, pivots):
            coeff = work[c]
            if coeff != 0:
                for j in range(a.dim):
                    if row[j] != 0:
                        work[j] -= coeff * row[j]
        return tuple(work[j] for j in free)

    row_space = tuple(red)
    # exact norms of the basis rays give the presentation weights
    weights = []
    for j in free:
        w = exactla.min_weighted_l1_over_affine(
            a.weights, list(basis_vec(a.dim, j)), [list(r) for r in row_space]) \
            if row_space else a.weights[j]
        weights.append(w)
    space = FinBanSpace(
        tuple(f"{label}[{a.basis[j]}]" for j in free), tuple(weights), Flavor.SUM)
    proj_cols = [reduce_vector(basis_vec(a.dim, j)) for j in range(a.dim)]
    projection = LinMap.from_columns(a, space, proj_cols)
    sec_cols = [basis_vec(a.dim, j) for j in free]
    section = LinMap.from_columns(space, a, sec_cols)
    return QuotientSpace(a, tuple(tuple(r) for r in rows), space, projection,
                         section, row_space)


# ---------------------------------------------------------------------------
# thin index categories, bifunctors, coends and ends
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FinPoset:
    """A finite poset presented by objects and generating arrows; used as
    the index of (co)ends.  Thinness keeps functoriality decidable."""

    objects: tuple[str, ...]
    arrows: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        if len(set(self.objects)) != len(self.objects):
            raise InvalidModel("duplicate objects")
        for s, t in self.arrows:
            if s not in self.objects or t not in self.objects:
                raise InvalidModel("arrow endpoint is not an object")
            if s == t:
                raise InvalidModel("identity arrows are implicit")
        if any(self.leq(a, b) and self.leq(b, a) and a != b
               for a in self.objects for b in self.objects):
            raise InvalidModel("the generating arrows create a cycle")

    def leq(self, a: str, b: str) -> bool:
        if a == b:
            return True
        seen = {a}
        frontier = [a]
        while frontier:
            x = frontier.pop()
            for s, t in self.arrows:
                if s == x and t not in seen:
                    if t == b:
                        return True
                    seen.add(t)
                    frontier.append(t)
        return False

    def paths(self, a: str, b: str) -> list[tuple[tuple[str, str], ...]]:
        """All generating-arrow paths a -> b (empty path when a == b)."""
        if a == b:
            return [()]
        out = []
        for s, t in self.arrows:
            if s == a:
                for rest in self.paths(t, b):
                    out.append(((s, t),) + rest)
        return out

    @staticmethod
    def discrete(objects: Sequence[str]) -> "FinPoset":
        return FinPoset(tuple(objects), ())

    @staticmethod
    def chain(objects: Sequence[str]) -> "FinPoset":
        arrows = tuple((objects[i], objects[i + 1]) for i in range(len(objects) - 1))
        return FinPoset(tuple(objects), arrows)


class BifunctorData:
    """F : M^op x M -> spaces on a thin index M.

    space(x, y) gives F(x, y); for a generating arrow f = (a, b),
    left(f, y) : F(b, y) -> F(a, y) is the contravariant action and
    right(x, f) : F(x, a) -> F(x, b) the covariant one.  `validate`
    checks path independence of both actions and their interchange and
    raises NotAFunctor on any mismatch.
    """

    def __init__(self, index: FinPoset,
                 space: Callable[[str, str], FinBanSpace],
                 left: Callable[[tuple[str, str], str], LinMap],
                 right: Callable[[str, tuple[str, str]], LinMap]):
        self.index = index
        self.space = space
        self.left = left
        self.right = right

    def left_path(self, path, y: str) -> LinMap:
        """Composite contravariant action along a path a -> b, as a map
        F(b, y) -> F(a, y)."""
        if not path:
            raise InvalidModel("empty path has no endpoints here")
        out = self.left(path[-1], y)
        for f in reversed(path[:-1]):
            out = self.left(f, y) @ out
        return out

    def right_path(self, x: str, path) -> LinMap:
        if not path:
            raise InvalidModel("empty path has no endpoints here")
        out = self.right(x, path[0])
        for f in path[1:]:
            out = self.right(x, f) @ out
        return out

    def validate(self) -> None:
        objs = self.index.objects
        for f in self.index.arrows:
            a, b = f
            for y in objs:
                lm = self.left(f, y)
                if lm.source != self.space(b, y) or lm.target != self.space(a, y):
                    raise NotAFunctor("left action has wrong endpoints")
            for x in objs:
                rm = self.right(x, f)
                if rm.source != self.space(x, a) or rm.target != self.space(x, b):
                    raise NotAFunctor("right action has wrong endpoints")
        for a in objs:
            for b in objs:
                if a == b or not self.index.leq(a, b):
                    continue
                paths = self.index.paths(a, b)
                for y in objs:
                    maps = [self.left_path(p, y).matrix for p in paths if p]
                    if any(m != maps[0] for m in maps):
                        raise NotAFunctor("contravariant action is path dependent")
                for x in objs:
                    maps = [self.right_path(x, p).matrix for p in paths if p]
                    if any(m != maps[0] for m in maps):
                        raise NotAFunctor("covariant action is path dependent")
        for f in self.index.arrows:
            for g in self.index.arrows:
                a, b = f
                c, d = g
                # F(f, g) : F(b, c) -> F(a, d), both evaluation orders
                first = self.right(a, g) @ self.left(f, c)
                second = self.left(f, d) @ self.right(b, g)
                if first.matrix != second.matrix:
                    raise NotAFunctor("left and right actions do not interchange")


@dataclass
class CoendResult:
    """Coend of a bifunctor: the coequalizer of the two actions, realised
    as a quotient of the diagonal direct sum."""

    index: FinPoset
    bifunctor: BifunctorData
    diagonal: DirectSum
    quotient: QuotientSpace
    wedges: dict[str, LinMap]

    @property
    def space(self) -> FinBanSpace:
        return self.quotient.space

    def check_wedge(self) -> bool:
        """The universal cowedge identifies both actions of every arrow."""
        for f in self.index.arrows:
            a, b = f
            via_a = self.wedges[a] @ self.bifunctor.left(f, a)
            via_b = self.wedges[b] @ self.bifunctor.right(b, f)
            if via_a.matrix != via_b.matrix:
                return False
        return True


def coend(bif: BifunctorData, label: str = "coend") -> CoendResult:
    """Coequalizer of  (+)_{f: a->b} F(b,a)  =>  (+)_a F(a,a).

    Relations along composites follow from those along generators once
    functoriality holds, so generating arrows suffice.
    """
    bif.validate()
    objs = bif.index.objects
    diag = direct_sum([bif.space(a, a) for a in objs], tags=list(objs))
    relations: list[Vector] = []
    for f in bif.index.arrows:
        a, b = f
        fa = bif.left(f, a)      # F(b,a) -> F(a,a)
        fb = bif.right(b, f)     # F(b,a) -> F(b,b)
        src = bif.space(b, a)
        ia = objs.index(a)
        ib = objs.index(b)
        for k in range(src.dim):
            z = src.basis_vector(k)
            rel = vec_sub(diag.injections[ia](fa(z)), diag.injections[ib](fb(z)))
            relations.append(rel)
    q = quotient(diag.space, relations, label=label)
    wedges = {a: q.projection @ diag.injections[i] for i, a in enumerate(objs)}
    return CoendResult(bif.index, bif, diag, q, wedges)


@dataclass(frozen=True)
class EndResult:
    """End of a bifunctor: the equalizer inside the diagonal product.

    `vectors` are product-coordinate representatives of the basis; the
    presentation carries nominal unit weights except in the unconstrained
    (discrete) case, where the honest product space is returned.
    """

    index: FinPoset
    diagonal: DirectSum
    space: FinBanSpace
    vectors: tuple[Vector, ...]
    inclusion: LinMap


def end(bif: BifunctorData, label: str = "end") -> EndResult:
    bif.validate()
    objs = bif.index.objects
    parts = [bif.space(a, a) for a in objs]
    sup_parts = []
    for p in parts:
        if p.flavor is Flavor.SUM:
            raise FlavorMismatch("ends are taken in product (SUP) spaces")
        sup_parts.append(p)
    diag = direct_sum(sup_parts, tags=list(objs))
    constraints: list[list[Fraction]] = []
    for f in bif.index.arrows:
        a, b = f
        ra = bif.right(a, f)    # F(a,a) -> F(a,b)
        lb = bif.left(f, b)     # F(b,b) -> F(a,b)
        ia, ib = objs.index(a), objs.index(b)
        for r in range(ra.target.dim):
            row = [ZERO] * diag.space.dim
            for j in range(ra.source.dim):
                row[diag.offsets[ia] + j] += ra.matrix[r][j]
            for j in range(lb.source.dim):
                row[diag.offsets[ib] + j] -= lb.matrix[r][j]
            constraints.append(row)
    if not constraints:
        return EndResult(bif.index, diag, diag.space,
                         tuple(diag.space.basis_vector(i) for i in range(diag.space.dim)),
                         LinMap.identity(diag.space))
    basis = exactla.nullspace(constraints)
    space = FinBanSpace(tuple(f"{label}{i}" for i in range(len(basis))),
                        (ONE,) * len(basis), Flavor.SUP)
    inclusion = LinMap.from_columns(space, diag.space, [tuple(v) for v in basis])
    return EndResult(bif.index, diag, space, tuple(tuple(v) for v in basis), inclusion)
