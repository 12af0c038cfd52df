"""Sheaves and cosheaves on a finite Boolean algebra, for the topology
whose covers are finite partitions.

A precosheaf assigns a SUM space to every element and an extension map
to every inclusion; it is a cosheaf when, for each partition, the
mediated map from the direct sum of the blocks is an isometric
isomorphism.  On a finite algebra binary partitions generate all of
them, so the checker works on binary splits with an exhaustive mode as
cross-validation.

Cosheaves carry a derived spectral measure: for each element E the
partition {E, ~E} makes the mediated map invertible, the projection
p_{top,E} is the unique solution of  p o ext = id, p o ext' = 0,  and
P_E = ext_{E,top} o p_{top,E} is an idempotent on the total space.  The
induced action of simple elements f |-> sum k_n P_{E_n} is a unital
multiplicative algebra map whose operator norm is the sup norm of f.

Presheaves are the dual picture (SUP spaces, restrictions, product
condition); characteristic presheaves and the hom solver live here too,
as do cosheafification, the bounded-variation cosheaf and Isbell
conjugation.

Solution spaces produced by the hom solvers (sheaf_hom, Isbell values)
are presented on nullspace bases with nominal unit weights; their norms
are not part of any contract here, only their dimensions and the linear
structure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .boolalg import BoolAlg, partitions_of
from .errors import (AlgebraMismatch, InvalidModel, NotACosheaf, NotAFunctor,
                     SupportError)
from . import exactla
from .exactla import ONE, ZERO
from .finban import (DirectSum, FinBanSpace, Flavor, LinMap, Vector,
                     direct_sum, operator_norm, sup_space, zero_space)
from .measures import MeasureAlgebra, VectorMeasure
from .simple import SimpleElement, linf_norm


def _covering_pairs(omega: BoolAlg):
    """(small, big, atom index) for big = small plus one atom."""
    for e in omega.elements():
        for i in range(omega.n):
            if not e >> i & 1:
                yield e, e | (1 << i), i


# ---------------------------------------------------------------------------
# precosheaves
# ---------------------------------------------------------------------------

@dataclass
class PreCosheaf:
    """Covariant assignment with extension maps, stored on covering pairs."""

    algebra: BoolAlg
    spaces: dict[int, FinBanSpace]
    cover_maps: dict[tuple[int, int], LinMap]

    def space(self, e: int) -> FinBanSpace:
        return self.spaces[self.algebra.check_element(e)]

    def extension(self, small: int, big: int) -> LinMap:
        """The structure map for small <= big, composed along a canonical
        atom chain (path independence is validated at construction)."""
        if not self.algebra.leq(small, big):
            raise InvalidModel("extension needs small <= big")
        out = LinMap.identity(self.spaces[small])
        cur = small
        for i in self.algebra.atom_indices(big & ~small):
            nxt = cur | (1 << i)
            out = self.cover_maps[(cur, nxt)] @ out
            cur = nxt
        return out


@dataclass
class PreSheaf:
    """Contravariant assignment with restriction maps on covering pairs."""

    algebra: BoolAlg
    spaces: dict[int, FinBanSpace]
    cover_maps: dict[tuple[int, int], LinMap]  # (small, big): space(big) -> space(small)

    def space(self, e: int) -> FinBanSpace:
        return self.spaces[self.algebra.check_element(e)]

    def restriction(self, big: int, small: int) -> LinMap:
        if not self.algebra.leq(small, big):
            raise InvalidModel("restriction needs small <= big")
        out = LinMap.identity(self.spaces[big])
        cur = big
        for i in reversed(self.algebra.atom_indices(big & ~small)):
            nxt = cur & ~(1 << i)
            out = self.cover_maps[(nxt, cur)] @ out
            cur = nxt
        return out


def _validate_functorial(omega: BoolAlg, spaces, cover_maps, covariant: bool,
                         contractive: bool) -> None:
    for e in omega.elements():
        if e not in spaces:
            raise InvalidModel("a space is missing for some element")
    for small, big, _ in _covering_pairs(omega):
        m = cover_maps.get((small, big))
        if m is None:
            raise InvalidModel("a structure map is missing for a covering pair")
        src, tgt = (spaces[small], spaces[big]) if covariant else (spaces[big], spaces[small])
        if m.source != src or m.target != tgt:
            raise NotAFunctor("structure map endpoints do not match the spaces")
        if contractive and operator_norm(m) > 1:
            raise InvalidModel("structure maps must be contractive")
    # diamond commutation gives path independence on the cube lattice
    for e in omega.elements():
        outside = [i for i in range(omega.n) if not e >> i & 1]
        for i, j in itertools.combinations(outside, 2):
            a, b = e | (1 << i), e | (1 << j)
            top = e | (1 << i) | (1 << j)
            if covariant:
                left = cover_maps[(a, top)] @ cover_maps[(e, a)]
                right = cover_maps[(b, top)] @ cover_maps[(e, b)]
            else:
                left = cover_maps[(e, a)] @ cover_maps[(a, top)]
                right = cover_maps[(e, b)] @ cover_maps[(b, top)]
            if left.matrix != right.matrix:
                raise NotAFunctor("structure maps are path dependent")


def make_precosheaf(omega: BoolAlg, spaces, cover_maps,
                    contractive: bool = True) -> PreCosheaf:
    _validate_functorial(omega, spaces, cover_maps, True, contractive)
    return PreCosheaf(omega, dict(spaces), dict(cover_maps))


def make_presheaf(omega: BoolAlg, spaces, cover_maps,
                  contractive: bool = True) -> PreSheaf:
    _validate_functorial(omega, spaces, cover_maps, False, contractive)
    return PreSheaf(omega, dict(spaces), dict(cover_maps))


def from_atom_spaces(omega: BoolAlg,
                     atom_spaces: Mapping[str, FinBanSpace]) -> PreCosheaf:
    """The canonical cosheaf with the given atom fibers: each value is the
    direct sum of the atom fibers below, extensions are block inclusions.
    This is one direction of the discrete density result: atom data
    extends to a cosheaf by sums."""
    for a in omega.atoms:
        if a not in atom_spaces:
            raise InvalidModel(f"missing atom space for {a!r}")
        if atom_spaces[a].flavor is not Flavor.SUM:
            raise InvalidModel("cosheaf fibers carry the SUM flavor")
    sums: dict[int, DirectSum] = {}
    spaces: dict[int, FinBanSpace] = {}
    for e in omega.elements():
        atoms = omega.atoms_below(e)
        if atoms:
            ds = direct_sum([atom_spaces[a] for a in atoms], tags=list(atoms))
            sums[e] = ds
            spaces[e] = ds.space
        else:
            spaces[e] = zero_space(Flavor.SUM)
    cover_maps = {}
    for small, big, _ in _covering_pairs(omega):
        small_atoms = omega.atoms_below(small)
        big_ds = sums[big]
        cols = []
        for pos, a in enumerate(omega.atoms_below(big)):
            if a in small_atoms:
                inj = big_ds.injections[pos]
                cols.extend(inj.column(j) for j in range(atom_spaces[a].dim))
        cover_maps[(small, big)] = LinMap.from_columns(
            spaces[small], spaces[big], cols)
    return make_precosheaf(omega, spaces, cover_maps)


def restrict_to_atoms(mu: PreCosheaf) -> dict[str, FinBanSpace]:
    """The other direction of the discrete density result."""
    return {a: mu.space(mu.algebra.atom_mask(a)) for a in mu.algebra.atoms}


def l1_cosheaf(mu: MeasureAlgebra) -> PreCosheaf:
    """E |-> weighted l1 on the positive-measure atoms below E."""
    atom_spaces = {}
    for i, a in enumerate(mu.algebra.atoms):
        w = mu.atom_value(i)
        if w > 0:
            atom_spaces[a] = FinBanSpace((a,), (w,), Flavor.SUM)
        else:
            atom_spaces[a] = zero_space(Flavor.SUM)
    return from_atom_spaces(mu.algebra, atom_spaces)


def constant_precosheaf(omega: BoolAlg, b: FinBanSpace) -> PreCosheaf:
    """E |-> B with identity extensions (fails the partition condition on
    any algebra with two or more atoms)."""
    spaces = {e: b for e in omega.elements()}
    cover_maps = {(s, g): LinMap.identity(b) for s, g, _ in _covering_pairs(omega)}
    return make_precosheaf(omega, spaces, cover_maps)


def zero_precosheaf(omega: BoolAlg) -> PreCosheaf:
    return from_atom_spaces(omega, {a: zero_space(Flavor.SUM) for a in omega.atoms})


# ---------------------------------------------------------------------------
# the (co)sheaf condition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    ok: bool
    failing_element: Optional[int] = None
    failing_blocks: Optional[tuple[int, ...]] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def partition_map(mu: PreCosheaf, e: int, blocks: Sequence[int]) -> tuple[LinMap, DirectSum]:
    """The mediated map (+)_F mu(F) -> mu(E) of a partition."""
    ds = direct_sum([mu.space(f) for f in blocks],
                    tags=[mu.algebra.describe(f) for f in blocks])
    cols = []
    for f in blocks:
        ext = mu.extension(f, e)
        cols.extend(ext.column(j) for j in range(mu.space(f).dim))
    return LinMap.from_columns(ds.space, mu.space(e), cols), ds


def _is_isometric_iso(m: LinMap) -> bool:
    if m.source.dim != m.target.dim:
        return False
    inv = exactla.invert(m.matrix) if m.source.dim else []
    if inv is None:
        return False
    back = LinMap(m.target, m.source, tuple(tuple(r) for r in inv))
    return operator_norm(m) <= 1 and operator_norm(back) <= 1


def _binary_splits(omega: BoolAlg, e: int):
    idx = omega.atom_indices(e)
    if len(idx) < 2:
        return
    seen = set()
    for r in range(1, len(idx)):
        for picked in itertools.combinations(idx, r):
            f = 0
            for i in picked:
                f |= 1 << i
            if f in seen or (e & ~f) in seen:
                continue
            seen.add(f)
            yield f, e & ~f


def is_cosheaf(mu: PreCosheaf, exhaustive: bool = False) -> Verdict:
    """Partition condition: every mediated map is an isometric isomorphism.

    Binary splits imply the general case by induction; `exhaustive`
    checks every partition anyway (guarding the induction itself).
    The empty partition covers bottom, so the bottom value must be zero;
    split counterexamples are reported in preference to that degenerate one.
    """
    omega = mu.algebra
    for e in omega.nonzero_elements():
        if exhaustive:
            candidates = (tuple(p.blocks) for p in partitions_of(omega, e))
        else:
            candidates = _binary_splits(omega, e)
        for blocks in candidates:
            if len(blocks) < 2:
                continue
            eps, _ = partition_map(mu, e, blocks)
            if not _is_isometric_iso(eps):
                return Verdict(False, e, tuple(blocks),
                               "mediated partition map is not an isometric isomorphism")
    if mu.space(0).dim != 0:
        return Verdict(False, 0, (), "the bottom value must be the zero space")
    return Verdict(True)


def restriction_cone_map(xi: PreSheaf, e: int, blocks: Sequence[int]) -> LinMap:
    """The canonical map xi(E) -> prod_F xi(F)."""
    ds = direct_sum([xi.space(f) for f in blocks],
                    tags=[xi.algebra.describe(f) for f in blocks])
    rows: list[tuple[Fraction, ...]] = []
    for f in blocks:
        rows.extend(xi.restriction(e, f).matrix)
    return LinMap(xi.space(e), ds.space, tuple(rows))


def is_sheaf(xi: PreSheaf, exhaustive: bool = False) -> Verdict:
    """Product condition, dual to is_cosheaf; the top restriction cone
    over each partition must be an isometric isomorphism."""
    omega = xi.algebra
    for e in omega.nonzero_elements():
        if exhaustive:
            candidates = (tuple(p.blocks) for p in partitions_of(omega, e))
        else:
            candidates = _binary_splits(omega, e)
        for blocks in candidates:
            if len(blocks) < 2:
                continue
            cone = restriction_cone_map(xi, e, blocks)
            if not _is_isometric_iso(cone):
                return Verdict(False, e, tuple(blocks),
                               "restriction cone is not an isometric isomorphism")
    if xi.space(0).dim != 0:
        return Verdict(False, 0, (), "the bottom value must be the zero space")
    return Verdict(True)


# ---------------------------------------------------------------------------
# spectral measure of a cosheaf
# ---------------------------------------------------------------------------

def cosheaf_projection(mu: PreCosheaf, e: int, f: int) -> LinMap:
    """For f <= e, the unique p : mu(e) -> mu(f) with p o ext_{f,e} = id
    and p o ext_{e-f,e} = 0; solved from the binary split, so it fails
    loudly (NotACosheaf) when the split map is singular."""
    omega = mu.algebra
    if not omega.leq(f, e):
        raise InvalidModel("projection needs f <= e")
    if f == e:
        return LinMap.identity(mu.space(e))
    if f == 0:
        return LinMap.zero(mu.space(e), mu.space(0))
    eps, _ = partition_map(mu, e, [f, e & ~f])
    if eps.source.dim != eps.target.dim:
        raise NotACosheaf("partition map is not square")
    inv = exactla.invert(eps.matrix)
    if inv is None:
        raise NotACosheaf("partition map is singular")
    rows = tuple(tuple(r) for r in inv[: mu.space(f).dim])
    return LinMap(mu.space(e), mu.space(f), rows)


@dataclass
class SpectralData:
    """The projection-valued measure of a cosheaf on its total value."""

    cosheaf: PreCosheaf
    carrier: FinBanSpace
    projections: dict[int, LinMap]

    def action(self, f: SimpleElement) -> LinMap:
        """sum k_n P_{E_n} over the canonical form of f."""
        if f.algebra != self.cosheaf.algebra:
            raise AlgebraMismatch("element lives on a different algebra")
        out = LinMap.zero(self.carrier, self.carrier)
        for k, e in f.blocks():
            out = out.add(self.projections[e].scale(k))
        return out

    def satisfies_laws(self, exhaustive: Optional[bool] = None) -> bool:
        """Unit, idempotence, meet-multiplicativity and disjoint additivity.

        The exhaustive mode checks every pair of elements; the reduced
        mode checks mutual orthogonality of the atom projections plus
        P_E = sum of the atom projections below E, which implies the
        pairwise laws by expanding both sides over atoms.
        """
        omega = self.cosheaf.algebra
        p = self.projections
        if exhaustive is None:
            exhaustive = omega.n <= 4
        if not p[omega.top].is_identity() or not p[0].is_zero():
            return False
        if exhaustive:
            for e in omega.elements():
                for f in omega.elements():
                    if (p[e] @ p[f]).matrix != p[e & f].matrix:
                        return False
                    if e & f == 0 and p[e].add(p[f]).matrix != p[e | f].matrix:
                        return False
            return True
        atoms = [1 << i for i in range(omega.n)]
        for a in atoms:
            for b in atoms:
                want = p[a] if a == b else LinMap.zero(self.carrier, self.carrier)
                if (p[a] @ p[b]).matrix != want.matrix:
                    return False
        for e in omega.elements():
            total = LinMap.zero(self.carrier, self.carrier)
            for i in omega.atom_indices(e):
                total = total.add(p[1 << i])
            if total.matrix != p[e].matrix:
                return False
        return True

    def action_is_algebra_map(self, samples: Iterable[SimpleElement]) -> bool:
        from .simple import multiply
        pool = list(samples)
        for f in pool:
            for g in pool:
                if (self.action(f) @ self.action(g)).matrix != self.action(multiply(f, g)).matrix:
                    return False
        return True

    def action_norm_matches(self, f: SimpleElement) -> bool:
        return operator_norm(self.action(f)) == linf_norm(f)


def spectral_measure(mu: PreCosheaf) -> SpectralData:
    omega = mu.algebra
    top = omega.top
    projections: dict[int, LinMap] = {}
    for e in omega.elements():
        p = cosheaf_projection(mu, top, e)
        projections[e] = mu.extension(e, top) @ p
    return SpectralData(mu, mu.space(top), projections)


# ---------------------------------------------------------------------------
# integration of simple morphisms against a cosheaf
# ---------------------------------------------------------------------------

def integrate_simple_morphism(f: SimpleElement, mu: PreCosheaf,
                              source: int, target: int) -> LinMap:
    """The map mu(source) -> mu(target) induced by a simple element
    supported in source & target:  sum_n k_n ext_{E_n,target} o p_{source,E_n}.
    """
    omega = mu.algebra
    if f.algebra != omega:
        raise AlgebraMismatch("element lives on a different algebra")
    omega.check_element(source)
    omega.check_element(target)
    if f.support() & ~(source & target):
        raise SupportError("simple morphism supported outside source & target")
    out = LinMap.zero(mu.space(source), mu.space(target))
    for k, block in f.blocks():
        piece = mu.extension(block, target) @ cosheaf_projection(mu, source, block)
        out = out.add(piece.scale(k))
    return out


def compose_simple_morphisms(g: SimpleElement, f: SimpleElement) -> SimpleElement:
    """Composition of simple morphisms is the pointwise product (supported
    in the middle object automatically)."""
    from .simple import multiply
    return multiply(g, f)


# ---------------------------------------------------------------------------
# characteristic presheaves and the hom solver
# ---------------------------------------------------------------------------

def characteristic_sheaf(omega: BoolAlg, e: int) -> PreSheaf:
    """F |-> sup-normed functions on the atoms below E & F, restrictions
    dropping coordinates."""
    omega.check_element(e)
    spaces = {f: sup_space(omega.atoms_below(e & f)) for f in omega.elements()}
    cover_maps = {}
    for small, big, _ in _covering_pairs(omega):
        big_atoms = omega.atoms_below(e & big)
        small_atoms = set(omega.atoms_below(e & small))
        rows = tuple(
            tuple(ONE if b == a else ZERO for b in big_atoms)
            for a in big_atoms if a in small_atoms)
        cover_maps[(small, big)] = LinMap(spaces[big], spaces[small], rows)
    return make_presheaf(omega, spaces, cover_maps)


@dataclass
class HomSolution:
    """Solutions of the naturality constraints between two (co)presheaves,
    on a nullspace basis.  `offsets[e]` locates the component matrix of
    element e inside a flattened coordinate vector."""

    dim: int
    basis: tuple[Vector, ...]
    offsets: dict[int, int]
    shapes: dict[int, tuple[int, int]]

    def component(self, coords: Sequence[Fraction], e: int) -> list[list[Fraction]]:
        rows, cols = self.shapes[e]
        off = self.offsets[e]
        return [[coords[off + r * cols + c] for c in range(cols)] for r in range(rows)]

    def components_of_basis(self, k: int, e: int) -> list[list[Fraction]]:
        return self.component(self.basis[k], e)


def _hom_layout(omega: BoolAlg, src_space, tgt_space):
    offsets = {}
    shapes = {}
    pos = 0
    for e in omega.elements():
        rows, cols = tgt_space(e).dim, src_space(e).dim
        offsets[e] = pos
        shapes[e] = (rows, cols)
        pos += rows * cols
    return offsets, shapes, pos


def _entry(coeffs, offsets, shapes, e, r, c):
    rows, cols = shapes[e]
    return offsets[e] + r * cols + c


def sheaf_hom(xi: PreSheaf, zeta: PreSheaf) -> HomSolution:
    """Natural maps xi -> zeta: per element a matrix, commuting with the
    restrictions; solved exactly on covering pairs."""
    if xi.algebra != zeta.algebra:
        raise AlgebraMismatch("presheaves on different algebras")
    omega = xi.algebra
    offsets, shapes, total = _hom_layout(omega, xi.space, zeta.space)
    rows: list[list[Fraction]] = []
    for small, big, _ in _covering_pairs(omega):
        rx = xi.cover_maps[(small, big)]       # xi(big) -> xi(small)
        rz = zeta.cover_maps[(small, big)]     # zeta(big) -> zeta(small)
        # constraint: rz o tau_big = tau_small o rx
        for r in range(zeta.space(small).dim):
            for c in range(xi.space(big).dim):
                row = [ZERO] * total
                for m in range(zeta.space(big).dim):
                    row[_entry(None, offsets, shapes, big, m, c)] += rz.matrix[r][m]
                for m in range(xi.space(small).dim):
                    row[_entry(None, offsets, shapes, small, r, m)] -= rx.matrix[m][c]
                rows.append(row)
    basis = exactla.nullspace(rows) if rows else exactla.identity(total)
    return HomSolution(len(basis), tuple(tuple(v) for v in basis), offsets, shapes)


def cosheaf_hom(mu: PreCosheaf, nu: PreCosheaf) -> HomSolution:
    """Natural maps mu -> nu (commuting with extensions)."""
    if mu.algebra != nu.algebra:
        raise AlgebraMismatch("precosheaves on different algebras")
    omega = mu.algebra
    offsets, shapes, total = _hom_layout(omega, mu.space, nu.space)
    rows: list[list[Fraction]] = []
    for small, big, _ in _covering_pairs(omega):
        em = mu.cover_maps[(small, big)]       # mu(small) -> mu(big)
        en = nu.cover_maps[(small, big)]       # nu(small) -> nu(big)
        # constraint: tau_big o em = en o tau_small
        for r in range(nu.space(big).dim):
            for c in range(mu.space(small).dim):
                row = [ZERO] * total
                for m in range(mu.space(big).dim):
                    row[_entry(None, offsets, shapes, big, r, m)] += em.matrix[m][c]
                for m in range(nu.space(small).dim):
                    row[_entry(None, offsets, shapes, small, m, c)] -= en.matrix[r][m]
                rows.append(row)
    basis = exactla.nullspace(rows) if rows else exactla.identity(total)
    return HomSolution(len(basis), tuple(tuple(v) for v in basis), offsets, shapes)


# ---------------------------------------------------------------------------
# precosheaf maps
# ---------------------------------------------------------------------------

@dataclass
class PrecosheafMap:
    source: PreCosheaf
    target: PreCosheaf
    components: dict[int, LinMap]

    def check_natural(self) -> bool:
        for small, big, _ in _covering_pairs(self.source.algebra):
            lhs = self.components[big] @ self.source.cover_maps[(small, big)]
            rhs = self.target.cover_maps[(small, big)] @ self.components[small]
            if lhs.matrix != rhs.matrix:
                return False
        return True


def precosheaf_map(source: PreCosheaf, target: PreCosheaf,
                   components: Mapping[int, LinMap], check: bool = True) -> PrecosheafMap:
    if source.algebra != target.algebra:
        raise AlgebraMismatch("precosheaves on different algebras")
    out = PrecosheafMap(source, target, dict(components))
    if check and not out.check_natural():
        raise NotAFunctor("components do not commute with the extensions")
    return out


# ---------------------------------------------------------------------------
# cosheafification
# ---------------------------------------------------------------------------

@dataclass
class Cosheafification:
    cosheaf: PreCosheaf
    original: PreCosheaf
    counit: dict[int, LinMap]  # cosheafified(E) -> original(E)


def cosheafify(theta: PreCosheaf) -> Cosheafification:
    """The limit over partitions of the block sums collapses, at finite
    scale, to the value at the atomic partition, so the cosheafification
    is the canonical cosheaf on the atom fibers; the counit assembles the
    atom extensions."""
    omega = theta.algebra
    sheafified = from_atom_spaces(omega, restrict_to_atoms(theta))
    counit = {}
    for e in omega.elements():
        atoms = omega.atom_indices(e)
        cols = []
        for i in atoms:
            ext = theta.extension(1 << i, e)
            cols.extend(ext.column(j) for j in range(ext.source.dim))
        counit[e] = LinMap.from_columns(sheafified.space(e), theta.space(e), cols)
    return Cosheafification(sheafified, theta, counit)


def counit_is_natural(c: Cosheafification) -> bool:
    for small, big, _ in _covering_pairs(c.original.algebra):
        lhs = c.counit[big] @ c.cosheaf.cover_maps[(small, big)]
        rhs = c.original.cover_maps[(small, big)] @ c.counit[small]
        if lhs.matrix != rhs.matrix:
            return False
    return True


def factor_through_cosheafification(
        c: Cosheafification, tau: PrecosheafMap) -> PrecosheafMap:
    """Given a cosheaf nu and tau : nu -> theta, the unique lift
    nu -> cosheafify(theta) under the counit: assemble the atom
    components of tau after the cosheaf projections of nu."""
    nu = tau.source
    if tau.target is not c.original and tau.target != c.original:
        raise InvalidModel("tau must land in the cosheafified precosheaf's original")
    omega = nu.algebra
    components = {}
    for e in omega.elements():
        rows: list[tuple[Fraction, ...]] = []
        for i in omega.atom_indices(e):
            a = 1 << i
            piece = tau.components[a] @ cosheaf_projection(nu, e, a)
            rows.extend(piece.matrix)
        components[e] = LinMap(nu.space(e), c.cosheaf.space(e), tuple(rows))
    return precosheaf_map(nu, c.cosheaf, components)


def count_factorizations(c: Cosheafification, tau: PrecosheafMap) -> int:
    """Dimension count of the affine solution set of  counit o sigma = tau,
    sigma natural; 0 means the known lift is unique."""
    nu = tau.source
    omega = nu.algebra
    offsets, shapes, total = _hom_layout(omega, nu.space, c.cosheaf.space)
    rows: list[list[Fraction]] = []
    # naturality of sigma
    for small, big, _ in _covering_pairs(omega):
        em = nu.cover_maps[(small, big)]
        en = c.cosheaf.cover_maps[(small, big)]
        for r in range(c.cosheaf.space(big).dim):
            for col in range(nu.space(small).dim):
                row = [ZERO] * total
                for m in range(nu.space(big).dim):
                    row[_entry(None, offsets, shapes, big, r, m)] += em.matrix[m][col]
                for m in range(c.cosheaf.space(small).dim):
                    row[_entry(None, offsets, shapes, small, m, col)] -= en.matrix[r][m]
                rows.append(row)
    # counit o sigma = tau is affine; for uniqueness only the homogeneous
    # part matters: counit o sigma = 0
    for e in omega.elements():
        eps = c.counit[e]
        for r in range(c.original.space(e).dim):
            for col in range(nu.space(e).dim):
                row = [ZERO] * total
                for m in range(c.cosheaf.space(e).dim):
                    row[_entry(None, offsets, shapes, e, m, col)] += eps.matrix[r][m]
                rows.append(row)
    return len(exactla.nullspace(rows)) if rows else total


# ---------------------------------------------------------------------------
# bounded-variation cosheaf
# ---------------------------------------------------------------------------

def bva_cosheaf(omega: BoolAlg, b: FinBanSpace) -> PreCosheaf:
    """E |-> B-valued measures on the ideal below E, stored atomwise, with
    the total-variation norm; this is the canonical cosheaf whose atom
    fibers are all B, and the partition maps are weight-preserving basis
    bijections."""
    if b.flavor is not Flavor.SUM:
        raise InvalidModel("bva takes a SUM-flavor value space")
    return from_atom_spaces(omega, {a: b for a in omega.atoms})


def bva_vector(omega: BoolAlg, bva: PreCosheaf, e: int,
               nu: VectorMeasure) -> Vector:
    """Coordinates in bva(e) of a measure given atomwise on the ideal
    below e (atoms outside e must be null)."""
    target_dim = nu.target.dim
    out: list[Fraction] = []
    for i in range(omega.n):
        if e >> i & 1:
            out.extend(nu.atom_values[i])
        elif any(x != 0 for x in nu.atom_values[i]):
            raise SupportError("measure charges an atom outside the ideal")
    expected = bva.space(e).dim
    if len(out) != expected or (expected and target_dim * len(omega.atoms_below(e)) != expected):
        raise InvalidModel("value space does not match the bva fibers")
    return tuple(out)


def bva_evaluation(omega: BoolAlg, bva: PreCosheaf, e: int,
                   b: FinBanSpace) -> LinMap:
    """Evaluation at e: a measure on the ideal below e goes to its total
    value nu(e) = sum of its atom values."""
    cols = []
    n_atoms = len(omega.atoms_below(e))
    for _ in range(n_atoms):
        for j in range(b.dim):
            cols.append(b.basis_vector(j))
    return LinMap.from_columns(bva.space(e), b, cols)


def constant_universal_map(theta: PreCosheaf, tau: Mapping[int, LinMap],
                           b: FinBanSpace) -> PrecosheafMap:
    """For a cosheaf theta and a precosheaf map tau : theta -> constant B,
    the induced map into the bounded-variation cosheaf sends m in theta(E)
    to the measure  F |-> tau_F(p_{E,F} m),  stored atomwise."""
    omega = theta.algebra
    bva = bva_cosheaf(omega, b)
    components = {}
    for e in omega.elements():
        rows: list[tuple[Fraction, ...]] = []
        for i in omega.atom_indices(e):
            piece = tau[1 << i] @ cosheaf_projection(theta, e, 1 << i)
            rows.extend(piece.matrix)
        components[e] = LinMap(theta.space(e), bva.space(e), tuple(rows))
    return precosheaf_map(theta, bva, components)


# ---------------------------------------------------------------------------
# Isbell conjugation
# ---------------------------------------------------------------------------

def yoneda_presheaf(omega: BoolAlg, e: int) -> PreSheaf:
    """F |-> scalars when F <= e, zero otherwise."""
    line = sup_space(("1",))
    zero = zero_space(Flavor.SUP)
    spaces = {f: line if omega.leq(f, e) else zero for f in omega.elements()}
    cover_maps = {}
    for small, big, _ in _covering_pairs(omega):
        src, tgt = spaces[big], spaces[small]
        if src.dim and tgt.dim:
            cover_maps[(small, big)] = LinMap.identity(line)
        else:
            cover_maps[(small, big)] = LinMap.zero(src, tgt)
    return make_presheaf(omega, spaces, cover_maps)


def yoneda_precosheaf(omega: BoolAlg, e: int) -> PreCosheaf:
    """F |-> scalars when e <= F, zero otherwise."""
    from .finban import scalars as _scalars
    line = _scalars()
    zero = zero_space(Flavor.SUM)
    spaces = {f: line if omega.leq(e, f) else zero for f in omega.elements()}
    cover_maps = {}
    for small, big, _ in _covering_pairs(omega):
        src, tgt = spaces[small], spaces[big]
        if src.dim and tgt.dim:
            cover_maps[(small, big)] = LinMap.identity(line)
        else:
            cover_maps[(small, big)] = LinMap.zero(src, tgt)
    return make_precosheaf(omega, spaces, cover_maps, contractive=True)


def _solution_space(dim: int, tag: str, flavor: Flavor) -> FinBanSpace:
    return FinBanSpace(tuple(f"{tag}{i}" for i in range(dim)), (ONE,) * dim, flavor)


def _express_in_basis(basis: Sequence[Vector], vector: Sequence[Fraction]) -> Vector:
    """Coordinates of `vector` in the span of `basis` (exact; the vector
    must lie in the span)."""
    if not basis:
        if any(x != 0 for x in vector):
            raise InvalidModel("vector is outside the solution space")
        return ()
    cols = [list(b) for b in basis]
    a = [[cols[k][i] for k in range(len(basis))] for i in range(len(vector))]
    sol = exactla.solve_linear(a, list(vector))
    if sol is None:
        raise InvalidModel("vector is outside the solution space")
    return tuple(sol)


def isbell(xi: PreSheaf) -> PreCosheaf:
    """Left conjugate: E |-> natural maps from xi into the representable
    presheaf at E, with extensions given by enlarging the representable.
    Values are presented on nullspace bases with nominal weights."""
    omega = xi.algebra
    homs = {e: sheaf_hom(xi, yoneda_presheaf(omega, e)) for e in omega.elements()}
    spaces = {e: _solution_space(homs[e].dim, f"L[{omega.describe(e)}]", Flavor.SUM)
              for e in omega.elements()}
    cover_maps = {}
    for small, big, _ in _covering_pairs(omega):
        h_small, h_big = homs[small], homs[big]
        cols = []
        for k in range(h_small.dim):
            # push a solution for `small` to one for `big`: components agree
            # where the small representable is nonzero, vanish elsewhere
            total_big = sum(r * c for r, c in h_big.shapes.values())
            flat = [ZERO] * total_big
            for f in omega.elements():
                rows_small, cols_small = h_small.shapes[f]
                if rows_small == 0:
                    continue
                comp = h_small.components_of_basis(k, f)
                rows_big, cols_big = h_big.shapes[f]
                if rows_big != rows_small or cols_big != cols_small:
                    raise InvalidModel("representable components do not align")
                off = h_big.offsets[f]
                for r in range(rows_big):
                    for c in range(cols_big):
                        flat[off + r * cols_big + c] = comp[r][c]
            cols.append(_express_in_basis(h_big.basis, flat))
        cover_maps[(small, big)] = LinMap.from_columns(
            spaces[small], spaces[big], cols)
    return make_precosheaf(omega, spaces, cover_maps, contractive=False)


def isbell_adjoint(mu: PreCosheaf) -> PreSheaf:
    """Right conjugate: E |-> natural maps from mu into the corepresentable
    precosheaf at E."""
    omega = mu.algebra
    homs = {e: cosheaf_hom(mu, yoneda_precosheaf(omega, e)) for e in omega.elements()}
    spaces = {e: _solution_space(homs[e].dim, f"R[{omega.describe(e)}]", Flavor.SUP)
              for e in omega.elements()}
    cover_maps = {}
    for small, big, _ in _covering_pairs(omega):
        h_small, h_big = homs[small], homs[big]
        cols = []
        for k in range(h_big.dim):
            total_small = sum(r * c for r, c in h_small.shapes.values())
            flat = [ZERO] * total_small
            for f in omega.elements():
                rows_big, cols_big = h_big.shapes[f]
                if rows_big == 0:
                    continue
                comp = h_big.components_of_basis(k, f)
                rows_small, cols_small = h_small.shapes[f]
                if rows_small:
                    if rows_small != rows_big or cols_small != cols_big:
                        raise InvalidModel("corepresentable components do not align")
                    off = h_small.offsets[f]
                    for r in range(rows_small):
                        for c in range(cols_small):
                            flat[off + r * cols_small + c] = comp[r][c]
            cols.append(_express_in_basis(h_small.basis, flat))
        cover_maps[(small, big)] = LinMap.from_columns(
            spaces[big], spaces[small], cols)
    return make_presheaf(omega, spaces, cover_maps, contractive=False)


# ---------------------------------------------------------------------------
# seeded generators (tests and the command-line verifier)
# ---------------------------------------------------------------------------

def _monomial_twist(rng, space: FinBanSpace, tag: str):
    """An isometric relabelling of a SUM space: signed scaling plus a
    permutation, with the target weights forced by isometry."""
    d = space.dim
    perm = list(range(d))
    rng.shuffle(perm)
    coeff = [Fraction(rng.choice([1, -1]) * rng.randint(1, 3), rng.randint(1, 3))
             for _ in range(d)]
    new_weights = [ZERO] * d
    for i in range(d):
        new_weights[perm[i]] = space.weights[i] / abs(coeff[i])
    twisted = FinBanSpace(tuple(f"{tag}{k}" for k in range(d)),
                          tuple(new_weights), Flavor.SUM) if d else zero_space(Flavor.SUM)
    cols = []
    for i in range(d):
        v = [ZERO] * d
        v[perm[i]] = coeff[i]
        cols.append(tuple(v))
    fwd = LinMap.from_columns(space, twisted, cols)
    inv_cols = []
    for j in range(d):
        i = perm.index(j)
        v = [ZERO] * d
        v[i] = ONE / coeff[i]
        inv_cols.append(tuple(v))
    bwd = LinMap.from_columns(twisted, space, inv_cols)
    return twisted, fwd, bwd


def random_cosheaf(rng, omega: BoolAlg, max_dim: int = 2) -> PreCosheaf:
    """An honest random cosheaf: the canonical cosheaf on random atom
    fibers, conjugated elementwise by random isometries of weighted l1
    spaces (signed weight-matched relabellings are all of them)."""
    atom_spaces = {}
    for a in omega.atoms:
        d = rng.randint(1, max_dim)
        atom_spaces[a] = FinBanSpace(
            tuple(f"{a}{k}" for k in range(d)),
            tuple(Fraction(rng.randint(1, 3), rng.randint(1, 3)) for _ in range(d)),
            Flavor.SUM)
    canonical = from_atom_spaces(omega, atom_spaces)
    twists = {}
    for e in omega.elements():
        twists[e] = _monomial_twist(rng, canonical.space(e), f"v{e}_")
    spaces = {e: twists[e][0] for e in omega.elements()}
    cover_maps = {}
    for small, big, _ in _covering_pairs(omega):
        cover_maps[(small, big)] = (
            twists[big][1] @ canonical.cover_maps[(small, big)] @ twists[small][2])
    return make_precosheaf(omega, spaces, cover_maps)


def random_scaled_precosheaf(rng, omega: BoolAlg, max_dim: int = 2,
                             force_noncosheaf: bool = False) -> PreCosheaf:
    """A functorial, contractive precosheaf that is generically not a
    cosheaf: block inclusions damped per atom by factors that accumulate
    multiplicatively along inclusions."""
    atom_spaces = {}
    for a in omega.atoms:
        d = rng.randint(1, max_dim)
        atom_spaces[a] = FinBanSpace(
            tuple(f"{a}{k}" for k in range(d)),
            tuple(Fraction(rng.randint(1, 2), rng.randint(1, 2)) for _ in range(d)),
            Flavor.SUM)
    canonical = from_atom_spaces(omega, atom_spaces)
    choices = [ONE, ONE, Fraction(1, 2), Fraction(2, 3)]
    damp = {(a, b): rng.choice(choices)
            for a in omega.atoms for b in omega.atoms if a != b}
    if force_noncosheaf and omega.n >= 2 and all(
            v == 1 for v in damp.values()):
        damp[(omega.atoms[0], omega.atoms[1])] = Fraction(1, 2)

    def scale(atom: str, e: int) -> Fraction:
        s = ONE
        for b in omega.atoms_below(e):
            if b != atom:
                s *= damp[(atom, b)]
        return s

    spaces = {e: canonical.space(e) for e in omega.elements()}
    cover_maps = {}
    for small, big, new_i in _covering_pairs(omega):
        base = canonical.cover_maps[(small, big)]
        cols = []
        col_pos = 0
        for a in omega.atoms_below(small):
            factor = scale(a, big) / scale(a, small)
            for _ in range(atom_spaces[a].dim):
                cols.append(tuple(factor * x for x in base.column(col_pos)))
                col_pos += 1
        cover_maps[(small, big)] = LinMap.from_columns(
            spaces[small], spaces[big], cols)
    return make_precosheaf(omega, spaces, cover_maps)


def precosheaf_map_from_atoms(nu: PreCosheaf, theta: PreCosheaf,
                              atom_maps: Mapping[int, LinMap]) -> PrecosheafMap:
    """The natural map nu -> theta assembled from components on atoms:
    tau_E = sum_a theta_ext o tau_a o nu-projection.  Needs nu to be a
    cosheaf (the projections must exist)."""
    omega = nu.algebra
    components = {}
    for e in omega.elements():
        out = LinMap.zero(nu.space(e), theta.space(e))
        for i in omega.atom_indices(e):
            a = 1 << i
            piece = theta.extension(a, e) @ atom_maps[a] @ cosheaf_projection(nu, e, a)
            out = out.add(piece)
        components[e] = out
    return precosheaf_map(nu, theta, components)


def l1_integration_map(mu: MeasureAlgebra) -> dict[int, LinMap]:
    """Integration against mu as a precosheaf map from its l1 cosheaf to
    the constant line: on each element the row of positive atom weights
    (the fibers only carry coordinates for positive atoms)."""
    from .finban import scalars as _scalars
    line = _scalars()
    cosheaf = l1_cosheaf(mu)
    components = {}
    for e in mu.algebra.elements():
        src = cosheaf.space(e)
        row = tuple(mu.atom_value(i) for i in mu.algebra.atom_indices(e)
                    if mu.atom_value(i) > 0)
        assert len(row) == src.dim
        components[e] = LinMap(src, line, (row,))
    return components


# ---------------------------------------------------------------------------
# Stone transfer of presheaves (finite scale: a relabelling)
# ---------------------------------------------------------------------------

def sheaf_to_stone(xi: PreSheaf, stone) -> PreSheaf:
    """Transfer along the clopen isomorphism of the Stone space; on a
    finite algebra this is a relabelling of the indexing elements."""
    from .boolalg import StoneSpace
    if stone.algebra != xi.algebra:
        raise AlgebraMismatch("Stone space of a different algebra")
    clop = stone.clopen_algebra()
    fwd, _ = stone.round_trip()
    spaces = {}
    for e in clop.elements():
        src = xi.algebra.element(clop.atoms_below(e))
        spaces[e] = xi.space(src)
    cover_maps = {}
    for small, big, _ in _covering_pairs(clop):
        s_src = xi.algebra.element(clop.atoms_below(small))
        b_src = xi.algebra.element(clop.atoms_below(big))
        cover_maps[(small, big)] = xi.restriction(b_src, s_src)
    return make_presheaf(clop, spaces, cover_maps)


def sheaf_from_stone(xi_stone: PreSheaf, stone) -> PreSheaf:
    """Inverse transfer; composing both directions is the identity."""
    omega = stone.algebra
    clop = stone.clopen_algebra()
    spaces = {}
    for e in omega.elements():
        img = clop.element(omega.atoms_below(e))
        spaces[e] = xi_stone.space(img)
    cover_maps = {}
    for small, big, _ in _covering_pairs(omega):
        s_img = clop.element(omega.atoms_below(small))
        b_img = clop.element(omega.atoms_below(big))
        cover_maps[(small, big)] = xi_stone.restriction(b_img, s_img)
    return make_presheaf(omega, spaces, cover_maps)
