"""Finitely additive scalar and vector measures on finite Boolean algebras.

A measure is stored on atoms, so finite additivity is a representation
invariant rather than a property to check: evaluation at an element is
summation over the atoms below it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .boolalg import BoolAlg, BoolMorphism, Coproduct, NullQuotient, quotient_by_null
from .errors import AlgebraMismatch, InvalidModel
from .exactla import ZERO
from .finban import FinBanSpace, Vector, scalars, vec_add, vec_scale, zero_vec


@dataclass(frozen=True)
class VectorMeasure:
    """Finitely additive map from an algebra into a FinBanSpace."""

    algebra: BoolAlg
    target: FinBanSpace
    atom_values: tuple[Vector, ...]  # one target vector per atom

    def __post_init__(self):
        if len(self.atom_values) != self.algebra.n:
            raise InvalidModel("one value per atom required")
        if any(len(v) != self.target.dim for v in self.atom_values):
            raise InvalidModel("atom values must live in the target space")

    def __call__(self, e: int) -> Vector:
        self.algebra.check_element(e)
        out = zero_vec(self.target.dim)
        for i in self.algebra.atom_indices(e):
            out = vec_add(out, self.atom_values[i])
        return out

    def scale(self, k: Fraction) -> "VectorMeasure":
        return VectorMeasure(self.algebra, self.target,
                             tuple(vec_scale(k, v) for v in self.atom_values))

    def null_atoms(self) -> tuple[str, ...]:
        return tuple(a for a, v in zip(self.algebra.atoms, self.atom_values)
                     if all(x == 0 for x in v))

    def is_scalar(self) -> bool:
        return self.target.dim == 1

    @staticmethod
    def scalar(algebra: BoolAlg, values: Sequence) -> "VectorMeasure":
        return VectorMeasure(algebra, scalars(),
                             tuple((Fraction(v),) for v in values))


@dataclass(frozen=True)
class MeasureAlgebra:
    """An algebra with a nonnegative bounded scalar measure."""

    algebra: BoolAlg
    mu: VectorMeasure

    def __post_init__(self):
        if self.mu.algebra != self.algebra:
            raise AlgebraMismatch("measure lives on a different algebra")
        if not self.mu.is_scalar():
            raise InvalidModel("a measure algebra needs a scalar measure")
        if any(v[0] < 0 for v in self.mu.atom_values):
            raise InvalidModel("a measure algebra needs a nonnegative measure")

    def value(self, e: int) -> Fraction:
        return self.mu(e)[0]

    def atom_value(self, atom_index: int) -> Fraction:
        return self.mu.atom_values[atom_index][0]

    @staticmethod
    def from_values(algebra: BoolAlg, values: Sequence) -> "MeasureAlgebra":
        return MeasureAlgebra(algebra, VectorMeasure.scalar(algebra, values))


def variation(nu: VectorMeasure, e: int) -> Fraction:
    """sup over partitions of sum ||nu(F)||; the finest partition wins, so
    this is the sum of atom value norms below e."""
    nu.algebra.check_element(e)
    return sum((nu.target.norm(nu.atom_values[i])
                for i in nu.algebra.atom_indices(e)), ZERO)


def semivariation(nu: VectorMeasure, e: int) -> Fraction:
    """sup over dual-ball functionals and partitions of sum |<b*, nu(F)>|.

    For a fixed functional the sum only grows under refinement, so the
    atomic partition suffices; the sup over the dual ball is attained at
    one of its finitely many vertices.
    """
    nu.algebra.check_element(e)
    idx = nu.algebra.atom_indices(e)
    if not idx or nu.target.dim == 0:
        return ZERO
    best = ZERO
    for phi in nu.target.dual_extreme_functionals():
        total = sum(
            (abs(sum((phi[k] * nu.atom_values[i][k] for k in range(len(phi))), ZERO))
             for i in idx), ZERO)
        if total > best:
            best = total
    return best


def semivariation_bruteforce(nu: VectorMeasure, e: int,
                             functionals: Sequence[Vector]) -> Fraction:
    """Oracle: explicit sup over all partitions of e and the supplied
    dual vectors.  Never exceeds semivariation()."""
    from .boolalg import partitions_of
    if e == 0:
        return ZERO
    best = ZERO
    for part in partitions_of(nu.algebra, e):
        for phi in functionals:
            total = ZERO
            for block in part.blocks:
                val = nu(block)
                total += abs(sum((phi[k] * val[k] for k in range(len(phi))), ZERO))
            if total > best:
                best = total
    return best


def lipschitz_norm(nu: VectorMeasure, mu: MeasureAlgebra) -> Optional[Fraction]:
    """max over elements E with mu(E) > 0 of ||nu(E)|| / mu(E); None when
    some mu-null element carries nonzero nu (no Lipschitz constant).

    The maximum is taken over all nonzero elements, not only atoms.
    """
    if nu.algebra != mu.algebra:
        raise AlgebraMismatch("measures live on different algebras")
    null_mask = 0
    for i in range(mu.algebra.n):
        if mu.atom_value(i) == 0:
            null_mask |= 1 << i
    if null_mask and any(
            x != 0 for i in mu.algebra.atom_indices(null_mask)
            for x in nu.atom_values[i]):
        return None
    best = ZERO
    for e in nu.algebra.nonzero_elements():
        m = mu.value(e)
        if m == 0:
            continue
        val = nu.target.norm(nu(e)) / m
        if val > best:
            best = val
    return best


def pullback(phi: BoolMorphism, nu: VectorMeasure) -> VectorMeasure:
    """(phi* nu)(E) = nu(phi(E)), stored atomwise on the source algebra.

    Atom images of a Boolean morphism are disjoint, so the atomwise
    storage reproduces nu(phi(E)) for every E exactly.
    """
    if nu.algebra != phi.target:
        raise AlgebraMismatch("measure must live on the morphism target")
    values = tuple(nu(phi.atom_images[i]) for i in range(phi.source.n))
    return VectorMeasure(phi.source, nu.target, values)


def product_measure(mu: VectorMeasure, nu: VectorMeasure,
                    cop: Coproduct) -> VectorMeasure:
    """(mu (x) nu)(a*b) = mu(a) nu(b) on the coproduct algebra."""
    if not (mu.is_scalar() and nu.is_scalar()):
        raise InvalidModel("product measures are scalar-valued")
    if mu.algebra != cop.left or nu.algebra != cop.right:
        raise AlgebraMismatch("measures do not match the coproduct factors")
    values = []
    for label in cop.algebra.atoms:
        a, b = label.split("*", 1)
        va = mu(mu.algebra.element([a]))[0]
        vb = nu(nu.algebra.element([b]))[0]
        values.append((va * vb,))
    return VectorMeasure(cop.algebra, scalars(), tuple(values))


def is_spectral(nu: VectorMeasure,
                product: Callable[[Vector, Vector], Vector],
                unit: Vector) -> bool:
    """True iff nu(E & F) = nu(E) . nu(F) for all pairs and nu(top) = unit."""
    omega = nu.algebra
    if tuple(nu(omega.top)) != tuple(unit):
        return False
    values = {e: nu(e) for e in omega.elements()}
    for e in omega.elements():
        for f in omega.elements():
            if tuple(values[e & f]) != tuple(product(values[e], values[f])):
                return False
    return True


def null_quotient(mu) -> NullQuotient:
    """Quotient of the algebra by the ideal of null elements of a measure
    (a MeasureAlgebra or any VectorMeasure)."""
    measure = mu.mu if isinstance(mu, MeasureAlgebra) else mu
    return quotient_by_null(measure.algebra, measure.null_atoms())


def factor_through(quotient: NullQuotient, nu: VectorMeasure) -> Optional[VectorMeasure]:
    """The unique measure on the quotient with nu = factored o projection,
    or None when nu does not vanish on the killed atoms."""
    pi = quotient.projection
    if nu.algebra != pi.source:
        raise AlgebraMismatch("measure lives on a different algebra")
    killed = [i for i in range(pi.source.n) if pi.atom_images[i] == 0]
    if any(x != 0 for i in killed for x in nu.atom_values[i]):
        return None
    values = []
    for atom in quotient.algebra.atoms:
        i = nu.algebra.atom_index(atom)
        values.append(nu.atom_values[i])
    return VectorMeasure(quotient.algebra, nu.target, tuple(values))


def random_vector_measure(rng, omega: BoolAlg, target: FinBanSpace,
                          span: int = 6, denom: int = 4) -> VectorMeasure:
    """Seeded random measure with small rational atom values (test helper)."""
    def q():
        return Fraction(rng.randint(-span, span), rng.randint(1, denom))
    return VectorMeasure(
        omega, target,
        tuple(tuple(q() for _ in range(target.dim)) for _ in range(omega.n)))
