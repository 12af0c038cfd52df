"""catmeas: exact-arithmetic calculus of finite Boolean algebras, finitely
additive vector measures, weighted l1/sup spaces, simple elements with
their universal integrals, bundle matrices, and (co)sheaf machinery on
the finite partition topology.

Everything is computed over the rationals; every isometry or universal
property the library claims is decided exactly, with no tolerance.
"""

from . import boolalg, bundles2v, exactla, finban, measures, shcosh, simple  # noqa: F401

__all__ = [
    "boolalg",
    "bundles2v",
    "exactla",
    "finban",
    "measures",
    "shcosh",
    "simple",
]
