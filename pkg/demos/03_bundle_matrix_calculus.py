"""The discrete categorified picture: bundles of spaces over a finite
set, matrices of spaces acting on them, and integration of a bundle
against a space-valued measure.

Composition of matrices is associative only up to a canonical
permutation of product bases; the witnesses below make those
permutations concrete and check they are isometric.

Run it:  python demos/03_bundle_matrix_calculus.py
"""

from fractions import Fraction as F

from catmeas.bundles2v import (Bundle, DiscreteCosheafMeasure, FunctorMatrix,
                               PosetFunctor, apply_compose_witness, apply_matrix,
                               associator_witness, decomposition_witness,
                               delta_bundle, direct_integral_discrete, hom_bundle,
                               integral_tensor_naturality_witness,
                               kan_extension_discrete, kan_restriction_is_isometric,
                               tensor_hom_adjunction_witness)
from catmeas.finban import FinPoset, scalars, sum_space
from catmeas.shcosh import is_cosheaf

base = ("x", "y", "z")
xi = Bundle(base, {
    "x": sum_space(["x0", "x1"]),
    "y": sum_space(["y0"], [F(1, 2)]),
    "z": sum_space(["z0", "z1", "z2"])})

print("== delta bundles and Schur orthogonality ==")
for p in base:
    for q in base:
        hom, _ = hom_bundle(delta_bundle(base, p, scalars()),
                            delta_bundle(base, q, scalars()))
        if hom.dim:
            print(f"  hom(delta_{p}, delta_{q}) is a line")
print("every bundle decomposes over its deltas, isometrically:",
      all(decomposition_witness(xi, p).is_isometric() for p in base))

print()
print("== hom bundles and the exponential adjunction ==")
zeta = Bundle(base, {p: sum_space([f"{p}w"]) for p in base})
hom, exponential = hom_bundle(xi, zeta)
print("dim hom(xi, zeta) =", hom.dim, "=",
      sum(xi.fiber(p).dim * zeta.fiber(p).dim for p in base))
rho = Bundle(base, {p: sum_space([f"{p}r0", f"{p}r1"]) for p in base})
print("currying is an isometric identification:",
      tensor_hom_adjunction_witness(xi, zeta, rho).is_isometric())

print()
print("== matrices acting on bundles ==")
t = FunctorMatrix(base, ("s", "t"), {
    (p, q): sum_space([f"T{p}{q}0"]) if p != "y" else sum_space([])
    for p in base for q in ("s", "t")})
applied = apply_matrix(t, xi)
print("fiber dims after applying T:",
      {q: applied.fiber(q).dim for q in ("s", "t")})
s = FunctorMatrix(("s", "t"), ("w",), {
    (q, "w"): sum_space([f"S{q}0", f"S{q}1"]) for q in ("s", "t")})
r = FunctorMatrix(("w",), ("v",), {("w", "v"): sum_space(["R0"])})
print("reassociation of (R S) T vs R (S T) is an isometric permutation:",
      all(associator_witness(r, s, t, p, "v").is_isometric() for p in base))
print("applying twice equals applying the composite:",
      apply_compose_witness(s, t, xi, "w").is_isometric())

print()
print("== discrete direct integrals ==")
mu = DiscreteCosheafMeasure(base, {
    "x": sum_space(["mx"]), "y": sum_space(["my0", "my1"]), "z": sum_space(["mz"])})
res = direct_integral_discrete(xi, mu)
print("total integral dimension:", res.total.dim)
print("the indefinite integral is a cosheaf on the powerset:",
      bool(is_cosheaf(res.indefinite, exhaustive=True)))
v = sum_space(["v0", "v1"])
print("tensoring commutes with the integral (canonical witness):",
      integral_tensor_naturality_witness(xi, mu, v).is_isometric())

print()
print("== a discrete Kan extension ==")
index = FinPoset.discrete(["m"])
functor = PosetFunctor(index, {"m": sum_space(["f0", "f1"])}, {})
kan = kan_extension_discrete(functor, {"m": "y"}, FinPoset.discrete(list(base)))
print("extension dims over the base:",
      {p: kan.values[p].space.dim for p in base})
print("restricting recovers the functor isometrically:",
      kan_restriction_is_isometric(kan, functor, {"m": "y"}))
