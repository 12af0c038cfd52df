"""A tour of the Boolean algebra layer.

Everything in this library sits on finite Boolean algebras given by
their atoms.  This script builds an algebra from generating subsets,
enumerates partitions, walks through Stone duality, and shows the
coproduct, null-quotient and principal-ideal constructions.

Run it:  python demos/01_boolean_algebras_and_stone_duality.py
"""

from catmeas.boolalg import (all_morphisms, atomic_partition, build_algebra,
                             coproduct, mediate_coproduct, partitions_of,
                             principal_ideal, quotient_by_null, refines,
                             stone_space, verify_coproduct, BoolAlg)

print("== building an algebra from generators ==")
gen = build_algebra(ground=[1, 2, 3, 4], generators=[{1, 2}, {2, 3}])
omega = gen.algebra
print("atoms (cells of the common refinement):")
for atom, cell in sorted(gen.cells.items()):
    print(f"  {atom}  <->  {sorted(cell)}")
print(f"the algebra has {omega.top + 1} elements")

print()
print("== partitions and refinement ==")
parts = list(partitions_of(omega, omega.top))
print(f"partitions of top: {len(parts)} (a Bell number)")
finest = atomic_partition(omega, omega.top)
print("the atomic partition refines every other one:",
      all(refines(finest, p) for p in parts))

print()
print("== Stone duality at finite scale ==")
st = stone_space(omega)
print("ultrafilter points:", st.points)
e = omega.element([omega.atoms[0], omega.atoms[-1]])
print(f"eta({omega.describe(e)}) =", sorted(st.eta(e)))
fwd, bwd = st.round_trip()
print("round trip is the identity:",
      all(bwd(fwd(x)) == x for x in omega.elements()))

print()
print("== coproducts and their universal property ==")
left = BoolAlg(("a", "b"))
right = BoolAlg(("u", "v"))
cop = coproduct(left, right)
print("pair atoms:", cop.algebra.atoms)
target = BoolAlg(("s", "t"))
phi = next(all_morphisms(left, target))
psi = next(all_morphisms(right, target))
theta = mediate_coproduct(cop, phi, psi)
print("mediating morphism found and unique:",
      verify_coproduct(cop, phi, psi))

print()
print("== quotients by null ideals, principal ideals ==")
quot = quotient_by_null(left, ["a"])
print("killing atom 'a' leaves atoms:", quot.algebra.atoms)
ideal, project = principal_ideal(cop.algebra, cop.inject_left(left.top))
print("the ideal below a*top has atoms:", ideal.atoms)
print("projection sends top to the ideal's unit:",
      project(cop.algebra.top) == ideal.top)
