"""Finitely additive measures and the two universal integrals.

A vector measure lives on atoms; variation, semivariation and Lipschitz
norms are finite maximisations decided exactly.  The sup-normed simple
elements carry the universal lift of any bounded measure (its operator
norm IS the semivariation), and the mu-weighted l1 classes carry the
contractive integral with the projective-tensor identity and Fubini.

Run it:  python demos/02_measures_and_integrals.py
"""

from fractions import Fraction as F

from catmeas.boolalg import BoolAlg, coproduct
from catmeas.finban import operator_norm, sum_space
from catmeas.measures import (MeasureAlgebra, VectorMeasure, lipschitz_norm,
                              semivariation, variation)
from catmeas.simple import (VectorSimpleElement, bochner, canonicalize,
                            characteristic, fubini, integrate, integration_map,
                            l1_lift, linf_norm)

omega = BoolAlg(("a", "b", "c"))
B = sum_space(["u", "v"], [F(1), F(1, 2)])

print("== a signed vector measure and its sizes ==")
nu = VectorMeasure(omega, B, ((F(1), F(0)), (F(-1), F(2)), (F(0), F(1))))
print("nu(top) =", nu(omega.top))
print("variation(nu, top)     =", variation(nu, omega.top))
print("semivariation(nu, top) =", semivariation(nu, omega.top))

print()
print("== the universal lift on sup-normed simple elements ==")
f = canonicalize(omega, [(F(2), omega.element(["a", "b"])),
                         (F(-3), omega.element(["c"]))])
print("f has sup norm", linf_norm(f), "and integral", integrate(f, nu))
lift = integration_map(nu)
print("the lift agrees with nu on every characteristic:",
      all(tuple(lift(characteristic(omega, e).coeffs)) == tuple(nu(e))
          for e in omega.elements()))
print("operator norm of the lift == semivariation:",
      operator_norm(lift) == semivariation(nu, omega.top))

print()
print("== Lipschitz domination and the l1 lift ==")
mu = MeasureAlgebra.from_values(omega, [F(1, 2), F(1, 3), F(1, 6)])
c = lipschitz_norm(nu, mu)
print("Lipschitz norm of nu against mu:", c)
print("it equals the operator norm of the l1 extension:",
      operator_norm(l1_lift(nu, mu)) == c)

print()
print("== the contractive vector integral ==")
g = VectorSimpleElement.from_terms(omega, B, [
    (omega.element(["a"]), (F(2), F(0))),
    (omega.element(["b", "c"]), (F(-1), F(4)))])
res = bochner(g, mu)
print("integral:", res.integral, " l1 norm:", res.l1_norm)
print("contraction holds:", B.norm(res.integral) <= res.l1_norm)
print("the value space factors off as a projective tensor, isometrically:",
      res.tensor_witness.is_isometric())

print()
print("== Fubini on a product algebra ==")
left = BoolAlg(("p", "q"))
right = BoolAlg(("x", "y", "z"))
cop = coproduct(left, right)
mu_l = MeasureAlgebra.from_values(left, [F(1, 2), F(1, 2)])
nu_r = MeasureAlgebra.from_values(right, [F(1, 3), F(1, 3), F(1, 3)])
h = canonicalize(cop.algebra, [
    (F(6), cop.algebra.element([cop.pair_atom("p", "x")])),
    (F(-3), cop.inject_right(right.element(["y"])))])
out = fubini(h, cop, mu_l, nu_r)
print("product integral:", out.product_value)
print("iterated (inner right):", out.iterated_left_then_right)
print("iterated (inner left): ", out.iterated_right_then_left)
print("all three agree:", out.all_equal())
