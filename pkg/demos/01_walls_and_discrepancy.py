"""Walls, circuits, and log discrepancies on a small surface pair.

We build the quarter-plane with one interior ray, read off the wall
circuit, and watch how boundary coefficients move the discrepancy
status of the same fan.
"""

from fractions import Fraction

from toricmmp import (
    classify,
    defect,
    is_canonical,
    is_terminal,
    make_fan,
    make_pair,
    min_discrepancy_witness,
    psi_heights,
    terminalize,
    wall_relation,
    walls,
)

# the orthant split along the diagonal: one wall between the two cones
fan = make_fan([(1, 0), (0, 1), (1, 1)], [(0, 2), (1, 2)])

print("rays:", fan.rays)
for w in walls(fan):
    rel = wall_relation(fan, w)
    kind = classify(rel)
    print("wall through", [fan.rays[i] for i in w.shared])
    print("  circuit relation:",
          " + ".join(f"{a}*{fan.rays[i]}" for a, i in zip(rel.coeffs, rel.ray_indices)),
          "= 0")
    print("  type:", kind.kind)

# With zero boundary the interior ray is a crepant divisor over the
# origin: the pair is canonical but no longer terminal.
plain = make_pair(fan, [0, 0, 0])
print("\nzero boundary:")
print("  psi heights:", psi_heights(plain))
print("  terminal:", is_terminal(plain), " canonical:", is_canonical(plain))

# The wall defect of the discrepancy heights measures convexity of the
# canonical class across the wall; positive defect is what the relative
# MMP contracts, zero would mean the wall is crepant.
(w,) = walls(fan)
rel = wall_relation(fan, w)
print("  wall defect of psi:", defect(rel, psi_heights(plain)))

# Heavy boundary coefficients push psi below one off the rays: the
# witness names the offending valuation exactly, and extracting it is
# the first step of terminalization.
orthant = make_fan([(1, 0), (0, 1)], [(0, 1)])
heavy = make_pair(orthant, [Fraction(1, 2), Fraction(2, 3)])
wit = min_discrepancy_witness(heavy)
print("\northant with boundary (1/2, 2/3):")
print("  worst log discrepancy:", wit[0], "at lattice point", wit[1])
print("  terminal:", is_terminal(heavy), " canonical:", is_canonical(heavy))

fixed, steps = terminalize(heavy)
for s in steps:
    print("  extract", s.ray, "at log discrepancy", s.psi_value)
print("  after extraction, terminal:", is_terminal(fixed))
