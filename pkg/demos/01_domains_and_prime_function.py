"""Walkthrough: circular domains, the Schottky group, and the prime function.

Run as a script; every block prints what it demonstrates.  The running
example is the annulus 0.25 < |z| < 1, where everything has a closed form,
plus a 3-connected domain where only the machinery can answer.
"""

import numpy as np

from schottky import (
    Circle,
    CircularDomain,
    PrimeEvaluator,
    enumerate_words,
    generators,
    tail_estimate,
    validate_domain,
)

# ---------------------------------------------------------------- geometry

annulus = CircularDomain((Circle(0j, 0.25),))
triply = CircularDomain((Circle(-0.5 + 0j, 0.1), Circle(0.5 + 0j, 0.1)))

for name, dom in (("annulus", annulus), ("triply connected", triply)):
    report = validate_domain(dom)
    print(f"{name}: valid={report.is_valid}, separation={report.separation:.3f}, "
          f"class={report.convergence_class}")

# The Schottky generators are compositions of two circle reflections.
theta = generators(annulus)[0]
print(f"\nannulus generator theta(z) = r^2 z: theta(1) = {theta(1.0):.6g}")

# Reduced words of the free group, with the canonical half set marked.
enum = enumerate_words(2, 2)
print(f"g=2 words of length <= 2: {len(enum.words)} "
      f"(half set {int(enum.half_set_mask.sum())})")

# The tail estimate drives the truncation choice: it is the diameter of the
# domain's image under the longest words kept.
for L in (2, 4, 6):
    print(f"annulus tail estimate at L={L}: {tail_estimate(annulus, L):.3e}")

# ---------------------------------------------------- the prime function

ev = PrimeEvaluator(annulus, max_word_length=8)
z, y = 0.7, 0.4
print(f"\nomega({z}, {y}) = {ev.omega(z, y):.12g}")


def one_generator_product(z, y, r=0.25, terms=8):
    val = z - y
    for k in range(1, terms + 1):
        q = r ** (2 * k)
        val *= (z - q * y) * (y - q * z) / ((z - q * z) * (y - q * y))
    return val


print(f"one-generator oracle  = {one_generator_product(z, y):.12g}")

# Defining properties, as residuals: antisymmetry and the reflection law.
r1, r2 = ev.symmetry_residuals(0.7, 0.4)
print(f"reflection symmetry residual: {r1:.2e}, exchange residual: {r2:.2e}")

# The shift identity under the group generator ties omega to the integrals
# of the first kind (see the next demo for those).
from schottky import integrals_first_kind, solve_harmonic_measures

model = solve_harmonic_measures(annulus)
v = integrals_first_kind(model)
res = ev.functional_equation_residual(0.6, 0.4j, 1, v)
print(f"shift identity residual at L=8: {res:.2e}")

ev3 = PrimeEvaluator(triply, max_word_length=5)
print(f"\ntriply connected omega(0.3+0.2j, -0.4j) = {ev3.omega(0.3 + 0.2j, -0.4j):.10g}")
