"""Constrained Sobolev quotient constants at p = 2.

The gradient/value quotient over mean-zero-on-a-leg functions on the
reference triangle has a known closed characterization: its reciprocal
(the Babuska-Aziz constant) is the maximum positive root of
1/x + tan(1/x) = 0.  This script computes that root, then reproduces the
constant with a polynomial Rayleigh-quotient eigenproblem, watches the
subspace estimates converge from above, and audits the circumradius lower
bounds on random triangles.
"""
import math

import numpy as np

from circumlab import (
    Triangle,
    a2_constant,
    babuska_aziz_root,
    lemma_inequality_audit,
    rayleigh_A,
    rayleigh_B,
    rayleigh_D,
    reference_triangle,
)

root = babuska_aziz_root()
print(f"Babuska-Aziz constant (root of 1/x + tan(1/x) = 0): {root:.10f}")
print(f"residual |1/x + tan(1/x)| = {abs(1 / root + math.tan(1 / root)):.2e}")
print(f"A_2 = 1/root = {a2_constant():.10f}\n")

ref = reference_triangle()
est = rayleigh_A(ref, edge_index=1, degree=12)
print("A_2 by polynomial subspace minimization (upper bounds, converging):")
for deg, val in est.history:
    print(f"  degree {deg:2d}: {val:.12f}  (excess {val - a2_constant():+.2e})")

print("\nSecond-order quotients over vertex-vanishing polynomials:")
b_est = rayleigh_B(ref, degree=12)
d_est = rayleigh_D(ref, degree=12)
print(f"  B (|.|_2 / |.|_1): {b_est.value:.8f}  "
      f"lower bound A_2/sqrt(2) = {a2_constant() / math.sqrt(2):.8f}")
print(f"  D (|.|_2 / |.|_0): {d_est.value:.8f}  "
      f"(published approximation 1/0.167 = {1 / 0.167:.5f})")

print("\nLower-bound audit on seeded triangles (estimates are upper bounds "
      "of the infima, so computed >= bound must hold exactly):")
rng = np.random.default_rng(1)
tris = [("reference", ref)]
for k in range(3):
    a, b = rng.uniform(0.2, 1.5, size=2)
    tris.append((f"right {a:.2f}x{b:.2f}", Triangle((0, 0), (a, 0), (0, b))))
s = 0.6
tris.append(("canonical s=0.6 eta=1",
             Triangle((-1, 0), (1, 0), (s, math.sqrt(1 - s * s)))))
for label, tri in tris:
    rec = lemma_inequality_audit(tri, degree=8)
    for e in rec.entries:
        print(f"  {label:22s} {e.lemma:16s} computed={e.computed:9.5f} "
              f">= bound={e.bound:9.5f}  {'ok' if e.passed else 'VIOLATED'}")
