"""The half-plane catalog and its two-segment competitor analysis.

A one-dimensional cone is a union of rays from the origin in the closed
upper half-plane; the plane's boundary line carries weight alpha.  Only
five shapes are ever minimal, and the sloped-plus-horizontal one exactly
when its angle theta satisfies cos(theta) = alpha.  The brute-force
minimizer of the two-segment energy recovers that condition numerically.
"""

import math


from slidecal import cones1d

alpha = 0.6
t_alpha = cones1d.theta_alpha(alpha)
print(f"alpha = {alpha}: theta_alpha = arccos(alpha) = {t_alpha:.6f} rad "
      f"({math.degrees(t_alpha):.2f} deg)")
print()

print("two-segment energy J(x) around the junction, theta = theta_alpha:")
for x in (-0.2, -0.05, 0.0, 0.05, 0.2):
    j = cones1d.two_segment_energy(t_alpha, x, alpha)
    print(f"  x = {x:+.2f}:  J = {j:.9f}")
d1, d2 = cones1d.two_segment_derivatives(t_alpha, alpha)
print(f"  J'(0) = {d1:+.3e} (critical), J''(0) = {d2:.6f} (strictly convex)")
print()

print("brute-force minimizer location vs the criticality condition:")
for theta in (0.4, t_alpha, 1.2):
    x_star, j_star = cones1d.brute_force_minimum(theta, alpha)
    cone = cones1d.Cone1D(cones1d.SLOPED_PLUS_HORIZONTAL, theta=theta)
    print(f"  theta = {theta:.4f}: x* = {x_star:+.2e}, "
          f"minimal per catalog = {cones1d.is_minimal(cone, alpha)}")
print()

print("classification by branches (angles from the positive plane direction;")
print("0 and pi denote rays inside the plane):")
cases = [
    (0.0, math.pi),
    (math.pi / 2,),
    (0.0, math.pi / 2, math.pi),
    (t_alpha, math.pi),
    (0.9, math.pi),
    (0.5, math.pi - 0.5),
    (0.4, 1.5, 2.6),
    (0.0, 0.4, 2.8, math.pi),
]
for rays in cases:
    verdict = cones1d.classify_branches(cones1d.BranchCone(rays), alpha)
    if verdict.minimal:
        out = f"minimal ({verdict.cone.variant})"
    else:
        out = f"not minimal (beaten by {verdict.witness})"
    pretty = ", ".join(f"{r:.4f}" for r in rays)
    print(f"  [{pretty:>30s}]  ->  {out}")
print()

print("the symmetric vee is minimal only between theta_alpha and pi/6,")
print("so it exists only for alpha >= sqrt(3)/2:")
for a in (0.80, 0.88, 0.95):
    lo, hi = cones1d.theta_alpha(a), math.pi / 6
    window = "empty" if lo > hi else f"[{lo:.4f}, {hi:.4f}]"
    print(f"  alpha = {a:.2f}: admissible window {window}")
