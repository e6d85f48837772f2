"""Verify the paired calibrations and the divergence-theorem bookkeeping.

Each cone carries one constant vector per complement region.  Three facts
make the family a calibration: pairwise differences have norm at most one,
on every fold the difference equals the fold normal, and the vertical
component of the differences reproduces the weight on the plane sectors.
The divergence theorem applied region by region then turns those facts
into a lower bound on the energy of every sliding competitor, met with
equality by the cone itself; both sides of that equality are computed here
from the actual polyhedral partition.
"""

import math


from slidecal import calib, cones2d

CASES = [
    (cones2d.t_plus(), calib.t_plus_calibration()),
    (cones2d.y_beta(0.7), calib.rotated_y_calibration(0.7, "y")),
    (cones2d.ybar_beta(0.7), calib.rotated_y_calibration(0.7, "ybar")),
    (cones2d.w_beta(0.5), calib.w_beta_calibration(0.5)),
]

for spec, cal in CASES:
    report = calib.verify_alignment(spec, cal)
    print(f"{spec.variant} (calibration {cal.name!r})")
    norms = cal.pairwise_norms()
    k = cal.region_count
    print(f"  pairwise |w_i - w_j|: "
          + ", ".join(f"{norms[i, j]:.12f}"
                      for i in range(k) for j in range(i + 1, k)))
    print(f"  worst fold misalignment: "
          f"{max(report.alignment_defects.values()):.2e}")
    print(f"  boundary coefficients: "
          + ", ".join(f"{name} = {val:.12f}"
                      for name, val in report.boundary_coeffs.items())
          + f"  (required alpha = {report.required_alpha:.12f})")
    if report.vacuous_pairs:
        print(f"  pairs constrained without a fold: {report.vacuous_pairs}")
    print(f"  verdict: {'pass' if report.verdict else 'fail'}")

    part = cones2d.region_partition(spec)
    fluxes = calib.divergence_balance(part, cal)
    worst = max(abs(f) / a for f, a in fluxes.values())
    print(f"  per-region flux (should vanish): worst {worst:.2e} "
          f"of boundary area")
    constant, j_clipped = calib.lower_bound_constant(part, cal)
    print(f"  lower-bound constant {constant:.15f} vs clipped-cone energy "
          f"{j_clipped:.15f} (difference {abs(constant - j_clipped):.2e})")
    print()

print("the double-Y admissibility boundary: |w_1 - w_2| = sqrt(3) sin(beta)")
for beta in (0.4, math.asin(1 / math.sqrt(3)), 0.8):
    cal = calib.w_beta_calibration(beta)
    ok = calib.verify_alignment(cones2d.w_beta(beta), cal).verdict
    print(f"  beta = {beta:.6f}: |w1 - w2| = {cal.pairwise_norms()[0, 1]:.9f}"
          f"  ->  {'pass' if ok else 'fail'}")

print()
print("negative control: deleting one face of a region is detected")
part = cones2d.region_partition(cones2d.t_plus())
cal = calib.t_plus_calibration()
flux, area = calib.divergence_balance(part, cal, drop=(4, "F4"))[4]
print(f"  flux with the top face removed: {flux:+.9f} "
      f"(zero only for a closed boundary)")
