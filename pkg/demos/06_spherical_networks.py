"""Spherical networks: side-length relations and the hemisphere traces.

A cone is determined by its trace on the unit hemisphere.  Minimality
forces great-circle arcs meeting in threes at 120 degrees, polygonal
regions with at most five sides obeying closed-form side relations, and
admissible one-dimensional profiles wherever an arc reaches the equator.
"""

import math


from slidecal import cones2d, spherenet

print("equiangular triangle side:", spherenet.triangle_side(),
      "= arccos(-1/3)")
print()

print("'rectangular' quadrilateral relation (adjacent sides a, b):")
for a in (0.8, math.acos(1 / 3), 1.6):
    b = spherenet.rect_side(a)
    print(f"  a = {a:.6f} -> b = {b:.6f}; back again: "
          f"{spherenet.rect_side(b):.6f} (involution)")
print(f"  fixed point at arccos(1/3) = {math.acos(1 / 3):.6f}")
print()

print("pentagon relation (side opposite the adjacent pair):")
g = math.acos(1 / math.sqrt(3))
print(f"  symmetric fixed point: pentagon_side(g, g) = g = {g:.6f}")
a = math.acos(1 / 3)
print(f"  a = b = arccos(1/3): third side = "
      f"{spherenet.pentagon_side(a, a):.6f} = arccos(1/9)")
print()

for spec in (cones2d.t_plus(), cones2d.y_beta(0.7), cones2d.ybar_beta(0.7),
             cones2d.w_beta(0.5)):
    net = cones2d.hemisphere_trace(spec)
    junction = spherenet.junction_check(net)
    alpha = cones2d.required_alpha(spec).value
    print(f"{spec.variant}: {len(net.nodes)} nodes, {len(net.arcs)} arcs")
    interior = [e for e in junction.entries]
    print(f"  interior junctions: {len(interior)}, all 120 degrees: "
          f"{junction.ok}")
    good = spherenet.equator_check(net, alpha)
    print(f"  equator profiles at the required alpha {alpha:.6f}: "
          f"{'pass' if good.ok else 'fail'}")
    bad = spherenet.equator_check(net, min(1.0, alpha + 0.2))
    failing = [e.node for e in bad.entries if not e.ok]
    print(f"  at alpha + 0.2 the sloped contacts fail at nodes {failing}")
    print()
