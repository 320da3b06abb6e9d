"""
Proper distance outside a Schwarzschild mass
============================================

The closed-form proper distance, its first-order expansion and a direct
numerical quadrature, followed by the inverse problem: where does a detector
sit if it is a given proper distance away from the source?
"""

from gravnu import (
    detector_radius_exact,
    detector_radius_weak,
    local_energy,
    proper_distance_exact,
    proper_distance_quadrature,
    proper_distance_weak,
)

gm = 3e7  # km
r_a, r_b = 1e8, 4e8

print(f"coordinate distance  {r_b - r_a:.6e} km")
print(f"weak-field distance  {proper_distance_weak(r_a, r_b, gm):.6e} km")
print(f"exact distance       {proper_distance_exact(r_a, r_b, gm):.9e} km")
print(f"quadrature           {proper_distance_quadrature(r_a, r_b, gm):.9e} km")

# At fixed radii, halving GM shrinks the weak-field error about fourfold
for g in (gm, gm / 2, gm / 4):
    gap = proper_distance_exact(6e8, 2.4e9, g) - proper_distance_weak(6e8, 2.4e9, g)
    print(f"GM = {g:.3e} km: exact - weak over [6e8, 2.4e9] km = {gap:.4e} km")

# Detector placement for a 3e8 km proper baseline
for direction, r_source in (("outward", 1e8), ("inward", 6.5e8)):
    weak = detector_radius_weak(r_source, 3e8, gm, direction)
    exact = detector_radius_exact(r_source, 3e8, gm, direction)
    print(f"{direction:7s}: r_B weak {weak:.6e} km, exact {exact:.6e} km")

# Blueshift seen by a static observer at 4e8 km
print(f"E_loc first order {local_energy(300.0, 4e8, gm):.3f} TeV, "
      f"exact {local_energy(300.0, 4e8, gm, 'exact'):.3f} TeV")
