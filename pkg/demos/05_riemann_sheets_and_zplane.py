"""Eigenvalue loops over the complex plane and the branch points inside.

Replacing e^{ik} by a complex coordinate z turns the bands into sheets of
a multivalued energy surface; the zone is the unit circle. Eigenvalue loops
along circles |z| = r show which branch points (discriminant zeros of the
characteristic polynomial, i.e. exceptional points of H(z)) they enclose.

For two bands the closed-form zone-boundary condition gives m markers at
radius ((alpha^2+beta^2-gamma^2)/(2 alpha beta))^(1/m); the exact branch
points of the full H(z) are computed separately by clearing the Laurent
pole of the discriminant and finding polynomial roots.
"""

from pathlib import Path

import numpy as np

from bloch_braids import (ModelSpec, dimer_ep_zplane, ep_zplane_numeric, io,
                          riemann_loop, zone_boundary_degeneracy_residual)

OUT = Path("demo_output")
OUT.mkdir(exist_ok=True)

print("two-band chain, m = 2 (Hopf link):")
spec = ModelSpec.dimer(1.0, 1.5, 0.3, 1.0, 2)
markers = dimer_ep_zplane(spec.params)
for z in markers:
    res = zone_boundary_degeneracy_residual(spec.params, z)
    print(f"   closed-form marker z = {z:.4f} (condition residual {res:.1e})")
exact = ep_zplane_numeric(spec)
for ep in exact:
    tag = "inside" if abs(ep.location) < 1 else "outside"
    print(f"   exact branch point z = {ep.location:.4f} ({tag} the zone circle), "
          f"local degenerate energy E = {ep.energy:.4f}")

for r in (0.85, 1.0):
    loop = riemann_loop(spec, radius=r, samples=512)
    path = OUT / f"dimer_loop_r{r:.2f}.csv"
    path.write_text(io.trajectory_to_csv(loop))
    print(f"   loop at |z| = {r}: closure {loop.closure.cycle_str()} -> {path}")

print("\nthree-band chain at the non-commuting point (beta = 1.2, gamma = 0.7):")
tri = ModelSpec.trimer(1.0, 1.2, 0.3, 0.7, 0.7, 1)
inside = [ep for ep in ep_zplane_numeric(tri) if abs(ep.location) < 1]
print(f"   {len(inside)} branch points inside the zone circle; nearest to it:")
for ep in sorted(inside, key=lambda e: -abs(e.location))[:3]:
    print(f"      z = {ep.location:.4f} (|z| = {abs(ep.location):.4f}), bands {ep.bands} "
          f"touch at E = {ep.energy:.4f}")
loop = riemann_loop(tri, radius=1.0, samples=512, theta0=np.pi / 4)
path = OUT / "trimer_loop_r1.csv"
path.write_text(io.trajectory_to_csv(loop))
print(f"   unit-circle loop closure: {loop.closure.band_mapping_str()} -> {path}")
