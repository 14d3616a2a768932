"""
Worst-case interferer layouts around a receiver
===============================================

Under CSMA every concurrent transmitter sits at least ``d1`` from every
other one and no farther than ``d2`` from the transmitter of interest.
The densest such set is a hexagonal lattice; we build it in two
orientations and check that both respect the carrier-sense constraints.
"""

import numpy as np

from csma_bounds import RadioEnvironment, build_config1, build_config2, validate_cover
from csma_bounds.geometry import max_interferer_count

env = RadioEnvironment(p_t=1.0, eta=2.2, sigma=2.0, d1=6.0, d2=18.0)

# the lattice with a row along the link, and the same lattice turned 90 degrees
c1 = build_config1(env)
c2 = build_config2(env)
print(f"annulus [{env.d1:g}, {env.d2:g}] m holds {len(c1)} lattice nodes")
print("constraint problems:", validate_cover(c1) + validate_cover(c2) or "none")

# the receiver sits at (d, 0); its nearest interferers differ by orientation
d = 2.0
for cover in (c1, c2):
    r = np.sort(cover.distances_to(d))
    print(f"{cover.label}: three nearest interferers at {np.round(r[:3], 2)} m")

# this count later scales smaller covers up to the worst case
print("max interferer count:", max_interferer_count(env))
