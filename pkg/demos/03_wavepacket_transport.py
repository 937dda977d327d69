"""Gaussian wavepacket on a lossless ring: drift and spreading closed forms.

A fast weak pulse imprints a Gaussian envelope with a phase ramp; the
quasimomentum q0 then sets the group velocity 2 Omega sin q0. At the band
center q0 = pi/2 the quadratic dispersion vanishes and the packet keeps its
width; at q0 = 0 it spreads diffusively.
"""

import math

import numpy as np

from emitterchain import (
    ChainConfig,
    EmitterGeometry,
    WavepacketSpec,
    centroid_and_width,
    drive_initialize,
    propagate_amplitudes,
)

S, w, j0 = 110, 5.0, 55.0
geom = EmitterGeometry(S=S, lattice_constant=0.08, boundary="periodic")
chain = ChainConfig(geometry=geom, Omega=1.0, gamma=0.0, decay_model="independent")

for q0, label in ((math.pi / 2, "q0 = pi/2 (drifting)"), (0.0, "q0 = 0 (spreading)")):
    spec = WavepacketSpec(j0=j0, w=w, q0=q0)
    beta0 = drive_initialize(spec, None, S).beta
    traj = propagate_amplitudes(chain, beta0, [0.0, 10.0, 20.0])
    print(label)
    for state in traj:
        cen, wid = centroid_and_width(np.abs(state.beta) ** 2)
        drift_pred = j0 + 2.0 * math.sin(q0) * state.t
        width_pred = w * math.sqrt(1.0 + (state.t * math.cos(q0) / w**2) ** 2)
        print(f"  t = {state.t:5.1f}: centroid {cen:7.2f} (free-particle {drift_pred:7.2f}), "
              f"width {wid:6.3f} (closed form {width_pred:6.3f})")
    print()

# the measured drift runs about exp(-1/(8 w^2)) slower than 2 sin q0: the
# finite-width packet averages the cosine band over its momentum spread
print(f"finite-width velocity factor exp(-1/(8 w^2)) = {math.exp(-1/(8*w*w)):.5f}")
