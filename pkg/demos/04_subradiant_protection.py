"""Phase imprinting selects how fast a packet dies.

With collective decay the q0 = pi packet lives in the subradiant band edge
and keeps essentially all of its population for a lifetime 1/gamma, while
the q0 = 0 packet sits on the superradiant modes and is gone. Independent
decay cannot tell the two apart.
"""

import math

import numpy as np

from emitterchain import (
    ChainConfig,
    EmitterGeometry,
    WavepacketSpec,
    drive_initialize,
    propagate_amplitudes,
)

S = 110
geom = EmitterGeometry(S=S, lattice_constant=0.08, boundary="open")

print("survival |beta(t)|^2 / |beta(0)|^2 at t = 1/gamma, stationary packet:")
print(f"{'q0':>6} {'decay model':>13} {'survival':>12}")
for decay in ("independent", "collective"):
    chain = ChainConfig(geometry=geom, Omega=0.0, gamma=1.0, decay_model=decay)
    for q0 in (0.0, math.pi):
        spec = WavepacketSpec(j0=55.0, w=5.0, q0=q0)
        beta0 = drive_initialize(spec, None, S).beta
        traj = propagate_amplitudes(chain, beta0, [0.0, 1.0])
        surv = traj[-1].norm() / traj[0].norm()
        print(f"{q0:6.3f} {decay:>13} {surv:12.6f}")

print(f"\nindependent decay reference e^-1 = {math.exp(-1):.6f}")
print("collective q0 = pi retains ~1.0: the packet occupies modes whose decay")
print("rates sit far below double precision at this spacing")
