"""
Three independent routes to rho(t)
==================================

The Kraus sum, the closed-form displaced thermal state and a plain RK4
integration of the master equation should give the same matrix.
"""

# %%
import itertools
import time

import numpy as np

from laserchannel import (
    LaserParams,
    apply_channel,
    coherent_density,
    evolve,
    expectation,
    kraus_set,
    mean_photon_closed,
    number_operator,
    rho_coherent_closed,
)

# %%
print(f"{'g':>4} {'kappa':>5} {'z':>3} {'t':>4}  {'kraus-closed':>12} {'kraus-rk4':>10} {'<n> rel err':>11}")
for (g, kappa), z, t in itertools.product([(0.5, 1), (1, 1), (2, 1)], [0, 2], [0.1, 0.3]):
    p = LaserParams(g, kappa)
    dim = 96 if g > kappa else 64
    rho0 = coherent_density(z, dim)
    tic = time.perf_counter()
    k = apply_channel(kraus_set(p, t, dim), rho0)
    c = rho_coherent_closed(z, p, t, dim)
    r = evolve(rho0, p, t)
    n = expectation(r, number_operator(dim)).real
    rel = abs(n - mean_photon_closed(z, p, t)) / mean_photon_closed(z, p, t)
    print(f"{g:4} {kappa:5} {z:3} {t:4}  {np.abs(k - c).max():12.1e} {np.abs(k - r).max():10.1e} {rel:11.1e}"
          f"   ({time.perf_counter() - tic:.2f}s)")

# %%
# Pure loss keeps a coherent state coherent: |1> decays to |e^{-t}>.
p = LaserParams(0.0, 1.0)
out = evolve(coherent_density(1.0, 32), p, 0.5)
print("pure damping:", np.abs(out - coherent_density(np.exp(-0.5), 32)).max())
