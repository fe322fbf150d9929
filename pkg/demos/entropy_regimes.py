"""
Photon number and entropy in the three regimes
==============================================

Generate the entropy and specific-entropy curves for z=4,
kappa=1, g=2, 1, 0.5 and compare them with the large-time asymptotes.
"""

# %%
import csv
import io
import math

from laserchannel import LaserParams, asymptotics, entropy_closed, equivalent_temperature, mean_photon_closed
from laserchannel.cli import sweep_rows

header, rows = sweep_rows([2.0, 1.0, 0.5], kappa=1.0, z=4, t_max=10.0, t_steps=10)
buf = io.StringIO()
csv.writer(buf, lineterminator="\n").writerows([header] + [[f"{v:.6g}" if isinstance(v, float) else v for v in r]
                                                          for r in rows])
print(buf.getvalue())

# %%
# Asymptotes: linear entropy growth under net gain, logarithmic at balance,
# saturation under net loss.
for g in (2.0, 1.0, 0.5):
    p = LaserParams(g, 1.0)
    reg = asymptotics(4, p)
    for t in (5.0, 20.0):
        print(f"g={g} t={t:4}: S={entropy_closed(p, t):9.5f}  asymptote={reg.entropy_value(t):9.5f}  "
              f"<n>={mean_photon_closed(4, p, t):.4g}  [{reg.kind.value}]")

# %%
# Under net loss the steady state is thermal with <n> = g/(kappa-g).
p = LaserParams(0.5, 1.0)
temp = equivalent_temperature(p)
print(f"k_B T / hbar omega = {temp:.6f}; Bose-Einstein occupation {1 / math.expm1(1 / temp):.6f}")
