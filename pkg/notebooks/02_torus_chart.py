# %% [markdown]
# # The solid-torus chart
#
# Every rotation R is written as "slide the z axis to Z along the meridian,
# then spin by phi about Z".  The point Z is given by longitude lambda and
# polar angle alpha; phi is the spin.  For alpha < pi this is a chart onto an
# open solid torus.

# %%
import numpy as np

from so3topo import torus_chart as tc
from so3topo.rotation import quat_to_matrix

R = tc.chart_inverse(tc.TorusChartPoint.from_angles(lam=0.8, alpha=1.2, phi=2.0))
p = tc.chart_forward(R)
print(p)
print("round trip error:", np.max(np.abs(tc.chart_inverse(p).m - R.m)))

# %%
print(tc.to_solid_torus(p))

# %% [markdown]
# As alpha approaches pi the slide ends at -z, and the limit depends on the
# direction of approach.  Boundary points are glued with a twist: walking
# once around the small circle (lambda) corresponds to two turns of phi.

# %%
s = tc.IDENTIFICATION_SIGN
print("measured sign:", s)
for lam_deg in (0, 45, 90, 180, 270):
    lam = np.radians(lam_deg)
    a = tc.boundary_limit_rotation(lam, 0.3)
    b = tc.boundary_limit_rotation(0.0, np.mod(0.3 + 2 * s * lam, 2 * np.pi))
    print(f"lambda={lam_deg:3d}deg  mismatch {np.max(np.abs(a.m - b.m)):.1e}")

# %%
# the 90 degree meridian lands half a turn of phi away
print(tc.boundary_identified((np.pi / 2, 0.0), (0.0, np.pi)))
