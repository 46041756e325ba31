# %% [markdown]
# # Rotations and the double cover
#
# A unit quaternion q = (w, x, y, z) and its negative describe the same
# rotation.  Here we check that numerically and look at the canonical lift.

# %%
import numpy as np

from so3topo import matrix_to_quat, quat_from_axis_angle, quat_to_matrix, rotation_distance

q = quat_from_axis_angle((0, 0, 1), np.pi / 3)
print(q)
print(quat_to_matrix(q))

# %%
# -q gives the identical matrix, bit for bit
print(np.array_equal(quat_to_matrix(q).m, quat_to_matrix(-q).m))

# %% [markdown]
# Going back from a matrix we have to choose one of the two quaternions.
# `matrix_to_quat` returns the one with w >= 0.

# %%
print(matrix_to_quat(quat_to_matrix(-q)))

# %%
# a half turn sits exactly on the tie w = 0; the first nonzero of x, y, z is made positive
half = quat_from_axis_angle((0, -1, 0), np.pi)
print(half, "->", matrix_to_quat(quat_to_matrix(half)))

# %%
# rotating by 2*pi is the identity rotation, but the quaternion ends at -1
full = quat_from_axis_angle((1, 0, 0), 2 * np.pi)
print(full.w, rotation_distance(quat_to_matrix(full), np.eye(3)))
