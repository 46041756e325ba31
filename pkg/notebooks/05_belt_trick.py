# %% [markdown]
# # The belt trick
#
# One end of a belt is fixed to a wall, the other to an object.  Turning the
# object by a full turn twists the belt in a way that cannot be undone
# without turning the object back.  After a second full turn, about any
# axis, the belt can be flattened with the object held still.

# %%
import numpy as np

from so3topo import closed_ribbon, new_belt, rotate_object, untwist, untwistable, verify_homotopy
from so3topo.rotation import quat_to_matrix_array

belt = rotate_object(new_belt(), (0, 0, 1), 2 * np.pi)
print(belt.history, untwistable(belt))

# %%
belt = rotate_object(belt, (1, 0, 0), 2 * np.pi)
print(belt.history, untwistable(belt))

# %%
movie = untwist(belt)
print(movie.shape, verify_homotopy(movie, closed_ribbon(belt)).passed)

# %%
# the wall end and the object end stay fixed in every frame
frames = quat_to_matrix_array(movie.rows)
print(np.abs(frames[:, 0] - np.eye(3)).max(), np.abs(frames[:, -1] - np.eye(3)).max())

# %%
# how twisted is the belt in each frame? largest rotation angle along it
ang = np.arccos(np.clip((np.trace(frames, axis1=-2, axis2=-1) - 1) / 2, -1, 1))
print(np.round(ang.max(axis=1)[:: max(1, len(ang) // 8)], 3))
