# %% [markdown]
# # Classifying and contracting loops
#
# Lifting a loop to the quaternion sphere and checking whether the lift
# closes gives its class.  Loops of class +1 are contracted explicitly; the
# result is a grid whose rows are loops, shrinking to the constant loop.

# %%
import numpy as np

from so3topo import axis_rotation_loop, classify, concat, contract, lift, random_loop, verify_homotopy
from so3topo.errors import NotNullHomotopic

one_turn = axis_rotation_loop((0, 0, 1), 2 * np.pi, 100)
print(classify(one_turn), lift(one_turn).end)

# %%
try:
    contract(one_turn)
except NotNullHomotopic as exc:
    print("one_turn:", exc)

# %%
two_turns = concat(one_turn, one_turn)
grid = contract(two_turns, rng=0)
print(grid.shape, grid.meta["stages"], "stages")
print(verify_homotopy(grid, two_turns).summary())

# %%
# rotation angle of every node, stage by stage; it has to reach zero
from so3topo.rotation import quat_to_matrix_array

angles = np.arccos(np.clip((np.trace(quat_to_matrix_array(grid.rows), axis1=-2, axis2=-1) - 1) / 2, -1, 1))
for s in np.linspace(0, grid.shape[0] - 1, 6).astype(int):
    print(f"row {s:4d}: max angle {angles[s].max():.3f}")

# %%
# random loops through three waypoints split roughly evenly between the classes
classes = [classify(random_loop(seed, 3)) for seed in range(200)]
print(sum(c.sign == -1 for c in classes), "of 200 nontrivial")
