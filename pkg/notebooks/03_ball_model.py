# %% [markdown]
# # Ball model and crossing parity
#
# A rotation by angle theta about n is the point theta * n of the closed
# ball of radius pi, with opposite boundary points identified.  A loop is
# nontrivial exactly when it jumps across the boundary an odd number of times.

# %%
import numpy as np

from so3topo import axis_rotation_loop, concat, crossing_parity
from so3topo.ball_chart import ball_jump_count, to_ball_array

one_turn = axis_rotation_loop((0, 0, 1), 2 * np.pi, 40)
v = to_ball_array(one_turn.samples)
print(np.round(v[18:23], 3))

# %%
print("jumps:", ball_jump_count(one_turn), "class:", crossing_parity(one_turn))

two_turns = concat(one_turn, one_turn)
print("jumps:", ball_jump_count(two_turns), "class:", crossing_parity(two_turns))

# %% [markdown]
# Parity needs fine sampling: a coarse step could be mistaken for a jump,
# so the classifier refuses loops with steps of 0.2 rad or more.

# %%
from so3topo import RefinementRequired

try:
    crossing_parity(axis_rotation_loop((0, 0, 1), 2 * np.pi, 8))
except RefinementRequired as exc:
    print("refused:", exc)
