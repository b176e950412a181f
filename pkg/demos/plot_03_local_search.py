"""
Local search on a generated instance
====================================

Run both neighbourhood variants on the same problem and inspect what came
back.
"""

from smti import SearchConfig, Variant, blocking_pairs, search
from smti.generator import GenParams, generate

inst = generate(GenParams(n=100, p1=0.3, p2=0.2, seed=11))

for variant in Variant:
    res = search(inst, SearchConfig(variant=variant, max_steps=5000, seed=3))
    print(f"{variant.value:4s}: stable={res.stable} perfect={res.perfect} size={res.size} "
          f"steps={res.steps_taken} restarts={res.restarts} walks={res.walks} "
          f"time={res.wall_time:.3f}s")

# The undominated variant usually finishes in a few hundred steps, while the
# plain variant often exhausts its budget here without reaching stability.
res = search(inst, SearchConfig(seed=3))
assert not blocking_pairs(inst, res.best)

###############################################################################
# Watching a run
# --------------
# A trajectory samples the best marriage found so far.
res = search(inst, SearchConfig(seed=3, trajectory_stride=25))
for step, nbp, singles in res.trajectory:
    print(f"step {step:4d}: blocking pairs {nbp:5d}, singles {singles:3d}")
