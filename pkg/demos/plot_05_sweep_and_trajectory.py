"""
Small sweep and trajectory export
=================================

The benchmark harness writes plot-ready CSV.  This runs a reduced grid so it
finishes in seconds; the ``smti sweep`` command runs the full one.
"""

import io

from smti import SearchConfig
from smti.bench import SweepSpec, run_sweep, trajectory_stats, write_sweep, write_trajectory
from smti.generator import generate, grid_params

spec = SweepSpec(sizes=(30,), p1_values=(0.2, 0.8), p2_values=(0.0, 0.5, 1.0),
                 instances_per_cell=5, config=SearchConfig(max_steps=5000), base_seed=1)
cells, runs = run_sweep(spec)
buf = io.StringIO()
write_sweep(cells, spec, buf)
print(buf.getvalue())

###############################################################################
# Trajectories
# ------------
# Averages of the best-so-far marriage, divided by n, at chosen steps.
instances = [generate(p) for p in grid_params(50, (0.3,), (0.5,), 5, base_seed=2)]
stats = trajectory_stats(instances, SearchConfig(max_steps=300), steps=range(0, 301, 50))
buf = io.StringIO()
write_trajectory(stats, {"n": 50, "p1": 0.3, "p2": 0.5}, buf)
print(buf.getvalue())
