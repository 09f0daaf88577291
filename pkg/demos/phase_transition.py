"""
A small phase-transition scan
=============================

For each undersampling ratio ``delta = m / n`` the sparsity is increased
until recovery stops succeeding in at least 99% of trials.  This run is
scaled down to finish in a minute or two; the full desk-scale setting is
``BenchmarkPlan()`` with its defaults.
"""

# %%
from bgcsense import BenchmarkPlan, run_plan

for signing in ("unsigned", "signed"):
    plan = BenchmarkPlan(n=40, delta_grid=(0.3, 0.6, 0.9), trials_per_point=30,
                         signing=signing, master_seed=7)
    result = run_plan(plan)
    print(signing)
    for ensemble in plan.ensembles:
        print(f"  {ensemble:12s}", result.curve(ensemble))

# %%
# The same scan is available from the command line, with CSV output:
#
#   bgcsense bench --n 40 --delta 0.3:0.9:2 --trials 30 --signal unsigned --out scan.csv
