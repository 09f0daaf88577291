"""
Greedy construction versus progressive edge growth
==================================================

Progressive edge growth needs a column degree up front and may still end
up with 4-cycles, so it is retried.  The greedy construction only needs
the matrix size.  The regular-degree estimate gives a reference point.
"""

# %%
from bgcsense import ConstructionConfig, bgc_construct, estimate_regular_degree, peg_construct
from bgcsense.construct import best_peg_degree

n = 100
for m in (20, 50, 80):
    config = ConstructionConfig(m, n, seed=0)
    avg = sum(float(bgc_construct(ConstructionConfig(m, n, s)).average_var_degree)
              for s in range(5)) / 5
    peg_degree, peg_report = best_peg_degree(config, max_retries=50)
    d_real, d_int = estimate_regular_degree(m, n)
    print(f"m={m:3d}  greedy avg {avg:5.2f}  PEG uniform {peg_degree}"
          f" ({peg_report.attempts} attempts)  estimate {d_real:.2f} (~{d_int})")

# %%
# Asking PEG for one degree too many: every retry ends with a 4-cycle, and
# the last attempt is returned for inspection.
failed = peg_construct(ConstructionConfig(50, n, 0), uniform_degree=6, max_retries=20)
print("succeeded:", failed.succeeded, "after", failed.attempts, "attempts")
