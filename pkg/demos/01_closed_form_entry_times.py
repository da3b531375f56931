"""Entry times of the three closed-form reference decays.

Every decay profile is summarized by its entry times t_r: the moment after
which the norm stays at or below e^-r forever.  The gaps u_r = t_{r+1} - t_r
tell the whole stability story:

  * plain exponential decay  -> constant gaps (1/rate)
  * faster-than-exponential  -> gaps shrinking to zero
  * hard cutoff              -> gaps summing to the extinction time

This script computes the tables numerically and lines them up against the
exact formulas.
"""

import semistab as ss
from semistab.oracles import closed_form_entry_times

R_MAX = 12

MODELS = [
    (ss.ScalarDecay(2.0), "t_r = r/2, so u_r = 0.5 everywhere"),
    (ss.GaussianShift(), "t_r = 2*sqrt(r), so u_r = 2(sqrt(r+1)-sqrt(r)) -> 0"),
    (ss.NilpotentShift(1.0), "t_r = 1 for every r >= 1, so u_0 = 1 and then 0"),
]

for model, story in MODELS:
    table = ss.entry_time_table(model.trajectory(), R_MAX)
    exact = closed_form_entry_times(model, R_MAX)
    worst = max(abs(a - b) for a, b in zip(table.t, exact.t))
    print(f"== {model.spec_string()}")
    print(f"   {story}")
    print("   r:   " + "  ".join(f"{r:7d}" for r in range(6)))
    print("   t_r: " + "  ".join(f"{table.t[r]:7.4f}" for r in range(6)))
    print("   u_r: " + "  ".join(f"{table.u[r]:7.4f}" for r in range(6)))
    print(f"   max |t_r - closed form| over r <= {R_MAX}: {worst:.2e}")
    print()

print("The bisection reproduces every closed form to the time tolerance;")
print("watch how only the Gaussian-weighted shift has gaps that keep falling")
print("while the cutoff shift spends its entire budget on u_0.")
