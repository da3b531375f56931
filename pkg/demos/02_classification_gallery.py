"""Classify the whole model gallery from entry-time tables alone.

A single rule set sorts every norm curve into one of four classes by looking
at the tail of the u_r gaps: any infinite gap means unstable, a tail bounded
away from zero means stable with index 1/lim(u_r), a vanishing tail means
superstable, and a summable tail means the norm dies outright at time
sum(u_r).
"""

import semistab as ss

CASES = [
    "scalar-decay nu=2",
    "scalar-decay nu=0.5",
    "gaussian-shift",
    "nilpotent-shift L=1",
    "damped-nilpotent nu=1 L=1",
    "matrix [[-1,10],[0,-1]]",
    "matrix [[0,1],[0,0]]",
]

print(f"{'model':34s} {'verdict':24s} {'nu':>8s} {'k':>8s}")
print("-" * 78)
for spec in CASES:
    model = ss.build_model_from_spec(spec)
    table = ss.entry_time_table(model.trajectory(), 40)
    verdict = ss.classify(table)
    nu = f"{verdict.nu:.4f}" if verdict.nu is not None else "-"
    k = f"{verdict.k:.4f}" if verdict.k is not None else "-"
    print(f"{spec:34s} {verdict.verdict:24s} {nu:>8s} {k:>8s}")

print()
print("Note the last row: the generator [[0,1],[0,0]] has spectrum {0}, yet")
print("the norm of exp(tA) grows like t, so the entry-time route correctly")
print("reports instability where an eigenvalue glance would see marginality.")
