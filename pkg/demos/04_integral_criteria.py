"""Integral tests for stability classes, and the sandwich that proves them.

Four integral conditions on the norm curve, each sufficient for a class:

  (i)   integral of ||T||^p          finite  ->  stable
  (ii)  integral of |log||T|||^-p    finite (p > 1)  ->  stable
  (iii) integral of |log||T|||^-1    finite  ->  superstable
  (iv)  the p->0 limit of (ii)       finite  ->  finite time extinction

All four integrands have the form F(-log||T||) with F decreasing, so between
consecutive entry times the integral is pinched between sum(u_r F(r+1)) and
sum(u_r F(r)) - which this script verifies numerically.
"""

import math

import semistab as ss

print("criteria across the gallery:")
for spec in ("scalar-decay nu=2", "gaussian-shift", "damped-nilpotent nu=1 L=1",
             "nilpotent-shift L=1"):
    model = ss.build_model_from_spec(spec)
    report = ss.pazy_criteria(model.trajectory())
    fired = ",".join(report.fired) if report.fired else "none"
    extra = ""
    if report.k_surrogate is not None:
        extra = f"  extinction-time surrogate ~ {report.k_surrogate:.3f}"
    print(f"  {spec:28s} fired: {fired:14s} implied: {report.implied}{extra}")

print()
print("the sandwich on pure decay at rate 1, squared-norm weight:")
traj = ss.ScalarDecay(1.0).trajectory()
table = ss.entry_time_table(traj, 25)
sw = ss.ftrick_sandwich(table, traj, ss.NormPower(2.0))
print(f"  sum u_r e^(-2(r+1)) = {sw.lower:.6f}   (= 1/(e^2-1) = {1/(math.e**2-1):.6f})")
print(f"  integral of e^(-2t) = {sw.integral:.6f}")
print(f"  sum u_r e^(-2r)     = {sw.upper:.6f}   (= e^2/(e^2-1) = {math.e**2/(math.e**2-1):.6f})")
print(f"  bracketing holds: {sw.passed}")

print()
print("shrinking-p trace for the cutoff decay (extinction at time 1):")
report = ss.pazy_criteria(ss.DampedNilpotent(1.0, 1.0).trajectory())
for p, kind, value in report.p_limit_trace:
    print(f"  p = {p:9.6f}  ->  {kind}: {value:.6f}")
print("the trace sinks toward the extinction time as p -> 0.")
