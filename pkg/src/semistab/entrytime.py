"""Final and relative entry times of a norm trajectory.

For each integer r >= 0 the final entry time t_r is the first time after
which the trajectory stays at or below exp(-r) forever; the relative entry
time u_r = t_{r+1} - t_r measures how long the curve needs to gain one more
factor of 1/e.  The u_r sequence is nonincreasing, and its limit behaviour
determines the stability class (see :mod:`semistab.classify`).

For contraction trajectories (norm nonincreasing) t_r is found by monotone
bisection against the threshold: the last time the curve sits at or above
exp(-r).  For general trajectories a forward grid scan records the last
downward crossing and keeps doubling the horizon until a sustained
below-threshold window is observed; trajectories that never settle below the
threshold before the horizon cap are reported as +inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument

STATUS_EXACT = "exact"
STATUS_BISECTED = "bisected"
STATUS_HORIZON = "horizon"
STATUS_WIDENED = "widened"


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the entry-time searches.

    ``time_tol`` is the final bisection width; ``grid_step`` the scan
    resolution for non-monotone trajectories; ``horizon_start`` both the
    initial search span and the length of the sustained-below window that
    certifies a crossing as final; ``horizon_cap`` the absolute give-up
    point; ``norm_floor`` the value treated as an exact zero.
    """

    time_tol: float = 1e-8
    grid_step: float = 1e-3
    horizon_start: float = 16.0
    horizon_cap: float = 1e4
    norm_floor: float = 1e-300

    def __post_init__(self):
        if not (0.0 < self.time_tol < self.grid_step < self.horizon_start <= self.horizon_cap):
            raise InvalidArgument(
                "require 0 < time_tol < grid_step < horizon_start <= horizon_cap"
            )
        if self.norm_floor < 0.0:
            raise InvalidArgument("norm_floor must be nonnegative")


@dataclass(frozen=True)
class EntryTime:
    """An entry time plus how it was determined.

    ``status`` is one of exact / bisected / horizon / widened; ``tol`` is the
    bracket width actually achieved (inf for horizon-limited results, larger
    than time_tol for widened ones).
    """

    time: float
    status: str
    tol: float

    @property
    def is_finite(self):
        return math.isfinite(self.time)


def final_entry_time(traj, r, cfg=None):
    """Entry time of the whole trajectory into the exp(-r) ball."""
    cfg = cfg or SearchConfig()
    _check_r(r, cfg)
    return _entry_time_from(traj, int(r), 0.0, cfg)


def vector_entry_time(model, x, r, cfg=None):
    """Entry time of a single unit-vector orbit of a matrix semigroup."""
    cfg = cfg or SearchConfig()
    _check_r(r, cfg)
    traj = model.vector_trajectory(x)
    return _entry_time_from(traj, int(r), 0.0, cfg)


def _check_r(r, cfg):
    if r < 0 or int(r) != r:
        raise InvalidArgument(f"r must be a nonnegative integer, got {r}")
    if math.exp(-float(r)) <= cfg.norm_floor:
        raise InvalidArgument(f"threshold exp(-{r}) is below the norm floor")


def _entry_time_from(traj, r, left, cfg):
    threshold = math.exp(-r)
    if traj.evaluate(left) <= cfg.norm_floor:
        # exact-zero plateau: the norm vanished at or before the left bound,
        # so every later entry time collapses onto the same boundary
        return EntryTime(left, STATUS_EXACT, 0.0)
    if traj.is_contraction:
        if r == 0 and left == 0.0 and traj.evaluate(0.0) <= 1.0 + 1e-12:
            # a contraction never exceeds its initial value, so the curve is
            # at or below exp(0) from the start
            return EntryTime(0.0, STATUS_EXACT, 0.0)
        return _bisect_monotone(traj.evaluate, threshold, left, cfg)
    return _scan_last_crossing(traj, threshold, left, cfg)


def _bisect_monotone(f, threshold, left, cfg):
    """Last time a nonincreasing curve sits at or above the threshold."""
    if f(left) < threshold:
        # already below at the left bound and nonincreasing afterwards
        return EntryTime(left, STATUS_EXACT, 0.0)
    span = cfg.horizon_start
    while True:
        hi = left + span
        if hi >= cfg.horizon_cap:
            if f(cfg.horizon_cap) >= threshold:
                return EntryTime(math.inf, STATUS_HORIZON, math.inf)
            hi = cfg.horizon_cap
            break
        if f(hi) < threshold:
            break
        span *= 2.0
    lo = left
    while hi - lo > cfg.time_tol:
        mid = 0.5 * (lo + hi)
        if f(mid) >= threshold:
            lo = mid
        else:
            hi = mid
    return EntryTime(0.5 * (lo + hi), STATUS_BISECTED, cfg.time_tol)


def _scan_last_crossing(traj, threshold, left, cfg):
    """Last downward threshold crossing of a general trajectory.

    Scans the lattice of grid_step multiples (so repeated scans at different
    r share cached evaluations), tracking the last point at or above the
    threshold.  The crossing is accepted once everything after it stays below
    through a window of length horizon_start; otherwise the horizon doubles.
    A quick check at the horizon itself skips the dense scan while the curve
    is still above threshold out there.
    """
    h = cfg.grid_step
    f = traj.evaluate
    last_above = left if f(left) >= threshold else None
    scanned_to = left
    span = cfg.horizon_start
    horizon = min(left + span, cfg.horizon_cap)
    while True:
        if f(horizon) >= threshold:
            last_above = horizon
            scanned_to = horizon
            if horizon >= cfg.horizon_cap:
                return EntryTime(math.inf, STATUS_HORIZON, math.inf)
            span *= 2.0
            horizon = min(left + span, cfg.horizon_cap)
            continue
        k0 = int(math.floor(scanned_to / h)) + 1
        k1 = int(math.floor(horizon / h))
        if k1 >= k0:
            ts = np.arange(k0, k1 + 1, dtype=float) * h
            vals = traj.evaluate_many(ts)
            above = ts[vals >= threshold]
            if above.size:
                last_above = float(above[-1])
        scanned_to = horizon
        anchor = last_above if last_above is not None else left
        if horizon - anchor >= cfg.horizon_start:
            return _refine_crossing(f, threshold, anchor, h, horizon, cfg, STATUS_BISECTED)
        if horizon >= cfg.horizon_cap:
            # below threshold at the cap but the quiet window is short:
            # report the best bracket with a widened error bar
            return _refine_crossing(f, threshold, anchor, h, horizon, cfg, STATUS_WIDENED)
        span *= 2.0
        horizon = min(left + span, cfg.horizon_cap)


def _refine_crossing(f, threshold, anchor, h, horizon, cfg, status):
    if f(anchor) < threshold:
        # nothing at or above threshold from the left bound on
        return EntryTime(anchor, status, cfg.time_tol)
    lo = anchor
    hi = min(anchor + h, horizon)
    while hi - lo > cfg.time_tol:
        mid = 0.5 * (lo + hi)
        if f(mid) >= threshold:
            lo = mid
        else:
            hi = mid
    tol = cfg.time_tol if status == STATUS_BISECTED else max(cfg.time_tol, h)
    return EntryTime(0.5 * (lo + hi), status, tol)


# ---------------------------------------------------------------------------
# tables


@dataclass(frozen=True)
class EntryTimeTable:
    """Entry times t_0..t_{r_max+1} and relative entry times u_0..u_{r_max}.

    u_r is +inf exactly when t_{r+1} is +inf; statuses record how each t_r
    was determined.  ``monotonicity_defect`` is the largest observed increase
    u_{r+1} - u_r over finite pairs (the sequence should not increase beyond
    bisection noise).
    """

    r_max: int
    t: tuple
    u: tuple
    statuses: tuple
    time_tol: float
    label: str = ""
    contraction: bool = False

    @property
    def u_array(self):
        return np.asarray(self.u, dtype=float)

    @property
    def has_infinite(self):
        return any(math.isinf(v) for v in self.u)

    @property
    def monotonicity_defect(self):
        worst = 0.0
        for a, b in zip(self.u, self.u[1:]):
            if math.isfinite(a) and math.isfinite(b):
                worst = max(worst, b - a)
        return worst

    def to_csv(self):
        """Serialize as ``r,t_r,u_r,status`` rows; +inf renders as ``inf``."""
        lines = ["r,t_r,u_r,status"]
        for r in range(self.r_max + 2):
            t = _csv_number(self.t[r])
            u = _csv_number(self.u[r]) if r <= self.r_max else ""
            lines.append(f"{r},{t},{u},{self.statuses[r].status}")
        return "\n".join(lines) + "\n"


def _csv_number(x):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.12g}"


def entry_time_table(traj, r_max, cfg=None):
    """Compute t_0..t_{r_max+1} and the u_r differences.

    Each search starts from the previous entry time (the t_r sequence is
    nondecreasing); once a search hits the horizon cap, all later entries are
    +inf as well.
    """
    cfg = cfg or SearchConfig()
    r_max = int(r_max)
    if r_max < 1:
        raise InvalidArgument(f"r_max must be at least 1, got {r_max}")
    _check_r(r_max + 1, cfg)
    entries = []
    left = 0.0
    for r in range(r_max + 2):
        if entries and not entries[-1].is_finite:
            entries.append(EntryTime(math.inf, STATUS_HORIZON, math.inf))
            continue
        et = _entry_time_from(traj, r, left, cfg)
        entries.append(et)
        if et.is_finite:
            left = et.time
    t = tuple(e.time for e in entries)
    u = tuple(
        math.inf if math.isinf(t[r + 1]) else t[r + 1] - t[r]
        for r in range(r_max + 1)
    )
    return EntryTimeTable(
        r_max=r_max, t=t, u=u, statuses=tuple(entries),
        time_tol=cfg.time_tol, label=getattr(traj, "label", ""),
        contraction=traj.is_contraction,
    )
