"""Self-contained numerical kernels.

Matrix exponentials, spectral norms, the gamma function, and adaptive
quadrature on finite or semi-infinite intervals.  All operations are pure
functions of their inputs; the only randomness is the seeded start vector of
the power iteration, so results are reproducible bit for bit.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, InvalidModel, NumericsFailure

#: Default seed for the power-iteration start vector.  The CLI wires the
#: ENTRYTIME_SEED environment variable through to this value.
DEFAULT_SEED = 1863

#: Partial integrals beyond this magnitude are declared divergent.
DIVERGENCE_THRESHOLD = 1.0e12

_SERIES_CUTOFF = 1.0e-16   # term-to-sum ratio at which the Taylor series stops
_SCALED_NORM_TARGET = 0.5  # squarings bring the scaled norm at or below this


# ---------------------------------------------------------------------------
# matrix exponential


def _as_square_matrix(a):
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidModel(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidModel("matrix entries must be finite")
    return m


def matrix_exponential(a, t):
    """Evaluate exp(t*a) by scaling and squaring a truncated Taylor series.

    The matrix is rescaled so its row-sum norm is at or below 0.5, the series
    is summed until a term falls below 1e-16 of the running sum, and the
    result is squared back up.  ``t`` must be finite and nonnegative.
    """
    m = _as_square_matrix(a)
    t = float(t)
    if math.isnan(t) or math.isinf(t):
        raise InvalidArgument(f"time must be finite, got {t}")
    if t < 0.0:
        raise InvalidArgument(f"time must be nonnegative, got {t}")
    return _expm(m * t)


def _expm(b):
    norm = float(np.max(np.abs(b).sum(axis=1))) if b.size else 0.0
    squarings = 0
    if norm > _SCALED_NORM_TARGET:
        squarings = int(math.ceil(math.log2(norm / _SCALED_NORM_TARGET)))
        b = b / (2.0**squarings)
        norm = norm / (2.0**squarings)
    n = b.shape[0]
    acc = np.eye(n)
    term = acc
    # ||term_k|| <= ||term_{k-1}||*||B||/k bounds the term without touching
    # the matrices; ||exp(B)|| >= exp(-1/2) here, so an absolute cutoff is
    # the term-to-sum ratio rule
    term_bound = 1.0
    for k in range(1, 64):
        term = term @ b / k
        acc = acc + term
        term_bound *= norm / k
        if term_bound <= _SERIES_CUTOFF:
            break
    with np.errstate(over="ignore", invalid="ignore"):
        # growing semigroups overflow at large times; callers treat a
        # non-finite exponential as having infinite norm
        for _ in range(squarings):
            acc = acc @ acc
    return acc


# ---------------------------------------------------------------------------
# operator (spectral) norm


def _power_iteration(m, tol, seed, start, max_iter, stall_tol=None):
    """Power iteration on the Gram product M^T M.

    Returns (sigma, vector, iterations, converged).  Convergence is declared
    when successive Rayleigh-quotient estimates differ by less than
    tol * estimate, or when the geometric remainder bound diff * q/(1-q)
    (q being the measured ratio of successive differences) falls below
    tol * estimate.  The matrix is pre-scaled by its largest entry so that
    the Gram product cannot underflow for uniformly tiny matrices.

    Nearly coincident leading singular values push q toward 1 and the
    estimate crawls; for exp(t*A) at small times the entire singular
    spectrum clusters this way.  ``stall_tol``, if given, accepts the
    estimate at the iteration cap whenever the remainder bound certifies it
    to stall_tol * estimate, instead of reporting failure.
    """
    cols = m.shape[1]
    scale = float(np.abs(m).max()) if m.size else 0.0
    if scale == 0.0:
        return 0.0, None, 0, True
    # the Gram iteration fourth-powers the scale; keep it near 1 so nothing
    # drops into subnormal range
    if scale < 1e-16 or scale > 1e16:
        sigma, vec, its, ok = _power_iteration(m / scale, tol, seed, start, max_iter, stall_tol)
        return sigma * scale, vec, its, ok
    if start is not None and float(np.linalg.norm(start)) > 0.0:
        v = np.asarray(start, dtype=float)
        v = v / np.linalg.norm(v)
    else:
        rng = np.random.default_rng(DEFAULT_SEED if seed is None else seed)
        v = rng.standard_normal(cols)
        v /= np.linalg.norm(v)
    prev = None
    prev_diff = None
    remainder = math.inf
    sigma = 0.0
    sigma_mid = None
    reseeds = 0
    for it in range(1, max_iter + 1):
        w = m @ v
        g = m.T @ w
        sigma = math.sqrt(max(float(v @ g), 0.0))
        if it == max_iter // 2:
            sigma_mid = sigma
        if prev is not None:
            diff = abs(sigma - prev)
            if diff <= tol * max(sigma, 1e-300):
                return sigma, v, it, True
            if prev_diff is not None and 0.0 < diff < prev_diff:
                q = diff / prev_diff
                remainder = diff * q / (1.0 - q)
                if remainder <= tol * max(sigma, 1e-300):
                    return sigma, v, it, True
            prev_diff = diff
        prev = sigma
        gn = float(np.linalg.norm(g))
        if gn == 0.0:
            # start vector landed in the kernel; retry from a fresh seed
            if reseeds >= 2:
                return sigma, v, it, False
            reseeds += 1
            rng = np.random.default_rng((DEFAULT_SEED if seed is None else seed) + reseeds)
            v = rng.standard_normal(cols)
            v /= np.linalg.norm(v)
            prev = None
            prev_diff = None
            continue
        v = g / gn
    if stall_tol is not None:
        scale_ref = max(sigma, 1e-300)
        if remainder <= stall_tol * scale_ref:
            return sigma, v, max_iter, True
        # drift acceptance: if the estimate moved less than half the stall
        # tolerance over the entire second half of the budget, the cluster
        # the iteration is stuck in is itself below the stall tolerance
        if sigma_mid is not None and abs(sigma - sigma_mid) <= 0.5 * stall_tol * scale_ref:
            return sigma, v, max_iter, True
    return sigma, v, max_iter, False


def operator_norms_batch(mats, tol=1e-10, *, seed=None, max_iter=2000, stall_tol=None):
    """Spectral norms of a stack of matrices, iterated in lockstep.

    Same Gram-product power iteration as :func:`operator_norm`, vectorized
    over the leading axis with converged entries retired from the active
    set as they settle (including via the geometric remainder bound, see
    :func:`operator_norm`).  Entries that fail to converge within the cap
    are finished off individually.
    """
    mats = np.asarray(mats, dtype=float)
    if mats.ndim != 3:
        raise InvalidArgument("expected a stack of matrices (B, n, n)")
    b, _, cols = mats.shape
    if b == 0:
        return np.empty(0)
    finite = np.isfinite(mats).all(axis=(1, 2))
    scales = np.abs(np.where(np.isfinite(mats), mats, 0.0)).max(axis=(1, 2))
    out = np.full(b, math.inf)
    out[finite] = 0.0
    live = finite & (scales > 0.0)
    if not np.any(live):
        return out
    m_all = mats[live] / scales[live, None, None]
    n_live = m_all.shape[0]
    rng = np.random.default_rng(DEFAULT_SEED if seed is None else seed)
    v0 = rng.standard_normal(cols)
    v0 /= np.linalg.norm(v0)

    result = np.zeros(n_live)
    active = np.arange(n_live)
    m = m_all
    mt = np.swapaxes(m, 1, 2)
    v = np.broadcast_to(v0, (n_live, cols)).copy()
    prev = np.full(n_live, np.nan)
    prev_diff = np.full(n_live, np.nan)
    for it in range(max_iter):
        w = np.einsum("bij,bj->bi", m, v)
        g = np.einsum("bij,bj->bi", mt, w)
        sigma = np.sqrt(np.maximum(np.einsum("bi,bi->b", v, g), 0.0))
        floor = np.maximum(sigma, 1e-300)
        diff = np.abs(sigma - prev)
        done = diff <= tol * floor
        with np.errstate(invalid="ignore", divide="ignore"):
            q = diff / prev_diff
            remainder = diff * q / (1.0 - q)
            done |= (diff < prev_diff) & (remainder <= tol * floor)
        gn = np.linalg.norm(g, axis=1)
        done |= gn == 0.0  # Gram kernel hit: the estimate is final
        done &= ~np.isnan(prev)
        if bool(done.any()):
            result[active[done]] = sigma[done]
            keep = ~done
            active = active[keep]
            if active.size == 0:
                break
            m, mt = m[keep], mt[keep]
            sigma, gn, diff, g = sigma[keep], gn[keep], diff[keep], g[keep]
        prev = sigma
        prev_diff = diff
        v = g / gn[:, None]
    if active.size:
        result[active] = sigma
        for j, i in enumerate(active):
            result[i] = operator_norm(
                m[j], tol, seed=seed, start=v[j], max_iter=8000, stall_tol=stall_tol
            )
    out[live] = result * scales[live]
    return out


def operator_norm(m, tol=1e-10, *, seed=None, start=None, max_iter=10000, stall_tol=None):
    """Largest singular value of ``m`` via power iteration on the Gram product.

    ``start`` optionally warm-starts the iteration (e.g. with the singular
    vector from a nearby matrix).  Raises :class:`NumericsFailure` carrying
    the best estimate if the iteration cap is reached without convergence;
    ``stall_tol`` optionally accepts a stalled near-degenerate iteration
    whose geometric remainder bound certifies that relative accuracy.
    """
    mm = np.asarray(m, dtype=float)
    if mm.ndim != 2:
        raise InvalidArgument(f"expected a 2-d matrix, got ndim={mm.ndim}")
    if not np.all(np.isfinite(mm)):
        raise InvalidArgument("matrix entries must be finite")
    if not tol > 0.0:
        raise InvalidArgument(f"tol must be positive, got {tol}")
    sigma, _, _, ok = _power_iteration(mm, tol, seed, start, max_iter, stall_tol)
    if not ok:
        raise NumericsFailure(
            f"power iteration did not converge within {max_iter} iterations",
            best_estimate=sigma,
        )
    return sigma


# ---------------------------------------------------------------------------
# gamma function

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_eval(x):
    """Gamma function for positive real arguments (Lanczos, g=7, 9 terms).

    Relative error is well below 1e-10 on [0.1, 50].  Arguments beyond the
    double-precision range (~171.6) return +inf.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise InvalidArgument(f"gamma requires a positive finite argument, got {x}")
    if x > 171.62:
        return math.inf
    if x < 0.5:
        return gamma_eval(x + 1.0) / x
    z = x - 1.0
    s = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        s += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    if z > 130.0:
        # avoid overflow in t**(z+0.5) for large arguments
        return math.exp((z + 0.5) * math.log(t) - t + math.log(math.sqrt(2.0 * math.pi) * s))
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * s


# ---------------------------------------------------------------------------
# adaptive quadrature

TAIL_DOUBLING = "geometric-horizon-doubling"
TAIL_CLOSED = "closed-cutoff"

VALUE = "value"
DIVERGENT = "divergent"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class QuadratureSpec:
    """Interval and tolerances for :func:`integrate_adaptive`.

    ``upper`` may be +inf, in which case the tail is integrated over
    geometrically doubled horizons until the increments certify convergence
    or divergence.
    """

    lower: float
    upper: float = math.inf
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    max_subdivisions: int = 4000
    tail_policy: str = TAIL_DOUBLING

    def __post_init__(self):
        if not (self.lower >= 0.0 and math.isfinite(self.lower)):
            raise InvalidArgument(f"lower limit must be finite and >= 0, got {self.lower}")
        if not self.upper >= self.lower:
            raise InvalidArgument("upper limit must be at or above the lower limit")
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise InvalidArgument("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise InvalidArgument("max_subdivisions must be a positive integer")
        if self.tail_policy not in (TAIL_DOUBLING, TAIL_CLOSED):
            raise InvalidArgument(f"unknown tail policy {self.tail_policy!r}")
        if math.isinf(self.upper) and self.tail_policy == TAIL_CLOSED:
            raise InvalidArgument("closed-cutoff requires a finite upper limit")


@dataclass(frozen=True)
class IntegralResult:
    """Verdict of an adaptive integration: a value, divergence, or neither."""

    kind: str
    value: float | None = None
    error: float | None = None
    horizon: float | None = None

    @property
    def is_value(self):
        return self.kind == VALUE

    @property
    def is_divergent(self):
        return self.kind == DIVERGENT


# Gauss-Kronrod 7/15 nodes and weights on [-1, 1]; the embedded Gauss-7 rule
# uses the odd-indexed nodes.
_GK_NODES = np.array([
    -0.9914553711208126, -0.9491079123427585, -0.8648644233597691,
    -0.7415311855993945, -0.5860872354676911, -0.4058451513773972,
    -0.2077849550078985, 0.0, 0.2077849550078985, 0.4058451513773972,
    0.5860872354676911, 0.7415311855993945, 0.8648644233597691,
    0.9491079123427585, 0.9914553711208126,
])
_GK_WEIGHTS = np.array([
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278, 0.2044329400752989,
    0.1903505780647854, 0.1690047266392679, 0.1406532597155259,
    0.1047900103222502, 0.0630920926299786, 0.0229353220105292,
])
_G7_WEIGHTS = np.array([
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
    0.1294849661688697,
])


def _ensure_vectorized(f, lower, upper):
    """Return a callable mapping an ndarray of abscissae to an ndarray."""
    span = 1.0 if math.isinf(upper) else max(upper - lower, 1e-6)
    probe = lower + span * np.array([0.2123, 0.6789])
    try:
        out = np.asarray(f(probe), dtype=float)
        if out.shape == probe.shape:
            return lambda xs: np.asarray(f(xs), dtype=float)
    except (TypeError, ValueError, AttributeError, IndexError):
        pass
    except Exception:
        # the evaluator itself objects near these points; fall back and let the
        # real evaluation surface the error where it matters
        pass
    return lambda xs: np.array([float(f(x)) for x in np.atleast_1d(xs)], dtype=float)


def _gk15(fv, a, b):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    y = fv(c + h * _GK_NODES)
    if not np.all(np.isfinite(y)):
        raise NumericsFailure(f"integrand returned a non-finite value on [{a}, {b}]")
    k = h * float(_GK_WEIGHTS @ y)
    g = h * float(_G7_WEIGHTS @ y[1::2])
    return k, abs(k - g)


def _graded_edges(a, b, grade_lower):
    """Initial panel edges, geometrically refined toward the lower endpoint.

    A power-law spike sitting within a relative distance 1e-8 of the lower
    endpoint is invisible to the Kronrod nodes of one wide panel; pre-grading
    guarantees it lands inside a panel of comparable width.
    """
    if not grade_lower:
        return [a, b]
    width = b - a
    edges = [a]
    scale = 1e-8
    while scale < 1.0:
        edges.append(a + width * scale)
        scale *= 8.0
    edges.append(b)
    return edges


def _refine_finite(fv, a, b, abs_budget, rel_tol, max_splits, grade_lower=True):
    """Adaptive bisection with a worst-panel-first heap.

    Bisection concentrates panels geometrically toward any integrable endpoint
    singularity, which is what makes x**p with p in (-1, 0) tractable.
    Returns (value, error_estimate, splits_used, diverged).
    """
    if b <= a:
        return 0.0, 0.0, 0, False
    total, toterr = 0.0, 0.0
    splits = 0
    counter = 0  # heap tie-breaker
    heap = []
    edges = _graded_edges(a, b, grade_lower)
    for lo, hi in zip(edges, edges[1:]):
        k, e = _gk15(fv, lo, hi)
        total += k
        toterr += e
        counter += 1
        heapq.heappush(heap, (-e, counter, lo, hi, k, e))
    # target half the budget: |K15-G7| is a heuristic that can under-report
    while toterr > 0.5 * max(abs_budget, rel_tol * abs(total)) and splits < max_splits:
        _, _, a0, b0, k0, e0 = heapq.heappop(heap)
        width_floor = 1e-15 * max(abs(a0), abs(b0), 1.0)
        if b0 - a0 <= width_floor:
            # cannot refine further in double precision; put it back and stop
            counter += 1
            heapq.heappush(heap, (-e0, counter, a0, b0, k0, e0))
            break
        m = 0.5 * (a0 + b0)
        k1, e1 = _gk15(fv, a0, m)
        k2, e2 = _gk15(fv, m, b0)
        total += k1 + k2 - k0
        toterr += e1 + e2 - e0
        splits += 1
        counter += 1
        heapq.heappush(heap, (-e1, counter, a0, m, k1, e1))
        counter += 1
        heapq.heappush(heap, (-e2, counter, m, b0, k2, e2))
        if abs(total) > DIVERGENCE_THRESHOLD:
            return total, toterr, splits, True
    return total, toterr, splits, False


_INITIAL_TAIL_SPAN = 16.0
_MAX_TAIL_SEGMENTS = 60
# increments failing to decay by at least this fraction per doubled horizon
# are treated as non-decaying (catches exactly-harmonic tails)
_DECAY_SLACK = 0.01


def integrate_adaptive(f, spec):
    """Integrate ``f`` over ``[spec.lower, spec.upper)`` with verdict semantics.

    Returns an :class:`IntegralResult`:

    * ``value``   -- the partial integrals converged within tolerance (for
      infinite upper limits a geometric tail estimate is folded in);
    * ``divergent`` -- the partial integral exceeded 1e12, or the increments
      over successive doubled horizons stopped decaying;
    * ``inconclusive`` -- neither verdict could be certified before the
      subdivision or horizon budget ran out (the horizon reached is reported).

    A non-finite integrand value raises :class:`NumericsFailure`.
    """
    if not isinstance(spec, QuadratureSpec):
        raise InvalidArgument("spec must be a QuadratureSpec")
    if spec.upper == spec.lower:
        return IntegralResult(VALUE, value=0.0, error=0.0)
    fv = _ensure_vectorized(f, spec.lower, spec.upper)
    tol = lambda total: max(spec.abs_tol, spec.rel_tol * abs(total))

    if math.isfinite(spec.upper):
        val, err, _, diverged = _refine_finite(
            fv, spec.lower, spec.upper, spec.abs_tol, spec.rel_tol, spec.max_subdivisions
        )
        if diverged:
            return IntegralResult(DIVERGENT, value=val, horizon=spec.upper)
        if err <= 8.0 * tol(val):
            return IntegralResult(VALUE, value=val, error=err)
        return IntegralResult(INCONCLUSIVE, value=val, error=err, horizon=spec.upper)

    # semi-infinite: geometric horizon doubling.  Each segment gets a capped
    # share of the split budget so one stubborn segment cannot starve the
    # doubling loop that decides the verdict.
    budget = spec.max_subdivisions
    seg_cap = max(256, spec.max_subdivisions // 8)
    seg_abs = spec.abs_tol / 8.0
    horizon = spec.lower + _INITIAL_TAIL_SPAN
    total, toterr, used, diverged = _refine_finite(
        fv, spec.lower, horizon, seg_abs, spec.rel_tol / 4.0, min(budget, seg_cap)
    )
    if diverged:
        return IntegralResult(DIVERGENT, value=total, horizon=horizon)
    budget -= used
    prev_inc = None
    for _ in range(_MAX_TAIL_SEGMENTS):
        if budget <= 0:
            return IntegralResult(INCONCLUSIVE, value=total, error=toterr, horizon=horizon)
        nxt = horizon * 2.0
        inc, inc_err, used, diverged = _refine_finite(
            fv, horizon, nxt, seg_abs, spec.rel_tol / 4.0, min(budget, seg_cap),
            grade_lower=False,
        )
        budget -= used
        total += inc
        toterr += inc_err
        horizon = nxt
        if diverged or abs(total) > DIVERGENCE_THRESHOLD:
            return IntegralResult(DIVERGENT, value=total, horizon=horizon)
        inc = abs(inc)
        if prev_inc is not None:
            if inc > tol(total) and inc >= prev_inc * (1.0 - _DECAY_SLACK):
                return IntegralResult(DIVERGENT, value=total, horizon=horizon)
            ratio = inc / prev_inc if prev_inc > 0.0 else 0.0
            if ratio < 0.95:
                tail = inc * ratio / (1.0 - ratio) if ratio > 0.0 else 0.0
                if tail <= tol(total):
                    return IntegralResult(VALUE, value=total + tail, error=toterr + tail)
        elif inc == 0.0:
            return IntegralResult(VALUE, value=total, error=toterr)
        prev_inc = inc
    return IntegralResult(INCONCLUSIVE, value=total, error=toterr, horizon=horizon)
