"""Semigroup models and the norm trajectories they induce.

A :class:`NormTrajectory` is the single abstraction the analysis consumes: a
scalar curve t -> ||T(t)|| plus capability flags.  Models produce trajectories
either from closed forms (scalar decay, Gaussian-weighted shift, shifts with a
hard cutoff) or numerically (matrix generators, the discretized fractional
integration operator).
"""

from __future__ import annotations

import ast
import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, InvalidModel, NumericsFailure, SpecError
from .numerics import (
    gamma_eval,
    matrix_exponential,
    operator_norm,
    operator_norms_batch,
    _expm,
    _power_iteration,
)

_MEMO_DIGITS = 12          # trajectory memo keys are times rounded to this many digits
_STALL_TOL = 1e-4          # accepted relative norm error when singular values cluster
_RESYNC_STRIDE = 2048      # steps between direct re-evaluations on a uniform lattice
_FLAG_TOL = 1e-10          # slack when sampling for the contraction flag


class NormTrajectory:
    """A norm curve t -> ||T(t)|| with capability flags.

    ``evaluate`` takes a single nonnegative time; ``evaluate_many`` takes an
    ndarray (models override it with vectorized or lattice-incremental
    implementations).  ``extinction_time`` is the time past which the norm is
    identically zero, or None.  ``eval_error_bound`` is zero for exact closed
    forms and a discretization-error estimate otherwise.
    """

    def __init__(self, evaluate, *, is_contraction, is_norm_continuous, is_exact,
                 eval_error_bound=0.0, extinction_time=None, label="",
                 evaluate_many=None, log_evaluate_many=None, warnings=()):
        self._evaluate = evaluate
        self._evaluate_many = evaluate_many
        self._log_evaluate_many = log_evaluate_many
        self.is_contraction = bool(is_contraction)
        self.is_norm_continuous = bool(is_norm_continuous)
        self.is_exact = bool(is_exact)
        self.eval_error_bound = float(eval_error_bound)
        self.extinction_time = extinction_time
        self.label = label
        self.warnings = tuple(warnings)

    @staticmethod
    def _check_time(t):
        t = float(t)
        if math.isnan(t) or t < 0.0 or math.isinf(t):
            raise InvalidArgument(f"time must be finite and nonnegative, got {t}")
        return t

    def evaluate(self, t):
        value = float(self._evaluate(self._check_time(t)))
        if math.isnan(value):
            raise NumericsFailure(f"norm evaluation returned NaN at t={t}")
        return value

    def evaluate_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        if ts.size and (np.any(ts < 0) or not np.all(np.isfinite(ts))):
            raise InvalidArgument("times must be finite and nonnegative")
        if self._evaluate_many is not None:
            out = np.asarray(self._evaluate_many(ts), dtype=float)
        else:
            out = np.array([float(self._evaluate(t)) for t in ts], dtype=float)
        if np.any(np.isnan(out)):
            raise NumericsFailure("norm evaluation returned NaN")
        return out

    def log_evaluate_many(self, ts, floor=1e-300):
        """log ||T(t)|| on an array of times, -inf where extinct.

        Closed-form models supply an exact log route, which stays meaningful
        long after the norm itself has underflowed; otherwise this falls back
        to the logarithm of the evaluated norm with values at or below
        ``floor`` treated as extinct.
        """
        ts = np.asarray(ts, dtype=float)
        if self._log_evaluate_many is not None:
            return np.asarray(self._log_evaluate_many(ts), dtype=float)
        vals = self.evaluate_many(ts)
        out = np.full(vals.shape, -math.inf)
        live = vals > floor
        out[live] = np.log(vals[live])
        return out


@dataclass(frozen=True)
class SubmultiplicativityReport:
    """Worst violation of evaluate(s+t) <= evaluate(s)*evaluate(t)."""

    max_violation: float
    worst_pair: tuple[float, float] | None
    slack: float
    passed: bool


def validate_submultiplicativity(traj, pairs):
    """Check the semigroup law's norm consequence on a grid of (s, t) pairs.

    The violation at (s, t) is evaluate(s+t) - evaluate(s)*evaluate(t),
    normalized by the product; pass means every violation stays within
    1e-8 + 2 * eval_error_bound.
    """
    slack = 1e-8 + 2.0 * traj.eval_error_bound
    worst = 0.0
    worst_pair = None
    for s, t in pairs:
        vs, vt = traj.evaluate(s), traj.evaluate(t)
        vst = traj.evaluate(s + t)
        violation = vst - vs * vt * (1.0 + slack)
        scale = max(vs * vt, 1e-300)
        rel = violation / scale
        if rel > worst:
            worst = rel
            worst_pair = (s, t)
    return SubmultiplicativityReport(worst, worst_pair, slack, worst <= 0.0)


# ---------------------------------------------------------------------------
# model gallery


class SemigroupModel:
    """Base class: a named model that produces a NormTrajectory."""

    kind = ""

    def norm_at(self, t):
        raise NotImplementedError

    def norm_at_many(self, ts):
        return np.array([self.norm_at(t) for t in np.asarray(ts, dtype=float)])

    def trajectory(self):
        raise NotImplementedError

    def spec_string(self):
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.spec_string()!r}>"


def _check_time(t):
    return NormTrajectory._check_time(t)


class ScalarDecay(SemigroupModel):
    """Pure exponential decay exp(-nu*t): stable with index nu."""

    kind = "scalar-decay"

    def __init__(self, nu):
        if not (float(nu) > 0 and math.isfinite(nu)):
            raise InvalidModel(f"scalar-decay requires nu > 0, got {nu}")
        self.nu = float(nu)

    def norm_at(self, t):
        return math.exp(-self.nu * _check_time(t))

    def norm_at_many(self, ts):
        return np.exp(-self.nu * np.asarray(ts, dtype=float))

    def trajectory(self):
        return NormTrajectory(
            self.norm_at, evaluate_many=self.norm_at_many,
            log_evaluate_many=lambda ts: -self.nu * np.asarray(ts, dtype=float),
            is_contraction=True, is_norm_continuous=True, is_exact=True,
            label=self.spec_string(),
        )

    def spec_string(self):
        return f"scalar-decay nu={self.nu:g}"


class GaussianShift(SemigroupModel):
    """Right shift on a Gaussian-weighted half-line: norm exp(-t^2/4).

    The norm tends to zero faster than any exponential, yet never reaches
    zero: superstable without finite-time extinction.
    """

    kind = "gaussian-shift"

    def norm_at(self, t):
        t = _check_time(t)
        return math.exp(-t * t / 4.0)

    def norm_at_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        return np.exp(-ts * ts / 4.0)

    def trajectory(self):
        return NormTrajectory(
            self.norm_at, evaluate_many=self.norm_at_many,
            log_evaluate_many=lambda ts: -np.asarray(ts, dtype=float) ** 2 / 4.0,
            is_contraction=True, is_norm_continuous=True, is_exact=True,
            label=self.spec_string(),
        )

    def spec_string(self):
        return "gaussian-shift"


class NilpotentShift(SemigroupModel):
    """Shift on L2[0, L] with a hard cutoff: norm 1 before L, 0 after.

    The norm curve jumps at t = L, so this trajectory is *not*
    norm-continuous; threshold-crossing identities that rely on continuity
    are gated off for it.
    """

    kind = "nilpotent-shift"

    def __init__(self, L):
        if not (float(L) > 0 and math.isfinite(L)):
            raise InvalidModel(f"nilpotent-shift requires L > 0, got {L}")
        self.L = float(L)

    def norm_at(self, t):
        return 1.0 if _check_time(t) < self.L else 0.0

    def norm_at_many(self, ts):
        return np.where(np.asarray(ts, dtype=float) < self.L, 1.0, 0.0)

    def trajectory(self):
        return NormTrajectory(
            self.norm_at, evaluate_many=self.norm_at_many,
            log_evaluate_many=lambda ts: np.where(
                np.asarray(ts, dtype=float) < self.L, 0.0, -np.inf),
            is_contraction=True, is_norm_continuous=False, is_exact=True,
            extinction_time=self.L, label=self.spec_string(),
        )

    def spec_string(self):
        return f"nilpotent-shift L={self.L:g}"


class DampedNilpotent(SemigroupModel):
    """Exponential decay exp(-nu*t) up to a hard cutoff at L, zero after.

    Synthetic model whose norm is strictly below 1 on (0, L): unlike the
    plain cutoff shift, reciprocal-log integrands stay finite on the decay
    interval, so every integral criterion is exercised.
    """

    kind = "damped-nilpotent"

    def __init__(self, nu, L):
        if not (float(nu) > 0 and math.isfinite(nu)):
            raise InvalidModel(f"damped-nilpotent requires nu > 0, got {nu}")
        if not (float(L) > 0 and math.isfinite(L)):
            raise InvalidModel(f"damped-nilpotent requires L > 0, got {L}")
        self.nu = float(nu)
        self.L = float(L)

    def norm_at(self, t):
        t = _check_time(t)
        return math.exp(-self.nu * t) if t < self.L else 0.0

    def norm_at_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        return np.where(ts < self.L, np.exp(-self.nu * ts), 0.0)

    def trajectory(self):
        return NormTrajectory(
            self.norm_at, evaluate_many=self.norm_at_many,
            log_evaluate_many=lambda ts: np.where(
                np.asarray(ts, dtype=float) < self.L,
                -self.nu * np.asarray(ts, dtype=float), -np.inf),
            is_contraction=True, is_norm_continuous=False, is_exact=True,
            extinction_time=self.L, label=self.spec_string(),
        )

    def spec_string(self):
        return f"damped-nilpotent nu={self.nu:g} L={self.L:g}"


class MatrixSemigroup(SemigroupModel):
    """Finite-dimensional semigroup exp(t*A) for a square generator A.

    Norms are the largest singular value of exp(t*A), computed by seeded
    power iteration warm-started with the singular vector of the previously
    queried time.  Values are memoized by time rounded to 12 digits, and
    uniformly spaced batches are filled by incremental multiplication with
    exp(h*A) (re-anchored every couple thousand steps), which is what makes
    dense entry-time scans affordable.

    The caches tolerate concurrent readers (dict and array slot writes are
    atomic under the interpreter lock; a lost race just recomputes the same
    value), so trajectories may be shared across threads.
    """

    kind = "matrix"

    def __init__(self, a, *, seed=None, norm_tol=1e-10):
        self.a = _require_generator(a)
        self.seed = seed
        self.norm_tol = float(norm_tol)
        self._memo = {}
        self._lattices = {}  # spacing -> {"step": exp(h*A), "vals": ndarray}
        self._warm = None
        self._traj = None

    def _norm_of_matrix(self, e):
        if not np.all(np.isfinite(e)):
            # the exponential overflowed; the norm is beyond representation
            return math.inf
        sigma, vec, _, ok = _power_iteration(
            e, self.norm_tol, self.seed, self._warm, 10000, stall_tol=_STALL_TOL
        )
        if not ok:
            raise NumericsFailure("operator norm did not converge", best_estimate=sigma)
        if vec is not None:
            self._warm = vec
        return sigma

    def norm_at(self, t):
        t = _check_time(t)
        key = round(t, _MEMO_DIGITS)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        value = self._norm_of_matrix(_expm(self.a * t))
        self._memo[key] = value
        return value

    def norm_at_many(self, ts):
        ts = np.asarray(ts, dtype=float)
        ks, h = _lattice_indices(ts)
        if ks is None:
            return np.array([self.norm_at(t) for t in ts])
        lat = self._lattices.get(round(h, _MEMO_DIGITS))
        if lat is None:
            lat = {"step": matrix_exponential(self.a, h), "vals": np.full(int(ks.max()) + 1, np.nan)}
            self._lattices[round(h, _MEMO_DIGITS)] = lat
        vals = lat["vals"]
        top = int(ks.max())
        if top >= vals.size:
            grown = np.full(top + 1, np.nan)
            grown[: vals.size] = vals
            vals = lat["vals"] = grown
        need = np.unique(ks[np.isnan(vals[ks])])
        if need.size:
            stack = np.empty((need.size, *self.a.shape))
            e = None
            since_sync = 0
            prev_k = None
            for j, kk in enumerate(need):
                gap = None if prev_k is None else int(kk - prev_k)
                if e is None or gap is None or gap > 8 or since_sync >= _RESYNC_STRIDE:
                    e = matrix_exponential(self.a, float(kk) * h)
                    since_sync = 0
                else:
                    for _ in range(gap):
                        e = e @ lat["step"]
                    since_sync += gap
                stack[j] = e
                prev_k = kk
            vals[need] = operator_norms_batch(stack, self.norm_tol, seed=self.seed)
        return vals[ks].copy()

    def log_norm_at(self, t):
        """log ||exp(t*A)||, stable far beyond the underflow point of the norm.

        For times where the norm itself is representable this is just its
        logarithm; deeper in the tail the norm of exp((t/2^K)*A) is squared
        up K times with scalar renormalization, accumulating the log.
        """
        t = _check_time(t)
        direct = self.norm_at(t)
        if direct > 1e-280:
            return math.log(direct) if direct > 0.0 else -math.inf
        k = max(1, int(math.ceil(math.log2(max(t, 1.0)))))
        d = matrix_exponential(self.a, t / 2.0**k)
        log_scale = 0.0
        for _ in range(k):
            n = operator_norm(d, self.norm_tol, seed=self.seed, stall_tol=_STALL_TOL)
            if n == 0.0:
                return -math.inf
            log_scale = 2.0 * (log_scale + math.log(n))
            d = (d / n) @ (d / n)
        n = operator_norm(d, self.norm_tol, seed=self.seed, stall_tol=_STALL_TOL)
        return log_scale + (math.log(n) if n > 0.0 else -math.inf)

    def trajectory(self):
        if self._traj is None:
            flags = _sample_flags(self)
            self._traj = NormTrajectory(
                self.norm_at, evaluate_many=self.norm_at_many,
                log_evaluate_many=lambda ts: np.array(
                    [self.log_norm_at(t) for t in np.asarray(ts, dtype=float)]
                ),
                is_contraction=flags, is_norm_continuous=True, is_exact=False,
                eval_error_bound=1e-6, label=self.spec_string(),
            )
        return self._traj

    def vector_trajectory(self, x):
        """Norm curve t -> ||exp(t*A) x|| for a single unit vector x."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.a.shape[0],):
            raise InvalidArgument(f"vector of length {self.a.shape[0]} required")
        if abs(float(np.linalg.norm(x)) - 1.0) > 1e-12:
            raise InvalidArgument("x must be a unit vector (within 1e-12)")
        parent = self.trajectory()

        def single(t):
            return float(np.linalg.norm(matrix_exponential(self.a, t) @ x))

        def many(ts):
            ts = np.asarray(ts, dtype=float)
            if ts.size < 8 or not _is_uniform(ts):
                return np.array([single(t) for t in ts])
            h = float(ts[1] - ts[0])
            step = matrix_exponential(self.a, h)
            stack = np.empty((ts.size, x.size))
            w = None
            for i, t in enumerate(ts):
                if w is None or i % _RESYNC_STRIDE == 0:
                    w = matrix_exponential(self.a, float(t)) @ x
                else:
                    w = step @ w
                stack[i] = w
            return np.linalg.norm(stack, axis=1)

        # a contraction semigroup contracts every orbit norm as well
        return NormTrajectory(
            single, evaluate_many=many,
            is_contraction=parent.is_contraction, is_norm_continuous=True,
            is_exact=False, eval_error_bound=1e-9,
            label=f"{self.spec_string()} |x orbit",
        )

    def spec_string(self):
        rows = ",".join("[" + ",".join(f"{v:g}" for v in row) + "]" for row in self.a)
        return f"matrix [{rows}]"


def _require_generator(a):
    m = np.asarray(a, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidModel(f"matrix generator must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidModel("matrix generator entries must be finite")
    return m


def _is_uniform(ts):
    d = np.diff(ts)
    return d.size > 0 and float(d.min()) > 0 and float(d.max() - d.min()) <= 1e-9 * float(d.max())


_MAX_LATTICE = 50_000_000


def _lattice_indices(ts, min_size=8):
    """Indices k with ts == k*h on a uniform lattice anchored at zero.

    Returns (None, None) when the points are too few, non-uniform, not
    anchored at integer multiples of their spacing, or absurdly far from the
    origin relative to their spacing (no cache array that size).
    """
    if ts.size < min_size or not _is_uniform(ts):
        return None, None
    h = float(ts[1] - ts[0])
    ks = np.rint(ts / h)
    if float(ks.max()) > _MAX_LATTICE:
        return None, None
    ks = ks.astype(np.int64)
    if float(np.abs(ts - ks * h).max()) > 1e-9 * h:
        return None, None
    return ks, h


def _sample_flags(model, horizon=16.0):
    """Contraction flag by sampling on a diagnostic grid.

    The grid mixes a linear sweep with a geometric prefix so that fast
    transient growth near t=0 is not stepped over.
    """
    grid = np.unique(np.concatenate([
        np.linspace(0.0, horizon, 161),
        np.geomspace(5e-3, 1.0, 25),
    ]))
    vals = model.norm_at_many(grid)
    nonincreasing = bool(np.all(vals[1:] <= vals[:-1] * (1.0 + _FLAG_TOL)))
    return nonincreasing and vals[0] <= 1.0 + _FLAG_TOL


class FractionalIntegration(SemigroupModel):
    """Fractional-integration semigroup on L2[0,1], discretized on n cells.

    T(t) maps f to the order-t fractional integral s -> (1/Gamma(t))
    int_0^s (s-u)^(t-1) f(u) du.  Each matrix entry is the exact integral of
    the kernel over one cell against a piecewise-constant f (the analytic
    antiderivative absorbs the (s-u)^(t-1) singularity for t < 1), and the
    operator norm comes from warm-started power iteration.  The reference
    curve 1/(t*Gamma(t)) is available as :func:`fractional_reference`.
    """

    kind = "fractional-integration"

    def __init__(self, n=400, *, seed=None, norm_tol=1e-8):
        n = int(n)
        if n < 16:
            raise InvalidModel(f"fractional-integration requires n >= 16, got {n}")
        self.n = n
        self.seed = seed
        self.norm_tol = float(norm_tol)
        edges = np.linspace(0.0, 1.0, n + 1)
        mids = 0.5 * (edges[:-1] + edges[1:])
        # log-distances from each collocation point to the cell edges; -inf
        # outside the support makes exp() vanish there without masking
        d0 = mids[:, None] - edges[None, :-1]
        d1 = mids[:, None] - edges[None, 1:]
        with np.errstate(divide="ignore", invalid="ignore"):
            self._log0 = np.where(d0 > 0, np.log(np.where(d0 > 0, d0, 1.0)), -np.inf)
            self._log1 = np.where(d1 > 0, np.log(np.where(d1 > 0, d1, 1.0)), -np.inf)
        self._memo = {}
        self._warm = None
        self._traj = None

    def kernel_matrix(self, t):
        """The discretized operator at order t (lower triangular, n x n)."""
        t = _check_time(t)
        if t == 0.0:
            return np.eye(self.n)
        if t + 1.0 > 171.0:
            return np.zeros((self.n, self.n))
        denom = gamma_eval(t + 1.0)
        if not math.isfinite(denom) or denom == 0.0:
            return np.zeros((self.n, self.n))
        return (np.exp(t * self._log0) - np.exp(t * self._log1)) / denom

    def norm_at(self, t):
        t = _check_time(t)
        if t == 0.0:
            return 1.0
        key = round(t, _MEMO_DIGITS)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        k = self.kernel_matrix(t)
        if not k.any():
            value = 0.0
        else:
            sigma, vec, _, ok = _power_iteration(
                k, self.norm_tol, self.seed, self._warm, 10000, stall_tol=_STALL_TOL
            )
            if not ok:
                raise NumericsFailure("operator norm did not converge", best_estimate=sigma)
            if vec is not None:
                self._warm = vec
            value = sigma
        self._memo[key] = value
        return value

    def trajectory(self):
        if self._traj is None:
            contraction = _sample_flags(self, horizon=8.0)
            self._traj = NormTrajectory(
                self.norm_at,
                is_contraction=contraction, is_norm_continuous=True, is_exact=False,
                eval_error_bound=4.0 / self.n, label=self.spec_string(),
                warnings=("unresolved-kernel",) if self.n < 64 else (),
            )
        return self._traj

    def spec_string(self):
        return f"fractional-integration n={self.n}"


def fractional_reference(t):
    """Reference decay curve 1/(t*Gamma(t)) for the fractional integration norm."""
    t = float(t)
    if t <= 0:
        raise InvalidArgument("t must be positive")
    g = gamma_eval(t + 1.0)
    return 0.0 if math.isinf(g) else 1.0 / g


def fractional_integration_norm(t, n=400, *, seed=None):
    """Discretized fractional-integration operator norm at order t on n cells."""
    return FractionalIntegration(n, seed=seed).norm_at(t)


def norm_at(model, t):
    """Evaluate ||T(t)|| for any model."""
    return model.norm_at(t)


# ---------------------------------------------------------------------------
# model-spec mini-language

_KINDS = ("scalar-decay", "gaussian-shift", "nilpotent-shift",
          "damped-nilpotent", "fractional-integration", "matrix")


def build_model_from_spec(text, *, seed=None):
    """Parse a one-line model spec: ``<kind> key=value ...``.

    Kinds: scalar-decay (nu=), gaussian-shift, nilpotent-shift (L=),
    damped-nilpotent (nu= L=), fractional-integration (n=, default 400),
    matrix (bracketed row list, e.g. ``matrix [[-1,10],[0,-1]]``).
    Raises :class:`SpecError` with the offending character position.
    """
    if not isinstance(text, str) or not text.strip():
        raise SpecError("empty model spec", 0)
    s = text.strip()
    offset = text.find(s)

    bracket = s.find("[")
    head = s if bracket < 0 else s[:bracket]
    tokens = [(m.group(0), offset + m.start()) for m in re.finditer(r"\S+", head)]
    kind, kind_pos = tokens[0]
    if kind not in _KINDS:
        raise SpecError(f"unknown model kind {kind!r}", kind_pos)

    if kind == "matrix":
        if len(tokens) > 1:
            raise SpecError(f"unexpected token {tokens[1][0]!r} before matrix literal", tokens[1][1])
        if bracket < 0:
            raise SpecError("matrix model requires a bracketed row list", offset + len(s))
        literal = s[bracket:]
        try:
            rows = ast.literal_eval(literal)
        except (ValueError, SyntaxError) as exc:
            raise SpecError(f"malformed matrix literal: {exc}", offset + bracket) from None
        try:
            a = np.asarray(rows, dtype=float)
        except (TypeError, ValueError):
            raise SpecError("matrix literal must be a nested list of numbers", offset + bracket) from None
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise SpecError(f"matrix literal must be square, got shape {a.shape}", offset + bracket)
        return MatrixSemigroup(a, seed=seed)

    if bracket >= 0:
        raise SpecError("bracketed literal is only valid for the matrix kind", offset + bracket)

    params = {}
    for tok, pos in tokens[1:]:
        if "=" not in tok:
            raise SpecError(f"expected key=value, got {tok!r}", pos)
        key, _, raw = tok.partition("=")
        try:
            value = float(raw)
        except ValueError:
            raise SpecError(f"non-numeric value for {key!r}: {raw!r}", pos) from None
        if key in params:
            raise SpecError(f"duplicate key {key!r}", pos)
        params[key] = (value, pos)

    def take(key, required=True, default=None):
        if key in params:
            return params.pop(key)[0]
        if required:
            raise SpecError(f"{kind} requires {key}=", kind_pos)
        return default

    try:
        if kind == "scalar-decay":
            model = ScalarDecay(take("nu"))
        elif kind == "gaussian-shift":
            model = GaussianShift()
        elif kind == "nilpotent-shift":
            model = NilpotentShift(take("L"))
        elif kind == "damped-nilpotent":
            model = DampedNilpotent(take("nu"), take("L"))
        else:
            model = FractionalIntegration(int(take("n", required=False, default=400)), seed=seed)
    except InvalidModel as exc:
        raise SpecError(str(exc), kind_pos) from None
    if params:
        key = next(iter(params))
        raise SpecError(f"unknown parameter {key!r} for {kind}", params[key][1])
    return model
