"""Closed-form lower and upper bounds on low-distortion embedding dimension.

Everything here is a pure function of its arguments.  Quantities that can
over- or underflow for large intrinsic dimension (ball volumes, manifold
volumes, covering numbers) are carried in log space and only exponentiated
at the very end.

The universal constants that the underlying theory leaves unspecified live
in :class:`BoundConstants`.  The default path for the manifold lower bound is
compositional (covering bound -> optimal radius -> Sudakov/width argument);
closed-form constants ``C1``/``C2`` are only used when explicitly overridden.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, asdict
from typing import NamedTuple

from scipy import integrate

from .errors import InvalidArgument, NotApplicable, PreconditionViolation

INF = math.inf
_LOG_4_SQRT_E = math.log(4.0) + 0.5


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class ManifoldDescriptor:
    """Intrinsic dimension, volume, reach, diameter and optional ambient dim.

    ``reach`` may be ``math.inf`` (affine pieces such as a flat ball).  For
    very large ``intrinsic_dim`` the volume may not fit in a float; build
    those with :meth:`from_log_volume`.
    """

    intrinsic_dim: int
    volume: float
    reach: float
    diameter: float
    ambient_dim: int | None = None
    log_volume: float | None = None

    def __post_init__(self):
        d = self.intrinsic_dim
        if isinstance(d, bool) or int(d) != d or d < 1:
            raise InvalidArgument(f"intrinsic_dim must be a positive integer, got {d!r}")
        object.__setattr__(self, "intrinsic_dim", int(d))
        if self.log_volume is None:
            if not (self.volume > 0 and math.isfinite(self.volume)):
                raise InvalidArgument(f"volume must be positive and finite, got {self.volume!r}")
            object.__setattr__(self, "log_volume", math.log(self.volume))
        elif not math.isfinite(self.log_volume):
            raise InvalidArgument("log_volume must be finite")
        if not self.reach > 0 or math.isnan(self.reach):
            raise InvalidArgument(f"reach must be positive (inf allowed), got {self.reach!r}")
        if not (self.diameter > 0 and math.isfinite(self.diameter)):
            raise InvalidArgument(f"diameter must be positive and finite, got {self.diameter!r}")
        if self.ambient_dim is not None:
            if int(self.ambient_dim) != self.ambient_dim or self.ambient_dim < d:
                raise InvalidArgument(
                    f"ambient_dim must be an integer >= intrinsic_dim ({d}), got {self.ambient_dim!r}"
                )
            object.__setattr__(self, "ambient_dim", int(self.ambient_dim))

    @classmethod
    def from_log_volume(cls, intrinsic_dim, log_volume, reach, diameter, ambient_dim=None):
        try:
            volume = math.exp(log_volume)
        except OverflowError:
            volume = INF
        return cls(intrinsic_dim, volume, reach, diameter, ambient_dim, log_volume=log_volume)

    @property
    def finite_reach(self) -> bool:
        return math.isfinite(self.reach)

    def rescaled(self, lam: float) -> "ManifoldDescriptor":
        """Image of the manifold under x -> lam * x."""
        if not lam > 0:
            raise InvalidArgument("scale factor must be positive")
        d = self.intrinsic_dim
        return ManifoldDescriptor.from_log_volume(
            d, self.log_volume + d * math.log(lam), self.reach * lam, self.diameter * lam, self.ambient_dim
        )

    def to_dict(self) -> dict:
        out = asdict(self)
        return out


@dataclass(frozen=True)
class DistortionBudget:
    """Bi-Lipschitz constants: lower * |x-y| <= |f(x)-f(y)| <= upper * |x-y|."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (0 < self.lower <= self.upper and math.isfinite(self.upper)):
            raise InvalidArgument(f"need 0 < lower <= upper, got ({self.lower}, {self.upper})")

    @classmethod
    def symmetric(cls, epsilon: float) -> "DistortionBudget":
        _check_epsilon(epsilon)
        return cls(1.0 - epsilon, 1.0 + epsilon)

    @classmethod
    def square_root(cls, epsilon: float) -> "DistortionBudget":
        _check_epsilon(epsilon)
        return cls(math.sqrt(1.0 - epsilon), math.sqrt(1.0 + epsilon))

    @property
    def ratio(self) -> float:
        return self.lower / self.upper


@dataclass(frozen=True)
class BoundConstants:
    """Universal constants left open by the theory.

    ``sudakov_c`` is the Sudakov minoration constant c in
    w(T) >= c * delta * sqrt(log N(T, delta)); ``ball_width_c`` bounds the
    Gaussian width of the unit m-ball by ball_width_c * sqrt(m).  Their
    composition C = (2 * sudakov_c / ball_width_c)**2 multiplies every
    covering-based lower bound.

    ``override_C1``/``override_C2`` switch the manifold lower bound to the
    closed forms of the two reach regimes; ``jl_c``/``rip_c`` replace the
    composed constant in the finite-set and sparse-vector bounds.  The
    closed forms reproduce the compositional numbers exactly when
    C1 = C / (128 e) and C2 = C / 4 (see :func:`implied_closed_form_constants`).
    """

    sudakov_c: float = 0.25
    ball_width_c: float = 1.0
    override_C1: float | None = None
    override_C2: float | None = None
    jl_c: float | None = None
    rip_c: float | None = None

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value is None:
                continue
            if not (value > 0 and math.isfinite(value)):
                raise InvalidArgument(f"{name} must be positive, got {value!r}")

    @property
    def composed(self) -> float:
        return (2.0 * self.sudakov_c / self.ball_width_c) ** 2

    def as_row(self) -> dict:
        return {
            "sudakov_c": self.sudakov_c,
            "ball_width_c": self.ball_width_c,
            "override_c1": self.override_C1,
            "override_c2": self.override_C2,
            "jl_c": self.jl_c,
            "rip_c": self.rip_c,
        }


DEFAULT_CONSTANTS = BoundConstants()


class Regime(str, enum.Enum):
    HIGH_REACH = "HighReach"
    LOW_REACH = "LowReach"


@dataclass(frozen=True)
class CoveringBoundResult:
    delta: float
    geodesic_radius: float
    tight_bound: float
    simple_bound: float
    log_tight_bound: float
    log_simple_bound: float


class OptimalDelta(NamedTuple):
    delta: float
    objective_lower_bound: float
    clipped: bool
    vacuous: bool


class LowerBound(NamedTuple):
    m_lb: float
    regime: Regime
    delta_used: float
    vacuous: bool
    method: str  # "compositional" or "closed_form"


class UpperBound(NamedTuple):
    m_ub: float
    assumption_ok: bool


class Bound(NamedTuple):
    value: float
    vacuous: bool


# ---------------------------------------------------------------------------
# helpers


def _check_epsilon(epsilon, upper=1.0, closed=False):
    ok = 0 < epsilon <= upper if closed else 0 < epsilon < upper
    if not ok:
        bracket = "]" if closed else ")"
        raise InvalidArgument(f"epsilon must lie in (0, {upper}{bracket}, got {epsilon!r}")


def _check_dim(d):
    if isinstance(d, bool) or int(d) != d or d < 1:
        raise InvalidArgument(f"dimension must be a positive integer, got {d!r}")
    return int(d)


def _safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return INF


# ---------------------------------------------------------------------------
# ball volumes and regime


def log_unit_ball_volume(d: int) -> float:
    d = _check_dim(d)
    return 0.5 * d * math.log(math.pi) - math.lgamma(0.5 * d + 1.0)


def unit_ball_volume(d: int) -> float:
    """Volume of the Euclidean unit ball in R^d, pi^(d/2) / Gamma(d/2 + 1)."""
    return math.exp(log_unit_ball_volume(d))


def log_regime_threshold(M: ManifoldDescriptor) -> float:
    d = M.intrinsic_dim
    return (M.log_volume - log_unit_ball_volume(d)) / d - _LOG_4_SQRT_E


def regime_threshold(M: ManifoldDescriptor) -> float:
    """(V / omega_d)^(1/d) / (4 sqrt(e)); reach at or above it is HighReach."""
    return _safe_exp(log_regime_threshold(M))


def reach_regime(M: ManifoldDescriptor) -> Regime:
    if not M.finite_reach:
        return Regime.HIGH_REACH
    if log_regime_threshold(M) <= math.log(M.reach):
        return Regime.HIGH_REACH
    return Regime.LOW_REACH


# ---------------------------------------------------------------------------
# covering numbers of manifolds


def geodesic_radius(delta: float, tau: float) -> float:
    return delta if math.isinf(tau) else delta * (1.0 + 2.0 * delta / tau)


def covering_lower_bound(M: ManifoldDescriptor, delta: float) -> CoveringBoundResult:
    """Two volume-based lower bounds on N(M, delta), centers on M.

    tight: V / (omega_d (1 + 2 sqrt(2) r / tau)^(d-1) r^d), r = delta (1 + 2 delta / tau)
    simple: V / (omega_d (8 delta)^d), never larger than tight.
    """
    if not (delta > 0 and math.isfinite(delta)):
        raise InvalidArgument(f"delta must be positive and finite, got {delta!r}")
    tau = M.reach
    if delta > tau / 2:
        raise PreconditionViolation(f"delta={delta} exceeds reach/2={tau / 2}")
    d = M.intrinsic_dim
    log_omega = log_unit_ball_volume(d)
    r = geodesic_radius(delta, tau)
    growth = 0.0 if math.isinf(tau) else (d - 1) * math.log1p(2.0 * math.sqrt(2.0) * r / tau)
    log_tight = M.log_volume - log_omega - growth - d * math.log(r)
    log_simple = M.log_volume - log_omega - d * math.log(8.0 * delta)
    return CoveringBoundResult(
        delta=delta,
        geodesic_radius=r,
        tight_bound=_safe_exp(log_tight),
        simple_bound=_safe_exp(log_simple),
        log_tight_bound=log_tight,
        log_simple_bound=log_simple,
    )


def hyperbolic_ball_volume(d: int, tau: float, r: float, rtol: float = 1e-10) -> float:
    """Volume of a radius-r geodesic ball in d-dim space of curvature -2/tau^2.

    Evaluates (2 pi^(d/2) / Gamma(d/2)) * int_0^r S(x)^(d-1) dx with
    S(x) = (tau / sqrt 2) sinh(sqrt(2) x / tau).  The integrand is normalised by
    S(r)^(d-1) so large d neither overflows nor underflows.
    """
    d = _check_dim(d)
    for name, v in (("tau", tau), ("r", r)):
        if math.isnan(v) or not v > 0:
            raise InvalidArgument(f"{name} must be positive, got {v!r}")
    if not math.isfinite(r):
        raise InvalidArgument("r must be finite")
    log_pref = math.log(2.0) + 0.5 * d * math.log(math.pi) - math.lgamma(0.5 * d)
    if d == 1:
        return 2.0 * r
    if math.isinf(tau):
        return math.exp(log_unit_ball_volume(d) + d * math.log(r))
    k = math.sqrt(2.0) / tau

    def log_s(x):
        # log((1/k) sinh(k x)), stable for large k x
        kx = k * x
        if kx > 20:
            return kx - math.log(2.0) - math.log(k) + math.log1p(-math.exp(-2 * kx))
        return math.log(math.sinh(kx) / k)

    log_sr = log_s(r)

    def integrand(x):
        if x <= 0:
            return 0.0
        return math.exp((d - 1) * (log_s(x) - log_sr))

    val, _ = integrate.quad(integrand, 0.0, r, epsabs=0.0, epsrel=rtol, limit=200)
    return _safe_exp(log_pref + (d - 1) * log_sr + math.log(val))


def bishop_upper_volume(d: int, tau: float, r: float) -> float:
    """omega_d (1 + 2 sqrt(2) r / tau)^(d-1) r^d, valid for r < pi tau."""
    d = _check_dim(d)
    growth = 0.0 if math.isinf(tau) else (d - 1) * math.log1p(2.0 * math.sqrt(2.0) * r / tau)
    return _safe_exp(log_unit_ball_volume(d) + growth + d * math.log(r))


# ---------------------------------------------------------------------------
# radius selection and the general embedding lower bounds


def _log_cprime(M: ManifoldDescriptor) -> float:
    d = M.intrinsic_dim
    return M.log_volume - log_unit_ball_volume(d) - d * math.log(8.0)


def optimal_delta(M: ManifoldDescriptor) -> OptimalDelta:
    """Maximise delta^2 log(C' / delta^d) over (0, reach/2], C' = V / (omega_d 8^d).

    The unconstrained maximiser is C'^(1/d) / sqrt(e) with value
    (d / 2e) C'^(2/d).  When that falls beyond reach/2 the objective is
    increasing on the whole interval and the endpoint reach/2 is used.
    """
    d = M.intrinsic_dim
    log_root = _log_cprime(M) / d  # log C'^(1/d)
    log_star = log_root - 0.5
    tau = M.reach
    if math.isinf(tau) or log_star <= math.log(tau / 2):
        delta = math.exp(log_star)
        objective = d / (2 * math.e) * math.exp(2 * log_root)
        return OptimalDelta(delta, objective, clipped=False, vacuous=False)
    delta = tau / 2
    log_arg = math.log(2.0) + log_root - math.log(tau)
    objective = d * tau**2 / 4 * log_arg
    vacuous = log_arg <= 0
    return OptimalDelta(delta, max(objective, 0.0), clipped=True, vacuous=vacuous)


def embedding_lb_from_covering(
    budget: DistortionBudget,
    diam: float,
    delta: float,
    logN: float,
    k: BoundConstants = DEFAULT_CONSTANTS,
) -> float:
    """(2 c_sud (a/b) delta / (c_ball diam))^2 log N(T, delta)."""
    if not (diam > 0 and delta > 0):
        raise InvalidArgument("diam and delta must be positive")
    if logN < 0:
        raise InvalidArgument(f"logN must be nonnegative, got {logN!r}")
    scale = 2.0 * k.sudakov_c * budget.ratio * delta / (k.ball_width_c * diam)
    return scale * scale * logN


def embedding_lb_from_width(
    budget: DistortionBudget,
    diam: float,
    width: float,
    k: BoundConstants = DEFAULT_CONSTANTS,
) -> float:
    """(2 (a/b) w(T) / (c_ball diam))^2."""
    if not diam > 0:
        raise InvalidArgument("diam must be positive")
    if width < 0:
        raise InvalidArgument(f"width must be nonnegative, got {width!r}")
    scale = 2.0 * budget.ratio * width / (k.ball_width_c * diam)
    return scale * scale


def implied_closed_form_constants(k: BoundConstants = DEFAULT_CONSTANTS) -> tuple[float, float]:
    """(C1, C2) for which the closed forms equal the compositional bound."""
    C = k.composed
    return C / (128.0 * math.e), C / 4.0


def closed_form_lower_bound(M: ManifoldDescriptor, epsilon: float, C1: float, C2: float) -> Bound:
    """The two-regime closed-form manifold lower bound with explicit constants."""
    _check_epsilon(epsilon)
    d = M.intrinsic_dim
    q2 = ((1 - epsilon) / (1 + epsilon)) ** 2
    log_ratio = (M.log_volume - log_unit_ball_volume(d)) / d  # log (V/omega_d)^(1/d)
    if reach_regime(M) is Regime.HIGH_REACH:
        value = C1 * q2 * d / M.diameter**2 * math.exp(2 * log_ratio)
        return Bound(value, False)
    log_arg = log_ratio - math.log(4.0 * M.reach)
    value = C2 * q2 * d * M.reach**2 / M.diameter**2 * log_arg
    return Bound(max(value, 0.0), log_arg <= 0)


def main_lower_bound(
    M: ManifoldDescriptor, epsilon: float, k: BoundConstants = DEFAULT_CONSTANTS
) -> LowerBound:
    """Lower bound on m for any epsilon-distortion embedding of M into R^m."""
    _check_epsilon(epsilon)
    regime = reach_regime(M)
    opt = optimal_delta(M)
    needed = k.override_C1 if regime is Regime.HIGH_REACH else k.override_C2
    if needed is not None:
        C1 = k.override_C1 if k.override_C1 is not None else implied_closed_form_constants(k)[0]
        C2 = k.override_C2 if k.override_C2 is not None else implied_closed_form_constants(k)[1]
        value, vacuous = closed_form_lower_bound(M, epsilon, C1, C2)
        return LowerBound(value, regime, opt.delta, vacuous, "closed_form")
    cover = covering_lower_bound(M, opt.delta)
    logN = max(cover.log_simple_bound, 0.0)
    value = embedding_lb_from_covering(DistortionBudget.symmetric(epsilon), M.diameter, opt.delta, logN, k)
    return LowerBound(value, regime, opt.delta, logN <= 0, "compositional")


def wakin_assumption(M: ManifoldDescriptor) -> bool:
    """V / tau^d >= (21 / (2 sqrt d))^d, checked in log space."""
    if not M.finite_reach:
        return False
    d = M.intrinsic_dim
    lhs = M.log_volume - d * math.log(M.reach)
    return lhs >= d * math.log(21.0 / (2.0 * math.sqrt(d)))


def wakin_upper_bound(M: ManifoldDescriptor, epsilon: float, rho: float) -> UpperBound:
    """Rows sufficient for a Gaussian matrix to embed M with probability 1 - rho.

    m = 18 eps^-2 max(24 d + 2 d log(sqrt(d) / (tau eps^2)) + log(2 V^2), log(8 / rho))
    """
    _check_epsilon(epsilon, upper=1 / 3, closed=True)
    if not 0 < rho < 1:
        raise InvalidArgument(f"rho must lie in (0, 1), got {rho!r}")
    if not M.finite_reach:
        raise NotApplicable("the random-matrix upper bound requires finite reach")
    d = M.intrinsic_dim
    geometric = (
        24 * d
        + 2 * d * math.log(math.sqrt(d) / (M.reach * epsilon**2))
        + math.log(2.0)
        + 2 * M.log_volume
    )
    confidence = math.log(8.0 / rho)
    return UpperBound(18.0 / epsilon**2 * max(geometric, confidence), wakin_assumption(M))


def low_reach_volume_ratio(d: int) -> float:
    """omega_d (4 sqrt e)^d: V / tau^d must reach this in the LowReach regime."""
    return _safe_exp(log_unit_ball_volume(d) + d * _LOG_4_SQRT_E)


# ---------------------------------------------------------------------------
# local geometry from reach


def curvature_bounds(tau: float) -> tuple[float, float]:
    if not tau > 0:
        raise InvalidArgument(f"reach must be positive, got {tau!r}")
    if math.isinf(tau):
        return 0.0, 0.0
    return -2.0 / tau**2, 1.0 / tau**2


def chord_lower_from_geodesic(length: float, tau: float) -> float:
    """Euclidean distance is at least l - l^2 / (2 tau)."""
    if length < 0 or not tau > 0:
        raise InvalidArgument("need length >= 0 and tau > 0")
    if math.isinf(tau):
        return float(length)
    return length - length**2 / (2.0 * tau)


def geodesic_upper_from_chord(dchord: float, tau: float) -> float:
    """Geodesic distance is at most d + 2 d^2 / tau when d <= tau / 2."""
    if dchord < 0 or not tau > 0:
        raise InvalidArgument("need dchord >= 0 and tau > 0")
    if dchord > tau / 2:
        raise PreconditionViolation(f"chord {dchord} exceeds reach/2={tau / 2}")
    if math.isinf(tau):
        return float(dchord)
    return dchord + 2.0 * dchord**2 / tau


# ---------------------------------------------------------------------------
# finite sets and sparse vectors


def jl_lower_bound(
    N: int, delta_min: float, diam: float, epsilon: float, k: BoundConstants = DEFAULT_CONSTANTS
) -> float:
    """Lower bound for sqrt(1 +- eps) embeddings of N points with min separation delta_min."""
    if int(N) != N or N < 2:
        raise InvalidArgument(f"need at least two points, got N={N!r}")
    _check_epsilon(epsilon)
    if not 0 < delta_min <= diam:
        raise InvalidArgument("need 0 < delta_min <= diam")
    if k.jl_c is not None:
        return k.jl_c * (1 - epsilon) / (1 + epsilon) * delta_min**2 * math.log(N) / (4 * diam**2)
    budget = DistortionBudget.square_root(epsilon)
    return embedding_lb_from_covering(budget, diam, delta_min / 2, math.log(N), k)


def rip_lower_bound(n: int, s: int, epsilon: float, k: BoundConstants = DEFAULT_CONSTANTS) -> Bound:
    """Rows needed by any (even nonlinear) map with the RIP of order (s, eps)."""
    if int(s) != s or s < 2 or s % 2:
        raise InvalidArgument(f"s must be an even integer >= 2, got {s!r}")
    if int(n) != n or s >= n:
        raise InvalidArgument(f"need s < n, got n={n!r}, s={s!r}")
    _check_epsilon(epsilon)
    log_factor = math.log(n / (2 * s))
    vacuous = log_factor <= 0
    if vacuous:
        return Bound(0.0, True)
    if k.rip_c is not None:
        return Bound(k.rip_c * s * log_factor, False)
    logN = s / 4 * log_factor
    value = embedding_lb_from_covering(DistortionBudget.square_root(epsilon), 2.0, 1.0 / 3.0, logN, k)
    return Bound(value, False)


def subset_family_target_size(n: int, s: int) -> int:
    """ceil((n / 2s)^(s/4)), the guaranteed size of a low-overlap subset family."""
    return max(1, math.ceil((n / (2 * s)) ** (s / 4) - 1e-9))
