"""Numerical invariant checks run by ``embedbounds validate``.

Each check returns a flat row: ``check``, ``passed``, ``worst`` (the worst
margin observed; nonnegative means pass) and a short ``detail`` string.
"""
from __future__ import annotations

import math

import numpy as np

from . import rng
from .bounds import (
    DEFAULT_CONSTANTS,
    BoundConstants,
    ManifoldDescriptor,
    bishop_upper_volume,
    chord_lower_from_geodesic,
    covering_lower_bound,
    geodesic_upper_from_chord,
    hyperbolic_ball_volume,
    main_lower_bound,
    optimal_delta,
    unit_ball_volume,
)
from .estimators import PointCloud, gaussian_width_mc, packing_count
from .models import FlatTorus, Sphere, descriptor, sample


def circle_covering_number(delta: float, radius: float = 1.0) -> int:
    """Exact N(circle, delta) for balls centred on the circle, delta < 2 radius.

    A ball of radius delta centred on the circle covers an arc of angular
    half-width 2 arcsin(delta / 2 radius).
    """
    half = 2.0 * math.asin(delta / (2.0 * radius))
    return math.ceil(math.pi / half - 1e-12)


def _row(name, worst, detail):
    return {"check": name, "passed": bool(worst >= 0), "worst": float(worst), "detail": detail}


def check_omega(k: BoundConstants = DEFAULT_CONSTANTS, seed: int = 0):
    exact = {1: 2.0, 2: math.pi, 3: 4.0 * math.pi / 3.0}
    err = max(abs(unit_ball_volume(d) - v) for d, v in exact.items())
    rec = max(
        abs(unit_ball_volume(d) / (unit_ball_volume(d - 2) * 2 * math.pi / d) - 1.0) for d in range(3, 301)
    )
    return [
        _row("omega_small_d", 1e-12 - err, f"max abs err {err:.3g} at d=1,2,3"),
        _row("omega_recurrence", 1e-10 - rec, f"max rel err {rec:.3g} for 3<=d<=300"),
    ]


def check_circle_covering(k: BoundConstants = DEFAULT_CONSTANTS, seed: int = 0):
    circle = descriptor(Sphere(1, 1.0))
    worst = math.inf
    for delta in (0.1, 0.25, 0.5):
        cb = covering_lower_bound(circle, delta)
        exact = circle_covering_number(delta)
        worst = min(worst, exact - cb.tight_bound, cb.tight_bound - cb.simple_bound)
    return [_row("covering_circle", worst, "simple <= tight <= exact N(S^1, delta)")]


def check_chord_geodesic_circles(k: BoundConstants = DEFAULT_CONSTANTS, seed: int = 0):
    worst_chord = worst_geo = math.inf
    for tau in (0.5, 1.0, 2.0):
        lengths = np.linspace(0, math.pi * tau, 1002)[1:-1]
        chords = 2 * tau * np.sin(lengths / (2 * tau))
        for ell, c in zip(lengths, chords):
            worst_chord = min(worst_chord, c - chord_lower_from_geodesic(float(ell), tau) + 1e-9)
            if c <= tau / 2:
                worst_geo = min(worst_geo, geodesic_upper_from_chord(float(c), tau) - ell + 1e-9)
    return [
        _row("chord_lower_circles", worst_chord, "l - l^2/2tau <= 2 tau sin(l / 2tau)"),
        _row("geodesic_upper_circles", worst_geo, "l <= d + 2 d^2 / tau for d <= tau/2"),
    ]


def check_bishop_chain(k: BoundConstants = DEFAULT_CONSTANTS, seed: int = 0):
    worst = math.inf
    for d in (1, 2, 3, 5):
        for ratio in (0.01, 0.1, 0.5):
            tau = 1.0
            r = ratio * tau
            vol = hyperbolic_ball_volume(d, tau, r)
            flat = unit_ball_volume(d) * r**d
            upper = bishop_upper_volume(d, tau, r)
            slack = 1e-10 * flat
            worst = min(worst, (vol - flat + slack) / flat, (upper - vol + slack) / flat)
    return [_row("bishop_chain", worst, "omega_d r^d <= V_hyp(r) <= omega_d (1+2 sqrt2 r/tau)^(d-1) r^d")]


def random_linear_map(n: int, a: float, b: float, seed: int) -> np.ndarray:
    """n x n matrix with singular values spread over [a, b] (endpoints included)."""
    gen = rng.stream(seed, rng.LINEAR_MAP)
    u, _ = np.linalg.qr(gen.standard_normal((n, n)))
    v, _ = np.linalg.qr(gen.standard_normal((n, n)))
    svals = np.linspace(a, b, n)
    return u @ np.diag(svals) @ v.T


def linear_map_width_sandwich(cloud: PointCloud, a: float, b: float, trials: int, seed: int):
    L = random_linear_map(cloud.ambient_dim, a, b, seed)
    w = gaussian_width_mc(cloud, trials, seed)
    wl = gaussian_width_mc(cloud.with_points(cloud.points @ L.T), trials, seed + 1)
    sig_lo = math.hypot(wl.std_error, a * w.std_error)
    sig_hi = math.hypot(wl.std_error, b * w.std_error)
    lower_margin = wl.mean - (a * w.mean - 3 * sig_lo)
    upper_margin = (b * w.mean + 3 * sig_hi) - wl.mean
    return w, wl, lower_margin, upper_margin


def fixed_cloud(seed: int, count: int = 100, dim: int = 10) -> PointCloud:
    pts = rng.stream(seed, rng.SAMPLE, 1).standard_normal((count, dim))
    return PointCloud(pts, label=f"gaussian({count},{dim})")


def check_width_sandwich(k: BoundConstants = DEFAULT_CONSTANTS, seed: int = 0, trials: int = 4000):
    w, wl, lo, hi = linear_map_width_sandwich(fixed_cloud(seed), 0.5, 2.0, trials, seed)
    return [_row("linear_map_width_sandwich", min(lo, hi), f"w(T)={w.mean:.4f} w(LT)={wl.mean:.4f} trials={trials}")]


def check_sudakov(k: BoundConstants = DEFAULT_CONSTANTS, seed: int = 0, trials: int = 4000):
    worst = math.inf
    for fam in (Sphere(1), Sphere(2), FlatTorus(2)):
        cloud = sample(fam, 500, seed)
        w = gaussian_width_mc(cloud, trials, seed)
        for delta in (0.1, 0.2, 0.4):
            n_hat = packing_count(cloud, 2 * delta)
            lhs = k.sudakov_c * delta * math.sqrt(math.log(n_hat))
            worst = min(worst, w.mean + 3 * w.std_error - lhs)
    return [_row("sudakov_consistency", worst, f"c={k.sudakov_c} delta sqrt(log N) <= w + 3se")]


def random_descriptors(seed: int, count: int = 20) -> list[ManifoldDescriptor]:
    """Descriptors alternating between unclipped and clipped radius selection."""
    gen = rng.stream(seed, rng.SAMPLE, 2)
    out = []
    for i in range(count):
        d = int(gen.integers(1, 7))
        log_v = float(gen.uniform(-2.0, 6.0))
        tmp = ManifoldDescriptor.from_log_volume(d, log_v, math.inf, 1.0)
        star = optimal_delta(tmp).delta  # unconstrained maximiser
        factor = gen.uniform(1.2, 5.0) if i % 2 == 0 else gen.uniform(0.05, 0.9)
        tau = 2 * star * factor
        out.append(ManifoldDescriptor.from_log_volume(d, log_v, tau, 2 * tau + 1.0))
    return out


def radius_grid_gap(M: ManifoldDescriptor, points: int = 10_000):
    """(returned objective - grid max, returned delta, grid argmax, grid step)."""
    d = M.intrinsic_dim
    log_c = M.log_volume - math.log(unit_ball_volume(d)) - d * math.log(8.0)
    h = M.reach / 2 / points
    grid = h * np.arange(1, points + 1)
    vals = grid**2 * (log_c - d * np.log(grid))
    best = int(np.argmax(vals))
    opt = optimal_delta(M)
    return opt.objective_lower_bound - vals[best], opt.delta, grid[best], h, opt.clipped


def check_radius_optimality(k: BoundConstants = DEFAULT_CONSTANTS, seed: int = 0):
    worst = math.inf
    for M in random_descriptors(seed):
        gap, delta, arg, h, _ = radius_grid_gap(M)
        worst = min(worst, gap + 1e-12 * max(1.0, abs(gap)), h - abs(delta - arg) + 1e-12)
    return [_row("radius_optimality", worst, "objective >= grid max; delta within one grid step")]


def check_scale_invariance(k: BoundConstants = DEFAULT_CONSTANTS, seed: int = 0):
    worst = math.inf
    low_reach = ManifoldDescriptor(2, 100.0, 0.1, 10.0)
    for M in (descriptor(Sphere(2)), descriptor(FlatTorus(3, 0.05)), low_reach, descriptor(FlatTorus(16))):
        base = main_lower_bound(M, 1 / 3, k).m_lb
        for lam in (0.1, 10.0):
            other = main_lower_bound(M.rescaled(lam), 1 / 3, k).m_lb
            worst = min(worst, 1e-9 - abs(other - base) / max(base, 1e-300))
    return [_row("scale_invariance", worst, "main lower bound under x -> lambda x")]


ALL_CHECKS = (
    check_omega,
    check_circle_covering,
    check_chord_geodesic_circles,
    check_bishop_chain,
    check_width_sandwich,
    check_sudakov,
    check_radius_optimality,
    check_scale_invariance,
)


def run_all(k: BoundConstants = DEFAULT_CONSTANTS, seed: int = 0) -> list[dict]:
    rows = []
    for check in ALL_CHECKS:
        rows.extend(check(k, seed=seed))
    return rows
