"""Empirical geometry of finite point sets.

Covering/packing nets by farthest-point traversal, Monte Carlo Gaussian
width, exact diameters, bi-Lipschitz distortion of maps between clouds and
a search for the smallest Gaussian projection dimension meeting a budget.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.spatial.distance import pdist

from . import rng
from .bounds import ManifoldDescriptor
from .errors import InvalidArgument, NoValidPairs


@dataclass(frozen=True, eq=False)
class PointCloud:
    points: np.ndarray
    label: str | None = None
    truth: ManifoldDescriptor | None = None

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim == 1:
            pts = pts.reshape(1, -1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InvalidArgument(f"points must be a non-empty (count, dim) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise InvalidArgument("all coordinates must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def ambient_dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def with_points(self, points) -> "PointCloud":
        return replace(self, points=points)

    # -- serialization -----------------------------------------------------

    def to_csv(self, path) -> None:
        """One point per row, no header, '.'-decimal, full repr precision."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            for row in self.points:
                w.writerow([repr(float(x)) for x in row])

    @classmethod
    def from_csv(cls, path, label: str | None = None) -> "PointCloud":
        with open(path, newline="") as fh:
            rows = [[float(x) for x in row] for row in csv.reader(fh) if row]
        if not rows:
            raise InvalidArgument(f"{path}: no points")
        if len({len(r) for r in rows}) != 1:
            raise InvalidArgument(f"{path}: ragged rows")
        return cls(np.array(rows), label=label if label is not None else Path(path).stem)

    def to_json(self, path) -> None:
        doc = {
            "ambient_dim": self.ambient_dim,
            "label": self.label,
            "truth": None if self.truth is None else descriptor_to_dict(self.truth),
            "points": self.points.tolist(),
        }
        Path(path).write_text(json.dumps(doc, indent=1) + "\n")

    @classmethod
    def from_json(cls, path) -> "PointCloud":
        doc = json.loads(Path(path).read_text())
        truth = doc.get("truth")
        cloud = cls(np.array(doc["points"], dtype=float), doc.get("label"),
                    None if truth is None else descriptor_from_dict(truth))
        if "ambient_dim" in doc and doc["ambient_dim"] != cloud.ambient_dim:
            raise InvalidArgument("ambient_dim does not match point width")
        return cloud


def descriptor_to_dict(M: ManifoldDescriptor) -> dict:
    return {
        "intrinsic_dim": M.intrinsic_dim,
        "log_volume": M.log_volume,
        "reach": "inf" if math.isinf(M.reach) else M.reach,
        "diameter": M.diameter,
        "ambient_dim": M.ambient_dim,
    }


def descriptor_from_dict(doc: dict) -> ManifoldDescriptor:
    reach = float(doc["reach"])
    amb = doc.get("ambient_dim")
    if "log_volume" in doc and doc["log_volume"] is not None:
        return ManifoldDescriptor.from_log_volume(int(doc["intrinsic_dim"]), float(doc["log_volume"]),
                                                  reach, float(doc["diameter"]),
                                                  None if amb is None else int(amb))
    return ManifoldDescriptor(int(doc["intrinsic_dim"]), float(doc["volume"]), reach,
                              float(doc["diameter"]), None if amb is None else int(amb))


# ---------------------------------------------------------------------------
# nets


@dataclass(frozen=True)
class NetResult:
    delta: float
    center_indices: tuple[int, ...]
    is_separated: bool = True

    @property
    def size(self) -> int:
        return len(self.center_indices)


def _farthest_point_centers(points: np.ndarray, delta: float) -> list[int]:
    centers = [0]
    dist = np.linalg.norm(points - points[0], axis=1)
    while True:
        far = int(np.argmax(dist))
        if dist[far] <= delta:
            return centers
        centers.append(far)
        np.minimum(dist, np.linalg.norm(points - points[far], axis=1), out=dist)


def greedy_net(cloud: PointCloud, delta: float) -> NetResult:
    """Farthest-point traversal from index 0 until every point is within delta.

    The centers form a delta-cover of the sample and are pairwise more than
    delta apart, so the size sits between N(T, delta) and N(T, delta / 2).
    """
    if not delta > 0:
        raise InvalidArgument(f"delta must be positive, got {delta!r}")
    if len(cloud) == 0:
        raise InvalidArgument("empty cloud")
    return NetResult(float(delta), tuple(_farthest_point_centers(cloud.points, delta)), True)


def packing_count(cloud: PointCloud, delta: float) -> int:
    """Size of a greedy delta-separated subset; at most N(T, delta / 2)."""
    return greedy_net(cloud, delta).size


# ---------------------------------------------------------------------------
# Gaussian width


@dataclass(frozen=True)
class WidthEstimate:
    mean: float
    std_error: float
    trials: int
    seed: int


def gaussian_width_mc(cloud: PointCloud, trials: int, seed: int) -> WidthEstimate:
    """Monte Carlo estimate of E sup_x <g, x> over the cloud.

    Trial t uses the Gaussian vector of the stream keyed (seed, t), so the
    estimate does not depend on how trials are batched.
    """
    if int(trials) != trials or trials < 2:
        raise InvalidArgument(f"trials must be an integer >= 2, got {trials!r}")
    block = max(1, min(4096, (1 << 22) // len(cloud)))
    pts_t = np.ascontiguousarray(cloud.points.T)
    sups = np.empty(trials)
    for start in range(0, trials, block):
        stop = min(trials, start + block)
        g = np.empty((stop - start, cloud.ambient_dim))
        for i, t in enumerate(range(start, stop)):
            g[i] = rng.stream(seed, rng.WIDTH, t).standard_normal(cloud.ambient_dim)
        sups[start:stop] = (g @ pts_t).max(axis=1)
    return WidthEstimate(
        mean=float(sups.mean()),
        std_error=float(sups.std(ddof=1) / math.sqrt(trials)),
        trials=int(trials),
        seed=int(seed),
    )


# ---------------------------------------------------------------------------
# distances and distortion


def diameter(cloud: PointCloud) -> float:
    if len(cloud) < 2:
        raise InvalidArgument("diameter needs at least two points")
    return float(pdist(cloud.points).max())


@dataclass(frozen=True)
class DistortionReport:
    a_hat: float
    b_hat: float
    argmin_pair: tuple[int, int]
    argmax_pair: tuple[int, int]
    pairs_evaluated: int


def _condensed_to_pair(k: int, n: int) -> tuple[int, int]:
    """Invert scipy's condensed pdist index into (i, j) with i < j."""
    i = n - 2 - int(math.floor(math.sqrt(-8 * k + 4 * n * (n - 1) - 7) / 2.0 - 0.5))
    j = k + i + 1 - n * (n - 1) // 2 + (n - i) * (n - i - 1) // 2
    return int(i), int(j)


def distortion(source: PointCloud, image: PointCloud) -> DistortionReport:
    """Extremal ratios |f(x)-f(y)| / |x-y| over distinct source pairs."""
    if len(source) != len(image):
        raise InvalidArgument(f"point counts differ: {len(source)} vs {len(image)}")
    src = pdist(source.points)
    keep = src > 0
    idx = np.flatnonzero(keep)
    ratios = pdist(image.points)[keep] / src[keep]
    if ratios.size == 0:
        raise NoValidPairs("no pair of distinct source points")
    lo, hi = int(np.argmin(ratios)), int(np.argmax(ratios))
    n = len(source)
    return DistortionReport(
        a_hat=float(ratios[lo]),
        b_hat=float(ratios[hi]),
        argmin_pair=_condensed_to_pair(int(idx[lo]), n),
        argmax_pair=_condensed_to_pair(int(idx[hi]), n),
        pairs_evaluated=int(ratios.size),
    )


# ---------------------------------------------------------------------------
# random projections


def gaussian_matrix(m: int, n: int, seed: int, *path: int) -> np.ndarray:
    """m x n matrix with i.i.d. N(0, 1/m) entries from the stream (seed, *path)."""
    g = rng.stream(seed, rng.PROJECTION, *path).standard_normal((m, n))
    return g / math.sqrt(m)


def gaussian_project(cloud: PointCloud, m: int, seed: int, *path: int) -> PointCloud:
    if int(m) != m or m < 1:
        raise InvalidArgument(f"m must be a positive integer, got {m!r}")
    phi = gaussian_matrix(int(m), cloud.ambient_dim, seed, *path)
    return PointCloud(cloud.points @ phi.T, label=cloud.label, truth=cloud.truth)


def search_smallest(n: int, passes: Callable[[int], bool]) -> int:
    """Smallest m in [1, n] with passes(m), by doubling then bisection; n + 1 if none.

    Assumes passes is monotone; each m is evaluated at most once.
    """
    cache: dict[int, bool] = {}

    def ok(m):
        if m not in cache:
            cache[m] = bool(passes(m))
        return cache[m]

    lo, hi = 0, None  # lo: largest known failure
    m = 1
    while m < n:
        if ok(m):
            hi = m
            break
        lo = m
        m *= 2
    if hi is None:
        if not ok(n):
            return n + 1
        hi = n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def minimal_embedding_dim_search(
    cloud: PointCloud,
    epsilon: float,
    trials: int,
    success_fraction: float = 0.5,
    seed: int = 0,
) -> int:
    """Smallest m for which Gaussian projections meet the (1 - eps, 1 + eps) budget.

    A dimension passes when at least ceil(success_fraction * trials) of its
    projections, drawn from streams keyed (seed, m, trial), keep every
    pairwise ratio inside the budget.
    """
    if not 0 < epsilon < 1:
        raise InvalidArgument(f"epsilon must lie in (0, 1), got {epsilon!r}")
    if int(trials) != trials or trials < 1:
        raise InvalidArgument("trials must be a positive integer")
    if not 0 < success_fraction <= 1:
        raise InvalidArgument("success_fraction must lie in (0, 1]")
    need = math.ceil(success_fraction * trials - 1e-12)
    src = pdist(cloud.points)
    keep = src > 0
    if not keep.any():
        raise NoValidPairs("no pair of distinct source points")
    src = src[keep]
    n = cloud.ambient_dim

    def passes(m):
        wins = 0
        for t in range(trials):
            phi = gaussian_matrix(m, n, seed, m, t)
            r = pdist(cloud.points @ phi.T)[keep] / src
            if r.min() >= 1 - epsilon and r.max() <= 1 + epsilon:
                wins += 1
                if wins >= need:
                    return True
            elif wins + (trials - t - 1) < need:
                return False
        return wins >= need

    return search_smallest(n, passes)
