"""Model manifolds with analytically known volume, reach and diameter.

Sphere(d, r) lives in R^(d+1), Ball(d, r) in R^d (infinite reach) and
FlatTorus(k, r), the product of k circles of radius r, in R^(2k).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .bounds import INF, ManifoldDescriptor, log_unit_ball_volume
from .errors import InvalidArgument
from .estimators import PointCloud


class Kind(str, enum.Enum):
    SPHERE = "sphere"
    BALL = "ball"
    FLAT_TORUS = "torus"


@dataclass(frozen=True)
class ModelFamily:
    kind: Kind
    dim: int  # intrinsic dimension, or number of circle factors for the torus
    radius: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if isinstance(self.dim, bool) or int(self.dim) != self.dim or self.dim < 1:
            raise InvalidArgument(f"dim must be a positive integer, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise InvalidArgument(f"radius must be positive, got {self.radius!r}")

    @property
    def ambient_dim(self) -> int:
        return {Kind.SPHERE: self.dim + 1, Kind.BALL: self.dim, Kind.FLAT_TORUS: 2 * self.dim}[self.kind]

    @property
    def name(self) -> str:
        return f"{self.kind.value}({self.dim},{self.radius!r})"


def Sphere(d: int, r: float = 1.0) -> ModelFamily:
    return ModelFamily(Kind.SPHERE, d, r)


def Ball(d: int, r: float = 1.0) -> ModelFamily:
    return ModelFamily(Kind.BALL, d, r)


def FlatTorus(k: int, r: float = 1.0) -> ModelFamily:
    return ModelFamily(Kind.FLAT_TORUS, k, r)


def descriptor(family: ModelFamily) -> ManifoldDescriptor:
    d, r = family.dim, family.radius
    log_r = math.log(r)
    if family.kind is Kind.SPHERE:
        # 2 r^d pi^((d+1)/2) / Gamma((d+1)/2)
        log_v = math.log(2.0) + d * log_r + 0.5 * (d + 1) * math.log(math.pi) - math.lgamma(0.5 * (d + 1))
        return ManifoldDescriptor.from_log_volume(d, log_v, r, 2 * r, d + 1)
    if family.kind is Kind.BALL:
        log_v = d * log_r + log_unit_ball_volume(d)
        return ManifoldDescriptor.from_log_volume(d, log_v, INF, 2 * r, d)
    log_v = d * math.log(2 * math.pi * r)
    return ManifoldDescriptor.from_log_volume(d, log_v, r, 2 * r * math.sqrt(d), 2 * d)


def sample(family: ModelFamily, count: int, seed: int = 0) -> PointCloud:
    """Uniform samples from the family, with its descriptor attached as truth."""
    if int(count) != count or count < 1:
        raise InvalidArgument(f"count must be a positive integer, got {count!r}")
    gen = rng.stream(seed, rng.SAMPLE)
    d, r = family.dim, family.radius
    if family.kind is Kind.SPHERE:
        g = gen.standard_normal((count, d + 1))
        pts = r * g / np.linalg.norm(g, axis=1, keepdims=True)
    elif family.kind is Kind.BALL:
        g = gen.standard_normal((count, d))
        u = gen.random(count) ** (1.0 / d)
        pts = (r * u)[:, None] * g / np.linalg.norm(g, axis=1, keepdims=True)
    else:
        theta = gen.uniform(0.0, 2 * np.pi, size=(count, d))
        pts = np.empty((count, 2 * d))
        pts[:, 0::2] = r * np.cos(theta)
        pts[:, 1::2] = r * np.sin(theta)
    return PointCloud(pts, label=family.name, truth=descriptor(family))


def embed_isometric(cloud: PointCloud, target_dim: int, seed: int = 0, translation=None) -> PointCloud:
    """Map the cloud into R^target_dim by a seeded matrix with orthonormal columns."""
    n0 = cloud.ambient_dim
    if int(target_dim) != target_dim or target_dim < n0:
        raise InvalidArgument(f"target_dim must be an integer >= {n0}, got {target_dim!r}")
    g = rng.stream(seed, rng.EMBED).standard_normal((int(target_dim), n0))
    q, rr = np.linalg.qr(g)
    q = q * np.sign(np.diag(rr))  # fix the QR sign ambiguity
    pts = cloud.points @ q.T
    if translation is not None:
        t = np.asarray(translation, dtype=float)
        if t.shape != (target_dim,):
            raise InvalidArgument(f"translation must have shape ({target_dim},)")
        pts = pts + t
    truth = cloud.truth
    if truth is not None and truth.ambient_dim is not None:
        truth = ManifoldDescriptor.from_log_volume(truth.intrinsic_dim, truth.log_volume, truth.reach,
                                                   truth.diameter, int(target_dim))
    return PointCloud(pts, label=cloud.label, truth=truth)
