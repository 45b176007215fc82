"""Low-overlap subset families, the sparse vectors they induce, and RIP trials.

A family of (s/2)-subsets of {0, ..., n-1} with pairwise intersections
strictly below s/4 gives unit vectors x_j = sqrt(2/s) * 1[S_j] that are
pairwise more than 1 apart.  Their count lower-bounds the covering number of
the s/2-sparse unit ball, which is what drives the RIP lower bound.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import rng
from .bounds import subset_family_target_size
from .errors import InvalidArgument
from .estimators import (
    DistortionReport,
    PointCloud,
    distortion,
    gaussian_project,
    search_smallest,
)


def max_intersection(s: int) -> int:
    """Largest allowed |S_j & S_k|: the integer reading of "< s/4"."""
    return (s + 3) // 4 - 1


def _check_ns(n, s):
    if int(s) != s or s < 2 or s % 2:
        raise InvalidArgument(f"s must be an even integer >= 2, got {s!r}")
    if int(n) != n or s >= n:
        raise InvalidArgument(f"need s < n, got n={n!r}, s={s!r}")


@dataclass(frozen=True)
class SubsetFamily:
    n: int
    s: int
    subsets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        _check_ns(self.n, self.s)
        subsets = tuple(tuple(sorted(int(i) for i in S)) for S in self.subsets)
        object.__setattr__(self, "subsets", subsets)
        self.verify()

    def __len__(self) -> int:
        return len(self.subsets)

    def verify(self) -> None:
        """Exact check of sizes, index range, intersections and distinctness."""
        half, cap = self.s // 2, max_intersection(self.s)
        sets = [frozenset(S) for S in self.subsets]
        for S, fs in zip(self.subsets, sets):
            if len(fs) != half or len(S) != half:
                raise InvalidArgument(f"subset {S} does not have size {half}")
            if S[0] < 0 or S[-1] >= self.n:
                raise InvalidArgument(f"subset {S} leaves range [0, {self.n})")
        if len(set(sets)) != len(sets):
            raise InvalidArgument("subsets are not distinct")
        for (i, a), (j, b) in itertools.combinations(enumerate(sets), 2):
            if len(a & b) > cap:
                raise InvalidArgument(f"subsets {i} and {j} share {len(a & b)} > {cap} indices")

    def dumps(self) -> str:
        lines = [f"{self.n} {self.s} {len(self.subsets)}"]
        lines += [" ".join(map(str, S)) for S in self.subsets]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "SubsetFamily":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise InvalidArgument("empty subset-family text")
        n, s, count = (int(x) for x in lines[0].split())
        subsets = [tuple(int(x) for x in ln.split()) for ln in lines[1:]]
        if len(subsets) != count:
            raise InvalidArgument(f"header announces {count} subsets, found {len(subsets)}")
        return cls(n, s, tuple(subsets))

    def save(self, path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def load(cls, path) -> "SubsetFamily":
        return cls.loads(Path(path).read_text())


def build_subset_family(
    n: int,
    s: int,
    target_N: int | None = None,
    max_attempts: int | None = None,
    seed: int = 0,
) -> SubsetFamily:
    """Randomised greedy: draw uniform (s/2)-subsets, keep those compatible so far.

    Stops at ``target_N`` accepted subsets (default: the guaranteed size
    ceil((n/2s)^(s/4))) or after ``max_attempts`` draws (default
    10^4 * target_N).  Falling short is not an error; check ``len``.
    """
    _check_ns(n, s)
    if target_N is None:
        target_N = subset_family_target_size(n, s)
    if max_attempts is None:
        max_attempts = 10_000 * target_N
    if target_N < 1 or max_attempts < 1:
        raise InvalidArgument("target_N and max_attempts must be positive")
    half, cap = s // 2, max_intersection(s)
    gen = rng.stream(seed, rng.SUBSETS)
    accepted: list[np.ndarray] = []
    mask = np.zeros((0, n), dtype=np.int16)
    seen: set[tuple[int, ...]] = set()
    for _ in range(max_attempts):
        if len(accepted) >= target_N:
            break
        S = np.sort(gen.choice(n, size=half, replace=False))
        key = tuple(int(i) for i in S)
        if key in seen:
            continue
        if mask.shape[0] and mask[:, S].sum(axis=1).max() > cap:
            continue
        row = np.zeros((1, n), dtype=np.int16)
        row[0, S] = 1
        mask = np.vstack([mask, row])
        accepted.append(S)
        seen.add(key)
    return SubsetFamily(n, s, tuple(tuple(int(i) for i in S) for S in accepted))


def lexicographic_family(n: int, s: int, target_N: int) -> SubsetFamily:
    """Deterministic greedy over (s/2)-subsets in lexicographic order."""
    _check_ns(n, s)
    half, cap = s // 2, max_intersection(s)
    chosen: list[frozenset] = []
    for combo in itertools.combinations(range(n), half):
        if len(chosen) >= target_N:
            break
        fs = frozenset(combo)
        if all(len(fs & c) <= cap for c in chosen):
            chosen.append(fs)
    return SubsetFamily(n, s, tuple(tuple(sorted(c)) for c in chosen))


@dataclass(frozen=True, eq=False)
class SparseVectorSet:
    n: int
    s: int
    vectors: np.ndarray
    family: SubsetFamily

    def as_cloud(self) -> PointCloud:
        return PointCloud(self.vectors, label=f"sparse(n={self.n},s={self.s})")


def family_to_vectors(family: SubsetFamily) -> SparseVectorSet:
    """x_j = sqrt(2/s) on S_j, zero elsewhere; checked unit-norm and > 1 apart.

    |x_j - x_k|^2 = (2/s) |S_j ^ S_k|, so the separation check is done on the
    integer identity 2 |S_j ^ S_k| > s rather than on floats.
    """
    n, s = family.n, family.s
    vecs = np.zeros((len(family), n))
    value = math.sqrt(2.0 / s)
    for j, S in enumerate(family.subsets):
        vecs[j, list(S)] = value
    sets = [frozenset(S) for S in family.subsets]
    for a, b in itertools.combinations(sets, 2):
        if 2 * len(a ^ b) <= s:
            raise InvalidArgument("family yields vectors at distance <= 1")
    vecs.setflags(write=False)
    return SparseVectorSet(n, s, vecs, family)


@dataclass(frozen=True)
class RipTrial:
    report: DistortionReport
    eps_hat: float


def eps_hat(report: DistortionReport) -> float:
    """Distortion in the sqrt(1 +- eps) convention: max(1 - a^2, b^2 - 1)."""
    return max(1.0 - report.a_hat**2, report.b_hat**2 - 1.0)


def rip_experiment(
    vectors: SparseVectorSet,
    m: int,
    trials: int,
    seed: int = 0,
    identity: bool = False,
) -> list[RipTrial]:
    """Distortion of ``trials`` Gaussian projections (streams (seed, m, t)) on the set.

    ``identity=True`` substitutes the identity map as a diagnostic; then
    every trial reports eps_hat = 0.
    """
    if int(m) != m or m < 1:
        raise InvalidArgument(f"m must be a positive integer, got {m!r}")
    if int(trials) != trials or trials < 1:
        raise InvalidArgument("trials must be a positive integer")
    cloud = vectors.as_cloud()
    out = []
    for t in range(trials):
        image = cloud if identity else gaussian_project(cloud, m, seed, m, t)
        rep = distortion(cloud, image)
        out.append(RipTrial(rep, eps_hat(rep)))
    return out


def median_eps_hat(trials: list[RipTrial]) -> float:
    return float(np.median([t.eps_hat for t in trials]))


def rip_minimal_m(
    vectors: SparseVectorSet,
    epsilon: float,
    trials: int,
    success_fraction: float = 0.5,
    seed: int = 0,
) -> int:
    """Smallest m whose projections reach eps_hat <= epsilon often enough (n + 1 if none)."""
    if not 0 < success_fraction <= 1:
        raise InvalidArgument("success_fraction must lie in (0, 1]")
    need = math.ceil(success_fraction * trials - 1e-12)

    def passes(m):
        hits = sum(t.eps_hat <= epsilon for t in rip_experiment(vectors, m, trials, seed))
        return hits >= need

    return search_smallest(vectors.n, passes)
