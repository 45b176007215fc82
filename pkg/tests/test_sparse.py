import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from embedbounds.errors import InvalidArgument
from embedbounds.sparse import (
    SubsetFamily,
    build_subset_family,
    eps_hat,
    family_to_vectors,
    lexicographic_family,
    max_intersection,
    median_eps_hat,
    rip_experiment,
)


def test_intersection_threshold_integer_semantics():
    # |S & T| < s/4
    for s in range(2, 40, 2):
        cap = max_intersection(s)
        assert cap < s / 4 <= cap + 1


def test_family_small_disjoint():
    fam = build_subset_family(16, 4, target_N=2, seed=0)
    assert len(fam) >= 2
    assert all(not (set(a) & set(b)) for a, b in itertools.combinations(fam.subsets, 2))


def test_family_64_8_reaches_bound():
    fam = build_subset_family(64, 8, seed=0)
    assert len(fam) >= 16
    fam.verify()


def test_lexicographic_cross_check():
    fam = lexicographic_family(64, 8, 16)
    assert len(fam) == 16


def test_family_single_target():
    fam = build_subset_family(10, 4, target_N=1, seed=3)
    assert len(fam) == 1 and len(fam.subsets[0]) == 2


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 40), st.integers(1, 8), st.integers(0, 2**32))
def test_family_invariants_random(n, half, seed):
    s = 2 * half
    if s >= n:
        s = 2 * ((n - 1) // 2)
    if s < 2:
        return
    fam = build_subset_family(n, s, target_N=50, max_attempts=2000, seed=seed)
    assert 1 <= len(fam) <= 50
    cap = max_intersection(s)
    for a, b in itertools.combinations(fam.subsets, 2):
        assert len(set(a) & set(b)) <= cap
    assert len(set(fam.subsets)) == len(fam)


def test_family_s_2_mod_4():
    fam = build_subset_family(40, 6, target_N=20, seed=1)
    assert all(len(set(a) & set(b)) <= 1 for a, b in itertools.combinations(fam.subsets, 2))


@pytest.mark.parametrize("n,s", [(10, 3), (8, 8), (6, 10), (10, 0)])
def test_family_rejects(n, s):
    with pytest.raises(InvalidArgument):
        build_subset_family(n, s, target_N=1)


def test_family_validation_catches_overlap():
    with pytest.raises(InvalidArgument):
        SubsetFamily(16, 4, ((0, 1), (1, 2)))
    with pytest.raises(InvalidArgument):
        SubsetFamily(16, 4, ((0, 1), (0, 1)))


def test_family_text_round_trip(tmp_path):
    fam = build_subset_family(64, 8, seed=2)
    text = fam.dumps()
    assert text.splitlines()[0] == f"64 8 {len(fam)}"
    assert all(ln.split() == sorted(ln.split(), key=int) for ln in text.splitlines()[1:])
    fam.save(tmp_path / "f.txt")
    assert SubsetFamily.load(tmp_path / "f.txt") == fam


def test_vectors_single_subset():
    vs = family_to_vectors(SubsetFamily(10, 4, ((2, 7),)))
    assert vs.vectors.shape == (1, 10)
    assert np.linalg.norm(vs.vectors[0]) == pytest.approx(1.0, abs=1e-12)


def test_vectors_disjoint_distance():
    vs = family_to_vectors(SubsetFamily(10, 4, ((0, 1), (2, 3))))
    assert np.linalg.norm(vs.vectors[0] - vs.vectors[1]) == pytest.approx(math.sqrt(2), rel=1e-12)


def test_vectors_64_8_identity():
    fam = build_subset_family(64, 8, seed=0)
    vs = family_to_vectors(fam)
    assert np.allclose(np.linalg.norm(vs.vectors, axis=1), 1.0, rtol=0, atol=1e-12)
    assert np.all(np.count_nonzero(vs.vectors, axis=1) == 4)
    for (i, a), (j, b) in itertools.combinations(enumerate(fam.subsets), 2):
        sym = len(set(a) ^ set(b))
        assert 2 * sym > fam.s
        d2 = float(np.sum((vs.vectors[i] - vs.vectors[j]) ** 2))
        assert d2 == pytest.approx(2 / fam.s * sym, rel=1e-12)
        assert d2 > 1


def test_rip_identity_diagnostic():
    vs = family_to_vectors(build_subset_family(64, 8, seed=0))
    out = rip_experiment(vs, 64, 3, seed=0, identity=True)
    assert all(t.eps_hat == pytest.approx(0.0, abs=1e-12) for t in out)


def test_rip_experiment_deterministic():
    vs = family_to_vectors(build_subset_family(64, 8, seed=0))
    a = rip_experiment(vs, 16, 5, seed=4)
    b = rip_experiment(vs, 16, 5, seed=4)
    assert [t.eps_hat for t in a] == [t.eps_hat for t in b]
    assert median_eps_hat(a) == median_eps_hat(b)


def test_eps_hat_convention():
    vs = family_to_vectors(build_subset_family(64, 8, seed=0))
    trial = rip_experiment(vs, 32, 1, seed=1)[0]
    rep = trial.report
    assert trial.eps_hat == pytest.approx(max(1 - rep.a_hat**2, rep.b_hat**2 - 1))
    assert eps_hat(rep) == trial.eps_hat
