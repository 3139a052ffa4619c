import bisect
import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from molcurate.diversity import (
    assign_to_centers,
    compare_samples,
    distance_summary,
    diverse_subset,
    diverse_subset_indices,
    maxmin_pick,
    ncircles,
    nearest_rank,
    pair_distance_stats,
    sample_pair_distances,
)
from molcurate.fingerprint import Fingerprint, tanimoto_distance
from molcurate.pipeline import MoleculeRecord


def random_fp(rng, width=128, density=None):
    p = rng.uniform(0.05, 0.5) if density is None else density
    return Fingerprint.from_indices([k for k in range(width) if rng.random() < p], width)


def clustered(rng, n_per, n_clusters=2, width=256, core=30, noise=3):
    """Tight clusters: a shared core of bits plus a few private noise bits."""
    out = []
    for c in range(n_clusters):
        base = list(range(c * (width // n_clusters), c * (width // n_clusters) + core))
        span = range(base[-1] + 1, (c + 1) * (width // n_clusters))
        for _ in range(n_per):
            out.append(Fingerprint.from_indices(base + rng.sample(span, noise), width))
    return out


def min_pairwise(fps, idx):
    return min((tanimoto_distance(fps[a], fps[b]) for a, b in itertools.combinations(idx, 2)),
               default=np.inf)


def exact_packing(fps, t):
    """Largest subset with all pairwise distances >= t, by exhaustive search."""
    n = len(fps)
    ok = [[tanimoto_distance(fps[a], fps[b]) >= t for b in range(n)] for a in range(n)]
    best = 0
    for mask in range(1 << n):
        idx = [i for i in range(n) if mask >> i & 1]
        if len(idx) > best and all(ok[a][b] for a, b in itertools.combinations(idx, 2)):
            best = len(idx)
    return best


def records_for(n):
    return [MoleculeRecord("s", str(i), "C") for i in range(n)]


# ------------------------------------------------------------------ maxmin


def test_identical_fingerprints_one_center():
    fps = [Fingerprint.from_indices([1, 5, 9], 64)] * 20
    assert len(maxmin_pick(fps, 0.5, 10, seed=3)) == 1


def test_k_max_one_is_seed_element():
    rng = random.Random(1)
    fps = [random_fp(rng) for _ in range(30)]
    first = int(np.random.default_rng(11).integers(30))
    assert maxmin_pick(fps, 0.9, 1, seed=11) == [first]


def test_fifty_random_pairwise_at_least_t():
    rng = random.Random(2)
    fps = [random_fp(rng) for _ in range(50)]
    centers = maxmin_pick(fps, 0.9, 50, seed=0)
    assert min_pairwise(fps, centers) >= 0.9


def test_maxmin_stops_only_when_covered():
    rng = random.Random(3)
    fps = [random_fp(rng) for _ in range(80)]
    centers = maxmin_pick(fps, 0.7, 1000, seed=4)
    for i in range(len(fps)):
        if i not in centers:
            assert min(tanimoto_distance(fps[i], fps[c]) for c in centers) < 0.7


def test_maxmin_deterministic_and_seed_dependent():
    rng = random.Random(4)
    fps = [random_fp(rng) for _ in range(60)]
    a = maxmin_pick(fps, 0.6, 20, seed=5)
    assert a == maxmin_pick(fps, 0.6, 20, seed=5)
    firsts = {maxmin_pick(fps, 0.6, 20, seed=s)[0] for s in range(10)}
    assert len(firsts) > 1


def test_maxmin_argument_checks():
    fps = [Fingerprint(1, 64)]
    with pytest.raises(ValueError):
        maxmin_pick([], 0.5, 1, 0)
    with pytest.raises(ValueError):
        maxmin_pick(fps, 0.0, 1, 0)
    with pytest.raises(ValueError):
        maxmin_pick(fps, 0.5, 0, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([0.5, 0.75, 0.9]), st.integers(1, 40))
def test_maxmin_separation_property(seed, t, k_max):
    rng = random.Random(seed)
    fps = [random_fp(rng, 64) for _ in range(rng.randint(1, 40))]
    centers = maxmin_pick(fps, t, k_max, seed)
    assert len(centers) <= k_max and len(set(centers)) == len(centers)
    assert min_pairwise(fps, centers) >= t


# ----------------------------------------------------------------- assign


def naive_labels(fps, centers):
    out = []
    for f in fps:
        out.append(min(sorted(centers), key=lambda c: tanimoto_distance(f, fps[c])))
    for c in centers:
        out[c] = c
    return out


def test_center_labels_itself_and_duplicates_follow():
    fps = [Fingerprint.from_indices([1, 2], 64), Fingerprint.from_indices([40, 41], 64),
           Fingerprint.from_indices([1, 2], 64)]
    assert assign_to_centers(fps, [0, 1]) == [0, 1, 0]


def test_single_center():
    rng = random.Random(6)
    fps = [random_fp(rng) for _ in range(25)]
    assert set(assign_to_centers(fps, [7])) == {7}


def test_assign_matches_naive_scan():
    rng = random.Random(7)
    fps = [random_fp(rng, 64, 0.1) for _ in range(200)]
    centers = rng.sample(range(200), 12)
    assert assign_to_centers(fps, centers) == naive_labels(fps, centers)


def test_assign_tie_goes_to_lowest_index():
    a = Fingerprint.from_indices([0, 1], 64)
    b = Fingerprint.from_indices([2, 3], 64)
    q = Fingerprint.from_indices([0, 2], 64)  # 1/3 similar to both
    assert assign_to_centers([b, a, q], [1, 0]) == [0, 1, 0]


def test_assign_needs_centers():
    with pytest.raises(ValueError):
        assign_to_centers([Fingerprint(1, 64)], [])


# ----------------------------------------------------------------- subset


def test_subset_whole_dataset():
    recs = records_for(6)
    fps = [Fingerprint(1 << i, 64) for i in range(6)]
    assert diverse_subset(recs, 6, 0.9, 1, fps=fps) == recs


def test_subset_of_size_k_is_the_centers():
    rng = random.Random(8)
    fps = clustered(rng, 20, n_clusters=4)
    k = len(maxmin_pick(fps, 0.9, len(fps), seed=2))
    assert k == 4
    rep = diverse_subset_indices(fps, k, 0.9, 2)
    assert rep.per_cluster == 0 and rep.top_up == 0
    assert rep.indices == sorted(rep.centers)


def test_subset_larger_than_dataset():
    with pytest.raises(ValueError):
        diverse_subset(records_for(3), 4, 0.9, 0, fps=[Fingerprint(1, 64)] * 3)


def test_per_cluster_count():
    # K = 4 clusters of 20, M = 20: floor((20 - 4) / 4) - 1 = 3 extra each
    rng = random.Random(9)
    fps = clustered(rng, 20, n_clusters=4)
    rep = diverse_subset_indices(fps, 20, 0.9, 5)
    assert rep.per_cluster == 3
    assert rep.top_up == 20 - 4 * 4
    labels = assign_to_centers(fps, rep.centers)
    for c in rep.centers:
        assert sum(1 for i in rep.indices if labels[i] == c) >= 4


def test_bimodal_both_clusters_and_more_diverse_than_random():
    rng = random.Random(10)
    fps = clustered(rng, 5, n_clusters=1) + clustered(rng, 95, n_clusters=2)[95:]
    # 5 members in the first cluster, 95 in the second
    recs = records_for(len(fps))
    sub = diverse_subset(recs, 10, 0.9, 3, fps=fps)
    idx = [int(r.source_id) for r in sub]
    assert any(i < 5 for i in idx) and any(i >= 5 for i in idx)

    def mean_pair(ix):
        return np.mean([tanimoto_distance(fps[a], fps[b]) for a, b in itertools.combinations(ix, 2)])

    rand = random.Random(10).sample(range(len(fps)), 10)
    assert mean_pair(idx) >= mean_pair(rand)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.data())
def test_subset_size_and_determinism(seed, data):
    rng = random.Random(seed)
    fps = [random_fp(rng, 64) for _ in range(rng.randint(1, 50))]
    m = data.draw(st.integers(0, len(fps)))
    t = data.draw(st.sampled_from([0.3, 0.6, 0.9]))
    a = diverse_subset_indices(fps, m, t, seed)
    assert len(a.indices) == m == len(set(a.indices))
    assert a == diverse_subset_indices(fps, m, t, seed)
    if 0 < m < len(fps):
        assert set(a.centers) <= set(a.indices)


# ---------------------------------------------------------------- ncircles


def test_ncircles_t_zero_counts_everything():
    rng = random.Random(11)
    fps = [random_fp(rng) for _ in range(30)]
    assert ncircles(fps, 0.0).count == 30


def test_ncircles_t_above_one_is_one():
    rng = random.Random(12)
    fps = [random_fp(rng) for _ in range(30)]
    r = ncircles(fps, 1.01)
    assert r.count == 1 and r.accepted == [0]


def test_ncircles_normalized_and_empty():
    fps = [Fingerprint(1 << i, 64) for i in range(8)]
    r = ncircles(fps, 0.75)
    assert r.count == 8 and r.normalized == 1.0
    assert ncircles([], 0.75).count == 0


def test_ncircles_valid_maximal_packing():
    rng = random.Random(13)
    fps = [random_fp(rng, 64, 0.15) for _ in range(150)]
    r = ncircles(fps, 0.75)
    assert min_pairwise(fps, r.accepted) >= 0.75
    for i in set(range(len(fps))) - set(r.accepted):
        assert any(tanimoto_distance(fps[i], fps[a]) < 0.75 for a in r.accepted if a < i)


def test_ncircles_never_exceeds_exact_packing():
    rng = random.Random(14)
    for _ in range(60):
        fps = [random_fp(rng, 32) for _ in range(rng.randint(1, 12))]
        t = rng.choice([0.5, 0.75, 0.9])
        assert ncircles(fps, t).count <= exact_packing(fps, t)


def test_ncircles_exact_on_separable_fixture():
    rng = random.Random(15)
    fps = clustered(rng, 3, n_clusters=4)
    rng.shuffle(fps)
    assert ncircles(fps, 0.75).count == exact_packing(fps, 0.75) == 4


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 2 ** 32 - 1), min_size=1, max_size=40), st.floats(0, 1.2))
def test_ncircles_matches_plain_greedy(bits, t):
    fps = [Fingerprint(b, 32) for b in bits]
    acc = []
    for i, f in enumerate(fps):
        if all(tanimoto_distance(f, fps[a]) >= t for a in acc):
            acc.append(i)
    assert ncircles(fps, t).accepted == acc


# ---------------------------------------------------------- distance stats


def ecdf_oracle(a, b):
    """Wasserstein-1 and K-S by integrating the two empirical CDFs directly."""
    a, b = sorted(a), sorted(b)
    pts = sorted(set(a) | set(b))

    def F(xs, x):
        return bisect.bisect_right(xs, x) / len(xs)

    w = 0.0
    for x0, x1 in zip(pts, pts[1:]):
        w += abs(F(a, x0) - F(b, x0)) * (x1 - x0)
    ks = max(abs(F(a, x) - F(b, x)) for x in pts)
    return w, ks


def test_identical_samples():
    x = np.linspace(0, 1, 50)
    assert compare_samples(x, x) == {"wasserstein": 0.0, "ks": 0.0}


def test_point_masses():
    assert compare_samples(np.zeros(10), np.ones(7)) == {"wasserstein": 1.0, "ks": 1.0}


def test_statistics_match_ecdf_oracle():
    rng = np.random.default_rng(16)
    for _ in range(5):
        a = rng.beta(2, 5, size=1000)
        b = np.round(rng.beta(3, 3, size=1000), 2)  # ties exercise the step edges
        got = compare_samples(a, b)
        w, ks = ecdf_oracle(a, b)
        assert abs(got["wasserstein"] - w) <= 1e-12
        assert abs(got["ks"] - ks) <= 1e-12


def test_summary_nearest_rank():
    s = distance_summary(np.arange(1, 101) / 100)
    assert s == {"p10": 0.1, "p25": 0.25, "mean": pytest.approx(0.505), "median": 0.5,
                 "p75": 0.75, "p90": 0.9}
    assert nearest_rank([3.0], 10) == 3.0


def test_pair_sampling_excludes_self_pairs():
    fps = [Fingerprint(1, 64), Fingerprint(1, 64)]
    d = sample_pair_distances(fps, 500, np.random.default_rng(0))
    assert (d == 0).all()
    fps = [Fingerprint(1, 64), Fingerprint(2, 64)]
    d = sample_pair_distances(fps, 500, np.random.default_rng(0))
    assert (d == 1).all()


def test_pair_distance_stats_reproducible():
    rng = random.Random(17)
    a = [random_fp(rng) for _ in range(40)]
    b = [random_fp(rng) for _ in range(30)]
    s1 = pair_distance_stats(a, b, 2000, seed=3)
    assert s1 == pair_distance_stats(a, b, 2000, seed=3)
    assert set(s1) >= {"a", "b", "wasserstein", "ks"}
    assert set(s1["a"]) == {"p10", "p25", "mean", "median", "p75", "p90"}


def test_pair_stats_needs_two():
    with pytest.raises(ValueError):
        pair_distance_stats([Fingerprint(1, 64)], [Fingerprint(1, 64)] * 2, 10, 0)
