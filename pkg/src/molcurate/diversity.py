"""Diverse subsets, #Circles and pairwise-distance statistics.

All distances are Tanimoto distances between binary fingerprints. Every
random choice comes from a numpy ``Generator`` seeded by the caller, and every
greedy decision breaks ties towards the lowest input index, so results are a
function of the inputs and the seed only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sps

from molcurate.fingerprint import DEFAULT_RADIUS, DEFAULT_WIDTH, FingerprintArray, ecfp
from molcurate.molgraph import parse_smiles

PERCENTILES = (("p10", 10), ("p25", 25), ("p75", 75), ("p90", 90))


def _array(fps) -> FingerprintArray:
    return fps if isinstance(fps, FingerprintArray) else FingerprintArray(fps)


def _row_distances(arr: FingerprintArray, i: int) -> np.ndarray:
    """Distance from row ``i`` to every row, straight from the packed words."""
    inter = np.bitwise_count(arr.words & arr.words[i]).sum(axis=1, dtype=np.int64)
    union = arr.counts + arr.counts[i] - inter
    with np.errstate(invalid="ignore", divide="ignore"):
        d = 1.0 - inter / union
    return np.where(union == 0, 0.0, d)


def fingerprints_of(records, radius: int = DEFAULT_RADIUS, width: int = DEFAULT_WIDTH):
    """ECFPs of curated records, parsed from their (standardized) SMILES."""
    return [ecfp(parse_smiles(r.smiles), radius, width) for r in records]


# ------------------------------------------------------------------ MaxMin


def maxmin_pick(fps, t: float, k_max: int, seed) -> list[int]:
    """Greedy MaxMin centers.

    Parameters
    ----------
    fps : sequence of Fingerprint or FingerprintArray
    t : float
        Stop once the best candidate is closer than ``t`` to the picked set.
    k_max : int
        Upper bound on the number of centers.
    seed : int
        Chooses the first center.

    Returns
    -------
    list of int
        Center indices in pick order. Any two are at distance >= t.
    """
    arr = _array(fps)
    n = len(arr)
    if n == 0:
        raise ValueError("maxmin_pick needs at least one fingerprint")
    if not 0 < t <= 1:
        raise ValueError("t must lie in (0, 1]")
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    rng = np.random.default_rng(seed)
    first = int(rng.integers(n))
    centers = [first]
    mind = _row_distances(arr, first)
    # a picked element is at distance 0 from itself, so it never wins again
    while len(centers) < k_max:
        j = int(np.argmax(mind))  # first maximum = lowest index
        if mind[j] < t:
            break
        centers.append(j)
        np.minimum(mind, _row_distances(arr, j), out=mind)
    return centers


def assign_to_centers(fps, centers) -> list[int]:
    """Label each element with its nearest center (an index into ``fps``).

    Ties go to the center with the lowest index, and a center always labels
    itself.
    """
    if not len(centers):
        raise ValueError("no centers")
    arr = _array(fps)
    n = len(arr)
    best = np.full(n, np.inf)
    labels = np.full(n, -1, dtype=np.int64)
    for c in sorted(set(int(c) for c in centers)):
        d = _row_distances(arr, c)
        closer = d < best
        best[closer] = d[closer]
        labels[closer] = c
    for c in centers:
        labels[c] = c
    return labels.tolist()


@dataclass
class SubsetReport:
    indices: list  # selected positions, ascending
    centers: list
    per_cluster: int
    top_up: int


def diverse_subset_indices(fps, M: int, t: float, seed) -> SubsetReport:
    """Positions of a diverse subset of size ``M``; see :func:`diverse_subset`."""
    arr = _array(fps)
    n = len(arr)
    if M > n:
        raise ValueError(f"subset size {M} exceeds dataset size {n}")
    if M < 0:
        raise ValueError("subset size must be >= 0")
    if M == n:
        return SubsetReport(list(range(n)), [], 0, 0)
    if M == 0:
        return SubsetReport([], [], 0, 0)
    centers = maxmin_pick(arr, t, M, seed)
    k = len(centers)
    labels = assign_to_centers(arr, centers)
    extra = max((M - k) // k - 1, 0)  # may be -1 when M < 2K
    rng = np.random.default_rng([seed, 1])  # independent of the MaxMin stream

    members: dict[int, list[int]] = {c: [] for c in centers}
    for i, c in enumerate(labels):
        if i != c:
            members[c].append(i)
    chosen = set(centers)
    if extra:
        for c in centers:
            pool = members[c]
            take = min(extra, len(pool))
            if take:
                chosen.update(int(x) for x in rng.choice(pool, take, replace=False))
    top_up = M - len(chosen)
    if top_up:
        pool = [i for i in range(n) if i not in chosen]
        chosen.update(int(x) for x in rng.choice(pool, top_up, replace=False))
    return SubsetReport(sorted(chosen), centers, extra, top_up)


def diverse_subset(records, M: int, t: float = 0.9, seed=0, fps=None) -> list:
    """Diverse subset of exactly ``M`` records, in input order.

    MaxMin centers (at most ``M`` of them) are picked at threshold ``t``,
    every record joins its nearest center, and ``floor((M - K) / K) - 1``
    extra members (clamped at 0) are drawn uniformly from each cluster. The
    remainder is drawn uniformly from all unselected records.

    Parameters
    ----------
    records : sequence
        Curated records; only their ``smiles`` is used unless ``fps`` is given.
    M : int
        Target size, at most ``len(records)``.
    t : float
    seed : int
    fps : sequence of Fingerprint, optional
        Precomputed fingerprints aligned with ``records``.
    """
    records = list(records)
    if M > len(records):
        raise ValueError(f"subset size {M} exceeds dataset size {len(records)}")
    if M == len(records):
        return records
    if fps is None:
        fps = fingerprints_of(records)
    report = diverse_subset_indices(fps, M, t, seed)
    return [records[i] for i in report.indices]


# ----------------------------------------------------------------- #Circles


@dataclass
class CirclesResult:
    count: int
    n: int
    t: float
    accepted: list = field(default_factory=list, repr=False)

    @property
    def normalized(self) -> float:
        return self.count / self.n if self.n else 0.0

    def as_dict(self) -> dict:
        return {"t": self.t, "n": self.n, "ncircles": self.count, "normalized": self.normalized}


def ncircles(fps, t: float = 0.75) -> CirclesResult:
    """Greedy #Circles: a maximal packing built in input order.

    An element is accepted iff its distance to every accepted element is at
    least ``t``. The count is a lower bound on the packing number; no
    approximation ratio is claimed.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    if not isinstance(fps, FingerprintArray) and not len(fps):
        return CirclesResult(0, 0, t)
    arr = _array(fps)
    n = len(arr)
    words = np.empty_like(arr.words)
    counts = np.empty_like(arr.counts)
    accepted = []
    for i in range(n):
        k = len(accepted)
        if k:
            qc = arr.counts[i]
            # popcount bound: 1 - min/max <= distance, so rows with bound >= t
            # cannot reject; only the others need the full word comparison
            lo = np.minimum(counts[:k], qc)
            hi = np.maximum(counts[:k], qc)
            with np.errstate(invalid="ignore", divide="ignore"):
                bound = np.where(hi == 0, 0.0, 1.0 - lo / hi)
            near = np.flatnonzero(bound < t)
            if near.size:
                inter = np.bitwise_count(words[near] & arr.words[i]).sum(axis=1, dtype=np.int64)
                union = counts[near] + qc - inter
                with np.errstate(invalid="ignore", divide="ignore"):
                    d = np.where(union == 0, 0.0, 1.0 - inter / union)
                if (d < t).any():
                    continue
        words[k] = arr.words[i]
        counts[k] = arr.counts[i]
        accepted.append(i)
    return CirclesResult(len(accepted), n, t, accepted)


# --------------------------------------------------------- distance samples


def nearest_rank(sorted_values, q: float):
    """Nearest-rank percentile (``q`` in [0, 100]) of an ascending sequence."""
    n = len(sorted_values)
    if n == 0:
        raise ValueError("empty sample")
    rank = int(np.ceil(q / 100.0 * n))
    return sorted_values[min(max(rank, 1), n) - 1]


def distance_summary(sample) -> dict:
    """p10/p25/mean/median/p75/p90 of a distance sample (nearest rank)."""
    x = np.sort(np.asarray(sample, dtype=float))
    out = {name: float(nearest_rank(x, q)) for name, q in PERCENTILES[:2]}
    out["mean"] = float(x.mean())
    out["median"] = float(nearest_rank(x, 50))
    out.update({name: float(nearest_rank(x, q)) for name, q in PERCENTILES[2:]})
    return out


def compare_samples(a, b) -> dict:
    """1-D Wasserstein distance and two-sample K-S statistic."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return {
        "wasserstein": float(sps.wasserstein_distance(a, b)),
        "ks": float(sps.ks_2samp(a, b).statistic),
    }


def sample_pair_distances(fps, n_pairs: int, rng: np.random.Generator) -> np.ndarray:
    """Distances of ``n_pairs`` uniformly drawn pairs of distinct elements."""
    arr = _array(fps)
    n = len(arr)
    if n < 2:
        raise ValueError("need at least two fingerprints to sample pairs")
    if n_pairs < 1:
        raise ValueError("n_pairs must be >= 1")
    i = rng.integers(n, size=n_pairs)
    j = rng.integers(n - 1, size=n_pairs)
    j += j >= i  # uniform over the other n - 1 elements
    out = np.empty(n_pairs)
    for start in range(0, n_pairs, 65536):
        a, b = i[start:start + 65536], j[start:start + 65536]
        inter = np.bitwise_count(arr.words[a] & arr.words[b]).sum(axis=1, dtype=np.int64)
        union = arr.counts[a] + arr.counts[b] - inter
        with np.errstate(invalid="ignore", divide="ignore"):
            out[start:start + len(a)] = np.where(union == 0, 0.0, 1.0 - inter / union)
    return out


def pair_distance_stats(fps_a, fps_b, n_pairs: int, seed) -> dict:
    """Compare the within-set distance distributions of two fingerprint sets.

    Each set gets its own Philox stream derived from ``seed``.

    Returns
    -------
    dict
        ``{"a": summary, "b": summary, "wasserstein": float, "ks": float,
        "n_pairs": int, "seed": seed, "percentile": "nearest-rank"}``
    """
    streams = np.random.SeedSequence(seed).spawn(2)
    xa = sample_pair_distances(fps_a, n_pairs, np.random.Generator(np.random.Philox(streams[0])))
    xb = sample_pair_distances(fps_b, n_pairs, np.random.Generator(np.random.Philox(streams[1])))
    out = {"a": distance_summary(xa), "b": distance_summary(xb)}
    out.update(compare_samples(xa, xb))
    out.update({"n_pairs": n_pairs, "seed": seed, "percentile": "nearest-rank"})
    return out


__all__ = [
    "CirclesResult",
    "SubsetReport",
    "assign_to_centers",
    "compare_samples",
    "distance_summary",
    "diverse_subset",
    "diverse_subset_indices",
    "fingerprints_of",
    "maxmin_pick",
    "ncircles",
    "nearest_rank",
    "pair_distance_stats",
    "sample_pair_distances",
]
