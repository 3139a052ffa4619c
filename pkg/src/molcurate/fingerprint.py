"""Binary ECFP fingerprints and Tanimoto distance.

A :class:`Fingerprint` is an immutable bit vector stored as a Python integer
(bit ``k`` of the integer is bit ``k`` of the vector), so single-pair
distances only need ``&``, ``|`` and ``int.bit_count``. Many-against-one
work goes through :class:`FingerprintArray`, a packed ``uint64`` matrix.

Atom identifiers are built with a fixed 32-bit integer mix, never Python's
``hash``, so bit positions are identical across runs, processes and
platforms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from molcurate.molgraph.graph import Molecule

DEFAULT_RADIUS = 2
DEFAULT_WIDTH = 2048

_MASK32 = 0xFFFFFFFF


def _mix(seed: int, value: int) -> int:
    """hash_combine on 32-bit unsigned integers."""
    value &= _MASK32
    seed ^= (value + 0x9E3779B9 + ((seed << 6) & _MASK32) + (seed >> 2)) & _MASK32
    return seed & _MASK32


def _hash_seq(values) -> int:
    h = 0
    for v in values:
        h = _mix(h, v)
    return h


@dataclass(frozen=True)
class Fingerprint:
    """Fixed-width bit vector with a cached popcount."""

    bits: int
    width: int = DEFAULT_WIDTH
    popcount: int = field(init=False, compare=False)

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.width:
            raise ValueError("bits outside the fingerprint width")
        object.__setattr__(self, "popcount", self.bits.bit_count())

    @classmethod
    def from_indices(cls, indices, width: int = DEFAULT_WIDTH) -> "Fingerprint":
        bits = 0
        for k in indices:
            if not 0 <= k < width:
                raise ValueError(f"bit {k} outside width {width}")
            bits |= 1 << k
        return cls(bits, width)

    def on_bits(self) -> list[int]:
        out = []
        b = self.bits
        while b:
            low = b & -b
            out.append(low.bit_length() - 1)
            b ^= low
        return out

    def to_words(self) -> np.ndarray:
        """Little-endian ``uint64`` words, ``width // 64`` of them."""
        n_bytes = max(self.width // 8, 8)
        return np.frombuffer(self.bits.to_bytes(n_bytes, "little"), dtype="<u8").astype(np.uint64)

    def to_hex(self) -> str:
        return self.bits.to_bytes(max(self.width // 8, 1), "big").hex()

    @classmethod
    def from_hex(cls, text: str, width: int = DEFAULT_WIDTH) -> "Fingerprint":
        return cls(int(text, 16), width)


def atom_identifiers(m: Molecule) -> list[int]:
    """Radius-0 identifiers from the usual ECFP invariants.

    Heavy degree, total valence, element, isotope, charge, total H and ring
    membership, hashed to 32 bits.
    """
    out = []
    for i, a in enumerate(m.atoms):
        out.append(_hash_seq((
            m.heavy_degree(i),
            m.explicit_valence(i) + a.implicit_h,
            a.element,
            a.isotope,
            a.charge & _MASK32,
            m.total_h(i),
            int(a.in_ring),
        )))
    return out


def ecfp_identifiers(m: Molecule, radius: int = DEFAULT_RADIUS, info: dict | None = None) -> set[int]:
    """Unfolded 32-bit environment identifiers for radii 0..radius.

    Hydrogen atoms do not get environments of their own. When two
    environments cover exactly the same set of bonds only the first one
    (lower iteration, then lower identifier) is kept, as in ECFP proper.

    If ``info`` is a dict it is filled with ``identifier -> [(atom, radius)]``.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    heavy = [i for i, a in enumerate(m.atoms) if a.element != 1]
    ids = atom_identifiers(m)
    adj = m.adjacency
    out = {ids[i] for i in heavy}
    if info is not None:
        for i in heavy:
            info.setdefault(ids[i], []).append((i, 0))
    seen_masks = set()
    masks = {i: 0 for i in heavy}  # bonds covered by each atom's environment
    for it in range(1, radius + 1):
        new_ids = {}
        new_masks = {}
        for i in heavy:
            nb = []
            mask = masks[i]
            for j, kb in adj[i]:
                if m.atoms[j].element == 1:
                    continue
                nb.append((m.bonds[kb].kind, ids[j]))
                mask |= (1 << kb) | masks[j]
            nb.sort()
            h = _mix(it, ids[i])
            for kind, nid in nb:
                h = _mix(h, kind)
                h = _mix(h, nid)
            new_ids[i] = h
            new_masks[i] = mask
        candidates = sorted((new_masks[i] == masks[i], new_ids[i], new_masks[i], i) for i in heavy)
        for unchanged, h, mask, i in candidates:
            if unchanged or mask in seen_masks:
                continue
            seen_masks.add(mask)
            out.add(h)
            if info is not None:
                info.setdefault(h, []).append((i, it))
        for i in heavy:
            ids[i] = new_ids[i]
            masks[i] = new_masks[i]
    return out


def ecfp(m: Molecule, radius: int = DEFAULT_RADIUS, width: int = DEFAULT_WIDTH) -> Fingerprint:
    """Folded ECFP bit vector of a standardized molecule.

    Parameters
    ----------
    m : Molecule
        Standardized molecule; aromatic flags enter through the bond kinds.
    radius : int
        Number of refinement iterations (2 gives ECFP4).
    width : int
        Power of two; identifiers are folded modulo the width.
    """
    if width <= 0 or width & (width - 1):
        raise ValueError("width must be a power of two")
    bits = 0
    for h in ecfp_identifiers(m, radius):
        bits |= 1 << (h & (width - 1))
    return Fingerprint(bits, width)


def tanimoto_distance(a: Fingerprint, b: Fingerprint) -> float:
    """1 - |a & b| / |a | b|; two empty fingerprints are at distance 0."""
    if a.width != b.width:
        raise ValueError(f"width mismatch: {a.width} vs {b.width}")
    union = (a.bits | b.bits).bit_count()
    if union == 0:
        return 0.0
    return 1.0 - (a.bits & b.bits).bit_count() / union


def _distance_from_counts(inter, pa, pb):
    union = pa + pb - inter
    with np.errstate(invalid="ignore", divide="ignore"):
        d = 1.0 - inter / union
    return np.where(union == 0, 0.0, d)


class FingerprintArray:
    """Packed ``uint64`` matrix of equal-width fingerprints with popcounts."""

    def __init__(self, fps, width: int | None = None):
        fps = list(fps)
        if width is None:
            if not fps:
                raise ValueError("width required for an empty array")
            width = fps[0].width
        if any(f.width != width for f in fps):
            raise ValueError("fingerprints of mixed widths")
        self.width = width
        self.n_words = max(width // 64, 1)
        self.words = np.zeros((len(fps), self.n_words), dtype=np.uint64)
        for k, f in enumerate(fps):
            self.words[k] = f.to_words()
        self.counts = np.array([f.popcount for f in fps], dtype=np.int64)

    def __len__(self) -> int:
        return len(self.counts)

    def _query(self, q: Fingerprint):
        if q.width != self.width:
            raise ValueError(f"width mismatch: {q.width} vs {self.width}")
        return q.to_words(), q.popcount

    def distances(self, q: Fingerprint, rows=None) -> np.ndarray:
        """Tanimoto distance from ``q`` to every row (or to ``rows``)."""
        qw, qc = self._query(q)
        words = self.words if rows is None else self.words[rows]
        counts = self.counts if rows is None else self.counts[rows]
        inter = np.bitwise_count(words & qw).sum(axis=1, dtype=np.int64)
        return _distance_from_counts(inter, counts, qc)

    def lower_bounds(self, q: Fingerprint) -> np.ndarray:
        """Distance lower bound from popcounts alone: 1 - min/max."""
        qc = q.popcount
        lo = np.minimum(self.counts, qc)
        hi = np.maximum(self.counts, qc)
        with np.errstate(invalid="ignore", divide="ignore"):
            b = 1.0 - lo / hi
        return np.where(hi == 0, 0.0, b)


def min_distance_to_set(q: Fingerprint, fps, block: int = 256) -> tuple[float, int]:
    """Exact nearest element of ``fps`` to ``q``, lowest index on ties.

    Candidates are visited in order of their popcount lower bound, a block at
    a time; the scan stops once the next bound exceeds the best distance
    found, so the answer is the same as a full linear scan.

    Parameters
    ----------
    q : Fingerprint
    fps : sequence of Fingerprint or FingerprintArray
    """
    arr = fps if isinstance(fps, FingerprintArray) else FingerprintArray(fps, q.width)
    if len(arr) == 0:
        raise ValueError("empty fingerprint set")
    bounds = arr.lower_bounds(q)
    order = np.lexsort((np.arange(len(arr)), bounds))
    best_d, best_i = np.inf, -1
    for start in range(0, len(order), block):
        rows = order[start:start + block]
        if bounds[rows[0]] > best_d:
            break
        d = arr.distances(q, rows)
        k = int(np.argmin(d))
        dk = float(d[k])
        # lowest index among the block's minima
        idx = int(rows[d == dk].min())
        if dk < best_d or (dk == best_d and idx < best_i):
            best_d, best_i = dk, idx
    return best_d, best_i


def naive_min_distance(q: Fingerprint, fps) -> tuple[float, int]:
    """Reference linear scan used to check :func:`min_distance_to_set`."""
    best = None
    for i, f in enumerate(fps):
        d = tanimoto_distance(q, f)
        if best is None or d < best[0]:
            best = (d, i)
    if best is None:
        raise ValueError("empty fingerprint set")
    return best
