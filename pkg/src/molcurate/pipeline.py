"""Per-source curation and cross-source merging of record files.

Record files are UTF-8 TSV (optionally gzip-compressed) with the header
``source  source_id  smiles`` and an optional fourth ``key`` column, which
written files always carry.

A source goes through three stages. Each stage removes the records that fail
it *and* the duplicates it uncovers, and the removals are counted per stage:

``preprocessing``    parse the SMILES; drop duplicates of the parsed graph
``standardization``  standardize; drop duplicates of the standardized graph
``filtering``        feasibility filter

Duplicates keep the first occurrence. Every removed record goes to the
quarantine file with its stage and reason, so nothing disappears silently.

Per-record work (parsing, standardization, descriptors) is a pure function
and may run in worker processes; deduplication and writing happen in the
parent in input order, so the output does not depend on ``threads``.
"""

from __future__ import annotations

import gzip
import io
import json
import multiprocessing
import os
from dataclasses import dataclass, field
from itertools import islice

from molcurate.descriptors import compute_descriptors
from molcurate.filters import feasibility_check
from molcurate.molgraph import CanonicalKey, SmilesError, canonicalize, parse_smiles
from molcurate.molgraph.canon import KEY_VERSION, same_canonical_input
from molcurate.standardizer import StandardizationFailure, standardize

HEADER = ("source", "source_id", "smiles")
STAGES = ("preprocessing", "standardization", "filtering")
STATUSES = ("ok", "parse_failed", "standardize_failed", "filtered", "duplicate")
QUARANTINE_HEADER = ("source", "source_id", "smiles", "status", "stage", "reason")

BLOCK_SIZE = 1000


class PipelineInputError(ValueError):
    """Unreadable or malformed record file."""


class MergeError(ValueError):
    pass


@dataclass
class MoleculeRecord:
    source: str
    source_id: str
    smiles: str
    key: CanonicalKey | None = None
    status: str = "ok"
    stage: str = ""
    reason: str = ""
    mol: object = field(default=None, repr=False, compare=False)

    def row(self) -> tuple:
        return (self.source, self.source_id, self.smiles, self.key.key.decode() if self.key else "")


@dataclass
class StageLedger:
    """Counts for one source; removals are stored as positive numbers."""

    source: str
    initial: int = 0
    preprocessing: int = 0
    standardization: int = 0
    filtering: int = 0
    final: int = 0
    duplicates: dict = field(default_factory=lambda: {s: 0 for s in STAGES[:2]})
    failures: int = 0  # parse + standardization failures (not duplicates or filtered)
    removed_records: list = field(default_factory=list, repr=False, compare=False)

    def check(self):
        removed = self.preprocessing + self.standardization + self.filtering
        if self.initial - removed != self.final:
            raise AssertionError(
                f"ledger for {self.source!r} does not balance: "
                f"{self.initial} - {removed} != {self.final}")

    def as_dict(self) -> dict:
        return {
            "source": self.source,
            "initial": self.initial,
            "removed": {s: getattr(self, s) for s in STAGES},
            "duplicates_removed": dict(self.duplicates),
            "final": self.final,
            "failures": self.failures,
        }


# --------------------------------------------------------------- record I/O


class _GzipWriter(gzip.GzipFile):
    """GzipFile that also closes the file object it was given."""

    def close(self):
        fh = self.fileobj
        try:
            super().close()
        finally:
            if fh is not None:
                fh.close()


def _open_text(path, mode="rt"):
    path = os.fspath(path)
    if "r" in mode:
        with open(path, "rb") as fh:
            magic = fh.read(2)
        if magic == b"\x1f\x8b":
            return gzip.open(path, mode, encoding="utf-8", newline="")
        return open(path, mode, encoding="utf-8", newline="")
    if path.endswith(".gz"):
        # no name and mtime=0 keep gzip output byte-identical between runs
        raw = _GzipWriter(filename="", mode="wb", fileobj=open(path, "wb"), mtime=0)
        return io.TextIOWrapper(raw, encoding="utf-8", newline="")
    return open(path, mode, encoding="utf-8", newline="")


def read_rows(path):
    """Yield ``(source, source_id, smiles, key_or_None)`` from a record file.

    Raises
    ------
    PipelineInputError
        If the file cannot be opened or the header is not a record header.
    """
    try:
        fh = _open_text(path)
    except OSError as exc:
        raise PipelineInputError(f"cannot read {path}: {exc}") from None
    with fh:
        try:
            first = fh.readline()
        except (OSError, UnicodeDecodeError, EOFError) as exc:
            raise PipelineInputError(f"cannot read {path}: {exc}") from None
        cols = first.rstrip("\r\n").split("\t")
        if tuple(cols[:3]) != HEADER or cols[3:] not in ([], ["key"]):
            raise PipelineInputError(f"{path}: malformed header {first.rstrip()!r}")
        has_key = len(cols) == 4
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\r\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) < 3:
                # keep the row so it is counted and quarantined
                parts = (parts + ["", "", ""])[:3]
                parts[2] = ""
                yield parts[0], parts[1] or f"line{lineno}", "", None
                continue
            key = parts[3] if has_key and len(parts) > 3 and parts[3] else None
            yield parts[0], parts[1], parts[2], key


def read_records(path) -> list[MoleculeRecord]:
    """Load a written record file (status ok, keys from the key column)."""
    out = []
    for source, sid, smi, key in read_rows(path):
        out.append(MoleculeRecord(source, sid, smi, CanonicalKey(key.encode()) if key else None))
    return out


def write_records(records, path) -> int:
    """Write ok-status records with their keys; returns the number written."""
    n = 0
    with _open_text(path, "wt") as fh:
        fh.write("\t".join(HEADER + ("key",)) + "\n")
        for r in records:
            if r.status != "ok":
                raise ValueError(f"record {r.source}/{r.source_id} has status {r.status}")
            fh.write("\t".join(r.row()) + "\n")
            n += 1
    return n


class _Quarantine:
    def __init__(self, path):
        self.fh = _open_text(path, "wt") if path else None
        self.n = 0
        self.failures = 0
        if self.fh:
            self.fh.write("\t".join(QUARANTINE_HEADER) + "\n")

    def add(self, r: MoleculeRecord):
        self.n += 1
        if r.status in ("parse_failed", "standardize_failed"):
            self.failures += 1
        if self.fh:
            reason = r.reason.replace("\t", " ").replace("\n", " ")
            self.fh.write("\t".join((r.source, r.source_id, r.smiles, r.status, r.stage, reason)) + "\n")

    def close(self):
        if self.fh:
            self.fh.close()


# ------------------------------------------------------------ record stages


def preprocess(source, source_id, smiles) -> MoleculeRecord:
    """Parse one row; the key is that of the parsed (unstandardized) graph."""
    rec = MoleculeRecord(source, source_id, smiles)
    if not smiles:
        rec.status, rec.stage, rec.reason = "parse_failed", "preprocessing", "empty SMILES"
        return rec
    try:
        m = parse_smiles(smiles)
        rec.key = canonicalize(m)[0]
    except SmilesError as exc:
        rec.status, rec.stage, rec.reason = "parse_failed", "preprocessing", str(exc)
        return rec
    rec.mol = m
    return rec


def standardize_record(rec: MoleculeRecord) -> MoleculeRecord:
    try:
        m = standardize(rec.mol)
    except StandardizationFailure as exc:
        rec.status, rec.stage, rec.reason = "standardize_failed", "standardization", str(exc)
        rec.mol = None
        return rec
    if rec.key is not None and same_canonical_input(rec.mol, m):
        key, smi = rec.key, rec.key.key[len(KEY_VERSION):].decode("utf-8")
    else:
        key, smi = canonicalize(m)
    rec.mol, rec.key, rec.smiles = m, key, smi
    return rec


def filter_record(rec: MoleculeRecord) -> MoleculeRecord:
    verdict = feasibility_check(compute_descriptors(rec.mol), len(rec.key))
    if not verdict.passed:
        rec.status, rec.stage = "filtered", "filtering"
        rec.reason = "; ".join(f"{name}={obs} (bound {b})" for name, obs, b in verdict.violations)
    return rec


def ingest(path, ledger: StageLedger | None = None):
    """Read and parse one source file, dropping parse failures and duplicates.

    Returns
    -------
    (records, ledger)
        ``records`` holds the surviving ok records with the parsed graph
        attached as ``mol``; removed records are in ``ledger.removed_records``.
    """
    records = []
    seen: set[bytes] = set()
    led = ledger
    for source, sid, smi, _ in read_rows(path):
        if led is None:
            led = StageLedger(source)
        led.initial += 1
        rec = preprocess(source, sid, smi)
        if rec.status == "ok":
            if rec.key.key in seen:
                rec.status, rec.stage, rec.reason = "duplicate", "preprocessing", "duplicate parsed graph"
                led.duplicates["preprocessing"] += 1
            else:
                seen.add(rec.key.key)
        if rec.status != "ok":
            led.preprocessing += 1
            led.failures += rec.status == "parse_failed"
            led.removed_records.append(rec)
        else:
            records.append(rec)
    if led is None:
        led = StageLedger(os.path.basename(os.fspath(path)))
    return records, led


def run_source(records, ledger: StageLedger):
    """Standardize and feasibility-filter ingested records.

    Returns the kept records (canonical SMILES, standardized keys) and the
    completed ledger; removed records are appended to
    ``ledger.removed_records``.
    """
    kept = []
    seen: set[bytes] = set()
    removed = ledger.removed_records
    for rec in records:
        rec = standardize_record(rec)
        if rec.status == "ok":
            if rec.key.key in seen:
                rec.status, rec.stage, rec.reason = "duplicate", "standardization", "duplicate standardized graph"
                ledger.duplicates["standardization"] += 1
            else:
                seen.add(rec.key.key)
        if rec.status != "ok":
            ledger.standardization += 1
            ledger.failures += rec.status == "standardize_failed"
            removed.append(rec)
            continue
        rec = filter_record(rec)
        if rec.status != "ok":
            ledger.filtering += 1
            removed.append(rec)
            continue
        rec.mol = None
        kept.append(rec)
    ledger.final = len(kept)
    ledger.check()
    return kept, ledger


# --------------------------------------------------------- streaming runner


def _process_row(row):
    """All per-record work for the streaming runner, as plain tuples.

    Returns ``(parsed_key, status, stage, reason, smiles, key)``.
    """
    source, sid, smi = row
    rec = preprocess(source, sid, smi)
    if rec.status != "ok":
        return None, rec.status, rec.stage, rec.reason, smi, None
    raw_key = rec.key.key
    rec = standardize_record(rec)
    if rec.status != "ok":
        return raw_key, rec.status, rec.stage, rec.reason, smi, None
    rec = filter_record(rec)
    return raw_key, rec.status, rec.stage, rec.reason, rec.smiles, rec.key.key


def _process_block(rows):
    return [_process_row(r) for r in rows]


def _blocks(rows, size):
    it = iter(rows)
    while True:
        block = list(islice(it, size))
        if not block:
            return
        yield block


def _pool(threads):
    ctx = multiprocessing.get_context("fork" if "fork" in multiprocessing.get_all_start_methods() else "spawn")
    return ctx.Pool(threads)


def run_file(in_path, out_path, quarantine_path=None, threads: int = 1,
             block_size: int = BLOCK_SIZE) -> StageLedger:
    """Full per-source pipeline from a record file to a kept-record file.

    Equivalent to :func:`ingest` followed by :func:`run_source` and
    :func:`write_records`, but streaming and optionally parallel.

    Parameters
    ----------
    in_path, out_path : path-like
        Input record file and output file for kept records.
    quarantine_path : path-like, optional
        Where removed records go, one row each with stage and reason.
    threads : int
        Worker processes for the per-record stages; output is identical for
        every value.
    """
    rows = ((s, i, smi) for s, i, smi, _ in read_rows(in_path))
    ledger = None
    seen_raw: set[bytes] = set()
    seen_std: set[bytes] = set()
    quarantine = _Quarantine(quarantine_path)
    pool = _pool(threads) if threads > 1 else None
    pending: list = []
    blocks = _remember(_blocks(rows, block_size), pending)
    try:
        with _open_text(out_path, "wt") as out:
            out.write("\t".join(HEADER + ("key",)) + "\n")
            if pool:
                results = pool.imap(_process_block, blocks, chunksize=1)
            else:
                results = map(_process_block, blocks)
            for outcome_block in results:
                rows_block = pending.pop(0)
                for (source, sid, smi), outcome in zip(rows_block, outcome_block):
                    if ledger is None:
                        ledger = StageLedger(source)
                    ledger.initial += 1
                    raw_key, status, stage, reason, out_smi, key = outcome
                    if raw_key is not None:
                        if raw_key in seen_raw:
                            status, stage, reason = "duplicate", "preprocessing", "duplicate parsed graph"
                            ledger.duplicates["preprocessing"] += 1
                        else:
                            seen_raw.add(raw_key)
                    if status in ("ok", "filtered") and stage != "preprocessing":
                        if key in seen_std:
                            status, stage, reason = "duplicate", "standardization", "duplicate standardized graph"
                            ledger.duplicates["standardization"] += 1
                        else:
                            seen_std.add(key)
                    if status == "ok":
                        out.write(f"{source}\t{sid}\t{out_smi}\t{key.decode()}\n")
                        ledger.final += 1
                        continue
                    setattr(ledger, stage, getattr(ledger, stage) + 1)
                    quarantine.add(MoleculeRecord(source, sid, smi, status=status, stage=stage, reason=reason))
    finally:
        if pool:
            pool.close()
            pool.join()
        quarantine.close()
    if ledger is None:
        ledger = StageLedger(os.path.basename(os.fspath(in_path)))
    ledger.failures = quarantine.failures
    ledger.check()
    return ledger


def _remember(blocks, pending):
    # remember each block so the parent can pair rows with their outcomes
    for b in blocks:
        pending.append(b)
        yield b


# -------------------------------------------------------------------- merge


class KeySet:
    """Exact set of canonical keys, sharded on the 64-bit key prefix.

    Each shard maps a prefix to the full key bytes (or a list of them when
    two keys share a prefix), so a prefix collision never merges two
    distinct molecules.
    """

    def __init__(self, n_shards: int = 64, prefix=None):
        self.n_shards = n_shards
        self.prefix = prefix or (lambda k: k.prefix64)
        self.shards = [dict() for _ in range(n_shards)]
        self.size = 0

    def __len__(self) -> int:
        return self.size

    def add(self, key: CanonicalKey) -> bool:
        """Insert; True if the key was not present before."""
        p = self.prefix(key)
        shard = self.shards[p % self.n_shards]
        have = shard.get(p)
        if have is None:
            shard[p] = key.key
        elif isinstance(have, bytes):
            if have == key.key:
                return False
            shard[p] = [have, key.key]
        else:
            if key.key in have:
                return False
            have.append(key.key)
        self.size += 1
        return True

    def __contains__(self, key: CanonicalKey) -> bool:
        p = self.prefix(key)
        have = self.shards[p % self.n_shards].get(p)
        if have is None:
            return False
        return have == key.key if isinstance(have, bytes) else key.key in have


def _record_key(source, sid, smi, key):
    if key:
        return CanonicalKey(key.encode())
    rec = preprocess(source, sid, smi)
    if rec.status != "ok":
        raise MergeError(f"{source}/{sid}: unparseable SMILES in merge input")
    return canonicalize(standardize(rec.mol))[0]


def merge_sources(paths, out_path, order=None):
    """Merge kept-record files into one file of globally unique molecules.

    Sources are added in ``order`` (default: as given); a record is written
    only if its key has not been seen in an earlier position, so attribution
    follows the order while the final key set does not depend on it.

    Returns
    -------
    dict
        Gain table: per input, records read and new molecules contributed,
        plus the merged total.

    Raises
    ------
    MergeError
        If one ``(source, source_id)`` appears with two different keys.
    """
    paths = [os.fspath(p) for p in paths]
    if order is not None:
        paths = [paths[i] for i in order]
    keys = KeySet()
    ids: dict[tuple[str, str], bytes] = {}
    table = []
    with _open_text(out_path, "wt") as out:
        out.write("\t".join(HEADER + ("key",)) + "\n")
        for path in paths:
            read = new = 0
            sources = set()
            for source, sid, smi, key in read_rows(path):
                k = _record_key(source, sid, smi, key)
                read += 1
                sources.add(source)
                prev = ids.setdefault((source, sid), k.key)
                if prev != k.key:
                    raise MergeError(f"({source}, {sid}) appears with two different structures")
                if keys.add(k):
                    new += 1
                    out.write(f"{source}\t{sid}\t{smi}\t{k.key.decode()}\n")
            table.append({"input": path, "sources": sorted(sources), "read": read,
                          "new": new, "duplicates": read - new})
    return {"inputs": table, "total": len(keys)}


def write_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=False)
        fh.write("\n")
