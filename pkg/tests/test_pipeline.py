import gzip
import itertools
import random

import pytest

from molcurate.molgraph import CanonicalKey
from molcurate.pipeline import (
    KeySet,
    MergeError,
    MoleculeRecord,
    PipelineInputError,
    ingest,
    merge_sources,
    read_records,
    read_rows,
    run_file,
    run_source,
    write_records,
)

TOY = [
    "CCO", "C(", "c1cccc1C", "C.C.C.CC", "c1ccccc1", "CC(=O)O",
    "Nc1ccccc1", "C1CCNCC1", "OCCN", "CC(C)C",
]


def write_source(path, smiles, source="src"):
    with open(path, "w") as fh:
        fh.write("source\tsource_id\tsmiles\n")
        for i, s in enumerate(smiles):
            fh.write(f"{source}\t{source}-{i}\t{s}\n")
    return path


def keys_of(path):
    return {r.key.key for r in read_records(path)}


# -------------------------------------------------------------------- ingest


def test_ingest_counts_parse_failure(tmp_path):
    recs, led = ingest(write_source(tmp_path / "a.tsv", ["CCO", "C(", "CC"]))
    assert len(recs) == 2 and led.preprocessing == 1 and led.initial == 3


def test_ingest_dedups_same_graph(tmp_path):
    recs, led = ingest(write_source(tmp_path / "a.tsv", ["CCO", "OCC"]))
    assert len(recs) == 1 and recs[0].source_id == "src-0"
    assert led.duplicates["preprocessing"] == 1


def test_ingest_empty(tmp_path):
    recs, led = ingest(write_source(tmp_path / "a.tsv", []))
    assert recs == [] and led.initial == 0


def test_malformed_header(tmp_path):
    p = tmp_path / "bad.tsv"
    p.write_text("id\tsmiles\n1\tC\n")
    with pytest.raises(PipelineInputError):
        list(read_rows(p))


def test_unreadable(tmp_path):
    with pytest.raises(PipelineInputError):
        list(read_rows(tmp_path / "missing.tsv"))


def test_short_row_is_counted(tmp_path):
    p = tmp_path / "a.tsv"
    p.write_text("source\tsource_id\tsmiles\nsrc\t1\tCCO\nsrc\n")
    recs, led = ingest(p)
    assert led.initial == 2 and led.preprocessing == 1


def test_gzip_input(tmp_path):
    p = tmp_path / "a.tsv.gz"
    with gzip.open(p, "wt") as fh:
        fh.write("source\tsource_id\tsmiles\nsrc\t1\tCCO\n")
    assert [r[2] for r in read_rows(p)] == ["CCO"]


# ---------------------------------------------------------------- run_source


def test_toy_source_stage_counts(tmp_path):
    recs, led = ingest(write_source(tmp_path / "a.tsv", TOY))
    kept, led = run_source(recs, led)
    assert led.final == 7
    assert (led.preprocessing, led.standardization, led.filtering) == (1, 1, 1)
    stages = {r.source_id: r.stage for r in led.removed_records}
    assert stages == {"src-1": "preprocessing", "src-2": "standardization", "src-3": "filtering"}


def test_all_valid_source(tmp_path):
    recs, led = ingest(write_source(tmp_path / "a.tsv", ["CCO", "CCN", "c1ccccc1"]))
    kept, led = run_source(recs, led)
    assert (led.preprocessing, led.standardization, led.filtering) == (0, 0, 0)


def test_standardization_duplicates(tmp_path):
    # distinct parsed graphs, same standardized graph
    recs, led = ingest(write_source(tmp_path / "a.tsv", ["C1=CC=CC=C1", "c1ccccc1", "[Na]OC", "C[O-].[Na+]"]))
    assert led.preprocessing == 0
    kept, led = run_source(recs, led)
    assert led.duplicates["standardization"] == 2 and led.final == 2


def test_small_rigid_organics_pass_filter(tmp_path):
    from conftest import synthetic_corpus
    recs, led = ingest(write_source(tmp_path / "g.tsv", synthetic_corpus(200, seed=17)))
    kept, led = run_source(recs, led)
    assert led.filtering == 0


def test_run_file_matches_stagewise(tmp_path):
    from conftest import synthetic_corpus
    smiles = synthetic_corpus(300, seed=3) + TOY + synthetic_corpus(50, seed=3)
    src = write_source(tmp_path / "a.tsv", smiles)
    recs, led = ingest(src)
    kept, led = run_source(recs, led)
    write_records(kept, tmp_path / "stagewise.tsv")
    led2 = run_file(src, tmp_path / "stream.tsv", tmp_path / "q.tsv")
    assert led2.as_dict() == led.as_dict()
    assert (tmp_path / "stream.tsv").read_bytes() == (tmp_path / "stagewise.tsv").read_bytes()
    q = (tmp_path / "q.tsv").read_text().splitlines()
    assert len(q) - 1 == led.initial - led.final


def test_thread_count_does_not_change_output(tmp_path):
    from conftest import synthetic_corpus
    src = write_source(tmp_path / "a.tsv", synthetic_corpus(400, seed=9) + TOY)
    run_file(src, tmp_path / "one.tsv", tmp_path / "q1.tsv", threads=1, block_size=37)
    run_file(src, tmp_path / "two.tsv", tmp_path / "q2.tsv", threads=2, block_size=37)
    assert (tmp_path / "one.tsv").read_bytes() == (tmp_path / "two.tsv").read_bytes()
    assert (tmp_path / "q1.tsv").read_bytes() == (tmp_path / "q2.tsv").read_bytes()


# ------------------------------------------------------------ write / read


def test_round_trip(tmp_path):
    recs, led = ingest(write_source(tmp_path / "a.tsv", ["CCO", "c1ccccc1"]))
    kept, _ = run_source(recs, led)
    write_records(kept, tmp_path / "k.tsv")
    back = read_records(tmp_path / "k.tsv")
    assert [(r.source, r.source_id, r.smiles, r.key, r.status) for r in back] == \
           [(r.source, r.source_id, r.smiles, r.key, r.status) for r in kept]


def test_empty_write(tmp_path):
    write_records([], tmp_path / "e.tsv")
    assert (tmp_path / "e.tsv").read_text() == "source\tsource_id\tsmiles\tkey\n"


def test_gzip_output_deterministic(tmp_path):
    rec = [MoleculeRecord("s", "1", "CCO", CanonicalKey(b"MK1/CCO"))]
    write_records(rec, tmp_path / "a.tsv.gz")
    write_records(rec, tmp_path / "b.tsv.gz")
    assert (tmp_path / "a.tsv.gz").read_bytes() == (tmp_path / "b.tsv.gz").read_bytes()


def test_non_ok_rejected(tmp_path):
    with pytest.raises(ValueError):
        write_records([MoleculeRecord("s", "1", "C(", status="parse_failed")], tmp_path / "x.tsv")


# --------------------------------------------------------------------- merge


def kept_file(tmp_path, name, smiles):
    src = write_source(tmp_path / f"{name}.in.tsv", smiles, source=name)
    out = tmp_path / f"{name}.tsv"
    run_file(src, out)
    return out


def test_merge_example(tmp_path):
    a = kept_file(tmp_path, "A", ["CCO", "CC"])
    b = kept_file(tmp_path, "B", ["OCC", "C"])
    gain = merge_sources([a, b], tmp_path / "m.tsv")
    assert gain["total"] == 3
    assert [row["new"] for row in gain["inputs"]] == [2, 1]
    merged = {r.smiles: r.source for r in read_records(tmp_path / "m.tsv")}
    assert merged["CCO"] == "A"


def test_merge_disjoint(tmp_path):
    a = kept_file(tmp_path, "A", ["CCO", "CC"])
    b = kept_file(tmp_path, "B", ["CCCC", "C"])
    assert merge_sources([a, b], tmp_path / "m.tsv")["total"] == 4


def test_merge_orders(tmp_path):
    rng = random.Random(4)
    from conftest import synthetic_corpus
    pool = synthetic_corpus(60, seed=8)
    files = [kept_file(tmp_path, n, rng.sample(pool, 30)) for n in "XYZ"]
    sets = [keys_of(f) for f in files]
    results = []
    for order in itertools.permutations(range(3)):
        out = tmp_path / f"m{''.join(map(str, order))}.tsv"
        gain = merge_sources(files, out, order=order)
        seen = set()
        for pos, i in enumerate(order):
            assert gain["inputs"][pos]["new"] == len(sets[i] - seen)
            seen |= sets[i]
        results.append(keys_of(out))
        # earliest source in the order owns each key
        for r in read_records(out):
            first = next(i for i in order if r.key.key in sets[i])
            assert r.source == "XYZ"[first]
    assert all(r == results[0] for r in results)


def test_merge_idempotent(tmp_path):
    a = kept_file(tmp_path, "A", ["CCO", "CC", "c1ccccc1"])
    merge_sources([a], tmp_path / "m.tsv")
    gain = merge_sources([tmp_path / "m.tsv", tmp_path / "m.tsv"], tmp_path / "m2.tsv")
    assert gain["inputs"][1]["new"] == 0


def test_merge_conflicting_ids(tmp_path):
    a = kept_file(tmp_path, "A", ["CCO"])
    b = tmp_path / "b.tsv"
    b.write_text("source\tsource_id\tsmiles\nA\tA-0\tCCCC\n")
    with pytest.raises(MergeError):
        merge_sources([a, b], tmp_path / "m.tsv")


def test_keyset_prefix_collision():
    # every key gets the same prefix, so only the full-key check separates them
    ks = KeySet(n_shards=4, prefix=lambda k: 7)
    keys = [CanonicalKey(b"MK1/" + s) for s in (b"C", b"CC", b"CCC")]
    assert all(ks.add(k) for k in keys)
    assert not any(ks.add(k) for k in keys)
    assert all(k in ks for k in keys) and CanonicalKey(b"MK1/O") not in ks
    assert len(ks) == 3
