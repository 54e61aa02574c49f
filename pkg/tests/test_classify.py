"""Mass formula, classification driver, covering radius, census."""

import math
import random
from pathlib import Path

import numpy as np
import pytest

from sdcode.classify import (
    MassAccount,
    census,
    classify_doubly_even,
    covering_radius,
    design_check,
    extremal38_pipeline,
    mass,
    weight8_subcode_dim,
)
from sdcode.codes import (
    LinearCode,
    extended_golay_code,
    extended_hamming_code,
    repetition_blocks,
)
from sdcode.construct import subtraction_candidates
from sdcode.errors import (
    BudgetExceededError,
    IncompleteCatalogError,
    ValidationError,
)
from sdcode.records import make_record, parse_record_line, trusted_record_from_stated

E8 = extended_hamming_code()
GOLAY = extended_golay_code()


def test_mass_values():
    assert mass(8) == 30
    assert mass(16) == 9845550
    assert mass(24) == math.prod((1 << i) + 1 for i in range(11))
    assert len(str(mass(40))) == 53
    with pytest.raises(ValidationError):
        mass(12)
    with pytest.raises(ValidationError):
        mass(0)


def test_classify_8():
    records, account = classify_doubly_even(8)
    assert len(records) == 1
    rec = records[0]
    assert rec.aut_order == 1344
    assert rec.min_weight == 4
    assert rec.provenance == "seed(e8^1)"
    assert account.complete
    assert account.terms == ((rec.canonical_hash, 30),)
    assert account.total == 30


def test_classify_16_neighbor():
    records, account = classify_doubly_even(16)
    assert len(records) == 2
    assert {r.aut_order for r in records} == {3612672, 5160960}
    assert all(r.min_weight == 4 for r in records)
    assert account.complete
    # orbit sizes: 16!/#Aut summed over both classes
    assert account.total == mass(16)


def test_classify_16_methods_agree():
    base = [r.canonical_hash for r in classify_doubly_even(16)[0]]
    for method in ("glue", "lift-chain", "neighbor"):
        got = [r.canonical_hash for r in classify_doubly_even(16, method)[0]]
        assert got == base


def test_classify_8_all_methods():
    for method in ("neighbor-closure", "lift-chain"):
        records, account = classify_doubly_even(8, method)
        assert len(records) == 1 and account.complete
    # gluing splits off an 8-coordinate block, so it needs length >= 16
    with pytest.raises(ValidationError):
        classify_doubly_even(8, "glue")


def test_classify_rejects_bad_inputs():
    with pytest.raises(ValidationError):
        classify_doubly_even(12)
    with pytest.raises(ValidationError):
        classify_doubly_even(16, "magic")
    with pytest.raises(ValidationError):
        classify_doubly_even(16, threads=0)
    with pytest.raises(BudgetExceededError):
        classify_doubly_even(40)  # beyond desk scale without a budget


def test_lift_chain_incomplete_at_24():
    # the length-24 catalog contains a class that is not a lift of any
    # direct sum, so the lift chain must refuse to certify
    with pytest.raises(IncompleteCatalogError) as info:
        classify_doubly_even(24, "lift-chain")
    err = info.value
    assert err.expected == mass(24)
    assert err.achieved < err.expected
    assert err.records and len(err.records) == 3
    assert err.deficit == err.expected - err.achieved


def test_checkpoint_budget_and_resume(tmp_path):
    cp = tmp_path / "cp24"
    # budget 0 trips before any shard; nothing beyond the seed exists yet
    with pytest.raises(IncompleteCatalogError) as info:
        classify_doubly_even(24, checkpoint=str(cp), budget=0)
    assert len(info.value.records) == 1
    # one shard is not enough at 24, but its state is durably recorded
    with pytest.raises(IncompleteCatalogError) as info:
        classify_doubly_even(24, checkpoint=str(cp), budget=1)
    partial = info.value.records
    assert 1 < len(partial) < 9
    resumed, account = classify_doubly_even(24, checkpoint=str(cp))
    fresh, _ = classify_doubly_even(24)
    assert [r.line() for r in resumed] == [r.line() for r in fresh]
    assert account.complete
    # a third call replays the finished state without recomputing
    again, _ = classify_doubly_even(24, checkpoint=str(cp))
    assert [r.line() for r in again] == [r.line() for r in fresh]


def test_checkpoint_rejects_mismatched_config(tmp_path):
    cp = tmp_path / "cp"
    classify_doubly_even(16, checkpoint=str(cp))
    with pytest.raises(ValidationError):
        classify_doubly_even(16, "glue", checkpoint=str(cp))
    with pytest.raises(ValidationError):
        classify_doubly_even(8, checkpoint=str(cp))


def test_worker_count_does_not_change_catalog():
    one = classify_doubly_even(16, threads=1)[0]
    two = classify_doubly_even(16, threads=2)[0]
    assert [r.line() for r in one] == [r.line() for r in two]


def test_threads_env_fallback(monkeypatch):
    monkeypatch.setenv("SDCODE_THREADS", "2")
    records, account = classify_doubly_even(8)
    assert account.complete
    monkeypatch.setenv("SDCODE_THREADS", "0")
    with pytest.raises(ValidationError):
        classify_doubly_even(8)


def test_mass_account_from_records():
    records, _ = classify_doubly_even(8)
    account = MassAccount.from_records(8, records)
    assert account.expected == 30
    assert account.complete
    empty = MassAccount.from_records(8, [])
    assert not empty.complete and empty.total == 0


def brute_covering_radius(code):
    words = np.array(code.words(), dtype=np.uint64)
    worst = 0
    for start in range(0, 1 << code.n, 1 << 14):
        block = np.arange(
            start, min(start + (1 << 14), 1 << code.n), dtype=np.uint64
        )
        dists = np.bitwise_count(block[:, None] ^ words[None, :]).min(axis=1)
        worst = max(worst, int(dists.max()))
    return worst


def test_covering_radius_brute_small():
    rng = random.Random(3)
    cases = [E8, repetition_blocks(4), repetition_blocks(6)]
    for _ in range(10):
        n = rng.randrange(4, 13)
        cases.append(LinearCode(n, [rng.getrandbits(n) for _ in range(3)]))
    for code in cases:
        result = covering_radius(code)
        assert result.radius == brute_covering_radius(code)
        assert result.witness_syndrome.bit_count() == result.radius


def test_covering_radius_sixteen():
    two = E8.direct_sum(E8)
    assert covering_radius(two).radius == brute_covering_radius(two) == 4


def test_covering_radius_golay():
    # the deep holes of the extended Golay code sit at distance 4
    result = covering_radius(GOLAY)
    assert result.radius == 4
    witness = result.witness_syndrome
    assert witness.bit_count() == 4
    best = min((witness ^ w).bit_count() for w in GOLAY.words(budget_log2=12))
    assert best == 4


def test_covering_radius_edge_cases():
    full = LinearCode(4, [1, 2, 4, 8])
    assert covering_radius(full).radius == 0
    skinny = LinearCode(30, [(1 << 30) - 1])
    with pytest.raises(BudgetExceededError):
        covering_radius(skinny)  # 29 syndrome bits


def test_design_check():
    assert design_check(GOLAY, 8) == 253
    assert design_check(E8, 4) == 7
    assert design_check(GOLAY, 4) == 0  # no words at that weight
    lopsided = E8.direct_sum(GOLAY)
    assert design_check(lopsided, 8) is None


def test_weight8_subcode_dim():
    assert weight8_subcode_dim(GOLAY) == 12
    assert weight8_subcode_dim(E8) == 1
    assert weight8_subcode_dim(E8.direct_sum(E8)) == 8


def test_census_deterministic_and_structured():
    records, _ = classify_doubly_even(8)
    text = census(records)
    assert text == census(records)
    lines = text.splitlines()
    assert lines[0] == "section\tkey\tvalue"
    assert "meta\trecords\t1" in lines
    assert "min_weight\t4\t1" in lines
    assert "aut_order\t1344\t1" in lines
    assert "covering_radius\t2\t1" in lines
    assert "prime_type\t3-(2,2)\t1" in lines
    assert "prime_type\t7-(1,1)\t1" in lines
    assert "prime_type_exact\t3\t1" in lines
    assert "prime_type_exact\t7\t1" in lines
    slim = census(records, include_covering_radius=False)
    assert "covering_radius" not in slim


def test_census_empty():
    text = census([])
    assert text.splitlines() == ["section\tkey\tvalue", "meta\trecords\t0"]


def test_subtraction_pipeline_golay_to_22():
    golay_rec = make_record(GOLAY, "ingest")
    outs = extremal38_pipeline([golay_rec])
    assert len(outs) == 1
    rec = outs[0]
    assert (rec.n, rec.code.k, rec.min_weight) == (22, 11, 6)
    assert rec.aut_order == 887040
    assert rec.provenance.startswith("subtract(")
    assert rec.code.is_self_dual() and not rec.code.is_doubly_even()


def test_subtraction_pipeline_validation():
    with pytest.raises(ValidationError):
        extremal38_pipeline([make_record(E8.direct_sum(E8), "ingest")])
    e8_cubed = E8.direct_sum(E8).direct_sum(E8)
    with pytest.raises(ValidationError):
        extremal38_pipeline([make_record(e8_cubed, "ingest")])  # a4 too big


def test_extremal_32_codes_admit_no_subtraction():
    """No [30,15,8] self-dual code exists, so the pair filter finds nothing."""
    state = Path(__file__).resolve().parent.parent / "data" / "checkpoint32" / "state.txt"
    records = [
        trusted_record_from_stated(parse_record_line(line[2:]))
        for line in state.read_text().splitlines()
        if line.startswith("R ")
    ]
    assert len(records) == 85
    extremal = [r for r in records if r.min_weight == 8]
    assert len(extremal) == 5
    for rec in extremal:
        assert rec.a4 == 0
        assert subtraction_candidates(rec.code) == []
