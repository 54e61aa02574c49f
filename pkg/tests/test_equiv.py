"""Canonical forms, witnesses, automorphism groups, fingerprints, dedup."""

import itertools
import random

import pytest

from sdcode.codes import (
    LinearCode,
    extended_golay_code,
    extended_hamming_code,
    repetition_blocks,
)
from sdcode.equiv import (
    EquivalenceWitness,
    aut_order,
    automorphism_group,
    canonical_form,
    dedup,
    design_invariant,
    fingerprint,
    is_equivalent,
)
from sdcode.errors import ValidationError

E8 = extended_hamming_code()
GOLAY = extended_golay_code()


def shuffled(code, rng):
    images = list(range(code.n))
    rng.shuffle(images)
    return code.permute(images)


def test_canonical_form_invariance_quick():
    rng = random.Random(1)
    base = canonical_form(E8)
    for _ in range(25):
        moved = shuffled(E8, rng)
        form = canonical_form(moved)
        assert form.code == base.code
        assert form.hash == base.hash
        # the stored permutation actually produces the canonical code
        assert moved.permute(form.perm.images) == form.code


def test_canonical_form_golay_invariance():
    rng = random.Random(2)
    base = canonical_form(GOLAY)
    for _ in range(5):
        moved = shuffled(GOLAY, rng)
        assert canonical_form(moved).hash == base.hash


def test_canonical_hash_separates_inequivalent():
    from sdcode.construct import bp_lift

    two_e8 = E8.direct_sum(E8)
    d16 = bp_lift(repetition_blocks(7))
    assert canonical_form(two_e8).hash != canonical_form(d16).hash
    # while equivalent codes collide
    assert canonical_form(two_e8).hash == canonical_form(
        two_e8.permute(list(range(15, -1, -1)))
    ).hash


def test_aut_e8_brute_force():
    group = automorphism_group(E8)
    assert group.order() == 1344
    brute = sum(
        1
        for images in itertools.permutations(range(8))
        if E8.permute(images) == E8
    )
    assert brute == 1344
    for g in group.generators:
        assert E8.permute(g.images) == E8


def test_aut_small_block_code():
    code = repetition_blocks(2)  # two disjoint pairs
    assert aut_order(code) == 8
    brute = sum(
        1
        for images in itertools.permutations(range(4))
        if code.permute(images) == code
    )
    assert brute == 8


def test_aut_golay_order():
    assert aut_order(GOLAY) == 244823040  # the Mathieu group M24


def test_witness_verifies_and_composes():
    rng = random.Random(3)
    a = shuffled(GOLAY, rng)
    b = shuffled(GOLAY, rng)
    c = shuffled(GOLAY, rng)
    w_ab = is_equivalent(a, b)
    w_bc = is_equivalent(b, c)
    assert w_ab is not None and w_bc is not None
    assert w_ab.verify(a, b)
    assert w_bc.verify(b, c)
    composed = EquivalenceWitness(w_bc.perm * w_ab.perm)
    assert composed.verify(a, c)


def test_inequivalent_returns_none():
    from sdcode.construct import bp_lift

    two_e8 = E8.direct_sum(E8)
    d16 = bp_lift(repetition_blocks(7))
    assert d16.is_self_dual() and d16.is_doubly_even() and d16.n == 16
    assert fingerprint(two_e8, include_aut=False) != fingerprint(
        d16, include_aut=False
    )
    assert is_equivalent(two_e8, d16) is None


def test_design_invariant_golay():
    di = design_invariant(GOLAY, 8)
    # octads form a 5-design: every point in 253, every pair in 77
    assert di.n_set == frozenset({77, 253})
    assert di.n_set == di.n_set_unfiltered
    for i in range(24):
        assert di.gram[i][i] == 253


def test_design_invariant_e8():
    di = design_invariant(E8, 4)
    assert di.n_set == frozenset({3, 7})
    for i in range(8):
        assert di.gram[i][i] == 7


def test_design_invariant_no_words():
    di = design_invariant(GOLAY, 4)  # Golay has no weight-4 words
    assert di.n_set == frozenset({0})


def test_fingerprint_contents():
    fp = fingerprint(E8)
    assert fp.n == 8
    assert fp.a4 == 14
    assert fp.aut_order == 1344
    assert fp.weight_dist[4] == 14
    bare = fingerprint(E8, include_aut=False)
    assert bare.aut_order is None
    assert bare.key() == fp.key()  # aut never enters the partition key


def test_fingerprint_invariant_under_permutation():
    rng = random.Random(5)
    base = fingerprint(GOLAY, include_aut=False)
    for _ in range(5):
        assert fingerprint(shuffled(GOLAY, rng), include_aut=False) == base


def test_dedup_collapses_permuted_copies():
    rng = random.Random(6)
    pool = [shuffled(E8, rng) for _ in range(30)]
    records = dedup(pool)
    assert len(records) == 1
    assert records[0].aut_order == 1344
    assert records[0].min_weight == 4


def test_dedup_order_independent():
    rng = random.Random(7)
    from sdcode.construct import bp_lift

    codes = [E8.direct_sum(E8), bp_lift(repetition_blocks(7))]
    pool = [shuffled(c, rng) for c in codes for _ in range(5)]
    lines_fwd = [r.line() for r in dedup(pool)]
    rng.shuffle(pool)
    lines_back = [r.line() for r in dedup(pool)]
    assert lines_fwd == lines_back
    assert len(lines_fwd) == 2


def test_dedup_rejects_mixed_lengths():
    with pytest.raises(ValidationError):
        dedup([E8, GOLAY])


def test_dedup_keeps_least_provenance():
    rng = random.Random(8)
    pool = [E8, shuffled(E8, rng)]
    records = dedup(pool, provenances=["zzz", "aaa"])
    assert len(records) == 1
    assert records[0].provenance == "aaa"
