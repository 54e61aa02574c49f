"""Linear code container, weight data, derived codes, shadow."""

import math
import random

import pytest

from sdcode.codes import (
    LinearCode,
    delete_coords,
    direct_sum,
    extended_golay_code,
    extended_hamming_code,
    extremal_bound,
    repetition_blocks,
    repetition_pair,
    shadow_decomposition,
)
from sdcode.errors import BudgetExceededError, ParseError, ValidationError

E8 = extended_hamming_code()
GOLAY = extended_golay_code()


def macwilliams(dist, n, k):
    """Dual weight distribution via the binomial transform, as an oracle."""

    def kraw(j, w):
        return sum(
            (-1) ** i * math.comb(w, i) * math.comb(n - w, j - i)
            for i in range(0, min(j, w) + 1)
        )

    out = []
    for j in range(n + 1):
        total = sum(dist[w] * kraw(j, w) for w in range(n + 1))
        q, r = divmod(total, 1 << k)
        assert r == 0
        out.append(q)
    return tuple(out)


def random_code(rng, n, k):
    return LinearCode(n, [rng.getrandbits(n) for _ in range(k)])


def test_rref_canonical_generator():
    a = LinearCode(4, [0b0011, 0b1100, 0b1111])
    b = LinearCode(4, [0b1111, 0b1100])
    assert a == b
    assert a.k == 2
    assert hash(a) == hash(b)


def test_contains():
    assert E8.contains(0b11111111)
    assert E8.contains(0)
    assert not E8.contains(0b1)


def test_extremal_bound_values():
    assert extremal_bound(8) == 4
    assert extremal_bound(16) == 4
    assert extremal_bound(22) == 6
    assert extremal_bound(24) == 8
    assert extremal_bound(32) == 8
    assert extremal_bound(38) == 8
    assert extremal_bound(40) == 8
    assert extremal_bound(48) == 12


def test_e8_profile():
    assert (E8.n, E8.k) == (8, 4)
    assert E8.is_self_dual() and E8.is_doubly_even()
    dist = E8.weight_distribution()
    assert dist[0] == 1 and dist[4] == 14 and dist[8] == 1
    assert sum(dist) == 16
    assert E8.min_weight() == 4
    assert E8.a4() == 14
    assert E8.is_extremal()


def test_golay_profile():
    assert (GOLAY.n, GOLAY.k) == (24, 12)
    assert GOLAY.is_self_dual() and GOLAY.is_doubly_even()
    dist = GOLAY.weight_distribution()
    assert dist[0] == 1
    assert dist[8] == 759
    assert dist[12] == 2576
    assert dist[16] == 759
    assert dist[24] == 1
    assert sum(dist) == 1 << 12
    assert GOLAY.min_weight() == 8
    assert GOLAY.is_extremal()
    assert len(GOLAY.words_of_weight(8)) == 759


def test_weight_distribution_against_macwilliams():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randrange(4, 14)
        code = random_code(rng, n, rng.randrange(1, n))
        dual = code.dual()
        expect = macwilliams(code.weight_distribution(), n, code.k)
        assert dual.weight_distribution() == expect


def test_min_weight_against_scan():
    rng = random.Random(6)
    for _ in range(30):
        n = rng.randrange(2, 12)
        code = random_code(rng, n, rng.randrange(1, n + 1))
        words = code.words()
        brute = min((w.bit_count() for w in words if w), default=n + 1)
        assert code.min_weight() == brute


def test_dual_involution_and_dims():
    rng = random.Random(8)
    for _ in range(20):
        n = rng.randrange(2, 15)
        code = random_code(rng, n, rng.randrange(1, n))
        dual = code.dual()
        assert code.k + dual.k == n
        assert dual.dual() == code


def test_permute_roundtrip():
    rng = random.Random(9)
    perm = list(range(24))
    rng.shuffle(perm)
    inv = [0] * 24
    for i, p in enumerate(perm):
        inv[p] = i
    moved = GOLAY.permute(perm)
    assert moved.permute(inv) == GOLAY
    assert moved.weight_distribution() == GOLAY.weight_distribution()
    with pytest.raises(ValidationError):
        GOLAY.permute(list(range(23)) + [0])


def test_delete_coords():
    assert delete_coords(0b10110, [1, 3], 5) == 0b110
    assert delete_coords(0b11111, [0], 5) == 0b1111


def test_puncture_shorten_golay():
    p = GOLAY.puncture([0])
    assert (p.n, p.k, p.min_weight()) == (23, 12, 7)
    s = GOLAY.shorten([0])
    assert (s.n, s.k, s.min_weight()) == (23, 11, 8)


def test_subtract_recovers_summand():
    ten = E8.direct_sum(repetition_pair())
    got = ten.subtract(8, 9)
    assert got == E8
    with pytest.raises(ValidationError):
        ten.subtract(3, 3)
    with pytest.raises(ValidationError):
        ten.subtract(0, 10)


def test_subtract_matches_word_filter():
    # independent oracle: keep words equal on both coordinates, drop them
    rng = random.Random(12)
    for _ in range(20):
        n = rng.randrange(4, 12)
        code = random_code(rng, n, rng.randrange(1, n))
        i, j = rng.sample(range(n), 2)
        kept = sorted(
            delete_coords(w, (i, j), n)
            for w in code.words()
            if ((w >> i) & 1) == ((w >> j) & 1)
        )
        got = sorted(set(code.subtract(i, j).words()))
        assert got == sorted(set(kept))


def test_direct_sum_profile():
    two = direct_sum(E8, E8)
    assert (two.n, two.k) == (16, 8)
    dist = two.weight_distribution()
    assert dist[4] == 28
    assert dist[8] == 198


def test_repetition_blocks():
    code = repetition_blocks(3)
    assert (code.n, code.k) == (6, 3)
    assert code.is_self_dual()
    assert not code.is_doubly_even()
    with pytest.raises(ValidationError):
        repetition_blocks(0)


def test_doubly_even_subcode_split():
    code = repetition_blocks(4)
    sub, rep = code.doubly_even_subcode()
    assert rep is not None
    assert sub.k == code.k - 1
    assert sub.is_doubly_even()
    assert rep.bit_count() % 4 == 2
    whole, none = GOLAY.doubly_even_subcode()
    assert none is None and whole == GOLAY


def test_shadow_of_repetition_blocks():
    sd = shadow_decomposition(repetition_blocks(3))
    # shadow vectors pick one coordinate per block: 8 vectors of weight 3
    assert sum(sd.shadow_weights) == 8
    assert sd.shadow_weights[3] == 8
    code = repetition_blocks(3)
    assert not code.contains(sd.rep1) and not code.contains(sd.rep3)
    assert code.contains(sd.rep2) and not sd.c0.contains(sd.rep2)


def test_shadow_weight_congruence():
    # every shadow vector of a singly even self-dual code has weight
    # congruent to n/2 mod 4
    for m in (1, 2, 3, 4, 5):
        code = repetition_blocks(m)
        sd = shadow_decomposition(code)
        for w, count in enumerate(sd.shadow_weights):
            if count:
                assert (w - code.n // 2) % 4 == 0
    mixed = E8.direct_sum(repetition_pair())
    sd = shadow_decomposition(mixed)
    for w, count in enumerate(sd.shadow_weights):
        if count:
            assert (w - mixed.n // 2) % 4 == 0


def test_shadow_rejects_wrong_inputs():
    with pytest.raises(ValidationError):
        shadow_decomposition(GOLAY)  # doubly even
    with pytest.raises(ValidationError):
        shadow_decomposition(LinearCode(3, [0b111]))  # not self-dual


def test_gm_roundtrip():
    text = GOLAY.gm()
    back = LinearCode.from_gm(text)
    assert back == GOLAY
    assert back.gm() == text


def test_gm_parse_errors():
    with pytest.raises(ParseError):
        LinearCode.from_gm("")
    with pytest.raises(ParseError):
        LinearCode.from_gm("8\n")
    with pytest.raises(ParseError):
        LinearCode.from_gm("4 2\n1100\n")
    with pytest.raises(ParseError):
        LinearCode.from_gm("4 1\n11x0\n")
    with pytest.raises(ValidationError):
        LinearCode.from_gm("4 2\n1100\n1100\n")
    code = LinearCode.from_gm("4 2\n1100\n1100\n", allow_rank_deficient=True)
    assert code.k == 1


def test_words_budget_guard():
    big = repetition_blocks(30)
    with pytest.raises(BudgetExceededError):
        big.words(budget_log2=10)
