"""Permutations and stabilizer-chain permutation groups."""

import itertools
import random

import pytest

from sdcode.errors import BudgetExceededError, ParseError, ValidationError
from sdcode.perms import (
    AutType,
    PermGroup,
    Permutation,
    group_order,
    is_member,
    prime_order_types,
)


def sym_group(n):
    """S_n from a transposition and an n-cycle."""
    cyc = Permutation(tuple(range(1, n)) + (0,))
    swap = Permutation((1, 0) + tuple(range(2, n)))
    return PermGroup(n, [cyc, swap])


def test_permutation_basics():
    p = Permutation((1, 2, 0, 3))
    assert p(0) == 1 and p(3) == 3
    assert p.degree == 4
    assert p.order() == 3
    assert (p * p * p).is_identity()
    assert p.inverse().images == (2, 0, 1, 3)
    with pytest.raises(ValidationError):
        Permutation((0, 0, 1))


def test_compose_order_convention():
    # p * q applies q first
    p = Permutation((1, 0, 2))
    q = Permutation((0, 2, 1))
    assert (p * q).images == tuple(p(q(x)) for x in range(3))


def test_apply_bits_matches_images():
    rng = random.Random(2)
    for _ in range(30):
        n = rng.randrange(1, 16)
        images = list(range(n))
        rng.shuffle(images)
        p = Permutation(images)
        v = rng.getrandbits(n)
        moved = p.apply_bits(v)
        for i in range(n):
            assert (moved >> p(i)) & 1 == (v >> i) & 1


def test_cycles_and_strings():
    p = Permutation((1, 0, 3, 4, 2, 5))
    assert p.cycles() == [(0, 1), (2, 3, 4)]
    assert p.cycle_string() == "(1 2)(3 4 5)"
    assert Permutation.identity(6).cycle_string() == "()"
    back = Permutation.from_cycle_string("(1 2)(3 4 5)", 6)
    assert back == p
    assert Permutation.from_cycle_string("()", 4).is_identity()


def test_cycle_string_parse_errors():
    with pytest.raises(ParseError):
        Permutation.from_cycle_string("(1 2", 4)
    with pytest.raises(ParseError):
        Permutation.from_cycle_string("(1 9)", 4)
    with pytest.raises(ParseError):
        Permutation.from_cycle_string("(1 1)", 4)
    with pytest.raises(ParseError):
        Permutation.from_cycle_string("(1 x)", 4)


def test_pow():
    p = Permutation((1, 2, 3, 4, 0))
    assert (p**5).is_identity()
    assert p**-1 == p.inverse()
    assert p**7 == p * p * p * p * p * p * p


def test_symmetric_group_orders():
    import math

    for n in range(2, 8):
        assert sym_group(n).order() == math.factorial(n)
    assert group_order(sym_group(4)) == 24


def test_order_against_naive_closure():
    rng = random.Random(4)
    for _ in range(15):
        n = rng.randrange(2, 7)
        gens = []
        for _ in range(rng.randrange(1, 3)):
            images = list(range(n))
            rng.shuffle(images)
            gens.append(Permutation(images))
        group = PermGroup(n, gens)
        # naive breadth-first closure as the oracle
        seen = {tuple(range(n))}
        frontier = list(seen)
        while frontier:
            nxt = []
            for g in frontier:
                for h in gens:
                    prod = tuple(h.images[x] for x in g)
                    if prod not in seen:
                        seen.add(prod)
                        nxt.append(prod)
            frontier = nxt
        assert group.order() == len(seen)
        for el in seen:
            assert Permutation(el) in group


def test_membership():
    g4 = sym_group(4)
    for images in itertools.permutations(range(4)):
        assert is_member(g4, Permutation(images))
    alt = PermGroup(4, [Permutation((1, 2, 0, 3)), Permutation((0, 2, 3, 1))])
    assert alt.order() == 12
    assert Permutation((1, 0, 2, 3)) not in alt


def test_orbit():
    p = Permutation((1, 0, 2, 4, 3, 5))
    group = PermGroup(6, [p])
    assert group.orbit(0) == [0, 1]
    assert group.orbit(3) == [3, 4]
    assert group.orbit(5) == [5]


def test_elements_enumeration():
    g4 = sym_group(4)
    els = list(g4.elements())
    assert len(els) == 24
    assert len(set(els)) == 24
    with pytest.raises(BudgetExceededError):
        list(sym_group(8).elements(budget=100))


def test_random_element_lands_in_group():
    rng = random.Random(7)
    alt = PermGroup(5, [Permutation((1, 2, 0, 3, 4)), Permutation((0, 1, 3, 4, 2))])
    for _ in range(20):
        assert alt.random_element(rng) in alt


def test_prime_order_types_cyclic():
    # cyclic group of order 6 on 6 points: one 2-element type, one 3-type
    six = PermGroup(6, [Permutation((1, 2, 3, 4, 5, 0))])
    types2, exact2 = prime_order_types(six, 2)
    types3, exact3 = prime_order_types(six, 3)
    assert exact2 and exact3
    assert types2 == [AutType(2, 3, 0)]
    assert types3 == [AutType(3, 2, 0)]
    types5, exact5 = prime_order_types(six, 5)
    assert types5 == [] and exact5


def test_prime_order_types_fixed_points():
    # 3-cycle fixing two points: type 3-(1, 2)
    g = PermGroup(5, [Permutation((1, 2, 0, 3, 4))])
    types, exact = prime_order_types(g, 3)
    assert exact
    assert types == [AutType(3, 1, 2)]


def test_prime_order_types_sampled_flagged():
    big = sym_group(11)  # order 39916800 > default budget
    types, exact = prime_order_types(big, 11)
    assert not exact
    assert AutType(11, 1, 0) in types
