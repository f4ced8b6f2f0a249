import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import perm_order, rand_perm
from skewlab.perm import (
    PairPartition,
    Perm,
    PermGroup,
    compose,
    conjugacy_class,
    contains_up_to_conjugacy,
    generate_subgroup,
    group_from_json,
    group_to_json,
    identity,
    inverse,
    is_transitive,
    partition_group,
    perm_from_json,
    perm_to_json,
    symmetric_group,
    trivial_group,
)

A3 = generate_subgroup([Perm.from_cycles(3, (1, 2, 3))])
S3 = symmetric_group(3)
T12 = generate_subgroup([Perm.from_cycles(3, (1, 2))])


def perms(degree):
    return st.permutations(list(range(1, degree + 1))).map(lambda t: Perm(tuple(t)))


def test_perm_validation():
    with pytest.raises(ValueError):
        Perm.of(1, 1, 3)
    with pytest.raises(ValueError):
        Perm.of(0, 1)


def test_compose_identity():
    assert compose(Perm.of(2, 1, 3), identity(3)) == Perm.of(2, 1, 3)


def test_compose_applies_right_factor_first():
    # (23) after (12): 1 -> 2 -> 3
    assert compose(Perm.of(1, 3, 2), Perm.of(2, 1, 3)) == Perm.of(3, 1, 2)


def test_compose_against_pointwise_oracle():
    a = Perm.from_cycles(3, (1, 2))
    b = Perm.from_cycles(3, (1, 3))
    result = compose(a, b)
    for i in (1, 2, 3):
        assert result(i) == a(b(i))


def test_compose_degree_mismatch():
    with pytest.raises(ValueError):
        compose(identity(3), identity(4))


def test_inverse_examples():
    assert inverse(identity(4)) == identity(4)
    assert inverse(Perm.of(2, 3, 1)) == Perm.of(3, 1, 2)


def test_inverse_random_degree_six():
    rng = random.Random(1)
    for _ in range(20):
        a = rand_perm(rng, 6)
        assert compose(a, inverse(a)) == identity(6)
        assert compose(inverse(a), a) == identity(6)


@settings(max_examples=60)
@given(st.integers(2, 5).flatmap(lambda n: st.tuples(perms(n), perms(n), perms(n))))
def test_associativity_and_inverse_law(triple):
    a, b, c = triple
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    assert compose(a, inverse(a)) == identity(a.degree)


def test_generate_subgroup_examples():
    assert A3.order == 3
    assert Perm.from_cycles(3, (1, 3, 2)) in A3
    full = generate_subgroup([Perm.from_cycles(3, (1, 2)), Perm.from_cycles(3, (1, 2, 3))])
    assert full.elements == S3.elements
    assert generate_subgroup([], degree=4) == trivial_group(4)
    with pytest.raises(ValueError):
        generate_subgroup([])


def test_generated_subgroups_are_groups():
    rng = random.Random(2)
    for _ in range(40):
        n = rng.randint(1, 5)
        gens = [rand_perm(rng, n) for _ in range(rng.randint(1, 2))]
        G = generate_subgroup(gens)
        assert G.is_group()
        assert math.factorial(n) % G.order == 0


def test_conjugacy_class_normal_subgroup_is_singleton():
    klass = conjugacy_class(A3)
    assert klass.size == 1
    assert klass.representative.elements == A3.elements


def test_conjugacy_class_of_transposition_subgroup():
    # oracle: conjugate by all six elements of S3 directly
    expected = {T12.conjugate(xi).key() for xi in S3}
    klass = conjugacy_class(T12)
    assert klass.size == 3
    assert {M.key() for M in klass.members} == expected
    for cycle in ((1, 2), (1, 3), (2, 3)):
        assert generate_subgroup([Perm.from_cycles(3, cycle)]) in klass


def test_conjugacy_class_of_full_group():
    assert conjugacy_class(S3).size == 1


def test_conjugacy_class_members_are_isomorphic():
    rng = random.Random(3)
    for _ in range(10):
        n = rng.randint(2, 4)
        H = generate_subgroup([rand_perm(rng, n)])
        klass = conjugacy_class(H)
        orders = sorted(perm_order(p) for p in H.elements)
        for M in klass.members:
            assert M.order == H.order
            assert sorted(perm_order(p) for p in M.elements) == orders
            assert conjugacy_class(M) == klass


def test_contains_up_to_conjugacy_examples():
    yes = contains_up_to_conjugacy(conjugacy_class(S3), conjugacy_class(A3))
    assert yes is not None
    G1, G2 = yes
    assert G2.is_subgroup_of(G1)
    assert G1.elements == S3.elements and G2.elements == A3.elements

    assert contains_up_to_conjugacy(conjugacy_class(A3), conjugacy_class(S3)) is None

    c12 = conjugacy_class(T12)
    c13 = conjugacy_class(generate_subgroup([Perm.from_cycles(3, (1, 3))]))
    assert c12 == c13
    assert contains_up_to_conjugacy(c12, c13) is not None

    with pytest.raises(ValueError):
        contains_up_to_conjugacy(conjugacy_class(A3), conjugacy_class(trivial_group(4)))


def test_contains_up_to_conjugacy_is_reflexive_and_transitive():
    rng = random.Random(4)
    classes = []
    for _ in range(8):
        gens = [rand_perm(rng, 4) for _ in range(rng.randint(1, 2))]
        classes.append(conjugacy_class(generate_subgroup(gens)))
    for c in classes:
        assert contains_up_to_conjugacy(c, c) is not None
    for c1 in classes:
        for c2 in classes:
            for c3 in classes:
                if (
                    contains_up_to_conjugacy(c1, c2) is not None
                    and contains_up_to_conjugacy(c2, c3) is not None
                ):
                    assert contains_up_to_conjugacy(c1, c3) is not None


def test_pair_partition_validation():
    with pytest.raises(ValueError):
        PairPartition.of([[1, 2, 3]])
    with pytest.raises(ValueError):
        PairPartition.of([[1, 2], [2, 3]])
    with pytest.raises(ValueError):
        PairPartition.of([[1, 2], [4, 5]])


def test_partition_group_window_two():
    G = partition_group(PairPartition.of([[1, 2]]))
    assert G.elements == symmetric_group(2).elements


def test_partition_group_window_four_oracle():
    P = PairPartition.of([[1, 2], [3, 4]])
    G = partition_group(P)
    blocks = P.blocks
    expected = {
        g
        for g in symmetric_group(4).elements
        if all(frozenset(g(i) for i in b) in blocks for b in blocks)
    }
    assert G.elements == expected
    assert G.order == 8
    assert G.is_group()


def test_partition_group_conjugation_law():
    P = PairPartition.of([[1, 2], [3, 4]])
    G = partition_group(P)
    for xi in symmetric_group(4):
        assert G.conjugate(xi).elements == partition_group(P.translate(xi)).elements


def test_is_transitive():
    assert is_transitive(A3)
    assert not is_transitive(T12)
    assert is_transitive(partition_group(PairPartition.of([[1, 2], [3, 4]])))


def test_perm_json_roundtrip():
    p = Perm.of(3, 1, 2)
    assert perm_from_json(perm_to_json(p)) == p
    G = partition_group(PairPartition.of([[1, 2], [3, 4]]))
    assert group_from_json(group_to_json(G)) == G
    data = group_to_json(G)
    assert data == sorted(data)
