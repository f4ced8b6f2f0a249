import random
from fractions import Fraction

import pytest

from conftest import rand_labeled_system, rand_vertex_function, rand_walk
from skewlab.perm import Perm, compose, identity, inverse
from skewlab.symbolic import (
    Edge,
    LabeledSystem,
    VertexFunction,
    full_shift,
    system_from_json,
    system_to_json,
    twist,
    word_cocycle,
)

E3 = identity(3)
C123 = Perm.from_cycles(3, (1, 2, 3))
C132 = Perm.from_cycles(3, (1, 3, 2))


def gerber_s1():
    return full_shift([E3, C123, C132], [Fraction(1, 3)] * 3)


def test_full_shift_structure():
    sysm = gerber_s1()
    assert sysm.symbols == (1, 2, 3)
    assert len(sysm.edges) == 9
    for e in sysm.edges:
        assert e.label == [E3, C123, C132][e.src - 1]
        assert e.prob == Fraction(1, 3)


def test_full_shift_single_loop():
    sysm = full_shift([identity(2)], [1])
    assert len(sysm.edges) == 1
    assert sysm.edges[0].src == sysm.edges[0].dst == 1


def test_full_shift_validation():
    with pytest.raises(ValueError):
        full_shift([E3], [Fraction(1, 2)])
    with pytest.raises(ValueError):
        full_shift([E3, C123], [Fraction(1, 2), Fraction(1, 3)])
    with pytest.raises(ValueError):
        full_shift([E3, C123], [Fraction(3, 2), Fraction(-1, 2)])


def test_system_validation():
    half = Fraction(1, 2)
    e2 = identity(2)
    with pytest.raises(ValueError, match="sum"):
        LabeledSystem((0,), (Edge(0, 0, half, e2),), 2)
    with pytest.raises(ValueError, match="parallel"):
        LabeledSystem((0,), (Edge(0, 0, half, e2), Edge(0, 0, half, e2)), 2)
    with pytest.raises(ValueError, match="strongly connected"):
        LabeledSystem(
            (0, 1),
            (Edge(0, 0, 1, e2), Edge(1, 1, half, e2), Edge(1, 0, half, e2)),
            2,
        )
    with pytest.raises(ValueError, match="degree"):
        LabeledSystem((0,), (Edge(0, 0, Fraction(1), identity(3)),), 2)


def test_word_cocycle_empty_word():
    assert word_cocycle(gerber_s1(), []) == E3


def test_word_cocycle_two_steps():
    # leave vertex 1 (identity) then vertex 2 (the 3-cycle)
    assert word_cocycle(gerber_s1(), [1, 2]) == compose(C123, E3) == C123


def test_word_cocycle_requires_a_path():
    sysm = LabeledSystem(
        (0, 1),
        (Edge(0, 1, Fraction(1), identity(2)), Edge(1, 0, Fraction(1), identity(2))),
        2,
    )
    with pytest.raises(ValueError, match="no support edge"):
        word_cocycle(sysm, [0, 0])


def test_word_cocycle_ambiguous_final_step():
    t = Perm.of(2, 1)
    sysm = LabeledSystem(
        (0, 1),
        (
            Edge(0, 0, Fraction(1, 2), identity(2)),
            Edge(0, 1, Fraction(1, 2), t),
            Edge(1, 0, Fraction(1), identity(2)),
        ),
        2,
    )
    with pytest.raises(ValueError, match="differ"):
        word_cocycle(sysm, [1, 0])
    assert word_cocycle(sysm, [1]) == identity(2)


def test_word_cocycle_splitting_identity():
    rng = random.Random(5)
    for _ in range(50):
        sysm = rand_labeled_system(rng, per_vertex=True)
        word = rand_walk(rng, sysm, rng.randint(2, 8))
        cut = rng.randint(0, len(word))
        prefix, suffix = word[:cut], word[cut:]
        assert word_cocycle(sysm, word) == compose(
            word_cocycle(sysm, suffix), word_cocycle(sysm, prefix)
        )


def test_twist_by_identity_is_identity():
    sysm = gerber_s1()
    alpha = VertexFunction({v: E3 for v in sysm.symbols})
    assert twist(sysm, alpha) == sysm


def test_twist_single_loop_conjugates():
    t12 = Perm.from_cycles(3, (1, 2))
    t13 = Perm.from_cycles(3, (1, 3))
    sysm = full_shift([t12], [1])
    twisted = twist(sysm, VertexFunction({1: t13}))
    assert twisted.edges[0].label == Perm.from_cycles(3, (2, 3))


def test_twist_missing_vertex():
    with pytest.raises(ValueError, match="missing"):
        twist(gerber_s1(), VertexFunction({1: E3}))


def test_twist_composition_law():
    rng = random.Random(6)
    for _ in range(30):
        sysm = rand_labeled_system(rng)
        alpha = rand_vertex_function(rng, sysm)
        beta = rand_vertex_function(rng, sysm)
        product = VertexFunction(
            {v: compose(beta(v), alpha(v)) for v in sysm.symbols}
        )
        assert twist(twist(sysm, alpha), beta) == twist(sysm, product)


def test_twist_preserves_graph_and_inverts():
    rng = random.Random(7)
    for _ in range(20):
        sysm = rand_labeled_system(rng)
        alpha = rand_vertex_function(rng, sysm)
        twisted = twist(sysm, alpha)
        assert [(e.src, e.dst, e.prob) for e in twisted.edges] == [
            (e.src, e.dst, e.prob) for e in sysm.edges
        ]
        assert twist(twisted, alpha.pointwise_inverse()) == sysm


def test_json_roundtrip_full_format():
    rng = random.Random(8)
    for _ in range(10):
        sysm = rand_labeled_system(rng)
        assert system_from_json(system_to_json(sysm)) == sysm


def test_json_shorthand():
    data = {
        "fiber_degree": 3,
        "labels": [[1, 2, 3], [2, 3, 1], [3, 1, 2]],
        "probs": ["1/3", "1/3", "1/3"],
    }
    assert system_from_json(data) == gerber_s1()
    bad = dict(data, fiber_degree=2)
    with pytest.raises(ValueError):
        system_from_json(bad)
