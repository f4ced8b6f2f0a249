"""Shared deterministic generators for randomized tests.

Everything takes an explicit random.Random so failures are reproducible from
the seed alone.
"""

from __future__ import annotations

import random
from collections import defaultdict
from fractions import Fraction

from skewlab.castle import FinitePointSystem
from skewlab.perm import Perm, compose, identity
from skewlab.symbolic import Edge, LabeledSystem, VertexFunction
from skewlab.synth import TargetCastleSpec, TowerSpec


def rand_perm(rng: random.Random, degree: int) -> Perm:
    images = list(range(1, degree + 1))
    rng.shuffle(images)
    return Perm(tuple(images))


def perm_power(p: Perm, k: int) -> Perm:
    acc = identity(p.degree)
    for _ in range(k):
        acc = compose(p, acc)
    return acc


def perm_order(p: Perm) -> int:
    acc = p
    k = 1
    while not acc.is_identity():
        acc = compose(p, acc)
        k += 1
    return k


def rand_labeled_system(
    rng: random.Random,
    max_vertices: int = 5,
    max_edges: int = 10,
    max_degree: int = 4,
    per_vertex: bool = False,
    degree: int | None = None,
) -> LabeledSystem:
    """Random irreducible labeled system: a covering cycle plus extra edges.

    With ``per_vertex`` every edge out of a vertex carries the same label, the
    class on which word cocycles are well defined.
    """
    n_vertices = rng.randint(1, max_vertices)
    if degree is None:
        degree = rng.randint(1, max_degree)
    vertices = tuple(range(n_vertices))
    pairs = {(i, (i + 1) % n_vertices) for i in range(n_vertices)}
    for _ in range(rng.randint(0, max(0, max_edges - len(pairs)))):
        if len(pairs) >= max_edges:
            break
        pairs.add((rng.randrange(n_vertices), rng.randrange(n_vertices)))
    vertex_label = {v: rand_perm(rng, degree) for v in vertices}
    out = defaultdict(list)
    for u, v in sorted(pairs):
        out[u].append(v)
    edges = []
    for u in vertices:
        weights = [rng.randint(1, 5) for _ in out[u]]
        total = sum(weights)
        for v, w in zip(out[u], weights):
            label = vertex_label[u] if per_vertex else rand_perm(rng, degree)
            edges.append(Edge(u, v, Fraction(w, total), label))
    return LabeledSystem(vertices, tuple(edges), degree)


def rand_vertex_function(rng: random.Random, sysm: LabeledSystem) -> VertexFunction:
    return VertexFunction({v: rand_perm(rng, sysm.fiber_degree) for v in sysm.symbols})


def rand_walk(rng: random.Random, sysm: LabeledSystem, length: int) -> list:
    """A random itinerary in the support graph (consecutive symbols are edges)."""
    v = rng.choice(sysm.symbols)
    word = [v]
    for _ in range(length - 1):
        edge = rng.choice(sysm.support_out(word[-1]))
        word.append(edge.dst)
    return word


def cyclic_generator(order: int) -> Perm:
    """A single cycle on {1..order}, generating a cyclic group of that order."""
    if order == 1:
        return identity(1)
    return Perm.from_cycles(order, tuple(range(1, order + 1)))


def rand_cyclic_system(
    rng: random.Random,
    size: int | None = None,
    max_size: int = 32,
    max_order: int = 6,
    order: int | None = None,
) -> tuple[FinitePointSystem, list[Perm]]:
    """A cyclic point system with ergodic lift over a cyclic label group.

    Labels are powers of one cycle, with the final exponent adjusted so the
    full-loop holonomy is the generator itself.  Returns the system and the
    sorted group element list.
    """
    k = order if order is not None else rng.randint(1, max_order)
    n_points = size if size is not None else rng.randint(2, max_size)
    c = cyclic_generator(k)
    exponents = [rng.randrange(k) for _ in range(n_points)]
    exponents[-1] = (1 - sum(exponents[:-1])) % k
    labels = tuple(perm_power(c, e) for e in exponents)
    group = sorted({perm_power(c, e) for e in range(k)})
    return FinitePointSystem(labels), group


def rand_stage_spec(
    rng: random.Random, sys_size: int, group: list[Perm], max_towers: int = 3
) -> TargetCastleSpec:
    """A random feasible target castle over a system of the given size."""
    towers = []
    used = 0
    for _ in range(rng.randint(1, max_towers)):
        height = rng.randint(1, 5)
        count = rng.randint(1, 2)
        if used + height * count > sys_size:
            break
        used += height * count
        labels = tuple(rng.choice(group) for _ in range(height - 1))
        towers.append(TowerSpec(height, Fraction(count, sys_size), labels))
    if not towers:
        towers = [TowerSpec(1, Fraction(1, sys_size), ())]
    return TargetCastleSpec(tuple(towers))


def rand_chain_instance(
    rng: random.Random,
) -> tuple[FinitePointSystem, TargetCastleSpec, TargetCastleSpec]:
    """A cyclic system plus a two-stage spec chain built by cutting and stacking.

    The second stage is a single one-column tower whose label run stacks the
    first stage's towers with random connecting labels, so stage two threads
    through stage one wherever the labels line up.
    """
    k = rng.randint(1, 4)
    c = cyclic_generator(k)
    group = sorted({perm_power(c, e) for e in range(k)})

    shapes = []  # (height, count, labels)
    support1 = 0
    for _ in range(rng.randint(1, 2)):
        height = rng.randint(1, 4)
        count = rng.randint(1, 2)
        labels = [rng.choice(group) for _ in range(height - 1)]
        shapes.append((height, count, labels))
        support1 += height * count

    sequence = []
    for t_idx, (_, count, _) in enumerate(shapes):
        sequence.extend([t_idx] * rng.randint(1, count))
    rng.shuffle(sequence)
    labels2: list[Perm] = []
    height2 = 0
    for pos, t_idx in enumerate(sequence):
        if pos > 0:
            labels2.append(rng.choice(group))  # connecting step
        labels2.extend(shapes[t_idx][2])
        height2 += shapes[t_idx][0]
    for _ in range(rng.randint(0, 2)):  # trailing fresh levels
        labels2.append(rng.choice(group))
        height2 += 1

    n_points = support1 + height2 + rng.randint(1, 6)
    exponents = [rng.randrange(k) for _ in range(n_points)]
    exponents[-1] = (1 - sum(exponents[:-1])) % k
    system = FinitePointSystem(tuple(perm_power(c, e) for e in exponents))

    spec1 = TargetCastleSpec(
        tuple(
            TowerSpec(h, Fraction(cnt, n_points), tuple(labs))
            for h, cnt, labs in shapes
        )
    )
    spec2 = TargetCastleSpec(
        (TowerSpec(height2, Fraction(1, n_points), tuple(labels2)),)
    )
    return system, spec1, spec2
