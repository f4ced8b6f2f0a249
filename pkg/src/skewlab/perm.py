"""Exact permutation-group arithmetic on small degrees.

Everything here is deliberately brute force: the fiber degrees this library
targets are tiny (n <= 7), where exhaustive enumeration over the symmetric
group is exact, fast, and leaves nothing to trust.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional


@dataclass(frozen=True, order=True)
class Perm:
    """A permutation of {1..n} in one-line notation: ``images[i-1]`` is the image of i."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {self.images!r}")

    @classmethod
    def of(cls, *images: int) -> "Perm":
        return cls(tuple(images))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: tuple[int, ...]) -> "Perm":
        """Build a permutation of the given degree from disjoint cycles."""
        images = list(range(1, degree + 1))
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                images[a - 1] = b
        return cls(tuple(images))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Perm") -> "Perm":
        return compose(self, other)

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images, 1))

    def __repr__(self) -> str:
        return f"Perm{self.images}"


def identity(degree: int) -> Perm:
    return Perm(tuple(range(1, degree + 1)))


def compose(a: Perm, b: Perm) -> Perm:
    """The product a∘b: apply b first, then a."""
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} vs {b.degree}")
    return Perm(tuple(a.images[j - 1] for j in b.images))


def inverse(a: Perm) -> Perm:
    images = [0] * a.degree
    for i, v in enumerate(a.images, 1):
        images[v - 1] = i
    return Perm(tuple(images))


@dataclass(frozen=True)
class PermGroup:
    """A finite subgroup of the symmetric group on {1..degree}."""

    degree: int
    elements: frozenset[Perm]

    def __post_init__(self) -> None:
        if not self.elements:
            raise ValueError("a permutation group contains at least the identity")
        for p in self.elements:
            if p.degree != self.degree:
                raise ValueError(f"element {p!r} does not have degree {self.degree}")
        if identity(self.degree) not in self.elements:
            raise ValueError("missing identity element")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, p: Perm) -> bool:
        return p in self.elements

    def __iter__(self):
        return iter(self.sorted_elements())

    def sorted_elements(self) -> list[Perm]:
        return sorted(self.elements)

    def key(self) -> tuple[tuple[int, ...], ...]:
        """Canonical ordering key: the sorted element list as image tuples."""
        return tuple(p.images for p in self.sorted_elements())

    def is_group(self) -> bool:
        """Full axiom check (identity, inverses, closure).  Quadratic; for assertions."""
        elems = self.elements
        if identity(self.degree) not in elems:
            return False
        if any(inverse(p) not in elems for p in elems):
            return False
        return all(compose(a, b) in elems for a in elems for b in elems)

    def conjugate(self, xi: Perm) -> "PermGroup":
        """The conjugate subgroup xi * self * xi^-1."""
        if xi.degree != self.degree:
            raise ValueError(f"degree mismatch: {xi.degree} vs {self.degree}")
        inv = inverse(xi)
        return PermGroup(
            self.degree, frozenset(compose(compose(xi, g), inv) for g in self.elements)
        )

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and self.elements <= other.elements


def trivial_group(degree: int) -> PermGroup:
    return PermGroup(degree, frozenset([identity(degree)]))


@lru_cache(maxsize=None)
def symmetric_group(degree: int) -> PermGroup:
    return PermGroup(
        degree,
        frozenset(Perm(p) for p in itertools.permutations(range(1, degree + 1))),
    )


def generate_subgroup(gens: Iterable[Perm], degree: Optional[int] = None) -> PermGroup:
    """The smallest subgroup containing ``gens``, by closure under composition.

    An empty generating set yields the trivial group, in which case ``degree``
    must be supplied.
    """
    gens = list(gens)
    if degree is None:
        if not gens:
            raise ValueError("degree is required for an empty generating set")
        degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise ValueError(f"generator {g!r} does not have degree {degree}")
    e = identity(degree)
    elems = {e}
    frontier = [e]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                p = compose(g, a)
                if p not in elems:
                    elems.add(p)
                    new.append(p)
        frontier = new
    return PermGroup(degree, frozenset(elems))


@dataclass(frozen=True)
class ConjClass:
    """A conjugacy class of subgroups of S_n, fully materialized.

    The representative is the lexicographically least member under the
    sorted-element-list ordering, so equal classes compare equal.
    """

    degree: int
    representative: PermGroup
    members: tuple[PermGroup, ...]

    @property
    def size(self) -> int:
        return len(self.members)

    def __contains__(self, H: PermGroup) -> bool:
        return H.degree == self.degree and any(
            H.elements == M.elements for M in self.members
        )


def conjugacy_class(H: PermGroup) -> ConjClass:
    """All distinct conjugates of H inside the full symmetric group of its degree."""
    n = H.degree
    if n > 7:
        raise ValueError(
            f"conjugacy classes are enumerated over all of S_{n}; degree > 7 is not supported"
        )
    seen: dict[tuple, PermGroup] = {}
    for xi in symmetric_group(n).sorted_elements():
        K = H.conjugate(xi)
        seen.setdefault(K.key(), K)
    members = tuple(seen[k] for k in sorted(seen))
    return ConjClass(n, members[0], members)


def contains_up_to_conjugacy(
    c1: ConjClass, c2: ConjClass
) -> Optional[tuple[PermGroup, PermGroup]]:
    """A witness pair (G1 in c1, G2 in c2) with G2 <= G1, or None.

    Conjugating a witness shows that existence for one choice of G1 implies
    existence for every choice, so it suffices to search against the
    representative of c1.
    """
    if c1.degree != c2.degree:
        raise ValueError(f"degree mismatch: {c1.degree} vs {c2.degree}")
    G1 = c1.representative
    for G2 in c2.members:
        if G2.is_subgroup_of(G1):
            return (G1, G2)
    return None


@dataclass(frozen=True)
class PairPartition:
    """A partition of {1..2m} into m two-element blocks."""

    blocks: frozenset[frozenset[int]]

    def __post_init__(self) -> None:
        points: set[int] = set()
        for block in self.blocks:
            if len(block) != 2:
                raise ValueError(f"block {sorted(block)} does not have two elements")
            if points & block:
                raise ValueError(f"block {sorted(block)} overlaps another block")
            points |= block
        if points != set(range(1, 2 * len(self.blocks) + 1)):
            raise ValueError(f"blocks do not cover 1..{2 * len(self.blocks)}")

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]]) -> "PairPartition":
        return cls(frozenset(frozenset(b) for b in blocks))

    @property
    def window(self) -> int:
        return 2 * len(self.blocks)

    def translate(self, xi: Perm) -> "PairPartition":
        """The partition whose blocks are the xi-images of this partition's blocks."""
        if xi.degree != self.window:
            raise ValueError(f"degree mismatch: {xi.degree} vs {self.window}")
        return PairPartition(
            frozenset(frozenset(xi(i) for i in block) for block in self.blocks)
        )


def partition_group(P: PairPartition) -> PermGroup:
    """All permutations of the window mapping every block of P onto some block.

    Has order 2^m * m! for m blocks.
    """
    n = P.window
    if n > 8:
        raise ValueError(f"partition groups are filtered out of all of S_{n}; window > 8 is not supported")
    blocks = P.blocks
    members = [
        g
        for g in symmetric_group(n).sorted_elements()
        if all(frozenset(g(i) for i in block) in blocks for block in blocks)
    ]
    return PermGroup(n, frozenset(members))


def is_transitive(H: PermGroup) -> bool:
    """True iff the orbit of 1 under H is the whole domain."""
    return len({g(1) for g in H.elements}) == H.degree


def perm_to_json(p: Perm) -> list[int]:
    return list(p.images)


def perm_from_json(data: Iterable[int]) -> Perm:
    return Perm(tuple(int(i) for i in data))


def group_to_json(G: PermGroup) -> list[list[int]]:
    return [perm_to_json(p) for p in G.sorted_elements()]


def group_from_json(data: Iterable[Iterable[int]]) -> PermGroup:
    elements = frozenset(perm_from_json(row) for row in data)
    if not elements:
        raise ValueError("empty subgroup serialization")
    degree = next(iter(elements)).degree
    return PermGroup(degree, elements)
