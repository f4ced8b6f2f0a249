"""Exact Rokhlin towers and castles over finite cyclic point systems.

A :class:`FinitePointSystem` is the desk-scale stand-in for an aperiodic
system: points 0..N-1 cycled by +1 mod N, each carrying one permutation label
consumed per step.  Every tower and castle statement becomes finite
combinatorics that can be checked pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from .perm import Perm, compose, identity, perm_from_json, perm_to_json


@dataclass(frozen=True)
class FinitePointSystem:
    """Cyclic system on {0..N-1}: the map adds one mod N, step x -> x+1 consumes labels[x]."""

    labels: tuple[Perm, ...]

    def __post_init__(self) -> None:
        if not self.labels:
            raise ValueError("a finite point system has at least one point")
        degree = self.labels[0].degree
        for p in self.labels:
            if p.degree != degree:
                raise ValueError("labels must share one degree")

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def fiber_degree(self) -> int:
        return self.labels[0].degree

    def step(self, x: int, n: int = 1) -> int:
        return (x + n) % self.size


def cocycle_value(sys: FinitePointSystem, x: int, n: int) -> Perm:
    """Ordered product of the n labels along the orbit of x; n = 0 gives the identity."""
    if n < 0:
        raise ValueError("the cocycle is evaluated at nonnegative times")
    if not 0 <= x < sys.size:
        raise ValueError(f"point {x} outside the system")
    acc = identity(sys.fiber_degree)
    for k in range(n):
        acc = compose(sys.labels[(x + k) % sys.size], acc)
    return acc


def cocycle_signature(sys: FinitePointSystem, x: int, height: int) -> tuple[Perm, ...]:
    """The column signature (cocycle values at times 1..height-1) of a base point."""
    return tuple(cocycle_value(sys, x, i) for i in range(1, height))


@dataclass(frozen=True)
class Tower:
    """Disjoint level sets base, T(base), ..., T^(h-1)(base) over a cyclic system of the given modulus."""

    base: tuple[int, ...]
    height: int
    modulus: int

    def __post_init__(self) -> None:
        if self.height < 1:
            raise ValueError("tower height is at least 1")
        if not self.base:
            raise ValueError("tower base is nonempty")
        if list(self.base) != sorted(set(self.base)):
            raise ValueError("tower base must be sorted and duplicate-free")
        if any(not 0 <= x < self.modulus for x in self.base):
            raise ValueError("base point outside the system")
        occupied = {(x + i) % self.modulus for x in self.base for i in range(self.height)}
        if len(occupied) != len(self.base) * self.height:
            raise ValueError("tower levels are not pairwise disjoint")

    def level(self, i: int) -> frozenset[int]:
        if not 0 <= i < self.height:
            raise ValueError(f"no level {i} in a tower of height {self.height}")
        return frozenset((x + i) % self.modulus for x in self.base)

    def levels(self) -> list[frozenset[int]]:
        return [self.level(i) for i in range(self.height)]

    def support(self) -> frozenset[int]:
        return frozenset(
            (x + i) % self.modulus for x in self.base for i in range(self.height)
        )

    def interior(self) -> frozenset[int]:
        """All levels but the top one."""
        return frozenset(
            (x + i) % self.modulus for x in self.base for i in range(self.height - 1)
        )


@dataclass(frozen=True)
class Castle:
    """A finite collection of towers with pairwise disjoint supports."""

    towers: tuple[Tower, ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        modulus = None
        for t in self.towers:
            if modulus is None:
                modulus = t.modulus
            elif t.modulus != modulus:
                raise ValueError("towers live over different systems")
            sup = t.support()
            if seen & sup:
                raise ValueError("tower supports overlap")
            seen |= sup

    @property
    def modulus(self) -> int:
        if not self.towers:
            raise ValueError("empty castle has no modulus")
        return self.towers[0].modulus

    def support(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for t in self.towers:
            out |= t.support()
        return out

    def interior(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for t in self.towers:
            out |= t.interior()
        return out

    def residual(self) -> frozenset[int]:
        return frozenset(range(self.modulus)) - self.support()

    def levels(self) -> list[frozenset[int]]:
        return [lev for t in self.towers for lev in t.levels()]


def build_tower(sys: FinitePointSystem, height: int) -> Tower:
    """Tower of the given height based on the arithmetic progression 0, h, 2h, ...

    Covers floor(N/h) columns; N mod h points remain in the residual set.
    """
    if height > sys.size:
        raise ValueError(f"height {height} exceeds the system size {sys.size}")
    if height < 1:
        raise ValueError("height is at least 1")
    columns = sys.size // height
    base = tuple(k * height for k in range(columns))
    return Tower(base, height, sys.size)


PartitionData = Union[Mapping[int, object], Iterable[Iterable[int]]]


def column_castle(sys: FinitePointSystem, tower: Tower, partition_data: PartitionData) -> Castle:
    """Split a tower into the castle of columns over a partition of its base.

    ``partition_data`` is either a mapping point -> class key or an iterable
    of point collections; the classes must partition the base exactly.
    """
    base = set(tower.base)
    if isinstance(partition_data, Mapping):
        classes: dict = {}
        for x in sorted(base):
            if x not in partition_data:
                raise ValueError(f"classes do not cover base point {x}")
            classes.setdefault(partition_data[x], []).append(x)
        blocks = [tuple(classes[k]) for k in sorted(classes, key=lambda k: min(classes[k]))]
    else:
        blocks = [tuple(sorted(set(block))) for block in partition_data]
        covered: set[int] = set()
        for block in blocks:
            if not set(block) <= base:
                raise ValueError(f"class {list(block)} is not a subset of the tower base")
            if covered & set(block):
                raise ValueError("classes overlap")
            covered |= set(block)
        if covered != base:
            raise ValueError(f"classes do not cover base points {sorted(base - covered)}")
        blocks = [b for b in blocks if b]
        blocks.sort(key=min)
    towers = tuple(Tower(block, tower.height, tower.modulus) for block in blocks)
    return Castle(towers)


def build_exact_castle(sys: FinitePointSystem, height: int) -> Castle:
    """Castle of cocycle-constant columns: the tower split by column signatures.

    On every resulting tower the cocycle between any two levels is a single
    group element, exactly.
    """
    tower = build_tower(sys, height)
    return column_castle(
        sys, tower, {x: cocycle_signature(sys, x, height) for x in tower.base}
    )


def trim_top(castle: Castle) -> Castle:
    """Drop the top level of every tower (height-1 towers vanish).

    Full-support castles must be trimmed before a refinement comparison can
    succeed, since the refined castle's interior can never contain a full
    support.
    """
    towers = tuple(
        Tower(t.base, t.height - 1, t.modulus) for t in castle.towers if t.height > 1
    )
    return Castle(towers)


@dataclass(frozen=True)
class RefineResult:
    ok: bool
    condition: Optional[str]
    detail: str

    def __bool__(self) -> bool:
        return self.ok


def refine_check(c1: Castle, c2: Castle) -> RefineResult:
    """Can c2 be obtained from c1 by cutting and stacking?

    Checks, in order: (i) the support of c1 sits inside the interior of c2;
    (ii) cutting the bases of c1 by the pattern of c2 levels their columns
    pass through turns every cut level into an exact c2 level; (iii) each cut
    column lies inside a single c2 tower.  The canonical cut in (ii) succeeds
    iff any cut does, so a failure is conclusive.
    """
    if c1.towers and c2.towers and c1.modulus != c2.modulus:
        raise ValueError("castles live over different systems")
    interior = c2.interior()
    missing = c1.support() - interior
    if missing:
        return RefineResult(
            False,
            "(i)",
            f"point {min(missing)} of the first castle is not interior to the second",
        )
    level_of: dict[int, tuple[int, int]] = {}
    for tj, t in enumerate(c2.towers):
        for li, lev in enumerate(t.levels()):
            for x in lev:
                level_of[x] = (tj, li)
    modulus = c2.modulus if c2.towers else 0
    for t in c1.towers:
        patterns: dict[tuple, list[int]] = {}
        for b in t.base:
            pattern = tuple(level_of[(b + i) % modulus] for i in range(t.height))
            patterns.setdefault(pattern, []).append(b)
        for pattern, pts in sorted(patterns.items()):
            for offset, (tj, li) in enumerate(pattern):
                cut_level = {(b + offset) % modulus for b in pts}
                target = set(c2.towers[tj].level(li))
                if cut_level != target:
                    return RefineResult(
                        False,
                        "(ii)",
                        f"cut level {sorted(cut_level)} is a proper subset of the "
                        f"target level {sorted(target)}",
                    )
            towers_hit = {tj for tj, _ in pattern}
            if len(towers_hit) != 1:
                return RefineResult(
                    False,
                    "(iii)",
                    f"cut column over {sorted(pts)} crosses target towers {sorted(towers_hit)}",
                )
    return RefineResult(True, None, "refines via the canonical level cut")


def castle_to_json(sys: FinitePointSystem, castle: Castle) -> dict:
    """Dump a castle with per-tower cocycle signatures (towers must be cocycle-constant)."""
    towers = []
    for t in castle.towers:
        sigs = {cocycle_signature(sys, b, t.height) for b in t.base}
        if len(sigs) != 1:
            raise ValueError(f"tower over {list(t.base)} is not cocycle-constant")
        towers.append(
            {
                "base": list(t.base),
                "height": t.height,
                "signatures": [perm_to_json(p) for p in sigs.pop()],
            }
        )
    return {"towers": towers}


def fps_to_json(sys: FinitePointSystem) -> dict:
    return {
        "size": sys.size,
        "fiber_degree": sys.fiber_degree,
        "labels": [perm_to_json(p) for p in sys.labels],
    }


def fps_from_json(data: Mapping) -> FinitePointSystem:
    labels = tuple(perm_from_json(row) for row in data["labels"])
    sys = FinitePointSystem(labels)
    if "size" in data and int(data["size"]) != sys.size:
        raise ValueError(f"declared size {data['size']} but {sys.size} labels")
    if "fiber_degree" in data and int(data["fiber_degree"]) != sys.fiber_degree:
        raise ValueError("declared fiber degree disagrees with the labels")
    return sys
