"""Constructive speedup synthesis on cyclic point systems.

Given a target castle description (tower heights, widths, and one-step
labels), a stage materializes the castle inside the source system and wires
consecutive levels by jumps whose source cocycle hits the target label
exactly.  Chaining stages reuses the columns of the previous stage wherever
the target labels allow, which is what makes consecutive stage speedups agree
on their shared domain.

Everything is exact: the group is finite, every identity is checked
pointwise, and the verification report lists each check with a concrete
counterexample on failure.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .castle import FinitePointSystem, cocycle_value
from .perm import Perm, PermGroup, compose, generate_subgroup, identity, inverse, perm_from_json, perm_to_json


@dataclass(frozen=True)
class SpeedupMap:
    """A partial speedup: jump counts p(x) >= 1 with x -> x + p(x) injective."""

    modulus: int
    steps: dict[int, int]

    def __post_init__(self) -> None:
        targets = set()
        for x, p in self.steps.items():
            if not 0 <= x < self.modulus:
                raise ValueError(f"point {x} outside the system")
            if p < 1:
                raise ValueError(f"p({x}) = {p} is not a positive jump")
            targets.add((x + p) % self.modulus)
        if len(targets) != len(self.steps):
            raise ValueError("the sped-up map is not injective")

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self.steps)

    def __getitem__(self, x: int) -> int:
        return self.steps[x]

    def __contains__(self, x: int) -> bool:
        return x in self.steps

    def apply(self, x: int) -> int:
        return (x + self.steps[x]) % self.modulus


@dataclass(frozen=True)
class TowerSpec:
    height: int
    width: Fraction
    level_labels: tuple[Perm, ...]

    def __post_init__(self) -> None:
        if self.height < 1:
            raise ValueError("tower height is at least 1")
        if self.width <= 0:
            raise ValueError("tower width must be positive")
        if len(self.level_labels) != self.height - 1:
            raise ValueError(
                f"a tower of height {self.height} carries {self.height - 1} step labels, "
                f"got {len(self.level_labels)}"
            )


@dataclass(frozen=True)
class TargetCastleSpec:
    towers: tuple[TowerSpec, ...]

    def __post_init__(self) -> None:
        if not self.towers:
            raise ValueError("a target castle has at least one tower")
        total = sum(t.height * t.width for t in self.towers)
        if total > 1:
            raise ValueError(f"infeasible widths: total castle measure {total} exceeds 1")
        degrees = {p.degree for t in self.towers for p in t.level_labels}
        if len(degrees) > 1:
            raise ValueError("step labels must share one degree")

    def base_counts(self, size: int) -> list[int]:
        counts = []
        for j, t in enumerate(self.towers):
            points = t.width * size
            if points.denominator != 1:
                raise ValueError(
                    f"infeasible widths: tower {j} width {t.width} is not a whole "
                    f"number of points over {size}"
                )
            counts.append(int(points))
        return counts


@dataclass(frozen=True)
class StageTower:
    """Column-aligned level sets: levels[i][c] is the column-c point at level i."""

    levels: tuple[tuple[int, ...], ...]

    @property
    def height(self) -> int:
        return len(self.levels)

    @property
    def width(self) -> int:
        return len(self.levels[0])

    def column(self, c: int) -> list[int]:
        return [lev[c] for lev in self.levels]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class StageReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]


@dataclass(frozen=True)
class SpeedupStage:
    stage_index: int
    speedup: SpeedupMap
    towers: tuple[StageTower, ...]
    qtables: tuple[tuple[tuple[int, ...], ...], ...]
    report: StageReport
    prev: Optional["SpeedupStage"] = None

    def phi(self) -> dict[frozenset[int], tuple[int, int]]:
        """Level correspondence: constructed level set -> (target tower, target level)."""
        out = {}
        for j, tower in enumerate(self.towers):
            for i in range(tower.height):
                out[frozenset(tower.levels[i])] = (j, i)
        return out

    def support(self) -> frozenset[int]:
        return frozenset(x for t in self.towers for lev in t.levels for x in lev)

    def interior(self) -> frozenset[int]:
        return frozenset(x for t in self.towers for lev in t.levels[:-1] for x in lev)


def label_group(sys: FinitePointSystem) -> PermGroup:
    return generate_subgroup(sys.labels, degree=sys.fiber_degree)


def lift_is_connected(sys: FinitePointSystem) -> bool:
    """True iff the group lift of the cycle is a single orbit.

    The lift of an N-cycle is a disjoint union of cycles, one orbit exactly
    when the full-loop holonomy generates the whole label group.
    """
    G = label_group(sys)
    holonomy = cocycle_value(sys, 0, sys.size)
    return generate_subgroup([holonomy], degree=sys.fiber_degree).order == G.order


def little_push(
    sys: FinitePointSystem, A: Iterable[int], B: Iterable[int], target: Perm
) -> tuple[frozenset[int], int]:
    """Smallest time n' at which part of A lands in B with cocycle exactly ``target``.

    Returns (A', n') with T^n'(A') inside B and cocycle_value(x, n') == target
    for every x in A'.  The scan is bounded by N * |G|, which suffices whenever
    the lifted system is strongly connected.
    """
    A = sorted(set(A))
    B = frozenset(B)
    if not A or not B:
        raise ValueError("A and B must be nonempty")
    for x in list(A) + sorted(B):
        if not 0 <= x < sys.size:
            raise ValueError(f"point {x} outside the system")
    G = label_group(sys)
    if target not in G:
        raise ValueError(
            f"target {list(target.images)} lies outside the group generated by the labels"
        )
    pos = {x: x for x in A}
    coc = {x: identity(sys.fiber_degree) for x in A}
    bound = sys.size * G.order
    for n in range(1, bound + 1):
        for x in A:
            coc[x] = compose(sys.labels[pos[x]], coc[x])
            pos[x] = (pos[x] + 1) % sys.size
        hits = frozenset(x for x in A if pos[x] in B and coc[x] == target)
        if hits:
            return hits, n
    raise ValueError(
        f"no admissible time within {bound} steps; the lifted system is not strongly connected"
    )


def push_forward(
    sys: FinitePointSystem,
    A: Iterable[int],
    B: Iterable[int],
    g: Mapping[int, Perm],
    p_floor: Optional[Mapping[int, int]] = None,
) -> SpeedupMap:
    """A bijective speedup A -> B whose cocycle hits g(x) exactly, pointwise.

    Greedy round-robin over increasing times: at each time n every still
    unmatched point (in increasing point order) claims its landing spot if the
    spot is an unfilled point of B and the accumulated cocycle equals g(x).
    Distinct points land on distinct spots at any fixed time, so the greedy
    exhaustion terminates whenever the lifted system is strongly connected.
    With ``p_floor`` given, additionally p(x) > p_floor(x) pointwise.
    """
    A = sorted(set(A))
    B_set = set(B)
    if len(A) != len(B_set):
        raise ValueError(f"cannot match {len(A)} points onto {len(B_set)} points")
    if not A:
        return SpeedupMap(sys.size, {})
    G = label_group(sys)
    for x in A:
        if x not in g:
            raise ValueError(f"no target value for point {x}")
        if g[x] not in G:
            raise ValueError(
                f"target value {list(g[x].images)} at point {x} lies outside the "
                "group generated by the labels"
            )
    floor = {x: p_floor.get(x, 0) for x in A} if p_floor else {x: 0 for x in A}
    cap = max(floor.values()) + (len(A) + 1) * sys.size * G.order + sys.size
    pos = {x: x for x in A}
    coc = {x: identity(sys.fiber_degree) for x in A}
    unmatched = list(A)
    unfilled = set(B_set)
    steps: dict[int, int] = {}
    for n in range(1, cap + 1):
        still = []
        for x in unmatched:
            coc[x] = compose(sys.labels[pos[x]], coc[x])
            pos[x] = (pos[x] + 1) % sys.size
            if n > floor[x] and pos[x] in unfilled and coc[x] == g[x]:
                steps[x] = n
                unfilled.remove(pos[x])
            else:
                still.append(x)
        unmatched = still
        if not unmatched:
            break
    if unmatched:
        raise ValueError(
            f"point {unmatched[0]} found no admissible landing within {cap} steps; "
            "the lifted system is not strongly connected"
        )
    return SpeedupMap(sys.size, steps)


class _FreshPool:
    """Ascending supply of points not reserved by the previous stage."""

    def __init__(self, points: Iterable[int]):
        self._points = sorted(points)
        self._next = 0

    def take(self, k: int, where: str) -> list[int]:
        if self._next + k > len(self._points):
            raise ValueError(
                f"infeasible widths: {where} needs {k} unreserved points, "
                f"only {len(self._points) - self._next} remain"
            )
        out = self._points[self._next : self._next + k]
        self._next += k
        return out


def build_stage(
    sys: FinitePointSystem, spec: TargetCastleSpec, prev: Optional[SpeedupStage] = None
) -> SpeedupStage:
    """Materialize one stage of the speedup construction and verify it.

    Levels are chosen bottom-up.  Wherever the target labels from some level
    onward reproduce the step labels of a previous-stage tower, unused columns
    of that tower are threaded in and the previous speedup is followed through
    them unchanged; everything else is filled with the lowest unreserved
    points and wired by :func:`push_forward` against the target label of the
    step.  The returned stage carries the verification report of
    :func:`verify_stage`.
    """
    N = sys.size
    degree = sys.fiber_degree
    G = label_group(sys)
    if not lift_is_connected(sys):
        raise ValueError(
            "the lifted system is not strongly connected: the full-cycle holonomy "
            "does not generate the label group"
        )
    counts = spec.base_counts(N)
    for j, t in enumerate(spec.towers):
        for i, lab in enumerate(t.level_labels):
            if lab.degree != degree:
                raise ValueError(f"label at tower {j} step {i} has the wrong degree")
            if lab not in G:
                raise ValueError(
                    f"label {list(lab.images)} at tower {j} step {i} lies outside "
                    "the group generated by the system labels"
                )

    prev_steps: dict[int, int] = {}
    prev_columns: list[list[list[int]]] = []  # per prev tower: column-major points
    prev_labels: list[list[Perm]] = []  # per prev tower: step labels
    prev_support: set[int] = set()
    if prev is not None:
        if prev.speedup.modulus != N:
            raise ValueError("previous stage belongs to a different system")
        prev_steps = prev.speedup.steps
        for tower in prev.towers:
            prev_support.update(x for lev in tower.levels for x in lev)
            prev_columns.append([tower.column(c) for c in range(tower.width)])
            labels = []
            for i in range(tower.height - 1):
                x0 = tower.levels[i][0]
                labels.append(cocycle_value(sys, x0, prev_steps[x0]))
            prev_labels.append(labels)
    unused_cols = [list(range(len(cols))) for cols in prev_columns]
    pool = _FreshPool(set(range(N)) - prev_support)

    p_table: dict[int, int] = {}
    towers_out: list[StageTower] = []
    qtables: list[tuple[tuple[int, ...], ...]] = []

    for j, tspec in enumerate(spec.towers):
        h, c = tspec.height, counts[j]
        labels_j = tspec.level_labels

        def matching_threads(start: int) -> list[tuple[int, int]]:
            # prev towers whose step labels reproduce the target labels from
            # level ``start`` (0-based) on, fitting under the tower top
            found = []
            for t_idx, slabels in enumerate(prev_labels):
                H = len(prev_columns[t_idx][0])
                if start + H > h or not unused_cols[t_idx]:
                    continue
                if slabels == list(labels_j[start : start + H - 1]):
                    found.append((t_idx, H))
            return found

        levels: list[list[int]] = []
        coverage = [-1] * c  # last 0-based level covered by the thread on each column

        base: list[int] = []
        for t_idx, H in matching_threads(0):
            while unused_cols[t_idx] and len(base) < c:
                col = unused_cols[t_idx].pop(0)
                base.append(prev_columns[t_idx][col][0])
                coverage[len(base) - 1] = H - 1
            if len(base) == c:
                break
        base.extend(pool.take(c - len(base), f"tower {j} base"))
        levels.append(base)

        for i in range(h - 1):
            g_step = labels_j[i]
            cur = levels[i]
            nxt = [-1] * c
            movers: list[int] = []
            for col in range(c):
                x = cur[col]
                if coverage[col] >= i + 1:
                    jump = prev_steps[x]
                    value = cocycle_value(sys, x, jump)
                    if value != g_step:  # cannot happen for threads we admitted
                        raise ValueError(
                            f"inconsistent previous-stage embedding at tower {j} "
                            f"level {i}: followed step has cocycle {list(value.images)} "
                            f"but the target label is {list(g_step.images)}"
                        )
                    p_table[x] = jump
                    nxt[col] = (x + jump) % N
                else:
                    movers.append(col)
            if movers:
                targets: list[int] = []
                pending: dict[int, int] = {}  # thread base point -> thread height
                for t_idx, H in matching_threads(i + 1):
                    while unused_cols[t_idx] and len(targets) < len(movers):
                        col0 = unused_cols[t_idx].pop(0)
                        b = prev_columns[t_idx][col0][0]
                        targets.append(b)
                        pending[b] = H
                    if len(targets) == len(movers):
                        break
                targets.extend(
                    pool.take(len(movers) - len(targets), f"tower {j} level {i + 1}")
                )
                mover_pts = [cur[col] for col in movers]
                pushed = push_forward(
                    sys, mover_pts, targets, {x: g_step for x in mover_pts}
                )
                for col in movers:
                    x = cur[col]
                    jump = pushed.steps[x]
                    y = (x + jump) % N
                    p_table[x] = jump
                    nxt[col] = y
                    if y in pending:
                        coverage[col] = i + pending[y]
            levels.append(nxt)

        towers_out.append(StageTower(tuple(tuple(lev) for lev in levels)))
        qtable = [tuple([0] * c)]
        for i in range(h - 1):
            qtable.append(
                tuple(qtable[i][col] + p_table[levels[i][col]] for col in range(c))
            )
        qtables.append(tuple(qtable))

    stage = SpeedupStage(
        stage_index=prev.stage_index + 1 if prev else 1,
        speedup=SpeedupMap(N, p_table),
        towers=tuple(towers_out),
        qtables=tuple(qtables),
        report=StageReport(()),
        prev=prev,
    )
    return replace(stage, report=verify_stage(sys, spec, stage))


def verify_stage(
    sys: FinitePointSystem, spec: TargetCastleSpec, stage: SpeedupStage
) -> StageReport:
    """Pointwise verification of a stage against its target description.

    Every check reports pass/fail with a concrete counterexample on failure;
    nothing raises.
    """
    checks: list[CheckResult] = []
    N = sys.size
    smap = stage.speedup

    bad = [(x, p) for x, p in sorted(smap.steps.items()) if p < 1]
    checks.append(
        CheckResult(
            "p_positive",
            not bad,
            "" if not bad else f"p({bad[0][0]}) = {bad[0][1]}",
        )
    )

    seen: dict[int, int] = {}
    collision = ""
    for x in sorted(smap.steps):
        y = (x + smap.steps[x]) % N
        if y in seen:
            collision = f"points {seen[y]} and {x} both land on {y}"
            break
        seen[y] = x
    checks.append(CheckResult("p_injective", not collision, collision))

    shape_fail = ""
    counts = spec.base_counts(N)
    if len(stage.towers) != len(spec.towers):
        shape_fail = (
            f"{len(stage.towers)} constructed towers for {len(spec.towers)} targets"
        )
    else:
        for j, (tower, tspec) in enumerate(zip(stage.towers, spec.towers)):
            if tower.height != tspec.height:
                shape_fail = f"tower {j} has height {tower.height}, target {tspec.height}"
                break
            if any(len(lev) != counts[j] for lev in tower.levels):
                shape_fail = f"tower {j} has a level of the wrong width"
                break
    checks.append(CheckResult("level_shape", not shape_fail, shape_fail))

    occupied: set[int] = set()
    disjoint_fail = ""
    for j, tower in enumerate(stage.towers):
        for i, lev in enumerate(tower.levels):
            pts = set(lev)
            if len(pts) != len(lev) or occupied & pts:
                disjoint_fail = f"tower {j} level {i} reuses a point"
                break
            occupied |= pts
        if disjoint_fail:
            break
    checks.append(CheckResult("levels_disjoint", not disjoint_fail, disjoint_fail))

    phi = stage.phi()
    phi_fail = ""
    for j, tower in enumerate(stage.towers):
        for i in range(tower.height):
            if phi.get(frozenset(tower.levels[i])) != (j, i):
                phi_fail = f"level ({j}, {i}) is not mapped to its target index"
                break
        if phi_fail:
            break
    checks.append(CheckResult("level_correspondence", not phi_fail, phi_fail))

    step_fail = ""
    for j, tower in enumerate(stage.towers):
        for i in range(tower.height - 1):
            for col in range(tower.width):
                x = tower.levels[i][col]
                if x not in smap:
                    step_fail = f"no speedup at tower {j} level {i} point {x}"
                    break
                if smap.apply(x) != tower.levels[i + 1][col]:
                    step_fail = (
                        f"tower {j} level {i} point {x} lands on {smap.apply(x)}, "
                        f"not on {tower.levels[i + 1][col]}"
                    )
                    break
            if step_fail:
                break
        if step_fail:
            break
    checks.append(CheckResult("step_onto_next_level", not step_fail, step_fail))

    q_fail = ""
    for j, tower in enumerate(stage.towers):
        q = stage.qtables[j]
        if len(q) != tower.height or any(len(row) != tower.width for row in q):
            q_fail = f"q-table of tower {j} has the wrong shape"
            break
        for i in range(tower.height - 1):
            for col in range(tower.width):
                x = tower.levels[i][col]
                if x in smap and q[i + 1][col] - q[i][col] != smap.steps[x]:
                    q_fail = f"q-table of tower {j} disagrees with p at point {x}"
                    break
            if q_fail:
                break
        if q_fail:
            break
    checks.append(CheckResult("q_consistent", not q_fail, q_fail))

    span_fail = ""
    for j, tower in enumerate(stage.towers):
        labels_j = spec.towers[j].level_labels if j < len(spec.towers) else ()
        prefix = [identity(sys.fiber_degree)]
        for lab in labels_j:
            prefix.append(compose(lab, prefix[-1]))
        q = stage.qtables[j]
        for i in range(tower.height):
            for k in range(i + 1, tower.height):
                expected = compose(prefix[k], inverse(prefix[i]))
                for col in range(tower.width):
                    x = tower.levels[i][col]
                    got = cocycle_value(sys, x, q[k][col] - q[i][col])
                    if got != expected:
                        span_fail = (
                            f"tower {j} span ({i}, {k}) column {col}: cocycle "
                            f"{list(got.images)} differs from the target product "
                            f"{list(expected.images)}"
                        )
                        break
                if span_fail:
                    break
            if span_fail:
                break
        if span_fail:
            break
    checks.append(CheckResult("cocycle_spans", not span_fail, span_fail))

    interior = stage.interior()
    extra = sorted(smap.domain - interior)
    missing = sorted(interior - smap.domain)
    domain_fail = ""
    if extra:
        domain_fail = f"speedup defined at {extra[0]}, outside the castle interior"
    elif missing:
        domain_fail = f"speedup undefined at interior point {missing[0]}"
    checks.append(CheckResult("speedup_domain", not domain_fail, domain_fail))

    ext_fail = ""
    if stage.prev is not None:
        shared = sorted(smap.domain & stage.prev.speedup.domain)
        for x in shared:
            if smap.steps[x] != stage.prev.speedup.steps[x]:
                ext_fail = (
                    f"p({x}) = {smap.steps[x]} but the previous stage had "
                    f"{stage.prev.speedup.steps[x]}"
                )
                break
    checks.append(CheckResult("extends_previous", not ext_fail, ext_fail))

    return StageReport(tuple(checks))


def spec_to_json(spec: TargetCastleSpec) -> dict:
    return {
        "towers": [
            {
                "height": t.height,
                "width": str(t.width),
                "level_labels": [perm_to_json(p) for p in t.level_labels],
            }
            for t in spec.towers
        ]
    }


def spec_from_json(data: Mapping) -> TargetCastleSpec:
    towers = tuple(
        TowerSpec(
            height=int(t["height"]),
            width=Fraction(t["width"]),
            level_labels=tuple(perm_from_json(p) for p in t["level_labels"]),
        )
        for t in data["towers"]
    )
    return TargetCastleSpec(towers)


def stages_from_json(data) -> list[TargetCastleSpec]:
    """Parse a synthesis input: either one castle spec or {"stages": [spec, ...]}."""
    if isinstance(data, Mapping) and "stages" in data:
        return [spec_from_json(stage) for stage in data["stages"]]
    return [spec_from_json(data)]


def report_to_json(report: StageReport) -> dict:
    return {
        "passed": report.passed,
        "checks": [
            {"name": c.name, "passed": c.passed, "detail": c.detail}
            for c in report.checks
        ],
    }


def stage_to_json(stage: SpeedupStage) -> dict:
    return {
        "index": stage.stage_index,
        "towers": [
            {
                "target": j,
                "levels": [list(lev) for lev in tower.levels],
                "q": [list(row) for row in stage.qtables[j]],
            }
            for j, tower in enumerate(stage.towers)
        ],
        "p": [[x, stage.speedup.steps[x]] for x in sorted(stage.speedup.steps)],
        "report": report_to_json(stage.report),
    }
