"""Ergodic decomposition of lifted labeled systems.

For an irreducible Markov base with a one-step permutation cocycle, the group
lift is the finite graph on (vertex, group element) pairs in which each
support edge acts by left-multiplying its label.  Its strongly connected
components are exactly the ergodic components of the skew product, which
makes the classifying invariant computable: the local group of loop products
at a base vertex, taken up to conjugacy in the full symmetric group of the
fiber.

Two independent routes compute the local group: component membership in the
lift (:func:`local_group_reach`) and spanning-tree loop voltages
(:func:`local_group_voltage`).  They agree literally when the voltage tree is
rooted at the same base vertex.
"""

from __future__ import annotations

from dataclasses import dataclass

from .perm import (
    ConjClass,
    Perm,
    PermGroup,
    compose,
    conjugacy_class,
    generate_subgroup,
    group_to_json,
    identity,
    inverse,
)
from .symbolic import LabeledSystem


class LiftedGraph:
    """The lift of a labeled system by a finite group acting on itself.

    States are (vertex, g) pairs in deterministic order: by vertex position,
    then by permutation.  Each support edge u -> v with label l contributes
    the arcs (u, g) -> (v, l*g) for every g.
    """

    def __init__(self, states, arcs):
        self.states = tuple(states)
        self.arcs = tuple(arcs)
        self._index = {s: i for i, s in enumerate(self.states)}

    def state_index(self, state) -> int:
        return self._index[state]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.states]
        for a, b in self.arcs:
            adj[a].append(b)
        return adj


def lift(sys: LabeledSystem, ambient: PermGroup) -> LiftedGraph:
    if ambient.degree != sys.fiber_degree:
        raise ValueError(
            f"ambient group degree {ambient.degree} does not match fiber degree {sys.fiber_degree}"
        )
    for e in sys.support_edges():
        if e.label not in ambient:
            raise ValueError(
                f"label {list(e.label.images)} on edge {e.src!r} -> {e.dst!r} "
                "lies outside the ambient group"
            )
    group = ambient.sorted_elements()
    states = [(v, g) for v in sys.symbols for g in group]
    index = {s: i for i, s in enumerate(states)}
    edges = sorted(
        sys.support_edges(), key=lambda e: (sys.vertex_index(e.src), sys.vertex_index(e.dst))
    )
    arcs = [
        (index[(e.src, g)], index[(e.dst, compose(e.label, g))])
        for e in edges
        for g in group
    ]
    return LiftedGraph(states, arcs)


def _tarjan(n: int, adj: list[list[int]]) -> list[list[int]]:
    """Strongly connected components, iteratively (no recursion limit issues)."""
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            while pi < len(adj[v]):
                w = adj[v][pi]
                pi += 1
                if index[w] == -1:
                    work[-1] = (v, pi)
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(comp)
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    return comps


def components(lifted: LiftedGraph) -> tuple[frozenset, ...]:
    """Partition of the lifted states into strongly connected components.

    Ordered by the smallest state index they contain, for reproducibility.
    """
    comps = _tarjan(len(lifted.states), lifted.adjacency())
    comps.sort(key=min)
    return tuple(frozenset(lifted.states[i] for i in comp) for comp in comps)


def local_group_reach(sys: LabeledSystem, ambient: PermGroup, base_vertex) -> PermGroup:
    """Group elements reachable over the base vertex: {g : (v0, e) ~ (v0, g)}.

    Closure under the group operations follows from right-translation
    equivariance of the lift plus finiteness; it is asserted, not assumed.
    """
    lifted = lift(sys, ambient)
    comps = components(lifted)
    home = next(c for c in comps if (base_vertex, identity(sys.fiber_degree)) in c)
    elems = frozenset(g for (v, g) in home if v == base_vertex)
    H = PermGroup(sys.fiber_degree, elems)
    assert H.is_group(), "reachable set over the base vertex is not a subgroup"
    return H


def local_group_voltage(sys: LabeledSystem, base_vertex) -> PermGroup:
    """The local group computed from spanning-tree loop voltages.

    A breadth-first arborescence rooted at the base vertex assigns each vertex
    the product t(v) of labels along its tree path.  Every remaining support
    edge u -> v then closes a loop whose voltage, measured so tree edges
    contribute the identity, is t(v)^-1 * label * t(u); these loop voltages
    generate the local group, independently of the tree choice.
    """
    e = identity(sys.fiber_degree)
    t = {base_vertex: e}
    tree_edges: set[tuple] = set()
    queue = [base_vertex]
    while queue:
        u = queue.pop(0)
        outgoing = sorted(sys.support_out(u), key=lambda g: sys.vertex_index(g.dst))
        for edge in outgoing:
            if edge.dst not in t:
                t[edge.dst] = compose(edge.label, t[u])
                tree_edges.add((edge.src, edge.dst))
                queue.append(edge.dst)
    assert len(t) == len(sys.symbols), "support graph not strongly connected"
    gens = []
    edges = sorted(
        sys.support_edges(), key=lambda g: (sys.vertex_index(g.src), sys.vertex_index(g.dst))
    )
    for edge in edges:
        if (edge.src, edge.dst) in tree_edges:
            continue
        gens.append(compose(compose(inverse(t[edge.dst]), edge.label), t[edge.src]))
    return generate_subgroup(gens, degree=sys.fiber_degree)


@dataclass(frozen=True)
class GpResult:
    """The classifying data of a labeled system at a base vertex.

    ``components`` lists the ergodic components meeting the base fiber, each
    as a right coset of the local group with a representative lifted state.
    """

    base_vertex: object
    ambient: PermGroup
    local_group: PermGroup
    klass: ConjClass
    components: tuple[tuple[tuple, frozenset], ...]

    def __post_init__(self) -> None:
        if len(self.components) * self.local_group.order != self.ambient.order:
            raise ValueError("components do not partition the base fiber into cosets")


def gp_invariant(sys: LabeledSystem) -> GpResult:
    """Local group at the first vertex and its conjugacy class in the full symmetric group.

    The ambient group for the lift is the subgroup generated by the labels;
    the conjugacy class is always taken inside S_n of the fiber degree.
    """
    labels = [e.label for e in sys.support_edges()]
    ambient = generate_subgroup(labels, degree=sys.fiber_degree)
    base = sys.symbols[0]
    local = local_group_reach(sys, ambient, base)
    klass = conjugacy_class(local)
    cosets = []
    assigned: set[Perm] = set()
    for g in ambient.sorted_elements():
        if g in assigned:
            continue
        coset = frozenset(compose(h, g) for h in local.elements)
        assigned |= coset
        cosets.append(((base, g), coset))
    return GpResult(base, ambient, local, klass, tuple(cosets))


def is_G_ergodic(sys: LabeledSystem, H: PermGroup) -> bool:
    """True iff the H-lift is a single strongly connected component."""
    for e in sys.support_edges():
        if e.label not in H:
            raise ValueError(
                f"label {list(e.label.images)} on edge {e.src!r} -> {e.dst!r} "
                "lies outside the group; the group lift is not invariant"
            )
    return len(components(lift(sys, H))) == 1


def fiber_transitive(sys: LabeledSystem) -> bool:
    """Ergodicity of the n-point extension: the fiber lift is one strongly connected piece."""
    n = sys.fiber_degree
    states = [(v, i) for v in sys.symbols for i in range(1, n + 1)]
    index = {s: k for k, s in enumerate(states)}
    adj: list[list[int]] = [[] for _ in states]
    for e in sys.support_edges():
        for i in range(1, n + 1):
            adj[index[(e.src, i)]].append(index[(e.dst, e.label(i))])
    return len(_tarjan(len(states), adj)) == 1


def gp_report(sys: LabeledSystem) -> dict:
    """The analysis report emitted by the command line, as a plain dict."""
    result = gp_invariant(sys)
    return {
        "local_group": group_to_json(result.local_group),
        "class_size": result.klass.size,
        "class_members": [group_to_json(M) for M in result.klass.members],
        "components": len(result.components),
        "fiber_ergodic": fiber_transitive(sys),
    }
