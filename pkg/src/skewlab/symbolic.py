"""Edge-labeled, probability-weighted transition graphs.

A :class:`LabeledSystem` packages a finite irreducible Markov base together
with a one-step permutation cocycle: every edge carries an exact rational
transition probability and a permutation label consumed when the edge is
traversed.  Products of labels along paths are ordered right-to-left, so the
label of the latest step multiplies on the left.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .perm import Perm, compose, identity, inverse, perm_from_json, perm_to_json


@dataclass(frozen=True)
class Edge:
    src: object
    dst: object
    prob: Fraction
    label: Perm


@dataclass(frozen=True)
class LabeledSystem:
    """An irreducible transition graph with rational edge probabilities and permutation labels."""

    symbols: tuple
    edges: tuple[Edge, ...]
    fiber_degree: int
    fiber_kind: str = "n-point"

    def __post_init__(self) -> None:
        if len(set(self.symbols)) != len(self.symbols) or not self.symbols:
            raise ValueError("symbols must be a nonempty set of distinct names")
        if self.fiber_kind not in ("n-point", "group"):
            raise ValueError(f"unknown fiber kind {self.fiber_kind!r}")
        known = set(self.symbols)
        seen_pairs: set[tuple] = set()
        sums: dict = {v: Fraction(0) for v in self.symbols}
        for e in self.edges:
            if e.src not in known or e.dst not in known:
                raise ValueError(f"edge {e.src!r} -> {e.dst!r} uses an unknown symbol")
            if (e.src, e.dst) in seen_pairs:
                raise ValueError(f"parallel edges {e.src!r} -> {e.dst!r} are not supported")
            seen_pairs.add((e.src, e.dst))
            if e.prob < 0:
                raise ValueError(f"negative probability on edge {e.src!r} -> {e.dst!r}")
            if e.label.degree != self.fiber_degree:
                raise ValueError(
                    f"label on edge {e.src!r} -> {e.dst!r} has degree {e.label.degree}, "
                    f"expected {self.fiber_degree}"
                )
            sums[e.src] += e.prob
        for v, total in sums.items():
            if total != 1:
                raise ValueError(f"outgoing probabilities at {v!r} sum to {total}, not 1")
        if not self._support_strongly_connected():
            raise ValueError("support graph is not strongly connected")

    def _support_strongly_connected(self) -> bool:
        forward = defaultdict(list)
        backward = defaultdict(list)
        for e in self.support_edges():
            forward[e.src].append(e.dst)
            backward[e.dst].append(e.src)

        def reach(adj):
            seen = {self.symbols[0]}
            stack = [self.symbols[0]]
            while stack:
                for w in adj[stack.pop()]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            return seen

        everything = set(self.symbols)
        return reach(forward) == everything and reach(backward) == everything

    def vertex_index(self, v) -> int:
        return self.symbols.index(v)

    def support_edges(self) -> list[Edge]:
        return [e for e in self.edges if e.prob > 0]

    def support_out(self, v) -> list[Edge]:
        return [e for e in self.support_edges() if e.src == v]

    def support_label(self, u, v) -> Perm:
        for e in self.support_edges():
            if e.src == u and e.dst == v:
                return e.label
        raise ValueError(f"no support edge {u!r} -> {v!r}")


@dataclass
class VertexFunction:
    """A function assigning a permutation of the fiber to every vertex."""

    values: Mapping

    def __call__(self, v) -> Perm:
        return self.values[v]

    def pointwise_inverse(self) -> "VertexFunction":
        return VertexFunction({v: inverse(p) for v, p in self.values.items()})


def full_shift(labels: Sequence[Perm], probs: Sequence) -> LabeledSystem:
    """Complete graph on one vertex per label; leaving vertex i consumes labels[i].

    The edge i -> j carries probability probs[j], so the base is an
    independent process over the vertex set.
    """
    if not labels:
        raise ValueError("at least one label is required")
    probs = [Fraction(p) for p in probs]
    if len(probs) != len(labels):
        raise ValueError(f"{len(labels)} labels but {len(probs)} probabilities")
    if any(p <= 0 for p in probs):
        raise ValueError("all probabilities must be positive")
    if sum(probs) != 1:
        raise ValueError(f"probabilities sum to {sum(probs)}, not 1")
    degree = labels[0].degree
    symbols = tuple(range(1, len(labels) + 1))
    edges = tuple(
        Edge(u, v, probs[v - 1], labels[u - 1]) for u in symbols for v in symbols
    )
    return LabeledSystem(symbols, edges, degree)


def word_cocycle(sys: LabeledSystem, word: Sequence) -> Perm:
    """Cocycle value accumulated over a symbolic word.

    A word of length n determines n steps: step k consumes the label of the
    support edge from word[k] to word[k+1], and the final step leaves the last
    symbol, whose outgoing support edges must all carry a single label for the
    value to be well defined (always true for vertex-labeled systems such as
    full shifts).  The empty word gives the identity.
    """
    word = list(word)
    if not word:
        return identity(sys.fiber_degree)
    acc = identity(sys.fiber_degree)
    for u, v in zip(word, word[1:]):
        acc = compose(sys.support_label(u, v), acc)
    last = word[-1]
    out_labels = {e.label for e in sys.support_out(last)}
    if len(out_labels) != 1:
        raise ValueError(
            f"outgoing labels of {last!r} differ; extend the word by one more symbol"
        )
    return compose(out_labels.pop(), acc)


def twist(sys: LabeledSystem, alpha: VertexFunction) -> LabeledSystem:
    """Relabel every edge u -> v from l to alpha(v) * l * alpha(u)^-1.

    The graph and the probabilities are untouched; only the cocycle changes,
    to a cohomologous one.
    """
    for v in sys.symbols:
        if v not in alpha.values:
            raise ValueError(f"vertex {v!r} is missing from the twisting function")
    edges = tuple(
        Edge(e.src, e.dst, e.prob, compose(compose(alpha(e.dst), e.label), inverse(alpha(e.src))))
        for e in sys.edges
    )
    return LabeledSystem(sys.symbols, edges, sys.fiber_degree, sys.fiber_kind)


def system_to_json(sys: LabeledSystem) -> dict:
    return {
        "fiber_degree": sys.fiber_degree,
        "fiber_kind": sys.fiber_kind,
        "symbols": list(sys.symbols),
        "edges": [
            [e.src, e.dst, str(e.prob), perm_to_json(e.label)] for e in sys.edges
        ],
    }


def system_from_json(data: Mapping) -> LabeledSystem:
    """Parse a system description; accepts the full format and the full-shift shorthand."""
    degree = int(data["fiber_degree"])
    if "labels" in data:
        labels = [perm_from_json(row) for row in data["labels"]]
        if any(p.degree != degree for p in labels):
            raise ValueError("shorthand labels disagree with the declared fiber degree")
        return full_shift(labels, [Fraction(p) for p in data["probs"]])
    kind = data.get("fiber_kind", "n-point")
    symbols = tuple(data["symbols"])
    edges = tuple(
        Edge(src, dst, Fraction(prob), perm_from_json(label))
        for src, dst, prob, label in data["edges"]
    )
    return LabeledSystem(symbols, edges, degree, kind)
