"""Causal diagrams as validated DAGs, plus the graph surgery used by do(.).

Node identity is by name.  Parent order is declaration order and is the
canonical coefficient order everywhere downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CycleDetected, DuplicateEdge, UnknownEndpoint, UnknownNode


@dataclass(frozen=True)
class CausalDiagram:
    """A directed acyclic graph over named variables.

    Construct via :func:`validate_dag`; direct construction skips validation.
    Immutable after construction and safe to share between threads.
    """

    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    _parents: dict[str, tuple[str, ...]] = field(
        default_factory=dict, repr=False, compare=False
    )

    def __post_init__(self):
        parents = {n: tuple(p for p in self.nodes if (p, n) in self.edges)
                   for n in self.nodes}
        object.__setattr__(self, "_parents", parents)

    def parents(self, node: str) -> tuple[str, ...]:
        """Parents of *node* in declaration order."""
        if node not in self._parents:
            raise UnknownNode(node)
        return self._parents[node]

    def is_root(self, node: str) -> bool:
        return not self.parents(node)

    @property
    def roots(self) -> tuple[str, ...]:
        return tuple(n for n in self.nodes if not self._parents[n])


def validate_dag(nodes, edges) -> CausalDiagram:
    """Build a :class:`CausalDiagram`, checking all structural invariants.

    Raises :class:`UnknownEndpoint`, :class:`DuplicateEdge`, or
    :class:`CycleDetected` (naming one offending cycle).
    """
    nodes = tuple(nodes)
    if len(set(nodes)) != len(nodes):
        raise DuplicateEdge(f"duplicate node names in {nodes}")
    node_set = set(nodes)
    edge_list = [tuple(e) for e in edges]
    seen = set()
    for parent, child in edge_list:
        if parent not in node_set or child not in node_set:
            raise UnknownEndpoint(f"edge {parent}->{child} references undeclared node")
        if parent == child:
            raise CycleDetected([parent, parent])
        if (parent, child) in seen:
            raise DuplicateEdge(f"{parent}->{child}")
        seen.add((parent, child))
    diagram = CausalDiagram(nodes, frozenset(edge_list))
    topological_order(diagram)  # raises CycleDetected if cyclic
    return diagram


def topological_order(diagram: CausalDiagram) -> list[str]:
    """Kahn's algorithm with declaration-order tie-breaking.

    Every parent precedes its children; deterministic for a given diagram.
    """
    indegree = {n: len(diagram._parents[n]) for n in diagram.nodes}
    children: dict[str, list[str]] = {n: [] for n in diagram.nodes}
    for n in diagram.nodes:
        for p in diagram._parents[n]:
            children[p].append(n)
    ready = [n for n in diagram.nodes if indegree[n] == 0]
    order: list[str] = []
    while ready:
        # declaration order among the currently ready nodes
        nxt = min(ready, key=diagram.nodes.index)
        ready.remove(nxt)
        order.append(nxt)
        for c in children[nxt]:
            indegree[c] -= 1
            if indegree[c] == 0:
                ready.append(c)
    if len(order) != len(diagram.nodes):
        remaining = {n for n in diagram.nodes if n not in set(order)}
        raise CycleDetected(_find_cycle(diagram, remaining))
    return order


def _find_cycle(diagram: CausalDiagram, candidates: set[str]) -> list[str]:
    """Walk parent pointers inside *candidates* until a node repeats."""
    start = next(iter(sorted(candidates, key=diagram.nodes.index)))
    path = [start]
    seen = {start: 0}
    node = start
    while True:
        node = next(p for p in diagram._parents[node] if p in candidates)
        if node in seen:
            return list(reversed(path[seen[node]:] + [node]))
        seen[node] = len(path)
        path.append(node)


def mutilate(diagram: CausalDiagram, intervened: str) -> CausalDiagram:
    """Remove every edge INTO *intervened*; all other edges are kept.

    Idempotent; the surgical representation of do(intervened=value).
    """
    if intervened not in diagram.nodes:
        raise UnknownNode(intervened)
    kept = frozenset(e for e in diagram.edges if e[1] != intervened)
    return CausalDiagram(diagram.nodes, kept)


def parents(diagram: CausalDiagram, node: str) -> list[str]:
    """Parents of *node* in declaration order."""
    return list(diagram.parents(node))
