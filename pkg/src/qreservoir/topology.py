"""Reservoir connectivity graphs and the graded complexity sequence.

A reservoir graph lives on n qubit nodes and carries two kinds of recurrent
connections: self-loops (a qubit's previous output feeds its own next input)
and undirected edges between distinct qubits (one qubit's previous output
feeds another's next input). The complexity sequence orders these graphs
from the empty graph up to the complete graph with all self-loops, growing
by exactly one connection per step.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator


@dataclass(frozen=True)
class ReservoirTopology:
    """Immutable connectivity graph for an n-qubit reservoir.

    Attributes:
        n_qubits: number of qubit nodes.
        self_loops: per-qubit flag, True where the qubit feeds itself.
        edges: undirected pairs (i, j) with i < j, no self-pairs.
        sequence_index: 0-based position in the complexity sequence, or -1
            for a custom graph that is not a sequence member.
    """

    n_qubits: int
    self_loops: tuple[bool, ...]
    edges: frozenset[tuple[int, int]]
    sequence_index: int = -1

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if len(self.self_loops) != self.n_qubits:
            raise ValueError(
                f"self_loops has {len(self.self_loops)} entries for "
                f"{self.n_qubits} qubits"
            )
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"edge ({i}, {j}) is a self-pair; use self_loops")
            if not (0 <= i < j < self.n_qubits):
                raise ValueError(f"edge ({i}, {j}) out of range for n={self.n_qubits}")

    @classmethod
    def from_connections(
        cls,
        n_qubits: int,
        loops: Iterator[int] = (),
        edges: Iterator[tuple[int, int]] = (),
        sequence_index: int = -1,
    ) -> "ReservoirTopology":
        """Build a custom graph from loop indices and edge pairs.

        Edge pairs are normalized to (min, max) order.
        """
        loop_flags = [False] * n_qubits
        for q in loops:
            if not 0 <= q < n_qubits:
                raise ValueError(f"loop qubit {q} out of range for n={n_qubits}")
            loop_flags[q] = True
        normalized = frozenset((min(i, j), max(i, j)) for i, j in edges)
        return cls(n_qubits, tuple(loop_flags), normalized, sequence_index)

    @property
    def n_loops(self) -> int:
        return sum(self.self_loops)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def neighbors(self, q: int) -> tuple[int, ...]:
        """Qubits connected to q by an undirected edge, ascending."""
        out = [j if i == q else i for i, j in self.edges if q in (i, j)]
        return tuple(sorted(out))

    def feedback_set(self, q: int) -> tuple[int, ...]:
        """Qubits whose previous output feeds q: itself if looped, plus neighbors."""
        members = list(self.neighbors(q))
        if self.self_loops[q]:
            members.append(q)
        return tuple(sorted(members))

    def to_json_dict(self) -> dict:
        return {
            "n": self.n_qubits,
            "loops": list(self.self_loops),
            "edges": sorted([list(e) for e in self.edges]),
        }

    @classmethod
    def from_json_dict(cls, obj: dict, sequence_index: int = -1) -> "ReservoirTopology":
        return cls(
            n_qubits=int(obj["n"]),
            self_loops=tuple(bool(b) for b in obj["loops"]),
            edges=frozenset((int(i), int(j)) for i, j in obj["edges"]),
            sequence_index=sequence_index,
        )


def sequence_length(n: int) -> int:
    """Number of graphs in the complexity sequence for n qubits."""
    return 1 + n + n * (n - 1) // 2


def build_sequence(n: int) -> list[ReservoirTopology]:
    """Ordered complexity sequence of 1 + n + n(n-1)/2 reservoir graphs.

    Starts from the empty graph, adds self-loops one qubit at a time in
    index order, then the cycle edges (0,1), (1,2), ..., (n-1,0), then the
    remaining chords in lexicographic order until the graph is complete.
    Each member strictly contains its predecessor.
    """
    if n < 2:
        raise ValueError(f"sequence needs n >= 2 qubits, got {n}")

    cycle = []
    for i in range(n):
        e = (min(i, (i + 1) % n), max(i, (i + 1) % n))
        if e not in cycle:
            cycle.append(e)
    chords = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if (i, j) not in cycle
    ]

    seq: list[ReservoirTopology] = []
    loops: list[int] = []
    edges: list[tuple[int, int]] = []

    def emit():
        seq.append(
            ReservoirTopology.from_connections(
                n, loops=loops, edges=edges, sequence_index=len(seq)
            )
        )

    emit()
    for q in range(n):
        loops.append(q)
        emit()
    for e in cycle + chords:
        edges.append(e)
        emit()

    assert len(seq) == sequence_length(n)
    return seq


def edge_density(topo: ReservoirTopology) -> float:
    """Filled fraction of the n + n(n-1)/2 possible loops and edges."""
    n = topo.n_qubits
    possible = n + n * (n - 1) // 2
    return (topo.n_loops + topo.n_edges) / possible


def resolve_selector(selector: str, n: int) -> ReservoirTopology:
    """Resolve a topology selector string against an n-qubit register.

    Accepted forms: "empty", "full", "loops:K" (self-loops on qubits 0..K-1),
    "sequence:I" (member I of the complexity sequence).
    """
    sel = selector.strip().lower()
    if sel == "empty":
        return ReservoirTopology.from_connections(n, sequence_index=0)
    if sel == "full":
        seq = build_sequence(n)
        return seq[-1]
    if sel.startswith("loops:"):
        k = int(sel.split(":", 1)[1])
        if not 0 <= k <= n:
            raise ValueError(f"loop count {k} out of range for n={n}")
        return ReservoirTopology.from_connections(n, loops=range(k), sequence_index=k)
    if sel.startswith("sequence:"):
        idx = int(sel.split(":", 1)[1])
        seq = build_sequence(n)
        if not 0 <= idx < len(seq):
            raise ValueError(f"sequence index {idx} out of range for n={n}")
        return seq[idx]
    raise ValueError(
        f"unknown topology selector {selector!r} "
        "(use empty | full | loops:K | sequence:I)"
    )
