"""Immutable simple undirected host graphs, edge-list ingestion and degree moments."""

from __future__ import annotations

import io
import re
from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, TextIO

import numpy as np

from .errors import EmptyGraphError, GraphFormatError

_VERTICES_RE = re.compile(r"#\s*vertices\s+(\d+)\s*$")


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices ``0..vertex_count-1``.

    ``adjacency[v]`` is a sorted tuple of neighbours. Instances are never
    mutated after construction, so they can be shared across threads.
    """

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    degrees: tuple[int, ...] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "degrees", tuple(len(a) for a in self.adjacency))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], vertex_count: int | None = None) -> Graph:
        neighbours: dict[int, set[int]] = {}
        top = -1
        for u, v in edges:
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}")
            if u < 0 or v < 0:
                raise GraphFormatError(f"negative vertex id in edge ({u}, {v})")
            neighbours.setdefault(u, set()).add(v)
            neighbours.setdefault(v, set()).add(u)
            top = max(top, u, v)
        n = top + 1 if vertex_count is None else vertex_count
        if n <= top:
            raise GraphFormatError(f"vertex id {top} out of range for {n} vertices")
        adjacency = tuple(tuple(sorted(neighbours.get(v, ()))) for v in range(n))
        return cls(n, adjacency)

    @cached_property
    def neighbour_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(a) for a in self.adjacency)

    @cached_property
    def degree_array(self) -> np.ndarray:
        return np.asarray(self.degrees, dtype=np.int64)

    @property
    def edge_count(self) -> int:
        return sum(self.degrees) // 2

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def has_edge(self, u: int, v: int) -> bool:
        nbrs = self.adjacency[u]
        i = bisect_left(nbrs, v)
        return i < len(nbrs) and nbrs[i] == v

    def edges(self) -> list[tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]

    def to_edge_list(self) -> str:
        """Canonical text form; the header comment keeps trailing isolated vertices."""
        body = "".join(f"{u} {v}\n" for u, v in self.edges())
        return f"# vertices {self.vertex_count}\n" + body

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertex_count == other.vertex_count and self.adjacency == other.adjacency

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.adjacency))

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, m={self.edge_count})"


def load_graph(source: TextIO | str) -> Graph:
    """Parse an edge list: two non-negative integer ids per line, ``#`` comments.

    Gaps in the id range become isolated vertices, and a ``# vertices N``
    comment extends the range to at least N. Parallel edges collapse;
    self-loops are rejected with their line number.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    edges = []
    declared = 0
    for lineno, raw in enumerate(source, 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _VERTICES_RE.match(line)
            if m:
                declared = max(declared, int(m.group(1)))
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"expected 2 vertex ids, got {len(parts)}: {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"malformed vertex id in {line!r}", lineno) from None
        if u < 0 or v < 0:
            raise GraphFormatError(f"negative vertex id in {line!r}", lineno)
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        edges.append((u, v))
    top = max((max(e) for e in edges), default=-1)
    return Graph.from_edges(edges, vertex_count=max(declared, top + 1))


def read_graph(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_graph(fh)


def _powers(degrees: np.ndarray, k: int) -> np.ndarray:
    # float64 so huge degree powers saturate to inf instead of wrapping
    with np.errstate(over="ignore"):
        return np.power(degrees.astype(np.float64), k)


def degree_moment(g: Graph, k: int) -> float:
    """Mean of ``d_v ** k`` over all vertices."""
    if g.vertex_count == 0:
        raise EmptyGraphError("degree moment undefined for an empty graph")
    return float(_powers(g.degree_array, k).sum() / g.vertex_count)


def degree_tail(g: Graph, h: int, delta: int) -> float:
    """``E[D^(h-1) 1{D >= delta}]`` for the degree D of a uniform random vertex.

    This is the smallest lambda admissible for the pair ``(h, delta)``.
    """
    if g.vertex_count == 0:
        raise EmptyGraphError("degree tail undefined for an empty graph")
    d = g.degree_array
    terms = _powers(d, h - 1)
    return float(terms[d >= delta].sum() / g.vertex_count)


def erdos_renyi(n: int, p_edge: float, rng: np.random.Generator | int | None = None) -> Graph:
    """G(n, p) random graph."""
    rng = np.random.default_rng(rng)
    if n < 2:
        return Graph.from_edges([], vertex_count=n)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p_edge
    return Graph.from_edges(zip(iu[keep].tolist(), ju[keep].tolist()), vertex_count=n)


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(((u, v) for u in range(n) for v in range(u + 1, n)), vertex_count=n)
