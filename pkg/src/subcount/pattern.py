"""Rooted pattern graphs, anchor subgraphs and rooted spanning trees."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CapabilityError, PatternError
from .graph import read_graph

MIN_INTERNAL_MAX_H = 8
TREE_STRATEGIES = ("bfs", "dfs", "min_internal")

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Anchor:
    """Subgraph O of the pattern.

    ``vertices`` is ordered; an anchor embedding is a tuple of host vertices
    aligned with it. For star-shaped anchors (edge, wedge, star:k) the first
    vertex is the centre.
    """

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    kind: str = "explicit"

    @property
    def size(self) -> int:
        return len(self.vertices)

    def is_star(self) -> bool:
        if not self.vertices:
            return False
        c = self.vertices[0]
        return set(self.edges) == {_norm(c, leaf) for leaf in self.vertices[1:]}


@dataclass(frozen=True)
class Pattern:
    h: int
    edges: tuple[Edge, ...]
    root: int = 0
    anchor: Anchor | None = None
    name: str = "custom"

    def __post_init__(self) -> None:
        if self.h < 1:
            raise PatternError("pattern needs at least one vertex")
        edges = set()
        for u, v in self.edges:
            if not (0 <= u < self.h and 0 <= v < self.h):
                raise PatternError(f"edge ({u}, {v}) outside vertex range 0..{self.h - 1}")
            if u == v:
                raise PatternError(f"self-loop at pattern vertex {u}")
            edges.add(_norm(u, v))
        object.__setattr__(self, "edges", tuple(sorted(edges)))
        if not 0 <= self.root < self.h:
            raise PatternError(f"root {self.root} not a pattern vertex")
        if not _connected(self.h, self.edges):
            raise PatternError("pattern graph must be connected")
        if self.anchor is not None:
            _check_anchor(self, self.anchor)

    @property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.h)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def is_tree(self) -> bool:
        return len(self.edges) == self.h - 1

    def is_complete(self) -> bool:
        return len(self.edges) == self.h * (self.h - 1) // 2

    def with_root(self, root: int) -> Pattern:
        return Pattern(self.h, self.edges, root, self.anchor, self.name)

    def with_anchor(self, anchor: Anchor | None) -> Pattern:
        return Pattern(self.h, self.edges, self.root, anchor, self.name)


def _connected(h: int, edges: Iterable[Edge]) -> bool:
    adj: list[list[int]] = [[] for _ in range(h)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    stack = [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == h


def _check_anchor(p: Pattern, a: Anchor) -> None:
    if not a.vertices:
        raise PatternError("anchor must be non-empty")
    if len(set(a.vertices)) != len(a.vertices):
        raise PatternError("anchor vertices repeat")
    vs = set(a.vertices)
    if not vs <= set(range(p.h)):
        raise PatternError("anchor vertices are not all pattern vertices")
    pe = set(p.edges)
    for u, v in a.edges:
        if u not in vs or v not in vs:
            raise PatternError(f"anchor edge ({u}, {v}) leaves the anchor vertex set")
        if _norm(u, v) not in pe:
            raise PatternError(f"anchor edge ({u}, {v}) is not a pattern edge")
    if len(a.vertices) == 1 and a.vertices[0] != p.root:
        raise PatternError("a single-vertex anchor must be the root")


# --- construction -------------------------------------------------------

def named_edges(name: str, k: int | None = None) -> tuple[int, list[Edge]]:
    """Vertex count and edge list of a named pattern family."""
    if name == "edge":
        return 2, [(0, 1)]
    if k is None:
        raise PatternError(f"pattern {name!r} needs a size parameter")
    if name == "path":
        if k < 1:
            raise PatternError("path:k needs k >= 1")
        return k, [(i, i + 1) for i in range(k - 1)]
    if name == "star":
        if k < 0:
            raise PatternError("star:k needs k >= 0")
        return k + 1, [(0, i) for i in range(1, k + 1)]
    if name == "cycle":
        if k < 3:
            raise PatternError("cycle:k needs k >= 3")
        return k, [(i, (i + 1) % k) for i in range(k)]
    if name == "clique":
        if k < 1:
            raise PatternError("clique:k needs k >= 1")
        return k, [(i, j) for i in range(k) for j in range(i + 1, k)]
    raise PatternError(f"unknown pattern family {name!r}")


def make_anchor(h: int, edges: Sequence[Edge], root: int, spec: str | Anchor | None) -> Anchor | None:
    """Build an anchor from ``none``, ``root``, ``edge``, ``wedge``, ``star:k``
    or ``vertices:a,b,...`` (the induced subgraph on the listed vertices)."""
    if spec is None or isinstance(spec, Anchor):
        return spec
    spec = spec.strip()
    if spec in ("", "none"):
        return None
    if spec in ("root", "vertex"):
        return Anchor((root,), (), "vertex")
    nbrs = sorted({v for u, v in edges if u == root} | {u for u, v in edges if v == root})
    if spec in ("edge", "wedge") or spec.startswith("star:"):
        k = {"edge": 1, "wedge": 2}.get(spec)
        if k is None:
            try:
                k = int(spec.split(":", 1)[1])
            except ValueError:
                raise PatternError(f"bad anchor spec {spec!r}") from None
        if k > len(nbrs):
            raise PatternError(f"anchor {spec!r} needs root degree >= {k}, root has {len(nbrs)}")
        leaves = nbrs[:k]
        kind = {1: "edge", 2: "wedge"}.get(k, "star")
        return Anchor((root, *leaves), tuple(_norm(root, x) for x in leaves), kind)
    if spec.startswith("vertices:"):
        try:
            vs = tuple(int(x) for x in spec.split(":", 1)[1].split(","))
        except ValueError:
            raise PatternError(f"bad anchor spec {spec!r}") from None
        vset = set(vs)
        induced = tuple(e for e in sorted(_norm(*e) for e in edges) if e[0] in vset and e[1] in vset)
        return Anchor(vs, induced, "explicit")
    raise PatternError(f"unknown anchor spec {spec!r}")


def make_pattern(
    name_or_edges: str | Sequence[Edge],
    root: int = 0,
    anchor: str | Anchor | None = None,
    h: int | None = None,
) -> Pattern:
    """Build a validated pattern from a spec string or an explicit edge list.

    Spec strings: ``edge``, ``path:k``, ``star:k``, ``cycle:k``, ``clique:k``,
    ``file:<path>[:root=<v>]``.
    """
    if isinstance(name_or_edges, str):
        spec = name_or_edges.strip()
        if spec.startswith("file:"):
            body = spec[5:]
            if ":root=" in body:
                body, r = body.rsplit(":root=", 1)
                root = int(r)
            g = read_graph(body)
            n, edges = g.vertex_count, g.edges()
        else:
            fam, _, arg = spec.partition(":")
            try:
                k = int(arg) if arg else None
            except ValueError:
                raise PatternError(f"bad pattern size in {spec!r}") from None
            n, edges = named_edges(fam, k)
        name = spec
    else:
        edges = [tuple(e) for e in name_or_edges]
        n = h if h is not None else 1 + max((max(e) for e in edges), default=0)
        name = "custom"
    if not 0 <= root < n:
        raise PatternError(f"root {root} not a pattern vertex")
    return Pattern(n, tuple(edges), root, make_anchor(n, edges, root, anchor), name)


# --- spanning trees -----------------------------------------------------

@dataclass(frozen=True)
class RootedSpanningTree:
    root: int
    parent: tuple[int | None, ...]
    tree_degrees: tuple[int, ...]
    internal_flags: tuple[bool, ...]
    o_internal_flags: tuple[bool, ...] | None

    @property
    def h(self) -> int:
        return len(self.parent)

    @property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(_norm(v, p) for v, p in enumerate(self.parent) if p is not None))

    @property
    def internal_count(self) -> int:
        return sum(self.internal_flags)

    @property
    def o_internal_count(self) -> int | None:
        return None if self.o_internal_flags is None else sum(self.o_internal_flags)

    def children(self) -> list[list[int]]:
        ch: list[list[int]] = [[] for _ in range(self.h)]
        for v, p in enumerate(self.parent):
            if p is not None:
                ch[p].append(v)
        return ch


def tree_from_edges(p: Pattern, tree_edges: Iterable[Edge]) -> RootedSpanningTree:
    tree_edges = sorted(_norm(*e) for e in tree_edges)
    pe = set(p.edges)
    if len(tree_edges) != p.h - 1 or any(e not in pe for e in tree_edges):
        raise PatternError("not a spanning tree of the pattern")
    adj: list[list[int]] = [[] for _ in range(p.h)]
    for u, v in tree_edges:
        adj[u].append(v)
        adj[v].append(u)
    parent: list[int | None] = [None] * p.h
    seen = {p.root}
    queue = deque([p.root])
    while queue:
        u = queue.popleft()
        for w in sorted(adj[u]):
            if w not in seen:
                seen.add(w)
                parent[w] = u
                queue.append(w)
    if len(seen) != p.h:
        raise PatternError("tree edges do not span the pattern")
    deg = tuple(len(a) for a in adj)
    internal = tuple(deg[u] > 1 or u == p.root for u in range(p.h))
    o_internal = None
    if p.anchor is not None:
        inside = set(p.anchor.vertices)
        o_internal = tuple(
            (u not in inside and deg[u] >= 2) or (u in inside and any(w not in inside for w in adj[u]))
            for u in range(p.h)
        )
    return RootedSpanningTree(p.root, tuple(parent), deg, internal, o_internal)


def _traversal_tree(p: Pattern, depth_first: bool) -> list[Edge]:
    adj = p.adjacency
    seen = {p.root}
    edges = []
    if depth_first:
        def visit(u: int) -> None:
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    edges.append((u, w))
                    visit(w)
        visit(p.root)
    else:
        queue = deque([p.root])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    edges.append((u, w))
                    queue.append(w)
    return edges


def iter_spanning_trees(h: int, edges: Sequence[Edge]):
    """Yield every spanning tree as a sorted edge tuple, in lexicographic order."""
    edges = sorted(_norm(*e) for e in edges)
    need = h - 1
    chosen: list[Edge] = []

    def find(parent: list[int], x: int) -> int:
        while parent[x] != x:
            x = parent[x]
        return x

    def rec(start: int, parent: list[int]):
        if len(chosen) == need:
            yield tuple(chosen)
            return
        for i in range(start, len(edges) - (need - len(chosen)) + 1):
            u, v = edges[i]
            ru, rv = find(parent, u), find(parent, v)
            if ru == rv:
                continue
            nxt = parent.copy()
            nxt[ru] = rv
            chosen.append(edges[i])
            yield from rec(i + 1, nxt)
            chosen.pop()

    if need == 0:
        yield ()
        return
    yield from rec(0, list(range(h)))


def _internal_count(h: int, root: int, tree_edges: Iterable[Edge]) -> int:
    deg = [0] * h
    for u, v in tree_edges:
        deg[u] += 1
        deg[v] += 1
    return sum(1 for u in range(h) if deg[u] > 1 or u == root)


def spanning_tree(p: Pattern, strategy: str = "bfs") -> RootedSpanningTree:
    """Rooted spanning tree of ``p``.

    ``bfs``/``dfs`` expand neighbours in ascending id order. ``min_internal``
    searches every spanning tree (h <= 8) for the fewest internal vertices,
    preferring the lexicographically smallest edge set on ties.
    """
    if strategy == "bfs":
        return tree_from_edges(p, _traversal_tree(p, depth_first=False))
    if strategy == "dfs":
        return tree_from_edges(p, _traversal_tree(p, depth_first=True))
    if strategy == "min_internal":
        if p.h > MIN_INTERNAL_MAX_H:
            raise CapabilityError(
                f"min_internal is exhaustive and limited to h <= {MIN_INTERNAL_MAX_H}; use bfs or dfs"
            )
        best, best_i = None, None
        for tree in iter_spanning_trees(p.h, p.edges):
            i = _internal_count(p.h, p.root, tree)
            if best_i is None or i < best_i:
                best, best_i = tree, i
                if i == 1:
                    break
        return tree_from_edges(p, best)
    raise CapabilityError(f"unknown tree strategy {strategy!r}; expected one of {TREE_STRATEGIES}")


def o_internal_count(t: RootedSpanningTree, p: Pattern) -> int:
    if p.anchor is None or t.o_internal_flags is None:
        raise PatternError("pattern has no anchor subgraph")
    return sum(t.o_internal_flags)
