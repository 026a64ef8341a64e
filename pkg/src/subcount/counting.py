"""Exact homomorphism and embedding counters.

All counters share one backtracking engine. Pattern vertices are placed in a
fixed order in which every vertex (other than the first of each component)
has an already-placed *source* neighbour; candidates for a vertex are the
host neighbours of its source's image. Every pattern edge back to an
already-placed vertex is checked at placement time.

Counts are Python ints, so they are exact at any size.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import PatternError, SamplerError
from .graph import Graph
from .pattern import Pattern, RootedSpanningTree


@dataclass(frozen=True)
class WeightVector:
    """Non-negative real exponent per pattern vertex."""

    alpha: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        if any(a < 0 for a in self.alpha):
            raise ValueError("weights must be non-negative")

    @property
    def total(self) -> float:
        return sum(self.alpha)

    @classmethod
    def zeros(cls, h: int) -> WeightVector:
        return cls((0.0,) * h)


@dataclass(frozen=True)
class _Plan:
    order: tuple[int, ...]              # pattern vertices in placement order
    src: tuple[int | None, ...]         # position of the source neighbour
    back: tuple[tuple[int, ...], ...]   # positions of other placed neighbours to check
    capped: tuple[bool, ...]            # image degree must be < delta


def _plan(
    h_adj: Sequence[Iterable[int]],
    order: Sequence[int],
    src_vertex: Sequence[int | None],
    capped: Iterable[int] = (),
) -> _Plan:
    pos = {v: i for i, v in enumerate(order)}
    capped = set(capped)
    src, back = [], []
    for i, v in enumerate(order):
        s = src_vertex[i]
        src.append(None if s is None else pos[s])
        back.append(tuple(sorted(pos[w] for w in h_adj[v] if pos.get(w, i) < i and w != s)))
    return _Plan(tuple(order), tuple(src), tuple(back), tuple(v in capped for v in order))


def _bfs_order(adj: Sequence[Sequence[int]], sources: Sequence[int]) -> tuple[list[int], list[int | None]]:
    """Multi-source BFS; returns vertices (sources first) and each one's discoverer."""
    order = list(sources)
    via: list[int | None] = [None] * len(order)
    seen = set(order)
    queue = deque(order)
    while queue:
        u = queue.popleft()
        for w in sorted(adj[u]):
            if w not in seen:
                seen.add(w)
                order.append(w)
                via.append(u)
                queue.append(w)
    return order, via


def _tree_adjacency(t: RootedSpanningTree) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(t.h)]
    for u, v in t.edges:
        adj[u].append(v)
        adj[v].append(u)
    return adj


def _extend(
    plan: _Plan,
    g: Graph,
    img: list[int],
    start: int,
    delta: int | None = None,
    injective: bool = False,
) -> int:
    """Number of ways to fill positions ``start..`` given images before ``start``."""
    nsets = g.neighbour_sets
    adjacency = g.adjacency
    degrees = g.degrees
    last = len(plan.order) - 1
    used = set(img[:start]) if injective else None

    def ok(i: int, x: int) -> bool:
        if injective and x in used:
            return False
        if delta is not None and plan.capped[i] and degrees[x] >= delta:
            return False
        for b in plan.back[i]:
            if x not in nsets[img[b]]:
                return False
        return True

    def rec(i: int) -> int:
        s = plan.src[i]
        cands = range(g.vertex_count) if s is None else adjacency[img[s]]
        if i == last:
            return sum(1 for x in cands if ok(i, x))
        total = 0
        for x in cands:
            if ok(i, x):
                img[i] = x
                if injective:
                    used.add(x)
                    total += rec(i + 1)
                    used.discard(x)
                else:
                    total += rec(i + 1)
        return total

    if start > last:
        return 1
    while len(img) <= last:
        img.append(-1)
    return rec(start)


def _extend_weighted(plan: _Plan, g: Graph, img: list[int], start: int, alpha: Sequence[float]) -> float:
    adjacency = g.adjacency
    nsets = g.neighbour_sets
    degrees = g.degrees
    last = len(plan.order) - 1

    def rec(i: int) -> float:
        if i > last:
            return 1.0
        s = plan.src[i]
        cands = range(g.vertex_count) if s is None else adjacency[img[s]]
        a = alpha[i]
        total = 0.0
        for x in cands:
            if all(x in nsets[img[b]] for b in plan.back[i]):
                img[i] = x
                total += float(degrees[x]) ** a * rec(i + 1)
        return total

    while len(img) <= last:
        img.append(-1)
    return rec(start)


def _pattern_plan(p: Pattern) -> _Plan:
    order, via = _bfs_order(p.adjacency, [p.root])
    return _plan(p.adjacency, order, via)


def _roots(g: Graph, delta: int) -> Iterable[int]:
    return (v for v in range(g.vertex_count) if g.degrees[v] >= delta)


# --- homomorphisms ------------------------------------------------------

def hom_count(p: Pattern, g: Graph) -> int:
    """Number of homomorphisms from ``p`` into ``g``."""
    return hom_trunc(p, g, 0)


def hom_trunc(p: Pattern, g: Graph, delta: int) -> int:
    """Homomorphisms whose root image has degree at least ``delta``."""
    plan = _pattern_plan(p)
    img: list[int] = []
    total = 0
    for v in _roots(g, delta):
        img[:1] = [v]
        total += _extend(plan, g, img, 1)
    return total


def hom_weighted(p: Pattern, g: Graph, delta: int, w: WeightVector | Sequence[float]) -> float:
    """Sum over homomorphisms with root degree >= delta of prod_u d(phi(u)) ** alpha_u."""
    if not isinstance(w, WeightVector):
        w = WeightVector(tuple(w))
    if len(w.alpha) != p.h:
        raise ValueError(f"weight vector has {len(w.alpha)} entries, pattern has {p.h} vertices")
    plan = _pattern_plan(p)
    alpha = [w.alpha[v] for v in plan.order]
    img: list[int] = []
    total = 0.0
    for v in _roots(g, delta):
        img[:1] = [v]
        total += float(g.degrees[v]) ** alpha[0] * _extend_weighted(plan, g, img, 1, alpha)
    return total


def star_bound(g: Graph, h: int, delta: int) -> float:
    """``sum_v d_v^(h-1) 1{d_v >= delta}``, i.e. hom(K_{1,h-1}, G) restricted to
    centres of degree at least ``delta``."""
    return float(sum(float(d) ** (h - 1) for d in g.degrees if d >= delta))


def weighted_star_bound(g: Graph, h: int, delta: int, w: WeightVector) -> float:
    e = h - 1 + w.total
    return float(sum(float(d) ** e for d in g.degrees if d >= delta))


def exact_star_bound(g: Graph, h: int, delta: int) -> int:
    """Integer version of :func:`star_bound`, for exact comparisons."""
    return sum(d ** (h - 1) for d in g.degrees if d >= delta)


# --- embeddings ---------------------------------------------------------

def count_rooted_embeddings(p: Pattern, g: Graph, v: int) -> int:
    """Embeddings sending the root to ``v``."""
    return _extend(_pattern_plan(p), g, [v], 1, injective=True)


def rooted_embedding_counts(p: Pattern, g: Graph) -> list[int]:
    plan = _pattern_plan(p)
    return [_extend(plan, g, [v], 1, injective=True) for v in range(g.vertex_count)]


def exact_emb(p: Pattern, g: Graph) -> int:
    """Total number of embeddings (injective homomorphisms) of ``p`` in ``g``."""
    return sum(rooted_embedding_counts(p, g))


def _tree_plan(p: Pattern, t: RootedSpanningTree) -> _Plan:
    if t.h != p.h or t.root != p.root:
        raise PatternError("spanning tree was not built for this pattern")
    order, via = _bfs_order(_tree_adjacency(t), [p.root])
    internal = [u for u in range(p.h) if t.internal_flags[u]]
    return _plan(p.adjacency, order, via, capped=internal)


class TruncatedCounter:
    """Reusable evaluator of the truncated rooted count for fixed (p, t, g, delta).

    Candidates always come from a tree parent, which is internal and hence
    capped, so each call expands at most (delta-1)^(h-1) partial maps.
    """

    def __init__(self, p: Pattern, t: RootedSpanningTree, g: Graph, delta: int):
        if delta < 1:
            raise ValueError("delta must be a positive integer")
        self.plan = _tree_plan(p, t)
        self.g = g
        self.delta = delta

    def __call__(self, v: int) -> int:
        if self.g.degrees[v] >= self.delta:
            return 0  # the root is always internal
        return _extend(self.plan, self.g, [v], 1, delta=self.delta, injective=True)


def count_truncated(p: Pattern, t: RootedSpanningTree, g: Graph, v: int, delta: int) -> int:
    """Embeddings with root at ``v`` whose internal tree vertices all land on
    host vertices of degree below ``delta``."""
    return TruncatedCounter(p, t, g, delta)(v)


class AnchoredCounter:
    """Reusable evaluator of the truncated count of extensions of an anchor embedding."""

    def __init__(self, p: Pattern, t: RootedSpanningTree, g: Graph, delta: int):
        if p.anchor is None:
            raise PatternError("pattern has no anchor subgraph")
        if t.o_internal_flags is None or t.h != p.h:
            raise PatternError("spanning tree was not built for this anchored pattern")
        if delta < 1:
            raise ValueError("delta must be a positive integer")
        self.anchor = p.anchor
        self.g = g
        self.delta = delta
        order, via = _bfs_order(_tree_adjacency(t), list(p.anchor.vertices))
        capped = [u for u in range(p.h) if t.o_internal_flags[u]]
        self.plan = _plan(p.adjacency, order, via, capped=capped)
        self.k = p.anchor.size
        self._anchor_edges = [(p.anchor.vertices.index(a), p.anchor.vertices.index(b)) for a, b in p.anchor.edges]

    def check(self, nu: Sequence[int]) -> None:
        g = self.g
        if len(nu) != self.k or len(set(nu)) != self.k:
            raise SamplerError(f"anchor map {tuple(nu)} is not injective on {self.k} vertices")
        if any(not 0 <= x < g.vertex_count for x in nu):
            raise SamplerError(f"anchor map {tuple(nu)} leaves the host vertex range")
        for a, b in self._anchor_edges:
            if not g.has_edge(nu[a], nu[b]):
                raise SamplerError(f"anchor map {tuple(nu)} does not preserve anchor edges")

    def __call__(self, nu: Sequence[int]) -> int:
        self.check(nu)
        plan, g = self.plan, self.g
        nsets = g.neighbour_sets
        for i in range(self.k):
            if plan.capped[i] and g.degrees[nu[i]] >= self.delta:
                return 0
            # pattern edges between anchor vertices that the anchor itself omits
            if any(nu[i] not in nsets[nu[b]] for b in plan.back[i]):
                return 0
        return _extend(plan, g, list(nu), self.k, delta=self.delta, injective=True)


def count_anchored(p: Pattern, t: RootedSpanningTree, g: Graph, nu: Sequence[int], delta: int) -> int:
    """Embeddings of ``p`` restricting to ``nu`` on the anchor, with every
    O-internal vertex mapped below degree ``delta``. ``nu`` is aligned with
    ``p.anchor.vertices``."""
    return AnchoredCounter(p, t, g, delta)(nu)


def enumerate_embeddings(h: int, edges: Sequence[tuple[int, int]], g: Graph) -> list[tuple[int, ...]]:
    """All embeddings of the (possibly disconnected) graph ``(range(h), edges)``
    into ``g``, each as a tuple indexed by pattern vertex."""
    adj: list[list[int]] = [[] for _ in range(h)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    order: list[int] = []
    via: list[int | None] = []
    for s in range(h):
        if s not in order:
            o, w = _bfs_order(adj, [s])
            order += o
            via += w
    plan = _plan(adj, order, via)
    nsets = g.neighbour_sets
    out: list[tuple[int, ...]] = []
    img = [-1] * h

    def rec(i: int, used: set[int]) -> None:
        if i == h:
            m = [0] * h
            for pos, v in enumerate(order):
                m[v] = img[pos]
            out.append(tuple(m))
            return
        s = plan.src[i]
        cands = range(g.vertex_count) if s is None else g.adjacency[img[s]]
        for x in cands:
            if x in used or any(x not in nsets[img[b]] for b in plan.back[i]):
                continue
            img[i] = x
            used.add(x)
            rec(i + 1, used)
            used.discard(x)

    if h:
        rec(0, set())
    return out


def anchor_embeddings(p: Pattern, g: Graph) -> list[tuple[int, ...]]:
    """Emb(O, G), each embedding aligned with ``p.anchor.vertices``."""
    if p.anchor is None:
        raise PatternError("pattern has no anchor subgraph")
    vs = p.anchor.vertices
    local = {v: i for i, v in enumerate(vs)}
    return enumerate_embeddings(len(vs), [(local[a], local[b]) for a, b in p.anchor.edges], g)
