"""Sampling estimators with Hoeffding confidence intervals.

Two targets are supported:

* per-vertex density ``emb(H, G) / n``: sample host vertices uniformly and
  average the truncated rooted counts;
* per-anchor density ``emb(H, G) / emb(O, G)``: sample embeddings of the
  anchor subgraph O uniformly and average the truncated extension counts.

Each truncated count lies in ``[0, (delta-1)^e]`` (``e = h-1`` or
``h-|V(O)|``), so Hoeffding's inequality gives a two-sided deviation ``s``
for the sample mean. The truncation discards embeddings hitting a high-degree
internal vertex; their number is at most ``i_T * lambda * n``, which enters
the upper end of the interval as a one-sided bias allowance.
"""

from __future__ import annotations

import bisect
import csv
import io
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterator, Mapping, Sequence, TextIO

import numpy as np

from .counting import AnchoredCounter, TruncatedCounter, anchor_embeddings
from .errors import EmptyGraphError, GraphFormatError, ParameterError, SamplerError
from .graph import Graph, degree_tail
from .pattern import Pattern, RootedSpanningTree

THREADS_ENV = "SUBCOUNT_THREADS"


# --- sample sizes -------------------------------------------------------

def _check_sp(s: float, p: float) -> None:
    if not s > 0:
        raise ParameterError(f"s must be positive, got {s}")
    if not 0 < p <= 1:
        raise ParameterError(f"p must lie in (0, 1], got {p}")


def _hoeffding_n(range_bound: float, s: float, p: float) -> int:
    n = math.ceil(range_bound ** 2 * math.log(2 / p) / (2 * s * s))
    return max(1, n)


def sample_size_absolute(s: float, p: float, delta: int, h: int) -> int:
    """Samples needed for deviation ``s`` with probability ``1 - p`` (vertex sampling)."""
    _check_sp(s, p)
    if delta < 1 or h < 1:
        raise ParameterError("delta and h must be positive integers")
    return _hoeffding_n(float(delta - 1) ** (h - 1), s, p)


def sample_size_relative(epsilon: float, p: float, delta: int, h: int, moment: float) -> int:
    """As :func:`sample_size_absolute` with ``s = epsilon * E[D^(h-1)]``."""
    if not moment > 0:
        raise ParameterError(f"degree moment must be positive, got {moment}")
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    return sample_size_absolute(epsilon * moment, p, delta, h)


def sample_size_anchored(s: float, p: float, delta: int, h: int, anchor_size: int) -> int:
    """Samples needed when drawing uniform embeddings of an anchor on ``anchor_size`` vertices."""
    _check_sp(s, p)
    if delta < 1 or h < 1:
        raise ParameterError("delta and h must be positive integers")
    if not 1 <= anchor_size <= h:
        raise ParameterError(f"anchor size must lie in [1, {h}], got {anchor_size}")
    return _hoeffding_n(float(delta - 1) ** (h - anchor_size), s, p)


def half_width(range_bound: float, n_samples: int, p: float) -> float:
    """Deviation ``s`` at which ``n_samples`` meets the Hoeffding sample size exactly."""
    if n_samples < 1:
        raise ParameterError("need at least one sample")
    if not 0 < p <= 1:
        raise ParameterError(f"p must lie in (0, 1], got {p}")
    return range_bound * math.sqrt(math.log(2 / p) / (2 * n_samples))


# --- results ------------------------------------------------------------

@dataclass(frozen=True)
class EstimateResult:
    point: float
    half_width_s: float
    bias_term: float
    lower: float
    upper: float
    samples_n: int
    confidence_p: float
    delta: int
    lam: float
    seed: int
    target: str

    FIELDS = (
        "point", "half_width_s", "bias_term", "lower", "upper", "samples_n",
        "confidence_p", "delta", "lambda", "seed", "target",
    )

    def as_row(self) -> dict[str, object]:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return {k: d[k] for k in self.FIELDS}

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper

    @classmethod
    def from_row(cls, row: Mapping[str, str]) -> EstimateResult:
        return cls(
            point=float(row["point"]),
            half_width_s=float(row["half_width_s"]),
            bias_term=float(row["bias_term"]),
            lower=float(row["lower"]),
            upper=float(row["upper"]),
            samples_n=int(row["samples_n"]),
            confidence_p=float(row["confidence_p"]),
            delta=int(row["delta"]),
            lam=float(row["lambda"]),
            seed=int(row["seed"]),
            target=row["target"],
        )


def _build_result(point, s, bias, n, p_conf, delta, lam, seed, target) -> EstimateResult:
    return EstimateResult(
        point=point,
        half_width_s=s,
        bias_term=bias,
        lower=point - s,
        upper=point + s + bias,
        samples_n=n,
        confidence_p=p_conf,
        delta=delta,
        lam=lam,
        seed=seed,
        target=target,
    )


# --- evaluation ---------------------------------------------------------

def resolve_threads(threads: int | None = None) -> int:
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "1")
        try:
            threads = int(raw)
        except ValueError:
            raise ParameterError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if threads < 1:
        raise ParameterError(f"thread count must be positive, got {threads}")
    return threads


def _mean_of_counts(fn: Callable[[Hashable], int], samples: Sequence[Hashable], threads: int) -> float:
    # each distinct sample is counted once; reduction follows sample order
    distinct = list(dict.fromkeys(samples))
    if threads > 1 and len(distinct) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = dict(zip(distinct, pool.map(fn, distinct)))
    else:
        values = {x: fn(x) for x in distinct}
    total = 0
    for x in samples:
        total += values[x]
    return total / len(samples)


def estimate(
    g: Graph,
    p: Pattern,
    t: RootedSpanningTree,
    delta: int,
    n_samples: int,
    p_conf: float = 0.05,
    seed: int = 0,
    lam: float | None = None,
    threads: int | None = None,
) -> EstimateResult:
    """Estimate ``emb(H, G) / n`` from ``n_samples`` uniform vertices (with replacement)."""
    if g.vertex_count == 0:
        raise EmptyGraphError("cannot sample from an empty graph")
    if delta < 1:
        raise ParameterError("delta must be a positive integer")
    if n_samples < 1:
        raise ParameterError("need at least one sample")
    if lam is None:
        lam = degree_tail(g, p.h, delta)
    rng = np.random.default_rng(seed)
    vertices = rng.integers(0, g.vertex_count, size=n_samples).tolist()
    if delta == 1 and p.h >= 2:
        point, s = 0.0, 0.0
    else:
        counter = TruncatedCounter(p, t, g, delta)
        point = _mean_of_counts(counter, vertices, resolve_threads(threads))
        s = half_width(float(delta - 1) ** (p.h - 1), n_samples, p_conf)
    return _build_result(point, s, t.internal_count * lam, n_samples, p_conf, delta, lam, seed,
                         "per_vertex_density")


# --- anchor samplers ----------------------------------------------------

class AnchorSampler:
    """Uniform sampler over Emb(O, G).

    ``outcomes`` enumerates the sampler's own choice tree with exact
    probabilities, so uniformity can be checked without simulation.
    """

    kind = "abstract"
    anchor_size = 0

    def __init__(self, g: Graph):
        self.g = g

    @property
    def population(self) -> int:
        raise NotImplementedError

    def draw(self, rng: np.random.Generator) -> tuple[int, ...]:
        raise NotImplementedError

    def draw_many(self, rng: np.random.Generator, n: int) -> list[tuple[int, ...]]:
        return [self.draw(rng) for _ in range(n)]

    def outcomes(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        raise NotImplementedError


class VertexSampler(AnchorSampler):
    kind = "vertex"
    anchor_size = 1

    def __init__(self, g: Graph):
        super().__init__(g)
        if g.vertex_count == 0:
            raise SamplerError("no vertices to sample")

    @property
    def population(self) -> int:
        return self.g.vertex_count

    def draw(self, rng):
        return (int(rng.integers(0, self.g.vertex_count)),)

    def outcomes(self):
        pr = Fraction(1, self.g.vertex_count)
        for v in range(self.g.vertex_count):
            yield (v,), pr


class EdgeSampler(AnchorSampler):
    """Uniform edge, then a fair coin for its orientation."""

    kind = "edge"
    anchor_size = 2

    def __init__(self, g: Graph):
        super().__init__(g)
        self.edge_list = g.edges()
        if not self.edge_list:
            raise SamplerError("graph has no edges to sample")

    @property
    def population(self) -> int:
        return 2 * len(self.edge_list)

    def draw(self, rng):
        u, v = self.edge_list[int(rng.integers(0, len(self.edge_list)))]
        return (u, v) if int(rng.integers(0, 2)) == 0 else (v, u)

    def outcomes(self):
        pr = Fraction(1, len(self.edge_list)) * Fraction(1, 2)
        for u, v in self.edge_list:
            yield (u, v), pr
            yield (v, u), pr


class StarSampler(AnchorSampler):
    """Embeddings of the star K_{1,k} as ``(centre, leaf_1, ..., leaf_k)``.

    The centre c is drawn with weight ``d_c (d_c - 1) ... (d_c - k + 1)``, the
    number of stars centred there; leaves are then drawn one at a time,
    uniformly among the unused neighbours. With ``k = 2`` this is the wedge
    sampler.
    """

    kind = "star"

    def __init__(self, g: Graph, k: int):
        super().__init__(g)
        if k < 1:
            raise SamplerError("star sampler needs k >= 1")
        self.k = k
        self.anchor_size = k + 1
        self.weights = [math.perm(d, k) for d in g.degrees]
        self.total = sum(self.weights)
        if self.total == 0:
            raise SamplerError(f"graph contains no K_1,{k} to sample")
        self._cum = list(itertools.accumulate(self.weights))

    @property
    def population(self) -> int:
        return self.total

    def draw(self, rng):
        # exact integer draw: avoids float rounding in the centre weights
        u = int(rng.integers(0, self.total)) if self.total < 2**63 else int(rng.random() * self.total)
        c = bisect.bisect_right(self._cum, u)
        pool = list(self.g.adjacency[c])
        leaves = []
        for _ in range(self.k):
            leaves.append(pool.pop(int(rng.integers(0, len(pool)))))
        return (c, *leaves)

    def outcomes(self):
        for c, w in enumerate(self.weights):
            if w == 0:
                continue
            pc = Fraction(w, self.total)
            yield from self._leaf_outcomes((c,), list(self.g.adjacency[c]), pc)

    def _leaf_outcomes(self, prefix, pool, pr):
        if len(prefix) == self.k + 1:
            yield prefix, pr
            return
        step = pr / len(pool)
        for i, x in enumerate(pool):
            yield from self._leaf_outcomes(prefix + (x,), pool[:i] + pool[i + 1:], step)


class WedgeSampler(StarSampler):
    kind = "wedge"

    def __init__(self, g: Graph):
        super().__init__(g, 2)


class EnumeratedSampler(AnchorSampler):
    """Uniform index into an explicit list of anchor embeddings."""

    kind = "enumerated"

    def __init__(self, g: Graph, embeddings: Sequence[tuple[int, ...]]):
        super().__init__(g)
        self.embeddings = list(embeddings)
        if not self.embeddings:
            raise SamplerError("anchor subgraph has no embedding in the host graph")
        self.anchor_size = len(self.embeddings[0])

    @property
    def population(self) -> int:
        return len(self.embeddings)

    def draw(self, rng):
        return self.embeddings[int(rng.integers(0, len(self.embeddings)))]

    def outcomes(self):
        pr = Fraction(1, len(self.embeddings))
        for e in self.embeddings:
            yield e, pr


SAMPLER_KINDS = ("vertex", "edge", "wedge", "star", "enumerated")


def default_sampler_kind(p: Pattern) -> str:
    a = p.anchor
    if a is None:
        raise SamplerError("pattern has no anchor subgraph")
    if a.size == 1:
        return "vertex"
    if a.is_star():
        return {2: "edge", 3: "wedge"}.get(a.size, "star")
    return "enumerated"


def make_sampler(kind: str, g: Graph, p: Pattern | None = None) -> AnchorSampler:
    """Sampler of ``kind`` for the anchor of ``p`` (``p`` may be omitted for
    vertex/edge/wedge)."""
    a = p.anchor if p is not None else None
    if p is not None and a is None:
        raise SamplerError("pattern has no anchor subgraph")
    if kind == "vertex":
        if a is not None and a.size != 1:
            raise SamplerError(f"vertex sampler needs a single-vertex anchor, got {a.size} vertices")
        return VertexSampler(g)
    if kind in ("edge", "wedge", "star"):
        want = {"edge": 2, "wedge": 3}.get(kind)
        if a is not None:
            if not a.is_star() or a.size < 2 or (want is not None and a.size != want):
                raise SamplerError(f"{kind} sampler is incompatible with anchor {a.vertices}/{a.edges}")
        elif want is None:
            raise SamplerError("star sampler needs a pattern to fix the number of leaves")
        size = a.size if a is not None else want
        if kind == "edge":
            return EdgeSampler(g)
        return WedgeSampler(g) if size == 3 else StarSampler(g, size - 1)
    if kind == "enumerated":
        if p is None:
            raise SamplerError("enumerated sampler needs a pattern")
        return EnumeratedSampler(g, anchor_embeddings(p, g))
    raise SamplerError(f"unknown sampler kind {kind!r}; expected one of {SAMPLER_KINDS}")


def sample_anchor_embedding(
    g: Graph, kind: str, rng: np.random.Generator, p: Pattern | None = None
) -> tuple[int, ...]:
    return make_sampler(kind, g, p).draw(rng)


def estimate_anchored(
    g: Graph,
    p: Pattern,
    t: RootedSpanningTree,
    delta: int,
    n_samples: int,
    p_conf: float = 0.05,
    seed: int = 0,
    sampler_kind: str | None = None,
    lam: float | None = None,
    threads: int | None = None,
) -> EstimateResult:
    """Estimate ``emb(H, G) / emb(O, G)`` from uniform anchor embeddings."""
    if g.vertex_count == 0:
        raise EmptyGraphError("cannot sample from an empty graph")
    if delta < 1:
        raise ParameterError("delta must be a positive integer")
    if n_samples < 1:
        raise ParameterError("need at least one sample")
    sampler = make_sampler(sampler_kind or default_sampler_kind(p), g, p)
    counter = AnchoredCounter(p, t, g, delta)
    if lam is None:
        lam = degree_tail(g, p.h, delta)
    rng = np.random.default_rng(seed)
    samples = sampler.draw_many(rng, n_samples)
    point = _mean_of_counts(counter, samples, resolve_threads(threads))
    k = p.anchor.size
    s = half_width(float(delta - 1) ** (p.h - k), n_samples, p_conf)
    if delta == 1 and k < p.h:
        s = 0.0
    bias = t.o_internal_count * lam * g.vertex_count / sampler.population
    return _build_result(point, s, bias, n_samples, p_conf, delta, lam, seed, "per_anchor_density")


# --- degree profiles ----------------------------------------------------

def degree_histogram(g: Graph) -> dict[int, int]:
    hist: dict[int, int] = {}
    for d in g.degrees:
        hist[d] = hist.get(d, 0) + 1
    return dict(sorted(hist.items()))


def load_degree_csv(source: TextIO | str) -> dict[int, int]:
    """Read a ``degree,count`` table into a histogram."""
    if isinstance(source, str):
        source = io.StringIO(source)
    reader = csv.reader(source)
    hist: dict[int, int] = {}
    header_seen = False
    for lineno, row in enumerate(reader, 1):
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        cells = [c.strip() for c in row]
        if not header_seen:
            if [c.lower() for c in cells] != ["degree", "count"]:
                raise GraphFormatError(f"expected header 'degree,count', got {','.join(cells)!r}", lineno)
            header_seen = True
            continue
        if len(cells) != 2:
            raise GraphFormatError(f"expected 2 fields, got {len(cells)}", lineno)
        try:
            d, c = int(cells[0]), int(cells[1])
        except ValueError:
            raise GraphFormatError(f"non-integer field in {','.join(cells)!r}", lineno) from None
        if d < 0 or c <= 0:
            raise GraphFormatError("degree must be >= 0 and count > 0", lineno)
        hist[d] = hist.get(d, 0) + c
    if not hist:
        raise GraphFormatError("degree distribution is empty")
    return dict(sorted(hist.items()))


def histogram_tail(hist: Mapping[int, int], h: int, delta: int) -> float:
    n = sum(hist.values())
    if n == 0:
        raise EmptyGraphError("degree tail undefined for an empty distribution")
    return float(sum(c * float(d) ** (h - 1) for d, c in hist.items() if d >= delta) / n)


@dataclass(frozen=True)
class ProfileRow:
    delta: int
    lam: float
    min_n_absolute: int | None = None
    min_n_relative: int | None = None
    min_n_anchored: int | None = None
    exceeds_population: bool = False


@dataclass(frozen=True)
class DegreeTailProfile:
    h: int
    moment: float
    population: int
    rows: tuple[ProfileRow, ...]
    histogram: Mapping[int, int] = field(repr=False, default_factory=dict)

    def lambda_at(self, delta: int) -> float:
        return histogram_tail(self.histogram, self.h, delta)


def degree_profile(
    source: Graph | Mapping[int, int],
    h: int,
    s: float | None = None,
    epsilon: float | None = None,
    p_conf: float = 0.05,
    anchor_size: int | None = None,
) -> DegreeTailProfile:
    """Sweep delta over the observed degrees (and max + 1), reporting lambda(delta)
    and the minimum sample sizes it implies."""
    hist = degree_histogram(source) if isinstance(source, Graph) else dict(sorted(source.items()))
    population = sum(hist.values())
    if population == 0:
        raise EmptyGraphError("degree profile of an empty graph")
    moment = histogram_tail(hist, h, 0)
    deltas = sorted(set(hist) | {max(hist) + 1})
    rows = []
    for delta in deltas:
        lam = histogram_tail(hist, h, delta)
        n_abs = n_rel = n_anc = None
        if delta >= 1:
            if s is not None:
                n_abs = sample_size_absolute(s, p_conf, delta, h)
                if anchor_size is not None:
                    n_anc = sample_size_anchored(s, p_conf, delta, h, anchor_size)
            if epsilon is not None and moment > 0:
                n_rel = sample_size_relative(epsilon, p_conf, delta, h, moment)
        exceeds = any(n is not None and n > population for n in (n_abs, n_rel, n_anc))
        rows.append(ProfileRow(delta, lam, n_abs, n_rel, n_anc, exceeds))
    return DegreeTailProfile(h, moment, population, tuple(rows), hist)


__all__ = [
    "AnchorSampler", "DegreeTailProfile", "EdgeSampler", "EnumeratedSampler", "EstimateResult",
    "ProfileRow", "StarSampler", "VertexSampler", "WedgeSampler", "degree_histogram",
    "degree_profile", "default_sampler_kind", "estimate", "estimate_anchored", "half_width",
    "histogram_tail", "load_degree_csv", "make_sampler", "sample_anchor_embedding",
    "sample_size_absolute", "sample_size_anchored", "sample_size_relative",
]
