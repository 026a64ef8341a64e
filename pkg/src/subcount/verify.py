"""Randomized checks of the degree-truncated Sidorenko inequalities.

Each trial draws a small random host graph, a named pattern with a random
root, a truncation threshold and a weight vector, and checks

    hom(H, G)             <= sum_v d_v^(h-1)
    hom_delta(H, G)       <= sum_v d_v^(h-1)        1{d_v >= delta}
    hom_delta,alpha(H, G) <= sum_v d_v^(h-1+|alpha|) 1{d_v >= delta}
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .counting import (
    WeightVector,
    exact_star_bound,
    hom_count,
    hom_trunc,
    hom_weighted,
    weighted_star_bound,
)
from .graph import Graph, erdos_renyi
from .pattern import Pattern, make_pattern

PATTERN_SPECS = ("edge", "path:3", "path:4", "star:4", "cycle:4", "clique:3", "clique:4")
EDGE_PROBABILITIES = (0.3, 0.5, 0.8)
WEIGHTED_RTOL = 1e-9


@dataclass(frozen=True)
class Instance:
    graph: Graph
    pattern: Pattern
    delta: int
    weights: WeightVector
    p_edge: float


def random_instance(rng: np.random.Generator, n_range=(4, 8), max_alpha: float = 3.0) -> Instance:
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    p_edge = float(rng.choice(EDGE_PROBABILITIES))
    g = erdos_renyi(n, p_edge, rng)
    spec = PATTERN_SPECS[int(rng.integers(0, len(PATTERN_SPECS)))]
    base = make_pattern(spec)
    pattern = base.with_root(int(rng.integers(0, base.h)))
    delta = int(rng.integers(0, g.max_degree + 2))
    weights = WeightVector(tuple(rng.uniform(0.0, max_alpha, size=pattern.h).tolist()))
    return Instance(g, pattern, delta, weights, p_edge)


@dataclass
class VerifyReport:
    trials: int = 0
    passed: int = 0
    violations: dict[str, int] = field(default_factory=lambda: {"sidorenko": 0, "truncated": 0, "weighted": 0})
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.trials


def check_instance(inst: Instance) -> list[str]:
    """Names of the inequalities violated by ``inst`` (empty when all hold)."""
    g, p, delta = inst.graph, inst.pattern, inst.delta
    bad = []
    if hom_count(p, g) > exact_star_bound(g, p.h, 0):
        bad.append("sidorenko")
    if hom_trunc(p, g, delta) > exact_star_bound(g, p.h, delta):
        bad.append("truncated")
    lhs = hom_weighted(p, g, delta, inst.weights)
    rhs = weighted_star_bound(g, p.h, delta, inst.weights)
    if lhs > rhs * (1 + WEIGHTED_RTOL):
        bad.append("weighted")
    return bad


def run_verification(trials: int, seed: int = 0) -> VerifyReport:
    rng = np.random.default_rng(seed)
    report = VerifyReport()
    for i in range(trials):
        inst = random_instance(rng)
        bad = check_instance(inst)
        report.trials += 1
        if bad:
            for name in bad:
                report.violations[name] += 1
            report.failures.append(
                f"trial {i}: {inst.pattern.name} root={inst.pattern.root} delta={inst.delta} "
                f"graph={inst.graph.edges()} violated {','.join(bad)}"
            )
        else:
            report.passed += 1
    return report
