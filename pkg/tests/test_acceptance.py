"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` or
``python tests/test_acceptance.py``.
"""

import io
import itertools
import math
import time
from collections import defaultdict
from fractions import Fraction

import numpy as np
import pytest

import oracles
from subcount.cli import run
from subcount.counting import (
    AnchoredCounter,
    TruncatedCounter,
    anchor_embeddings,
    exact_emb,
    exact_star_bound,
)
from subcount.estimator import (
    EdgeSampler,
    WedgeSampler,
    estimate,
    estimate_anchored,
    make_sampler,
    sample_size_absolute,
    sample_size_anchored,
    sample_size_relative,
)
from subcount.graph import Graph, complete_graph, degree_moment, degree_tail, erdos_renyi
from subcount.pattern import make_pattern, spanning_tree
from subcount.verify import PATTERN_SPECS, random_instance, run_verification

RESULTS: dict[int, tuple[bool, str]] = {}

EDGE_PROBS = (0.3, 0.5, 0.8)


def record(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")


def criterion1_instances():
    rng = np.random.default_rng(20221)
    out = []
    for _ in range(200):
        n = int(rng.integers(4, 9))
        g = erdos_renyi(n, float(rng.choice(EDGE_PROBS)), rng)
        out.append(g)
    return out


GRAPHS = criterion1_instances()


def test_c1_oracle_equivalence():
    t0 = time.perf_counter()
    mismatches = []
    checked = 0
    for i, g in enumerate(GRAPHS):
        for spec in PATTERN_SPECS:
            p = make_pattern(spec)
            got = exact_emb(p, g)
            want = oracles.emb_brute(p.h, p.edges, g.vertex_count, g.edges())
            checked += 1
            if got != want:
                mismatches.append((i, spec, got, want))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 30
    record(1, ok, f"{checked - len(mismatches)}/{checked} exact matches, {elapsed:.1f}s (limit 30s)")
    assert not mismatches, mismatches[:5]
    assert elapsed < 30


def test_c2_inequality_suite():
    t0 = time.perf_counter()
    rep = run_verification(1000, seed=2022)
    elapsed = time.perf_counter() - t0
    # the generator covers the stated family
    rng = np.random.default_rng(5)
    for _ in range(200):
        inst = random_instance(rng)
        assert 4 <= inst.graph.vertex_count <= 8 and inst.p_edge in EDGE_PROBS
        assert 0 <= inst.delta <= inst.graph.max_degree + 1
        assert all(0 <= a <= 3 for a in inst.weights.alpha)
    ok = rep.ok and rep.trials == 1000 and elapsed < 60
    record(2, ok, f"{rep.passed}/{rep.trials} instances clean, violations={rep.violations}, "
                  f"{elapsed:.1f}s (limit 60s)")
    assert rep.ok, rep.failures[:5]
    assert elapsed < 60


def _anchor_specs(p):
    specs = []
    deg_root = sum(1 for e in p.edges if p.root in e)
    if p.h >= 2:
        specs.append("edge")
    if deg_root >= 2:
        specs.append("wedge")
    if p.h >= 2:
        specs.append("root")
    return specs


def test_c3_sandwich_exactness():
    failures = []
    checks = 0
    for i, g in enumerate(GRAPHS):
        n = g.vertex_count
        for spec in PATTERN_SPECS:
            base = make_pattern(spec)
            emb = exact_emb(base, g)
            t = spanning_tree(base)
            for delta in range(1, g.max_degree + 2):
                lam = Fraction(exact_star_bound(g, base.h, delta), n)  # == degree_tail, exactly
                assert float(lam) == pytest.approx(degree_tail(g, base.h, delta), rel=1e-12, abs=0)
                counter = TruncatedCounter(base, t, g, delta)
                mean = Fraction(sum(counter(v) for v in range(n)), n)
                checks += 1
                if not (mean <= Fraction(emb, n) <= mean + t.internal_count * lam):
                    failures.append(("vertex", i, spec, delta))
                for anchor in _anchor_specs(base):
                    p = base.with_anchor(make_pattern(spec, anchor=anchor).anchor)
                    ta = spanning_tree(p)
                    ac = AnchoredCounter(p, ta, g, delta)
                    total = sum(ac(nu) for nu in anchor_embeddings(p, g))
                    checks += 1
                    if not (total <= emb <= total + ta.o_internal_count * lam * n):
                        failures.append(("anchored", i, spec, anchor, delta))
    record(3, not failures, f"{checks - len(failures)}/{checks} sandwiches hold exactly")
    assert not failures, failures[:5]


def test_c4_statistical_coverage():
    t0 = time.perf_counter()
    n = 2000
    g = erdos_renyi(n, 6 / (n - 1), 4)
    p = make_pattern("clique:3")
    t = spanning_tree(p)
    delta, p_conf = 20, 0.05
    s = 0.25 * degree_moment(g, 2)
    n_samples = sample_size_absolute(s, p_conf, delta, p.h)
    target = exact_emb(p, g) / n
    runs = 500
    covered = sum(estimate(g, p, t, delta, n_samples, p_conf, seed=r).contains(target) for r in range(runs))
    elapsed = time.perf_counter() - t0
    frac = covered / runs
    ok = frac >= 0.93 and elapsed < 300
    record(4, ok, f"coverage {covered}/{runs} = {frac:.3f} (need >= 0.93), N={n_samples}, "
                  f"target={target:.4g}, {elapsed:.1f}s (limit 300s)")
    assert frac >= 0.93
    assert elapsed < 300


def test_c5_clique_star_anchor_exact():
    g = complete_graph(10)
    p = make_pattern("clique:4", anchor="star:3")
    t = spanning_tree(p)
    assert set(t.edges) == set(p.anchor.edges) == set(make_pattern("star:3").edges)
    sampler = make_sampler("star", g, p)
    ratio = Fraction(exact_emb(p, g), sampler.population)
    bad = []
    for seed in range(20):
        for delta in (1, 2, 5, 10):
            counter = AnchoredCounter(p, t, g, delta)
            draws = sampler.draw_many(np.random.default_rng(seed), 25)
            if any(counter(nu) != ratio for nu in draws):
                bad.append(("sample", seed, delta))
            r = estimate_anchored(g, p, t, delta, 25, seed=seed, sampler_kind="star")
            if r.point != ratio or r.bias_term != 0:
                bad.append(("estimate", seed, delta, r.point))
    ok = t.o_internal_count == 0 and not bad
    record(5, ok, f"i_T^O={t.o_internal_count}, ratio={ratio}, {80 - len(bad)}/80 exact runs")
    assert t.o_internal_count == 0
    assert not bad


def test_c6_sample_size_formulas():
    # independent direct evaluation of the closed forms
    want = [
        math.ceil((3 - 1) ** (2 * 2) * math.log(2 / 0.05) / (2 * 1.0**2)),
        math.ceil((3 - 1) ** (2 * 2) * math.log(2 / 0.05) / (2 * 0.1**2 * 4.0**2)),
        math.ceil((4 - 1) ** (2 * (4 - 2)) * math.log(2 / 0.05) / (2 * 0.5**2)),
    ]
    got = [
        sample_size_absolute(1, 0.05, 3, 3),
        sample_size_relative(0.1, 0.05, 3, 3, 4.0),
        sample_size_anchored(0.5, 0.05, 4, 4, 2),
    ]
    ok = got == want == [30, 185, 598]
    record(6, ok, f"got {got}, expected [30, 185, 598]")
    assert ok


def _small_graphs():
    for n in range(2, 6):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            yield Graph.from_edges([e for b, e in enumerate(pairs) if mask >> b & 1], vertex_count=n)
    rng = np.random.default_rng(77)
    for _ in range(300):
        yield erdos_renyi(6, float(rng.choice(EDGE_PROBS)), rng)


def test_c7_sampler_uniformity():
    worst = 0.0
    graphs = 0
    for g in _small_graphs():
        graphs += 1
        ge = g.edges()
        for factory, k, o_edges in ((EdgeSampler, 2, [(0, 1)]), (WedgeSampler, 3, [(0, 1), (0, 2)])):
            truth = oracles.sub_embeddings_brute(k, o_edges, g.vertex_count, ge)
            if not truth:
                continue
            dist = defaultdict(Fraction)
            for emb, pr in factory(g).outcomes():
                dist[emb] += pr
            assert set(dist) == set(truth)
            u = Fraction(1, len(truth))
            worst = max(worst, max(abs(float(pr - u)) for pr in dist.values()))
    ok = worst <= 1e-12
    record(7, ok, f"{graphs} graphs, max |P - 1/emb(O,G)| = {worst:.3g} (tol 1e-12)")
    assert ok


def test_c8_reproducibility(tmp_path, monkeypatch):
    f = tmp_path / "g.edges"
    f.write_text(erdos_renyi(500, 0.012, 8).to_edge_list())
    argv = ["estimate", "--graph", str(f), "--pattern", "path:4", "--delta", "9", "--samples", "2000",
            "--seed", "123"]
    reports = []
    for threads in ("1", "8"):
        monkeypatch.setenv("SUBCOUNT_THREADS", threads)
        out = io.StringIO()
        assert run(argv, out, io.StringIO()) == 0
        reports.append(out.getvalue().encode())
    ok = reports[0] == reports[1]
    record(8, ok, f"threads 1 vs 8: {'identical' if ok else 'different'} ({len(reports[0])} bytes)")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v", "-s"]))
