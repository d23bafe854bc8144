"""Acceptance suite: one test per criterion, one printed verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s``.  Several criteria are
Monte Carlo reproductions at desk scale and take a few minutes combined;
every tolerance is pinned here, nothing is calibrated at runtime.
"""

import itertools
import json
import math
from fractions import Fraction

from oracle_utils import (brute_graph_isomorphic, brute_rooted_isomorphic,
                          enumerate_labeled_connected_graphs,
                          exact_ball_survival, exact_largest_component_law,
                          exact_reach_size_law, max_edge_disjoint_packing,
                          random_connected_graph, random_graph, wl_signature)
from percolab import canon
from percolab.cli import main as cli_main
from percolab.expansion import cheeger_exact, cheeger_spectral_bounds, edge_disjoint_paths
from percolab.generators import complete, cycle, random_regular, regular_tree_ball
from percolab.graphs import Graph, bfs_distances, metric_d
from percolab.percolation import (PercConfig, ball_survival, open_edge_mask,
                                  reach_set_size, threshold_scan,
                                  tree_survival_oracle)
from percolab.rng import SplitMix64


def report(criterion, ok, detail):
    print(f"[acceptance {criterion}] {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {criterion}: {detail}"


# --- criterion 1 -------------------------------------------------------------


class _ClassRecord:
    __slots__ = ("adj", "root_certs", "key")

    def __init__(self, adj):
        self.adj = adj
        self.root_certs = [canon.certificate(adj, r) for r in range(len(adj))]
        self.key = min(self.root_certs)


def _register(levels, n, adj, violations, context):
    """Dedupe a candidate into its class; brute-verify any certificate match."""
    rec = _ClassRecord(adj)
    for existing in levels[n].get(rec.key, []):
        if sorted(existing.root_certs) == sorted(rec.root_certs):
            r = rec.root_certs.index(rec.key)
            s = existing.root_certs.index(existing.key)
            if not brute_rooted_isomorphic(adj, r, existing.adj, s):
                violations.append(f"{context}: certificate merge without isomorphism")
            return existing
        violations.append(f"{context}: min-cert collision with mismatched profiles")
    levels[n].setdefault(rec.key, []).append(rec)
    return rec


def test_criterion_1_canonicalization_oracle():
    max_degree = 4
    violations = []
    levels = {n: {} for n in range(1, 9)}

    # n <= 6: every labeled connected graph under the degree bound
    labeled_counts = {}
    for n in range(1, 7):
        cnt = 0
        for adj in enumerate_labeled_connected_graphs(n, max_degree):
            cnt += 1
            _register(levels, n, adj, violations, f"n={n} labeled")
        labeled_counts[n] = cnt

    # n = 7, 8: closure under adding one vertex (every connected graph has a
    # removable non-cut vertex, so this reaches every class)
    for n in (7, 8):
        parents = [rec for group in levels[n - 1].values() for rec in group]
        for parent in parents:
            base = parent.adj
            eligible = [v for v in range(n - 1) if len(base[v]) < max_degree]
            for size in range(1, min(4, n - 1) + 1):
                for subset in itertools.combinations(eligible, size):
                    adj = [list(a) for a in base] + [list(subset)]
                    for v in subset:
                        adj[v].append(n - 1)
                    adj = [sorted(a) for a in adj]
                    _register(levels, n, adj, violations, f"n={n} extension")

    classes = [rec for n in levels for group in levels[n].values() for rec in group]

    # within-graph: every root pair, certificate equality vs brute force
    pair_checks = 0
    for rec in classes:
        n = len(rec.adj)
        for r in range(n):
            for s in range(r + 1, n):
                pair_checks += 1
                same_cert = rec.root_certs[r] == rec.root_certs[s]
                same_iso = brute_rooted_isomorphic(rec.adj, r, rec.adj, s)
                if same_cert != same_iso:
                    violations.append(
                        f"n={n} roots {r},{s}: cert {'==' if same_cert else '!='} "
                        f"but brute {'iso' if same_iso else 'non-iso'}")

    # cross-class: WL-bucketed unrooted distinctness
    buckets = {}
    for idx, rec in enumerate(classes):
        m = sum(len(a) for a in rec.adj) // 2
        key = (len(rec.adj), m, tuple(sorted(len(a) for a in rec.adj)),
               wl_signature(rec.adj))
        buckets.setdefault(key, []).append(idx)
    cross_checks = 0
    for group in buckets.values():
        for i, j in itertools.combinations(group, 2):
            cross_checks += 1
            if brute_graph_isomorphic(classes[i].adj, classes[j].adj):
                violations.append("two registered classes are isomorphic")

    # rooted certificates must never recur across distinct unlabeled classes
    seen_rooted = {}
    for idx, rec in enumerate(classes):
        for cert in set(rec.root_certs):
            if cert in seen_rooted and seen_rooted[cert] != idx:
                violations.append("rooted certificate shared across classes")
            seen_rooted[cert] = idx

    rooted_classes = sum(len(set(rec.root_certs)) for rec in classes)
    report(1, not violations,
           f"{len(classes)} unlabeled classes, {rooted_classes} rooted classes, "
           f"{labeled_counts} labeled graphs at n<=6, {pair_checks} root pairs, "
           f"{cross_checks} cross-class brute checks, "
           f"violations={violations[:3] if violations else 0}")


# --- criterion 2 -------------------------------------------------------------


def test_criterion_2_metric_ultrametric():
    rng = SplitMix64(2025)
    pool = []
    for _ in range(150):
        n = 3 + rng.randrange(28)
        pool.append((random_connected_graph(rng, n, rng.randrange(n + 1)), 0))
    pool = [(g, rng.randrange(g.n)) for g, _ in pool]
    s_max = 62  # > 2 * 30: agreement that far forces full isomorphism here
    memo = {}

    def dist(i, j):
        if i > j:
            i, j = j, i
        if (i, j) not in memo:
            gi, oi = pool[i]
            gj, oj = pool[j]
            memo[(i, j)] = metric_d(gi, oi, gj, oj, s_max)
        return memo[(i, j)]

    violations = 0
    truncations = 0
    for _ in range(10000):
        i, j, k = (rng.randrange(len(pool)) for _ in range(3))
        dij, djk, dik = dist(i, j), dist(j, k), dist(i, k)
        if dij.truncated or djk.truncated or dik.truncated:
            truncations += 1
        if dik.d > max(dij.d, djk.d):
            violations += 1
    report(2, violations == 0 and truncations == 0,
           f"10000 triples over {len(pool)} rooted graphs, "
           f"{len(memo)} distinct pairs, violations={violations}, "
           f"truncations={truncations}")


# --- criterion 3 -------------------------------------------------------------


def test_criterion_3_cheeger_sandwich():
    rng = SplitMix64(33)
    violations = 0
    for _ in range(200):
        n = 4 + rng.randrange(17)
        g = random_connected_graph(rng, n, rng.randrange(2 * n))
        exact = cheeger_exact(g)
        spec = cheeger_spectral_bounds(g)
        if not (spec.lower <= float(exact.lower) <= spec.upper):
            violations += 1
    c6 = cheeger_exact(cycle(6)).lower
    k4 = cheeger_exact(complete(4)).lower
    exact_ok = (c6 == Fraction(2, 3) and k4 == 2)
    report(3, violations == 0 and exact_ok,
           f"200 sandwiches, violations={violations}, "
           f"h(C6)={c6}, h(K4)={k4}")


# --- criterion 4 -------------------------------------------------------------


def test_criterion_4_menger_duality():
    rng = SplitMix64(44)
    violations = 0
    packing_checks = 0
    for _ in range(200):
        n = 5 + rng.randrange(36)
        g = random_graph(rng, n, 4 + rng.randrange(2 * n))
        k1 = 1 + rng.randrange(3)
        k2 = 1 + rng.randrange(3)
        verts = list(range(n))
        rng.shuffle(verts)
        a1, a2 = set(verts[:k1]), set(verts[k1:k1 + k2])
        r = edge_disjoint_paths(g, a1, a2)
        if r.value != len(r.min_cut):
            violations += 1
            continue
        cut = set(r.min_cut)
        trimmed = Graph.from_edges(n, [e for e in g.edges if e not in cut])
        reach = set(bfs_distances(trimmed, next(iter(a1))))
        for v in a1:
            reach |= set(bfs_distances(trimmed, v))
        if reach & a2:
            violations += 1
    for _ in range(60):
        n = 4 + rng.randrange(5)
        g = random_graph(rng, n, 4 + rng.randrange(9))
        if g.num_edges > 12 or g.num_edges == 0:
            continue
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v:
            continue
        packing_checks += 1
        flow = edge_disjoint_paths(g, {u}, {v}).value
        if flow != max_edge_disjoint_packing(g, {u}, {v}):
            violations += 1
    report(4, violations == 0 and packing_checks >= 40,
           f"200 duality checks, {packing_checks} exhaustive packings, "
           f"violations={violations}")


# --- criterion 5 -------------------------------------------------------------


def test_criterion_5_percolation_vs_enumeration():
    rng = SplitMix64(55)
    trials = 100000
    ps = [0.3, 0.5, 0.7]
    graphs = []
    while len(graphs) < 20:
        n = 4 + rng.randrange(5)
        g = random_graph(rng, n, 4 + rng.randrange(9))
        if 1 <= g.num_edges <= 12:
            graphs.append(g)
    checks = 0
    within = 0
    for gi, g in enumerate(graphs):
        p = ps[gi % 3]
        cfg = PercConfig(p=p, seed=500 + gi, trials=trials)
        law = exact_largest_component_law(g, p)
        thresholds = sorted({2, math.ceil(g.n / 2), g.n})
        mc_counts = {k: 0 for k in thresholds}
        edges = g.edges
        eu = [e[0] for e in edges]
        ev = [e[1] for e in edges]
        from percolab.percolation import _largest_component
        import numpy as np
        for t in range(trials):
            open_arr = open_edge_mask(g, cfg, t)
            largest = _largest_component(g.n, eu, ev, np.flatnonzero(open_arr).tolist())
            for k in thresholds:
                if largest >= k:
                    mc_counts[k] += 1
        for k in thresholds:
            exact = sum(w for size, w in law.items() if size >= k)
            se = math.sqrt(max(exact * (1 - exact), 0.0) / trials)
            checks += 1
            if abs(mc_counts[k] / trials - exact) <= 3 * se + 1e-9:
                within += 1
        exact_surv = exact_ball_survival(g, 0, 2, p)
        est = ball_survival(g, 0, 2, cfg)
        se = math.sqrt(max(exact_surv * (1 - exact_surv), 0.0) / trials)
        checks += 1
        if abs(est.point_estimate - exact_surv) <= 3 * se + 1e-9:
            within += 1
        reach_law = exact_reach_size_law(g, 0, 2, p)
        reach = reach_set_size(g, 0, 2, cfg)
        for size, exact in sorted(reach_law.items()):
            if exact < 1e-3:
                continue
            se = math.sqrt(exact * (1 - exact) / trials)
            checks += 1
            if abs(reach.size_counts.get(size, 0) / trials - exact) <= 3 * se:
                within += 1
    frac = within / checks
    report(5, frac >= 0.95,
           f"{checks} checks on 20 graphs at 1e5 trials, within-3sigma "
           f"fraction {frac:.4f}")


# --- criterion 6 -------------------------------------------------------------


def test_criterion_6_tree_oracle_agreement():
    assert tree_survival_oracle(3, 0.5, 1) == 0.875
    trials = 100000
    checks = []
    for p in (0.3, 0.5, 0.7):
        for radius in range(1, 6):
            ball = regular_tree_ball(3, radius)
            est = ball_survival(ball, 0, radius,
                                PercConfig(p=p, seed=int(p * 100) * 100 + radius,
                                           trials=trials))
            exact = tree_survival_oracle(3, p, radius)
            se = math.sqrt(max(exact * (1 - exact), 1e-12) / trials)
            checks.append(abs(est.point_estimate - exact) <= 3 * se)
    ok = all(checks)
    report(6, ok,
           f"15 (p, R) combinations at 1e5 trials, all within 3 sigma: {ok}; "
           f"oracle(3, 1/2, 1) = 0.875 exactly")


# --- criterion 7 -------------------------------------------------------------


def test_criterion_7_locality_reproduction():
    grid = [i / 50 for i in range(15, 36)]  # 0.30..0.70 step 0.02
    alpha = 0.05
    trials = 100
    windows = {}
    probs_by_n = {}
    for idx, n in enumerate((1000, 10000)):
        g = random_regular(n, 3, seed=900 + idx)
        table = threshold_scan(g, grid, alpha, seed=700 + idx, trials=trials)
        probs = [r.prob for r in table.rows]
        probs_by_n[n] = probs
        lo = max((p for p, pr in zip(grid, probs) if pr <= 0.1), default=None)
        hi = min((p for p, pr in zip(grid, probs) if pr >= 0.9), default=None)
        windows[n] = (lo, hi)
    p40 = probs_by_n[10000][grid.index(0.4)]
    p60 = probs_by_n[10000][grid.index(0.6)]
    w_small = windows[1000][1] - windows[1000][0]
    w_large = windows[10000][1] - windows[10000][0]
    ok = p40 <= 0.10 and p60 >= 0.90 and w_large < w_small
    report(7, ok,
           f"n=1e4: prob(0.40)={p40:.2f} <= 0.10, prob(0.60)={p60:.2f} >= 0.90; "
           f"transition window {w_small:.2f} (n=1e3) -> {w_large:.2f} (n=1e4)")


# --- criterion 8 -------------------------------------------------------------


def test_criterion_8_constancy_demonstration(tmp_path):
    out = tmp_path / "constancy.json"
    code = cli_main(["verify-constancy", "--n", "100000", "--bridged-n", "10000",
                     "--seed", "1", "--format", "json", "--output", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    pos = data["positive"]
    neg = data["negative"]
    masses = neg["top_two_masses"]
    ok = (pos["top_class_mass"] >= 0.99
          and len(masses) == 2
          and all(0.45 <= m <= 0.55 for m in masses)
          and neg["cheeger_upper_exact"] == "1/5000"
          and neg["bridge_flow"] == 1
          and neg["pc_regular_half"] == "1/3"
          and neg["pc_cycle_half"] == "1")
    report(8, ok,
           f"positive mass {pos['top_class_mass']:.5f} >= 0.99; bridged masses "
           f"{[round(m, 4) for m in masses]} in [0.45, 0.55]; cheeger upper "
           f"{neg['cheeger_upper_exact']} = 2/n; bridge flow {neg['bridge_flow']}; "
           f"half p_c {neg['pc_cycle_half']} vs {neg['pc_regular_half']}")


# --- criterion 9 -------------------------------------------------------------


GOLDEN_GEN_C6 = "n 6\n0 1\n0 5\n1 2\n2 3\n3 4\n4 5\n"

GOLDEN_SCAN_CSV = """p,alpha,prob,ci_low,ci_high,trials,seed
0.200000,0.500000,0.040000,0.000000,0.116815,25,13
0.600000,0.500000,0.880000,0.752617,1.000000,25,13
0.900000,0.500000,1.000000,1.000000,1.000000,25,13
"""

GOLDEN_SURVIVAL_JSON = """{
  "ci_high": 0.7601995955088746,
  "ci_low": 0.7218004044911254,
  "half_width": 0.019199595508874606,
  "p": 0.5,
  "point_estimate": 0.741,
  "radius": 2,
  "trials": 2000
}
"""


def test_criterion_9_cli_determinism(tmp_path, capsys):
    def run_bytes(*argv):
        path = tmp_path / f"out{run_bytes.counter}"
        run_bytes.counter += 1
        code = cli_main(list(argv) + ["--output", str(path)])
        assert code == 0
        return path.read_bytes()
    run_bytes.counter = 0

    graph_file = tmp_path / "rr12.el"
    cli_main(["gen", "--family", "random_regular", "--n", "12", "--d", "3",
              "--seed", "4", "--output", str(graph_file)])

    cases = [
        ("gen", "--family", "cycle", "--n", "6"),
        ("gen", "--family", "random_regular", "--n", "12", "--d", "3", "--seed", "4"),
        ("gen", "--family", "bridged_pair", "--n", "20", "--seed", "7"),
        ("scan", "--file", str(graph_file), "--p-grid", "0.2,0.6,0.9",
         "--alpha", "0.5", "--trials", "25", "--seed", "13"),
        ("survival", "--tree-d", "3", "--radius", "2", "--p", "0.5",
         "--trials", "2000", "--seed", "21"),
        ("verify-locality", "--d", "3", "--n-list", "300", "--p-grid",
         "0.2,0.8", "--trials", "20", "--seed", "5"),
        ("verify-constancy", "--n", "200", "--bridged-n", "60", "--seed", "3",
         "--format", "json"),
    ]
    mismatches = 0
    for case in cases:
        if run_bytes(*case) != run_bytes(*case):
            mismatches += 1
    capsys.readouterr()

    golden_ok = (
        run_bytes("gen", "--family", "cycle", "--n", "6") == GOLDEN_GEN_C6.encode()
        and run_bytes("scan", "--file", str(graph_file), "--p-grid", "0.2,0.6,0.9",
                      "--alpha", "0.5", "--trials", "25", "--seed", "13")
        == GOLDEN_SCAN_CSV.encode()
        and run_bytes("survival", "--tree-d", "3", "--radius", "2", "--p", "0.5",
                      "--trials", "2000", "--seed", "21")
        == GOLDEN_SURVIVAL_JSON.encode()
    )
    capsys.readouterr()
    report(9, mismatches == 0 and golden_ok,
           f"{len(cases)} commands byte-identical across double runs; "
           f"3 pinned goldens matched: {golden_ok}")
