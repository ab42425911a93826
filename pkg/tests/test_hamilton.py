import itertools
import json
import math
import random

import networkx as nx
import pytest

from pseudoham.constructions import build_furedi, build_generalized_quadrangle
from pseudoham.graphs import Graph
from pseudoham.hamilton import (RotationTrace, TwoFactor, count_hamilton_cycles,
                                enumerate_two_factors, f_histogram, formula_gap,
                                hamilton_cycle_oracle, is_hamilton_cycle,
                                oriented_count_identity, random_two_factor,
                                replay_trace, rotate_to_hamilton,
                                rotation_budget, ResourceCapExceeded)
from pseudoham.permanent import permanent_exact
from pseudoham.spectral import certify


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def petersen():
    return Graph(10, [(i, (i + 1) % 5) for i in range(5)]
                 + [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
                 + [(i, 5 + i) for i in range(5)])


def induced(g, verts):
    verts = sorted(verts)
    idx = {v: i for i, v in enumerate(verts)}
    keep = set(verts)
    edges = [(idx[u], idx[v]) for u, v in g.edges() if u in keep and v in keep]
    return Graph(len(verts), edges)


def random_graph(rng, n, p):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)
                     if rng.random() < p])


def factors_by_permutations(g):
    """Independent oracle: fixed-point-free permutations inside the adjacency
    support, collapsed to their cycle partitions."""
    n = g.n
    found = set()
    for perm in itertools.permutations(range(n)):
        if any(perm[i] == i or not g.has_edge(i, perm[i]) for i in range(n)):
            continue
        cycles = []
        seen = set()
        for v in range(n):
            if v in seen:
                continue
            cyc = []
            u = v
            while u not in seen:
                seen.add(u)
                cyc.append(u)
                u = perm[u]
            cycles.append(tuple(cyc))
        found.add(TwoFactor.from_cycles(n, cycles).cycles)
    return found


class TestTwoFactor:
    def test_canonical_form(self):
        tf = TwoFactor.from_cycles(6, [(4, 3, 5), (2, 0, 1)])
        assert tf.cycles == ((0, 1, 2), (3, 4, 5))
        # direction: second entry smaller than last
        tf = TwoFactor.from_cycles(4, [(0, 3, 2, 1)])
        assert tf.cycles == ((0, 1, 2, 3),)

    def test_counts_and_edges(self):
        tf = TwoFactor.from_cycles(7, [(0, 1, 2), (3, 4), (5, 6)])
        assert tf.s == 3
        assert tf.c == 1
        assert tf.edge_set() == {(0, 1), (1, 2), (0, 2), (3, 4), (5, 6)}

    def test_validate(self):
        g = cycle(4)
        TwoFactor.from_cycles(4, [(0, 1, 2, 3)]).validate(g)
        with pytest.raises(ValueError):
            TwoFactor.from_cycles(4, [(0, 2), (1, 3)]).validate(g)  # chords absent
        with pytest.raises(ValueError):
            TwoFactor.from_cycles(4, [(0, 1)]).validate(g)          # not spanning
        with pytest.raises(ValueError):
            TwoFactor.from_cycles(3, [(0, 1), (1, 2)]).validate(cycle(3))


class TestEnumeration:
    def test_c4(self):
        tfs = list(enumerate_two_factors(cycle(4)))
        assert len(tfs) == 3
        shapes = sorted(tuple(len(c) for c in t.cycles) for t in tfs)
        assert shapes == [(2, 2), (2, 2), (4,)]

    def test_k4(self):
        tfs = list(enumerate_two_factors(complete(4)))
        assert sum(1 for t in tfs if t.s == 1) == 3    # Hamilton cycles
        assert sum(1 for t in tfs if t.s == 2) == 3    # perfect matchings
        assert len(tfs) == 6

    def test_tree_empty(self):
        tree = Graph(5, [(0, 1), (0, 2), (1, 3), (1, 4)])
        assert list(enumerate_two_factors(tree)) == []

    def test_s_filter(self):
        only_ham = list(enumerate_two_factors(complete(5), s_filter=1))
        assert len(only_ham) == 12
        assert all(t.s == 1 for t in only_ham)

    def test_matches_permutation_oracle(self):
        rng = random.Random(2)
        for _ in range(15):
            g = random_graph(rng, rng.randint(4, 7), 0.6)
            ours = {t.cycles for t in enumerate_two_factors(g)}
            assert ours == factors_by_permutations(g)

    def test_all_validate(self):
        g = petersen()
        tfs = list(enumerate_two_factors(g))
        assert tfs
        for t in tfs:
            t.validate(g)

    def test_cap(self):
        with pytest.raises(ValueError):
            next(enumerate_two_factors(Graph(15, [(0, 1)])))


class TestOrientedIdentity:
    def test_named_cases(self):
        assert oriented_count_identity(cycle(4)) == (4, 4, True)
        assert oriented_count_identity(cycle(5)) == (2, 2, True)
        lhs, rhs, eq = oriented_count_identity(complete(4))
        assert (lhs, rhs, eq) == (9, 9, True)

    def test_random_graphs(self):
        rng = random.Random(5)
        for _ in range(25):
            g = random_graph(rng, rng.randint(1, 8), rng.uniform(0.3, 0.8))
            lhs, rhs, eq = oriented_count_identity(g)
            assert eq, (lhs, rhs)

    def test_construction_subgraphs(self):
        z = build_furedi(2, 5)
        for lo in (0, 2):
            sub = induced(z, range(lo, lo + 9))
            assert oriented_count_identity(sub)[2]
        gq = induced(build_generalized_quadrangle(2), range(12))
        assert oriented_count_identity(gq)[2]

    def test_cap(self):
        with pytest.raises(ValueError):
            oriented_count_identity(complete(13))


class TestHistogram:
    def test_c6(self):
        hist = f_histogram(cycle(6))
        assert hist["f"] == {1: 1, 3: 2}
        assert hist["sum_2c"] == 4      # = per(A)
        assert hist["sum_2s"] == 2 + 8 + 8

    def test_k4_totals(self):
        hist = f_histogram(complete(4))
        assert sum(hist["f"].values()) == 6
        assert hist["sum_2c"] == permanent_exact(complete(4).adjacency_matrix())

    def test_empty(self):
        assert f_histogram(Graph(0, []))["f"] == {}
        assert f_histogram(Graph(4, []))["f"] == {}

    def test_weighted_sum_matches_permanent(self):
        rng = random.Random(9)
        for _ in range(10):
            g = random_graph(rng, rng.randint(2, 8), 0.5)
            assert f_histogram(g)["sum_2c"] == permanent_exact(g.adjacency_matrix())


class TestRandomTwoFactor:
    def test_valid_and_seeded(self):
        g = build_generalized_quadrangle(2)
        a = random_two_factor(g, seed=1)
        b = random_two_factor(g, seed=1)
        c = random_two_factor(g, seed=2)
        a.validate(g)
        assert a.cycles == b.cycles
        assert any(random_two_factor(g, seed=s).cycles != a.cycles
                   for s in range(3, 8))
        assert c is not None

    def test_no_two_factor(self):
        star = Graph(4, [(0, 1), (0, 2), (0, 3)])
        assert random_two_factor(star) is None
        assert random_two_factor(Graph(3, [(0, 1), (1, 2)])) is None


class TestRotation:
    def test_already_hamilton(self):
        g = cycle(6)
        tf = TwoFactor.from_cycles(6, [tuple(range(6))])
        trace = rotate_to_hamilton(g, tf, certify(g), seed=0)
        assert isinstance(trace, RotationTrace)
        assert trace.replacements == ()
        assert replay_trace(g, trace)

    def test_disconnected(self):
        g = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
        tf = TwoFactor.from_cycles(6, [(0, 1, 2), (3, 4, 5)])
        res = rotate_to_hamilton(g, tf, certify(g), seed=0)
        assert res["ok"] is False
        assert "disconnected" in res["reason"]

    def test_gq_traces(self):
        g = build_generalized_quadrangle(2)
        cert = certify(g)
        for seed in range(30):
            tf = random_two_factor(g, seed=seed)
            trace = rotate_to_hamilton(g, tf, cert, seed=seed)
            assert isinstance(trace, RotationTrace), seed
            assert replay_trace(g, trace)
            assert is_hamilton_cycle(g, trace.result)
            # bipartite invariant: the working path always has odd edge count
            assert all(plen % 2 == 0 for _, plen in trace.checkpoints)

    def test_budget_formula(self):
        g = build_generalized_quadrangle(2)
        cert = certify(g)
        d, lam = 3.0, cert.lambda_
        want = 50 * math.ceil(math.log(30) / max(math.log(d / lam), 0.1))
        assert rotation_budget(g, cert) == want

    def test_honest_failure_on_nonhamiltonian(self):
        g = petersen()
        cert = certify(g)
        tf = random_two_factor(g, seed=0)
        res = rotate_to_hamilton(g, tf, cert, seed=0)
        assert not isinstance(res, RotationTrace)
        assert res["ok"] is False
        assert res["restarts"] == 20

    def test_trace_serializes(self):
        g = complete(6)
        tf = TwoFactor.from_cycles(6, [(0, 1, 2), (3, 4, 5)])
        trace = rotate_to_hamilton(g, tf, certify(g), seed=3)
        assert isinstance(trace, RotationTrace)
        blob = json.dumps(trace.to_dict())
        assert json.loads(blob)["result"] == list(trace.result)

    def test_cubic_hamiltonian_instances(self):
        done = 0
        for seed in range(40):
            if done >= 12:
                break
            n = random.Random(seed).choice([10, 14, 18, 22])
            G = nx.random_regular_graph(3, n, seed=seed)
            if not nx.is_connected(G):
                continue
            g = Graph(n, sorted(tuple(sorted(e)) for e in G.edges()))
            if count_hamilton_cycles(g) == 0:
                continue
            tf = random_two_factor(g, seed=seed)
            if tf is None:
                continue
            trace = rotate_to_hamilton(g, tf, certify(g), seed=seed)
            assert isinstance(trace, RotationTrace), seed
            assert replay_trace(g, trace)
            done += 1
        assert done >= 12


class TestCounting:
    def test_complete_graphs(self):
        for n in range(5, 11):
            assert count_hamilton_cycles(complete(n)) == math.factorial(n - 1) // 2

    def test_small_named(self):
        k33 = Graph(6, [(i, 3 + j) for i in range(3) for j in range(3)])
        assert count_hamilton_cycles(k33) == 6
        assert count_hamilton_cycles(petersen()) == 0
        assert count_hamilton_cycles(cycle(9)) == 1

    def test_heawood_census_value(self):
        # cross-checked against exhaustive simple-cycle enumeration: the
        # point-line graph of the 7-point plane has 24 spanning cycles
        lines = [frozenset(((i) % 7, (i + 1) % 7, (i + 3) % 7)) for i in range(7)]
        g = Graph(14, [(p, 7 + j) for j, line in enumerate(lines) for p in line])
        assert count_hamilton_cycles(g) == 24

    def test_oracle_agreement(self):
        rng = random.Random(1)
        for _ in range(25):
            g = random_graph(rng, rng.randint(3, 9), rng.uniform(0.3, 0.8))
            assert count_hamilton_cycles(g) == hamilton_cycle_oracle(g)

    def test_dp_bb_agree(self):
        rng = random.Random(6)
        for _ in range(5):
            g = random_graph(rng, rng.randint(15, 19), 0.25)
            assert count_hamilton_cycles(g, method="dp") == \
                count_hamilton_cycles(g, method="bb")

    def test_resource_caps(self):
        g = complete(18)
        with pytest.raises(ResourceCapExceeded) as exc:
            count_hamilton_cycles(g, method="dp", state_cap=50)
        assert exc.value.progress["method"] == "dp"
        with pytest.raises(ResourceCapExceeded) as exc:
            count_hamilton_cycles(g, method="bb", node_cap=10)
        assert exc.value.progress["method"] == "bb"
        # auto mode falls back to branch-and-bound when the DP cap trips
        small = complete(8)
        assert count_hamilton_cycles(small, state_cap=3) == \
            math.factorial(7) // 2

    def test_method_validation(self):
        with pytest.raises(ValueError):
            count_hamilton_cycles(complete(5), method="magic")
        with pytest.raises(ValueError):
            hamilton_cycle_oracle(complete(10))


class TestFormulaGap:
    def test_complete_graph_gap_shrinks(self):
        gaps = []
        for n in range(5, 11):
            h = math.factorial(n - 1) // 2
            gaps.append(formula_gap(complete(n), h)["gap_per_vertex"])
        assert all(gaps[i] > gaps[i + 1] for i in range(len(gaps) - 1))

    def test_upper_chain(self):
        g = complete(6)
        rep = formula_gap(g, count_hamilton_cycles(g))
        assert rep["upper_ok"]
        assert rep["log_h"] <= math.log(permanent_exact(g.adjacency_matrix()))

    def test_cycle_graph_reported_not_asserted(self):
        rep = formula_gap(cycle(8), 1)
        assert rep["h"] == 1
        assert rep["log_h"] == 0.0
        assert rep["gap"] == rep["log_formula"]
        assert rep["upper_ok"]

    def test_zero_count(self):
        rep = formula_gap(petersen(), 0)
        assert rep["log_h"] == -math.inf
        assert rep["upper_ok"]
