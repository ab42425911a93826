import dataclasses
import math
import random

import numpy as np
import pytest

from pseudoham.algebra import legendre
from pseudoham.constructions import build_furedi, build_generalized_quadrangle
from pseudoham.graphs import Graph
from pseudoham.spectral import (MAX_DENSE_N, certify, spectrum,
                                verify_corollaries, verify_mixing_bipartite,
                                verify_mixing_irregular)


def cycle(n, bipartition=False):
    edges = [(i, (i + 1) % n) for i in range(n)]
    part = [i % 2 for i in range(n)] if bipartition else None
    return Graph(n, edges, bipartition=part)


def complete(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return Graph(10, outer + inner + spokes)


def heawood():
    # point-line incidence of the 7-point projective plane, lines {i, i+1, i+3}
    lines = [frozenset(((i) % 7, (i + 1) % 7, (i + 3) % 7)) for i in range(7)]
    edges = [(p, 7 + j) for j, line in enumerate(lines) for p in line]
    return Graph(14, edges, bipartition=[0] * 7 + [1] * 7)


def paley(q):
    assert legendre(q - 1, q) == 1   # -1 a square, so the relation is symmetric
    edges = [(i, j) for i in range(q) for j in range(i + 1, q)
             if legendre(j - i, q) == 1]
    return Graph(q, edges)


def rounded(vals, places=6):
    return sorted(round(v, places) for v in vals)


class TestSpectrum:
    def test_small_exact(self):
        assert rounded(spectrum(complete(4))) == [-1, -1, -1, 3]
        assert rounded(spectrum(cycle(4, bipartition=True))) == [-2, 0, 0, 2]
        pet = rounded(spectrum(petersen()))
        assert pet == [-2] * 4 + [1] * 5 + [3]

    def test_bipartite_route_matches_dense(self):
        rng = random.Random(5)
        for _ in range(10):
            nx_, ny_ = rng.randint(2, 7), rng.randint(2, 7)
            edges = [(i, nx_ + j) for i in range(nx_) for j in range(ny_)
                     if rng.random() < 0.5]
            used = {v for e in edges for v in e}
            if len(used) < nx_ + ny_:
                continue
            g_flat = Graph(nx_ + ny_, edges)
            g_bip = Graph(nx_ + ny_, edges, bipartition=[0] * nx_ + [1] * ny_)
            assert rounded(spectrum(g_flat)) == rounded(spectrum(g_bip))

    def test_unequal_sides_pad_zeros(self):
        star = Graph(5, [(0, i) for i in range(1, 5)],
                     bipartition=[0, 1, 1, 1, 1])
        assert rounded(spectrum(star)) == [-2, 0, 0, 0, 2]

    def test_size_cap(self):
        g = Graph(MAX_DENSE_N + 1, [(0, 1)])
        with pytest.raises(ValueError):
            spectrum(g)

    def test_trace_identities(self):
        rng = random.Random(11)
        for _ in range(5):
            n = rng.randint(5, 40)
            edges = [(i, j) for i in range(n) for j in range(i + 1, n)
                     if rng.random() < 0.2]
            vals = spectrum(Graph(n, edges))
            assert abs(sum(vals)) < 1e-6
            assert abs(sum(v * v for v in vals) - 2 * len(edges)) < 1e-6


class TestCertify:
    def test_gq_bipartite_mode(self):
        g = build_generalized_quadrangle(2)
        cert = certify(g)
        assert cert.mode == "bipartite-regular"
        assert cert.lambda_ == pytest.approx(2.0)            # sqrt(2q) at q=2
        assert cert.lambda_bar == pytest.approx(2.0)         # regular: R=0
        assert cert.R == 0.0
        assert cert.cond1_pass

    def test_irregular_mode(self):
        cert = certify(petersen())
        assert cert.mode == "irregular"
        assert cert.lambda_ == pytest.approx(2.0)
        assert cert.lambda_bar == pytest.approx(2.0)

    def test_lambda_bar_invariant(self):
        cert = certify(build_furedi(2, 5))
        assert cert.lambda_bar == pytest.approx((10 * cert.R + 1) * cert.lambda_)
        spread = cert.profile.Delta - cert.profile.delta
        assert cert.R == pytest.approx(spread / cert.lambda_)

    def test_mode_override_uses_full_tail(self):
        # forced irregular mode on a bipartite graph picks up -lambda_n = d
        g = build_generalized_quadrangle(2)
        cert = certify(g, mode="irregular")
        assert cert.lambda_ == pytest.approx(3.0)

    def test_bipartite_mode_requires_structure(self):
        with pytest.raises(ValueError):
            certify(petersen(), mode="bipartite-regular")
        star = Graph(5, [(0, i) for i in range(1, 5)],
                     bipartition=[0, 1, 1, 1, 1])
        with pytest.raises(ValueError):
            certify(star, mode="bipartite-regular")
        with pytest.raises(ValueError):
            certify(petersen(), mode="other")

    def test_to_dict_keys(self):
        d = certify(heawood()).to_dict()
        for key in ("n", "delta", "dbar", "Delta", "lambda", "lambda_bar", "R",
                    "cond1_ratio", "cond2_ratio", "cond3_ratio", "mode"):
            assert key in d
        assert d["lambda"] == pytest.approx(math.sqrt(2))


class TestMixingIrregular:
    def test_zero_violations_with_certified_lambda(self):
        g = build_furedi(2, 5)
        cert = certify(g)
        rep = verify_mixing_irregular(g, cert.lambda_bar, samples=3000, seed=0)
        assert rep["ok"]
        assert rep["violations"] == 0
        assert rep["full_pair_discrepancy"] <= 1e-9
        assert rep["K"] == pytest.approx(
            sum((g.degree(v) - 2 * g.m / g.n) ** 2 for v in range(g.n)))

    def test_regular_graph_emL(self):
        # plain expander mixing lemma case: lambda_bar = lambda
        g = paley(13)
        cert = certify(g)
        rep = verify_mixing_irregular(g, cert.lambda_bar, samples=2000, seed=1)
        assert rep["ok"]

    def test_detects_bogus_bound(self):
        rep = verify_mixing_irregular(complete(6), 0.01, samples=500, seed=2)
        assert rep["violations"] > 0
        assert not rep["ok"]

    def test_deterministic(self):
        g = petersen()
        a = verify_mixing_irregular(g, 2.0, samples=300, seed=7)
        b = verify_mixing_irregular(g, 2.0, samples=300, seed=7)
        assert a == b


class TestMixingBipartite:
    def test_gq_zero_violations(self):
        for q in (2, 3):
            g = build_generalized_quadrangle(q)
            cert = certify(g)
            rep = verify_mixing_bipartite(g, cert.lambda_, samples=2000, seed=q)
            assert rep["ok"], rep["worst"]
            assert rep["violations"] == 0

    def test_heawood(self):
        rep = verify_mixing_bipartite(heawood(), math.sqrt(2), samples=2000, seed=0)
        assert rep["ok"]

    def test_requires_regular_bipartite(self):
        with pytest.raises(ValueError):
            verify_mixing_bipartite(petersen(), 2.0)
        star = Graph(5, [(0, i) for i in range(1, 5)],
                     bipartition=[0, 1, 1, 1, 1])
        with pytest.raises(ValueError):
            verify_mixing_bipartite(star, 2.0)

    def test_detects_bogus_bound(self):
        rep = verify_mixing_bipartite(heawood(), 0.01, samples=500, seed=3)
        assert rep["violations"] > 0


class TestCorollaries:
    def test_furedi_irregular(self):
        g = build_furedi(2, 5)
        cert = certify(g)
        rep = verify_corollaries(g, cert, samples=400, seed=0)
        assert rep["ok"]
        cors = rep["corollaries"]
        assert cors["edge_count_within_set"]["status"] == "pass"
        assert cors["sparse_set_edges"]["status"] == "pass"
        # 2*lambda_bar = 25.1 >> d = 4.67 at n=12
        assert cors["small_set_expansion"]["status"] == "vacuous"
        assert cors["connected"]["status"] == "pass"

    def test_paley_expansion_windows_open(self):
        # d=50, lambda=(1+sqrt(101))/2: both expansion corollaries evaluable
        g = paley(101)
        cert = certify(g)
        assert 2 * cert.lambda_bar < 50
        rep = verify_corollaries(g, cert, samples=300, seed=1)
        cors = rep["corollaries"]
        assert cors["small_set_expansion"]["status"] == "pass"
        assert cors["small_set_expansion"]["checked"] == 300
        assert cors["large_set_expansion"]["status"] == "pass"
        assert rep["ok"]

    def test_gq_bipartite(self):
        g = build_generalized_quadrangle(2)
        rep = verify_corollaries(g, certify(g), samples=400, seed=2)
        cors = rep["corollaries"]
        assert rep["ok"]
        assert cors["small_set_expansion"]["status"] == "vacuous"
        assert "note" in cors["small_set_expansion"]
        assert cors["large_set_expansion"]["status"] == "pass"
        assert cors["nonadjacent_product_bound"]["status"] == "pass"

    def test_heawood_bipartite_small_sets(self):
        # 2*sqrt(2) < 3, so the small-set expansion window is open even here
        g = heawood()
        rep = verify_corollaries(g, certify(g), samples=300, seed=3)
        assert rep["corollaries"]["small_set_expansion"]["status"] == "pass"
        assert rep["ok"]

    def test_bogus_certificate_caught(self):
        g = build_furedi(2, 5)
        cert = dataclasses.replace(certify(g), lambda_bar=0.05)
        rep = verify_corollaries(g, cert, samples=200, seed=4)
        bad = rep["corollaries"]["edge_count_within_set"]
        assert bad["status"] == "fail"
        assert bad["failures"] > 0
        assert bad["witness"] is not None
        assert not rep["ok"]

    def test_deterministic(self):
        g = heawood()
        cert = certify(g)
        a = verify_corollaries(g, cert, samples=150, seed=9)
        b = verify_corollaries(g, cert, samples=150, seed=9)
        assert a == b


def test_disconnected_graph_reported():
    g = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    rep = verify_corollaries(g, certify(g), samples=50, seed=0)
    assert rep["corollaries"]["connected"]["status"] == "fail"
