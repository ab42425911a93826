import random

import pytest

from pseudoham.algebra import (
    field,
    field_make,
    find_lps_parameters,
    is_prime,
    legendre,
    prime_power,
    quaternion_solutions,
    sqrt_minus_one,
    unit_subgroup,
)


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}
    for n in range(-3, 42):
        assert is_prime(n) == (n in primes)


def test_is_prime_larger():
    assert is_prime(10**9 + 7)
    assert not is_prime(10**9 + 8)


def test_prime_power():
    assert prime_power(8) == (2, 3)
    assert prime_power(9) == (3, 2)
    assert prime_power(13) == (13, 1)
    assert prime_power(12) is None
    assert prime_power(1) is None


class TestField:
    def test_sizes(self):
        assert len(list(field(5).elements())) == 5
        assert len(list(field(5).units())) == 4
        assert len(list(field(9).units())) == 8

    def test_not_prime_power(self):
        with pytest.raises(ValueError):
            field_make(6)

    def test_lex_least_modulus(self):
        # x^2 + 1 is the first monic irreducible over GF(3)
        assert field(9).modulus == (1, 0, 1)
        # x^2 + x + 1 over GF(2)
        assert field(4).modulus == (1, 1, 1)

    @pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 13, 16, 25, 27])
    def test_axioms_random_triples(self, q):
        f = field(q)
        rng = random.Random(q)
        els = list(f.elements())
        for _ in range(1000):
            a, b, c = (rng.choice(els) for _ in range(3))
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
            assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
            assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))

    @pytest.mark.parametrize("q", [2, 3, 4, 5, 9, 16, 27])
    def test_inverses(self, q):
        f = field(q)
        for a in f.units():
            assert f.mul(a, f.inv(a)) == 1
        with pytest.raises(ZeroDivisionError):
            f.inv(0)

    def test_generator_order(self):
        for q in (5, 7, 9, 16):
            f = field(q)
            powers = {f.pow(f.generator, e) for e in range(q - 1)}
            assert len(powers) == q - 1


class TestLegendre:
    def test_spec_values(self):
        assert legendre(5, 13) == -1
        assert legendre(13, 5) == -1
        assert legendre(1, 7) == 1
        assert legendre(0, 7) == 0

    def test_against_square_enumeration(self):
        for q in (3, 5, 7, 11, 13, 199):
            squares = {x * x % q for x in range(1, q)}
            for a in range(q):
                expected = 0 if a == 0 else (1 if a in squares else -1)
                assert legendre(a, q) == expected

    def test_rejects_bad_modulus(self):
        with pytest.raises(ValueError):
            legendre(3, 8)
        with pytest.raises(ValueError):
            legendre(3, 9)


class TestUnitSubgroup:
    def test_gf5_order2(self):
        assert sorted(unit_subgroup(field(5), 2)) == [1, 4]

    def test_gf7_order3(self):
        assert sorted(unit_subgroup(field(7), 3)) == [1, 2, 4]

    def test_closed_under_multiplication(self):
        for q, t in ((7, 3), (9, 2), (13, 4), (16, 5)):
            f = field(q)
            h = set(unit_subgroup(f, t))
            assert len(h) == t
            assert {f.mul(a, b) for a in h for b in h} == h

    def test_rejects_nondivisor(self):
        with pytest.raises(ValueError):
            unit_subgroup(field(7), 4)


class TestQuaternionSolutions:
    def test_counts(self):
        assert len(quaternion_solutions(5)) == 6
        assert len(quaternion_solutions(13)) == 14
        assert len(quaternion_solutions(17)) == 18

    def test_normalization(self):
        for s in quaternion_solutions(13):
            assert s.a > 0 and s.a % 2 == 1
            assert s.b % 2 == s.c % 2 == s.d % 2 == 0
            assert s.a**2 + s.b**2 + s.c**2 + s.d**2 == 13

    def test_closed_under_conjugation(self):
        sols = set(quaternion_solutions(13))
        assert {s.conjugate() for s in sols} == sols

    def test_rejects_3_mod_4(self):
        with pytest.raises(ValueError):
            quaternion_solutions(7)


def test_sqrt_minus_one():
    for q in (5, 13, 17, 29):
        i = sqrt_minus_one(q)
        assert i * i % q == q - 1
        # least root
        assert all(j * j % q != q - 1 for j in range(i))


class TestParameterSearch:
    def test_includes_5_13(self):
        # with k=2, delta=0.05, a wide window around 5^1.05 ~ 5.4 catches 13
        pairs = find_lps_parameters(k=2, delta=0.05, epsilon=1.5, search_limit=50)
        assert (5, 13) in pairs

    def test_zero_width_window_empty(self):
        assert find_lps_parameters(k=2, delta=0.1, epsilon=0.0, search_limit=100) == []

    def test_returned_pairs_revalidate(self):
        for p, q in find_lps_parameters(k=2, delta=0.1, epsilon=1.0, search_limit=120):
            assert is_prime(p) and is_prime(q)
            assert p % 4 == 1 and q % 4 == 1
            assert legendre(p, q) == -1
