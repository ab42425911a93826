"""Finite-field arithmetic and small number-theoretic helpers.

GF(p^k) elements are integers 0..q-1 encoding polynomial coefficients in base
p (least significant digit = constant term).  Multiplication runs through
exp/log tables built from a fixed primitive element, so fields are practical
up to q around 2^16, far beyond what the constructions need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3 * 10^24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_power(q: int):
    """Return (p, k) with q = p^k, p prime, or None."""
    if q < 2:
        return None
    for k in range(1, q.bit_length() + 1):
        p = round(q ** (1.0 / k))
        for cand in (p - 1, p, p + 1):
            if cand >= 2 and cand ** k == q and is_prime(cand):
                return cand, k
    return None


def legendre(a: int, q: int) -> int:
    """Legendre symbol (a/q) via Euler's criterion; q must be an odd prime."""
    if q < 3 or q % 2 == 0 or not is_prime(q):
        raise ValueError(f"modulus {q} is not an odd prime")
    a %= q
    if a == 0:
        return 0
    e = pow(a, (q - 1) // 2, q)
    return 1 if e == 1 else -1


# -- GF(p^k) ----------------------------------------------------------------


def _poly_mul_mod(a, b, modulus, p):
    """Multiply coefficient tuples mod (modulus, p); modulus monic."""
    deg_m = len(modulus) - 1
    res = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                res[i + j] = (res[i + j] + ca * cb) % p
    # reduce
    for i in range(len(res) - 1, deg_m - 1, -1):
        c = res[i]
        if c:
            res[i] = 0
            for j in range(deg_m):
                res[i - deg_m + j] = (res[i - deg_m + j] - c * modulus[j]) % p
    return tuple(res[:deg_m])


def _find_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree k over GF(p).

    Coefficient vectors (c_{k-1}, ..., c_0) are scanned in increasing order of
    the integer sum(c_i p^i); a candidate is irreducible iff no monic
    polynomial of degree 1..k//2 divides it.
    """
    if k == 1:
        return (0, 1)

    def divides(div, poly):
        # long division remainder == 0 ?
        rem = list(poly)
        dd = len(div) - 1
        inv_lead = pow(div[-1], p - 2, p)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i] * inv_lead % p
            if c:
                for j in range(dd + 1):
                    rem[i - dd + j] = (rem[i - dd + j] - c * div[j]) % p
        return not any(rem)

    low_divisors = []
    for d in range(1, k // 2 + 1):
        for code in range(p ** d):
            coeffs = []
            c = code
            for _ in range(d):
                coeffs.append(c % p)
                c //= p
            low_divisors.append(tuple(coeffs) + (1,))
    for code in range(p ** k):
        coeffs = []
        c = code
        for _ in range(k):
            coeffs.append(c % p)
            c //= p
        cand = tuple(coeffs) + (1,)
        if cand[0] == 0:
            continue  # divisible by x
        if not any(divides(div, cand) for div in low_divisors):
            return cand
    raise AssertionError("no irreducible polynomial found")  # unreachable


class GF:
    """The finite field with q = p^k elements.

    Elements are ints; arithmetic is exposed as methods.  ``add``/``mul`` etc.
    accept any ints already in range 0..q-1.
    """

    def __init__(self, q: int):
        pk = prime_power(q)
        if pk is None:
            raise ValueError(f"{q} is not a prime power")
        self.q = q
        self.p, self.k = pk
        self.modulus = _find_irreducible(self.p, self.k)
        self._build_tables()

    def _decode(self, a: int) -> tuple[int, ...]:
        coeffs = []
        for _ in range(self.k):
            coeffs.append(a % self.p)
            a //= self.p
        return tuple(coeffs)

    def _encode(self, coeffs) -> int:
        val = 0
        for c in reversed(coeffs):
            val = val * self.p + c
        return val

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        if q == 2:
            self.generator = 1
            self._exp = [1, 1]
            self._log = [0, 0]
            return
        # find a primitive element by trial
        order = q - 1
        factors = set()
        t = order
        f = 2
        while f * f <= t:
            while t % f == 0:
                factors.add(f)
                t //= f
            f += 1
        if t > 1:
            factors.add(t)
        for gen in range(2, q):
            gc = self._decode(gen)
            ok = True
            for f in factors:
                if self._pow_raw(gc, order // f) == self._one_coeffs():
                    ok = False
                    break
            if ok:
                break
        else:
            raise AssertionError("no primitive element found")
        self.generator = gen
        exp = [0] * (2 * order)
        log = [0] * q
        cur = self._one_coeffs()
        gcoef = self._decode(gen)
        for i in range(order):
            val = self._encode(cur)
            exp[i] = val
            exp[i + order] = val
            log[val] = i
            cur = _poly_mul_mod(cur, gcoef, self.modulus, p)
        self._exp = exp
        self._log = log

    def _one_coeffs(self):
        return (1,) + (0,) * (self.k - 1)

    def _pow_raw(self, coeffs, e):
        result = self._one_coeffs()
        base = coeffs
        while e:
            if e & 1:
                result = _poly_mul_mod(result, base, self.modulus, self.p)
            base = _poly_mul_mod(base, base, self.modulus, self.p)
            e >>= 1
        return result

    # element arithmetic ----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        p = self.p
        val, mult = 0, 1
        for _ in range(self.k):
            val += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return val

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        p = self.p
        val, mult = 0, 1
        for _ in range(self.k):
            val += ((-a) % p) * mult
            a //= p
            mult *= p
        return val

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("inverse of 0")
            return 0 if e else 1
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    return GF(q)


def field_make(q: int) -> GF:
    """Alias for :func:`field`."""
    return field(q)


def unit_subgroup(f: GF, t: int) -> list[int]:
    """The unique subgroup of GF(q)* of order t (requires t | q-1), sorted."""
    if t < 1 or (f.q - 1) % t != 0:
        raise ValueError(f"t={t} does not divide q-1={f.q - 1}")
    step = (f.q - 1) // t
    h = f.pow(f.generator, step)
    members = {1}
    cur = h
    while cur != 1:
        members.add(cur)
        cur = f.mul(cur, h)
    if len(members) != t:
        raise AssertionError("subgroup order mismatch")
    return sorted(members)


# -- quaternion solutions and Ramanujan-graph parameters --------------------


@dataclass(frozen=True)
class QuaternionSolution:
    """Integer quadruple with a^2+b^2+c^2+d^2 = p, a odd positive, b,c,d even."""

    a: int
    b: int
    c: int
    d: int

    def conjugate(self) -> "QuaternionSolution":
        return QuaternionSolution(self.a, -self.b, -self.c, -self.d)


def quaternion_solutions(p: int) -> list[QuaternionSolution]:
    """All representations of p as above; there are exactly p+1 for p = 1 mod 4."""
    if p % 4 != 1 or not is_prime(p):
        raise ValueError(f"p={p} must be a prime congruent to 1 mod 4")
    sols = []
    amax = math.isqrt(p)
    for a in range(1, amax + 1, 2):
        rem_a = p - a * a
        bmax = math.isqrt(rem_a)
        for b in range(-bmax - (bmax % 2), bmax + 1, 2):
            rem_b = rem_a - b * b
            if rem_b < 0:
                continue
            cmax = math.isqrt(rem_b)
            for c in range(-cmax - (cmax % 2), cmax + 1, 2):
                rem_c = rem_b - c * c
                if rem_c < 0:
                    continue
                d = math.isqrt(rem_c)
                if d * d == rem_c and d % 2 == 0:
                    sols.append(QuaternionSolution(a, b, c, d))
                    if d != 0:
                        sols.append(QuaternionSolution(a, b, c, -d))
    sols.sort(key=lambda s: (s.a, s.b, s.c, s.d))
    if len(sols) != p + 1:
        raise AssertionError(f"expected {p + 1} solutions for p={p}, found {len(sols)}")
    return sols


def sqrt_minus_one(q: int) -> int:
    """Least x with x^2 = -1 mod q; exists iff q = 1 mod 4 (q prime)."""
    if q % 4 != 1 or not is_prime(q):
        raise ValueError(f"-1 is not a square mod {q}")
    for x in range(2, q):
        if x * x % q == q - 1:
            return x
    raise AssertionError("unreachable")


def find_lps_parameters(k: float = 1.0, delta: float = 0.0, epsilon: float = 0.5,
                        search_limit: int = 2000) -> list[tuple[int, int]]:
    """Prime pairs (p, q) usable for the bipartite Ramanujan construction.

    Both primes are 1 mod 4, p is a non-residue mod q, and q lies in the
    window (p^(k/2+delta), (1+epsilon) * p^(k/2+delta)).
    """
    primes = [p for p in range(5, search_limit + 1) if p % 4 == 1 and is_prime(p)]
    pairs = []
    for p in primes:
        lo = p ** (k / 2 + delta)
        hi = (1 + epsilon) * lo
        for q in primes:
            if not lo < q < hi or q == p:
                continue
            if legendre(p, q) == -1:
                pairs.append((p, q))
    return pairs
