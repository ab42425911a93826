"""Builders for the graph families used throughout the package.

Four families, all given by explicit algebra over finite fields:

* ``build_generalized_quadrangle`` -- point/line incidence graph of the
  symplectic quadrangle W(q).  Bipartite, (q+1)-regular, girth 8, so it is
  C4- and C6-free.
* ``build_generalized_hexagon`` -- point/line incidence graph of the split
  Cayley hexagon on the parabolic quadric in PG(6,q).  Bipartite,
  (q+1)-regular, girth 12, so C4/C6/C8/C10-free.
* ``build_lps`` -- the Lubotzky-Phillips-Sarnak Cayley graph X^{p,q} of
  PGL2(q), bipartite and (p+1)-regular with large girth and second
  eigenvalue at most 2*sqrt(p).
* ``build_furedi`` -- Furedi's K_{2,t+1}-free graphs on (q^2-1)/t vertices
  with degrees q-1 and q; almost regular rather than regular.

Vertex orders, labels, and edge lists are all deterministic functions of the
parameters so that emitted edge lists are reproducible byte for byte.
"""

from dataclasses import dataclass

import numpy as np

from .algebra import field, is_prime, legendre, prime_power, quaternion_solutions, \
    sqrt_minus_one, unit_subgroup
from .graphs import Graph

FAMILIES = ("GQ-B2", "GH-G2", "LPS", "FUREDI")


@dataclass(frozen=True)
class ConstructionDescriptor:
    """Family tag plus the parameter-determined size and degree.

    ``expected_d`` is the regular degree for the first three families; for
    FUREDI the degree set is {expected_d - 1, expected_d}.
    """

    family: str
    parameters: tuple
    expected_n: int
    expected_d: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")

    def to_dict(self):
        return {
            "family": self.family,
            "parameters": list(self.parameters),
            "expected_n": self.expected_n,
            "expected_d": self.expected_d,
        }

    def validate(self, g: Graph) -> None:
        """Raise if the built graph does not match this descriptor."""
        if g.n != self.expected_n:
            raise AssertionError(f"{self.family}{self.parameters}: built {g.n} "
                                 f"vertices, descriptor says {self.expected_n}")
        degs = set(g.degrees())
        want = {self.expected_d - 1, self.expected_d} if self.family == "FUREDI" \
            else {self.expected_d}
        if not degs <= want:
            raise AssertionError(f"{self.family}{self.parameters}: degree set "
                                 f"{sorted(degs)} not within {sorted(want)}")


def construction_descriptor(family: str, parameters) -> ConstructionDescriptor:
    parameters = tuple(int(x) for x in parameters)
    if family == "GQ-B2":
        (q,) = parameters
        return ConstructionDescriptor(family, parameters,
                                      2 * sum(q ** e for e in range(4)), q + 1)
    if family == "GH-G2":
        (q,) = parameters
        return ConstructionDescriptor(family, parameters,
                                      2 * sum(q ** e for e in range(6)), q + 1)
    if family == "LPS":
        p, q = parameters
        return ConstructionDescriptor(family, parameters, q * (q * q - 1), p + 1)
    if family == "FUREDI":
        t, q = parameters
        return ConstructionDescriptor(family, parameters, (q * q - 1) // t, q)
    raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")


# -- shared projective-geometry helpers -------------------------------------


def _projective_points(f, dim):
    """All points of PG(dim-1, q) as tuples with first nonzero entry 1."""
    pts = []
    # enumerate by leading-1 position, then free tail coordinates in lex order
    for lead in range(dim):
        tails = [()]
        for _ in range(dim - 1 - lead):
            tails = [t + (c,) for t in tails for c in range(f.q)]
        for tail in tails:
            pts.append((0,) * lead + (1,) + tail)
    return pts


def _normalize(f, vec):
    lead = next(i for i, c in enumerate(vec) if c != 0)
    inv = f.inv(vec[lead])
    return tuple(f.mul(inv, c) for c in vec)


def _incidence_graph(npts, lines, point_labels):
    """Bipartite graph: vertices 0..npts-1 points, then one vertex per line."""
    lines = sorted(lines, key=sorted)
    edges = []
    labels = dict(point_labels)
    for li, line in enumerate(lines):
        v = npts + li
        labels[v] = "L:" + ",".join(str(p) for p in sorted(line))
        edges.extend((p, v) for p in sorted(line))
    return Graph(npts + len(lines), edges,
                 bipartition=[0] * npts + [1] * len(lines), labels=labels)


def build_generalized_quadrangle(q: int) -> Graph:
    """Incidence graph of the symplectic generalized quadrangle W(q).

    Points are the points of PG(3,q); lines are the totally isotropic lines
    of the alternating form B(x,y) = x0*y1 - x1*y0 + x2*y3 - x3*y2.  Both
    classes have q^3+q^2+q+1 members and the incidence graph is
    (q+1)-regular with girth 8.
    """
    if prime_power(q) is None:
        raise ValueError(f"q={q} is not a prime power")
    f = field(q)
    pts = _projective_points(f, 4)
    add, sub, mul = f.add, f.sub, f.mul
    npts = len(pts)
    index = {p: i for i, p in enumerate(pts)}
    lines = set()
    for a in range(npts):
        u = pts[a]
        for b in range(a + 1, npts):
            v = pts[b]
            bform = add(sub(mul(u[0], v[1]), mul(u[1], v[0])),
                        sub(mul(u[2], v[3]), mul(u[3], v[2])))
            if bform != 0:
                continue
            # alternating form vanishes on the pair, so the whole span of
            # {u,v} is totally isotropic
            members = [b]
            for t in range(f.q):
                w = tuple(add(u[i], mul(t, v[i])) for i in range(4))
                members.append(index[_normalize(f, w)])
            lines.add(frozenset(members))
    if len(lines) != npts:
        raise AssertionError(f"W({q}): found {len(lines)} isotropic lines, "
                             f"expected {npts}")
    labels = {i: "P:" + ",".join(map(str, p)) for i, p in enumerate(pts)}
    g = _incidence_graph(npts, lines, labels)
    construction_descriptor("GQ-B2", (q,)).validate(g)
    return g


# Plucker-coordinate conditions cutting the hexagon's line set out of the
# lines of the quadric: p12=p34, p20=p35, p01=p36, p45=p23, p56=p03, p64=p13.
_HEXAGON_CONDITIONS = (((1, 2), (3, 4)), ((2, 0), (3, 5)), ((0, 1), (3, 6)),
                       ((4, 5), (2, 3)), ((5, 6), (0, 3)), ((6, 4), (1, 3)))


def build_generalized_hexagon(q: int) -> Graph:
    """Incidence graph of the split Cayley hexagon H(q), q in {2, 3, 4}.

    Realization: points are the points of the parabolic quadric
    x0*x4 + x1*x5 + x2*x6 = x3^2 in PG(6,q); lines are the lines of the
    quadric (pairs of quadric points where the polarized form
    B(x,y) = x0*y4 + x4*y0 + x1*y5 + x5*y1 + x2*y6 + x6*y2 - 2*x3*y3
    vanishes) whose Plucker coordinates p_ij = u_i*v_j - u_j*v_i satisfy
    p12=p34, p20=p35, p01=p36, p45=p23, p56=p03, p64=p13.  This yields
    q^5+q^4+q^3+q^2+q+1 points and equally many lines, a (q+1)-regular
    incidence graph of girth 12.
    """
    if prime_power(q) is None:
        raise ValueError(f"q={q} is not a prime power")
    if q > 4:
        raise ValueError(f"q={q} not supported: line enumeration is quadratic "
                         "in the q^5-sized point set; use q <= 4")
    f = field(q)
    add, sub, mul = f.add, f.sub, f.mul
    two = add(1, 1)

    pts = []
    for x in _projective_points(f, 7):
        qform = sub(add(add(mul(x[0], x[4]), mul(x[1], x[5])), mul(x[2], x[6])),
                    mul(x[3], x[3]))
        if qform == 0:
            pts.append(x)
    npts = len(pts)
    index = {p: i for i, p in enumerate(pts)}

    lines = set()
    for a in range(npts):
        u = pts[a]
        for b in range(a + 1, npts):
            v = pts[b]
            bform = sub(add(add(add(mul(u[0], v[4]), mul(u[4], v[0])),
                                add(mul(u[1], v[5]), mul(u[5], v[1]))),
                            add(mul(u[2], v[6]), mul(u[6], v[2]))),
                        mul(two, mul(u[3], v[3])))
            if bform != 0:
                continue
            ok = True
            for (i1, j1), (i2, j2) in _HEXAGON_CONDITIONS:
                lhs = sub(mul(u[i1], v[j1]), mul(u[j1], v[i1]))
                rhs = sub(mul(u[i2], v[j2]), mul(u[j2], v[i2]))
                if lhs != rhs:
                    ok = False
                    break
            if not ok:
                continue
            members = [b]
            for t in range(f.q):
                w = tuple(add(u[i], mul(t, v[i])) for i in range(7))
                members.append(index[_normalize(f, w)])
            lines.add(frozenset(members))
    if len(lines) != npts:
        raise AssertionError(f"H({q}): found {len(lines)} hexagon lines, "
                             f"expected {npts}")
    labels = {i: "P:" + ",".join(map(str, p)) for i, p in enumerate(pts)}
    g = _incidence_graph(npts, lines, labels)
    construction_descriptor("GH-G2", (q,)).validate(g)
    return g


def build_lps(p: int, q: int) -> Graph:
    """Cayley graph X^{p,q} of PGL2(q) with quaternion-derived generators.

    Vertices are the invertible 2x2 matrices over GF(q) up to scalars,
    represented with first nonzero entry 1.  Each integer solution
    (a,b,c,d) of a^2+b^2+c^2+d^2=p with a odd positive and b,c,d even gives
    the generator [[a+ib, c+id], [-c+id, a-ib]] mod q, where i^2 = -1 mod q.
    All generators have determinant p, a nonresidue mod q, so the graph is
    bipartite between the two determinant classes; side 0 (square
    determinants, i.e. PSL2) comes first in the vertex order.
    """
    for name, val in (("p", p), ("q", q)):
        if not is_prime(val):
            raise ValueError(f"{name}={val} is not prime")
        if val % 4 != 1:
            raise ValueError(f"{name}={val} is not congruent to 1 mod 4")
    if p == q:
        raise ValueError("p and q must be distinct")
    if legendre(p, q) != -1:
        raise ValueError(f"p={p} is a quadratic residue mod q={q}; the "
                         "bipartite construction needs legendre(p,q) = -1")

    def norm(m):
        lead = next(x for x in m if x % q)
        inv = pow(lead, q - 2, q)
        return tuple(x * inv % q for x in m)

    i2 = sqrt_minus_one(q)
    gens = set()
    for s in quaternion_solutions(p):
        m = ((s.a + i2 * s.b) % q, (s.c + i2 * s.d) % q,
             (-s.c + i2 * s.d) % q, (s.a - i2 * s.b) % q)
        gens.add(norm(m))
    if len(gens) != p + 1:
        raise AssertionError(f"generator multiset collapsed: {len(gens)} distinct "
                             f"of {p + 1}")
    if (1, 0, 0, 1) in gens:
        raise AssertionError("identity generator would create loops")

    # canonical representatives: first nonzero entry 1, nonzero determinant
    sides = ([], [])
    for b in range(q):
        for c in range(q):
            for d in range(q):
                det = (d - b * c) % q
                if det:
                    sides[0 if legendre(det, q) == 1 else 1].append((1, b, c, d))
    for c in range(1, q):
        for d in range(q):
            sides[0 if legendre(q - c, q) == 1 else 1].append((0, 1, c, d))
    half = q * (q * q - 1) // 2
    if len(sides[0]) != half or len(sides[1]) != half:
        raise AssertionError(f"determinant classes {len(sides[0])}/{len(sides[1])}, "
                             f"expected {half} each")
    verts = sorted(sides[0]) + sorted(sides[1])
    index = {v: i for i, v in enumerate(verts)}

    edges = set()
    for vi, (a, b, c, d) in enumerate(verts):
        for (ga, gb, gc, gd) in gens:
            w = norm(((ga * a + gb * c) % q, (ga * b + gb * d) % q,
                      (gc * a + gd * c) % q, (gc * b + gd * d) % q))
            wi = index[w]
            edges.add((vi, wi) if vi < wi else (wi, vi))
    labels = {i: f"{a},{b};{c},{d}" for i, (a, b, c, d) in enumerate(verts)}
    g = Graph(len(verts), sorted(edges),
              bipartition=[0] * half + [1] * half, labels=labels)
    construction_descriptor("LPS", (p, q)).validate(g)
    return g


def _furedi_orbits(t: int, q: int):
    """Field, order-t unit subgroup, and sorted orbit representatives."""
    if t not in (2, 3):
        raise ValueError(f"t={t} not supported; the target cases are t=2 and t=3")
    f = field(q)
    if (q - 1) % t:
        raise ValueError(f"t={t} does not divide q-1={q - 1}")
    h = frozenset(unit_subgroup(f, t))
    seen = set()
    reps = []
    for a in range(q):
        for b in range(q):
            if (a, b) == (0, 0) or (a, b) in seen:
                continue
            orbit = {(f.mul(u, a), f.mul(u, b)) for u in h}
            seen |= orbit
            reps.append(min(orbit))
    reps.sort()
    if len(reps) != (q * q - 1) // t:
        raise AssertionError(f"{len(reps)} orbits, expected {(q * q - 1) // t}")
    return f, h, reps


def build_furedi(t: int, q: int) -> Graph:
    """Furedi's K_{2,t+1}-free graph on (q^2-1)/t vertices.

    Vertices are the orbits of GF(q)^2 minus the origin under coordinatewise
    multiplication by the order-t subgroup H of the units; orbits <a,b> and
    <x,y> are adjacent when a*x + b*y lands in H (a condition independent of
    the chosen representatives).  Orbits incident to themselves lose the
    loop, so degrees are q and q-1.
    """
    f, h, reps = _furedi_orbits(t, q)
    n = len(reps)
    edges = []
    for i, (a, b) in enumerate(reps):
        for j in range(i + 1, n):
            x, y = reps[j]
            if f.add(f.mul(a, x), f.mul(b, y)) in h:
                edges.append((i, j))
    labels = {i: f"{a},{b}" for i, (a, b) in enumerate(reps)}
    g = Graph(n, edges, labels=labels)
    construction_descriptor("FUREDI", (t, q)).validate(g)
    return g


def verify_furedi_structure(g: Graph, t: int, q: int) -> dict:
    """Check the A^2 = t*J + (q-t)*I + E identity entry by entry.

    The exact structure, derived from the t^2 solutions of the pair of
    incidence equations: with l_x = 1 when orbit x carries a dropped loop
    (its self-product lies in H, equivalently deg x = q-1),

    * diagonal: A^2[x,x] = q - l_x;
    * proportional orbits (same projective point, (q-1)/t - 1 per row):
      A^2[x,y] = 0, adjacent or not;
    * all other pairs: A^2[x,y] = t - (l_x + l_y) * A[x,y], since a dropped
      loop at an adjacent endpoint removes that endpoint from the t common
      solutions.

    In particular every off-diagonal entry is at most t, which is exactly
    K_{2,t+1}-freeness.  Adjacency itself is re-derived from the field, so
    any edge perturbation fails with a witness.
    """
    f, h, reps = _furedi_orbits(t, q)
    n = len(reps)
    report = {"ok": True, "n": n, "t": t, "q": q, "witness": None}

    def fail(**kw):
        report.update(ok=False, witness=kw)
        return report

    if g.n != n:
        return fail(reason="vertex count", got=g.n, expected=n)
    a = g.adjacency_matrix(dtype=np.int64)
    a2 = a @ a
    loop = [1 if f.add(f.mul(x, x), f.mul(y, y)) in h else 0 for x, y in reps]
    offdiag = {}
    pairs_below_t = 0
    for i in range(n):
        xi, yi = reps[i]
        if a2[i, i] != q - loop[i]:
            return fail(row=i, col=i, entry=int(a2[i, i]), expected=q - loop[i])
        for j in range(i + 1, n):
            xj, yj = reps[j]
            proportional = f.sub(f.mul(xi, yj), f.mul(yi, xj)) == 0
            want_adj = 1 if f.add(f.mul(xi, xj), f.mul(yi, yj)) in h else 0
            want = 0 if proportional else t - (loop[i] + loop[j]) * want_adj
            if a[i, j] != want_adj:
                return fail(row=i, col=j, reason="adjacency", got=int(a[i, j]),
                            expected=want_adj)
            if a2[i, j] != want:
                return fail(row=i, col=j, entry=int(a2[i, j]), expected=want)
            offdiag[want] = offdiag.get(want, 0) + 1
            if 0 < want < t:
                pairs_below_t += 1
    report["loop_vertices"] = sum(loop)
    report["proportional_pairs_per_row"] = (q - 1) // t - 1
    report["off_diagonal_histogram"] = {str(k): v for k, v in sorted(offdiag.items())}
    report["adjacent_pairs_below_t"] = pairs_below_t
    return report


def incidence_singular_values(g: Graph) -> list[float]:
    """Eigenvalues of N*N^T for the side-0 x side-1 biadjacency matrix N.

    Returned sorted descending, one value per side-0 vertex.  For a
    (q+1)-regular generalized quadrangle these are (q+1)^2, 2q and 0.
    """
    x, y = g.sides()
    pos = {v: i for i, v in enumerate(x)}
    mat = np.zeros((len(x), len(y)))
    for j, v in enumerate(y):
        for u in g.neighbors(v):
            mat[pos[u], j] = 1.0
    vals = np.linalg.eigvalsh(mat @ mat.T)
    return sorted((float(v) for v in vals), reverse=True)
