"""2-factors, the oriented-cover/permanent identity, rotation-extension to
Hamilton cycles, and exact Hamilton-cycle counting.

A 2-factor is a spanning collection of vertex-disjoint cycles where a single
edge counts as a (degenerate, length-2) cycle; c(F) counts only the cycles
of length >= 3, and per(A) = sum over 2-factors of 2^c(F) because each long
cycle can be oriented two ways.  The rotation engine merges the cycles of a
2-factor one at a time, using Posa rotations with a fixed endpoint when
neither endpoint of the working path can leave it; on bipartite graphs the
working path always spans a union of former cycles, so it has an odd number
of edges at every merge boundary, which the trace records and tests assert.
"""

import math
import random
from dataclasses import dataclass, field

from .graphs import Graph, is_connected
from .permanent import permanent_exact, bregman_bound
from .spectral import SpectralCertificate

ENUMERATION_CAP = 14
IDENTITY_CAP = 12
DP_CAP = 32
BB_CAP = 40
DP_STATE_CAP = 8_000_000
BB_NODE_CAP = 200_000_000
SLACK = 1e-9


def _canonical_cycle(cycle):
    cycle = list(cycle)
    k = len(cycle)
    if k == 2:
        return tuple(sorted(cycle))
    i = cycle.index(min(cycle))
    cycle = cycle[i:] + cycle[:i]
    if cycle[-1] < cycle[1]:
        cycle = [cycle[0]] + cycle[:0:-1]
    return tuple(cycle)


@dataclass(frozen=True)
class TwoFactor:
    n: int
    cycles: tuple

    @classmethod
    def from_cycles(cls, n, cycles):
        return cls(n, tuple(sorted(_canonical_cycle(c) for c in cycles)))

    @property
    def s(self):
        """Number of cycles, degenerate single edges included."""
        return len(self.cycles)

    @property
    def c(self):
        """Number of cycles of length >= 3 (the orientation-carrying ones)."""
        return sum(1 for cyc in self.cycles if len(cyc) >= 3)

    def edge_set(self):
        out = set()
        for cyc in self.cycles:
            if len(cyc) == 2:
                out.add(tuple(sorted(cyc)))
            else:
                for i in range(len(cyc)):
                    out.add(tuple(sorted((cyc[i], cyc[(i + 1) % len(cyc)]))))
        return out

    def validate(self, g: Graph):
        seen = set()
        for cyc in self.cycles:
            if len(cyc) < 2:
                raise ValueError(f"cycle too short: {cyc}")
            for v in cyc:
                if v in seen:
                    raise ValueError(f"vertex {v} covered twice")
                seen.add(v)
            if len(cyc) == 2:
                if not g.has_edge(*cyc):
                    raise ValueError(f"missing edge {cyc}")
            else:
                for i in range(len(cyc)):
                    if not g.has_edge(cyc[i], cyc[(i + 1) % len(cyc)]):
                        raise ValueError(
                            f"missing edge {(cyc[i], cyc[(i + 1) % len(cyc)])}")
        if seen != set(range(self.n)):
            raise ValueError("2-factor does not cover the vertex set")

    def to_dict(self):
        return {"n": self.n, "cycles": [list(c) for c in self.cycles],
                "s": self.s, "c": self.c}


def enumerate_two_factors(g: Graph, s_filter: int = None):
    """Yield every 2-factor of g exactly once, canonically ordered.

    Exponential-time backtracking over the lowest uncovered vertex; capped
    at n <= 14.  Optionally filter by total cycle count s.
    """
    if g.n > ENUMERATION_CAP:
        raise ValueError(f"n={g.n} exceeds the enumeration cap {ENUMERATION_CAP}")
    if g.n == 0:
        return
    full = (1 << g.n) - 1
    cycles = []

    def extend(covered):
        if covered == full:
            if s_filter is None or len(cycles) == s_filter:
                yield TwoFactor(g.n, tuple(cycles))
            return
        v = (~covered & -~covered).bit_length() - 1
        vbit = 1 << v
        # degenerate cycle: a single matching edge at v
        for w in g.neighbors(v):
            if not (covered >> w) & 1:
                cycles.append((v, w))
                yield from extend(covered | vbit | (1 << w))
                cycles.pop()
        # proper cycles through v; canonical start v, direction path[1] < last
        path = [v]

        def grow(mask):
            u = path[-1]
            for w in g.neighbors(u):
                if ((covered | mask) >> w) & 1:
                    continue
                path.append(w)
                if len(path) >= 3 and g.has_edge(w, v) and path[1] < w:
                    cycles.append(tuple(path))
                    yield from extend(covered | mask | (1 << w))
                    cycles.pop()
                yield from grow(mask | (1 << w))
                path.pop()

        yield from grow(vbit)

    yield from extend(0)


def oriented_count_identity(g: Graph):
    """Return (per(A), sum of 2^c(F) over 2-factors, equal?)."""
    if g.n > IDENTITY_CAP:
        raise ValueError(f"n={g.n} exceeds the identity check cap {IDENTITY_CAP}")
    lhs = permanent_exact(g.adjacency_matrix())
    rhs = sum(2 ** f.c for f in enumerate_two_factors(g))
    return lhs, rhs, lhs == rhs


def f_histogram(g: Graph) -> dict:
    """Histogram s -> f(G,s) plus both weighted totals.

    f(G,s) counts 2-factors with exactly s cycles, single edges included.
    sum_2c (weights 2^c(F), long cycles only) always equals per(A); sum_2s
    (weights 2^s) is reported alongside for comparison but not asserted
    against anything, since the two conventions differ exactly when perfect
    matchings are involved.
    """
    counts = {}
    sum_2s = 0
    sum_2c = 0
    for f in enumerate_two_factors(g):
        counts[f.s] = counts.get(f.s, 0) + 1
        sum_2s += 2 ** f.s
        sum_2c += 2 ** f.c
    return {"f": dict(sorted(counts.items())), "sum_2s": sum_2s, "sum_2c": sum_2c}


def random_two_factor(g: Graph, seed: int = 0) -> TwoFactor | None:
    """Sample a 2-factor by finding a seeded perfect matching of rows to
    columns in the adjacency support (a permutation inside A); permutation
    cycles of length 2 become matching edges.  Returns None if g has no
    2-factor."""
    rng = random.Random(seed)
    n = g.n
    order = list(range(n))
    rng.shuffle(order)
    nbrs = {v: sorted(g.neighbors(v), key=lambda _: rng.random()) for v in range(n)}
    match_col = [-1] * n   # column j -> row
    match_row = [-1] * n

    def augment(i, visited):
        for j in nbrs[i]:
            if j in visited:
                continue
            visited.add(j)
            if match_col[j] < 0 or augment(match_col[j], visited):
                match_col[j] = i
                match_row[i] = j
                return True
        return False

    import sys
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 4 * n + 100))
    try:
        for i in order:
            if match_row[i] < 0 and not augment(i, set()):
                return None
    finally:
        sys.setrecursionlimit(old_limit)
    cycles = []
    seen = [False] * n
    for v in range(n):
        if seen[v]:
            continue
        cyc = []
        u = v
        while not seen[u]:
            seen[u] = True
            cyc.append(u)
            u = match_row[u]
        cycles.append(tuple(cyc))
    tf = TwoFactor.from_cycles(n, cycles)
    tf.validate(g)
    return tf


# -- rotation-extension ------------------------------------------------------


@dataclass(frozen=True)
class RotationTrace:
    start: TwoFactor
    replacements: tuple      # ordered (removed edge or None, added edge or None)
    result: tuple            # Hamilton cycle, vertex order
    budget: int              # rotation budget per merge phase
    checkpoints: tuple = field(default=())   # (step index, path vertex count)
    restarts_used: int = 0

    def to_dict(self):
        return {
            "start": self.start.to_dict(),
            "replacements": [[list(r) if r else None, list(a) if a else None]
                             for r, a in self.replacements],
            "result": list(self.result),
            "budget": self.budget,
            "checkpoints": [list(c) for c in self.checkpoints],
            "restarts_used": self.restarts_used,
        }


def _edge(u, v):
    return (u, v) if u < v else (v, u)


def is_hamilton_cycle(g: Graph, cycle) -> bool:
    if len(cycle) != g.n or len(set(cycle)) != g.n:
        return False
    return all(g.has_edge(cycle[i], cycle[(i + 1) % g.n]) for i in range(g.n))


def replay_trace(g: Graph, trace: RotationTrace) -> bool:
    """Re-apply the replacement list and confirm it lands on the result."""
    edges = trace.start.edge_set()
    for removed, added in trace.replacements:
        if removed is not None:
            if tuple(removed) not in edges:
                return False
            edges.discard(tuple(removed))
        if added is not None:
            e = tuple(added)
            if e in edges or not g.has_edge(*e):
                return False
            edges.add(e)
    want = {_edge(trace.result[i], trace.result[(i + 1) % g.n])
            for i in range(g.n)}
    return edges == want and is_hamilton_cycle(g, trace.result)


def rotation_budget(g: Graph, cert: SpectralCertificate) -> int:
    """Per-merge rotation allowance: 50 * ceil(log n / log(d/lam)), floored."""
    d = float(cert.profile.dbar)
    lam = cert.lambda_ if cert.mode == "bipartite-regular" else cert.lambda_bar
    if lam > 0 and d > lam:
        denom = max(math.log(d / lam), 0.1)
    else:
        denom = 0.1
    return 50 * math.ceil(math.log(max(g.n, 2)) / denom)


def _open_cycle_at(cycle, v, rng, canonical):
    """Orient a cycle into a path starting at v; returns (path, removed edge)."""
    cyc = list(cycle)
    if len(cyc) == 2:
        other = cyc[0] if cyc[1] == v else cyc[1]
        return [v, other], None
    i = cyc.index(v)
    forward = cyc[i:] + cyc[:i]
    backward = [forward[0]] + forward[:0:-1]
    pick = forward if canonical or rng.random() < 0.5 else backward
    return pick, _edge(pick[0], pick[-1])


def _attempt(g, start, budget, rng, canonical, bipartite):
    n = g.n
    cycles = [list(c) for c in start.cycles]
    if not canonical:
        rng.shuffle(cycles)
    owner = {}
    for idx, cyc in enumerate(cycles):
        for v in cyc:
            owner[v] = idx
    remaining = set(range(len(cycles)))
    replacements = []
    checkpoints = []

    def note_path(path):
        if bipartite:
            assert len(path) % 2 == 0, "even-length path on a bipartite graph"
        checkpoints.append((len(replacements), len(path)))

    # current working cycle: start from the cycle owning vertex 0, or random
    first = owner[0] if canonical else rng.choice(sorted(remaining))
    current = cycles[first]
    remaining.discard(first)
    in_current = 0
    for v in current:
        in_current |= 1 << v

    def bridge_from_cycle():
        order = sorted(current) if canonical else sorted(current, key=lambda _: rng.random())
        for v in order:
            outside = g.neighbor_mask(v) & ~in_current
            if outside:
                w = (outside & -outside).bit_length() - 1
                return v, w
        return None

    path = None
    while True:
        if path is None:
            # cycle state
            if len(current) == n:
                return current, replacements, checkpoints
            hop = bridge_from_cycle()
            if hop is None:
                return None, replacements, checkpoints   # disconnected
            v, w = hop
            left, removed_left = _open_cycle_at(current, v, rng, canonical)
            left.reverse()                               # path ends at v
            target = owner[w]
            right, removed_right = _open_cycle_at(cycles[target], w, rng, canonical)
            remaining.discard(target)
            if removed_left is not None:
                replacements.append((removed_left, None))
            if removed_right is not None:
                replacements.append((removed_right, None))
            replacements.append((None, _edge(v, w)))
            path = left + right
            for u in right:
                in_current |= 1 << u
            note_path(path)
        # path state
        rotations = 0
        while path is not None:
            if len(path) == n and g.has_edge(path[0], path[-1]):
                replacements.append((None, _edge(path[0], path[-1])))
                return path, replacements, checkpoints
            # absorb a vertex outside the path from either endpoint
            absorbed = False
            if len(path) < n:
                ends = (path[-1], path[0]) if canonical else \
                    ((path[-1], path[0]) if rng.random() < 0.5 else (path[0], path[-1]))
                for endpoint in ends:
                    outside = g.neighbor_mask(endpoint) & ~in_current
                    if not outside:
                        continue
                    z = (outside & -outside).bit_length() - 1
                    if endpoint == path[0]:
                        path.reverse()
                    target = owner[z]
                    right, removed = _open_cycle_at(cycles[target], z, rng, canonical)
                    remaining.discard(target)
                    if removed is not None:
                        replacements.append((removed, None))
                    replacements.append((None, _edge(endpoint, z)))
                    path = path + right
                    for u in right:
                        in_current |= 1 << u
                    note_path(path)
                    absorbed = True
                    rotations = 0
                    break
            if absorbed:
                continue
            if len(path) < n and g.has_edge(path[0], path[-1]):
                # close into a cycle and look for a bridge from any vertex
                replacements.append((None, _edge(path[0], path[-1])))
                current = path
                path = None
                break
            # Posa rotation with fixed endpoint path[0]
            end = path[-1]
            pivots = [i for i in range(len(path) - 2) if g.has_edge(path[i], end)]
            if not pivots:
                path.reverse()
                end = path[-1]
                pivots = [i for i in range(len(path) - 2) if g.has_edge(path[i], end)]
                if not pivots:
                    return None, replacements, checkpoints
            if canonical:
                i = min(pivots, key=lambda k: path[k])
            else:
                i = rng.choice(pivots)
            replacements.append((_edge(path[i], path[i + 1]), _edge(path[i], end)))
            path[i + 1:] = path[:i:-1]
            rotations += 1
            if rotations > budget:
                return None, replacements, checkpoints


def rotate_to_hamilton(g: Graph, f: TwoFactor, cert: SpectralCertificate,
                       seed: int = 0, restarts: int = 20):
    """Convert a 2-factor into a Hamilton cycle by merges and Posa rotations.

    Deterministic given the seed: the first attempt breaks ties toward
    smaller vertex labels, later restarts randomize pivot and orientation
    choices.  Success returns a RotationTrace whose replacement list replays
    from the start 2-factor to the result; exhausting the retry budget
    returns a failure report instead of raising, since success is only
    guaranteed asymptotically.
    """
    f.validate(g)
    budget = rotation_budget(g, cert)
    if not is_connected(g):
        return {"ok": False, "reason": "graph is disconnected",
                "restarts": 0, "budget": budget}
    if f.s == 1 and len(f.cycles[0]) == g.n:
        return RotationTrace(start=f, replacements=(), result=tuple(f.cycles[0]),
                             budget=budget, checkpoints=(), restarts_used=0)
    bipartite = g.bipartition is not None
    for attempt in range(restarts):
        rng = random.Random(seed * 1000003 + attempt)
        result, replacements, checkpoints = _attempt(
            g, f, budget, rng, canonical=(attempt == 0), bipartite=bipartite)
        if result is not None:
            trace = RotationTrace(start=f, replacements=tuple(replacements),
                                  result=tuple(result), budget=budget,
                                  checkpoints=tuple(checkpoints),
                                  restarts_used=attempt)
            assert replay_trace(g, trace)
            return trace
    return {"ok": False, "reason": f"no Hamilton cycle found in {restarts} "
                                   f"restarts with budget {budget}",
            "restarts": restarts, "budget": budget}


# -- exact counting ----------------------------------------------------------


class ResourceCapExceeded(RuntimeError):
    def __init__(self, message, progress):
        super().__init__(message)
        self.progress = progress


def hamilton_cycle_oracle(g: Graph) -> int:
    """Naive (n-1)!/2 permutation count for cross-checking, n <= 9."""
    if g.n > 9:
        raise ValueError("oracle capped at n=9")
    if g.n < 3:
        return 0
    import itertools
    count = 0
    for perm in itertools.permutations(range(1, g.n)):
        cyc = (0,) + perm
        if all(g.has_edge(cyc[i], cyc[(i + 1) % g.n]) for i in range(g.n)):
            count += 1
    assert count % 2 == 0
    return count // 2


def _count_dp(g: Graph, state_cap: int) -> int:
    n = g.n
    full = (1 << n) - 1
    total = 0
    for v in g.neighbors(0):
        # paths 0 -> v -> ...; close only at a neighbor of 0 larger than v,
        # so each cycle is counted once (its smaller 0-neighbor leads)
        frontier = {(1 | (1 << v), v): 1}
        while frontier:
            nxt = {}
            for (mask, last), cnt in frontier.items():
                if mask == full:
                    if last > v and g.has_edge(last, 0):
                        total += cnt
                    continue
                avail = g.neighbor_mask(last) & ~mask
                while avail:
                    w = (avail & -avail).bit_length() - 1
                    avail &= avail - 1
                    key = (mask | (1 << w), w)
                    nxt[key] = nxt.get(key, 0) + cnt
            if len(nxt) > state_cap:
                raise ResourceCapExceeded(
                    f"DP frontier exceeded {state_cap} states",
                    {"method": "dp", "states": len(nxt)})
            frontier = {k: c for k, c in nxt.items()
                        if k[0] == full or g.neighbor_mask(k[1]) & ~k[0]}
    return total


def _count_branch_and_bound(g: Graph, node_cap: int) -> int:
    n = g.n
    full = (1 << n) - 1
    masks = [g.neighbor_mask(v) for v in range(n)]
    count = 0
    nodes = 0

    def feasible(mask, last):
        # every unvisited vertex needs 2 usable connections; endpoints need 1
        free = ~mask & full
        live = free | (1 << last) | 1
        rem = free
        while rem:
            u = (rem & -rem).bit_length() - 1
            rem &= rem - 1
            if (masks[u] & live).bit_count() < 2:
                return False
        return True

    def dfs(mask, last, first):
        nonlocal count, nodes
        nodes += 1
        if nodes > node_cap:
            raise ResourceCapExceeded(
                f"branch-and-bound exceeded {node_cap} nodes",
                {"method": "bb", "count_so_far": count})
        if mask == full:
            if last > first and (masks[last] >> 0) & 1:
                count += 1
            return
        avail = masks[last] & ~mask
        while avail:
            w = (avail & -avail).bit_length() - 1
            avail &= avail - 1
            if feasible(mask | (1 << w), w):
                dfs(mask | (1 << w), w, first)

    for v in g.neighbors(0):
        dfs(1 | (1 << v), v, v)
    return count


def count_hamilton_cycles(g: Graph, method: str = "auto",
                          state_cap: int = DP_STATE_CAP,
                          node_cap: int = BB_NODE_CAP) -> int:
    """Exact number of undirected Hamilton cycles.

    Subset DP anchored at vertex 0 up to n=32 (memory permitting), with a
    branch-and-bound fallback for sparse graphs up to n=40.  Raises
    ResourceCapExceeded with partial progress when a cap is hit.
    """
    if g.n < 3:
        return 0
    if method not in ("auto", "dp", "bb"):
        raise ValueError(f"unknown method {method!r}")
    if method == "dp" or (method == "auto" and g.n <= DP_CAP):
        if g.n > DP_CAP:
            raise ValueError(f"n={g.n} exceeds the DP cap {DP_CAP}")
        try:
            return _count_dp(g, state_cap)
        except ResourceCapExceeded:
            if method == "dp":
                raise
    if g.n > BB_CAP:
        raise ValueError(f"n={g.n} exceeds the branch-and-bound cap {BB_CAP}")
    return _count_branch_and_bound(g, node_cap)


def formula_gap(g: Graph, h: int) -> dict:
    """Compare an exact count h against n!(d/n)^n and the factorial upper chain.

    Reports the log gap and the per-vertex gap (the finite stand-in for the
    (1+o(1))^n factor), and checks log h against the equalized-factorial
    upper bound on per(A), which dominates h because every Hamilton cycle is
    an oriented 2-factor (twice over).
    """
    n = g.n
    d = 2 * g.m / n if n else 0.0
    log_h = math.log(h) if h > 0 else -math.inf
    log_formula = math.lgamma(n + 1) + n * (math.log(d) - math.log(n)) if d > 0 else -math.inf
    upper = bregman_bound(g.adjacency_matrix())
    ceil_log = (n / math.floor(d)) * math.lgamma(math.ceil(d) + 1) if d >= 1 else math.inf
    return {
        "n": n,
        "h": h,
        "log_h": log_h,
        "log_formula": log_formula,
        "gap": log_formula - log_h,
        "gap_per_vertex": (log_formula - log_h) / n if n else 0.0,
        "bregman_log": upper,
        "ceil_factorial_log": ceil_log,
        "upper_ok": log_h <= upper + SLACK and log_h <= ceil_log + SLACK,
    }
