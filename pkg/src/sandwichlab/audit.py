"""Checkers for the pseudorandom properties the coupling analysis quantifies over.

Every asymptotic "with high probability" property becomes a parameterized
finite check with explicit thresholds.  Checkers return a PropertyReport
carrying the worst signed margin and the witness achieving it, so a desk-scale
run stays informative even where the literal constants make the check vacuous
or unsatisfiable; in the vacuous case the report names the constraint that
emptied the search space instead of silently rescaling.

All logarithms are natural.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .graphs import (
    SimpleGraph,
    difference,
    edges_between,
    edges_inside,
    multi_covered_edges,
    vertex_mask,
    _bits,
)

INF = float("inf")


@dataclass
class PropertyReport:
    """Quantified pass/fail record for one property over all checked instances."""

    property_id: str
    params: dict
    instances: int
    passed: bool
    worst_margin: float
    witness: object = None
    notes: str = ""

    def as_dict(self) -> dict:
        return {
            "property": self.property_id,
            "params": self.params,
            "instances": self.instances,
            "passed": self.passed,
            "worst_margin": self.worst_margin,
            "witness": _jsonable(self.witness),
            "notes": self.notes,
        }


def _jsonable(value):
    if isinstance(value, (frozenset, set, tuple)):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


def _vacuous(property_id, params, notes) -> PropertyReport:
    return PropertyReport(property_id, params, 0, True, INF, None,
                          f"vacuous: {notes}")


def _require_subgraph(k: SimpleGraph, f: SimpleGraph):
    if not k.is_subgraph_of(f):
        raise ValueError("K must be a subgraph of F")


# -- degree properties ---------------------------------------------------------

def check_degree_band(f: SimpleGraph, d: int, delta: float, eta: float) -> PropertyReport:
    """Every degree of F must lie in [d + (1-eta)*delta, d + (1+eta)*delta]."""
    lo = d + (1 - eta) * delta
    hi = d + (1 + eta) * delta
    worst, witness = INF, None
    for v in f.vertices():
        deg = f.degree(v)
        margin = min(deg - lo, hi - deg)
        if margin < worst:
            worst, witness = margin, v
    return PropertyReport("degree-band", {"d": d, "delta": delta, "eta": eta},
                          f.n, worst >= 0, worst, witness)


def check_fk_degrees(f: SimpleGraph, k: SimpleGraph, delta: float,
                     band_constant: float) -> PropertyReport:
    """Every F\\K degree must lie within (1 +/- C'*sqrt(log n/delta))*delta."""
    _require_subgraph(k, f)
    band = band_constant * math.sqrt(math.log(f.n) / delta)
    lo, hi = (1 - band) * delta, (1 + band) * delta
    fk = difference(f, k)
    worst, witness = INF, None
    for v in f.vertices():
        deg = fk.degree(v)
        margin = min(deg - lo, hi - deg)
        if margin < worst:
            worst, witness = margin, v
    return PropertyReport("fk-degrees",
                          {"delta": delta, "band_constant": band_constant,
                           "band": band},
                          f.n, worst >= 0, worst, witness)


def check_neighborhood_sums(f: SimpleGraph, k: SimpleGraph, delta: float,
                            d: int, tol: float = None) -> PropertyReport:
    """Two-step degree sums must track d_{F\\K}(v)*delta*d within 1 +/- tol.

    The sum runs over u in N_{F\\K}(v), then u' in N_K(u), of d_{F\\K}(u');
    tol defaults to 2/delta.
    """
    _require_subgraph(k, f)
    t = 2.0 / delta if tol is None else tol
    fk = difference(f, k)
    fk_deg = [0] * (f.n + 1)
    for v in f.vertices():
        fk_deg[v] = fk.degree(v)
    worst, witness = INF, None
    for v in f.vertices():
        total = 0
        for u in _bits(fk.adj[v]):
            for u2 in _bits(k.adj[u]):
                total += fk_deg[u2]
        center = fk_deg[v] * delta * d
        lo, hi = (1 - t) * center, (1 + t) * center
        margin = min(total - lo, hi - total)
        if margin < worst:
            worst, witness = margin, v
    return PropertyReport("neighborhood-sums",
                          {"delta": delta, "d": d, "tol": t},
                          f.n, worst >= 0, worst, witness)


# -- expansion properties --------------------------------------------------------

def _witnessed_sets(carrier_adj, n, witness_cap, min_ratio, size_cap,
                    pool_cap, samples, rng):
    """Yield (U', U) pairs with U inside U' + carrier-neighborhood of U'.

    min_ratio is the |U| >= ratio*|U'| constraint; size_cap bounds |U|.
    Pools small enough are enumerated exhaustively, larger ones sampled.
    """
    vertices = range(1, n + 1)
    for size in range(1, witness_cap + 1):
        for uprime in combinations(vertices, size):
            pool_mask = vertex_mask(uprime)
            for v in uprime:
                pool_mask |= carrier_adj[v]
            pool = list(_bits(pool_mask))
            min_size = max(1, math.ceil(min_ratio * size))
            if min_size > size_cap:
                continue
            if len(pool) <= pool_cap:
                for usize in range(min_size, int(min(len(pool), size_cap)) + 1):
                    for u in combinations(pool, usize):
                        yield uprime, u
            elif rng is not None:
                for _ in range(samples):
                    usize = rng.randint(min_size, int(min(len(pool), size_cap)))
                    yield uprime, tuple(rng.sample(pool, usize))


def _expansion_statistic(g: SimpleGraph, u) -> int:
    return len(multi_covered_edges(g, u)) + edges_inside(g, u)


def check_expansion_k(f: SimpleGraph, k: SimpleGraph, lam: float, d: int,
                      delta: float, log_divisor: bool, witness_cap: int = 3,
                      pool_cap: int = 14, size_cap: float = None,
                      samples: int = 50, rng=None) -> PropertyReport:
    """Multi-covered plus internal K-edges of witnessed sets must stay sparse.

    Sets U reachable as U' + F\\K-neighborhood with |U'| <= 4|U|/delta are
    checked against (lam/log n)*d*|U| (log_divisor) or lam*d*|U|, with the
    matching size regime cap; explicit caps may override the literal ones.
    """
    _require_subgraph(k, f)
    n = f.n
    logn = math.log(n)
    if size_cap is None:
        size_cap = lam * n / (1e6 * d * logn) if log_divisor else lam * n / (1e6 * d)
    factor = (lam / logn) * d if log_divisor else lam * d
    params = {"lam": lam, "d": d, "delta": delta, "log_divisor": log_divisor,
              "size_cap": size_cap}
    if size_cap < 1:
        return _vacuous("expansion-k", params,
                        f"size cap {size_cap:.3g} < 1 admits no set at n={n}")
    fk = difference(f, k)
    worst, witness, seen = INF, None, 0
    for uprime, u in _witnessed_sets(fk.adj, n, witness_cap, delta / 4,
                                     size_cap, pool_cap, samples, rng):
        seen += 1
        margin = factor * len(u) - _expansion_statistic(k, u)
        if margin < worst:
            worst, witness = margin, (uprime, u)
    if not seen:
        return _vacuous("expansion-k", params,
                        f"no witnessed set meets |U| >= delta*|U'|/4 = {delta/4:.3g}")
    return PropertyReport("expansion-k", params, seen, worst >= 0, worst, witness)


def check_expansion_fk(f: SimpleGraph, k: SimpleGraph, lam: float, delta: float,
                       d: int, witness_cap: int = 3, pool_cap: int = 14,
                       size_cap: float = None, samples: int = 50,
                       rng=None) -> PropertyReport:
    """Mirror of check_expansion_k with the roles of K and F\\K swapped."""
    _require_subgraph(k, f)
    n = f.n
    logn = math.log(n)
    if size_cap is None:
        size_cap = lam * n / (100 * delta * logn)
    factor = (lam / logn) * delta
    params = {"lam": lam, "delta": delta, "d": d, "size_cap": size_cap}
    if size_cap < 1:
        return _vacuous("expansion-fk", params,
                        f"size cap {size_cap:.3g} < 1 admits no set at n={n}")
    fk = difference(f, k)
    worst, witness, seen = INF, None, 0
    for uprime, u in _witnessed_sets(k.adj, n, witness_cap, d / 4,
                                     size_cap, pool_cap, samples, rng):
        seen += 1
        margin = factor * len(u) - _expansion_statistic(fk, u)
        if margin < worst:
            worst, witness = margin, (uprime, u)
    if not seen:
        return _vacuous("expansion-fk", params,
                        f"no witnessed set meets |U| >= d*|U'|/4 = {d/4:.3g}")
    return PropertyReport("expansion-fk", params, seen, worst >= 0, worst, witness)


# -- local density and connection ---------------------------------------------------

def check_local_density(h: SimpleGraph, size_cap: float = None,
                        degree_cap: int = 10, count_cap: float = None,
                        enum_cap: int = 2, samples: int = 200,
                        rng=None) -> PropertyReport:
    """Few outside vertices may send degree_cap or more edges into any small set.

    For each U up to size_cap (default 100*log n), the number of outside
    vertices with at least degree_cap neighbors in U must not exceed count_cap
    (same default).  Sets up to enum_cap are enumerated, larger ones sampled.
    """
    n = h.n
    logn = math.log(n)
    if size_cap is None:
        size_cap = 100 * logn
    if count_cap is None:
        count_cap = 100 * logn
    params = {"size_cap": size_cap, "degree_cap": degree_cap,
              "count_cap": count_cap}
    max_size = int(min(size_cap, n))
    if max_size < 1:
        return _vacuous("local-density", params, f"size cap {size_cap:.3g} < 1")

    def offenders(u):
        umask = vertex_mask(u)
        return sum(1 for v in h.vertices()
                   if not (umask >> v) & 1
                   and bin(h.adj[v] & umask).count("1") >= degree_cap)

    worst, witness, seen = INF, None, 0
    for size in range(1, min(enum_cap, max_size) + 1):
        for u in combinations(range(1, n + 1), size):
            seen += 1
            margin = count_cap - offenders(u)
            if margin < worst:
                worst, witness = margin, u
    if rng is not None and max_size > enum_cap:
        for _ in range(samples):
            size = rng.randint(enum_cap + 1, max_size)
            u = tuple(rng.sample(range(1, n + 1), size))
            seen += 1
            margin = count_cap - offenders(u)
            if margin < worst:
                worst, witness = margin, u
    return PropertyReport("local-density", params, seen, worst >= 0, worst, witness)


def check_connection(f: SimpleGraph, k: SimpleGraph, lam: float,
                     size_floor: int = None, samples: int = 300,
                     exhaustive_n: int = 8, rng=None) -> PropertyReport:
    """Large disjoint sets must see at least (1-lam)*(delta/n)*|U||V| F\\K-edges.

    delta here is the average F\\K degree.  The margin is the absolute edge
    surplus; the witness records the worst (U, V) and its density ratio.
    """
    _require_subgraph(k, f)
    n = f.n
    fk = difference(f, k)
    delta = 2 * fk.edge_count() / n
    if size_floor is None:
        size_floor = max(1, math.ceil(lam * n / 1e8))
    params = {"lam": lam, "size_floor": size_floor, "delta": delta}
    if delta == 0:
        return _vacuous("connection", params, "F\\K has no edges")

    def margin_of(u, v_set):
        e_uv = edges_between(fk, u, v_set)
        bound = (1 - lam) * (delta / n) * len(u) * len(v_set)
        ratio = e_uv * n / (delta * len(u) * len(v_set))
        return e_uv - bound, ratio

    worst, witness, seen, worst_ratio = INF, None, 0, INF
    if n <= exhaustive_n:
        vertices = range(1, n + 1)
        for assign in range(3 ** n):
            u, v_set = [], []
            a = assign
            for vert in vertices:
                part = a % 3
                a //= 3
                if part == 1:
                    u.append(vert)
                elif part == 2:
                    v_set.append(vert)
            if len(u) < size_floor or len(v_set) < size_floor or u > v_set:
                continue
            seen += 1
            margin, ratio = margin_of(u, v_set)
            if margin < worst:
                worst, witness, worst_ratio = margin, (tuple(u), tuple(v_set)), ratio
    else:
        rng = rng or random.Random(0)
        for _ in range(samples):
            su = rng.randint(size_floor, max(size_floor, n // 2))
            sv = rng.randint(size_floor, max(size_floor, n - su))
            perm = rng.sample(range(1, n + 1), su + sv)
            u, v_set = perm[:su], perm[su:]
            seen += 1
            margin, ratio = margin_of(u, v_set)
            if margin < worst:
                worst, witness, worst_ratio = margin, (tuple(u), tuple(v_set)), ratio
    if not seen:
        return _vacuous("connection", params, "no disjoint pair meets the floor")
    return PropertyReport("connection", params, seen, worst >= 0, worst,
                          {"pair": witness, "ratio": worst_ratio})


def check_uv_distribution(k: SimpleGraph, d: int, size_floor: int = None,
                          samples: int = 0, rng=None,
                          tolerance: float = None) -> PropertyReport:
    """Ordered edge counts between big sets must track (d/n)|U||V| within n^-0.01.

    At desk scale the default floor ceil(n^0.98) is within a vertex or two of
    n, so the exhaustive pass covers pairs of near-full sets; a lower explicit
    floor plus sampling gives the check substance on demand.
    """
    n = k.n
    if size_floor is None:
        size_floor = math.ceil(n ** 0.98)
    if tolerance is None:
        tolerance = n ** -0.01
    params = {"d": d, "size_floor": size_floor, "tolerance": tolerance}
    if d == 0:
        return _vacuous("uv-distribution", params, "d = 0 has no edges to place")

    def margin_of(u, v_set):
        ratio = edges_between(k, u, v_set) * n / (d * len(u) * len(v_set))
        return tolerance - abs(ratio - 1), ratio

    worst, witness, seen, worst_ratio = INF, None, 0, None
    sizes = range(size_floor, n + 1)
    budget = sum(math.comb(n, s) for s in sizes) ** 2
    if budget <= 4096:
        subsets = [c for s in sizes for c in combinations(range(1, n + 1), s)]
        for u in subsets:
            for v_set in subsets:
                seen += 1
                margin, ratio = margin_of(u, v_set)
                if margin < worst:
                    worst, witness, worst_ratio = margin, (u, v_set), ratio
    if samples and rng is not None:
        for _ in range(samples):
            su = rng.randint(size_floor, n)
            sv = rng.randint(size_floor, n)
            u = tuple(rng.sample(range(1, n + 1), su))
            v_set = tuple(rng.sample(range(1, n + 1), sv))
            seen += 1
            margin, ratio = margin_of(u, v_set)
            if margin < worst:
                worst, witness, worst_ratio = margin, (u, v_set), ratio
    if not seen:
        return _vacuous("uv-distribution", params,
                        f"floor {size_floor} exceeds n={n}")
    return PropertyReport("uv-distribution", params, seen, worst >= 0, worst,
                          {"pair": witness, "ratio": worst_ratio})


# -- path-length threshold ----------------------------------------------------------

def ell0(delta, d, n: int) -> int:
    """Smallest integer l with (delta*d)^(l-1) >= n."""
    dd = Fraction(delta) * Fraction(d)
    if dd <= 1:
        raise ValueError("need delta*d > 1")
    level = 1
    power = Fraction(1)
    while power < n:
        level += 1
        power *= dd
    return level
