"""Exact counting and enumeration of d-regular graphs inside or around a host.

Everything here is exact integer arithmetic.  The engine is a vertex-by-vertex
backtracking search: processing vertices in increasing order, each vertex's
remaining incident edges are assigned as a subset of its still-available
higher-indexed host neighbors, cutting branches whose residual degree exceeds
the remaining candidates.  Counting memoizes on (vertex, residual-degree
suffix); enumeration walks the same tree without memoization.
"""

from __future__ import annotations

from collections import OrderedDict
from itertools import combinations

from .graphs import SimpleGraph, canonical_key, canonical_pair, complement

ORACLE_CEILING = 24


class CapacityError(RuntimeError):
    """Instance exceeds the configured exact-oracle ceiling."""


class OracleCache:
    """Bounded LRU cache from (canonical_key, d, kind) to exact results."""

    def __init__(self, maxsize: int = 200_000):
        self.maxsize = maxsize
        self._data = OrderedDict()
        self.hits = 0
        self.misses = 0

    def get(self, key):
        try:
            value = self._data[key]
        except KeyError:
            self.misses += 1
            return None
        self._data.move_to_end(key)
        self.hits += 1
        return value

    def put(self, key, value):
        self._data[key] = value
        self._data.move_to_end(key)
        if len(self._data) > self.maxsize:
            self._data.popitem(last=False)

    def clear(self):
        self._data.clear()
        self.hits = 0
        self.misses = 0

    def __len__(self):
        return len(self._data)


DEFAULT_CACHE = OracleCache()


def _check_capacity(n: int):
    if n > ORACLE_CEILING:
        raise CapacityError(f"n={n} exceeds exact-oracle ceiling {ORACLE_CEILING}")


def _count_target(adj, n: int, target) -> int:
    """Number of spanning subgraphs of the host with the given degree vector.

    adj is 1-based bitmask rows, target is 1-based residual degrees.
    """
    if any(t < 0 for t in target[1:]):
        return 0
    if sum(target[1:]) % 2:
        return 0
    memo = {}

    def rec(v: int, res: tuple) -> int:
        while res and res[0] == 0:
            v += 1
            res = res[1:]
        if not res:
            return 1
        key = (v, res)
        cached = memo.get(key)
        if cached is not None:
            return cached
        need = res[0]
        row = adj[v]
        cands = [j for j in range(1, len(res)) if res[j] and (row >> (v + j)) & 1]
        total = 0
        if len(cands) >= need:
            res_list = list(res)
            for combo in combinations(cands, need):
                new = res_list[:]
                for j in combo:
                    new[j] -= 1
                total += rec(v + 1, tuple(new[1:]))
        memo[key] = total
        return total

    return rec(1, tuple(target[1:]))


def _iter_target(adj, n: int, target):
    """Yield the edge tuple of every spanning subgraph matching the degrees."""
    if any(t < 0 for t in target[1:]):
        return
    if sum(target[1:]) % 2:
        return
    tgt = list(target)
    acc = []

    def rec(v: int):
        while v <= n and tgt[v] == 0:
            v += 1
        if v > n:
            yield tuple(acc)
            return
        need = tgt[v]
        row = adj[v]
        cands = [w for w in range(v + 1, n + 1) if tgt[w] and (row >> w) & 1]
        if len(cands) < need:
            return
        tgt[v] = 0
        for combo in combinations(cands, need):
            for w in combo:
                tgt[w] -= 1
                acc.append((v, w))
            yield from rec(v + 1)
            for w in combo:
                tgt[w] += 1
            del acc[-need:]
        tgt[v] = need

    yield from rec(1)


# -- counting operations -------------------------------------------------------

def count_regular_spanning_subgraphs(host: SimpleGraph, d: int, cache: OracleCache = None) -> int:
    """Exact number of d-regular spanning subgraphs of the host.

    Returns 0 (rather than erroring) when dn is odd or no subgraph exists.
    """
    if not 0 <= d <= host.n - 1 and d != 0:
        return 0
    _check_capacity(host.n)
    cache = DEFAULT_CACHE if cache is None else cache
    key = (canonical_key(host), d, "count")
    hit = cache.get(key)
    if hit is not None:
        return hit
    value = _count_target(host.adj, host.n, [0] + [d] * host.n)
    cache.put(key, value)
    return value


def count_with_edge(host: SimpleGraph, d: int, e, cache: OracleCache = None) -> int:
    """Exact number of d-regular spanning subgraphs of the host containing e."""
    u, v = canonical_pair(*e)
    if not host.has_edge(u, v):
        raise ValueError(f"edge {u}-{v} not in host")
    _check_capacity(host.n)
    cache = DEFAULT_CACHE if cache is None else cache
    key = (canonical_key(host), d, "with", (u, v))
    hit = cache.get(key)
    if hit is not None:
        return hit
    target = [0] + [d] * host.n
    target[u] -= 1
    target[v] -= 1
    reduced = host.without_edge(u, v)
    value = _count_target(reduced.adj, host.n, target)
    cache.put(key, value)
    return value


def count_extensions(f: SimpleGraph, d: int, cache: OracleCache = None) -> int:
    """Exact number of d-regular graphs on {1..n} containing f.

    Searched directly over completions (subgraphs of the complement meeting the
    residual degree vector); does not delegate to the complement-count dual.
    """
    _check_capacity(f.n)
    cache = DEFAULT_CACHE if cache is None else cache
    key = (canonical_key(f), d, "ext")
    hit = cache.get(key)
    if hit is not None:
        return hit
    target = [0] + [d - f.degree(v) for v in f.vertices()]
    value = _count_target(complement(f).adj, f.n, target)
    cache.put(key, value)
    return value


def count_extensions_with_edge(f: SimpleGraph, d: int, e, cache: OracleCache = None) -> int:
    """Exact |{K d-regular : f + e inside K}| for a non-edge e of f."""
    u, v = canonical_pair(*e)
    if f.has_edge(u, v):
        raise ValueError(f"edge {u}-{v} already in the partial graph")
    return count_extensions(f.with_edge(u, v), d, cache=cache)


# -- enumeration ---------------------------------------------------------------

def enumerate_regular(host: SimpleGraph, d: int):
    """Yield every d-regular spanning subgraph of the host, in canonical_key order."""
    _check_capacity(host.n)
    found = [
        SimpleGraph(host.n, edges)
        for edges in _iter_target(host.adj, host.n, [0] + [d] * host.n)
    ]
    found.sort(key=canonical_key)
    yield from found


def enumerate_extensions(f: SimpleGraph, d: int):
    """Yield every d-regular graph on {1..n} containing f, in canonical_key order."""
    _check_capacity(f.n)
    target = [0] + [d - f.degree(v) for v in f.vertices()]
    base = f.edges()
    found = [
        SimpleGraph(f.n, base + list(extra))
        for extra in _iter_target(complement(f).adj, f.n, target)
    ]
    found.sort(key=canonical_key)
    yield from found


# -- one-pass edge profiles (used by the coupling processes) --------------------

def spanning_profile(host: SimpleGraph, d: int, cache: OracleCache = None):
    """(total, per-edge counts) for the d-regular spanning subgraphs of host.

    per-edge counts maps each host edge e to |{K : e in E(K)}|; edges carried
    by no subgraph are absent.  One enumeration pass serves every edge, which
    is what the deletion process needs at each stage.
    """
    _check_capacity(host.n)
    cache = DEFAULT_CACHE if cache is None else cache
    key = (canonical_key(host), d, "span-profile")
    hit = cache.get(key)
    if hit is not None:
        return hit
    total = 0
    tally = {}
    for edges in _iter_target(host.adj, host.n, [0] + [d] * host.n):
        total += 1
        for e in edges:
            tally[e] = tally.get(e, 0) + 1
    result = (total, tally)
    cache.put(key, result)
    return result


def extension_profile(f: SimpleGraph, d: int, cache: OracleCache = None):
    """(total, per-missing-edge counts) for the d-regular graphs containing f.

    per-missing-edge counts maps each non-edge e of f to |{K : f + e in K}|.
    """
    _check_capacity(f.n)
    cache = DEFAULT_CACHE if cache is None else cache
    key = (canonical_key(f), d, "ext-profile")
    hit = cache.get(key)
    if hit is not None:
        return hit
    target = [0] + [d - f.degree(v) for v in f.vertices()]
    total = 0
    tally = {}
    for extra in _iter_target(complement(f).adj, f.n, target):
        total += 1
        for e in extra:
            tally[e] = tally.get(e, 0) + 1
    result = (total, tally)
    cache.put(key, result)
    return result
