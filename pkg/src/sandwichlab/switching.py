"""Alternating-path counting and the switching constructions built on it.

A path here is always simple and alternates between two edge sets; lengths
count edges.  Between-endpoint counts treat paths as undirected with a
designated start, so each path is counted exactly once.  Switchings replace
the kept edges of an alternating cycle by its absent edges, carrying one
regular graph to another; the auxiliary bipartite graphs record every valid
switching between two families so their edges can be double-counted exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphs import (
    SimpleGraph,
    canonical_key,
    canonical_pair,
    complement,
    difference,
    edges_inside,
    vertex_mask,
    _bits,
)
from .oracle import enumerate_extensions, enumerate_regular


# -- core enumeration ---------------------------------------------------------

def _alt_count(odd_rows, even_rows, x, length, y, avoid_mask, weights=None):
    """Count (or weight-sum) simple alternating paths of `length` edges from x.

    Edge j uses odd_rows for odd j and even_rows for even j.  Intermediate
    vertices avoid avoid_mask; the final vertex must be y when y is given,
    otherwise any vertex (weighted by weights[v] if provided).
    """
    total = 0
    stack = [(x, 1 << x, 1)]
    while stack:
        v, visited, j = stack.pop()
        row = odd_rows[v] if j & 1 else even_rows[v]
        if j == length:
            if y is not None:
                if (row >> y) & 1 and not (visited >> y) & 1:
                    total += 1
            else:
                ends = row & ~visited & ~avoid_mask
                if weights is None:
                    total += bin(ends).count("1")
                else:
                    for w in _bits(ends):
                        total += weights[w]
            continue
        for w in _bits(row & ~visited & ~avoid_mask):
            stack.append((w, visited | (1 << w), j + 1))
    return total


def _alt_paths(odd_rows, even_rows, x, length, y, avoid_mask):
    """Yield the vertex tuples of the paths counted by _alt_count."""
    path = [x]

    def rec(v, visited, j):
        row = odd_rows[v] if j & 1 else even_rows[v]
        if j == length:
            if y is not None:
                if (row >> y) & 1 and not (visited >> y) & 1:
                    path.append(y)
                    yield tuple(path)
                    path.pop()
            else:
                for w in _bits(row & ~visited & ~avoid_mask):
                    path.append(w)
                    yield tuple(path)
                    path.pop()
            return
        for w in _bits(row & ~visited & ~avoid_mask):
            path.append(w)
            yield from rec(w, visited | (1 << w), j + 1)
            path.pop()

    yield from rec(x, 1 << x, 1)


def _check_vertex(g, v):
    if not 1 <= v <= g.n:
        raise ValueError(f"vertex {v} outside 1..{g.n}")


def count_alternating(f: SimpleGraph, k: SimpleGraph, x: int, length: int,
                      y: int = None, avoid=(), start_in_k: bool = False) -> int:
    """Exact count of simple paths of `length` edges alternating (F\\K, K).

    The first edge lies in F\\K unless start_in_k; intermediate vertices must
    avoid the given set; with y given the paths run from x to y.
    """
    if f.n != k.n:
        raise ValueError("graphs must share a vertex set")
    if length < 1:
        raise ValueError("length must be positive")
    _check_vertex(f, x)
    avoid_mask = vertex_mask(avoid)
    if y is not None:
        _check_vertex(f, y)
        if y == x:
            raise ValueError("endpoints must be distinct")
        if avoid_mask & ((1 << x) | (1 << y)):
            raise ValueError("avoid set must not contain the endpoints")
    fk = difference(f, k)
    first, second = (k.adj, fk.adj) if start_in_k else (fk.adj, k.adj)
    return _alt_count(first, second, x, length, y, avoid_mask)


def count_alternating_paths(f: SimpleGraph, k: SimpleGraph, x: int, y: int,
                            half_length: int, avoid=(),
                            start_in_k: bool = False) -> int:
    """Count (F\\K, K)-alternating x,y-paths of length 2*half_length avoiding Z."""
    if half_length < 1:
        raise ValueError("half_length must be positive")
    return count_alternating(f, k, x, 2 * half_length, y=y, avoid=avoid,
                             start_in_k=start_in_k)


def count_alternating_from(f: SimpleGraph, k: SimpleGraph, v: int,
                           half_length: int, start_in_k: bool = False) -> int:
    """Count (F\\K, K)-alternating paths of length 2*half_length starting at v."""
    if half_length < 1:
        raise ValueError("half_length must be positive")
    return count_alternating(f, k, v, 2 * half_length, start_in_k=start_in_k)


def weighted_endpoint_sum(f: SimpleGraph, k: SimpleGraph, v: int, i: int) -> int:
    """Sum of d_{F\\K}(u) over (K, F\\K)-alternating v,u-paths of length 2i-1."""
    if i < 1:
        raise ValueError("i must be positive")
    if f.n != k.n:
        raise ValueError("graphs must share a vertex set")
    _check_vertex(f, v)
    fk = difference(f, k)
    weights = [0] * (f.n + 1)
    for u in range(1, f.n + 1):
        weights[u] = fk.degree(u)
    return _alt_count(k.adj, fk.adj, v, 2 * i - 1, None, 0, weights=weights)


@dataclass(frozen=True)
class PathQuery:
    """Declarative form of a path-count request (used by the CLI)."""

    f: SimpleGraph
    k: SimpleGraph
    x: int
    half_length: int
    y: int = None
    avoid: frozenset = frozenset()
    mode: str = "between-endpoints"
    start_in_k: bool = False

    def run(self) -> int:
        if self.mode == "between-endpoints":
            return count_alternating_paths(self.f, self.k, self.x, self.y,
                                           self.half_length, self.avoid,
                                           self.start_in_k)
        if self.mode == "from-vertex":
            return count_alternating_from(self.f, self.k, self.x,
                                          self.half_length, self.start_in_k)
        if self.mode == "weighted-endpoint-sum":
            return weighted_endpoint_sum(self.f, self.k, self.x, self.half_length)
        raise ValueError(f"unknown mode {self.mode!r}")


# -- cycle switchings -----------------------------------------------------------

def _apply_switch(k: SimpleGraph, removed, added) -> SimpleGraph:
    rows = list(k.adj)
    for u, v in removed:
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
    for u, v in added:
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return SimpleGraph._from_rows(k.n, rows)


def _path_edges(path):
    return [canonical_pair(path[i], path[i + 1]) for i in range(len(path) - 1)]


def switch_neighbors_le(f: SimpleGraph, d: int, k: SimpleGraph, e, ell: int) -> list:
    """All K' in K_d(F) without e whose symmetric difference with K is one
    (2*ell+2)-cycle (necessarily through e).

    The cycle minus e is an (F\\K, K)-alternating path of length 2*ell+1
    between e's endpoints, so each such path gives one neighbor.
    """
    u, v = canonical_pair(*e)
    if not k.has_edge(u, v):
        raise ValueError("e must be an edge of K")
    if not k.is_subgraph_of(f):
        raise ValueError("K must be a subgraph of the host")
    if ell < 1:
        raise ValueError("ell must be positive")
    fk = difference(f, k)
    out = []
    for path in _alt_paths(fk.adj, k.adj, u, 2 * ell + 1, v, 0):
        edges = _path_edges(path)
        added = edges[0::2]
        removed = edges[1::2] + [(u, v)]
        out.append(_apply_switch(k, removed, added))
    return out


def switch_neighbors_le_absent(f: SimpleGraph, d: int, k: SimpleGraph, e,
                               ell: int) -> list:
    """Mirror of switch_neighbors_le from the side that lacks e: all K' with
    e in E(K') whose symmetric difference with K is one (2*ell+2)-cycle."""
    u, v = canonical_pair(*e)
    if k.has_edge(u, v):
        raise ValueError("e must be absent from K")
    if not f.has_edge(u, v):
        raise ValueError("e must be an edge of the host")
    if ell < 1:
        raise ValueError("ell must be positive")
    fk = difference(f, k)
    out = []
    for path in _alt_paths(k.adj, fk.adj, u, 2 * ell + 1, v, 0):
        edges = _path_edges(path)
        removed = edges[0::2]
        added = edges[1::2] + [(u, v)]
        out.append(_apply_switch(k, removed, added))
    return out


def switch_neighbors_lef(f: SimpleGraph, d: int, k: SimpleGraph, e, f_edge,
                         ell: int) -> list:
    """All K' in K_d(F) with f but not e reachable by a two-path switching.

    The symmetric difference minus {e, f} is two vertex-disjoint paths, each
    alternating (F\\K, K) of length 2*ell+2, starting at an endpoint of e and
    ending at an endpoint of f.  (Equivalently, each path alternates between
    K'\\K and K\\K', which is the same edge pattern read relative to K'.)
    Both endpoint pairings are admitted since the labeling of e and f is
    arbitrary; the relation is symmetric under swapping (K, e) with (K', f).
    """
    u1, u2 = canonical_pair(*e)
    v1, v2 = canonical_pair(*f_edge)
    if not k.has_edge(u1, u2):
        raise ValueError("e must be an edge of K")
    if k.has_edge(v1, v2):
        raise ValueError("f must be absent from K")
    if not f.has_edge(v1, v2):
        raise ValueError("f must be an edge of the host")
    if len({u1, u2, v1, v2}) != 4:
        raise ValueError("e and f must share no vertices")
    if ell < 1:
        raise ValueError("ell must be positive")
    fk = difference(f, k)
    length = 2 * ell + 2
    out = []
    for w1, w2 in ((v1, v2), (v2, v1)):
        avoid1 = (1 << u2) | (1 << w2)
        for p1 in _alt_paths(fk.adj, k.adj, u1, length, w1, avoid1):
            block = 0
            for t in p1:
                block |= 1 << t
            if (block >> u2) & 1 or (block >> w2) & 1:
                continue
            for p2 in _alt_paths(fk.adj, k.adj, u2, length, w2, block):
                edges1 = _path_edges(p1)
                edges2 = _path_edges(p2)
                added = edges1[0::2] + edges2[0::2] + [(v1, v2)]
                removed = edges1[1::2] + edges2[1::2] + [(u1, u2)]
                out.append(_apply_switch(k, removed, added))
    return out


# -- six-cycle switchings ---------------------------------------------------------

def six_cycle_statistic(k: SimpleGraph, wprime, mode: str) -> int:
    """The quantity the six-cycle switchings walk down.

    two-in: edge count inside the set; one-in: sum over outside vertices of
    max(degree into the set - 1, 0).
    """
    wmask = vertex_mask(wprime)
    if mode == "two-in":
        return edges_inside(k, wprime)
    if mode == "one-in":
        total = 0
        for v in range(1, k.n + 1):
            if (wmask >> v) & 1:
                continue
            deg_in = bin(k.adj[v] & wmask).count("1")
            if deg_in > 1:
                total += deg_in - 1
        return total
    raise ValueError(f"unknown mode {mode!r}")


def _six_cycles(k: SimpleGraph, wmask: int, mode: str, reverse: bool):
    """Alternating 6-cycles realizing a unit move of the tracked statistic.

    Forward cycles remove three K-edges and add three non-edges, lowering the
    statistic by exactly 1; reverse=True enumerates the mirror cycles that
    raise it by exactly 1 (the same relation seen from the other class).
    Yields (removed_edges, added_edges) with the cycle being their union.
    """
    n = k.n
    adj = k.adj
    full = (1 << (n + 1)) - 2
    non = [0] + [(full & ~adj[v]) & ~(1 << v) for v in range(1, n + 1)]
    first, second = (adj, non) if not reverse else (non, adj)
    # cycle v1-v2-v3-v4-v5-v6 with edges v1v2, v3v4, v5v6 in `first`
    # and v2v3, v4v5, v6v1 in `second`
    if mode == "two-in":
        starts = [(v1, v2) for v1 in range(1, n + 1) if (wmask >> v1) & 1
                  for v2 in _bits(first[v1] & wmask)]
    elif mode == "one-in":
        starts = [(v1, v2) for v1 in range(1, n + 1) if (wmask >> v1) & 1
                  for v2 in _bits(first[v1] & ~wmask)]
    else:
        raise ValueError(f"unknown mode {mode!r}")
    seen = set()
    for v1, v2 in starts:
        if mode == "one-in":
            deg2 = bin(adj[v2] & wmask).count("1")
            if not reverse and deg2 < 2:
                continue
            if reverse and deg2 < 1:
                continue
        used12 = (1 << v1) | (1 << v2)
        for v3 in _bits(second[v2] & ~wmask & ~used12):
            used3 = used12 | (1 << v3)
            for v4 in _bits(first[v3] & ~wmask & ~used3):
                used4 = used3 | (1 << v4)
                for v5 in _bits(second[v4] & ~wmask & ~used4):
                    used5 = used4 | (1 << v5)
                    for v6 in _bits(first[v5] & ~wmask & ~used5):
                        if not (second[v6] >> v1) & 1:
                            continue
                        if mode == "one-in":
                            deg6 = bin(adj[v6] & wmask).count("1")
                            if not reverse and deg6 != 0:
                                continue
                            if reverse and deg6 > 1:
                                continue
                        removed = [canonical_pair(v1, v2), canonical_pair(v3, v4),
                                   canonical_pair(v5, v6)]
                        added = [canonical_pair(v2, v3), canonical_pair(v4, v5),
                                 canonical_pair(v6, v1)]
                        if reverse:
                            removed, added = added, removed
                        key = frozenset(removed) | frozenset(added)
                        if key in seen:
                            continue
                        seen.add(key)
                        yield removed, added


def six_cycle_switches(k: SimpleGraph, wprime, mode: str,
                       reverse: bool = False) -> list:
    """Apply every qualifying six-cycle switching; returns the switched graphs."""
    wmask = vertex_mask(wprime)
    return [_apply_switch(k, removed, added)
            for removed, added in _six_cycles(k, wmask, mode, reverse)]


def six_cycle_degree(k: SimpleGraph, wprime, mode: str) -> int:
    """Number of six-cycle switchings from K lowering the tracked statistic by 1."""
    wmask = vertex_mask(wprime)
    return sum(1 for _ in _six_cycles(k, wmask, mode, False))


# -- ten-cycle switchings ----------------------------------------------------------

def ten_cycle_switches(f: SimpleGraph, d: int, k: SimpleGraph, e, f_edge) -> list:
    """All K' containing F+f but not e whose symmetric difference with K is a
    10-cycle carrying e and f on opposite sides.

    The cycle minus {e, f} is two vertex-disjoint length-4 paths alternating
    (complement of K, K\\F), one from each endpoint of e to an endpoint of f;
    both endpoint pairings are admitted.
    """
    x1, x2 = canonical_pair(*e)
    y1, y2 = canonical_pair(*f_edge)
    if not f.is_subgraph_of(k):
        raise ValueError("the partial graph must lie inside K")
    if f.has_edge(x1, x2) or f.has_edge(y1, y2):
        raise ValueError("e and f must be absent from the partial graph")
    if not k.has_edge(x1, x2):
        raise ValueError("e must be an edge of K")
    if k.has_edge(y1, y2):
        raise ValueError("f must be absent from K")
    if len({x1, x2, y1, y2}) != 4:
        raise ValueError("e and f must share no vertices")
    non_k = complement(k)
    spare = difference(k, f)
    out = []
    for w1, w2 in ((y1, y2), (y2, y1)):
        avoid1 = (1 << x2) | (1 << w2)
        for p1 in _alt_paths(non_k.adj, spare.adj, x1, 4, w1, avoid1):
            block = 0
            for t in p1:
                block |= 1 << t
            if (block >> x2) & 1 or (block >> w2) & 1:
                continue
            for p2 in _alt_paths(non_k.adj, spare.adj, x2, 4, w2, block):
                edges1 = _path_edges(p1)
                edges2 = _path_edges(p2)
                added = edges1[0::2] + edges2[0::2] + [(y1, y2)]
                removed = edges1[1::2] + edges2[1::2] + [(x1, x2)]
                out.append(_apply_switch(k, removed, added))
    return out


def ten_cycle_degree(f: SimpleGraph, d: int, k: SimpleGraph, e, f_edge) -> int:
    if k.n < 10:
        return 0
    return len(ten_cycle_switches(f, d, k, e, f_edge))


# -- auxiliary bipartite graphs -----------------------------------------------------

@dataclass
class SwitchingGraph:
    """Bipartite record of every switching between two families.

    left_degrees come from enumerating switchings out of the left class,
    right_degrees from the independent reverse enumeration out of the right
    class; the two routes must tell one consistent story.
    """

    kind: str
    left: list
    right: list
    edges: list
    left_degrees: dict
    right_degrees: dict
    cross_consistent: bool = True
    meta: dict = field(default_factory=dict)


def verify_double_count(graph: SwitchingGraph) -> dict:
    """Exact double count: sum of left degrees = sum of right degrees = e(L)."""
    left_sum = sum(graph.left_degrees.get(k, 0) for k in graph.left)
    right_sum = sum(graph.right_degrees.get(k, 0) for k in graph.right)
    n_edges = len(graph.edges)
    report = {
        "kind": graph.kind,
        "edges": n_edges,
        "left_sum": left_sum,
        "right_sum": right_sum,
        "left_min": min((graph.left_degrees.get(k, 0) for k in graph.left), default=0),
        "left_max": max((graph.left_degrees.get(k, 0) for k in graph.left), default=0),
        "right_min": min((graph.right_degrees.get(k, 0) for k in graph.right), default=0),
        "right_max": max((graph.right_degrees.get(k, 0) for k in graph.right), default=0),
        "cross_consistent": graph.cross_consistent,
        "passed": left_sum == right_sum == n_edges and graph.cross_consistent,
    }
    return report


def _bipartite_from_switches(kind, left_graphs, forward, reverse, meta=None):
    """Assemble a SwitchingGraph from forward/reverse switching enumerators.

    forward(K) lists switch outputs of a left member; reverse(K') lists switch
    outputs of a right member, which are intersected with the left class so the
    double count is over exactly the recorded edges.
    """
    left_keys = []
    left_set = {}
    for g in left_graphs:
        key = canonical_key(g)
        left_keys.append(key)
        left_set[key] = g
    forward_edges = set()
    left_degrees = {}
    right_members = {}
    for key, g in left_set.items():
        outs = forward(g)
        left_degrees[key] = len(outs)
        for h in outs:
            hk = canonical_key(h)
            right_members[hk] = h
            forward_edges.add((key, hk))
    right_keys = sorted(right_members)
    reverse_edges = set()
    right_degrees = {}
    for hk in right_keys:
        backs = [canonical_key(g) for g in reverse(right_members[hk])]
        inside = [bk for bk in backs if bk in left_set]
        right_degrees[hk] = len(inside)
        for bk in inside:
            reverse_edges.add((bk, hk))
    return SwitchingGraph(
        kind=kind,
        left=sorted(left_keys),
        right=right_keys,
        edges=sorted(forward_edges),
        left_degrees=left_degrees,
        right_degrees=right_degrees,
        cross_consistent=forward_edges == reverse_edges,
        meta=meta or {},
    )


def build_le_graph(f: SimpleGraph, d: int, e, ell: int) -> SwitchingGraph:
    """Full auxiliary graph between the K_d(F) members with and without e."""
    u, v = canonical_pair(*e)
    left = [k for k in enumerate_regular(f, d) if k.has_edge(u, v)]
    return _bipartite_from_switches(
        "le",
        left,
        lambda k: switch_neighbors_le(f, d, k, e, ell),
        lambda k: switch_neighbors_le_absent(f, d, k, e, ell),
        meta={"e": (u, v), "ell": ell},
    )


def build_lef_graph(f: SimpleGraph, d: int, e, f_edge, ell: int) -> SwitchingGraph:
    """Full auxiliary graph between the e-but-not-f and f-but-not-e classes."""
    u1, u2 = canonical_pair(*e)
    v1, v2 = canonical_pair(*f_edge)
    left = [k for k in enumerate_regular(f, d)
            if k.has_edge(u1, u2) and not k.has_edge(v1, v2)]
    return _bipartite_from_switches(
        "lef",
        left,
        lambda k: switch_neighbors_lef(f, d, k, e, f_edge, ell),
        lambda k: switch_neighbors_lef(f, d, k, f_edge, e, ell),
        meta={"e": (u1, u2), "f": (v1, v2), "ell": ell},
    )


def build_six_cycle_graph(d: int, wprime, mode: str, left_members) -> SwitchingGraph:
    """Auxiliary graph out of a family of regular graphs sharing one statistic
    value, with edges the unit-decreasing six-cycle switchings."""
    left_members = list(left_members)
    values = {six_cycle_statistic(k, wprime, mode) for k in left_members}
    if len(values) > 1:
        raise ValueError(f"left class mixes statistic values {sorted(values)}")
    return _bipartite_from_switches(
        f"six-{mode}",
        left_members,
        lambda k: six_cycle_switches(k, wprime, mode, reverse=False),
        lambda k: six_cycle_switches(k, wprime, mode, reverse=True),
        meta={"wprime": sorted(set(wprime)), "mode": mode,
              "stat": values.pop() if values else None},
    )


def build_ten_cycle_graph(f: SimpleGraph, d: int, e, f_edge) -> SwitchingGraph:
    """Full auxiliary graph between the extension classes of F+e and F+f."""
    u1, u2 = canonical_pair(*e)
    v1, v2 = canonical_pair(*f_edge)
    left = [k for k in enumerate_extensions(f.with_edge(u1, u2), d)
            if not k.has_edge(v1, v2)]
    return _bipartite_from_switches(
        "ten",
        left,
        lambda k: ten_cycle_switches(f, d, k, e, f_edge),
        lambda k: ten_cycle_switches(f, d, k, f_edge, e),
        meta={"e": (u1, u2), "f": (v1, v2)},
    )
