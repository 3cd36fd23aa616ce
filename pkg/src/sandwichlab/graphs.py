"""Labeled simple graphs on vertex set {1..n} and the elementary set/edge statistics.

Vertices are the integers 1..n, edges are unordered pairs stored canonically
as (u, v) with u < v.  Adjacency is kept as one bitmask row per vertex
(bit w of adj[v] set iff vw is an edge); Python integers make the rows
arbitrarily wide, so the same representation serves every n.  Graphs are
immutable after construction and safe to share across workers.
"""

from __future__ import annotations

from functools import lru_cache


class GraphFormatError(ValueError):
    """Raised for malformed graph literals or invalid edge descriptions."""


@lru_cache(maxsize=None)
def pair_list(n: int) -> tuple:
    """All unordered vertex pairs of {1..n} in lexicographic order."""
    return tuple((u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1))


@lru_cache(maxsize=None)
def pair_index(n: int) -> dict:
    """Map from canonical pair to its position in pair_list(n)."""
    return {p: i for i, p in enumerate(pair_list(n))}


def canonical_pair(u: int, v: int) -> tuple:
    if u == v:
        raise GraphFormatError(f"self-loop {u}-{v}")
    return (u, v) if u < v else (v, u)


class SimpleGraph:
    """Immutable labeled simple graph on {1..n}."""

    __slots__ = ("n", "adj")

    def __init__(self, n: int, edges=()):
        if n < 1:
            raise GraphFormatError(f"vertex count must be positive, got {n}")
        rows = [0] * (n + 1)
        for u, v in edges:
            u, v = canonical_pair(u, v)
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(f"edge {u}-{v} outside 1..{n}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        self.n = n
        self.adj = tuple(rows)

    @classmethod
    def _from_rows(cls, n: int, rows) -> "SimpleGraph":
        g = object.__new__(cls)
        g.n = n
        g.adj = tuple(rows)
        return g

    # -- basic accessors ---------------------------------------------------

    def vertices(self):
        return range(1, self.n + 1)

    def row(self, v: int) -> int:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def neighbors(self, v: int) -> frozenset:
        return frozenset(_bits(self.adj[v]))

    def edges(self) -> list:
        out = []
        for u in range(1, self.n + 1):
            row = self.adj[u] >> (u + 1)
            w = u + 1
            while row:
                if row & 1:
                    out.append((u, w))
                row >>= 1
                w += 1
        return out

    def edge_count(self) -> int:
        return sum(bin(r).count("1") for r in self.adj) // 2

    def edge_mask(self) -> int:
        """Edge set packed as a bitmask over pair_list(self.n)."""
        idx = pair_index(self.n)
        mask = 0
        for e in self.edges():
            mask |= 1 << idx[e]
        return mask

    # -- derived graphs ----------------------------------------------------

    def with_edge(self, u: int, v: int) -> "SimpleGraph":
        u, v = canonical_pair(u, v)
        rows = list(self.adj)
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        return SimpleGraph._from_rows(self.n, rows)

    def without_edge(self, u: int, v: int) -> "SimpleGraph":
        u, v = canonical_pair(u, v)
        rows = list(self.adj)
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
        return SimpleGraph._from_rows(self.n, rows)

    def is_subgraph_of(self, other: "SimpleGraph") -> bool:
        if self.n != other.n:
            return False
        return all(self.adj[v] & ~other.adj[v] == 0 for v in range(1, self.n + 1))

    # -- identity ----------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, SimpleGraph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"SimpleGraph({format_graph_literal(self)!r})"


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def vertex_mask(vertices) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


# -- constructors ------------------------------------------------------------

def empty_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n)


def complete_graph(n: int) -> SimpleGraph:
    full = (1 << (n + 1)) - 2  # bits 1..n
    return SimpleGraph._from_rows(n, [0] + [full & ~(1 << v) for v in range(1, n + 1)])


def cycle_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, [(v, v % n + 1) for v in range(1, n + 1)])


def graph_from_mask(n: int, mask: int) -> SimpleGraph:
    pairs = pair_list(n)
    return SimpleGraph(n, (pairs[i] for i in _bits(mask)))


def gnp_graph(n: int, p: float, rng) -> SimpleGraph:
    return SimpleGraph(n, (e for e in pair_list(n) if rng.random() < p))


def random_regular_graph(n: int, d: int, rng) -> SimpleGraph:
    """Uniform d-regular graph on {1..n} via the pairing model with restarts.

    Conditioning the pairing model on producing a simple graph leaves the
    uniform distribution on d-regular simple graphs, so full restarts keep
    exact uniformity.
    """
    if (n * d) % 2 != 0:
        raise ValueError("dn must be even")
    if not 0 <= d <= n - 1:
        raise ValueError("need 0 <= d <= n-1")
    while True:
        stubs = [v for v in range(1, n + 1) for _ in range(d)]
        rng.shuffle(stubs)
        edges = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v:
                ok = False
                break
            e = canonical_pair(u, v)
            if e in edges:
                ok = False
                break
            edges.add(e)
        if ok:
            return SimpleGraph(n, edges)


# -- elementary operations ----------------------------------------------------

def complement(g: SimpleGraph) -> SimpleGraph:
    """Edge complement on the same vertex set (an involution)."""
    n = g.n
    full = (1 << (n + 1)) - 2
    rows = [0] + [(full & ~g.adj[v]) & ~(1 << v) for v in range(1, n + 1)]
    return SimpleGraph._from_rows(n, rows)


def difference(f: SimpleGraph, k: SimpleGraph) -> SimpleGraph:
    """Graph with edge set E(f) \\ E(k) on the shared vertex set."""
    if f.n != k.n:
        raise ValueError(f"vertex count mismatch: {f.n} != {k.n}")
    return SimpleGraph._from_rows(f.n, [f.adj[v] & ~k.adj[v] for v in range(f.n + 1)])


def intersection(f: SimpleGraph, k: SimpleGraph) -> SimpleGraph:
    if f.n != k.n:
        raise ValueError(f"vertex count mismatch: {f.n} != {k.n}")
    return SimpleGraph._from_rows(f.n, [f.adj[v] & k.adj[v] for v in range(f.n + 1)])


def union(f: SimpleGraph, k: SimpleGraph) -> SimpleGraph:
    if f.n != k.n:
        raise ValueError(f"vertex count mismatch: {f.n} != {k.n}")
    return SimpleGraph._from_rows(f.n, [f.adj[v] | k.adj[v] for v in range(f.n + 1)])


def is_regular(g: SimpleGraph, d: int) -> bool:
    return all(g.degree(v) == d for v in g.vertices())


def degree(g: SimpleGraph, v: int) -> int:
    return g.degree(v)


def neighborhood(g: SimpleGraph, vertices) -> frozenset:
    """Vertices outside the given set with at least one edge into it."""
    umask = vertex_mask(vertices)
    out = 0
    for v in _bits(umask):
        out |= g.adj[v]
    return frozenset(_bits(out & ~umask))


def canonical_key(g: SimpleGraph):
    """Opaque key equal iff the labeled edge sets are identical."""
    return (g.n, g.edge_mask())


def edges_between(g: SimpleGraph, u_set, v_set) -> int:
    """Ordered-pair edge count |{(u,v): u in U, v in V, uv an edge}|.

    U and V may overlap; an edge inside the overlap is counted twice.
    """
    vmask = vertex_mask(v_set)
    return sum(bin(g.adj[u] & vmask).count("1") for u in set(u_set))


def edges_inside(g: SimpleGraph, u_set) -> int:
    """Number of edges with both endpoints in the set (each counted once)."""
    return edges_between(g, u_set, u_set) // 2


def multi_covered_edges(g: SimpleGraph, u_set) -> set:
    """Edges xy with x inside the set and y outside having >= 2 neighbors in it.

    Returns the set of canonical pairs; it is the obstruction to perfect
    neighborhood expansion of the set.
    """
    umask = vertex_mask(u_set)
    members = list(_bits(umask))
    out = set()
    for x in members:
        for y in _bits(g.adj[x] & ~umask):
            if bin(g.adj[y] & umask).count("1") >= 2:
                out.add(canonical_pair(x, y))
    return out


# -- literals ------------------------------------------------------------------

def format_graph_literal(g: SimpleGraph) -> str:
    edges = ",".join(f"{u}-{v}" for u, v in g.edges())
    return f"n={g.n};edges={edges}"


def parse_graph_literal(text: str) -> SimpleGraph:
    """Parse "n=5;edges=1-2,2-3,3-4,4-5,5-1" (ASCII, 1-indexed, u<v)."""
    try:
        n_part, e_part = text.strip().split(";")
        if not n_part.startswith("n=") or not e_part.startswith("edges="):
            raise ValueError
        n = int(n_part[2:])
        body = e_part[len("edges="):]
    except ValueError as exc:
        raise GraphFormatError(f"bad graph literal: {text!r}") from exc
    edges = []
    if body:
        for token in body.split(","):
            try:
                u, v = token.split("-")
                edges.append((int(u), int(v)))
            except ValueError as exc:
                raise GraphFormatError(f"bad edge token {token!r}") from exc
    return SimpleGraph(n, edges)
