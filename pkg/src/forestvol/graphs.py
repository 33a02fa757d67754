"""Undirected simple graphs with ranked edges, plus the enumerations the
volume engine is built on: connected vertex sets, forests, spanning trees,
and fundamental-cycle bookkeeping.

Vertex sets are plain int bitmasks throughout.  Edges carry a rank (their
position in the input edge list); several routines depend on that order, so
it is preserved by parsing and by induced subgraphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import GraphParseError


def bits(mask: int) -> Iterator[int]:
    """Yield set bit positions of mask in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    """Immutable simple graph on vertices 0..n-1 with an ordered edge list.

    edges is a tuple of (u, v) pairs with u < v; the index of a pair is the
    edge's rank.  Parallel edges and loops are rejected.
    """

    __slots__ = ("n", "edges", "adj", "adj_mask", "edge_index", "_hash")

    def __init__(self, n: int, edges: Sequence[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        edges = tuple((int(u), int(v)) for u, v in edges)
        adj: list[list[int]] = [[] for _ in range(n)]
        adj_mask = [0] * n
        edge_index: dict[tuple[int, int], int] = {}
        for rank, (u, v) in enumerate(edges):
            if not (0 <= u < v < n):
                raise ValueError(f"bad edge ({u}, {v}) for n={n}")
            if (u, v) in edge_index:
                raise ValueError(f"duplicate edge ({u}, {v})")
            edge_index[(u, v)] = rank
            adj[u].append(v)
            adj[v].append(u)
            adj_mask[u] |= 1 << v
            adj_mask[v] |= 1 << u
        self.n = n
        self.edges = edges
        self.adj = tuple(tuple(sorted(a)) for a in adj)
        self.adj_mask = tuple(adj_mask)
        self.edge_index = edge_index
        self._hash = hash((n, edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self.edges)})"

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def vertex_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, u: int, v: int) -> bool:
        if u > v:
            u, v = v, u
        return (u, v) in self.edge_index

    def edges_within(self, vset: int) -> list[int]:
        """Ranks of edges with both endpoints in the vertex mask, in rank order."""
        return [
            r
            for r, (u, v) in enumerate(self.edges)
            if (vset >> u) & 1 and (vset >> v) & 1
        ]

    def induced_subgraph(self, vset: int) -> tuple["Graph", tuple[int, ...]]:
        """Subgraph induced by the vertex mask.

        Returns (H, old_ids) where old_ids[i] is the original label of H's
        vertex i; H's edge order inherits the host's rank order.
        """
        old_ids = tuple(bits(vset))
        new_id = {v: i for i, v in enumerate(old_ids)}
        sub_edges = [
            (new_id[u], new_id[v])
            for u, v in self.edges
            if (vset >> u) & 1 and (vset >> v) & 1
        ]
        return Graph(len(old_ids), sub_edges), old_ids

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        return self.component_of(0) == self.vertex_mask()

    def component_of(self, v: int) -> int:
        """Bitmask of the connected component containing v."""
        seen = 1 << v
        frontier = seen
        while frontier:
            grow = 0
            for u in bits(frontier):
                grow |= self.adj_mask[u]
            frontier = grow & ~seen
            seen |= frontier
        return seen

    def components(self) -> list[int]:
        """Connected components as bitmasks, ordered by smallest vertex."""
        out = []
        remaining = self.vertex_mask()
        while remaining:
            v = (remaining & -remaining).bit_length() - 1
            comp = self.component_of(v)
            out.append(comp)
            remaining &= ~comp
        return out


@dataclass(frozen=True)
class Tree:
    """A tree inside a host graph: vertex bitmask plus host edge ranks.

    Single vertices are trees with no edges; every forest decomposes into
    these.  Construction does not validate; use tree_from_edges for that.
    """

    vset: int
    edge_ranks: tuple[int, ...]

    @property
    def size(self) -> int:
        return self.vset.bit_count()

    def vertices(self) -> tuple[int, ...]:
        return tuple(bits(self.vset))


def tree_from_edges(g: Graph, edge_ranks: Sequence[int]) -> Tree:
    """Validated Tree from host edge ranks (must be connected and acyclic)."""
    ranks = tuple(sorted(edge_ranks))
    if not ranks:
        raise ValueError("a tree needs at least one vertex; pass a singleton vset instead")
    vset = 0
    for r in ranks:
        u, v = g.edges[r]
        vset |= (1 << u) | (1 << v)
    if vset.bit_count() != len(ranks) + 1:
        raise ValueError("edge set is not a tree (wrong vertex count)")
    sub = Graph(
        vset.bit_count(),
        _relabel_edges(g, ranks, vset),
    )
    if not sub.is_connected():
        raise ValueError("edge set is not connected")
    return Tree(vset, ranks)


def _relabel_edges(
    g: Graph, ranks: Sequence[int], vset: int
) -> list[tuple[int, int]]:
    new_id = {v: i for i, v in enumerate(bits(vset))}
    return [(new_id[g.edges[r][0]], new_id[g.edges[r][1]]) for r in ranks]


def parse_graph(text: str) -> Graph:
    """Parse "n m" header plus m "u v" edge lines (0 <= u < v < n).

    Lines starting with '#' and blank lines are skipped; CRLF is accepted.
    Errors name the offending physical (1-based) line.
    """
    header: tuple[int, int] | None = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    last_line = 0
    for lineno, raw in enumerate(text.split("\n"), start=1):
        last_line = lineno
        line = raw.rstrip("\r").strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 2:
                raise GraphParseError(lineno, "header must be 'n m'")
            try:
                n, m = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise GraphParseError(lineno, "header must be two integers") from None
            if n < 0 or m < 0:
                raise GraphParseError(lineno, "header counts must be nonnegative")
            header = (n, m)
            continue
        n, m = header
        if len(edges) == m:
            raise GraphParseError(lineno, f"more than {m} edge lines")
        if len(tokens) != 2:
            raise GraphParseError(lineno, "edge line must be 'u v'")
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise GraphParseError(lineno, "edge endpoints must be integers") from None
        if u == v:
            raise GraphParseError(lineno, f"loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(lineno, f"vertex out of range in edge {u} {v}")
        if u > v:
            raise GraphParseError(lineno, f"edge {u} {v} must be written with u < v")
        if (u, v) in seen:
            raise GraphParseError(lineno, f"duplicate edge {u} {v}")
        seen.add((u, v))
        edges.append((u, v))
    if header is None:
        raise GraphParseError(last_line or 1, "missing 'n m' header")
    n, m = header
    if len(edges) != m:
        raise GraphParseError(
            last_line, f"expected {m} edges, found {len(edges)}"
        )
    return Graph(n, edges)


def format_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def enumerate_connected_sets(
    g: Graph, max_size: int, min_size: int = 1
) -> Iterator[int]:
    """All vertex subsets inducing a connected subgraph, as bitmasks.

    Sizes run from min_size to max_size.  Each set is produced exactly once:
    sets are rooted at their smallest vertex and grown only through
    neighbors above the root, with an exclusion mask preventing revisits.
    """
    if max_size <= 0:
        return
    n = g.n
    adj_mask = g.adj_mask
    for root in range(n):
        above = ~((1 << (root + 1)) - 1)

        def grow(sset: int, size: int, cand: int, banned: int) -> Iterator[int]:
            if size >= min_size:
                yield sset
            if size == max_size:
                return
            while cand:
                low = cand & -cand
                cand ^= low
                banned |= low
                u = low.bit_length() - 1
                new_cand = cand | (adj_mask[u] & above & ~banned & ~sset)
                yield from grow(sset | low, size + 1, new_cand, banned)

        yield from grow(1 << root, 1, adj_mask[root] & above, 0)


class _UnionFind:
    """Union-find without path compression so unions can be undone."""

    __slots__ = ("parent", "size")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            x = parent[x]
        return x

    def union(self, ru: int, rv: int) -> tuple[int, int]:
        """Merge roots ru != rv; returns (winner, loser) for undo."""
        if self.size[ru] < self.size[rv]:
            ru, rv = rv, ru
        self.parent[rv] = ru
        self.size[ru] += self.size[rv]
        return ru, rv

    def undo(self, winner: int, loser: int) -> None:
        self.size[winner] -= self.size[loser]
        self.parent[loser] = loser


def enumerate_forests(g: Graph, k: int) -> Iterator[tuple[Tree, ...]]:
    """All forests of g with at most k edges, decomposed into component Trees.

    The empty forest comes first; otherwise order is lexicographic in the
    rank sequence.  Isolated vertices are not part of the decomposition:
    only components with >= 1 edge appear.
    """
    for ranks in forest_edge_sets(g, k):
        yield forest_components(g, ranks)


def forest_edge_sets(g: Graph, k: int) -> Iterator[tuple[int, ...]]:
    """Rank tuples of all forests with at most k edges, empty first."""
    m = g.m
    k = min(k, max(g.n - 1, 0))
    uf = _UnionFind(g.n)
    chosen: list[int] = []
    ends = g.edges

    def rec(start: int) -> Iterator[tuple[int, ...]]:
        yield tuple(chosen)
        if len(chosen) == k:
            return
        for i in range(start, m):
            u, v = ends[i]
            ru = uf.find(u)
            rv = uf.find(v)
            if ru == rv:
                continue
            undo = uf.union(ru, rv)
            chosen.append(i)
            yield from rec(i + 1)
            chosen.pop()
            uf.undo(*undo)

    yield from rec(0)


def forest_components(g: Graph, ranks: Sequence[int]) -> tuple[Tree, ...]:
    """Split a forest's edge ranks into component Trees (smallest vertex first)."""
    if not ranks:
        return ()
    root: dict[int, int] = {}

    def find(x: int) -> int:
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    for r in ranks:
        u, v = g.edges[r]
        root.setdefault(u, u)
        root.setdefault(v, v)
        ru, rv = find(u), find(v)
        if ru != rv:
            root[max(ru, rv)] = min(ru, rv)
    comp_edges: dict[int, list[int]] = {}
    comp_vset: dict[int, int] = {}
    for r in sorted(ranks):
        u, v = g.edges[r]
        c = find(u)
        comp_edges.setdefault(c, []).append(r)
        comp_vset[c] = comp_vset.get(c, 0) | (1 << u) | (1 << v)
    return tuple(
        Tree(comp_vset[c], tuple(comp_edges[c])) for c in sorted(comp_edges)
    )


def spanning_trees(g: Graph) -> Iterator[Tree]:
    """Spanning trees of a connected graph, lexicographic in rank sequence."""
    n = g.n
    if n == 0:
        return
    if not g.is_connected():
        raise ValueError("spanning_trees requires a connected graph")
    if n == 1:
        yield Tree(1, ())
        return
    need = n - 1
    m = g.m
    uf = _UnionFind(n)
    chosen: list[int] = []
    ends = g.edges
    full = g.vertex_mask()

    def rec(start: int) -> Iterator[Tree]:
        if len(chosen) == need:
            yield Tree(full, tuple(chosen))
            return
        # not enough edges left to finish
        if m - start < need - len(chosen):
            return
        for i in range(start, m):
            if m - i < need - len(chosen):
                break
            u, v = ends[i]
            ru = uf.find(u)
            rv = uf.find(v)
            if ru == rv:
                continue
            undo = uf.union(ru, rv)
            chosen.append(i)
            yield from rec(i + 1)
            chosen.pop()
            uf.undo(*undo)

    yield from rec(0)


def broken_edges(g: Graph, tree: Tree) -> tuple[int, ...]:
    """Non-tree edges of g[V(tree)] that are the maximum-rank edge of their
    fundamental cycle with respect to the tree, in rank order.

    The tree must span g[V(tree)] for fundamental cycles to exist; callers
    pass either a spanning tree of g or a component tree with g restricted.
    """
    tset = set(tree.edge_ranks)
    # parent pointers from an arbitrary root of the tree
    root = (tree.vset & -tree.vset).bit_length() - 1
    parent: dict[int, tuple[int, int]] = {root: (-1, -1)}
    nbr: dict[int, list[tuple[int, int]]] = {v: [] for v in bits(tree.vset)}
    for r in tree.edge_ranks:
        u, v = g.edges[r]
        nbr[u].append((v, r))
        nbr[v].append((u, r))
    stack = [root]
    depth = {root: 0}
    while stack:
        x = stack.pop()
        for y, r in nbr[x]:
            if y not in parent:
                parent[y] = (x, r)
                depth[y] = depth[x] + 1
                stack.append(y)
    out = []
    for r in g.edges_within(tree.vset):
        if r in tset:
            continue
        u, v = g.edges[r]
        # max tree-edge rank on the u..v path
        path_max = -1
        a, b = u, v
        while a != b:
            if depth[a] < depth[b]:
                a, b = b, a
            a, pr = parent[a]
            path_max = max(path_max, pr)
        if r > path_max:
            out.append(r)
    return tuple(out)
