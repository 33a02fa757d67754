"""Exact tree weights for the truncated-box cell decomposition.

For a tree T spanning H = G[V(T)] with broken edge set E_T, the normalized
cell measure is

    hat_w(T) = integral over the box I^{V(T)}, I = [0, 1/2+delta], of
               prod_{uv in T} 1[x_u+x_v > 1] * prod_{st in E_T} 1[x_s+x_t <= 1]

and the signed weight is w_T = (-1)^{#edges(T)} hat_w / (1/2+delta)^{|V(T)|}.

hat_w is computed exactly by splitting the box into cells P_S over "nice"
vertex sets S, enumerating the admissible (s, t) maps on the complement,
and integrating the resulting polynomial over the order polytope of the
comparability digraph D_(s,t) via the F_U subset recursion.  Everything is
rational; values depend only on the isomorphism type of (T, E_T) and are
memoized by a canonical key of that edge-bicolored graph.

The integrand factors as delta^{|V(T)|} times a delta-free rational, so the
memo serves every delta at once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

from . import kernel
from .canon import colored_canonical_form
from .graphs import Graph, Tree, bits, broken_edges
from .polynomials import MultiPoly

PLUS = -3  # sentinel value x = 1/2 (top of J)
MINUS = -4  # sentinel value x = 1/2 - delta (bottom of J)

_SHIFT = 6


@dataclass(frozen=True)
class DeltaParams:
    """Truncation parameter; the box is [0, 1/2+delta]^V with delta in [0, 1/2)."""

    delta: Fraction

    def __post_init__(self):
        d = Fraction(self.delta)
        object.__setattr__(self, "delta", d)
        if not (0 <= d < Fraction(1, 2)):
            raise ValueError("delta must lie in [0, 1/2)")

    @property
    def box_hi(self) -> Fraction:
        return Fraction(1, 2) + self.delta

    @property
    def j_lo(self) -> Fraction:
        return Fraction(1, 2) - self.delta


@dataclass(frozen=True)
class Poset:
    """Comparability digraph on a vertex set; arc (u, v) means x_u < x_v."""

    elements: tuple[int, ...]
    arcs: frozenset[tuple[int, int]]
    acyclic: bool = field(init=False)

    def __post_init__(self):
        elems = tuple(sorted(self.elements))
        object.__setattr__(self, "elements", elems)
        eset = set(elems)
        for u, v in self.arcs:
            if u not in eset or v not in eset:
                raise ValueError(f"arc ({u}, {v}) leaves the element set")
            if u == v:
                raise ValueError(f"self-loop at {u}")
        object.__setattr__(self, "acyclic", self._kahn())

    def _kahn(self) -> bool:
        remaining = set(self.elements)
        preds = {v: set() for v in self.elements}
        for u, v in self.arcs:
            preds[v].add(u)
        while remaining:
            free = [v for v in remaining if not (preds[v] & remaining)]
            if not free:
                return False
            remaining.difference_update(free)
        return True

    def min_elements(self, subset: set[int] | frozenset[int]) -> list[int]:
        """Minimal elements of a subset under the arc order."""
        return sorted(
            v
            for v in subset
            if not any(u in subset for u, w in self.arcs if w == v)
        )


@dataclass(frozen=True)
class TreeWeightRecord:
    tree: Tree
    host: Graph
    broken: tuple[int, ...]
    iso_key: bytes
    hat_w: Fraction
    w: Fraction


def nice_sets(g: Graph, tree: Tree, broken: tuple[int, ...]) -> Iterator[int]:
    """Vertex masks S with S independent among tree edges and V(T) \\ S
    independent among broken edges."""
    tadj = _local_adjacency(g, tree.edge_ranks)
    badj = _local_adjacency(g, broken)
    vset = tree.vset
    for s_mask in _independent_subsets(vset, tadj):
        comp = vset & ~s_mask
        if _is_independent(comp, badj):
            yield s_mask


def st_maps(
    g: Graph, tree: Tree, broken: tuple[int, ...], s_mask: int
) -> Iterator[tuple[dict[int, int], dict[int, int]]]:
    """All (s, t) assignments on V(T) \\ S.

    s(v) is a tree neighbor of v inside S, or PLUS if there is none;
    t(v) is a broken-edge neighbor inside S, or MINUS.
    """
    tadj = _local_adjacency(g, tree.edge_ranks)
    badj = _local_adjacency(g, broken)
    comp = sorted(bits(tree.vset & ~s_mask))
    s_choices = [sorted(bits(tadj.get(v, 0) & s_mask)) or [PLUS] for v in comp]
    t_choices = [sorted(bits(badj.get(v, 0) & s_mask)) or [MINUS] for v in comp]
    for s_pick in itertools.product(*s_choices):
        for t_pick in itertools.product(*t_choices):
            yield dict(zip(comp, s_pick)), dict(zip(comp, t_pick))


def build_poset(
    g: Graph,
    tree: Tree,
    broken: tuple[int, ...],
    s_mask: int,
    smap: Mapping[int, int],
    tmap: Mapping[int, int],
) -> Poset:
    """Comparability digraph of one (S, s, t) cell; sentinel endpoints drop out."""
    tadj = _local_adjacency(g, tree.edge_ranks)
    badj = _local_adjacency(g, broken)
    arcs: set[tuple[int, int]] = set()
    for v in bits(tree.vset & ~s_mask):
        sv = smap[v]
        tv = tmap[v]
        if sv != PLUS and tv != MINUS:
            arcs.add((tv, sv))
        if sv != PLUS:
            for w in bits(tadj.get(v, 0) & s_mask):
                if w != sv:
                    arcs.add((sv, w))
        if tv != MINUS:
            for w in bits(badj.get(v, 0) & s_mask):
                if w != tv:
                    arcs.add((w, tv))
    return Poset(tuple(bits(s_mask)), frozenset(arcs))


def poset_integral(
    poset: Poset, p: MultiPoly, a: Fraction | int, b: Fraction | int
) -> Fraction:
    """Integral of p over {a < x_v < b, v in elements; x_u < x_v per arc}."""
    if not poset.acyclic:
        raise ValueError("cyclic comparability digraph; the cell is empty")
    a = Fraction(a)
    b = Fraction(b)
    elems = poset.elements
    k = len(elems)
    index = {v: i for i, v in enumerate(elems)}
    stray = p.variables() - set(elems)
    if stray:
        raise ValueError(f"polynomial variables {sorted(stray)} outside the poset")
    den = 1
    for coef in p.terms.values():
        den = den * coef.denominator // _gcd(den, coef.denominator)
    terms: dict[int, int] = {}
    for mono, coef in p.terms.items():
        key = 0
        for v, e in mono:
            if e >= 63:
                raise ValueError("exponent too large for the packed kernel")
            key += e << (_SHIFT * index[v])
        terms[key] = terms.get(key, 0) + int(coef * den)
    preds = [0] * k
    for u, v in poset.arcs:
        preds[index[v]] |= 1 << index[u]
    num, dnm = kernel.poset_integral_packed(
        k,
        tuple(preds),
        terms,
        den,
        a.numerator,
        a.denominator,
        b.numerator,
        b.denominator,
    )
    return Fraction(num, dnm)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


class WeightCache:
    """Process-wide memo of delta-free normalized weights.

    normalized maps the canonical key of the bicolored (tree, broken) graph
    to W with hat_w = delta^{|V|} * W.  host_weights(g, dp) returns a lazy
    table mapping sorted edge-rank tuples (trees inside g) to w_T, which is
    what the forest-sum inner loops consume.
    """

    def __init__(self):
        self.normalized: dict[bytes, Fraction] = {}
        self.hits = 0
        self.misses = 0
        self._host_tables: dict[tuple[Graph, Fraction], _HostTable] = {}

    def normalized_weight(
        self,
        nv: int,
        tedges: tuple[tuple[int, int], ...],
        bedges: tuple[tuple[int, int], ...],
    ) -> tuple[bytes, Fraction]:
        key = colored_canonical_form(
            nv,
            [(u, v, 1) for u, v in tedges] + [(u, v, 2) for u, v in bedges],
        )
        w = self.normalized.get(key)
        if w is None:
            self.misses += 1
            w = _normalized_weight_dp(nv, tedges, bedges)
            self.normalized[key] = w
        else:
            self.hits += 1
        return key, w

    def host_weights(self, g: Graph, dp: DeltaParams) -> "_HostTable":
        ck = (g, dp.delta)
        tbl = self._host_tables.get(ck)
        if tbl is None:
            tbl = _HostTable(self, g, dp)
            self._host_tables[ck] = tbl
        return tbl

    def clear(self) -> None:
        self.normalized.clear()
        self._host_tables.clear()
        self.hits = 0
        self.misses = 0


class _HostTable(dict):
    """edge-rank tuple -> w_T for trees inside one host graph at one delta."""

    __slots__ = ("cache", "g", "dp")

    def __init__(self, cache: WeightCache, g: Graph, dp: DeltaParams):
        super().__init__()
        self.cache = cache
        self.g = g
        self.dp = dp

    def __missing__(self, ranks: tuple[int, ...]) -> Fraction:
        vset = 0
        for r in ranks:
            u, v = self.g.edges[r]
            vset |= (1 << u) | (1 << v)
        rec = tree_weight(
            self.g, Tree(vset, ranks), self.dp, cache=self.cache, with_host=False
        )
        w = rec.w
        self[ranks] = w
        return w


_default_cache = WeightCache()


def default_cache() -> WeightCache:
    return _default_cache


def hat_w(
    g: Graph,
    tree: Tree,
    dp: DeltaParams,
    broken: tuple[int, ...] | None = None,
    cache: WeightCache | None = None,
) -> Fraction:
    return tree_weight(g, tree, dp, broken=broken, cache=cache, with_host=False).hat_w


def hat_w_cellwise(
    g: Graph,
    tree: Tree,
    dp: DeltaParams,
    broken: tuple[int, ...] | None = None,
    trace=None,
) -> Fraction:
    """hat_w recomputed cell by cell in original coordinates, without the
    delta factorization or the memo; slower, kept as a cross-check.

    trace, when given, receives one line of text per cell.
    """
    if broken is None:
        broken = broken_edges(g, tree)
    lo, hi = dp.j_lo, Fraction(1, 2)
    consts = {PLUS: hi, MINUS: lo}
    total = Fraction(0)
    for s_mask in nice_sets(g, tree, broken):
        for smap, tmap in st_maps(g, tree, broken, s_mask):
            p = MultiPoly.constant(1)
            for v in sorted(smap):
                sv, tv = smap[v], tmap[v]
                ps = (
                    MultiPoly.constant(consts[sv])
                    if sv in consts
                    else MultiPoly.variable(sv)
                )
                pt = (
                    MultiPoly.constant(consts[tv])
                    if tv in consts
                    else MultiPoly.variable(tv)
                )
                p = p * (ps - pt)
            poset = build_poset(g, tree, broken, s_mask, smap, tmap)
            label = "S={%s} s=%s t=%s" % (
                ",".join(map(str, bits(s_mask))),
                _map_str(smap),
                _map_str(tmap),
            )
            if not poset.acyclic:
                if trace is not None:
                    trace(f"{label}: cyclic, cell empty")
                continue
            cell = poset_integral(poset, p, lo, hi)
            total += cell
            if trace is not None:
                trace(f"{label}: integrand {p} -> {cell}")
    return total


def _map_str(m: Mapping[int, int]) -> str:
    sym = {PLUS: "+", MINUS: "-"}
    return "{" + ",".join(f"{v}:{sym.get(x, x)}" for v, x in sorted(m.items())) + "}"


def tree_weight(
    g: Graph,
    tree: Tree,
    dp: DeltaParams,
    broken: tuple[int, ...] | None = None,
    cache: WeightCache | None = None,
    with_host: bool = True,
) -> TreeWeightRecord:
    """Weight record for a tree with host g[V(tree)]."""
    if not tree.edge_ranks:
        raise ValueError("tree weights are defined for trees with >= 1 edge")
    if broken is None:
        broken = broken_edges(g, tree)
    if cache is None:
        cache = _default_cache
    ids = tree.vertices()
    nv = len(ids)
    local = {v: i for i, v in enumerate(ids)}
    tl = tuple(_local_pair(g, r, local) for r in tree.edge_ranks)
    bl = tuple(_local_pair(g, r, local) for r in broken)
    if dp.delta == 0:
        # the window J collapses to a point; skip the DP
        key = colored_canonical_form(
            nv, [(u, v, 1) for u, v in tl] + [(u, v, 2) for u, v in bl]
        )
        hat = Fraction(0)
        w = Fraction(0)
    else:
        key, wnorm = cache.normalized_weight(nv, tl, bl)
        hat = wnorm * dp.delta**nv
        sign = -1 if len(tree.edge_ranks) % 2 else 1
        w = sign * hat / dp.box_hi**nv
    host = g.induced_subgraph(tree.vset)[0] if with_host else Graph(0, ())
    return TreeWeightRecord(
        tree=tree, host=host, broken=tuple(broken), iso_key=key, hat_w=hat, w=w
    )


def _local_pair(
    g: Graph, rank: int, local: Mapping[int, int]
) -> tuple[int, int]:
    u, v = g.edges[rank]
    a, b = local[u], local[v]
    return (a, b) if a < b else (b, a)


def _local_adjacency(g: Graph, ranks: tuple[int, ...]) -> dict[int, int]:
    adj: dict[int, int] = {}
    for r in ranks:
        u, v = g.edges[r]
        adj[u] = adj.get(u, 0) | (1 << v)
        adj[v] = adj.get(v, 0) | (1 << u)
    return adj


def _independent_subsets(vset: int, adj: Mapping[int, int]) -> list[int]:
    """Subsets of vset with no edge of adj inside, ascending recursion order."""
    out = [0]
    for v in bits(vset):
        av = adj.get(v, 0)
        out.extend([s | (1 << v) for s in out if not (av & s)])
    return out


def _is_independent(mask: int, adj: Mapping[int, int]) -> bool:
    rest = mask
    while rest:
        low = rest & -rest
        rest ^= low
        if adj.get(low.bit_length() - 1, 0) & mask:
            return False
    return True


def _normalized_weight_dp(
    nv: int,
    tedges: tuple[tuple[int, int], ...],
    bedges: tuple[tuple[int, int], ...],
) -> Fraction:
    """W with hat_w = delta^nv * W, via the substitution x = 1/2 + delta*z.

    Works on local labels 0..nv-1 over z in [-1, 0], z_PLUS = 0, z_MINUS = -1.
    """
    tadj = [0] * nv
    badj = [0] * nv
    for u, v in tedges:
        tadj[u] |= 1 << v
        tadj[v] |= 1 << u
    for u, v in bedges:
        badj[u] |= 1 << v
        badj[v] |= 1 << u
    full = (1 << nv) - 1
    total = Fraction(0)
    for s_mask in _independent_subsets(full, {v: tadj[v] for v in range(nv)}):
        comp_mask = full & ~s_mask
        if not _is_independent(comp_mask, {v: badj[v] for v in range(nv)}):
            continue
        slist = list(bits(s_mask))
        k = len(slist)
        sidx = {v: i for i, v in enumerate(slist)}
        comp = list(bits(comp_mask))
        s_choices = [list(bits(tadj[v] & s_mask)) or [PLUS] for v in comp]
        t_choices = [list(bits(badj[v] & s_mask)) or [MINUS] for v in comp]
        pairs = [
            [(s, t) for s in sc for t in tc]
            for sc, tc in zip(s_choices, t_choices)
        ]
        for assignment in itertools.product(*pairs):
            preds = [0] * k
            ok = True
            for v, (sv, tv) in zip(comp, assignment):
                if sv != PLUS and tv != MINUS:
                    preds[sidx[sv]] |= 1 << sidx[tv]
                if sv != PLUS:
                    si = sidx[sv]
                    for w in bits(tadj[v] & s_mask):
                        wi = sidx[w]
                        if wi != si:
                            preds[wi] |= 1 << si
                if tv != MINUS:
                    ti = sidx[tv]
                    for w in bits(badj[v] & s_mask):
                        wi = sidx[w]
                        if wi != ti:
                            preds[ti] |= 1 << wi
            if not _acyclic_masks(k, preds):
                continue
            terms = {0: 1}
            for v, (sv, tv) in zip(comp, assignment):
                factor = _factor_terms(sv, tv, sidx)
                if factor is None:
                    continue
                terms = _packed_mul(terms, factor)
            num, den = kernel.poset_integral_packed(
                k, tuple(preds), terms, 1, -1, 1, 0, 1
            )
            total += Fraction(num, den)
    return total


def _factor_terms(
    sv: int, tv: int, sidx: Mapping[int, int]
) -> list[tuple[int, int]] | None:
    """Packed terms of (z_s - z_t) with z_PLUS = 0, z_MINUS = -1."""
    if sv == PLUS and tv == MINUS:
        return None  # factor 1
    if sv == PLUS:
        return [(1 << (_SHIFT * sidx[tv]), -1)]
    if tv == MINUS:
        return [(1 << (_SHIFT * sidx[sv]), 1), (0, 1)]
    return [(1 << (_SHIFT * sidx[sv]), 1), (1 << (_SHIFT * sidx[tv]), -1)]


def _packed_mul(
    terms: dict[int, int], factor: list[tuple[int, int]]
) -> dict[int, int]:
    out: dict[int, int] = {}
    for key, num in terms.items():
        for fk, fn in factor:
            nk = key + fk
            val = out.get(nk, 0) + num * fn
            if val:
                out[nk] = val
            elif nk in out:
                del out[nk]
    return out


def _acyclic_masks(k: int, preds: list[int]) -> bool:
    remaining = (1 << k) - 1
    while remaining:
        free = 0
        rest = remaining
        while rest:
            low = rest & -rest
            rest ^= low
            if not (preds[low.bit_length() - 1] & remaining):
                free |= low
        if not free:
            return False
        remaining &= ~free
    return True
