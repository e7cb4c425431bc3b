"""Trivalent multigraphs in the half-edge picture.

A graph on ``2m`` vertices has ``6m`` half-edges; vertex ``v`` owns
half-edges ``3v, 3v+1, 3v+2`` and the edges are a perfect matching of the
half-edges.  Self-loops and parallel edges are allowed.

The symmetry group is ``S_{2m} ⋉ (S_3)^{2m}``: permute vertices, and permute
the three legs within each vertex.  An automorphism is a group element that
maps the matching to itself; the canonical form of a graph is the
lexicographically smallest sorted pair list in its orbit.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .config import DEFAULT
from .errors import BoundsError, InvariantError, ValidationError


@dataclass(frozen=True)
class TrivalentGraph:
    num_vertices: int
    matching: tuple

    def __post_init__(self):
        n = self.num_vertices
        if not isinstance(n, int) or n < 0 or n % 2:
            raise InvariantError("num_vertices", "non-negative even integer", f"got {n!r}")
        pairs = []
        for pair in self.matching:
            a, b = (int(x) for x in pair)
            if a == b:
                raise InvariantError("matching", "pairs join two distinct half-edges", f"{pair}")
            pairs.append((a, b) if a < b else (b, a))
        pairs.sort()
        seen = [h for p in pairs for h in p]
        if sorted(seen) != list(range(3 * n)):
            counts = Counter(seen)
            bad = sorted(h for h, c in counts.items() if c > 1 or not 0 <= h < 3 * n)
            missing = sorted(set(range(3 * n)) - set(seen))
            raise InvariantError(
                "matching", "covers every half-edge exactly once",
                f"repeated/out-of-range {bad}, missing {missing}")
        object.__setattr__(self, "matching", tuple(pairs))

    @classmethod
    def from_partner(cls, partner: Sequence[int]) -> TrivalentGraph:
        pairs = [(h, p) for h, p in enumerate(partner) if h < p]
        return cls(len(partner) // 3, tuple(pairs))

    @property
    def num_half_edges(self) -> int:
        return 3 * self.num_vertices

    @property
    def loop_order(self) -> int:
        """``m`` for a graph with ``2m`` vertices."""
        return self.num_vertices // 2

    @property
    def partner(self) -> tuple:
        out = [0] * self.num_half_edges
        for a, b in self.matching:
            out[a] = b
            out[b] = a
        return tuple(out)

    def to_json(self) -> dict:
        return {"num_vertices": self.num_vertices,
                "matching": [list(p) for p in self.matching]}

    def __repr__(self):
        return f"TrivalentGraph({self.num_vertices}, {list(self.matching)})"


EMPTY = TrivalentGraph(0, ())


def dumbbell() -> TrivalentGraph:
    """Two self-loops joined by a bridge."""
    return TrivalentGraph(2, ((0, 1), (2, 3), (4, 5)))


def theta() -> TrivalentGraph:
    """Three parallel edges between two vertices."""
    return TrivalentGraph(2, ((0, 3), (1, 4), (2, 5)))


def disjoint_union(*graphs: TrivalentGraph) -> TrivalentGraph:
    pairs = []
    offset = 0
    for g in graphs:
        pairs.extend((a + offset, b + offset) for a, b in g.matching)
        offset += g.num_half_edges
    return TrivalentGraph(offset // 3, tuple(pairs))


# -- group action -------------------------------------------------------------

def group_element(vertex_perm: Sequence[int], leg_perms: Sequence[Sequence[int]]) -> tuple:
    """Half-edge permutation for (vertex permutation, per-vertex leg permutations).

    Half-edge ``3v+i`` is sent to ``3*vertex_perm[v] + leg_perms[v][i]``.
    """
    if len(leg_perms) != len(vertex_perm):
        raise ValidationError("need one leg permutation per vertex")
    image = []
    for v, (w, legs) in enumerate(zip(vertex_perm, leg_perms)):
        image.extend(3 * w + legs[i] for i in range(3))
    return tuple(image)


def is_group_element(perm: Sequence[int], num_vertices: int) -> bool:
    if sorted(perm) != list(range(3 * num_vertices)):
        return False
    for v in range(num_vertices):
        if len({perm[3 * v + i] // 3 for i in range(3)}) != 1:
            return False
    return True


def apply(g: TrivalentGraph, perm: Sequence[int]) -> TrivalentGraph:
    """Image of ``g`` under a block-respecting half-edge permutation."""
    if not is_group_element(perm, g.num_vertices):
        raise ValidationError("permutation does not respect the vertex triples")
    return TrivalentGraph(g.num_vertices, tuple((perm[a], perm[b]) for a, b in g.matching))


def random_group_element(num_vertices: int, rng) -> tuple:
    vertex_perm = list(rng.permutation(num_vertices))
    legs = [list(rng.permutation(3)) for _ in range(num_vertices)]
    return group_element([int(v) for v in vertex_perm], [[int(x) for x in l] for l in legs])


def is_automorphism(g: TrivalentGraph, perm: Sequence[int]) -> bool:
    return is_group_element(perm, g.num_vertices) and apply(g, perm) == g


# -- canonical search ---------------------------------------------------------

def _canonical_search(partner: Sequence[int]):
    """Minimum-in-orbit search over relabelings.

    Builds the relabeling ``new -> old`` one edge at a time.  The smallest
    uncovered new label is matched to the smallest label its partner can
    receive; every way of reaching that minimum is kept as a branch.  All
    surviving branches share the same pair prefix, so the survivors at the end
    are exactly the relabelings producing the minimum, i.e. a coset of the
    automorphism group.

    Returns ``(pairs, survivors)`` where each survivor is a new->old
    half-edge map.
    """
    n = len(partner)
    nv = n // 3
    if n == 0:
        return (), [[]]
    # state: (new->old half-edge, old->new half-edge, new->old vertex, old->new vertex, opened)
    init = ([-1] * n, [-1] * n, [-1] * nv, [-1] * nv, 0)
    states = [init]
    covered = [False] * n
    pairs = []
    h = 0
    while len(pairs) < n // 2:
        while covered[h]:
            h += 1
        vh = h // 3
        best = None
        children = []
        for n2o, o2n, nv2ov, ov2nv, opened in states:
            ov = nv2ov[vh]
            if ov >= 0:
                cands = [3 * ov + i for i in range(3) if o2n[3 * ov + i] < 0]
                opens = False
            else:
                cands = [x for u in range(nv) if ov2nv[u] < 0 for x in range(3 * u, 3 * u + 3)]
                opens = True
            for cand in cands:
                c_n2o, c_o2n = n2o[:], o2n[:]
                c_nv2ov, c_ov2nv, c_opened = nv2ov, ov2nv, opened
                if opens:
                    c_nv2ov, c_ov2nv = nv2ov[:], ov2nv[:]
                    c_nv2ov[vh] = cand // 3
                    c_ov2nv[cand // 3] = vh
                    c_opened = opened + 1
                c_n2o[h] = cand
                c_o2n[cand] = h
                p = partner[cand]
                pv = c_ov2nv[p // 3]
                if pv >= 0:
                    label = next(3 * pv + i for i in range(3) if c_n2o[3 * pv + i] < 0)
                else:
                    if not opens:
                        c_nv2ov, c_ov2nv = nv2ov[:], ov2nv[:]
                    pv = c_opened
                    c_nv2ov[pv] = p // 3
                    c_ov2nv[p // 3] = pv
                    c_opened += 1
                    label = 3 * pv
                if best is not None and label > best:
                    continue
                c_n2o[label] = p
                c_o2n[p] = label
                child = (c_n2o, c_o2n, c_nv2ov, c_ov2nv, c_opened)
                if best is None or label < best:
                    best = label
                    children = [child]
                else:
                    children.append(child)
        pairs.append((h, best))
        covered[h] = covered[best] = True
        states = children
    return tuple(pairs), [st[0] for st in states]


def components(g: TrivalentGraph) -> list:
    """Vertex sets of connected components, ordered by smallest vertex."""
    parent = list(range(g.num_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in g.matching:
        ra, rb = find(a // 3), find(b // 3)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict = {}
    for v in range(g.num_vertices):
        groups.setdefault(find(v), []).append(v)
    return [groups[r] for r in sorted(groups)]


def is_connected(g: TrivalentGraph) -> bool:
    return len(components(g)) == 1


def _subgraph(g: TrivalentGraph, vertices: Sequence[int]) -> TrivalentGraph:
    index = {v: i for i, v in enumerate(vertices)}
    relabel = lambda h: 3 * index[h // 3] + h % 3  # noqa: E731
    pairs = tuple((relabel(a), relabel(b)) for a, b in g.matching if a // 3 in index)
    return TrivalentGraph(len(vertices), pairs)


def split_components(g: TrivalentGraph) -> list:
    return [_subgraph(g, vs) for vs in components(g)]


@lru_cache(maxsize=100_000)
def _connected_canonical(g: TrivalentGraph):
    pairs, survivors = _canonical_search(g.partner)
    return TrivalentGraph(g.num_vertices, pairs), len(survivors)


def _canon_and_aut(g: TrivalentGraph):
    parts = [_connected_canonical(c) for c in split_components(g)]
    parts.sort(key=lambda item: item[0].matching)
    canon = disjoint_union(*(c for c, _ in parts))
    aut = 1
    for c, a in parts:
        aut *= a
    for count in Counter(c for c, _ in parts).values():
        aut *= math.factorial(count)
    return canon, aut


def canonical_form(g: TrivalentGraph) -> TrivalentGraph:
    """Lexicographically minimal matching in the orbit of ``g``.

    Components are canonicalized separately and concatenated in sorted order;
    the greedy search never opens a new component before finishing the
    current one, so this agrees with a search over the whole graph.
    """
    return _canon_and_aut(g)[0]


def automorphism_order(g: TrivalentGraph) -> int:
    """``|Aut g|`` over half-edge permutations preserving edges and vertices.

    For a disjoint union this is the product of the component orders times
    ``k!`` for each component type occurring ``k`` times.
    """
    return _canon_and_aut(g)[1]


def canonical_search_whole(g: TrivalentGraph):
    """Run the search on the whole graph without splitting into components."""
    pairs, survivors = _canonical_search(g.partner)
    return TrivalentGraph(g.num_vertices, pairs), len(survivors)


def automorphism_order_bruteforce(g: TrivalentGraph) -> int:
    """Count group elements fixing the matching by sweeping the whole group.

    Vectorized over the leg permutations for each vertex permutation; feasible
    up to six vertices (about 3.4e7 elements).  A vertex permutation that is
    not an automorphism of the vertex multigraph cannot be the vertex part of
    a fixing element, so its ``6^nv`` leg choices are skipped without changing
    the count.
    """
    import numpy as np

    nv = g.num_vertices
    if nv == 0:
        return 1
    partner = np.array(g.partner)
    legs = np.array(list(itertools.permutations(range(3))))      # (6, 3)
    choice = np.array(list(itertools.product(range(6), repeat=nv)))  # (6^nv, nv)
    leg_images = legs[choice]                                    # (6^nv, nv, 3)
    adj = np.zeros((nv, nv), dtype=int)
    for a, b in g.matching:
        adj[a // 3, b // 3] += 1
        adj[b // 3, a // 3] += 1
    count = 0
    for vperm in itertools.permutations(range(nv)):
        p = np.array(vperm)
        if not np.array_equal(adj[np.ix_(p, p)], adj):
            continue
        image = (3 * np.array(vperm)[None, :, None] + leg_images).reshape(len(choice), -1)
        # g is fixed iff image(partner(h)) == partner(image(h)) for all h
        lhs = image[:, partner]
        rhs = partner[image]
        count += int(np.count_nonzero((lhs == rhs).all(axis=1)))
    return count


# -- enumeration --------------------------------------------------------------

def _labeled_connected_multigraphs(nv: int):
    """Yield partner arrays of connected trivalent multigraphs on ``nv`` labeled vertices.

    Vertices are filled row by row in breadth-first order: each vertex after
    the first has an earlier neighbour, and the earliest such neighbour never
    decreases along the labels.  Every connected graph has such a labeling.
    Duplicates are removed later by canonicalization.
    """
    adj = [[0] * nv for _ in range(nv)]
    resid = [3] * nv
    parent = [0] * nv

    def rows(v):
        if v == nv:
            yield [row[:] for row in adj]
            return
        if v > 0:
            earlier = [u for u in range(v) if adj[u][v]]
            if not earlier or earlier[0] < parent[v - 1]:
                return
            parent[v] = earlier[0]
        for loops in range(resid[v] // 2, -1, -1):
            rest = resid[v] - 2 * loops
            adj[v][v] = loops
            resid[v] -= 2 * loops
            yield from fill(v, v + 1, rest)
            resid[v] += 2 * loops
            adj[v][v] = 0

    def fill(v, u, rest):
        if rest == 0:
            yield from rows(v + 1)
            return
        if u >= nv:
            return
        for k in range(min(rest, resid[u]), -1, -1):
            adj[v][u] = adj[u][v] = k
            resid[u] -= k
            resid[v] -= k
            yield from fill(v, u + 1, rest - k)
            resid[u] += k
            resid[v] += k
        adj[v][u] = adj[u][v] = 0

    for mat in rows(0):
        yield _adjacency_to_partner(mat)


def _adjacency_to_partner(adj) -> list:
    nv = len(adj)
    partner = [-1] * (3 * nv)
    free = [[3 * v, 3 * v + 1, 3 * v + 2] for v in range(nv)]
    for v in range(nv):
        for _ in range(adj[v][v]):
            a, b = free[v].pop(0), free[v].pop(0)
            partner[a], partner[b] = b, a
        for u in range(v + 1, nv):
            for _ in range(adj[v][u]):
                a, b = free[v].pop(0), free[u].pop(0)
                partner[a], partner[b] = b, a
    return partner


@lru_cache(maxsize=None)
def connected_classes(num_vertices: int) -> tuple:
    """Canonical connected trivalent multigraphs on ``num_vertices`` vertices, sorted."""
    if num_vertices <= 0 or num_vertices % 2:
        return ()
    found = set()
    for partner in _labeled_connected_multigraphs(num_vertices):
        canon, _ = _connected_canonical(TrivalentGraph.from_partner(partner))
        found.add(canon)
    return tuple(sorted(found, key=lambda g: g.matching))


@dataclass(frozen=True)
class GraphClass:
    graph: TrivalentGraph
    aut: int
    connected: bool
    multiplicity: int

    @property
    def symmetry_factor(self) -> Fraction:
        return Fraction(1, self.aut)

    def to_json(self) -> dict:
        return {"graph": self.graph.to_json(), "aut": self.aut,
                "connected": self.connected, "multiplicity": self.multiplicity}


@dataclass(frozen=True)
class IsoClassTable:
    loop_order: int
    classes: tuple

    def total_multiplicity(self) -> int:
        return sum(c.multiplicity for c in self.classes)

    def connected(self) -> tuple:
        return tuple(c for c in self.classes if c.connected)

    def to_json(self) -> dict:
        return {"loop_order": self.loop_order,
                "num_classes": len(self.classes),
                "total_pairings": self.total_multiplicity(),
                "classes": [c.to_json() for c in self.classes]}


def orbit_size(m: int, aut: int) -> int:
    """Number of pairings of ``6m`` half-edges producing a graph with ``|Aut| = aut``."""
    group = math.factorial(2 * m) * 6 ** (2 * m)
    q, r = divmod(group, aut)
    if r:
        raise ValueError(f"|Aut|={aut} does not divide the group order {group}")
    return q


def double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def _multisets_by_size(total: int, sizes: Sequence[int]):
    """Multisets of part sizes (non-increasing tuples) from ``sizes`` summing to ``total``."""
    def rec(remaining, max_size):
        if remaining == 0:
            yield ()
            return
        for s in sizes:
            if s <= min(remaining, max_size):
                for rest in rec(remaining - s, s):
                    yield (s,) + rest
    yield from rec(total, total)


def enumerate_graphs(m: int, config=DEFAULT) -> IsoClassTable:
    """One canonical representative per isomorphism class on ``2m`` vertices.

    Connected classes come from :func:`connected_classes`; disconnected ones
    are multisets of connected classes of smaller order.
    """
    if not isinstance(m, int) or m < 0 or m > config.max_loop_order:
        raise BoundsError(
            f"loop order m={m} outside [0, {config.max_loop_order}] "
            f"(configured max_loop_order={config.max_loop_order})")
    if m == 0:
        return IsoClassTable(0, (GraphClass(EMPTY, 1, False, 1),))
    nv = 2 * m
    graphs = []
    for sizes in _multisets_by_size(nv, list(range(nv, 0, -2))):
        # components of equal size are chosen as a multiset to avoid reorderings
        choices = [itertools.combinations_with_replacement(connected_classes(s), k)
                   for s, k in sorted(Counter(sizes).items(), reverse=True)]
        for combo in itertools.product(*choices):
            parts = [g for group in combo for g in group]
            graphs.append(canonical_form(disjoint_union(*parts)))
    graphs = sorted(set(graphs), key=lambda g: g.matching)
    classes = []
    for g in graphs:
        aut = automorphism_order(g)
        classes.append(GraphClass(g, aut, is_connected(g), orbit_size(m, aut)))
    return IsoClassTable(m, tuple(classes))


def enumerate_pairings_of(items: Sequence):
    """All perfect matchings of ``items`` (first element paired first)."""
    items = list(items)
    if not items:
        yield []
        return
    first = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for tail in enumerate_pairings_of(rest):
            yield [(first, items[i])] + tail


def classify_all_pairings(m: int) -> Counter:
    """Canonical form -> number of pairings of ``6m`` half-edges giving that graph.

    Exhaustive; intended for ``m <= 2``.
    """
    counts: Counter = Counter()
    for pairing in enumerate_pairings_of(range(6 * m)):
        counts[canonical_form(TrivalentGraph(2 * m, tuple(pairing)))] += 1
    return counts


# -- orientations -------------------------------------------------------------

def _perm_sign(seq: Sequence[int]) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        while seq[i] != i:
            j = seq[i]
            seq[i], seq[j] = seq[j], seq[i]
            sign = -sign
    return sign


@dataclass(frozen=True)
class OrientedGraph:
    """A graph plus a linear order of the legs at each vertex.

    Only the cyclic class of each order matters; two orders related by a
    rotation describe the same orientation.
    """

    graph: TrivalentGraph
    orientation: tuple

    def __post_init__(self):
        orient = tuple(tuple(int(h) for h in legs) for legs in self.orientation)
        if len(orient) != self.graph.num_vertices:
            raise InvariantError("orientation", "one leg order per vertex")
        for v, legs in enumerate(orient):
            if sorted(legs) != [3 * v, 3 * v + 1, 3 * v + 2]:
                raise InvariantError("orientation", "each vertex order permutes its own half-edges",
                                     f"vertex {v}: {legs}")
        object.__setattr__(self, "orientation", orient)

    @classmethod
    def standard(cls, g: TrivalentGraph) -> OrientedGraph:
        return cls(g, tuple((3 * v, 3 * v + 1, 3 * v + 2) for v in range(g.num_vertices)))

    def vertex_sign(self, v: int, legs: Sequence[int]) -> int:
        """Sign of the reordering taking this vertex's stored order to ``legs``."""
        stored = self.orientation[v]
        return _perm_sign([stored.index(h) for h in legs])

    def reversed_at(self, v: int) -> OrientedGraph:
        orient = list(self.orientation)
        a, b, c = orient[v]
        orient[v] = (b, a, c)
        return OrientedGraph(self.graph, tuple(orient))

    def same_orientation(self, other: OrientedGraph) -> bool:
        if self.graph != other.graph:
            return False
        return all(self.vertex_sign(v, other.orientation[v]) == 1
                   for v in range(self.graph.num_vertices))

    def to_json(self) -> dict:
        out = self.graph.to_json()
        out["orientation"] = [list(o) for o in self.orientation]
        return out


def orientation_sign(source: OrientedGraph, target: OrientedGraph, iso: Sequence[int]) -> int:
    """Sign relating ``iso``'s push-forward of the source orientation to the target's.

    ``iso[h]`` is the image of half-edge ``h``; it must map the source matching
    onto the target matching and respect vertex triples.
    """
    g = source.graph
    if target.graph.num_vertices != g.num_vertices or len(iso) != g.num_half_edges:
        raise ValidationError("isomorphism size does not match the graphs")
    if not is_group_element(iso, g.num_vertices):
        raise ValidationError("map does not respect the vertex triples")
    if apply(g, iso) != target.graph:
        raise ValidationError("map is not an isomorphism of the underlying graphs")
    sign = 1
    for v, legs in enumerate(source.orientation):
        pushed = [iso[h] for h in legs]
        sign *= target.vertex_sign(pushed[0] // 3, pushed)
    return sign


def automorphisms(g: TrivalentGraph) -> Iterable[tuple]:
    """Yield every automorphism as a half-edge permutation.

    Derived from the survivors of the canonical search: any two relabelings
    landing on the canonical matching differ by an automorphism.
    """
    partner = g.partner
    n = len(partner)
    if n == 0:
        yield ()
        return
    _, survivors = _canonical_search(partner)
    base = survivors[0]
    inv_base = [0] * n
    for new, old in enumerate(base):
        inv_base[old] = new
    for rho in survivors:
        # old h -> new label under base -> old half-edge under rho
        yield tuple(rho[inv_base[h]] for h in range(n))
