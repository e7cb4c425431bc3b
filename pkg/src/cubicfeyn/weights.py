"""Graph weights: vertices carry a cubic tensor, edges a propagator.

The weight is a tensor-network contraction.  Propagators are first absorbed
into one endpoint, self-loops are traced, and then pairs of tensors sharing
an edge are merged greedily, always choosing the merge whose result has the
fewest open legs (ties broken by flop count, then by position).
"""

from __future__ import annotations

import itertools
import string
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULT
from .errors import DimensionError, InvariantError
from .graphs import TrivalentGraph, disjoint_union
from .wick import QuadraticForm

_LETTERS = string.ascii_letters


def symmetrize3(t: np.ndarray) -> np.ndarray:
    """Average over the six index permutations.

    Orbits whose entries already agree are copied unchanged, so an already
    symmetric tensor survives bit-for-bit.
    """
    perms = list(itertools.permutations(range(3)))
    stack = np.stack([np.transpose(t, p) for p in perms])
    out = stack.mean(axis=0)
    same = np.all(stack == stack[0], axis=0)
    out[same] = t[same]
    return out


class CubicTensor:
    """Totally symmetric ``N x N x N`` tensor ``V``."""

    def __init__(self, v, symmetry_tol: float = DEFAULT.symmetry_tol):
        v = np.array(v, dtype=float)
        if v.ndim != 3 or len(set(v.shape)) != 1:
            raise DimensionError(f"cubic tensor must be N x N x N, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise InvariantError("v", "finite entries")
        for p in itertools.permutations(range(3)):
            if np.max(np.abs(v - np.transpose(v, p)), initial=0.0) > symmetry_tol:
                raise InvariantError("v", "totally symmetric", "use from_entries to symmetrize")
        self.v = v

    @classmethod
    def from_entries(cls, n: int, entries: Sequence[Sequence[float]]) -> tuple:
        """Build from sparse ``(i, j, k, value)`` entries.

        Duplicates are summed, then the result is symmetrized; the cubic form
        ``V(x,x,x)`` is unchanged by this.  Returns ``(tensor, was_symmetric)``.
        """
        raw = np.zeros((n, n, n))
        for entry in entries:
            i, j, k = (int(x) for x in entry[:3])
            if not all(0 <= x < n for x in (i, j, k)):
                raise DimensionError(f"entry index {(i, j, k)} out of range for n={n}")
            raw[i, j, k] += float(entry[3])
        sym = symmetrize3(raw)
        return cls(sym), bool(np.array_equal(sym, raw))

    @property
    def n(self) -> int:
        return self.v.shape[0]

    def entries(self) -> list:
        """All non-zero entries ``[i, j, k, value]`` in lexicographic order."""
        idx = np.argwhere(self.v != 0)
        return [[int(i), int(j), int(k), float(self.v[i, j, k])] for i, j, k in idx]

    def cubic(self, x: np.ndarray) -> np.ndarray:
        """``V(x,x,x)`` for points stacked along the last axis."""
        return np.einsum("ijk,...i,...j,...k->...", self.v, x, x, x)


@dataclass(frozen=True, eq=False)
class CubicModel:
    quadratic: QuadraticForm
    cubic: CubicTensor

    def __post_init__(self):
        if self.quadratic.n != self.cubic.n:
            raise DimensionError(
                f"quadratic form has N={self.quadratic.n} but cubic tensor has N={self.cubic.n}")

    @property
    def n(self) -> int:
        return self.quadratic.n

    def scaled(self, vertex_scale: float = 1.0, form_scale: float = 1.0) -> CubicModel:
        return CubicModel(QuadraticForm(form_scale * self.quadratic.q),
                          CubicTensor(vertex_scale * self.cubic.v))


# -- contraction engine -------------------------------------------------------

class _Node:
    __slots__ = ("array", "labels")

    def __init__(self, array, labels):
        self.array = array
        self.labels = list(labels)


def _einsum_merge(a: _Node, b: _Node | None) -> _Node:
    """Contract every label that appears twice across ``a`` (and ``b``)."""
    labels = a.labels + (b.labels if b is not None else [])
    counts = {lab: labels.count(lab) for lab in labels}
    out = [lab for lab in labels if counts[lab] == 1]
    letter = {lab: _LETTERS[i] for i, lab in enumerate(dict.fromkeys(labels))}
    sub_a = "".join(letter[x] for x in a.labels)
    sub_out = "".join(letter[x] for x in out)
    if b is None:
        return _Node(np.einsum(f"{sub_a}->{sub_out}", a.array), out)
    sub_b = "".join(letter[x] for x in b.labels)
    return _Node(np.einsum(f"{sub_a},{sub_b}->{sub_out}", a.array, b.array), out)


def contract_network(vertex_tensors: Sequence[np.ndarray], vertex_legs: Sequence[Sequence[int]],
                     matching: Sequence[Sequence[int]], propagator: np.ndarray,
                     order=None) -> float:
    """Contract a trivalent network.

    ``vertex_legs[v]`` lists the half-edges attached to the axes of
    ``vertex_tensors[v]`` in axis order.  Each matched pair ``(a, b)`` is
    joined through ``propagator[i_a, i_b]``.

    ``order`` is ``None`` for the greedy schedule, a sequence of edge
    positions (into ``matching``) to merge in that order, or a
    ``numpy.random.Generator`` for a random schedule.
    """
    edge_of = {}
    for e, (a, b) in enumerate(matching):
        edge_of[a] = (e, b)
        edge_of[b] = (e, a)
    nodes = []
    for tensor, legs in zip(vertex_tensors, vertex_legs):
        array = np.asarray(tensor, dtype=float)
        labels = []
        for axis, h in enumerate(legs):
            e, other = edge_of[h]
            if h < other:
                # absorb the propagator on the lower half-edge of each edge
                array = np.moveaxis(np.tensordot(array, propagator, axes=([axis], [0])), -1, axis)
            labels.append(e)
        nodes.append(_Node(array, labels))
    nodes = [_einsum_merge(nd, None) if len(set(nd.labels)) < len(nd.labels) else nd
             for nd in nodes]

    if isinstance(order, np.random.Generator):
        order = [int(e) for e in order.permutation(len(matching))]
    pending = list(order) if order is not None else None

    while True:
        holder = {}
        candidates = []
        for i, nd in enumerate(nodes):
            for lab in nd.labels:
                if lab in holder and holder[lab] != i:
                    candidates.append((holder[lab], i, lab))
                else:
                    holder[lab] = i
        if not candidates:
            break
        if pending is not None:
            live = {lab: (i, j) for i, j, lab in candidates}
            while pending and pending[0] not in live:
                pending.pop(0)
            i, j = live[pending.pop(0)] if pending else (candidates[0][0], candidates[0][1])
        else:
            def cost(c):
                i, j, _ = c
                shared = set(nodes[i].labels) & set(nodes[j].labels)
                rank = len(nodes[i].labels) + len(nodes[j].labels) - 2 * len(shared)
                flops = nodes[i].array.size * nodes[j].array.size
                for _ in shared:
                    flops //= max(propagator.shape[0], 1)
                return (rank, flops, i, j)
            i, j, _ = min(candidates, key=cost)
        merged = _einsum_merge(nodes[i], nodes[j])
        nodes = [nd for k, nd in enumerate(nodes) if k not in (i, j)] + [merged]

    value = 1.0
    for nd in nodes:
        value *= float(nd.array)
    return value


def graph_weight(model: CubicModel, g: TrivalentGraph, order=None) -> float:
    """Contraction of ``V`` at every vertex against ``Q^{-1}`` on every edge."""
    if g.num_vertices == 0:
        return 1.0
    legs = [(3 * v, 3 * v + 1, 3 * v + 2) for v in range(g.num_vertices)]
    return contract_network([model.cubic.v] * g.num_vertices, legs, g.matching,
                            model.quadratic.inverse, order=order)


@dataclass(frozen=True)
class MultiplicativityRecord:
    union_weight: float
    product_weight: float

    @property
    def difference(self) -> float:
        return self.union_weight - self.product_weight

    @property
    def relative_difference(self) -> float:
        scale = max(abs(self.union_weight), abs(self.product_weight))
        return abs(self.difference) / scale if scale else 0.0


def weight_multiplicative(model: CubicModel, g1: TrivalentGraph, g2: TrivalentGraph) -> MultiplicativityRecord:
    return MultiplicativityRecord(graph_weight(model, disjoint_union(g1, g2)),
                                  graph_weight(model, g1) * graph_weight(model, g2))
