"""Independent reference computations used to cross-check the fast paths.

The main code paths never call these (the truncation harness borrows the
quadrature helper).  Each routine reaches its answer by a different route:
explicit pairing sums, naive index loops, quadrature, polynomial expansion.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.hermite_e import hermegauss

from .graphs import TrivalentGraph
from .wick import QuadraticForm, enumerate_pairings


def wick_by_pairings(form: QuadraticForm, indices: Sequence[int], variant: str = "euclidean") -> complex:
    """Moment as a literal sum over perfect matchings of the index positions."""
    d = len(indices)
    if d % 2:
        return 0j
    inv = form.inverse
    total = 0.0
    for pairing in enumerate_pairings(d, max_degree=d):
        term = 1.0
        for a, b in pairing:
            term *= inv[indices[a], indices[b]]
        total += term
    phase = 1j ** (d // 2) if variant == "oscillatory" else 1.0
    return complex(total) * phase


def gauss_hermite_expectation(form: QuadraticForm, func: Callable[[np.ndarray], np.ndarray],
                              order: int = 12) -> float:
    """``E[func(x)]`` for ``x ~ N(0, Q^{-1})`` by tensor-product Gauss-Hermite.

    ``func`` receives points of shape ``(num_points, N)``.  Exact for
    polynomials of degree below ``2 * order``.
    """
    if not form.positive_definite:
        raise ValueError("quadrature needs a positive-definite form")
    n = form.n
    nodes, weights = hermegauss(order)
    weights = weights / math.sqrt(2 * math.pi)
    z = np.array(list(itertools.product(nodes, repeat=n)))
    w = np.prod(np.array(list(itertools.product(weights, repeat=n))), axis=1)
    chol = np.linalg.cholesky(form.inverse)
    x = z @ chol.T
    return float(np.dot(w, func(x)))


def monomial_moment_quadrature(form: QuadraticForm, indices: Sequence[int]) -> float:
    order = max(len(indices) // 2 + 2, 6)
    return gauss_hermite_expectation(form, lambda x: np.prod(x[:, list(indices)], axis=1),
                                     order=order)


def naive_graph_weight(vertex: np.ndarray, propagator: np.ndarray, g: TrivalentGraph) -> float:
    """Sum over an index per half-edge of the vertex and edge factors.

    ``N^(3 * num_vertices)`` terms; only for tiny cases.
    """
    n = propagator.shape[0]
    h = g.num_half_edges
    total = 0.0
    for idx in itertools.product(range(n), repeat=h):
        term = 1.0
        for v in range(g.num_vertices):
            term *= vertex[idx[3 * v], idx[3 * v + 1], idx[3 * v + 2]]
            if term == 0.0:
                break
        if term == 0.0:
            continue
        for a, b in g.matching:
            term *= propagator[idx[a], idx[b]]
        total += term
    return total


def _pairing_einsum(vertex, propagator, pairing, num_vertices):
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    operands, subs = [], []
    for v in range(num_vertices):
        operands.append(vertex)
        subs.append(letters[3 * v:3 * v + 3])
    for a, b in pairing:
        operands.append(propagator)
        subs.append(letters[a] + letters[b])
    return float(np.einsum(",".join(subs) + "->", *operands, optimize="greedy"))


def raw_pairing_sum(vertex: np.ndarray, propagator: np.ndarray, m: int) -> float:
    """Sum over all pairings of ``6m`` legs of the fully contracted product.

    No grouping into graphs: every one of the ``(6m-1)!!`` pairings is
    contracted on its own.
    """
    if m == 0:
        return 1.0
    return math.fsum(_pairing_einsum(vertex, propagator, p, 2 * m)
                     for p in enumerate_pairings(6 * m, max_degree=6 * m))


def raw_series_coefficient(vertex: np.ndarray, form: QuadraticForm, m: int,
                           variant: str = "oscillatory") -> complex:
    """Coefficient of ``k^-m`` from the expanded exponential and raw pairings.

    The ``2m``-th term of the exponential series carries
    ``(i/6)^{2m} / (2m)!`` and each of the ``3m`` contracted pairs a factor
    ``i`` (oscillatory) or ``1`` (euclidean).
    """
    total = raw_pairing_sum(vertex, form.inverse, m)
    pref = 1.0 / (math.factorial(2 * m) * 6 ** (2 * m))
    if variant == "oscillatory":
        return complex(pref * total) * (1j ** (2 * m)) * (1j ** (3 * m))
    return complex(pref * total)


def _poly_mul(p, q):
    out = defaultdict(float)
    for ea, ca in p.items():
        for eb, cb in q.items():
            out[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    return dict(out)


def cubic_polynomial(vertex: np.ndarray) -> dict:
    """``V(x,x,x)`` as ``{exponent tuple: coefficient}``."""
    n = vertex.shape[0]
    poly = defaultdict(float)
    for i, j, k in itertools.product(range(n), repeat=3):
        if vertex[i, j, k]:
            e = [0] * n
            for a in (i, j, k):
                e[a] += 1
            poly[tuple(e)] += vertex[i, j, k]
    return dict(poly)


def polynomial_series_coefficient(vertex: np.ndarray, form: QuadraticForm, m: int,
                                  variant: str = "oscillatory") -> complex:
    """Same coefficient via explicit polynomial expansion and Isserlis moments.

    Moments of monomials use the recursion
    ``E[x_j x^a] = sum_k a_k Q^{jk} E[x^(a - e_k)]``.
    """
    n = form.n
    poly = {tuple([0] * n): 1.0}
    cubic = cubic_polynomial(vertex)
    for _ in range(2 * m):
        poly = _poly_mul(poly, cubic)
    inv = form.inverse
    cache = {}

    def moment(expo):
        if expo in cache:
            return cache[expo]
        if not any(expo):
            return 1.0
        if sum(expo) % 2:
            return 0.0
        j = next(i for i, e in enumerate(expo) if e)
        rest = list(expo)
        rest[j] -= 1
        val = 0.0
        for k in range(n):
            if rest[k]:
                nxt = rest[:]
                nxt[k] -= 1
                val += rest[k] * inv[j, k] * moment(tuple(nxt))
        cache[expo] = val
        return val

    total = math.fsum(c * moment(e) for e, c in poly.items())
    pref = 1.0 / (math.factorial(2 * m) * 6 ** (2 * m))
    if variant == "oscillatory":
        return complex(pref * total) * (1j ** (5 * m))
    return complex(pref * total)


def quadrature_series_coefficient(vertex: np.ndarray, form: QuadraticForm, m: int) -> float:
    """Euclidean coefficient ``E[V(x,x,x)^{2m}] / ((2m)! 6^{2m})`` by quadrature."""
    order = 3 * m + 3
    v = np.asarray(vertex)

    def f(x):
        return np.einsum("ijk,pi,pj,pk->p", v, x, x, x) ** (2 * m)

    val = gauss_hermite_expectation(form, f, order=order)
    return val / (math.factorial(2 * m) * 6 ** (2 * m))
