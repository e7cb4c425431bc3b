"""Gaussian moments by Wick pairing.

Phase convention
----------------
For the oscillatory Gaussian ``exp(i Q(x,x)/2)`` the source formula gives
``<x^j x^k> = i Q^{jk}`` (two derivatives ``-i d/dJ`` of
``Z(0) exp(-i Q^{-1}(J,J)/2)``).  Each contracted pair therefore carries a
factor ``i``, and a degree-``d`` moment picks up ``i^{d/2}`` relative to the
euclidean (Isserlis) moment of ``exp(-Q(x,x)/2)``.  Every phase used in the
series module derives from this one rule.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
import scipy.linalg

from .config import DEFAULT
from .errors import BoundsError, DegenerateFormError, DimensionError, DomainError, InvariantError
from .graphs import TrivalentGraph

OSCILLATORY = "oscillatory"
EUCLIDEAN = "euclidean"
VARIANTS = (OSCILLATORY, EUCLIDEAN)


@dataclass(frozen=True, eq=False)
class QuadraticForm:
    """Symmetric non-degenerate form with its inverse (the propagator)."""

    q: np.ndarray
    inverse: np.ndarray = field(init=False, repr=False)
    signature: tuple = field(init=False)
    abs_det: float = field(init=False)

    def __init__(self, q, det_floor: float = DEFAULT.det_floor, symmetry_tol: float = DEFAULT.symmetry_tol):
        q = np.array(q, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1] or q.shape[0] == 0:
            raise DimensionError(f"quadratic form must be a non-empty square matrix, got shape {q.shape}")
        if not np.all(np.isfinite(q)):
            raise InvariantError("q", "finite entries")
        if np.max(np.abs(q - q.T)) > symmetry_tol:
            raise InvariantError("q", f"symmetric to {symmetry_tol:g}")
        q = 0.5 * (q + q.T)
        with warnings.catch_warnings():
            # singular input is reported below as DegenerateFormError
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            lu, piv = scipy.linalg.lu_factor(q)
        abs_det = float(np.prod(np.abs(np.diag(lu))))
        if abs_det <= det_floor:
            raise DegenerateFormError(
                f"|det Q| = {abs_det:.3e} is below det_floor={det_floor:g}; degenerate forms "
                "need a reduction to the orbit space of the symmetry and are not expanded here")
        inverse = scipy.linalg.lu_solve((lu, piv), np.eye(len(q)))
        inverse = 0.5 * (inverse + inverse.T)
        if np.max(np.abs(q @ inverse - np.eye(len(q)))) > 1e-9:
            raise DegenerateFormError("Q is too ill-conditioned to invert to 1e-9")
        eig = np.linalg.eigvalsh(q)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "inverse", inverse)
        object.__setattr__(self, "signature", (int(np.sum(eig > 0)), int(np.sum(eig < 0))))
        object.__setattr__(self, "abs_det", abs_det)

    @property
    def n(self) -> int:
        return self.q.shape[0]

    @property
    def sign(self) -> int:
        return self.signature[0] - self.signature[1]

    @property
    def positive_definite(self) -> bool:
        return self.signature[1] == 0

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q.tolist()}


def gaussian_normalization(form: QuadraticForm, variant: str = OSCILLATORY, k: float = 1.0) -> complex:
    """Closed-form Gaussian integral ``Z(0)`` at coupling ``k > 0``."""
    if not k > 0:
        raise DomainError(f"k must be positive, got {k}")
    _check_variant(variant)
    scale = (2 * math.pi / k) ** (form.n / 2)
    if variant == EUCLIDEAN:
        if not form.positive_definite:
            raise DomainError("the euclidean Gaussian needs a positive-definite form")
        return complex(scale / math.sqrt(form.abs_det))
    return scale * cmath.exp(1j * math.pi * form.sign / 4) / math.sqrt(form.abs_det)


def _check_variant(variant):
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")


def pair_factor(variant: str) -> complex:
    """Factor multiplying ``Q^{jk}`` for one contracted pair."""
    _check_variant(variant)
    return 1j if variant == OSCILLATORY else 1.0


def enumerate_pairings(d: int, max_degree: int = DEFAULT.max_pairing_degree) -> Iterator[tuple]:
    """Yield the ``(d-1)!!`` perfect matchings of ``{0, ..., d-1}``.

    Order is deterministic: the smallest unpaired element is paired with each
    remaining element in increasing order.
    """
    if d < 0 or d % 2:
        raise ValueError(f"pairings need an even, non-negative size, got {d}")
    if d > max_degree:
        raise BoundsError(f"d={d} exceeds the configured pairing limit {max_degree}")
    partner = [-1] * d
    pairs: list = []

    def rec():
        try:
            first = partner.index(-1)
        except ValueError:
            yield tuple(pairs)
            return
        partner[first] = first
        for other in range(first + 1, d):
            if partner[other] < 0:
                partner[other] = first
                pairs.append((first, other))
                yield from rec()
                pairs.pop()
                partner[other] = -1
        partner[first] = -1

    yield from rec()


def moment_wick(form: QuadraticForm, indices: Sequence[int], variant: str = OSCILLATORY) -> complex:
    """Normalized Gaussian moment ``<x^{j_1} ... x^{j_d}>``.

    Sum over pairings of products of propagator entries, organised as a
    recursion on the multiset of indices so repeated coordinates are shared.
    """
    _check_variant(variant)
    n = form.n
    counts = [0] * n
    for j in indices:
        if not 0 <= int(j) < n:
            raise DimensionError(f"index {j} out of range [0, {n})")
        counts[int(j)] += 1
    d = sum(counts)
    if d % 2:
        return 0j
    real = _moment_counts(form.inverse.tobytes(), n, tuple(counts))
    return complex(real) * pair_factor(variant) ** (d // 2)


@lru_cache(maxsize=65536)
def _moment_counts(inv_bytes: bytes, n: int, counts: tuple) -> float:
    if not any(counts):
        return 1.0
    inv = np.frombuffer(inv_bytes).reshape(n, n)
    j = next(i for i, c in enumerate(counts) if c)
    rest = list(counts)
    rest[j] -= 1
    total = 0.0
    for k in range(n):
        if rest[k]:
            mult = rest[k]
            nxt = rest[:]
            nxt[k] -= 1
            total += mult * inv[j, k] * _moment_counts(inv_bytes, n, tuple(nxt))
    return total


def pairing_to_graph(pairing: Sequence[Sequence[int]], m: int) -> TrivalentGraph:
    """Read a pairing of ``6m`` half-edges as a trivalent graph on ``2m`` vertices."""
    return TrivalentGraph(2 * m, tuple(tuple(p) for p in pairing))
