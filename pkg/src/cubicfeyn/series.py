"""Asymptotic expansion of the cubic integral in powers of ``1/k``.

Convention: ``Z_k / Z(0) * k^{N/2} = sum_m c_m k^{-m}`` with

    c_m = i^m * sum over graphs with 2m vertices of W(Γ) / |Aut Γ|

for the oscillatory integral ``exp(ik(Q/2 + V/6))``.  The euclidean
integral ``exp(-k(Q/2 + V/6))`` has the same graph sum without the phase.
Symmetry factors stay exact rationals until the final multiplication.

The series is asymptotic, not convergent; coefficients are returned as
formal data and nothing is resummed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .config import DEFAULT
from .errors import DomainError
from .graphs import TrivalentGraph, enumerate_graphs
from .oracles import gauss_hermite_expectation
from .weights import CubicModel, graph_weight
from .wick import EUCLIDEAN, OSCILLATORY, VARIANTS


@dataclass(frozen=True)
class LedgerEntry:
    order: int
    graph: TrivalentGraph
    symmetry_factor: Fraction
    weight: float
    contribution: complex
    connected: bool

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "graph": self.graph.to_json(),
            "aut": self.symmetry_factor.denominator,
            "symmetry_factor": str(self.symmetry_factor),
            "connected": self.connected,
            "weight": self.weight,
            "contribution": _cjson(self.contribution),
        }


def _cjson(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


@dataclass(frozen=True)
class SeriesExpansion:
    max_order: int
    coefficients: tuple
    ledger: tuple
    variant: str = OSCILLATORY
    connected_only: bool = False

    def __getitem__(self, m: int) -> complex:
        return self.coefficients[m]

    def evaluate(self, k: float) -> complex:
        """Partial sum ``sum_m c_m k^{-m}`` at a numeric ``k``."""
        return sum(c * k ** (-m) for m, c in enumerate(self.coefficients))

    def to_json(self) -> dict:
        return {
            "max_order": self.max_order,
            "variant": self.variant,
            "connected": self.connected_only,
            "coefficients": [dict(order=m, **_cjson(c)) for m, c in enumerate(self.coefficients)],
            "ledger": [e.to_json() for e in self.ledger],
        }

    def to_csv_rows(self) -> list:
        rows = [["order", "re", "im"]]
        rows += [[m, repr(float(c.real)), repr(float(c.imag))] for m, c in enumerate(self.coefficients)]
        return rows


ConnectedSeries = SeriesExpansion


def _phase(m: int, variant: str) -> complex:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    return 1j ** m if variant == OSCILLATORY else 1.0 + 0j


def _expand(model: CubicModel, max_order: int, variant: str, connected: bool, config) -> SeriesExpansion:
    coefficients = []
    ledger = []
    for m in range(max_order + 1):
        table = enumerate_graphs(m, config)
        phase = _phase(m, variant)
        terms = []
        for cls in table.classes:
            if connected and not cls.connected:
                continue
            w = graph_weight(model, cls.graph)
            contribution = phase * float(cls.symmetry_factor * Fraction(w))
            terms.append(contribution)
            ledger.append(LedgerEntry(m, cls.graph, cls.symmetry_factor, w, contribution, cls.connected))
        coefficients.append(complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms)))
    return SeriesExpansion(max_order, tuple(coefficients), tuple(ledger), variant, connected)


def expand(model: CubicModel, max_order: int, variant: str = OSCILLATORY, config=DEFAULT) -> SeriesExpansion:
    """Full series through ``k^{-max_order}``, including disconnected graphs."""
    return _expand(model, max_order, variant, False, config)


def expand_connected(model: CubicModel, max_order: int, variant: str = OSCILLATORY,
                     config=DEFAULT) -> SeriesExpansion:
    """Logarithm of the normalized series: connected graphs only (``c_0 = 0``)."""
    return _expand(model, max_order, variant, True, config)


# -- formal power series ------------------------------------------------------

def series_exp(a: Sequence[complex]) -> list:
    """``exp`` of a formal power series with ``a[0] == 0``, truncated to ``len(a)``."""
    if a and a[0] != 0:
        raise ValueError("constant term must vanish")
    n = len(a)
    b = [0j] * n
    if n:
        b[0] = 1 + 0j
    for k in range(1, n):
        b[k] = sum(j * a[j] * b[k - j] for j in range(1, k + 1)) / k
    return b


def series_log(b: Sequence[complex]) -> list:
    """``log`` of a formal power series with ``b[0] == 1``."""
    if not b or b[0] != 1:
        raise ValueError("constant term must be 1")
    n = len(b)
    a = [0j] * n
    for k in range(1, n):
        a[k] = b[k] - sum(j * a[j] * b[k - j] for j in range(1, k)) / k
    return a


# -- numerical check on the euclidean side -------------------------------------

@dataclass(frozen=True)
class TruncationCheck:
    series_value: float
    quadrature_value: float

    @property
    def relative_error(self) -> float:
        scale = abs(self.quadrature_value)
        diff = abs(self.series_value - self.quadrature_value)
        return diff / scale if scale else diff


def euclidean_truncation_check(model: CubicModel, max_order: int, k: float = 1.0,
                               config=DEFAULT) -> TruncationCheck:
    """Compare the graph series with quadrature of the truncated exponential.

    The integrand ``exp(-Q/2) * sum_{n <= 2M} (-V/6)^n k^{-n/2} / n!`` is a
    Gaussian times a polynomial, so tensor-product Gauss-Hermite with enough
    nodes integrates it exactly up to rounding; odd ``n`` integrate to zero.
    """
    if not model.quadratic.positive_definite:
        raise DomainError("the euclidean check needs a positive-definite form")
    if not k > 0:
        raise DomainError("k must be positive")
    series = expand(model, max_order, variant=EUCLIDEAN, config=config)
    series_value = float(series.evaluate(k).real)
    top = 2 * max_order
    v = model.cubic.v

    def integrand(x):
        cubic = np.einsum("ijk,pi,pj,pk->p", v, x, x, x)
        total = np.zeros(len(x))
        for n in range(top + 1):
            total += (-cubic / 6.0) ** n * k ** (-n / 2) / math.factorial(n)
        return total

    order = max(3 * max_order + 2, 4)
    quad = gauss_hermite_expectation(model.quadratic, integrand, order=order)
    return TruncationCheck(series_value, quad)
