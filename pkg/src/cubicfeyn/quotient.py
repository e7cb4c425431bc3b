"""Integrals of rotation-invariant functions on the plane via the orbit space.

For the circle acting on ``R^2`` by rotation, the orbit through ``p`` has
length ``2π |B*B|^{1/2}`` with ``B`` the infinitesimal action at ``p``;
that Jacobian factor is ``r``.  An invariant integrand then reduces to
``2π ∫ f(r) r dr`` over the half-line of orbit representatives.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import DomainError, ParseError, ValidationError

ROTATION_GENERATOR = np.array([[0.0, -1.0], [1.0, 0.0]])
CIRCLE_VOLUME = 2 * math.pi


def orbit_jacobian(point, generators=ROTATION_GENERATOR) -> float:
    """``|det B*B|^{1/2}`` where ``B`` maps the Lie algebra to the orbit tangent at ``point``.

    ``generators`` is one generator matrix or a stack of them.
    """
    gens = np.asarray(generators, dtype=float)
    if gens.ndim == 2:
        gens = gens[None]
    b = np.stack([g @ np.asarray(point, dtype=float) for g in gens], axis=1)
    return math.sqrt(abs(np.linalg.det(b.T @ b)))


class RadialIntegrand:
    """A function of ``r >= 0`` with an optional natural cutoff."""

    def __init__(self, func: Callable[[float], float], name: str = "custom", r_max: float | None = None,
                 breakpoints=()):
        self.func = func
        self.name = name
        self.r_max = r_max
        self.breakpoints = tuple(breakpoints)

    def __call__(self, r):
        return self.func(r)

    @classmethod
    def from_samples(cls, r, f, name="samples") -> RadialIntegrand:
        r = np.asarray(r, dtype=float)
        f = np.asarray(f, dtype=float)
        if r.shape != f.shape or r.ndim != 1 or len(r) < 2:
            raise ValidationError("sampled integrand needs equal-length 1-d r and f arrays")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(f))):
            raise DomainError("sampled integrand has non-finite samples")
        if np.any(np.diff(r) <= 0) or r[0] < 0:
            raise ValidationError("sample radii must be non-negative and strictly increasing")
        return cls(lambda x: float(np.interp(x, r, f, right=0.0)), name, float(r[-1]), tuple(r[1:-1]))


def gaussian(width: float = 1.0) -> RadialIntegrand:
    """``exp(-r^2 / width)``."""
    return RadialIntegrand(lambda r: math.exp(-r * r / width), f"gauss(width={width:g})", None)


def disc() -> RadialIntegrand:
    """Indicator of the unit disc."""
    return RadialIntegrand(lambda r: 1.0 if r <= 1.0 else 0.0, "disc", 1.0)


def load_integrand(spec: str) -> RadialIntegrand:
    """``gauss``, ``disc`` or ``file:path`` with ``{"r": [...], "f": [...]}``."""
    if spec == "gauss":
        return gaussian()
    if spec == "disc":
        return disc()
    if spec.startswith("file:"):
        path = Path(spec[5:])
        try:
            data = json.loads(path.read_text())
            return RadialIntegrand.from_samples(data["r"], data["f"], name=str(path))
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError(f"cannot read sampled integrand {path}: {exc}") from exc
    raise ValidationError(f"unknown integrand {spec!r}; use gauss, disc or file:path")


def _tail_radius(f: RadialIntegrand, tail_tol: float) -> float:
    """Smallest doubling radius beyond which ``|f| r`` looks negligible."""
    r = 4.0
    while r < 1e4:
        probe = np.linspace(r, 2 * r, 33)
        if max(abs(f(x)) * x for x in probe) * r < tail_tol:
            return r
        r *= 2
    raise DomainError("integrand does not decay; pass r_max explicitly")


def quotient_integral(f, r_max: float | None = None, tail_tol: float = 1e-14) -> float:
    """``2π ∫_0^{r_max} f(r) r dr``: the plane integral of a rotation-invariant function."""
    if not isinstance(f, RadialIntegrand):
        f = RadialIntegrand(f)
    if r_max is None:
        r_max = f.r_max if f.r_max is not None else _tail_radius(f, tail_tol)
    if not r_max > 0:
        raise ValidationError("r_max must be positive")

    def integrand(r):
        val = f(r)
        if not math.isfinite(val):
            raise DomainError(f"integrand is not finite at r={r}")
        return val * orbit_jacobian((r, 0.0))

    points = [p for p in f.breakpoints if 0 < p < r_max] or None
    limit = 200 if points is None else max(200, 4 * len(points))
    value, _ = integrate.quad(integrand, 0.0, r_max, epsabs=1e-14, epsrel=1e-13,
                              points=points, limit=limit)
    return CIRCLE_VOLUME * value


def plane_integral(f, half_width: float) -> float:
    """Direct ``∬ f(|p|) dx dy`` over ``[-h, h]^2`` (``h`` may be ``inf``); the cross-check for :func:`quotient_integral`."""
    if not isinstance(f, RadialIntegrand):
        f = RadialIntegrand(f)
    value, _ = integrate.dblquad(lambda y, x: f(math.hypot(x, y)), -half_width, half_width,
                                 -half_width, half_width, epsabs=1e-13, epsrel=1e-12)
    return value
