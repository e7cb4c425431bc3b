"""Gauss linking number and writhe of closed polygonal curves.

For two straight segments the Gauss double integral

    (1/4π) ∫∫ (x - y) · (dx × dy) / |x - y|^3

equals the signed solid angle swept by ``y - x`` over the parallelogram
with corners ``p3-p1, p3-p2, p4-p2, p4-p1``, divided by ``4π``.  It is
evaluated exactly as two Van Oosterom-Strackee triangles, so the only error
for a polygon is rounding.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import DomainError, InvariantError, ValidationError

log = logging.getLogger(__name__)

CONTACT_TOL = 1e-9


class PolyCurve:
    """Closed polygon; the last point joins back to the first."""

    def __init__(self, points):
        pts = np.array(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise InvariantError("points", "list of 3-vectors", f"shape {pts.shape}")
        if len(pts) < 3:
            raise InvariantError("points", "at least 3 points")
        if not np.all(np.isfinite(pts)):
            raise InvariantError("points", "finite coordinates")
        seg = np.roll(pts, -1, axis=0) - pts
        if np.any(np.linalg.norm(seg, axis=1) == 0):
            raise InvariantError("points", "no zero-length segments (consecutive points equal)")
        self.points = pts

    def __len__(self):
        return len(self.points)

    @property
    def starts(self) -> np.ndarray:
        return self.points

    @property
    def ends(self) -> np.ndarray:
        return np.roll(self.points, -1, axis=0)

    def transformed(self, rotation=None, shift=None, scale=1.0) -> PolyCurve:
        pts = self.points * scale
        if rotation is not None:
            pts = pts @ np.asarray(rotation).T
        if shift is not None:
            pts = pts + np.asarray(shift)
        return PolyCurve(pts)

    def reversed(self) -> PolyCurve:
        return PolyCurve(self.points[::-1])

    def mirrored(self, axis: int = 2) -> PolyCurve:
        pts = self.points.copy()
        pts[:, axis] *= -1
        return PolyCurve(pts)

    def refined(self) -> PolyCurve:
        """Insert segment midpoints (same polygon, twice the vertices)."""
        mid = 0.5 * (self.starts + self.ends)
        return PolyCurve(np.stack([self.points, mid], axis=1).reshape(-1, 3))

    def to_json(self) -> dict:
        return {"points": self.points.tolist()}


# -- geometry kernels ---------------------------------------------------------

def _triangle_solid_angle(a, b, c):
    """Signed solid angle of the triangle ``(a, b, c)`` seen from the origin (vectorized)."""
    la, lb, lc = (np.linalg.norm(x, axis=-1) for x in (a, b, c))
    num = np.einsum("...i,...i->...", a, np.cross(b, c))
    den = (la * lb * lc + np.einsum("...i,...i->...", a, b) * lc
           + np.einsum("...i,...i->...", a, c) * lb + np.einsum("...i,...i->...", b, c) * la)
    return 2.0 * np.arctan2(num, den)


def segment_pair_gauss(p1, p2, p3, p4):
    """Gauss integral over segments ``p1->p2`` and ``p3->p4`` (broadcasts)."""
    r13, r23, r24, r14 = p3 - p1, p3 - p2, p4 - p2, p4 - p1
    omega = _triangle_solid_angle(r13, r23, r24) + _triangle_solid_angle(r13, r24, r14)
    return omega / (4.0 * math.pi)


def segment_distances(a0, a1, b0, b1):
    """Minimum distance between segments ``a0a1`` and ``b0b1`` (broadcasts)."""
    d1, d2, r = a1 - a0, b1 - b0, a0 - b0
    a = np.einsum("...i,...i->...", d1, d1)
    e = np.einsum("...i,...i->...", d2, d2)
    f = np.einsum("...i,...i->...", d2, r)
    c = np.einsum("...i,...i->...", d1, r)
    b = np.einsum("...i,...i->...", d1, d2)
    denom = a * e - b * b
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 1e-14 * a * e, np.clip((b * f - c * e) / denom, 0, 1), 0.0)
        t = (b * s + f) / e
        t_c = np.clip(t, 0, 1)
        s = np.where(t != t_c, np.clip((b * t_c - c) / a, 0, 1), s)
    p = a0 + s[..., None] * d1
    q = b0 + t_c[..., None] * d2
    return np.linalg.norm(p - q, axis=-1)


def _fsum(values) -> float:
    return math.fsum(np.ravel(values).tolist())


def _scale(*curves) -> float:
    pts = np.concatenate([c.points for c in curves])
    return float(np.max(np.ptp(pts, axis=0))) or 1.0


def min_distance(c1: PolyCurve, c2: PolyCurve) -> float:
    d = segment_distances(c1.starts[:, None], c1.ends[:, None], c2.starts[None], c2.ends[None])
    return float(d.min())


def _nonadjacent_pairs(n: int):
    i, j = np.triu_indices(n, k=1)
    keep = (j - i != 1) & ~((i == 0) & (j == n - 1))
    return i[keep], j[keep]


def min_self_distance(c: PolyCurve) -> float:
    i, j = _nonadjacent_pairs(len(c))
    if len(i) == 0:
        return math.inf
    d = segment_distances(c.starts[i], c.ends[i], c.starts[j], c.ends[j])
    return float(d.min())


# -- invariants ---------------------------------------------------------------

@dataclass(frozen=True)
class LinkingResult:
    value: float
    integrality_defect: float

    @property
    def nearest_integer(self) -> int:
        return int(round(self.value))

    def __iter__(self):
        yield self.value
        yield self.integrality_defect


def linking_number(c1: PolyCurve, c2: PolyCurve, tol: float = DEFAULT.link_tol) -> LinkingResult:
    """Gauss linking integral, summed exactly over segment pairs.

    Returns the value and its distance to the nearest integer; a defect above
    ``tol`` is logged as a warning since it signals near-contact or rounding
    trouble.
    """
    gap = min_distance(c1, c2)
    if gap <= CONTACT_TOL * _scale(c1, c2):
        raise DomainError(f"curves touch or intersect (minimum distance {gap:.3e})")
    vals = segment_pair_gauss(c1.starts[:, None], c1.ends[:, None], c2.starts[None], c2.ends[None])
    value = _fsum(vals)
    defect = abs(value - round(value))
    if defect > tol:
        log.warning("linking integral %.6g is %.2e from an integer", value, defect)
    return LinkingResult(value, defect)


def writhe(c: PolyCurve) -> float:
    """Gauss integral of the curve against itself.

    Adjacent segments are coplanar and contribute nothing; each unordered
    pair of distinct segments is counted twice.
    """
    gap = min_self_distance(c)
    if gap <= CONTACT_TOL * _scale(c):
        raise DomainError(f"curve self-intersects (minimum distance {gap:.3e})")
    i, j = _nonadjacent_pairs(len(c))
    vals = segment_pair_gauss(c.starts[i], c.ends[i], c.starts[j], c.ends[j])
    return 2.0 * _fsum(vals)


def parallel_curve(c: PolyCurve, offset: float, direction=(0.0, 0.0, 1.0)) -> PolyCurve:
    """Translate of ``c`` by ``offset`` along a fixed direction (blackboard framing)."""
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    return PolyCurve(c.points + offset * d)


def self_linking(c: PolyCurve, framing_offset: float, direction=(0.0, 0.0, 1.0),
                 tol: float = DEFAULT.link_tol) -> float:
    """Linking number of ``c`` with its parallel pushed off along ``direction``.

    With the default direction this is the blackboard framing of the
    projection to the xy-plane.  The offset must stay below half the minimum
    distance between non-adjacent segments, and the parallel must not touch
    the curve (which happens when a segment is parallel to the push-off
    direction).
    """
    if not framing_offset > 0:
        raise ValidationError("framing_offset must be positive")
    limit = 0.5 * min_self_distance(c)
    if framing_offset >= limit:
        raise DomainError(f"offset {framing_offset:g} too large; must be below {limit:.3e}")
    par = parallel_curve(c, framing_offset, direction)
    gap = min_distance(c, par)
    if gap <= 1e-6 * framing_offset:
        raise DomainError("parallel curve meets the original; pick another framing direction")
    return linking_number(c, par, tol).value


# -- crossing-count oracles -----------------------------------------------------

def _projection_basis(d):
    """Orthonormal ``(d, u, w)`` for one direction or a stack of them."""
    d = np.asarray(d, dtype=float)
    d = d / np.linalg.norm(d, axis=-1, keepdims=True)
    helper = np.where((np.abs(d[..., 0]) < 0.9)[..., None], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0])
    u = np.cross(d, helper)
    u /= np.linalg.norm(u, axis=-1, keepdims=True)
    return d, u, np.cross(d, u)


def _dot(x, y):
    return np.einsum("...i,...i->...", x, y)


def _crossings(a0, a1, b0, b1, d, margin=1e-9):
    """Signed crossings between segment sets in the projection along ``d``.

    ``d`` is one direction ``(3,)`` or a batch ``(B, 3)``; segment arrays
    broadcast against each other and, for a batch, gain a leading axis.
    Returns ``(signs, degenerate)`` where ``signs`` holds ``±1`` for each
    crossing pair (over strand × under strand against the viewing direction)
    and ``degenerate`` flags projections where a crossing sits at a segment
    end or two segments project onto one line.
    """
    batched = np.ndim(d) == 2
    d, u, w = _projection_basis(d)
    if batched:
        shape = (len(d),) + (1,) * (np.broadcast(a0, b0).ndim - 1) + (3,)
        d, u, w = d.reshape(shape), u.reshape(shape), w.reshape(shape)
    ta, tb = a1 - a0, b1 - b0
    r = b0 - a0
    ua, wa, ub, wb = _dot(ta, u), _dot(ta, w), _dot(tb, u), _dot(tb, w)
    ur, wr = _dot(r, u), _dot(r, w)
    den = ua * wb - wa * ub
    with np.errstate(divide="ignore", invalid="ignore"):
        s = (ur * wb - wr * ub) / den
        t = (ur * wa - wr * ua) / den
    la, lb = np.hypot(ua, wa), np.hypot(ub, wb)
    parallel = np.abs(den) < 1e-12 * la * lb
    inside = (~parallel) & (s > -margin) & (s < 1 + margin) & (t > -margin) & (t < 1 + margin)
    near_end = inside & ((s < margin) | (s > 1 - margin) | (t < margin) | (t > 1 - margin))
    hit = inside & ~near_end
    collinear = parallel & (np.abs(ur * wa - wr * ua) < 1e-12 * la * (la + np.hypot(ur, wr)))
    axes = tuple(range(1, hit.ndim)) if batched else None
    degenerate = np.any(near_end | collinear, axis=axes)
    s_hit, t_hit = np.where(hit, s, 0.0), np.where(hit, t, 0.0)
    # height difference of the two strands at the crossing, along the view direction
    dh = _dot(a0 - b0, d) + s_hit * _dot(ta, d) - t_hit * _dot(tb, d)
    orient = np.sign(_dot(np.cross(ta, tb), d))
    sign = np.where(dh > 0, orient, -orient)
    return np.where(hit, sign, 0.0), degenerate


def _directions(max_attempts):
    yield np.array([0.3141592653, 0.2718281828, 0.9105427357])
    rng = np.random.default_rng(7919)
    for _ in range(max_attempts - 1):
        v = rng.normal(size=3)
        yield v / np.linalg.norm(v)


def linking_number_exact(c1: PolyCurve, c2: PolyCurve, max_attempts: int = 32) -> int:
    """Half the sum of signed crossings between the two curves in a generic projection."""
    for d in _directions(max_attempts):
        signs, degenerate = _crossings(c1.starts[:, None], c1.ends[:, None],
                                       c2.starts[None], c2.ends[None], d)
        if bool(degenerate):
            continue
        total = int(round(signs.sum()))
        if total % 2:
            continue
        return total // 2
    raise DomainError(f"no generic projection found in {max_attempts} attempts")


def directional_writhe(c: PolyCurve, d) -> float:
    """Signed self-crossings of the projection along ``d`` (nan if degenerate)."""
    i, j = _nonadjacent_pairs(len(c))
    signs, degenerate = _crossings(c.starts[i], c.ends[i], c.starts[j], c.ends[j], np.asarray(d, float))
    return math.nan if bool(degenerate) else float(signs.sum())


def projection_average_writhe(c: PolyCurve, num_directions: int = 20000, seed: int = 0,
                              batch: int = 256):
    """Average directional writhe over a spherical Fibonacci lattice.

    Directional writhe is even in the direction, so the lattice covers the
    upper hemisphere; a random rotation (from ``seed``) decorrelates it from
    the curve.  Degenerate directions are skipped.  Returns
    ``(mean, num_used)``.
    """
    k = np.arange(num_directions) + 0.5
    z = k / num_directions
    phi = k * math.pi * (3.0 - math.sqrt(5.0))
    r = np.sqrt(1 - z * z)
    dirs = np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)
    q, _ = np.linalg.qr(np.random.default_rng(seed).normal(size=(3, 3)))
    dirs = dirs @ q.T
    i, j = _nonadjacent_pairs(len(c))
    a0, a1, b0, b1 = c.starts[i], c.ends[i], c.starts[j], c.ends[j]
    totals = []
    for start in range(0, num_directions, batch):
        signs, degenerate = _crossings(a0, a1, b0, b1, dirs[start:start + batch])
        totals.append(signs.sum(axis=1)[~degenerate])
    values = np.concatenate(totals)
    return math.fsum(values.tolist()) / len(values), len(values)


# -- sample curves --------------------------------------------------------------

def circle(radius=1.0, center=(0, 0, 0), normal_axis=2, samples=64, phase=0.0) -> PolyCurve:
    t = 2 * math.pi * (np.arange(samples) + phase) / samples
    pts = np.zeros((samples, 3))
    axes = [a for a in range(3) if a != normal_axis]
    pts[:, axes[0]] = radius * np.cos(t)
    pts[:, axes[1]] = radius * np.sin(t)
    return PolyCurve(pts + np.asarray(center, float))


def hopf_link(samples=64):
    """Unit circle in the xy-plane and a unit circle in the xz-plane through its center."""
    return circle(samples=samples), circle(center=(1, 0, 0), normal_axis=1, samples=samples)


def torus_knot(p: int, q: int, samples: int = 120, major=2.0, minor=1.0,
               meridian_shift=0.0) -> PolyCurve:
    t = 2 * math.pi * np.arange(samples) / samples
    mer = q * t + meridian_shift
    rad = major + minor * np.cos(mer)
    return PolyCurve(np.stack([rad * np.cos(p * t), rad * np.sin(p * t), minor * np.sin(mer)], axis=1))


def trefoil(samples: int = 60) -> PolyCurve:
    """The (2, 3) torus knot."""
    return torus_knot(2, 3, samples)


def torus_link(q: int, samples: int = 80, major=2.0, minor=1.0):
    """Two parallel ``(1, q)`` curves on opposite sides of a torus; linking number ``±q``."""
    return (torus_knot(1, q, samples, major, minor),
            torus_knot(1, q, samples, major, minor, meridian_shift=math.pi))
