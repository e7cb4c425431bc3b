"""Lie-algebra weight systems on oriented trivalent graphs.

Each vertex carries the lowered structure tensor ``c_IJK = B([E_I, E_J], E_K)``
with its indices read in the vertex's stored leg order; each edge carries the
inverse form ``B^{IJ}``.  Because ``c`` is totally antisymmetric, rotating a
vertex's order leaves the value alone and a transposition flips its sign.

Sign convention: the stored order of a vertex is read once, as listed, and
matched to ``c``'s index order.  Only relative signs between orientations
are meaningful.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .config import DEFAULT
from .errors import DimensionError, InvariantError, ValidationError
from .graphs import OrientedGraph, TrivalentGraph
from .weights import contract_network


def antisymmetrize3(t: np.ndarray) -> np.ndarray:
    """Signed average over index permutations; exact when already antisymmetric."""
    perms = list(itertools.permutations(range(3)))
    signs = [1, -1, -1, 1, 1, -1]  # parity of each entry of `perms`
    stack = np.stack([s * np.transpose(t, p) for s, p in zip(signs, perms)])
    out = stack.mean(axis=0)
    same = np.all(stack == stack[0], axis=0)
    out[same] = t[same]
    return out


class LieData:
    """Invariant form ``b`` and lowered structure tensor ``c`` of a Lie algebra.

    ``check_jacobi=False`` admits arbitrary antisymmetric tensors, which is
    useful for probing the graph-theoretic vanishing results that do not
    depend on the Jacobi identity.
    """

    def __init__(self, b, c, check_jacobi: bool = True, tol: float = DEFAULT.symmetry_tol):
        b = np.array(b, dtype=float)
        c = np.array(c, dtype=float)
        d = b.shape[0]
        if b.shape != (d, d) or c.shape != (d, d, d):
            raise DimensionError(f"need b of shape (D, D) and c of shape (D, D, D); got {b.shape}, {c.shape}")
        if np.max(np.abs(b - b.T)) > tol:
            raise InvariantError("b", "symmetric")
        if abs(np.linalg.det(b)) <= DEFAULT.det_floor:
            raise InvariantError("b", "invertible")
        if antisymmetry_residual(c) > tol:
            raise InvariantError("c", "totally antisymmetric", f"residual {antisymmetry_residual(c):.2e}")
        self.b = b
        self.c = c
        self.b_inv = np.linalg.inv(b)
        if check_jacobi:
            res = self.jacobi_residual()
            if res > 1e-10:
                raise InvariantError("c", "Jacobi identity", f"residual {res:.2e}")

    @property
    def dim(self) -> int:
        return self.b.shape[0]

    def structure_constants(self) -> np.ndarray:
        """Raised constants ``c_IJ^K`` with ``[E_I, E_J] = c_IJ^K E_K``."""
        return np.einsum("ijl,lk->ijk", self.c, self.b_inv)

    def jacobi_residual(self) -> float:
        f = self.structure_constants()
        term = np.einsum("ijm,mkl->ijkl", f, f)
        cyc = term + np.transpose(term, (1, 2, 0, 3)) + np.transpose(term, (2, 0, 1, 3))
        return float(np.max(np.abs(cyc), initial=0.0))

    def change_basis(self, a: np.ndarray) -> LieData:
        """Data in the basis ``E'_I = a_IJ E_J``."""
        a = np.asarray(a, dtype=float)
        b = a @ self.b @ a.T
        c = np.einsum("ia,jb,kc,abc->ijk", a, a, a, self.c)
        return LieData(0.5 * (b + b.T), antisymmetrize3(c), check_jacobi=False, tol=1e-9)

    def to_json(self) -> dict:
        idx = np.argwhere(self.c != 0)
        return {"dim": self.dim, "b": self.b.tolist(),
                "c": [[int(i), int(j), int(k), float(self.c[i, j, k])] for i, j, k in idx]}


def antisymmetry_residual(c: np.ndarray) -> float:
    res = 0.0
    for p, s in zip(itertools.permutations(range(3)), [1, -1, -1, 1, 1, -1]):
        res = max(res, float(np.max(np.abs(c - s * np.transpose(c, p)), initial=0.0)))
    return res


def gell_mann_basis(n: int) -> list:
    """Hermitian traceless ``n x n`` matrices with ``Tr(λ_a λ_b) = 2 δ_ab``."""
    mats = []
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = s[k, j] = 1
            a = np.zeros((n, n), dtype=complex)
            a[j, k], a[k, j] = -1j, 1j
            mats += [s, a]
    for l in range(1, n):
        d = np.zeros((n, n), dtype=complex)
        d[np.arange(l), np.arange(l)] = 1
        d[l, l] = -l
        mats.append(d * math.sqrt(2.0 / (l * (l + 1))))
    return mats


def sun_data(n: int) -> LieData:
    """``su(n)`` in the basis ``E_a = i λ_a / √2`` of anti-Hermitian matrices.

    ``B_IJ = Tr(E_I E_J)`` in the defining representation; on the
    complexification this is the form with ``B(h, h) = 2`` for the coroot
    ``h = diag(1, -1, 0, ...)``.  Here ``B = -identity``.
    """
    if not isinstance(n, int) or n < 2:
        raise ValidationError(f"su(n) needs an integer n >= 2, got {n!r}")
    basis = [1j * lam / math.sqrt(2) for lam in gell_mann_basis(n)]
    d = len(basis)
    b = np.array([[np.trace(x @ y).real for y in basis] for x in basis])
    c = np.zeros((d, d, d))
    for i, j in itertools.combinations(range(d), 2):
        comm = basis[i] @ basis[j] - basis[j] @ basis[i]
        for k in range(d):
            c[i, j, k] = np.trace(comm @ basis[k]).real
            c[j, i, k] = -c[i, j, k]
    c[np.abs(c) < 1e-15] = 0.0
    return LieData(b, antisymmetrize3(c))


def su2_data() -> LieData:
    return sun_data(2)


def coroot_norm(n: int) -> float:
    """``Tr(h h)`` for ``h = diag(1, -1, 0, ...)``: the normalization the form must meet."""
    h = np.zeros((n, n))
    h[0, 0], h[1, 1] = 1, -1
    return float(np.trace(h @ h))


def lie_weight(data: LieData, og: OrientedGraph, order=None) -> float:
    """Contract ``c`` at vertices (in stored leg order) with ``B^{-1}`` on edges."""
    g = og.graph
    if g.num_vertices == 0:
        return 1.0
    return contract_network([data.c] * g.num_vertices, og.orientation, g.matching,
                            data.b_inv, order=order)


def combined_weight(data: LieData, geometric: float, og: OrientedGraph) -> float:
    """Product of a geometric factor (same orientation convention) and the Lie factor."""
    return geometric * lie_weight(data, og)


def oriented(g: TrivalentGraph, orientation=None) -> OrientedGraph:
    return OrientedGraph.standard(g) if orientation is None else OrientedGraph(g, orientation)
