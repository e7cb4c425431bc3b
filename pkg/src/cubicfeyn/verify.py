"""Oracle suite behind ``cubicfeyn verify``.

Each check pits a fast path against an independent route and reports
pass/fail with the measured discrepancy.  ``quick`` stays at loop order
``m <= 2``; ``full`` adds the ``m = 3`` exhaustive counts.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import graphs, links, oracles
from .config import DEFAULT
from .graphs import OrientedGraph, TrivalentGraph
from .lie import LieData, antisymmetrize3, lie_weight, sun_data
from .quotient import gaussian, quotient_integral
from .series import euclidean_truncation_check, expand, expand_connected, series_exp
from .weights import CubicModel, CubicTensor, graph_weight, symmetrize3
from .wick import QuadraticForm, enumerate_pairings, moment_wick


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"property": self.name, "passed": self.passed, "detail": self.detail}


def random_model(rng, n: int, coupling: float = 1.0) -> CubicModel:
    a = rng.normal(size=(n, n))
    q = a @ a.T + n * np.eye(n)
    v = symmetrize3(rng.normal(size=(n, n, n))) * coupling
    return CubicModel(QuadraticForm(q), CubicTensor(v))


def rel_err(a, b) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else abs(a - b)


def ihx_triple():
    """Three oriented 8-vertex graphs differing inside a disc.

    Outer vertices ``P, Q, R, S, Y, Z`` (0-5) form a fixed context with
    edges ``P-Q``, ``R-S``, ``Y-Z``, ``P-Y``, ``R-Y``, ``Q-Z``, ``S-Z``; each of
    ``P, Q, R, S`` exposes one leg ``a = 0``, ``b = 3``, ``c = 6``, ``d = 9``.
    Inner vertices ``u = (18, 19, 20)`` and ``w = (21, 22, 23)`` share the
    edge ``20-21``.  I, H and X attach the legs to ``(u, u, w, w)`` as
    ``(a, b | c, d)``, ``(b, c | a, d)`` and ``(c, a | b, d)``; H's ``u`` is
    ordered against the cyclic pattern so the relation reads
    ``I - H + X = 0``.  The context has no symmetry relating the three
    graphs, so the relation fails for antisymmetric tensors that violate
    the Jacobi identity.
    """
    a, b, c, d = 0, 3, 6, 9
    context = [(1, 4), (7, 10), (12, 15), (2, 13), (8, 14), (5, 16), (11, 17)]

    def build(first, second, third, fourth, flip=False):
        pairs = context + [(first, 18), (second, 19), (20, 21), (third, 22), (fourth, 23)]
        g = TrivalentGraph(8, tuple(pairs))
        orient = [(3 * v, 3 * v + 1, 3 * v + 2) for v in range(6)]
        orient += [(19, 18, 20) if flip else (18, 19, 20), (21, 22, 23)]
        return OrientedGraph(g, tuple(orient))

    return build(a, b, c, d), build(b, c, a, d, flip=True), build(c, a, b, d)


def _timed(name, fn) -> CheckResult:
    start = time.perf_counter()
    try:
        passed, detail = fn()
    except Exception as exc:  # a crashing check is a failed check
        passed, detail = False, f"raised {type(exc).__name__}: {exc}"
    return CheckResult(name, bool(passed), detail, time.perf_counter() - start)


def check_pairing_counts(max_d):
    counts = {d: sum(1 for _ in enumerate_pairings(d, max_degree=max_d)) for d in range(0, max_d + 1, 2)}
    ok = all(c == graphs.double_factorial(d - 1) for d, c in counts.items())
    return ok, f"counts {counts}"


def check_orbit_stabilizer(max_m):
    details = []
    ok = True
    for m in range(1, max_m + 1):
        total = graphs.enumerate_graphs(m).total_multiplicity()
        expected = graphs.double_factorial(6 * m - 1)
        ok &= total == expected
        details.append(f"m={m}: {total} vs (6m-1)!!={expected}")
    return ok, "; ".join(details)


def check_class_multiplicities(m):
    counts = graphs.classify_all_pairings(m)
    table = graphs.enumerate_graphs(m)
    ok = (len(counts) == len(table.classes)
          and all(counts[c.graph] == c.multiplicity for c in table.classes))
    return ok, f"m={m}: {len(table.classes)} classes, brute-force multiplicities match={ok}"


def check_aut_bruteforce(m):
    table = graphs.enumerate_graphs(m)
    bad = [c.aut for c in table.classes if graphs.automorphism_order_bruteforce(c.graph) != c.aut]
    return not bad, f"m={m}: {len(table.classes)} classes checked against full group sweep"


def check_wick_quadrature(rng, trials):
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 4))
        a = rng.normal(size=(n, n))
        form = QuadraticForm(a @ a.T + 0.5 * np.eye(n))
        d = int(rng.integers(1, 5)) * 2
        idx = [int(x) for x in rng.integers(0, n, size=d)]
        wick = moment_wick(form, idx, "euclidean").real
        quad = oracles.monomial_moment_quadrature(form, idx)
        worst = max(worst, rel_err(wick, quad))
    return worst < DEFAULT.quad_rel_tol, f"max relative error {worst:.2e} over {trials} trials"


def check_wick_pairings(rng, trials):
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 4))
        a = rng.normal(size=(n, n))
        form = QuadraticForm(a @ a.T + np.eye(n))
        idx = [int(x) for x in rng.integers(0, n, size=2 * int(rng.integers(1, 5)))]
        fast = moment_wick(form, idx, "oscillatory")
        slow = oracles.wick_by_pairings(form, idx, "oscillatory")
        worst = max(worst, abs(fast - slow) / max(abs(slow), 1e-300))
    return worst < 1e-12, f"max relative error {worst:.2e}"


def check_weights_naive(rng):
    worst = 0.0
    for m, n in ((1, 3), (2, 2)):
        model = random_model(rng, n)
        for cls in graphs.enumerate_graphs(m).classes:
            fast = graph_weight(model, cls.graph)
            slow = oracles.naive_graph_weight(model.cubic.v, model.quadratic.inverse, cls.graph)
            worst = max(worst, rel_err(fast, slow))
    return worst < 1e-12, f"max relative error {worst:.2e}"


def check_series_raw(rng):
    v = 0.7
    model = CubicModel(QuadraticForm([[1.0]]), CubicTensor([[[v]]]))
    ledger = expand(model, 2)
    details = []
    worst = 0.0
    for m in (1, 2):
        raw = oracles.raw_series_coefficient(model.cubic.v, model.quadratic, m)
        worst = max(worst, abs(ledger[m] - raw) / abs(raw))
    worst = max(worst, abs(ledger[1] - 1j * 5 * v * v / 24) / (5 * v * v / 24))
    details.append(f"N=1: c1={ledger[1]:.12g}")
    model = random_model(rng, 2)
    ledger = expand(model, 2)
    for m in (1, 2):
        poly = oracles.polynomial_series_coefficient(model.cubic.v, model.quadratic, m)
        worst = max(worst, abs(ledger[m] - poly) / abs(poly))
    details.append(f"max relative error {worst:.2e}")
    return worst < 1e-12, "; ".join(details)


def check_exp_log(rng, trials):
    worst = 0.0
    for _ in range(trials):
        model = random_model(rng, int(rng.integers(1, 4)))
        full = expand(model, 2).coefficients
        conn = expand_connected(model, 2).coefficients
        exp = series_exp(list(conn))
        worst = max(worst, max(abs(a - b) / max(abs(a), 1e-300) for a, b in zip(full, exp)))
    return worst < DEFAULT.series_rel_tol, f"max relative error {worst:.2e}"


def check_truncation(rng):
    worst = 0.0
    for n in (1, 2):
        model = random_model(rng, n, coupling=0.1)
        worst = max(worst, euclidean_truncation_check(model, 1, 1.0).relative_error)
    return worst < 1e-6, f"max relative error {worst:.2e}"


def check_lie(rng):
    eps = np.zeros((3, 3, 3))
    for (i, j, k) in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        eps[i, j, k], eps[j, i, k] = 1, -1
    db = graphs.dumbbell()
    th = OrientedGraph.standard(graphs.theta())
    theta_test = lie_weight(LieData(np.eye(3), eps), th)
    worst_db = 0.0
    algebras = [sun_data(2), sun_data(3)]
    for _ in range(10):
        d = int(rng.integers(2, 6))
        algebras.append(LieData(np.eye(d), antisymmetrize3(rng.normal(size=(d, d, d))), check_jacobi=False))
    for alg in algebras:
        worst_db = max(worst_db, abs(lie_weight(alg, OrientedGraph.standard(db))))
    jac = max(sun_data(n).jacobi_residual() for n in (2, 3, 4))
    i_g, h_g, x_g = ihx_triple()
    su2 = sun_data(2)
    ihx = lie_weight(su2, i_g) - lie_weight(su2, h_g) + lie_weight(su2, x_g)
    ok = worst_db <= 1e-14 and abs(theta_test - 6) <= 1e-12 and jac < 1e-10 and abs(ihx) < 1e-10
    return ok, (f"|b(dumbbell)|<={worst_db:.1e}, b(theta)={theta_test:.12g}, "
                f"jacobi={jac:.1e}, IHX residual={ihx:.1e}")


def check_links():
    ok = True
    details = []
    a, b = links.hopf_link()
    val = links.linking_number(a, b).value
    exact = links.linking_number_exact(a, b)
    ok &= abs(abs(val) - 1) < 1e-3 and round(val) == exact
    details.append(f"hopf={val:.12g} (oracle {exact})")
    for q in (2, 3):
        a, b = links.torus_link(q)
        val = links.linking_number(a, b).value
        ok &= round(val) == links.linking_number_exact(a, b) and abs(val - round(val)) < 1e-3
    split = links.linking_number(links.circle(), links.circle(center=(10, 0, 0))).value
    ok &= abs(split) < 1e-6
    details.append(f"split={split:.1e}")
    return ok, ", ".join(details)


def check_writhe():
    planar = links.writhe(links.circle(samples=12))
    t = links.trefoil(40)
    mirror = links.writhe(t) + links.writhe(t.mirrored())
    return abs(planar) < 1e-10 and abs(mirror) < 1e-10, f"planar={planar:.1e}, mirror sum={mirror:.1e}"


def check_quotient():
    val = quotient_integral(gaussian())
    return abs(val - math.pi) < 1e-10, f"value={val:.15g}"


def run_checks(level: str = "quick", seed: int = DEFAULT.rng_seed) -> list:
    if level not in ("quick", "full"):
        raise ValueError("level must be 'quick' or 'full'")
    full = level == "full"
    rng = np.random.default_rng(seed)
    checks = [
        ("pairing_counts", lambda: check_pairing_counts(18 if full else 12)),
        ("orbit_stabilizer", lambda: check_orbit_stabilizer(3 if full else 2)),
        ("class_multiplicities_bruteforce", lambda: check_class_multiplicities(2 if full else 1)),
        ("automorphisms_bruteforce", lambda: check_aut_bruteforce(3 if full else 2)),
        ("wick_vs_quadrature", lambda: check_wick_quadrature(rng, 20)),
        ("wick_vs_pairings", lambda: check_wick_pairings(rng, 20)),
        ("weights_vs_naive_loop", lambda: check_weights_naive(rng)),
        ("series_ledger_vs_raw", lambda: check_series_raw(rng)),
        ("exp_connected_equals_full", lambda: check_exp_log(rng, 10)),
        ("euclidean_truncation", lambda: check_truncation(rng)),
        ("lie_weights", lambda: check_lie(rng)),
        ("linking_numbers", check_links),
        ("writhe", check_writhe),
        ("quotient_example", check_quotient),
    ]
    return [_timed(name, fn) for name, fn in checks]
