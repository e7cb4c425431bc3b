"""Regression corpus of two-component links with known linking numbers."""

import numpy as np

from cubicfeyn import links


def _rotation(seed):
    q, r = np.linalg.qr(np.random.default_rng(seed).normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    return q if np.linalg.det(q) > 0 else -q


def link_corpus():
    """Ten ``(name, c1, c2, expected |Lk|)`` entries."""
    core = links.circle(radius=2.0, samples=96)
    hopf = links.hopf_link()
    entries = [
        ("hopf", *hopf, 1),
        ("hopf_reversed", hopf[0], hopf[1].reversed(), 1),
        ("split", links.circle(), links.circle(center=(10, 0, 0)), 0),
        ("torus_link_2", *links.torus_link(2), 2),
        ("torus_link_3", *links.torus_link(3), 3),
        ("torus_link_4", *links.torus_link(4, samples=120), 4),
        ("core_and_1_5_curve", core, links.torus_knot(1, 5, samples=150), 5),
        ("core_and_trefoil", core, links.torus_knot(2, 3, samples=120), 3),
        ("core_and_3_2_knot", core, links.torus_knot(3, 2, samples=150), 2),
        ("hopf_moved", hopf[0].transformed(_rotation(3), shift=(0.3, -2.0, 5.0), scale=2.5),
         hopf[1].transformed(_rotation(3), shift=(0.3, -2.0, 5.0), scale=2.5), 1),
    ]
    return entries
