"""Feynman-diagram expansions of finite-dimensional integrals with cubic interactions.

Submodules: ``graphs`` (trivalent graphs, automorphisms, canonical forms),
``wick`` (Gaussian moments), ``weights`` (tensor contractions), ``series``
(asymptotic expansions), ``lie`` (Lie weight systems), ``links`` (linking
number and writhe), ``quotient`` (orbit-space integration), ``io`` and
``config``, plus the oracle suite in ``verify`` and the ``cli``.
"""

__version__ = "0.1.0"
