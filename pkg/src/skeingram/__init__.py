"""Exact Gram determinants for the relative Kauffman bracket skein module of the square.

Submodules:

* ``exact_algebra``: Laurent polynomials in ``A``, their fractions, ``Delta_n``.
* ``tl_core``: Temperley-Lieb diagrams and Jones-Wenzl idempotents.
* ``skein_bases``: step tuples and the bases ``B`` and ``D``.
* ``gram_forms``: Gram matrices, determinants, semi-meander matrices.
* ``dyck_paths``: generalized Dyck paths and the k-down step bijection.
* ``genfun``: truncated generating functions.
* ``cli``: the ``skeingram`` command.
"""

from .exact_algebra import A, DELTA, DeltaPoly, LaurentPoly, RationalFunc, delta
from .gram_forms import det_closed, det_fraction_free, gram_matrix
from .skein_bases import StepTuple, enumerate_tuples
from .tl_core import PlanarMatching, TLElement, jones_wenzl

__version__ = "0.1.0"

__all__ = [
    "A",
    "DELTA",
    "DeltaPoly",
    "LaurentPoly",
    "PlanarMatching",
    "RationalFunc",
    "StepTuple",
    "TLElement",
    "delta",
    "det_closed",
    "det_fraction_free",
    "enumerate_tuples",
    "gram_matrix",
    "jones_wenzl",
]
