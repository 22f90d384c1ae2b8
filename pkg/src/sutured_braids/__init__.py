"""Exact-triangle invariant of local 2-braids on surfaces.

Modules, bottom up: ``group_algebra`` (words and Laurent coefficients),
``surface_chords`` (chord enumeration), ``braids`` (surface braid words),
``morse_engine`` (the 1-jet Morse model), ``complexes`` (chain complexes,
homology and the exact triangle), ``invariant`` (the decision procedure) and
``cli``.
"""

from .braids import BraidWord, delta, parse_braid, sigma_exponent
from .complexes import (
    ChainComplex,
    build_cylindrical,
    build_triangle,
    build_wrapped,
    homology_unit_pivot,
    quotient_exterior,
    verify_d_squared,
    verify_exactness,
)
from .group_algebra import BimoduleElement, GroupKind, GroupWord, LaurentBimonomial, LaurentPoly
from .invariant import diagram_check, distinguish, reduce_pair
from .morse_engine import MorseProblem, find_critical_points, morse_differential
from .surface_chords import Chord, SurfaceSpec, enumerate_chords

__version__ = "0.1.0"

__all__ = [
    "BimoduleElement", "BraidWord", "ChainComplex", "Chord", "GroupKind", "GroupWord",
    "LaurentBimonomial", "LaurentPoly", "MorseProblem", "SurfaceSpec",
    "build_cylindrical", "build_triangle", "build_wrapped", "delta", "diagram_check",
    "distinguish", "enumerate_chords", "find_critical_points", "homology_unit_pivot",
    "morse_differential", "parse_braid", "quotient_exterior", "reduce_pair",
    "sigma_exponent", "verify_d_squared", "verify_exactness",
]
