"""Deciding whether two local braids s^k and s^k' are told apart.

Gluing the two braids reduces the question to the pair (k - k', 0).  For the
difference kappa we compare the exact triangles of s^kappa and s^0.  When the
exterior column is the identity (the boundary is fixed during an isotopy), a
commuting diagram forces ker(Id + d_0) inside ker(Id + d_kappa).  The kernel
of Id + d_0 is spanned by the anti-diagonal ``c- - c+``, and its image under
Id + d_kappa is ``c0 - x^-kappa y^kappa c0``, which vanishes iff kappa = 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

from .complexes import (
    ComplexError,
    TrianglePackage,
    build_triangle,
    label_for,
)
from .group_algebra import (
    BimoduleElement,
    GroupWord,
    LaurentBimonomial,
    LaurentPoly,
    bimodule_act,
)
from .linalg import mat_vec, unit_pivot_kernel, unit_pivot_solve
from .surface_chords import Chord

__all__ = [
    "Obstruction",
    "Verdict",
    "reduce_pair",
    "distinguish",
    "verify_witness",
    "diagram_check",
    "search_unit_scalings",
]


@dataclass(frozen=True)
class Obstruction:
    """A class (u, v) in the exterior killed by Id + d_0 but not by Id + d_kappa.

    ``u`` lives on ``c-[gamma]`` and ``v`` on ``c+[gamma]``.
    """

    gamma: GroupWord
    u: BimoduleElement
    v: BimoduleElement
    image: BimoduleElement

    @property
    def element(self) -> BimoduleElement:
        return self.u + self.v

    def to_dict(self) -> dict:
        return {"gamma": self.gamma.encode(), "element": self.element.encode(),
                "u": self.u.encode(), "v": self.v.encode(), "image": self.image.encode()}


@dataclass(frozen=True)
class Verdict:
    k: int
    kprime: int
    kappa: int
    witness: Obstruction | None

    @property
    def distinguished(self) -> bool:
        return self.witness is not None

    def to_dict(self) -> dict:
        return {"verdict": "distinguished" if self.distinguished else "not_distinguished",
                "k": self.k, "kprime": self.kprime, "kappa": self.kappa,
                "witness": self.witness.to_dict() if self.witness else None}


def reduce_pair(k: int, kprime: int) -> int:
    return int(k) - int(kprime)


def _gamma_key(ch: Chord):
    return ch.gamma.encode()


@lru_cache(maxsize=256)
def _triangle(gammas: tuple[GroupWord, ...], kappa: int) -> TrianglePackage:
    return build_triangle([Chord(g, 0.0) for g in gammas], kappa)


def _normalize(vec: list[LaurentPoly]) -> list[LaurentPoly]:
    """Fix the sign so that the first nonzero entry has positive leading coefficient."""
    for e in vec:
        if not e.is_zero():
            lead = sorted(e.terms().items())[0][1]
            return [x * -1 for x in vec] if lead < 0 else vec
    return vec


def distinguish(k: int, kprime: int, chords: Iterable[Chord]) -> Verdict:
    """Compare the triangles of s^(k-k') and s^0 chord class by chord class.

    Classes are visited in lexicographic order of their encodings, so the
    reported witness is the anti-diagonal of the first class where it
    survives.
    """
    chords = sorted(chords, key=_gamma_key)
    if not chords:
        raise ComplexError("distinguish needs a nonempty chord set")
    kappa = reduce_pair(k, kprime)
    gammas = tuple(ch.gamma for ch in chords)
    t0 = _triangle(gammas, 0)
    tk = _triangle(gammas, kappa)
    for gamma in gammas:
        m0 = t0.connecting_matrix(gamma)
        kernel, _ = unit_pivot_kernel(m0, 2)
        for vec in kernel:
            vec = _normalize(vec)
            u = BimoduleElement.from_coefficients({label_for("c-", gamma): vec[0]})
            v = BimoduleElement.from_coefficients({label_for("c+", gamma): vec[1]})
            image = tk.connecting(u + v)
            if not image.is_zero():
                return Verdict(int(k), int(kprime), kappa, Obstruction(gamma, u, v, image))
    return Verdict(int(k), int(kprime), kappa, None)


def verify_witness(w: Obstruction, kappa: int) -> bool:
    """Recheck a witness straight from the connecting-map formulas.

    Independent of the complexes: Id + d_k sends ``(u, v)`` to
    ``u + x^-k v y^k`` on ``c0``.
    """
    c0 = label_for("c0", w.gamma)

    def image(k):
        u = BimoduleElement.from_coefficients({c0: w.u.coefficient(label_for("c-", w.gamma))})
        v = BimoduleElement.from_coefficients({c0: w.v.coefficient(label_for("c+", w.gamma))})
        return u + bimodule_act(LaurentBimonomial(-k, 0), v, LaurentBimonomial(0, k))

    return image(0).is_zero() and not image(kappa).is_zero() and image(kappa) == w.image


def _as_pair(s) -> tuple[LaurentPoly, LaurentPoly]:
    if isinstance(s, LaurentPoly):
        return s, s
    a, b = s
    return a, b


def diagram_check(kappa: int, phi=None, chords: Iterable[Chord] | None = None) -> bool:
    """Does a map of triangles s^0 -> s^kappa exist with exterior column ``phi``?

    ``phi`` scales the exterior summands ``(c-, c+)`` of every class by
    units of R.  It is given as one unit (same on both summands), a pair of
    units, a mapping ``gamma -> unit-or-pair``, or None for the identity.
    Both squares touching the exterior column are checked: the one with the
    connecting maps needs some ``F`` on LC with ``F (Id + d_0) =
    (Id + d_kappa) phi``, and the one with the projections needs the image
    of H(WLC_0) under phi to lift to H(WLC_kappa).
    """
    if chords is None:
        from .group_algebra import GroupKind

        chords = [Chord(GroupWord.identity(GroupKind.torus()), 0.0)]
    chords = sorted(chords, key=_gamma_key)
    gammas = tuple(ch.gamma for ch in chords)
    one = LaurentPoly.one()
    t0 = _triangle(gammas, 0)
    tk = _triangle(gammas, reduce_pair(kappa, 0))
    for gamma in gammas:
        if phi is None:
            s = (one, one)
        elif isinstance(phi, Mapping):
            s = _as_pair(phi.get(gamma, one))
        else:
            s = _as_pair(phi)
        if not all(x.is_unit() for x in s):
            raise ValueError(f"phi is not invertible on class {gamma.encode()}: {s}")
        m0 = t0.connecting_matrix(gamma)[0]
        mk = tk.connecting_matrix(gamma)[0]
        # (Id + d_kappa) phi, one column per exterior summand
        target = [mk[0] * s[0], mk[1] * s[1]]
        # F m0 = target, solved as m0^T F = target^T
        if unit_pivot_solve([[m0[0]], [m0[1]]], target, 1) is None:
            return False
        # phi sends ker(m0) into ker(mk) = im H(WLC_kappa) -> H(ext)
        for vec in unit_pivot_kernel([m0], 2)[0]:
            img = [s[0] * vec[0], s[1] * vec[1]]
            if any(not e.is_zero() for e in mat_vec([mk], img)):
                return False
    return True


def _units(radius: int):
    for sign in (1, -1):
        for a in range(-radius, radius + 1):
            for b in range(-radius, radius + 1):
                yield LaurentPoly.monomial(a, b, sign)


def search_unit_scalings(kappa: int, per_summand: bool = False,
                         radius: int | None = None) -> list:
    """All unit scalings with exponents in [-|kappa|-2, |kappa|+2] that commute.

    ``per_summand=False`` searches uniform scalings (one unit on both
    exterior summands); ``True`` searches independent units per summand.
    """
    if radius is None:
        radius = abs(kappa) + 2
    units = list(_units(radius))
    if per_summand:
        cands = itertools.product(units, units)
    else:
        cands = units
    return [c for c in cands if diagram_check(kappa, c)]
