"""Reeb chords between two unit fibers of the unit tangent bundle of a surface.

For a metric of constant curvature every homotopy class of paths between the
two base points holds exactly one geodesic, so chords are indexed by pi_1(S).
The action of a chord is the length of its geodesic.  On the flat torus this
is ``|d + (m, n)|`` for the lifted displacement; on hyperbolic surfaces we use
the geodesic word length of the group element as a proxy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .group_algebra import GroupKind, GroupWord, dehn_reduce_signed, _from_signed

__all__ = ["SurfaceSpec", "Chord", "enumerate_chords", "dehn_reduce", "same_element"]


@dataclass(frozen=True)
class SurfaceSpec:
    """A surface which is not a sphere.

    ``kind`` is ``"torus"`` or ``"hyperbolic"``.  For the torus, ``displacement``
    is the offset between the base points in the fundamental domain [0,1)^2.
    """

    kind: str = "torus"
    genus: int = 1
    displacement: tuple[float, float] = (0.3, 0.0)

    def __post_init__(self):
        if self.kind == "sphere" or (self.kind == "hyperbolic" and self.genus == 0):
            raise ValueError("the sphere is excluded: pi_1 must be infinite")
        if self.kind == "torus":
            if self.genus != 1:
                raise ValueError("torus has genus 1")
        elif self.kind == "hyperbolic":
            if self.genus < 2:
                raise ValueError(f"hyperbolic surfaces need genus >= 2, got {self.genus}")
        else:
            raise ValueError(f"unknown surface kind {self.kind!r}")
        object.__setattr__(self, "displacement",
                           (float(self.displacement[0]), float(self.displacement[1])))

    @classmethod
    def torus(cls, displacement=(0.3, 0.0)) -> "SurfaceSpec":
        return cls("torus", 1, tuple(displacement))

    @classmethod
    def hyperbolic(cls, genus: int) -> "SurfaceSpec":
        return cls("hyperbolic", genus)

    @property
    def group_kind(self) -> GroupKind:
        return GroupKind.torus() if self.kind == "torus" else GroupKind.surface(self.genus)


@dataclass(frozen=True)
class Chord:
    gamma: GroupWord
    action: float = field(compare=False)

    def __post_init__(self):
        if self.action < 0:
            raise ValueError("chord action must be nonnegative")


def _sort_key(ch: Chord):
    # round so that mirror-image lattice points tie exactly
    return (round(ch.action, 12), ch.gamma.encode())


def _torus_chords(d: tuple[float, float], cutoff: float) -> list[Chord]:
    r = int(math.ceil(cutoff)) + 1
    out = []
    for m in range(-r - int(abs(d[0])) - 1, r + int(abs(d[0])) + 2):
        for n in range(-r - int(abs(d[1])) - 1, r + int(abs(d[1])) + 2):
            act = math.hypot(d[0] + m, d[1] + n)
            if act <= cutoff:
                out.append(Chord(GroupWord.torus(m, n), act))
    return out


def same_element(u: GroupWord, v: GroupWord) -> bool:
    """Word problem via Dehn's algorithm: ``u v^-1`` reduces to the empty word."""
    if u.kind != v.kind:
        return False
    if u.kind.name != "surface":
        return u == v
    return not dehn_reduce_signed(u.signed() + v.inverse().signed(), u.kind)


def _hyperbolic_chords(kind: GroupKind, max_len: int) -> list[Chord]:
    """Breadth-first enumeration of group elements of word length <= max_len.

    Geodesic words are Dehn-reduced and their prefixes are geodesic, so
    extending the kept representatives of length l-1 by one letter reaches
    every element of length l.  Candidates that are not Dehn-reduced are
    shorter elements already found; the rest are deduplicated with the word
    problem, bucketed by abelianization.
    """
    letters = [s for g in range(kind.n_generators) for s in (g + 1, -(g + 1))]
    letters.sort(key=lambda s: (abs(s), -s))
    identity = GroupWord.identity(kind)
    kept = [Chord(identity, 0.0)]
    buckets: dict[tuple[int, ...], list[GroupWord]] = {identity.abelianization(): [identity]}
    frontier = [[]]
    for length in range(1, max_len + 1):
        new_frontier = []
        for w in frontier:
            for s in letters:
                if w and w[-1] == -s:
                    continue
                cand = w + [s]
                if len(dehn_reduce_signed(cand, kind)) != len(cand):
                    continue
                word = GroupWord(kind, _from_signed(cand))
                bucket = buckets.setdefault(word.abelianization(), [])
                if any(same_element(word, other) for other in bucket):
                    continue
                bucket.append(word)
                kept.append(Chord(word, float(length)))
                new_frontier.append(cand)
        frontier = new_frontier
    return kept


def enumerate_chords(spec: SurfaceSpec, cutoff: float) -> list[Chord]:
    """All chords with action (torus) or word length (hyperbolic) <= cutoff.

    Sorted by action, ties broken by the word encoding.  A zero cutoff is
    allowed on the torus (it returns the identity chord when the base points
    coincide); otherwise the cutoff must be positive.
    """
    if cutoff < 0 or (cutoff == 0 and spec.kind != "torus"):
        raise ValueError(f"cutoff must be positive, got {cutoff}")
    if spec.kind == "torus":
        chords = _torus_chords(spec.displacement, float(cutoff))
    else:
        chords = _hyperbolic_chords(spec.group_kind, int(math.floor(cutoff)))
    return sorted(chords, key=_sort_key)


def dehn_reduce(w: GroupWord, spec: SurfaceSpec | None = None) -> GroupWord:
    """Dehn-reduce a surface-group word (idempotent, same group element)."""
    kind = spec.group_kind if spec is not None else w.kind
    if kind.name != "surface":
        raise ValueError("Dehn reduction needs a hyperbolic surface")
    if w.kind != kind:
        raise ValueError(f"word lives in {w.kind}, not {kind}")
    return GroupWord(kind, _from_signed(dehn_reduce_signed(w.signed(), kind)))


def chord_table(chords: list[Chord]) -> str:
    """One chord per line: ``<word>\\t<action>``."""
    return "".join(f"{c.gamma.encode()}\t{c.action:.12g}\n" for c in chords)


def chord_document(spec: SurfaceSpec, cutoff: float, chords: list[Chord]) -> dict:
    return {
        "surface": {"kind": spec.kind, "genus": spec.genus,
                    "displacement": list(spec.displacement)},
        "cutoff": cutoff,
        "chords": [{"gamma": c.gamma.encode(), "action": round(c.action, 12)}
                   for c in chords],
    }
