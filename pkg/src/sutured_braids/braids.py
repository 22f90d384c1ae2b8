"""Words in the 2-strand braid group B_2(S) of a closed surface of genus g.

Generators are the half twist ``s`` and ``a1 .. a2g`` (``bi`` is accepted as an
alias of ``a(2i)``).  Pure braids are written over ``t = s^2``, ``a_i`` and
``A_i = s^-1 a_i s^-1``.

We never solve the word problem in B_2(S).  Local braids are powers of ``s``
and everything else is handled through homomorphic invariants: the parity
``delta`` and the abelianization ``H_1(B_2(S)) = Z^2g + Z/2``.

Pure rewriting is Reidemeister-Schreier with transversal {1, s^-1}.  Reading a
word left to right, a letter emits a pure generator depending on the current
coset and possibly switches coset:

    coset 1     s  -> t          (switch)     s^-1 -> (nothing)  (switch)
                a  -> a                       a^-1 -> a^-1
    coset s^-1  s  -> (nothing)  (switch)     s^-1 -> t^-1       (switch)
                a  -> A t                     a^-1 -> t^-1 A^-1
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Iterable

__all__ = [
    "BraidWord",
    "PureBraidWord",
    "NonLocalBraidError",
    "OddBraidError",
    "parse_braid",
    "delta",
    "sigma_exponent",
    "to_pure_generators",
    "expand_pure",
    "free_abelianization",
    "abelianization",
    "relator_list",
    "pure_relator_list",
    "random_braid",
]

SIGMA = "s"


class NonLocalBraidError(ValueError):
    """Raised when a braid is not a power of the half twist."""

    def __init__(self, letter: str, word: "BraidWord"):
        super().__init__(f"braid {word} is not local: contains {letter}")
        self.letter = letter
        self.word = word


class OddBraidError(ValueError):
    pass


def _reduce(letters: Iterable[tuple[str, int]]) -> tuple[tuple[str, int], ...]:
    out: list[tuple[str, int]] = []
    for gen, e in letters:
        if e == 0:
            continue
        if out and out[-1][0] == gen:
            e += out.pop()[1]
            if e == 0:
                continue
        out.append((gen, e))
    return tuple(out)


def _encode(letters) -> str:
    if not letters:
        return "1"
    return " ".join(g if e == 1 else f"{g}^{e}" for g, e in letters)


@dataclass(frozen=True)
class BraidWord:
    """Freely reduced word over ``s, a1 .. a2g``."""

    letters: tuple[tuple[str, int], ...] = ()
    genus: int = 1

    def __post_init__(self):
        if self.genus < 1:
            raise ValueError("genus must be >= 1")
        allowed = {SIGMA} | {f"a{i}" for i in range(1, 2 * self.genus + 1)}
        for g, _ in self.letters:
            if g not in allowed:
                raise ValueError(f"unknown braid generator {g!r} for genus {self.genus}")
        object.__setattr__(self, "letters", _reduce(self.letters))

    @classmethod
    def sigma_power(cls, k: int, genus: int = 1) -> "BraidWord":
        return cls(((SIGMA, k),), genus)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if self.genus != other.genus:
            raise ValueError("genus mismatch")
        return BraidWord(self.letters + other.letters, self.genus)

    def inverse(self) -> "BraidWord":
        return BraidWord(tuple((g, -e) for g, e in reversed(self.letters)), self.genus)

    def encode(self) -> str:
        return _encode(self.letters)

    def __str__(self):
        return self.encode()


@dataclass(frozen=True)
class PureBraidWord:
    """Freely reduced word over ``t, a_i, A_i``."""

    letters: tuple[tuple[str, int], ...] = ()
    genus: int = 1

    def __post_init__(self):
        object.__setattr__(self, "letters", _reduce(self.letters))

    def __mul__(self, other: "PureBraidWord") -> "PureBraidWord":
        return PureBraidWord(self.letters + other.letters, self.genus)

    def inverse(self) -> "PureBraidWord":
        return PureBraidWord(tuple((g, -e) for g, e in reversed(self.letters)), self.genus)

    def encode(self) -> str:
        return _encode(self.letters)

    def __str__(self):
        return self.encode()


_TOKEN = re.compile(r"^(s|sigma|[ab]\d+)(?:\^\(?(-?\d+)\)?)?$")


def parse_braid(text: str, genus: int = 1) -> BraidWord:
    """Parse ``"s^2 a1 s^-1"``; ``bi`` is read as ``a(2i)``."""
    text = text.strip()
    if text in ("", "1"):
        return BraidWord((), genus)
    letters = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad braid letter {tok!r}")
        name = m.group(1)
        if name == "sigma":
            name = SIGMA
        elif name[0] == "b":
            name = f"a{2 * int(name[1:])}"
        letters.append((name, int(m.group(2)) if m.group(2) else 1))
    return BraidWord(tuple(letters), genus)


def delta(w: BraidWord) -> int:
    """Parity homomorphism to {+1, -1}: ``s -> -1``, ``a_i -> +1``."""
    n = sum(e for g, e in w.letters if g == SIGMA)
    return -1 if n % 2 else 1


def sigma_exponent(w: BraidWord) -> int:
    """The ``k`` with ``w = s^k``; raises :class:`NonLocalBraidError` otherwise."""
    for g, _ in w.letters:
        if g != SIGMA:
            raise NonLocalBraidError(g, w)
    return sum(e for _, e in w.letters)


def to_pure_generators(w: BraidWord) -> PureBraidWord:
    if delta(w) != 1:
        raise OddBraidError(f"braid {w} is not pure (delta = -1)")
    out: list[tuple[str, int]] = []
    odd = False  # current coset is s^-1
    for g, e in w.letters:
        step = 1 if e > 0 else -1
        for _ in range(abs(e)):
            if g == SIGMA:
                if not odd and step > 0:
                    out.append(("t", 1))
                elif odd and step < 0:
                    out.append(("t", -1))
                odd = not odd
            elif not odd:
                out.append((g, step))
            elif step > 0:
                out += [("A" + g[1:], 1), ("t", 1)]
            else:
                out += [("t", -1), ("A" + g[1:], -1)]
    assert not odd
    return PureBraidWord(tuple(out), w.genus)


def expand_pure(p: PureBraidWord) -> BraidWord:
    """Substitute ``t = s^2`` and ``A_i = s^-1 a_i s^-1`` back."""
    out: list[tuple[str, int]] = []
    for g, e in p.letters:
        if g == "t":
            out.append((SIGMA, 2 * e))
        elif g.startswith("A"):
            block = [(SIGMA, -1), ("a" + g[1:], 1), (SIGMA, -1)]
            if e < 0:
                block = [(h, -f) for h, f in reversed(block)]
            out += block * abs(e)
        else:
            out.append((g, e))
    return BraidWord(tuple(out), p.genus)


def free_abelianization(w: BraidWord) -> tuple[int, ...]:
    """Image in Z^(2g+1) of the free group on ``s, a_i`` (``s`` first)."""
    v = [0] * (2 * w.genus + 1)
    for g, e in w.letters:
        v[0 if g == SIGMA else int(g[1:])] += e
    return tuple(v)


def abelianization(w: BraidWord) -> tuple[int, ...]:
    """Image in H_1(B_2(S)) = Z/2 (the ``s`` class) + Z^2g."""
    v = list(free_abelianization(w))
    v[0] %= 2
    return tuple(v)


def _w(genus: int, *letters) -> BraidWord:
    return BraidWord(tuple(letters), genus)


def relator_list(genus: int) -> list[BraidWord]:
    """Defining relators of B_2(S) as ``lhs * rhs^-1``.

    Order: ``s^-1 a_i s^-1 a_i = a_i s^-1 a_i s^-1`` for every i, then
    ``a_i s^-1 a_j = s a_j s^-1 a_i s`` for i < j, then the product relator.
    """
    if genus < 1:
        raise ValueError("genus must be >= 1")
    n = 2 * genus
    out = []
    for i in range(1, n + 1):
        a = f"a{i}"
        lhs = _w(genus, (SIGMA, -1), (a, 1), (SIGMA, -1), (a, 1))
        rhs = _w(genus, (a, 1), (SIGMA, -1), (a, 1), (SIGMA, -1))
        out.append(lhs * rhs.inverse())
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            lhs = _w(genus, (f"a{i}", 1), (SIGMA, -1), (f"a{j}", 1))
            rhs = _w(genus, (SIGMA, 1), (f"a{j}", 1), (SIGMA, -1), (f"a{i}", 1), (SIGMA, 1))
            out.append(lhs * rhs.inverse())
    prod = []
    for i in range(1, genus + 1):
        prod += [(f"a{2 * i - 1}", 1), (f"a{2 * i}", -1)]
    for i in range(1, genus + 1):
        prod += [(f"a{2 * i - 1}", -1), (f"a{2 * i}", 1)]
    out.append(_w(genus, *prod, (SIGMA, -2)))
    return out


def pure_relator_list(genus: int) -> list[PureBraidWord]:
    """Relators of the pure subgroup over ``t, a_i, A_i``."""
    n = 2 * genus
    out = []
    for i in range(1, n + 1):
        lhs = PureBraidWord(((f"a{i}", 1), (f"A{i}", 1)), genus)
        rhs = PureBraidWord(((f"A{i}", 1), (f"a{i}", 1)), genus)
        out.append(lhs * rhs.inverse())
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            lhs = PureBraidWord(((f"a{i}", 1), (f"A{j}", 1)), genus)
            rhs = PureBraidWord((("t", 1), (f"A{j}", 1), (f"a{i}", 1)), genus)
            out.append(lhs * rhs.inverse())
    prod = []
    for i in range(1, genus + 1):
        prod += [(f"a{2 * i - 1}", 1), (f"a{2 * i}", -1)]
    for i in range(1, genus + 1):
        prod += [(f"a{2 * i - 1}", -1), (f"a{2 * i}", 1)]
    out.append(PureBraidWord(tuple(prod) + (("t", -1),), genus))
    return out


def random_braid(rng: random.Random, genus: int = 1, max_len: int = 12) -> BraidWord:
    gens = [SIGMA] + [f"a{i}" for i in range(1, 2 * genus + 1)]
    n = rng.randint(0, max_len)
    return BraidWord(tuple((rng.choice(gens), rng.choice((-2, -1, 1, 2, 3)))
                           for _ in range(n)), genus)
