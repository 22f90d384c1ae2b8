"""Exact arithmetic for group words, Laurent polynomials and bimodule elements.

Three kinds of finitely generated groups appear as chord indices:

* ``free(n)`` with generators ``a1 .. an``;
* ``torus`` (Z^2) with generators ``a1, b1``, stored in the canonical form
  ``a1^m b1^n``;
* ``surface(g)``, g >= 2, with generators ``a1, b1, .., ag, bg`` and the single
  relator ``[a1,b1] .. [ag,bg]`` where ``[a,b] = a b a^-1 b^-1``.

Coefficients live in the commutative Laurent ring ``R = Z[x^+-1, y^+-1]`` where
``x`` stands for the meridian class of the first boundary fiber and ``y`` for the
second one.  A Z[x]-Z[y]-bimodule over commutative rings is just an ``R``-module,
so left multiplication by ``x^a`` and right multiplication by ``y^b`` are both
shifts of the exponent pair.

Text encodings (see ``docs/formats.md``)::

    word     := "1" | letter (" " letter)*          e.g. "a1 b1^-1"
    letter   := name ["^" int]
    monomial := "x^" int " y^" int                   e.g. "x^-1 y^1"
    element  := "0" | term ((" + " | " - ") term)*
    term     := int "*" monomial "*<" label ">"
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

__all__ = [
    "GroupKind",
    "GroupWord",
    "LaurentBimonomial",
    "LaurentPoly",
    "BimoduleElement",
    "word_multiply",
    "bimodule_act",
    "bimodule_add",
    "bimodule_scale",
    "parse_word",
    "parse_bimonomial",
    "parse_element",
]


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class GroupKind:
    """Which group a word lives in: ``free``, ``torus`` or ``surface``."""

    name: str
    rank: int  # n for free(n), genus for torus/surface

    def __post_init__(self):
        if self.name not in ("free", "torus", "surface"):
            raise ValueError(f"unknown group kind {self.name!r}")
        if self.name == "torus" and self.rank != 1:
            raise ValueError("torus kind has genus 1")
        if self.name == "surface" and self.rank < 2:
            raise ValueError("surface groups need genus >= 2")
        if self.name == "free" and self.rank < 1:
            raise ValueError("free groups need at least one generator")

    @classmethod
    def free(cls, n: int) -> "GroupKind":
        return cls("free", n)

    @classmethod
    def torus(cls) -> "GroupKind":
        return cls("torus", 1)

    @classmethod
    def surface(cls, genus: int) -> "GroupKind":
        return cls("surface", genus)

    @property
    def n_generators(self) -> int:
        return self.rank if self.name == "free" else 2 * self.rank

    def generator_name(self, index: int) -> str:
        if self.name == "free":
            return f"a{index + 1}"
        return ("a" if index % 2 == 0 else "b") + str(index // 2 + 1)

    def generator_index(self, name: str) -> int:
        try:
            return _generator_table(self)[name]
        except KeyError:
            raise ValueError(f"{name!r} is not a generator of {self}") from None

    def relator(self) -> tuple[int, ...]:
        """Relator of a surface group as signed letters (see :class:`GroupWord`)."""
        if self.name != "surface":
            raise ValueError(f"{self} has no one-relator presentation")
        out = []
        for i in range(self.rank):
            a, b = 2 * i + 1, 2 * i + 2
            out += [a, b, -a, -b]
        return tuple(out)

    def __str__(self):
        if self.name == "torus":
            return "torus"
        return f"{self.name}({self.rank})"


@lru_cache(maxsize=None)
def _generator_table(kind: GroupKind) -> dict[str, int]:
    return {kind.generator_name(i): i for i in range(kind.n_generators)}


def _free_reduce(letters: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out: list[tuple[int, int]] = []
    for gen, e in letters:
        if e == 0:
            continue
        if out and out[-1][0] == gen:
            e += out.pop()[1]
            if e == 0:
                continue
        out.append((gen, e))
    return tuple(out)


def _to_signed(letters: Iterable[tuple[int, int]]) -> list[int]:
    # generator i, exponent e  ->  |e| copies of +-(i+1)
    out = []
    for gen, e in letters:
        out += [(gen + 1) if e > 0 else -(gen + 1)] * abs(e)
    return out


def _from_signed(signed: Iterable[int]) -> tuple[tuple[int, int], ...]:
    return _free_reduce((abs(s) - 1, 1 if s > 0 else -1) for s in signed)


def _free_reduce_signed(signed: Iterable[int]) -> list[int]:
    out: list[int] = []
    for s in signed:
        if out and out[-1] == -s:
            out.pop()
        else:
            out.append(s)
    return out


@lru_cache(maxsize=None)
def _relator_cycles(kind: GroupKind) -> tuple[tuple[int, ...], ...]:
    """All cyclic rotations of the relator and its inverse."""
    r = kind.relator()
    rinv = tuple(-s for s in reversed(r))
    cycles = set()
    for word in (r, rinv):
        for j in range(len(word)):
            cycles.add(word[j:] + word[:j])
    return tuple(sorted(cycles))


def dehn_reduce_signed(signed: list[int], kind: GroupKind) -> list[int]:
    """Dehn's algorithm on a signed-letter word.

    Repeatedly replaces a subword that is more than half of a cyclic rotation
    of the relator (or its inverse) by the inverse of the complementary part.
    Each replacement strictly shortens the word, so the loop terminates; the
    output contains no such subword.
    """
    cycles = _relator_cycles(kind)
    L = len(cycles[0])
    half = L // 2
    w = _free_reduce_signed(signed)
    changed = True
    while changed:
        changed = False
        n = len(w)
        for i in range(n - half):
            best = None
            for c in cycles:
                if c[0] != w[i]:
                    continue
                ell = 1
                while ell < L and i + ell < n and w[i + ell] == c[ell]:
                    ell += 1
                if ell > half and (best is None or ell > best[0]):
                    best = (ell, c)
            if best is not None:
                ell, c = best
                repl = [-s for s in reversed(c[ell:])]
                w = _free_reduce_signed(w[:i] + repl + w[i + ell:])
                changed = True
                break
    return w


@dataclass(frozen=True)
class GroupWord:
    """A reduced word in a free, torus or surface group.

    ``letters`` is a tuple of ``(generator index, exponent)`` with no two
    neighbours sharing a generator.  Torus words are always ``a1^m b1^n``.
    Use :meth:`make` to build a normalized word from arbitrary letters.
    """

    kind: GroupKind
    letters: tuple[tuple[int, int], ...] = ()

    @classmethod
    def make(cls, kind: GroupKind, letters: Iterable[tuple[int, int]] = ()) -> "GroupWord":
        letters = tuple((int(g), int(e)) for g, e in letters)
        for g, _ in letters:
            if not 0 <= g < kind.n_generators:
                raise ValueError(f"generator index {g} out of range for {kind}")
        if kind.name == "torus":
            m = sum(e for g, e in letters if g == 0)
            n = sum(e for g, e in letters if g == 1)
            return cls.torus(m, n)
        if kind.name == "surface":
            signed = dehn_reduce_signed(_to_signed(letters), kind)
            return cls(kind, _from_signed(signed))
        return cls(kind, _free_reduce(letters))

    @classmethod
    def torus(cls, m: int, n: int) -> "GroupWord":
        return cls(GroupKind.torus(), _free_reduce(((0, int(m)), (1, int(n)))))

    @classmethod
    def identity(cls, kind: GroupKind) -> "GroupWord":
        return cls(kind, ())

    @property
    def pair(self) -> tuple[int, int]:
        """Exponent pair of a torus word."""
        if self.kind.name != "torus":
            raise ValueError("pair is only defined for torus words")
        d = dict(self.letters)
        return d.get(0, 0), d.get(1, 0)

    @property
    def length(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def signed(self) -> list[int]:
        return _to_signed(self.letters)

    def inverse(self) -> "GroupWord":
        if self.kind.name == "torus":
            m, n = self.pair
            return GroupWord.torus(-m, -n)
        return GroupWord(self.kind, tuple((g, -e) for g, e in reversed(self.letters)))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return word_multiply(self, other)

    def abelianization(self) -> tuple[int, ...]:
        """Image in Z^(n_generators); for surface groups this is H_1 = Z^2g."""
        v = [0] * self.kind.n_generators
        for g, e in self.letters:
            v[g] += e
        return tuple(v)

    def encode(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        for g, e in self.letters:
            name = self.kind.generator_name(g)
            parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts)

    def __str__(self):
        return self.encode()


def word_multiply(u: GroupWord, v: GroupWord) -> GroupWord:
    """Reduced product ``u v``; surface products are Dehn-reduced."""
    if u.kind != v.kind:
        raise ValueError(f"cannot multiply words of {u.kind} and {v.kind}")
    return GroupWord.make(u.kind, u.letters + v.letters)


_LETTER_RE = re.compile(r"^([A-Za-z]+\d*)(?:\^\(?(-?\d+)\)?)?$")


def parse_word(text: str, kind: GroupKind) -> GroupWord:
    text = text.strip()
    if text in ("", "1", "e"):
        return GroupWord.identity(kind)
    letters = []
    for tok in text.split():
        m = _LETTER_RE.match(tok)
        if not m:
            raise ValueError(f"bad letter {tok!r} in word {text!r}")
        e = int(m.group(2)) if m.group(2) is not None else 1
        letters.append((kind.generator_index(m.group(1)), e))
    return GroupWord.make(kind, letters)


# ---------------------------------------------------------------------------
# coefficient ring


@dataclass(frozen=True, order=True)
class LaurentBimonomial:
    """``x^a y^b``; ``a`` is the exponent of the first meridian, ``b`` of the second."""

    a: int = 0
    b: int = 0

    def __mul__(self, other: "LaurentBimonomial") -> "LaurentBimonomial":
        return LaurentBimonomial(self.a + other.a, self.b + other.b)

    def inverse(self) -> "LaurentBimonomial":
        return LaurentBimonomial(-self.a, -self.b)

    def is_unit_monomial(self) -> bool:
        return self.a == 0 and self.b == 0

    def encode(self) -> str:
        return f"x^{self.a} y^{self.b}"

    def __str__(self):
        return self.encode()


_MONO_TOKEN = re.compile(r"^([xy])(?:\^\(?(-?\d+)\)?)?$")


def parse_bimonomial(text: str) -> LaurentBimonomial:
    text = text.strip()
    if text in ("", "1"):
        return LaurentBimonomial()
    exps = {"x": 0, "y": 0}
    for tok in text.split():
        m = _MONO_TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad monomial token {tok!r} in {text!r}")
        exps[m.group(1)] += int(m.group(2)) if m.group(2) is not None else 1
    return LaurentBimonomial(exps["x"], exps["y"])


class LaurentPoly:
    """Element of ``Z[x^+-1, y^+-1]`` stored as ``{(a, b): coefficient}``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], int] | None = None):
        clean = {}
        for key, c in (terms or {}).items():
            if c:
                clean[(int(key[0]), int(key[1]))] = int(c)
        self._terms = tuple(sorted(clean.items()))
        self._hash = None

    @classmethod
    def monomial(cls, a: int = 0, b: int = 0, coeff: int = 1) -> "LaurentPoly":
        return cls({(a, b): coeff})

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({(0, 0): 1})

    def terms(self) -> dict[tuple[int, int], int]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_unit(self) -> bool:
        """Units of R are exactly +-x^a y^b."""
        return len(self._terms) == 1 and abs(self._terms[0][1]) == 1

    def inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit")
        (a, b), c = self._terms[0]
        return LaurentPoly({(-a, -b): c})

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        d = dict(self._terms)
        for k, c in other._terms:
            d[k] = d.get(k, 0) + c
        return LaurentPoly(d)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -c for k, c in self._terms})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly({k: c * other for k, c in self._terms})
        d: dict[tuple[int, int], int] = {}
        for (a1, b1), c1 in self._terms:
            for (a2, b2), c2 in other._terms:
                k = (a1 + a2, b1 + b2)
                d[k] = d.get(k, 0) + c1 * c2
        return LaurentPoly(d)

    __rmul__ = __mul__

    def evaluate(self, x: complex, y: complex) -> complex:
        return sum(c * x**a * y**b for (a, b), c in self._terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.monomial(0, 0, other)
        return isinstance(other, LaurentPoly) and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({dict(self._terms)})"

    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"{c}*x^{a} y^{b}" for (a, b), c in self._terms)


# ---------------------------------------------------------------------------
# bimodule elements


class BimoduleElement:
    """Finite Z-combination of terms ``n * x^a * <label> * y^b``.

    Keys are ``(LaurentBimonomial, label)`` pairs with nonzero coefficients.
    Labels are opaque strings owned by whoever builds the complex.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[tuple[LaurentBimonomial, str], int] | None = None):
        clean = {}
        for (mono, label), c in (terms or {}).items():
            if c:
                key = (mono, label)
                clean[key] = clean.get(key, 0) + int(c)
        self._terms = tuple(sorted(((k, c) for k, c in clean.items() if c),
                                   key=lambda kc: (kc[0][1], kc[0][0])))

    @classmethod
    def generator(cls, label: str, mono: LaurentBimonomial = LaurentBimonomial(),
                  coeff: int = 1) -> "BimoduleElement":
        return cls({(mono, label): coeff})

    @classmethod
    def from_coefficients(cls, coeffs: Mapping[str, LaurentPoly]) -> "BimoduleElement":
        terms = {}
        for label, poly in coeffs.items():
            for (a, b), c in poly.terms().items():
                terms[(LaurentBimonomial(a, b), label)] = c
        return cls(terms)

    def items(self) -> Iterator[tuple[tuple[LaurentBimonomial, str], int]]:
        return iter(self._terms)

    def labels(self) -> list[str]:
        seen = []
        for (_, label), _c in self._terms:
            if label not in seen:
                seen.append(label)
        return seen

    def coefficient(self, label: str) -> LaurentPoly:
        return LaurentPoly({(m.a, m.b): c for (m, lab), c in self._terms if lab == label})

    def coefficients(self) -> dict[str, LaurentPoly]:
        return {lab: self.coefficient(lab) for lab in self.labels()}

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __add__(self, other: "BimoduleElement") -> "BimoduleElement":
        return bimodule_add(self, other)

    def __neg__(self) -> "BimoduleElement":
        return bimodule_scale(-1, self)

    def __sub__(self, other: "BimoduleElement") -> "BimoduleElement":
        return bimodule_add(self, bimodule_scale(-1, other))

    def __rmul__(self, n: int) -> "BimoduleElement":
        return bimodule_scale(n, self)

    def mul_poly(self, p: LaurentPoly) -> "BimoduleElement":
        """Multiply by a ring element of R."""
        terms: dict[tuple[LaurentBimonomial, str], int] = {}
        for (m, lab), c in self._terms:
            for (a, b), c2 in p.terms().items():
                key = (LaurentBimonomial(m.a + a, m.b + b), lab)
                terms[key] = terms.get(key, 0) + c * c2
        return BimoduleElement(terms)

    def __eq__(self, other):
        return isinstance(other, BimoduleElement) and self._terms == other._terms

    def __hash__(self):
        return hash(self._terms)

    def encode(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for i, ((m, lab), c) in enumerate(self._terms):
            body = f"{abs(c)}*{m.encode()}*<{lab}>"
            if i == 0:
                out.append(body if c > 0 else "-" + body)
            else:
                out.append((" + " if c > 0 else " - ") + body)
        return "".join(out)

    def __str__(self):
        return self.encode()

    def __repr__(self):
        return f"BimoduleElement({self.encode()!r})"


def bimodule_act(m: LaurentBimonomial, x: BimoduleElement,
                 m2: LaurentBimonomial = LaurentBimonomial()) -> BimoduleElement:
    """``m . x . m2``: shift every term's exponents by ``m`` and ``m2``."""
    shift = m * m2
    return BimoduleElement({(mono * shift, lab): c for (mono, lab), c in x.items()})


def bimodule_add(x: BimoduleElement, y: BimoduleElement) -> BimoduleElement:
    terms: dict[tuple[LaurentBimonomial, str], int] = dict(x.items())
    for key, c in y.items():
        terms[key] = terms.get(key, 0) + c
    return BimoduleElement(terms)


def bimodule_scale(n: int, x: BimoduleElement) -> BimoduleElement:
    return BimoduleElement({key: n * c for key, c in x.items()})


_TERM_RE = re.compile(r"^(\d+)(?:\s*[*·]\s*([^*·<]*?))?\s*[*·]?\s*<([^>]*)>$")


def parse_element(text: str) -> BimoduleElement:
    """Inverse of :meth:`BimoduleElement.encode`."""
    text = text.strip()
    if text == "0":
        return BimoduleElement()
    # split on top-level signs that precede a digit (labels are inside <...>)
    pieces, depth, start = [], 0, 0
    sign = 1
    i = 0
    if text[:1] in "+-":
        sign = -1 if text[0] == "-" else 1
        start = i = 1
    while i < len(text):
        ch = text[i]
        if ch == "<":
            depth += 1
        elif ch == ">":
            depth -= 1
        elif depth == 0 and ch in "+-" and i > start and text[i - 1] == " ":
            pieces.append((sign, text[start:i].strip()))
            sign = -1 if ch == "-" else 1
            start = i + 1
        i += 1
    pieces.append((sign, text[start:].strip()))
    terms: dict[tuple[LaurentBimonomial, str], int] = {}
    for s, body in pieces:
        m = _TERM_RE.match(body)
        if not m:
            raise ValueError(f"bad term {body!r}")
        mono = parse_bimonomial(m.group(2) or "")
        key = (mono, m.group(3))
        terms[key] = terms.get(key, 0) + s * int(m.group(1))
    return BimoduleElement(terms)
