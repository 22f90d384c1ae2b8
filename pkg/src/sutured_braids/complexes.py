"""Cylindrical, wrapped and exterior chain complexes per chord class.

Every chord class gamma contributes an interior generator ``c0[gamma]`` in
degree 0 and, after wrapping, two exterior generators ``c-[gamma]`` and
``c+[gamma]`` in degree 1.  For the local braid s^k the wrapped differential
is

    d c0 = 0,    d c- = c0,    d c+ = x^-k y^k c0,

the cylindrical complex is spanned by the ``c0`` alone with zero
differential, and the exterior complex is the quotient.  Differentials never
mix chord classes, so everything is computed block by block.

Homology uses the unit-pivot elimination of :mod:`.linalg`; all blocks built
here have a unit entry wherever they are nonzero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .group_algebra import (
    BimoduleElement,
    GroupKind,
    GroupWord,
    LaurentBimonomial,
    LaurentPoly,
    bimodule_act,
    parse_element,
    parse_word,
)
from .linalg import UnitPivotQuotient, UnsupportedMatrixError, unit_pivot_kernel
from .surface_chords import Chord

__all__ = [
    "TIERS",
    "ChordGenerator",
    "GradedBasis",
    "ChainComplex",
    "TrianglePackage",
    "ComplexError",
    "DifferentialMismatchError",
    "UnsupportedHomologyError",
    "label_for",
    "build_cylindrical",
    "build_wrapped",
    "quotient_exterior",
    "verify_d_squared",
    "homology_unit_pivot",
    "build_triangle",
    "verify_exactness",
    "serialize_complex",
    "parse_complex",
]

TIERS = ("c0", "c-", "c+")
_DEGREE = {"c0": 0, "c-": 1, "c+": 1}
FORMAT_HEADER = "complex v1"


class ComplexError(ValueError):
    pass


class DifferentialMismatchError(ComplexError):
    """Morse-mode and symbolic differentials disagree."""

    def __init__(self, k: int, symbolic: "ChainComplex", morse: "ChainComplex"):
        self.k = k
        self.symbolic = symbolic
        self.morse = morse
        super().__init__(
            f"morse and symbolic differentials differ at k={k}\n"
            f"--- symbolic\n{serialize_complex(symbolic)}--- morse\n{serialize_complex(morse)}")


class UnsupportedHomologyError(ComplexError):
    """A block without unit pivots: outside the supported class."""


def label_for(tier: str, gamma: GroupWord) -> str:
    return f"{tier}[{gamma.encode()}]"


@dataclass(frozen=True)
class ChordGenerator:
    label: str
    gamma: GroupWord
    tier: str
    degree: int

    def __post_init__(self):
        if self.tier not in TIERS:
            raise ComplexError(f"unknown tier {self.tier!r}")

    @classmethod
    def make(cls, tier: str, gamma: GroupWord) -> "ChordGenerator":
        return cls(label_for(tier, gamma), gamma, tier, _DEGREE[tier])


@dataclass(frozen=True)
class GradedBasis:
    generators: tuple[ChordGenerator, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        labels = [g.label for g in self.generators]
        if len(set(labels)) != len(labels):
            dup = next(l for l in labels if labels.count(l) > 1)
            raise ComplexError(f"duplicate basis label {dup}")
        kinds = {g.gamma.kind for g in self.generators}
        if len(kinds) > 1:
            raise ComplexError("basis mixes chord classes from different groups")

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    @property
    def labels(self) -> list[str]:
        return [g.label for g in self.generators]

    def by_label(self) -> dict[str, ChordGenerator]:
        return {g.label: g for g in self.generators}

    def gammas(self) -> list[GroupWord]:
        """Chord classes in order of first appearance."""
        seen: dict[GroupWord, None] = {}
        for g in self.generators:
            seen.setdefault(g.gamma, None)
        return list(seen)

    def degrees(self) -> list[int]:
        return sorted({g.degree for g in self.generators})


@dataclass(frozen=True)
class ChainComplex:
    """Free graded R-module with a differential ``label -> BimoduleElement``.

    Labels absent from ``differential`` have zero differential.  The
    constructor checks that every target label exists, that the degree drops
    by one and that chord classes are preserved.
    """

    basis: GradedBasis
    differential: Mapping[str, BimoduleElement] = field(default_factory=dict)
    name: str = "complex"

    def __post_init__(self):
        index = self.basis.by_label()
        clean = {}
        for label, elt in self.differential.items():
            if label not in index:
                raise ComplexError(f"differential given for unknown generator {label}")
            src = index[label]
            for tgt in elt.labels():
                if tgt not in index:
                    raise ComplexError(f"d({label}) involves unknown generator {tgt}")
                if index[tgt].degree != src.degree - 1:
                    raise ComplexError(f"d({label}) hits {tgt} outside degree {src.degree - 1}")
                if index[tgt].gamma != src.gamma:
                    raise ComplexError(f"d({label}) leaves its chord class via {tgt}")
            if not elt.is_zero():
                clean[label] = elt
        object.__setattr__(self, "differential", clean)

    @property
    def kind(self) -> GroupKind | None:
        return self.basis.generators[0].gamma.kind if len(self.basis) else None

    def d(self, label: str) -> BimoduleElement:
        return self.differential.get(label, BimoduleElement())

    def apply(self, x: BimoduleElement) -> BimoduleElement:
        """Extend the differential R-linearly."""
        out = BimoduleElement()
        for label, poly in x.coefficients().items():
            out = out + self.d(label).mul_poly(poly)
        return out

    def block(self, gamma: GroupWord) -> "ChainComplex":
        gens = tuple(g for g in self.basis if g.gamma == gamma)
        diff = {g.label: self.d(g.label) for g in gens}
        return ChainComplex(GradedBasis(gens), diff, self.name)

    def generators_in_degree(self, degree: int) -> list[ChordGenerator]:
        return [g for g in self.basis if g.degree == degree]

    def matrix(self, degree: int) -> list[list[LaurentPoly]]:
        """Matrix of d from degree ``degree`` to ``degree - 1`` (rows = targets)."""
        src = self.generators_in_degree(degree)
        tgt = self.generators_in_degree(degree - 1)
        return [[self.d(s.label).coefficient(t.label) for s in src] for t in tgt]

    def mod2(self) -> "ChainComplex":
        """Reduce coefficients mod 2 (encoded with representatives 0 and 1)."""
        diff = {}
        for label, elt in self.differential.items():
            diff[label] = BimoduleElement({key: c % 2 for key, c in elt.items()})
        return ChainComplex(self.basis, diff, self.name + "/2")


# ---------------------------------------------------------------------------
# builders


def _gammas(chords: Iterable[Chord]) -> list[GroupWord]:
    out, seen = [], set()
    for ch in chords:
        if ch.gamma in seen:
            raise ComplexError(f"duplicate chord class {ch.gamma.encode()}")
        seen.add(ch.gamma)
        out.append(ch.gamma)
    return out


def build_cylindrical(chords: Iterable[Chord]) -> ChainComplex:
    gens = tuple(ChordGenerator.make("c0", g) for g in _gammas(chords))
    return ChainComplex(GradedBasis(gens), {}, "cylindrical")


def _wrapped_basis(gammas: list[GroupWord]) -> GradedBasis:
    return GradedBasis(tuple(ChordGenerator.make(t, g) for g in gammas for t in TIERS))


def _symbolic_wrapped(gammas: list[GroupWord], k: int) -> ChainComplex:
    diff = {}
    for g in gammas:
        c0 = BimoduleElement.generator(label_for("c0", g))
        diff[label_for("c-", g)] = c0
        diff[label_for("c+", g)] = bimodule_act(LaurentBimonomial(-k, 0), c0,
                                                LaurentBimonomial(0, k))
    return ChainComplex(_wrapped_basis(gammas), diff, "wrapped")


_MORSE_CACHE: dict = {}


def _morse_coefficients(problem, seed_grid, n_fan, tol_grad):
    from .morse_engine import morse_differential

    key = (problem, tuple(seed_grid), n_fan, tol_grad)
    if key not in _MORSE_CACHE:
        report = morse_differential(problem, seed_grid=tuple(seed_grid), n_fan=n_fan,
                                    tol_grad=tol_grad)
        _MORSE_CACHE[key] = report.coefficients()
    return _MORSE_CACHE[key]


def build_wrapped(chords: Iterable[Chord], k: int, source: str = "symbolic", problem=None,
                  seed_grid=(200, 64), n_fan: int = 720,
                  tol_grad: float = 1e-10) -> ChainComplex:
    """Wrapped complex for the local braid s^k.

    ``source="morse"`` assembles the coefficients of d c- and d c+ from the
    rigid gradient lines of the 1-jet model (``problem`` defaults to the
    standard parameters) and insists that they equal the symbolic ones.
    """
    if isinstance(k, bool) or int(k) != k:
        raise ComplexError(f"k must be an integer, got {k!r}")
    k = int(k)
    gammas = _gammas(chords)
    symbolic = _symbolic_wrapped(gammas, k)
    if source == "symbolic":
        return symbolic
    if source != "morse":
        raise ComplexError(f"unknown source {source!r}")

    from .morse_engine import MorseProblem

    p = (problem or MorseProblem()).with_k(k)
    coeffs = _morse_coefficients(p, seed_grid, n_fan, tol_grad)
    diff = {}
    for g in gammas:
        c0 = BimoduleElement.generator(label_for("c0", g))
        for tier in ("c-", "c+"):
            elt = BimoduleElement()
            for mono, count in sorted(coeffs.get(tier, {}).items()):
                elt = elt + count * bimodule_act(mono, c0)
            diff[label_for(tier, g)] = elt
    morse = ChainComplex(_wrapped_basis(gammas), diff, "wrapped")
    if morse.differential != symbolic.differential:
        raise DifferentialMismatchError(k, symbolic, morse)
    return morse


def quotient_exterior(total: ChainComplex, sub: ChainComplex) -> ChainComplex:
    """``total / sub``: delete the sub generators from basis and differential."""
    tindex = total.basis.by_label()
    for g in sub.basis:
        if tindex.get(g.label) != g:
            raise ComplexError(f"{g.label} is not a generator of {total.name}")
    sub_labels = set(sub.basis.labels)
    for label in sub_labels:
        leak = [l for l in total.d(label).labels() if l not in sub_labels]
        if leak:
            raise ComplexError(f"sub is not closed under d: d({label}) hits {leak[0]}")
    gens = tuple(g for g in total.basis if g.label not in sub_labels)
    diff = {}
    for g in gens:
        coeffs = {l: p for l, p in total.d(g.label).coefficients().items()
                  if l not in sub_labels}
        diff[g.label] = BimoduleElement.from_coefficients(coeffs)
    return ChainComplex(GradedBasis(gens), diff, "exterior")


# ---------------------------------------------------------------------------
# checks and homology


@dataclass
class DSquaredReport:
    complex_name: str
    failures: list[tuple[str, BimoduleElement]]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"complex": self.complex_name, "ok": self.ok,
                "failures": [{"generator": l, "dd": e.encode()} for l, e in self.failures]}


def verify_d_squared(c: ChainComplex) -> DSquaredReport:
    failures = []
    for g in c.basis:
        dd = c.apply(c.d(g.label))
        if not dd.is_zero():
            failures.append((g.label, dd))
    return DSquaredReport(c.name, failures)


@dataclass
class HomologyBlock:
    """Homology of one chord class in one degree.

    ``generators`` are cycles whose classes form a free basis;
    :meth:`classify` expresses the class of any cycle in that basis.
    """

    gamma: GroupWord
    degree: int
    labels: list[str]
    generators: list[BimoduleElement]
    _kernel_cols: list[int] = field(repr=False, default_factory=list)
    _quotient: UnitPivotQuotient | None = field(repr=False, default=None)
    _boundary: list[list[LaurentPoly]] = field(repr=False, default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def classify(self, z: BimoduleElement) -> list[LaurentPoly]:
        coeffs = z.coefficients()
        stray = [l for l in coeffs if l not in self.labels]
        if stray:
            raise ComplexError(f"{stray[0]} is not in degree {self.degree} of this block")
        v = [coeffs.get(l, LaurentPoly.zero()) for l in self.labels]
        for row in self._boundary:
            acc = LaurentPoly.zero()
            for a, b in zip(row, v):
                acc = acc + a * b
            if not acc.is_zero():
                raise ComplexError(f"{z.encode()} is not a cycle")
        coords = [v[j] for j in self._kernel_cols]
        return self._quotient.reduce(coords)

    def to_dict(self) -> dict:
        return {"gamma": self.gamma.encode(), "degree": self.degree, "rank": self.rank,
                "generators": [g.encode() for g in self.generators]}


@dataclass
class HomologyReport:
    complex_name: str
    blocks: list[HomologyBlock]

    def get(self, gamma: GroupWord, degree: int) -> HomologyBlock:
        for b in self.blocks:
            if b.gamma == gamma and b.degree == degree:
                return b
        raise KeyError((gamma.encode(), degree))

    def ranks(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for b in self.blocks:
            out[b.degree] = out.get(b.degree, 0) + b.rank
        return out

    def to_dict(self) -> dict:
        return {"complex": self.complex_name, "ranks": {str(d): r for d, r in sorted(self.ranks().items())},
                "blocks": [b.to_dict() for b in self.blocks]}


def _block_homology(block: ChainComplex, gamma: GroupWord, degree: int) -> HomologyBlock:
    src = block.generators_in_degree(degree)
    labels = [g.label for g in src]
    out_mat = block.matrix(degree)
    in_mat = block.matrix(degree + 1)
    n_in = len(block.generators_in_degree(degree + 1))
    try:
        kernel, cols = unit_pivot_kernel(out_mat, len(src))
        # images of the degree+1 generators in kernel coordinates
        N = [[in_mat[j][i] if in_mat else LaurentPoly.zero() for i in range(n_in)] for j in cols]
        quotient = UnitPivotQuotient(N, len(cols))
    except UnsupportedMatrixError as exc:
        raise UnsupportedHomologyError(
            f"out of supported class: block {gamma.encode()} degree {degree}: {exc}") from exc
    gens = [BimoduleElement.from_coefficients(dict(zip(labels, kernel[l])))
            for l in quotient.survivors]
    return HomologyBlock(gamma, degree, labels, gens, cols, quotient, out_mat)


def homology_unit_pivot(c: ChainComplex, degrees: Iterable[int] | None = None) -> HomologyReport:
    """Free homology per chord class and degree.

    Degrees default to those present in the basis plus both neighbours (so
    that zero groups are reported too).
    """
    if degrees is None:
        present = c.basis.degrees()
        degrees = sorted(set(present) | {d - 1 for d in present} | {d + 1 for d in present})
    blocks = []
    for gamma in c.basis.gammas():
        b = c.block(gamma)
        for d in degrees:
            blocks.append(_block_homology(b, gamma, d))
    return HomologyReport(c.name, blocks)


# ---------------------------------------------------------------------------
# exact triangle


@dataclass
class TrianglePackage:
    """``0 -> sub -> total -> quotient -> 0`` with its connecting map.

    The connecting map sends an exterior generator to the interior part of
    its wrapped differential: ``c- -> c0`` and ``c+ -> x^-k y^k c0``.
    """

    k: int
    sub: ChainComplex
    total: ChainComplex
    quotient: ChainComplex

    def __post_init__(self):
        sub_labels = set(self.sub.basis.labels)
        quo_labels = set(self.quotient.basis.labels)
        if sub_labels & quo_labels or sub_labels | quo_labels != set(self.total.basis.labels):
            raise ComplexError("sub and quotient bases do not split the total basis")
        if any(g.tier != "c0" for g in self.sub.basis):
            raise ComplexError("sub basis must consist of c0 generators")
        if any(g.tier == "c0" for g in self.quotient.basis):
            raise ComplexError("quotient basis must consist of c+- generators")

    def connecting(self, x: BimoduleElement) -> BimoduleElement:
        """Lift to total, apply d, read off the sub component."""
        sub_labels = set(self.sub.basis.labels)
        dx = self.total.apply(x)
        if any(l not in sub_labels for l in dx.labels()):
            raise ComplexError(f"{x.encode()} is not a cycle of the quotient")
        return dx

    def connecting_matrix(self, gamma: GroupWord) -> list[list[LaurentPoly]]:
        """1 x 2 matrix of the connecting map on ``(c-, c+)`` of class gamma."""
        c0 = label_for("c0", gamma)
        return [[self.connecting(BimoduleElement.generator(label_for(t, gamma))).coefficient(c0)
                 for t in ("c-", "c+")]]


def build_triangle(chords: Iterable[Chord], k: int, source: str = "symbolic",
                   **morse_kwargs) -> TrianglePackage:
    chords = list(chords)
    total = build_wrapped(chords, k, source=source, **morse_kwargs)
    sub = build_cylindrical(chords)
    return TrianglePackage(int(k), sub, total, quotient_exterior(total, sub))


@dataclass
class ExactnessFailure:
    gamma: str
    position: str
    degree: int
    reason: str

    def to_dict(self) -> dict:
        return {"gamma": self.gamma, "position": self.position, "degree": self.degree,
                "reason": self.reason}


@dataclass
class ExactnessReport:
    k: int
    checked: int
    failures: list[ExactnessFailure]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"k": self.k, "ok": self.ok, "checked": self.checked,
                "failures": [f.to_dict() for f in self.failures]}


def _map_matrix(images: list[list[LaurentPoly]], n_target: int) -> list[list[LaurentPoly]]:
    """Columns are images of source generators; returns target x source matrix."""
    return [[img[i] for img in images] for i in range(n_target)]


def verify_exactness(t: TrianglePackage) -> ExactnessReport:
    """Check im = ker at LC, WLC and the exterior in every degree and class.

    The long exact sequence reads, degree by degree,
    ``H_d(LC) -> H_d(WLC) -> H_d(ext) -> H_{d-1}(LC) -> ...``; every map is
    expressed on the homology generators and exactness at a node is checked
    as (composition = 0) and (kernel of the outgoing map reduces to zero
    modulo the image of the incoming one).
    """
    present = sorted(set(t.total.basis.degrees()))
    degrees = list(range(present[0] - 1, present[-1] + 2)) if present else []
    h_sub = homology_unit_pivot(t.sub, degrees)
    h_tot = homology_unit_pivot(t.total, degrees)
    h_quo = homology_unit_pivot(t.quotient, degrees)
    sub_labels = set(t.sub.basis.labels)
    failures: list[ExactnessFailure] = []
    checked = 0

    for gamma in t.total.basis.gammas():
        def H(report, d):
            try:
                return report.get(gamma, d)
            except KeyError:
                return None

        def incl(z):
            return z

        def proj(z):
            return BimoduleElement.from_coefficients(
                {l: p for l, p in z.coefficients().items() if l not in sub_labels})

        # chain of (position name, degree, homology block) with outgoing maps
        seq = []
        for d in reversed(degrees):
            seq.append(("LC", d, H(h_sub, d), incl))
            seq.append(("WLC", d, H(h_tot, d), proj))
            seq.append(("ext", d, H(h_quo, d), t.connecting))

        def matrix_of(i):
            """Matrix of the map from seq[i] to seq[i+1] on homology generators."""
            _, _, src, fn = seq[i]
            _, _, tgt, _ = seq[i + 1]
            n_src = src.rank if src else 0
            n_tgt = tgt.rank if tgt else 0
            if n_src == 0 or n_tgt == 0:
                return [[LaurentPoly.zero()] * n_src for _ in range(n_tgt)]
            return _map_matrix([tgt.classify(fn(g)) for g in src.generators], n_tgt)

        for i in range(1, len(seq) - 1):
            name, d, node, _ = seq[i]
            checked += 1
            n_node = node.rank if node else 0
            if n_node == 0:
                continue
            try:
                f_in = matrix_of(i - 1)
                f_out = matrix_of(i)
                n_in = seq[i - 1][2].rank if seq[i - 1][2] else 0
                for col in range(n_in):
                    img = [row[col] for row in f_in]
                    out = [sum((r[j] * img[j] for j in range(n_node)), LaurentPoly.zero())
                           for r in f_out]
                    if any(not e.is_zero() for e in out):
                        failures.append(ExactnessFailure(gamma.encode(), name, d,
                                                         "composition of maps is nonzero"))
                        break
                kernel, _ = unit_pivot_kernel(f_out, n_node)
                quot = UnitPivotQuotient(f_in, n_node)
                for v in kernel:
                    if any(not e.is_zero() for e in quot.reduce(v)):
                        cls = BimoduleElement()
                        for coef, gen in zip(v, node.generators):
                            cls = cls + gen.mul_poly(coef)
                        failures.append(ExactnessFailure(
                            gamma.encode(), name, d,
                            f"class {cls.encode()} is in the kernel but not the image"))
                        break
            except (UnsupportedMatrixError, ComplexError) as exc:
                failures.append(ExactnessFailure(gamma.encode(), name, d, str(exc)))
    return ExactnessReport(t.k, checked, failures)


# ---------------------------------------------------------------------------
# text format


def _encode_kind(kind: GroupKind | None) -> str:
    if kind is None:
        return "none"
    if kind.name == "torus":
        return "torus"
    return f"{kind.name}({kind.rank})"


def _decode_kind(text: str) -> GroupKind | None:
    if text == "none":
        return None
    if text == "torus":
        return GroupKind.torus()
    name, _, rest = text.partition("(")
    n = int(rest.rstrip(")"))
    if name == "surface":
        return GroupKind.surface(n)
    if name == "free":
        return GroupKind.free(n)
    raise ComplexError(f"unknown group {text!r}")


def serialize_complex(c: ChainComplex) -> str:
    """Basis table followed by ``label -> element`` rows, one per generator."""
    lines = [FORMAT_HEADER, f"name {c.name}", f"group {_encode_kind(c.kind)}", "basis"]
    for g in c.basis:
        lines.append(f"{g.label}\t{g.tier}\t{g.gamma.encode()}\t{g.degree}")
    lines.append("differential")
    for g in c.basis:
        lines.append(f"{g.label} -> {c.d(g.label).encode()}")
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_complex(text: str) -> ChainComplex:
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_HEADER:
        raise ComplexError(f"missing header {FORMAT_HEADER!r}")
    try:
        name = lines[1].split(" ", 1)[1]
        kind = _decode_kind(lines[2].split(" ", 1)[1])
        i = lines.index("basis") + 1
        j = lines.index("differential")
        end = lines.index("end")
    except (IndexError, ValueError) as exc:
        raise ComplexError(f"malformed complex document: {exc}") from exc
    gens = []
    for row in lines[i:j]:
        label, tier, word, degree = row.split("\t")
        g = ChordGenerator(label, parse_word(word, kind), tier, int(degree))
        gens.append(g)
    diff = {}
    for row in lines[j + 1:end]:
        label, _, elt = row.partition(" -> ")
        diff[label] = parse_element(elt)
    return ChainComplex(GradedBasis(tuple(gens)), diff, name)
