import pytest

from sutured_braids.complexes import (
    ChainComplex,
    ChordGenerator,
    ComplexError,
    DifferentialMismatchError,
    GradedBasis,
    TrianglePackage,
    UnsupportedHomologyError,
    build_cylindrical,
    build_triangle,
    build_wrapped,
    homology_unit_pivot,
    parse_complex,
    quotient_exterior,
    serialize_complex,
    verify_d_squared,
    verify_exactness,
)
import sutured_braids.complexes as cx
from sutured_braids.group_algebra import (
    BimoduleElement,
    GroupKind,
    GroupWord,
    LaurentBimonomial,
    LaurentPoly,
    parse_element,
)
from sutured_braids.linalg import mat_vec, unit_pivot_kernel, unit_pivot_solve, UnsupportedMatrixError
from sutured_braids.surface_chords import Chord

from oracles import truncated_kernel_dimension

ID = GroupWord.identity(GroupKind.torus())
ONE_CHORD = [Chord(ID, 0.3)]


def q(k):
    return LaurentPoly.monomial(-k, k)


def test_cylindrical(torus_chords):
    c = build_cylindrical(torus_chords)
    assert len(c.basis) == len(torus_chords)
    assert not c.differential
    assert all(g.degree == 0 and g.tier == "c0" for g in c.basis)
    assert len(build_cylindrical([]).basis) == 0
    assert homology_unit_pivot(build_cylindrical(ONE_CHORD)).ranks()[0] == 1


def test_duplicate_chords_rejected():
    with pytest.raises(ComplexError):
        build_cylindrical(ONE_CHORD * 2)


@pytest.mark.parametrize("k", [0, 1, -2, 5])
def test_wrapped_differential(k):
    w = build_wrapped(ONE_CHORD, k)
    assert w.d("c0[1]").is_zero()
    assert w.d("c-[1]").encode() == "1*x^0 y^0*<c0[1]>"
    assert w.d("c+[1]").encode() == f"1*x^{-k} y^{k}*<c0[1]>"


def test_morse_mode_matches_symbolic():
    for k in (0, 2):
        assert (serialize_complex(build_wrapped(ONE_CHORD, k, source="morse"))
                == serialize_complex(build_wrapped(ONE_CHORD, k)))


def test_morse_mismatch_is_reported(monkeypatch):
    fake = {"c-": {LaurentBimonomial(0, 0): 1}, "c+": {LaurentBimonomial(0, 0): 1}}
    monkeypatch.setattr(cx, "_morse_coefficients", lambda *a: fake)
    with pytest.raises(DifferentialMismatchError) as err:
        build_wrapped(ONE_CHORD, 1, source="morse")
    assert "--- symbolic" in str(err.value) and "--- morse" in str(err.value)


def test_bad_source():
    with pytest.raises(ComplexError):
        build_wrapped(ONE_CHORD, 1, source="other")


def test_invariants_enforced():
    gens = (ChordGenerator.make("c0", ID), ChordGenerator.make("c-", ID))
    with pytest.raises(ComplexError):  # wrong degree
        ChainComplex(GradedBasis(gens), {"c0[1]": parse_element("1*x^0 y^0*<c-[1]>")})
    other = GroupWord.torus(1, 0)
    gens2 = gens + (ChordGenerator.make("c0", other),)
    with pytest.raises(ComplexError):  # leaves the chord class
        ChainComplex(GradedBasis(gens2), {"c-[1]": parse_element("1*x^0 y^0*<c0[a1]>")})
    with pytest.raises(ComplexError):
        GradedBasis(gens + gens)


def test_quotients(torus_chords):
    w = build_wrapped(torus_chords, 3)
    sub = build_cylindrical(torus_chords)
    ext = quotient_exterior(w, sub)
    assert [g.tier for g in ext.basis] == ["c-", "c+"] * len(torus_chords)
    assert not ext.differential
    assert len(quotient_exterior(w, w).basis) == 0
    empty = ChainComplex(GradedBasis(()), {})
    assert serialize_complex(quotient_exterior(w, empty)).split("\n")[3:] == \
        serialize_complex(w).split("\n")[3:]


def test_quotient_requires_closed_sub():
    w = build_wrapped(ONE_CHORD, 1)
    not_closed = ChainComplex(GradedBasis((ChordGenerator.make("c+", ID),)), {})
    with pytest.raises(ComplexError):
        quotient_exterior(w, not_closed)


def test_d_squared(torus_chords):
    for k in range(-8, 9):
        assert verify_d_squared(build_wrapped(torus_chords, k)).ok
    assert verify_d_squared(build_cylindrical(torus_chords)).ok


def test_d_squared_negative_control():
    gens = (ChordGenerator("x", ID, "c+", 2), ChordGenerator.make("c-", ID),
            ChordGenerator.make("c0", ID))
    bad = ChainComplex(GradedBasis(gens), {
        "x": parse_element("1*x^0 y^0*<c-[1]>"),
        "c-[1]": parse_element("1*x^0 y^0*<c0[1]>"),
    })
    rep = verify_d_squared(bad)
    assert not rep.ok and rep.failures[0][0] == "x"


@pytest.mark.parametrize("k", [-3, 0, 1, 4])
def test_homology_of_wrapped(k):
    h = homology_unit_pivot(build_wrapped(ONE_CHORD, k))
    assert h.get(ID, 0).rank == 0
    (gen,) = h.get(ID, 1).generators
    want = parse_element(f"1*x^0 y^0*<c+[1]> - 1*x^{-k} y^{k}*<c-[1]>")
    assert gen == want or gen == -want
    assert build_wrapped(ONE_CHORD, k).apply(gen).is_zero()


def test_exterior_homology():
    t = build_triangle(ONE_CHORD, 2)
    assert homology_unit_pivot(t.quotient).get(ID, 1).rank == 2


def test_kernel_generators_are_exact():
    M = [[LaurentPoly.one(), q(2)], [LaurentPoly.monomial(1, 0, -1), q(2) * -1 * LaurentPoly.monomial(1, 0)]]
    ker, _ = unit_pivot_kernel(M, 2)
    assert len(ker) == 1
    assert all(e.is_zero() for e in mat_vec(M, ker[0]))


def test_no_unit_pivot_raises():
    two = LaurentPoly({(0, 0): 2})
    with pytest.raises(UnsupportedMatrixError):
        unit_pivot_kernel([[two, LaurentPoly.one() + LaurentPoly.monomial(1, 0)]], 2)
    gens = (ChordGenerator.make("c0", ID), ChordGenerator.make("c-", ID))
    c = ChainComplex(GradedBasis(gens), {"c-[1]": parse_element("2*x^0 y^0*<c0[1]>")})
    with pytest.raises(UnsupportedHomologyError):
        homology_unit_pivot(c)


def test_solve():
    A = [[LaurentPoly.one()], [LaurentPoly.one()]]
    assert unit_pivot_solve(A, [q(1), q(1)], 1) == [q(1)]
    assert unit_pivot_solve(A, [q(1), LaurentPoly.one()], 1) is None


def test_connecting_maps():
    t0 = build_triangle(ONE_CHORD, 0)
    assert t0.connecting_matrix(ID) == [[LaurentPoly.one(), LaurentPoly.one()]]
    t1 = build_triangle(ONE_CHORD, 1)
    assert t1.connecting_matrix(ID) == [[LaurentPoly.one(), q(1)]]


def test_exactness(torus_chords):
    for k in range(-8, 9):
        rep = verify_exactness(build_triangle(torus_chords, k))
        assert rep.ok, rep.to_dict()
        assert rep.checked > 0


class _BrokenTriangle(TrianglePackage):
    def connecting(self, x):
        return BimoduleElement()


def test_exactness_negative_control():
    t = build_triangle(ONE_CHORD, 1)
    broken = _BrokenTriangle(t.k, t.sub, t.total, t.quotient)
    rep = verify_exactness(broken)
    assert not rep.ok
    assert {f.position for f in rep.failures} & {"ext", "LC"}


def test_anti_diagonal_kernel_against_truncated_oracle():
    # kernel of the fold (u, v) -> u + v: the anti-diagonal times every monomial
    for k in (0, 1, -3):
        (vec,), _ = unit_pivot_kernel([[LaurentPoly.one(), q(k)]], 2)
        assert vec == [q(k) * -1, LaurentPoly.one()]
        assert truncated_kernel_dimension(q(k), box=6) == (13 - abs(k)) ** 2


def test_serialization_roundtrip(torus_chords, genus2_chords):
    for chords in (torus_chords, genus2_chords):
        c = build_wrapped(chords, -2)
        text = serialize_complex(c)
        assert serialize_complex(parse_complex(text)) == text
        assert text.startswith("complex v1\n")
    with pytest.raises(ComplexError):
        parse_complex("not a complex")


def test_mod2():
    c = build_wrapped(ONE_CHORD, 1)
    bad = ChainComplex(c.basis, {"c-[1]": parse_element("3*x^0 y^0*<c0[1]>"),
                                 "c+[1]": parse_element("2*x^0 y^0*<c0[1]>")})
    m = bad.mod2()
    assert m.d("c-[1]").encode() == "1*x^0 y^0*<c0[1]>"
    assert m.d("c+[1]").is_zero()
