import pytest

from sutured_braids.complexes import ComplexError
from sutured_braids.group_algebra import LaurentPoly
from sutured_braids.invariant import (
    diagram_check,
    distinguish,
    reduce_pair,
    search_unit_scalings,
    verify_witness,
)


def test_reduce_pair():
    assert reduce_pair(3, 1) == 2
    assert reduce_pair(4, 4) == 0
    assert reduce_pair(-1, 2) == -3


def test_distinguish_examples(torus_chords):
    v = distinguish(1, 0, torus_chords)
    assert v.distinguished
    w = v.witness
    assert w.gamma.is_identity
    assert w.element.encode() == "-1*x^0 y^0*<c+[1]> + 1*x^0 y^0*<c-[1]>"
    assert w.image.encode() == "-1*x^-1 y^1*<c0[1]> + 1*x^0 y^0*<c0[1]>"
    assert not distinguish(4, 4, torus_chords).distinguished
    v = distinguish(5, 2, torus_chords)
    assert v.kappa == 3
    assert v.witness.image.coefficient("c0[1]") == LaurentPoly({(0, 0): 1, (-3, 3): -1})


def test_witness_is_first_class_lexicographically(torus_chords):
    v = distinguish(2, 0, torus_chords)
    assert v.witness.gamma.encode() == min(c.gamma.encode() for c in torus_chords)


def test_grid(torus_chords):
    for k in range(-8, 9):
        for kp in range(-8, 9):
            v = distinguish(k, kp, torus_chords)
            assert v.distinguished == (k != kp)
            if v.distinguished:
                assert verify_witness(v.witness, v.kappa)


def test_hyperbolic(genus2_chords):
    assert distinguish(1, -1, genus2_chords).distinguished
    assert not distinguish(2, 2, genus2_chords).distinguished


def test_empty_chords():
    with pytest.raises(ComplexError):
        distinguish(1, 0, [])


def test_witness_check_rejects_forgery(torus_chords):
    w = distinguish(2, 0, torus_chords).witness
    assert not verify_witness(w, 3)


def test_diagram_check():
    x = LaurentPoly.monomial
    assert diagram_check(0)
    assert not diagram_check(1)
    assert diagram_check(1, (x(-1, 1), x(0, 0)))
    assert not diagram_check(1, (x(0, 0), x(-1, 1)))
    with pytest.raises(ValueError):
        diagram_check(1, LaurentPoly({(0, 0): 2}))


def test_diagram_check_per_class(torus_chords):
    x = LaurentPoly.monomial
    phi = {c.gamma: (x(-2, 2, -1), x(0, 0, -1)) for c in torus_chords}
    assert diagram_check(2, phi, torus_chords)
    phi[torus_chords[0].gamma] = x(0, 0)
    assert not diagram_check(2, phi, torus_chords)


@pytest.mark.parametrize("kappa", [-2, 1, 3])
def test_no_uniform_scaling_commutes(kappa):
    assert search_unit_scalings(kappa) == []


def test_uniform_scalings_at_zero():
    r = 2
    assert len(search_unit_scalings(0, radius=r)) == 2 * (2 * r + 1) ** 2


def test_per_summand_scalings_commute_exactly_when_they_absorb_the_twist():
    kappa = 1
    found = search_unit_scalings(kappa, per_summand=True)
    q = LaurentPoly.monomial(-kappa, kappa)
    assert found
    assert all(a == q * b for a, b in found)
    # every b whose shifted partner stays inside the search box appears
    r = abs(kappa) + 2
    assert len(found) == 2 * (2 * r + 1 - abs(kappa)) ** 2
