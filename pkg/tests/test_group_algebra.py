import pytest
from hypothesis import given, strategies as st

from sutured_braids.group_algebra import (
    BimoduleElement,
    GroupKind,
    GroupWord,
    LaurentBimonomial,
    LaurentPoly,
    bimodule_act,
    parse_bimonomial,
    parse_element,
    parse_word,
    word_multiply,
)

T = GroupKind.torus()
S2 = GroupKind.surface(2)
F3 = GroupKind.free(3)

small = st.integers(-4, 4)


def words(kind, max_len=8):
    gen = st.tuples(st.integers(0, kind.n_generators - 1), st.integers(-3, 3))
    return st.lists(gen, max_size=max_len).map(lambda ls: GroupWord.make(kind, ls))


def test_kinds():
    assert T.n_generators == 2 and S2.n_generators == 4 and F3.n_generators == 3
    assert S2.generator_name(2) == "a2" and S2.generator_name(3) == "b2"
    with pytest.raises(ValueError):
        GroupKind.surface(1)


def test_free_reduction():
    w = parse_word("a1 a2 a2^-1 a1", F3)
    assert w.encode() == "a1^2"
    assert parse_word("a1 a1^-1", F3).encode() == "1"


def test_torus_canonical_form():
    w = parse_word("b1 a1 b1^-1 a1", T)
    assert w.encode() == "a1^2"
    assert w.pair == (2, 0)
    assert GroupWord.torus(-1, 2).encode() == "a1^-1 b1^2"


def test_surface_relator_is_trivial():
    w = parse_word("a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1", S2)
    assert w.is_identity


@given(words(F3), words(F3), words(F3))
def test_free_group_axioms(u, v, w):
    assert word_multiply(word_multiply(u, v), w) == word_multiply(u, word_multiply(v, w))
    assert (u * u.inverse()).is_identity
    assert u * GroupWord.identity(F3) == u


@given(words(T), words(T))
def test_torus_is_abelian(u, v):
    assert u * v == v * u


@given(words(S2))
def test_surface_inverse(u):
    assert (u * u.inverse()).is_identity
    assert (u.inverse() * u).is_identity


@given(words(S2))
def test_word_roundtrip(u):
    assert parse_word(u.encode(), S2) == u


def test_monomial_roundtrip():
    m = LaurentBimonomial(-3, 2)
    assert parse_bimonomial(m.encode()) == m
    assert parse_bimonomial("x^-1 y") == LaurentBimonomial(-1, 1)


@given(st.dictionaries(st.tuples(small, small), st.integers(-5, 5), max_size=4),
       st.dictionaries(st.tuples(small, small), st.integers(-5, 5), max_size=4),
       st.dictionaries(st.tuples(small, small), st.integers(-5, 5), max_size=4))
def test_laurent_ring_axioms(a, b, c):
    p, q, r = LaurentPoly(a), LaurentPoly(b), LaurentPoly(c)
    assert (p + q) * r == p * r + q * r
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p - p == LaurentPoly.zero()
    assert p * LaurentPoly.one() == p


def test_units():
    u = LaurentPoly.monomial(2, -1, -1)
    assert u.is_unit() and u * u.inverse() == 1
    assert not LaurentPoly({(0, 0): 2}).is_unit()
    assert not (LaurentPoly.one() + LaurentPoly.monomial(1, 0)).is_unit()
    with pytest.raises(ZeroDivisionError):
        LaurentPoly({(0, 0): 2}).inverse()


def test_bimodule_act_shifts_exponents():
    c = BimoduleElement.generator("c0[1]")
    x = bimodule_act(LaurentBimonomial(-1, 0), c, LaurentBimonomial(0, 1))
    assert x.encode() == "1*x^-1 y^1*<c0[1]>"
    assert (c - c).is_zero()


elements = st.dictionaries(
    st.tuples(st.builds(LaurentBimonomial, small, small),
              st.sampled_from(["c0[1]", "c+[a1^-1 b1]", "c-[b1^2]"])),
    st.integers(-6, 6), max_size=5).map(BimoduleElement)


@given(elements)
def test_element_roundtrip(x):
    assert parse_element(x.encode()) == x


@given(elements, elements)
def test_element_addition(x, y):
    assert x + y == y + x
    assert (x + y) - y == x
    assert all(c != 0 for _, c in (x + y).items())


@given(elements, st.builds(LaurentBimonomial, small, small))
def test_act_is_invertible(x, m):
    assert bimodule_act(m.inverse(), bimodule_act(m, x)) == x


def test_coefficients():
    x = parse_element("2*x^1 y^0*<c0[1]> - 1*x^0 y^2*<c0[1]> + 1*x^0 y^0*<c+[1]>")
    assert x.coefficient("c0[1]") == LaurentPoly({(1, 0): 2, (0, 2): -1})
    assert BimoduleElement.from_coefficients(x.coefficients()) == x
    assert x.mul_poly(LaurentPoly.zero()).is_zero()
