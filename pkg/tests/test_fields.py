from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy import GF, Poly, integer_nthroot, symbols

from sextic_galois.errors import InvalidField, ParseError, UnsupportedCharacteristic
from sextic_galois.fields import (
    FiniteField,
    QuadNumber,
    QuadraticField,
    Rationals,
    contains_primitive_cube_root,
    field_of_order,
    iroot,
    is_cube,
    is_square,
    make_field,
    prime_field,
)
from sextic_galois.poly import factor_degrees, Polynomial

X = symbols("x")
Q = Rationals()
SMALL_Q = [3, 5, 7, 9, 11, 13, 25, 27, 49, 121]


def _quadratic_without_roots(p):
    # lexicographically first monic x^2 + c1 x + c0 (c1, then c0) with no root mod p
    for c1 in range(p):
        for c0 in range(p):
            if all((x * x + c1 * x + c0) % p for x in range(p)):
                return (c0, c1, 1)


# -- make_field ---------------------------------------------------------------------


def test_prime_field_spec():
    K = make_field("F{5}")
    assert isinstance(K, FiniteField)
    assert (K.p, K.k, K.q) == (5, 1, 5)


def test_char_two_rejected():
    with pytest.raises(UnsupportedCharacteristic):
        make_field("F{2}")
    with pytest.raises(UnsupportedCharacteristic):
        make_field("F{2^3}")


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_quadratic_modulus_is_lexicographically_first(p):
    K = make_field(f"F{{{p}^2}}")
    assert K.modulus == _quadratic_without_roots(p)


def test_f25_modulus_value():
    assert make_field("F{5^2}").modulus == (2, 0, 1)  # x^2 + 2


@pytest.mark.parametrize("spec", ["F{3^3}", "F{7^2}", "F{11^2}", "F{5^3}", "F{3^4}"])
def test_modulus_irreducible(spec):
    K = make_field(spec)
    assert factor_degrees(Polynomial(K.modulus, prime_field(K.p))) == [K.k]


def test_make_field_is_deterministic():
    assert make_field("F{3^3}").modulus == make_field(" F{ 3 ^ 3 } ").modulus
    assert FiniteField(3, 3, make_field("F{3^3}").modulus) == make_field("F{3^3}")


@pytest.mark.parametrize(
    "spec, cls",
    [("Q", Rationals), ("Q(sqrt -3)", QuadraticField), ("Q(sqrt 5)", QuadraticField), ("F5", FiniteField)],
)
def test_spec_kinds(spec, cls):
    assert isinstance(make_field(spec), cls)


@pytest.mark.parametrize("spec", ["Q(sqrt 4)", "Q(sqrt 0)", "Q(sqrt 1)", "Q(sqrt -12)", "F{9}", "F{15^2}"])
def test_invalid_fields(spec):
    with pytest.raises(InvalidField):
        make_field(spec)


@pytest.mark.parametrize("spec", ["R", "Q(i)", "F{p}", "GF(5)", "", "Q(sqrt)"])
def test_malformed_specs(spec):
    with pytest.raises(ParseError):
        make_field(spec)


def test_spec_round_trip():
    for spec in ["Q", "Q(sqrt -3)", "F{7}", "F{5^2}"]:
        assert make_field(spec).spec == spec


# -- element parsing and formatting ------------------------------------------------------


def test_rational_parse_format():
    assert Q.parse("-27/8") == Fraction(-27, 8)
    assert Q.format(Fraction(6, 4)) == "3/2"
    with pytest.raises(ParseError):
        Q.parse("1/0")
    with pytest.raises(ParseError):
        Q.parse("1.5")


def test_quadratic_parse_format():
    K = QuadraticField(-3)
    assert K.parse("1/2+3/2*s") == QuadNumber(Fraction(1, 2), Fraction(3, 2))
    assert K.parse("-s") == QuadNumber(Fraction(0), Fraction(-1))
    assert K.format(K.parse("2-s")) == "2-1*s"
    assert K.format(K.parse("5")) == "5"
    with pytest.raises(ParseError):
        K.parse("2+t")


def test_finite_parse_format():
    K = make_field("F{5^2}")
    x = K.parse("[1,3]")
    assert K.vector(x) == (1, 3)
    assert K.format(x) == "[1,3]"
    assert make_field("F{7}").parse("-1") == 6
    assert make_field("F{7}").parse("1/2") == 4


@given(st.fractions(max_denominator=10**6), st.fractions(max_denominator=10**6))
def test_quadratic_format_parse_round_trip(u, v):
    K = QuadraticField(7)
    x = QuadNumber(u, v)
    assert K.parse(K.format(x)) == x


# -- arithmetic ----------------------------------------------------------------


def _sympy_mul(K, x, y):
    # independent product: polynomial multiplication modulo the modulus over GF(p)
    dom = GF(K.p)
    mod = Poly(list(reversed(K.modulus)), X, domain=dom)
    px = Poly(list(reversed(K.vector(x))), X, domain=dom)
    py = Poly(list(reversed(K.vector(y))), X, domain=dom)
    r = (px * py).rem(mod)
    coeffs = [int(c) % K.p for c in reversed(r.all_coeffs())]
    return K.from_vector(coeffs)


@pytest.mark.parametrize("spec", ["F{5^2}", "F{3^3}", "F{7^2}", "F{11^2}", "F{3^5}"])
@given(data=st.data())
def test_extension_multiplication_matches_sympy(spec, data):
    K = make_field(spec)
    x = data.draw(st.integers(0, K.q - 1))
    y = data.draw(st.integers(0, K.q - 1))
    assert K.mul(x, y) == _sympy_mul(K, x, y)


@pytest.mark.parametrize("spec", ["F{7}", "F{3^3}", "F{5^2}", "F{13^2}", "F{1000003}"])
@given(data=st.data())
def test_field_axioms(spec, data):
    K = make_field(spec)
    x, y, z = (data.draw(st.integers(0, K.q - 1)) for _ in range(3))
    assert K.mul(x, K.add(y, z)) == K.add(K.mul(x, y), K.mul(x, z))
    assert K.mul(K.mul(x, y), z) == K.mul(x, K.mul(y, z))
    assert K.add(x, K.neg(x)) == K.zero
    if x:
        assert K.mul(x, K.inv(x)) == K.one
        assert K.pow(x, K.q - 1) == K.one


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_quadratic_norm_is_multiplicative(a, b, c, d):
    K = QuadraticField(-7)
    x = QuadNumber(Fraction(a), Fraction(b))
    y = QuadNumber(Fraction(c), Fraction(d))
    assert K.norm(K.mul(x, y)) == K.norm(x) * K.norm(y)
    if a or b:
        assert K.mul(x, K.inv(x)) == K.one


# -- squares, cubes, roots of unity ------------------------------------------------------


def test_rational_examples():
    assert is_square(Fraction(36), Q) == 6
    assert is_square(Fraction(-3), Q) is None
    assert is_square(Fraction(0), Q) == 0
    assert is_cube(Fraction(27, 8), Q) == Fraction(3, 2)
    assert is_cube(Fraction(-27, 8), Q) == Fraction(-3, 2)
    assert is_cube(Fraction(2), Q) is None


def test_finite_examples():
    F7, F5 = make_field("F{7}"), make_field("F{5}")
    assert is_square(2, F7) in (3, 4)
    assert is_cube(2, F7) is None
    assert is_cube(2, F5) == 3


@given(st.integers(0, 10**30))
def test_iroot_matches_sympy(n):
    for r in (2, 3):
        root, exact = integer_nthroot(n, r)
        assert iroot(n, r) == (root if exact else None)


@given(st.fractions(max_denominator=1000), st.sampled_from([2, 3]))
def test_rational_witnesses_verify(x, r):
    w = (is_square if r == 2 else is_cube)(x, Q)
    if w is not None:
        assert w**r == x
    assert (is_square if r == 2 else is_cube)(x**r, Q) is not None


@pytest.mark.parametrize("q", SMALL_Q)
def test_finite_square_and_cube_tests_are_exhaustive(q):
    K = field_of_order(q)
    squares = {K.mul(x, x) for x in K.elements()}
    cubes = {K.mul(x, K.mul(x, x)) for x in K.elements()}
    for x in K.elements():
        s, c = is_square(x, K), is_cube(x, K)
        assert (s is not None) == (x in squares)
        assert (c is not None) == (x in cubes)
        if s is not None:
            assert K.mul(s, s) == x
        if c is not None:
            assert K.mul(c, K.mul(c, c)) == x


@pytest.mark.parametrize("q", [5, 11, 17, 27, 125, 243])
def test_cubing_bijective_when_q_not_1_mod_3(q):
    K = field_of_order(q)
    assert all(is_cube(x, K) is not None for x in K.elements())


@pytest.mark.parametrize("p", [1000003, 1000033])
@given(data=st.data())
def test_large_field_roots(p, data):
    # beyond the exhaustive cutoff the root extraction must still agree with Euler's criterion
    K = make_field(f"F{{{p}}}")
    x = data.draw(st.integers(1, p - 1))
    s = is_square(x, K)
    assert (s is not None) == (pow(x, (p - 1) // 2, p) == 1)
    if s is not None:
        assert s * s % p == x
    c = is_cube(x, K)
    if p % 3 == 1:
        assert (c is not None) == (pow(x, (p - 1) // 3, p) == 1)
    if c is not None:
        assert pow(c, 3, p) == x
    y = data.draw(st.integers(1, p - 1))
    assert is_square(y * y % p, K) is not None
    assert is_cube(pow(y, 3, p), K) is not None


@given(st.integers(-30, 30), st.integers(-30, 30), st.sampled_from([-3, -1, 2, 5, -7]))
def test_quadratic_square_and_cube(u, v, d):
    K = QuadraticField(d)
    x = QuadNumber(Fraction(u), Fraction(v))
    sq, cu = K.mul(x, x), K.mul(x, K.mul(x, x))
    s, c = is_square(sq, K), is_cube(cu, K)
    assert s is not None and K.mul(s, s) == sq
    assert c is not None and K.mul(c, K.mul(c, c)) == cu


def test_quadratic_special_values():
    K = QuadraticField(-3)
    assert is_square(K.from_int(-3), K) in (QuadNumber(Fraction(0), Fraction(1)), QuadNumber(Fraction(0), Fraction(-1)))
    assert is_cube(K.from_int(8), K) is not None
    assert is_cube(K.from_int(2), K) is None
    assert is_square(K.from_int(2), K) is None


def test_primitive_cube_roots():
    assert not contains_primitive_cube_root(Q)
    assert contains_primitive_cube_root(QuadraticField(-3))
    assert not contains_primitive_cube_root(QuadraticField(-1))
    assert contains_primitive_cube_root(make_field("F{7}"))
    assert not contains_primitive_cube_root(make_field("F{5}"))
    assert contains_primitive_cube_root(make_field("F{5^2}"))
    assert not contains_primitive_cube_root(make_field("F{3^2}"))


@pytest.mark.parametrize("q", [7, 13, 25, 49])
def test_primitive_cube_root_exists_when_claimed(q):
    K = field_of_order(q)
    assert any(x != 1 and K.pow(x, 3) == 1 for x in K.elements())
