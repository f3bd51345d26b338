import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hsjet.coeffs import GF, QQ, ZZ, CoefficientError, CoefficientRing, RingMismatch
from hsjet.parser import ParseError, UndeclaredIdentifier, parse_poly
from hsjet.poly import JetVariable, Monomial, Polynomial
from hsjet.sampling import random_poly

X, Y = JetVariable("x"), JetVariable("y")
NAMES = ["x", "y"]


def P(text, ring=QQ, names=NAMES):
    return parse_poly(text, names, ring)


def mono(**exps):
    out = {}
    for key, e in exps.items():
        name, order = (key[2:], int(key[1])) if key.startswith("d") and key[1].isdigit() else (key, 0)
        out[JetVariable(name, order)] = e
    return Monomial.from_dict(out)


class TestCoefficientRing:
    def test_prime_required(self):
        with pytest.raises(ValueError):
            CoefficientRing.prime_field(4)
        with pytest.raises(ValueError):
            CoefficientRing.prime_field(2**31 + 11)

    def test_canonical_forms(self):
        assert GF(5)(-1) == 4
        assert QQ(Fraction(2, 4)) == Fraction(1, 2)
        assert GF(3)(Fraction(1, 2)) == 2

    def test_zz_rejects_fractions(self):
        with pytest.raises(CoefficientError):
            ZZ(Fraction(1, 2))


class TestParse:
    def test_cusp(self):
        f = P("y^2 - x^3")
        assert dict(f.terms) == {mono(y=2): 1, mono(x=3): -1}

    def test_zero(self):
        f = P("0")
        assert f.is_zero() and dict(f.terms) == {}

    def test_reduction_mod_2(self):
        # by hand: 2 = 0 and -3 = 1 mod 2
        f = P("2*y*d1y - 3*x^2*d1x", GF(2))
        assert dict(f.terms) == {mono(x=2, d1x=1): 1}

    def test_jet_variables(self):
        f = P("d2x + d0y")
        assert f.variables() == {JetVariable("x", 2), JetVariable("y", 0)}

    def test_precedence(self):
        assert P("2*x^2") == P("2*(x^2)")
        assert P("-x^2") == -(P("x") ** 2)
        assert P("1 - x - y") == P("1 - (x + y)")
        assert P("1/2*x") == Polynomial.var("x", QQ).scale(Fraction(1, 2))

    def test_rational_in_prime_field(self):
        assert P("1/2", GF(5)) == Polynomial.constant(3, GF(5))

    @pytest.mark.parametrize("text", ["x y", "x +", "(x", "x ^ y", "x $ y", "", "2x"])
    def test_syntax_errors(self, text):
        with pytest.raises(ParseError):
            P(text)

    def test_error_position(self):
        with pytest.raises(ParseError) as info:
            P("x + * y")
        assert info.value.pos == 4

    def test_undeclared(self):
        with pytest.raises(UndeclaredIdentifier):
            P("x + z")
        with pytest.raises(UndeclaredIdentifier):
            P("d1z")

    def test_not_representable(self):
        with pytest.raises(CoefficientError):
            P("1/2*x", ZZ)
        with pytest.raises(CoefficientError):
            P("1/2", GF(2))


class TestArithmetic:
    def test_add(self):
        assert P("x + y") + P("x - y") == P("2*x")

    def test_absorbing_zero(self):
        assert (P("x + y") * P("0")).is_zero()

    def test_frobenius_cube(self):
        # binomial coefficients 3 vanish mod 3
        assert P("x + 1", GF(3)) ** 3 == P("x^3 + 1", GF(3))

    def test_ring_mismatch(self):
        with pytest.raises(RingMismatch):
            P("x") + P("x", GF(3))

    @pytest.mark.parametrize("ring", [QQ, ZZ, GF(7)], ids=str)
    def test_ring_axioms(self, ring):
        rng = random.Random(7)
        for _ in range(500):
            a, b, c = (random_poly(rng, NAMES, ring, 2, 3) for _ in range(3))
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a + b == b + a
            assert a * b == b * a
            assert a * (b + c) == a * b + a * c
            assert a - a == Polynomial.zero(ring)


class TestSubstitute:
    def test_shift(self):
        assert P("x^2").substitute({X: P("x + 1")}) == P("x^2 + 2*x + 1")

    def test_kill(self):
        assert P("x*y").substitute({X: P("0")}).is_zero()

    def test_cusp_parametrization(self):
        t = parse_poly("t", ["t"], QQ)
        f = P("y^2 - x^3").substitute({X: t**2, Y: t**3})
        assert f.is_zero()

    def test_homomorphism(self, rng):
        images = {X: P("x*y - 1"), Y: P("2*x + y^2")}
        for _ in range(100):
            a, b = random_poly(rng, NAMES, QQ), random_poly(rng, NAMES, QQ)
            assert (a + b).substitute(images) == a.substitute(images) + b.substitute(images)
            assert (a * b).substitute(images) == a.substitute(images) * b.substitute(images)


class TestWeights:
    def test_example_weight_one(self):
        info = P("2*y*d1y - 3*x^2*d1x").weighted_degree_info()
        assert info.is_homogeneous and info.weight == 1

    def test_example_weight_two(self):
        info = P("d1y^2 + 2*y*d2y - 3*x*d1x^2 - 3*x^2*d2x").weighted_degree_info()
        assert info.is_homogeneous and info.weight == 2

    def test_mixed(self):
        assert not P("x + d1x").weighted_degree_info().is_homogeneous

    def test_zero(self):
        info = P("0").weighted_degree_info()
        assert info.is_homogeneous and info.weight is None


class TestMapCoefficients:
    def test_to_f3(self):
        assert P("3*x^2", ZZ).map_coefficients(GF(3)).is_zero()

    def test_to_f2(self):
        assert P("2*y*d1y", ZZ).map_coefficients(GF(2)).is_zero()

    def test_bad_denominator(self):
        with pytest.raises(CoefficientError):
            P("1/2*x").map_coefficients(GF(2))

    def test_no_map_from_prime_field(self):
        with pytest.raises(CoefficientError):
            P("x", GF(3)).map_coefficients(QQ)

    def test_homomorphic(self, rng):
        for _ in range(200):
            a, b = random_poly(rng, NAMES, ZZ), random_poly(rng, NAMES, ZZ)
            for target in (GF(2), GF(5), QQ):
                m = lambda f: f.map_coefficients(target)
                assert m(a + b) == m(a) + m(b)
                assert m(a * b) == m(a) * m(b)


class TestPrinting:
    def test_zero_prints_as_0(self):
        assert str(Polynomial.zero(QQ)) == "0"

    def test_deterministic(self):
        assert str(P("y^2 - x^3")) == str(P("-x^3 + y^2"))

    @pytest.mark.parametrize("ring", [QQ, ZZ, GF(5)], ids=str)
    def test_round_trip(self, ring, rng):
        names = ["x", "y", "a"]
        for _ in range(300):
            f = random_poly(rng, names, ring)
            # exercise jet variables too
            f = f * parse_poly("d1x + 2*d3a", names, ring) if rng.random() < 0.5 else f
            assert parse_poly(str(f), names, ring) == f

    def test_normalizing_is_idempotent(self, rng):
        for _ in range(100):
            f = random_poly(rng, NAMES, QQ)
            once = Polynomial(dict(f.terms), QQ)
            assert Polynomial(dict(once.terms), QQ) == once == f


coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=5)
monos = st.dictionaries(st.sampled_from([X, Y, JetVariable("x", 1)]), st.integers(1, 3), max_size=3)


@st.composite
def polys(draw):
    terms = draw(st.dictionaries(monos.map(Monomial.from_dict), coeffs, max_size=4))
    return Polynomial(terms, QQ)


@settings(max_examples=200, deadline=None)
@given(polys(), polys())
def test_print_parse_round_trip_property(f, g):
    h = f * g - g
    assert parse_poly(str(h), NAMES, QQ) == h
