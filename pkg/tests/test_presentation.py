import random

import pytest

from hsjet.coeffs import GF, QQ, ZZ
from hsjet.groebner import ideal_equal
from hsjet.parser import parse_poly
from hsjet.poly import JetVariable, Polynomial
from hsjet.presentation import (
    EmptyScheme,
    IllDefinedMap,
    LeadingFormError,
    NotInPowerIdeal,
    Presentation,
    PresentationError,
    algebra_map,
    base_change_check,
    dilation_checks,
    dilation_map,
    fiber_presentation,
    first_sequence_check,
    gg_line_sheaf_degree,
    identity_map,
    induced_map,
    jet_presentation,
    leading_form_restriction,
    localize,
    product_presentation,
    relative_jet_presentation,
    truncation_map,
    truncation_system_check,
    zero_section_map,
)
from hsjet.prolong import ProlongationContext, prolong
from hsjet.sampling import random_poly

CUSP_J1 = ["y^2 - x^3", "2*y*d1y - 3*x^2*d1x"]
CUSP_J2 = CUSP_J1 + ["d1y^2 + 2*y*d2y - 3*x*d1x^2 - 3*x^2*d2x"]


def rels(P, texts):
    return [P.parse(t) for t in texts]


class TestJetPresentation:
    def test_cusp_matches_worked_example(self, cusp):
        for m, want in ((1, CUSP_J1), (2, CUSP_J2)):
            J = jet_presentation(cusp, m)
            assert list(J.relations) == rels(J, want)

    def test_free_algebra(self):
        P = Presentation.from_strings(QQ, ["x", "y"])
        J = jet_presentation(P, 3)
        assert J.relations == () and len(J.generators) == 8

    def test_order_zero_is_identity(self, cusp):
        assert jet_presentation(cusp, 0) == cusp

    def test_negative_order(self, cusp):
        with pytest.raises(PresentationError):
            jet_presentation(cusp, -1)

    def test_generators_weighted(self, cusp):
        J = jet_presentation(cusp, 2)
        assert [g.weight for g in J.generators] == [0, 0, 1, 1, 2, 2]

    def test_constants_are_not_differentiated(self):
        P = Presentation.from_strings(QQ, ["x"], ["a*x^2 - 1"], constants=["a"])
        J = jet_presentation(P, 1)
        assert J.relations[1] == J.parse("2*a*x*d1x")

    def test_homogeneity_of_every_relation(self, rng):
        for ring in (QQ, GF(7), ZZ):
            for _ in range(15):
                rel = [random_poly(rng, ["x", "y"], ring, 3, 4) for _ in range(2)]
                rel = [r for r in rel if not r.is_zero()]
                P = Presentation(ring, (JetVariable("x"), JetVariable("y")), tuple(rel))
                ctx = ProlongationContext(3, frozenset({"x", "y"}), frozenset())
                for m in range(4):
                    J = jet_presentation(P, m)
                    expected = []
                    for f in rel:
                        for k in range(m + 1):
                            dkf = prolong(f, k, ctx)
                            if not dkf.is_zero():
                                assert dkf.is_homogeneous_of_weight(k)
                                expected.append(dkf)
                    assert list(J.relations) == expected
                    assert all(r.weighted_degree_info().is_homogeneous for r in J.relations)

    def test_bad_names(self):
        with pytest.raises(PresentationError):
            Presentation.from_strings(QQ, ["x", "d1x"])
        with pytest.raises(PresentationError):
            Presentation.from_strings(QQ, ["x"], constants=["x"])


class TestRelative:
    def test_cusp_over_line(self):
        B = Presentation.from_strings(QQ, ["x"])
        C = Presentation.from_strings(QQ, ["y"], ["y^2 - x^3"], constants=["x"], tower=B)
        J = relative_jet_presentation(C, 1)
        assert list(J.relations) == rels(J, ["y^2 - x^3", "2*y*d1y"])

    def test_relative_line(self):
        B = Presentation.from_strings(QQ, ["x"])
        C = Presentation.from_strings(QQ, ["u"], constants=["x"], tower=B)
        J = relative_jet_presentation(C, 2)
        assert J.relations == ()
        assert {g.name for g in J.generators} == {"u"}

    def test_trivial_extension(self):
        B = Presentation.from_strings(QQ, ["x"], ["x^2"])
        C = Presentation(QQ, (), (), ("x",), 0, B)
        J = relative_jet_presentation(C, 2)
        assert J.generators == () and list(J.relations) == [B.parse("x^2")]

    def test_name_clash(self):
        B = Presentation.from_strings(QQ, ["x"])
        C = Presentation.from_strings(QQ, ["x_"], constants=["x"], tower=B)
        relative_jet_presentation(C, 1)  # distinct names are fine
        C_bad = Presentation(QQ, (JetVariable("x"),), (), (), 0, B)
        with pytest.raises(PresentationError):
            relative_jet_presentation(C_bad, 1)


class TestMaps:
    def test_truncation_identity_and_inclusion(self, cusp):
        f11 = truncation_map(cusp, 1, 1)
        assert f11.same_on_generators(identity_map(jet_presentation(cusp, 1)))
        f01 = truncation_map(cusp, 0, 1)
        assert f01.apply(cusp.parse("y^2 - x^3")) == cusp.parse("y^2 - x^3")
        truncation_map(cusp, 1, 2).certify()

    def test_truncation_rejects_decreasing(self, cusp):
        with pytest.raises(PresentationError):
            truncation_map(cusp, 2, 1)

    def test_truncation_system(self, cusp, line):
        for P in (cusp, line):
            for i in range(5):
                for j in range(i, 5):
                    for k in range(j, 5):
                        assert truncation_system_check(P, i, j, k)

    def test_zero_section(self, cusp):
        s = zero_section_map(cusp, 2)
        J = jet_presentation(cusp, 2)
        assert s.apply(J.relations[1]).is_zero()
        assert s.apply(J.relations[0]) == J.relations[0]
        assert all(s.apply(r).is_zero() for r in J.relations[1:])

    def test_broken_map_rejected(self):
        P = Presentation.from_strings(QQ, ["x"], ["x^2"])
        with pytest.raises(IllDefinedMap) as err:
            algebra_map(P, P, {"x": "x + 1"})
        assert err.value.relation == P.parse("x^2")

    def test_dilation_examples(self, cusp):
        J = jet_presentation(cusp, 2)
        one = dilation_map(cusp, 2, 1)
        assert one.same_on_generators(identity_map(J))
        zero = dilation_map(cusp, 2, 0)
        for g in J.generators:
            assert zero.image(g) == (Polynomial.var(g, QQ) if g.order == 0 else 0)
        dz = dilation_map(cusp, 2, "z")
        z = Polynomial.var(JetVariable("z"), QQ)
        assert dz.apply(J.relations[2]) == z ** 2 * J.relations[2]
        assert dz.apply(J.relations[1]) == z * J.relations[1]

    def test_dilation_algebra(self, cusp, line):
        for P in (cusp, line):
            for m in (1, 2, 3):
                assert all(dilation_checks(P, m))

    def test_induced_examples(self, cusp):
        L = Presentation.from_strings(QQ, ["x"])
        assert induced_map(identity_map(L), 2).same_on_generators(identity_map(jet_presentation(L, 2)))
        sq = algebra_map(L, L, {"x": "x^3"})
        h = induced_map(sq, 1)
        J = jet_presentation(L, 1)
        assert h.image(JetVariable("x", 1)) == J.parse("3*x^2*d1x")

        U = Presentation.from_strings(QQ, ["u"])
        norm = algebra_map(cusp, U, {"x": "u^2", "y": "u^3"})
        h = induced_map(norm, 1)
        JU = jet_presentation(U, 1)
        assert h.image(JetVariable("x", 1)) == JU.parse("2*u*d1u")
        assert h.image(JetVariable("y", 1)) == JU.parse("3*u^2*d1u")

    def test_induced_rejects_ill_defined(self):
        P = Presentation.from_strings(QQ, ["x"], ["x^2"])
        phi = algebra_map(P, P, {"x": "x + 1"}, certify=False)
        with pytest.raises(IllDefinedMap):
            induced_map(phi, 1)

    def test_functoriality_chain(self, cusp):
        L = Presentation.from_strings(QQ, ["u"])
        M = Presentation.from_strings(QQ, ["s", "t"])
        phi = algebra_map(cusp, L, {"x": "u^2", "y": "u^3"})
        psi = algebra_map(L, M, {"u": "s*t + s"})
        chi = algebra_map(M, M, {"s": "s^2", "t": "t - s"})
        for m in (1, 2, 3):
            lhs = induced_map(phi.then(psi).then(chi), m)
            rhs = induced_map(phi, m).then(induced_map(psi, m)).then(induced_map(chi, m))
            assert lhs.same_on_generators(rhs)


class TestConstructions:
    def test_product(self, cusp, line):
        A = Presentation.from_strings(QQ, ["x"])
        B = Presentation.from_strings(QQ, ["y"])
        prod, ok = product_presentation(A, B, 2)
        assert ok and prod.base_names == ("x", "y") and prod.relations == ()
        y_line = Presentation.from_strings(QQ, ["z"])
        prod, ok = product_presentation(cusp, y_line, 2)
        assert ok
        assert list(jet_presentation(prod, 2).relations) == list(jet_presentation(cusp, 2).relations)

    def test_product_renames_clash(self, cusp):
        prod, ok = product_presentation(cusp, cusp, 1)
        assert ok and len(prod.base_names) == 4

    def test_localize(self, line):
        Lx = localize(line, "x")
        assert list(Lx.relations) == [Lx.parse("x*u - 1")]
        J = jet_presentation(Lx, 1)
        assert list(J.relations) == rels(J, ["x*u - 1", "x*d1u + u*d1x"])
        L1 = localize(line, "1")
        assert list(L1.relations) == [L1.parse("u - 1")]
        with pytest.raises(PresentationError):
            localize(line, "x", name="x")

    def test_fibers(self, cusp):
        F1 = fiber_presentation(jet_presentation(cusp, 1), {"x": 0, "y": 0})
        assert F1.relations == () and len(F1.generators) == 2
        F2 = fiber_presentation(jet_presentation(cusp, 2), {"x": 0, "y": 0})
        assert list(F2.relations) == [F2.parse("d1y^2")]
        F = fiber_presentation(jet_presentation(cusp, 1), {"x": 1, "y": 1})
        assert list(F.relations) == [F.parse("2*d1y - 3*d1x")]

    def test_fiber_off_the_curve(self, cusp):
        with pytest.raises(PresentationError):
            fiber_presentation(jet_presentation(cusp, 1), {"x": 1, "y": 0})


class TestFirstSequence:
    def _towers(self):
        B = Presentation.from_strings(QQ, ["x"])
        plane = Presentation.from_strings(QQ, ["y"], constants=["x"], tower=B)
        cusp = Presentation.from_strings(QQ, ["y"], ["y^2 - x^3"], constants=["x"], tower=B)
        return plane, cusp

    def test_plane_kernel_is_d1x(self):
        plane, _ = self._towers()
        v = first_sequence_check(plane, 1)
        assert v
        d1x = parse_poly("d1x", ["x"], QQ)
        assert ideal_equal(v.data["kernel"], [d1x])

    def test_towers_m_1_2(self):
        for C in self._towers():
            for m in (1, 2):
                assert first_sequence_check(C, m)

    def test_trivial_tower(self):
        C = Presentation.from_strings(QQ, ["x"])
        v = first_sequence_check(C, 2)
        assert v and v.data["kernel"] == [] and v.data["claimed"] == []


def test_base_change(rng):
    for p in (2, 3, 5):
        for _ in range(50):
            f = random_poly(rng, ["x", "y"], ZZ, 3, 4)
            if f.is_zero():
                continue
            P = Presentation(ZZ, (JetVariable("x"), JetVariable("y")), (f,))
            assert base_change_check(P, p, rng.randint(0, 3))


def test_gg_degrees():
    assert [gg_line_sheaf_degree(m) for m in (1, 2, 3, 4)] == [1, 2, 6, 12]
    with pytest.raises(EmptyScheme):
        gg_line_sheaf_degree(0)


class TestLeadingForm:
    def test_examples(self):
        names = ["x", "y", "a"]
        P = lambda s: parse_poly(s, names, QQ)
        assert leading_form_restriction(P("x^2"), ["x"], 2) == P("d1x^2")
        assert leading_form_restriction(P("x*y"), ["x", "y"], 2) == P("d1x*d1y")
        assert leading_form_restriction(P("a*x^2"), ["x"], 2) == P("a*d1x^2")

    def test_not_in_power(self):
        with pytest.raises(NotInPowerIdeal):
            leading_form_restriction(parse_poly("x", ["x"], QQ), ["x"], 2)

    def test_requires_polynomial_chart(self, cusp):
        with pytest.raises(PresentationError):
            leading_form_restriction(cusp.parse("x^2"), ["x"], 2, cusp)

    def test_random_elements_of_power_ideal(self, rng):
        for _ in range(50):
            n = rng.randint(1, 2)
            m = rng.randint(1, 3)
            E = ["x", "y"][:n]
            names = E + ["a"]
            b = Polynomial.zero(QQ)
            while b.is_zero():
                for _ in range(rng.randint(1, 3)):
                    mono = Polynomial.constant(1, QQ)
                    for _ in range(m):
                        mono = mono * Polynomial.var(JetVariable(rng.choice(E)), QQ)
                    b = b + mono * random_poly(rng, names, QQ, 2, 2)
            form = leading_form_restriction(b, E, m)
            for mon, _ in form.items():
                assert all(v.order == 1 and v.name in E or v.order == 0 and v.name not in E for v, _ in mon.items)
