"""Lattice model: intersection form, adjunction, blow-ups and contractions."""

import random
from fractions import Fraction

import pytest

from equimori import picard
from equimori.errors import AbstractModelError, ModelMismatchError, NonStandardContraction


def test_marked_gram_and_canonical():
    for m in range(9):
        model = picard.blowup_p2(m)
        assert model.rank == 1 + m
        assert model.gram[0][0] == 1
        assert all(model.gram[i][i] == -1 for i in range(1, model.rank))
        assert model.canonical_coords == tuple([-3] + [1] * m)
        assert model.k_squared() == 9 - m
        assert model.k_squared() + model.rank == 10
    for m in range(5):
        model = picard.blowup_p1xp1(m)
        assert model.rank == 2 + m
        assert model.gram[0][1] == model.gram[1][0] == 1
        assert model.k_squared() == 8 - m


def test_signature_one_positive_direction():
    # characteristic-polynomial sign count on small ranks: one positive
    # eigenvalue, the rest negative
    for model in (picard.blowup_p2(3), picard.blowup_p1xp1(1)):
        n = model.rank
        # count positive eigenvalues by Descartes on det(G - t I) sign changes;
        # for these small integer matrices just diagonalize over Q by congruence
        rows = [[Fraction(v) for v in row] for row in model.gram]
        pos = neg = 0
        for k in range(n):
            if rows[k][k] == 0:
                j = next((j for j in range(k + 1, n) if rows[k][j] != 0), None)
                assert j is not None
                for r in range(n):
                    rows[r][k] += rows[r][j]
                for c in range(n):
                    rows[k][c] += rows[j][c]
            d = rows[k][k]
            if d > 0:
                pos += 1
            else:
                neg += 1
            for r in range(k + 1, n):
                f = rows[r][k] / d
                for c in range(k, n):
                    rows[r][c] -= f * rows[k][c]
            for c in range(k + 1, n):
                f = rows[k][c] / d
                for r in range(k, n):
                    rows[r][c] -= f * rows[r][k]
        assert (pos, neg) == (1, n - 1)


class TestIntersect:
    def test_exceptional_self_intersection(self):
        m1 = picard.blowup_p2(1)
        e1 = m1.divisor((0, 1))
        assert picard.intersect(e1, e1) == -1

    def test_hyperplane(self):
        m1 = picard.blowup_p2(1)
        h = m1.divisor((1, 0))
        assert picard.intersect(h, h) == 1

    def test_k_squared_direct_product_oracle(self):
        # K.K on the 4-point blow-up via an independent direct matrix product
        m4 = picard.blowup_p2(4)
        k = (-3, 1, 1, 1, 1)
        gram = ((1, 0, 0, 0, 0), (0, -1, 0, 0, 0), (0, 0, -1, 0, 0),
                (0, 0, 0, -1, 0), (0, 0, 0, 0, -1))
        oracle = sum(k[i] * gram[i][j] * k[j] for i in range(5) for j in range(5))
        assert oracle == 5
        assert picard.intersect(m4.canonical, m4.canonical) == oracle

    def test_bilinear_symmetric_randomized(self):
        rng = random.Random(41)
        model = picard.blowup_p2(4)
        for _ in range(40):
            a = model.divisor([rng.randint(-4, 4) for _ in range(5)])
            b = model.divisor([rng.randint(-4, 4) for _ in range(5)])
            c = model.divisor([rng.randint(-4, 4) for _ in range(5)])
            assert picard.intersect(a, b) == picard.intersect(b, a)
            assert picard.intersect(a + b, c) == picard.intersect(a, c) + picard.intersect(b, c)
            assert picard.intersect(3 * a, b) == 3 * picard.intersect(a, b)

    def test_model_mismatch(self):
        a = picard.blowup_p2(1).divisor((0, 1))
        b = picard.blowup_p2(2).divisor((0, 1, 0))
        with pytest.raises(ModelMismatchError):
            picard.intersect(a, b)


class TestAdjunction:
    def test_exceptional_curve(self):
        m1 = picard.blowup_p2(1)
        assert picard.adjunction_genus(m1.divisor((0, 1))) == 0

    def test_ruling_fiber(self):
        p0 = picard.blowup_p1xp1(0)
        f1 = p0.divisor((1, 0))
        assert picard.intersect(f1, f1) == 0
        assert picard.intersect(p0.canonical, f1) == -2
        assert picard.adjunction_genus(f1) == 0

    def test_plane_curves(self):
        p2 = picard.blowup_p2(0)
        for d, g in [(1, 0), (2, 0), (3, 1), (4, 3)]:
            assert picard.adjunction_genus(p2.divisor((d,))) == g

    def test_rational_output_for_non_curves(self):
        p2 = picard.blowup_p2(1)
        val = picard.adjunction_genus(p2.divisor((0, 2)))
        assert val == Fraction(-2)  # 1 + (-4 + 2)/2 ... legal, flagged by sign


class TestBlowUp:
    def test_simple(self):
        m0 = picard.blowup_p2(0)
        m1 = picard.blow_up(m0, 1)
        assert m1.m == 1 and m1.k_squared() == 8

    def test_tower(self):
        m8 = picard.blow_up(picard.blowup_p2(4), 4)
        assert m8.m == 8
        assert picard.intersect(m8.canonical, m8.canonical) == 1

    def test_sixteen_points_on_quadric(self):
        big = picard.blow_up(picard.blowup_p1xp1(0), 16)
        assert big.rank == 18
        assert big.k_squared() == -8

    def test_abstract_rejected(self):
        abstract = picard.abstract_model(((1,),), (-3,))
        with pytest.raises(AbstractModelError):
            picard.blow_up(abstract, 1)


class TestBlowDown:
    def test_single_exceptional(self):
        m1 = picard.blowup_p2(1)
        target, push = picard.blow_down_orbit(m1, [m1.divisor((0, 1))])
        assert target.m == 0
        assert m1.k_squared() == 8 and target.k_squared() == 9

    def test_four_orbit(self):
        m4 = picard.blowup_p2(4)
        orbit = [m4.basis_vector(i) for i in range(1, 5)]
        target, push = picard.blow_down_orbit(m4, orbit)
        assert target.m == 0 and target.k_squared() == 9

    def test_rank_drop(self):
        m2 = picard.blowup_p2(2)
        target, _ = picard.blow_down_orbit(m2, [m2.divisor((0, 1, 0))])
        assert (m2.rank, target.rank) == (3, 2)
        assert target.m == 1

    def test_roundtrip_identity_on_survivors(self):
        m2 = picard.blowup_p2(2)
        m4 = picard.blow_up(m2, 2)
        orbit = [m4.basis_vector(3), m4.basis_vector(4)]
        target, push = picard.blow_down_orbit(m4, orbit)
        assert target == m2
        rng = random.Random(2)
        for _ in range(10):
            coords = [rng.randint(-3, 3) for _ in range(3)]
            lifted = m4.divisor(coords + [0, 0])
            assert push.apply(lifted).coords == tuple(coords)

    def test_pushforward_preserves_complement_intersections(self):
        m3 = picard.blowup_p2(3)
        orbit = [m3.divisor((0, 0, 0, 1))]
        _, push = picard.blow_down_orbit(m3, orbit)
        rng = random.Random(4)
        for _ in range(20):
            a = m3.divisor([rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-3, 3), 0])
            b = m3.divisor([rng.randint(-3, 3), rng.randint(-3, 3), rng.randint(-3, 3), 0])
            assert picard.intersect(a, b) == picard.intersect(push.apply(a), push.apply(b))

    def test_weyl_normalization_of_a_line(self):
        # the line through two points is a (-1)-class but not a basis vector;
        # one reflection in a (-2)-class moves it onto one
        m3 = picard.blowup_p2(3)
        line = m3.divisor((1, -1, -1, 0))
        target, push = picard.blow_down_orbit(m3, [line])
        assert target.m == 2
        assert target.k_squared() == 8

    def test_non_normalizable_contraction_reported(self):
        # contracting the line on the two-point blow-up leaves the plane
        # tower; the engine reports it instead of silently mislabeling
        m2 = picard.blowup_p2(2)
        with pytest.raises(NonStandardContraction):
            picard.blow_down_orbit(m2, [m2.divisor((1, -1, -1))])

    def test_rejects_bad_orbits(self):
        m2 = picard.blowup_p2(2)
        with pytest.raises(NonStandardContraction):
            picard.blow_down_orbit(m2, [m2.divisor((1, 0, 0))])  # not a (-1)
        m5 = picard.blowup_p2(5)
        meet = [m5.divisor((0, 1, 0, 0, 0, 0)), m5.divisor((1, -1, -1, 0, 0, 0))]
        with pytest.raises(NonStandardContraction):
            picard.blow_down_orbit(m5, meet)  # members intersect


class TestEndpoints:
    def test_plane(self):
        label = picard.recognize_endpoint(picard.blowup_p2(0))
        assert label.kind == "P2"

    def test_quadric_even_lattice(self):
        label = picard.recognize_endpoint(picard.blowup_p1xp1(0))
        assert label.kind == "P1xP1"

    def test_odd_rank_two(self):
        label = picard.recognize_endpoint(picard.blowup_p2(1))
        assert label.kind == "HirzebruchOrBl1P2"

    def test_del_pezzo_degrees(self):
        label = picard.recognize_endpoint(picard.blowup_p2(4))
        assert label.kind == "DelPezzoDegree" and label.degree == 5
        label = picard.recognize_endpoint(picard.blowup_p2(3))
        assert label.degree == 6

    def test_conic_bundle_base_and_knef(self):
        # rank 10 blow-up: K^2 = 0, not a Del Pezzo; with a pencil class in
        # the catalog it is recognized as a conic-bundle total space
        gram = tuple(
            tuple((1 if i == j == 0 else (-1 if i == j else 0)) for j in range(10))
            for i in range(10)
        )
        pencil = tuple([1, -1] + [0] * 8)
        model = picard.SurfaceModel(
            kind=picard.ModelKind.BLOWUP_P2,
            m=9,
            gram=gram,
            canonical_coords=tuple([-3] + [1] * 9),
            catalog_coords=(pencil,),
        )
        assert picard.recognize_endpoint(model).kind == "ConicBundleBase"
        nef = picard.SurfaceModel(
            kind=picard.ModelKind.BLOWUP_P2,
            m=9,
            gram=gram,
            canonical_coords=tuple([-3] + [1] * 9),
            catalog_coords=(tuple([0, 1, -1] + [0] * 7),),  # K.C = 0
        )
        assert picard.recognize_endpoint(nef).kind == "KNef"


class TestCatalogInvariants:
    def test_default_catalog_genus_and_negativity(self):
        for m in range(7):
            model = picard.blowup_p2(m)
            k = model.canonical
            for c in model.catalog:
                assert picard.adjunction_genus(c) == 0
                assert picard.intersect(k, c) < 0
                assert picard.intersect(c, c) in (-1, 0, 1)

    def test_minus_one_and_minus_two_class_properties(self):
        from equimori import curves

        model = picard.blowup_p2(5)
        k = model.canonical
        for c in curves.enumerate_minus_one_curves(model):
            assert picard.adjunction_genus(c) == 0
        for c in curves.enumerate_minus_two_classes(model):
            assert picard.adjunction_genus(c) == 0
            assert picard.intersect(k, c) == 0


class TestSerialization:
    def test_roundtrip_marked(self):
        model = picard.blowup_p2(3)
        again = picard.surface_from_json(picard.surface_to_json(model))
        assert again == model

    def test_roundtrip_abstract(self):
        model = picard.abstract_model(((0, 1), (1, 0)), (-2, -2), [(1, 0), (0, 1)])
        again = picard.surface_from_json(picard.surface_to_json(model))
        assert again == model

    def test_contradictory_gram_rejected(self):
        with pytest.raises(ValueError):
            picard.surface_from_dict({"kind": "blowup-p2", "m": 1, "gram": [[2, 0], [0, -1]]})
