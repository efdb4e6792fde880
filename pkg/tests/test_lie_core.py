import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from nilmag import (
    NilPoint,
    OscElement,
    OscVector,
    ShapeError,
    algebra_matrix,
    bracket,
    exp_nil,
    exp_osc,
    matrix_exp,
    matrix_to_osc,
    nil_multiply,
    osc_action,
    osc_multiply,
    osc_to_matrix,
    split,
)
from nilmag.errors import DomainError

E1 = OscVector(1.0, 0.0, 0.0, 0.0)
E2 = OscVector(0.0, 1.0, 0.0, 0.0)
E3 = OscVector(0.0, 0.0, 1.0, 0.0)
E4 = OscVector(0.0, 0.0, 0.0, 1.0)
BASIS = (E1, E2, E3, E4)

coord = st.floats(-5.0, 5.0)


def vec(v):
    return np.array([v.e1, v.e2, v.e3, v.e4])


def close(u, v, tol=1e-12):
    return float(np.max(np.abs(vec(u) - vec(v)))) <= tol


class TestBracket:
    @pytest.mark.parametrize(
        "i,j,expected",
        [
            (0, 1, E3),
            (3, 0, E2),
            (3, 1, OscVector(-1.0, 0.0, 0.0, 0.0)),
            (0, 2, OscVector(0.0, 0.0, 0.0, 0.0)),
            (1, 2, OscVector(0.0, 0.0, 0.0, 0.0)),
            (2, 3, OscVector(0.0, 0.0, 0.0, 0.0)),
        ],
    )
    def test_basis_table(self, i, j, expected):
        assert bracket(BASIS[i], BASIS[j]) == expected
        flipped = bracket(BASIS[j], BASIS[i])
        assert vec(flipped) == pytest.approx(-vec(expected), abs=0.0)

    def test_mixed_vector(self):
        got = bracket(E4, OscVector(2.0, 3.0, 0.0, 0.0))
        assert got == OscVector(-3.0, 2.0, 0.0, 0.0)

    def test_jacobi_on_basis(self):
        for a in BASIS:
            for b in BASIS:
                for c in BASIS:
                    total = (
                        vec(bracket(a, bracket(b, c)))
                        + vec(bracket(b, bracket(c, a)))
                        + vec(bracket(c, bracket(a, b)))
                    )
                    assert np.all(total == 0.0)

    @given(coord, coord, coord, coord, coord, coord, coord, coord)
    def test_antisymmetry(self, a1, a2, a3, a4, b1, b2, b3, b4):
        a = OscVector(a1, a2, a3, a4)
        b = OscVector(b1, b2, b3, b4)
        assert vec(bracket(a, b)) == pytest.approx(-vec(bracket(b, a)), abs=0.0)


class TestNilMultiply:
    def test_identity(self):
        p = NilPoint(1.5, -2.0, 0.25)
        o = NilPoint(0.0, 0.0, 0.0)
        assert nil_multiply(o, p) == p
        assert nil_multiply(p, o) == p

    def test_cross_term(self):
        got = nil_multiply(NilPoint(1.0, 0.0, 0.0), NilPoint(0.0, 1.0, 0.0))
        assert got == NilPoint(1.0, 1.0, 0.5)

    def test_inverse(self):
        p = NilPoint(0.7, -1.3, 2.1)
        inv = NilPoint(-p.x, -p.y, -p.z)
        assert nil_multiply(p, inv) == NilPoint(0.0, 0.0, 0.0)
        assert nil_multiply(inv, p) == NilPoint(0.0, 0.0, 0.0)

    @given(*(coord for _ in range(9)))
    def test_associativity(self, ax, ay, az, bx, by, bz, cx, cy, cz):
        a = NilPoint(ax, ay, az)
        b = NilPoint(bx, by, bz)
        c = NilPoint(cx, cy, cz)
        left = nil_multiply(nil_multiply(a, b), c)
        right = nil_multiply(a, nil_multiply(b, c))
        assert left.x == pytest.approx(right.x, abs=1e-12)
        assert left.y == pytest.approx(right.y, abs=1e-12)
        assert left.z == pytest.approx(right.z, abs=1e-12)


class TestOscMultiply:
    def test_identity(self):
        g = OscElement(1.0, 2.0, 3.0, 0.5)
        e = OscElement(0.0, 0.0, 0.0, 0.0)
        assert osc_multiply(e, g) == g
        assert osc_multiply(g, e) == g

    def test_quarter_turn(self):
        g = OscElement(1.0, 0.0, 0.0, math.pi / 2)
        h = OscElement(1.0, 0.0, 0.0, 0.0)
        got = osc_multiply(g, h)
        assert got.x == pytest.approx(1.0, abs=1e-15)
        assert got.y == pytest.approx(1.0)
        assert got.z == pytest.approx(0.5)
        assert got.t == math.pi / 2

    def test_pure_rotations_add(self):
        g = osc_multiply(OscElement(0.0, 0.0, 0.0, 0.25), OscElement(0.0, 0.0, 0.0, 1.5))
        assert g == OscElement(0.0, 0.0, 0.0, 1.75)

    def test_nil_subgroup_matches_nil_multiply(self):
        """At t = 0 both factors sit in the nilpotent subgroup."""
        a = NilPoint(0.4, -1.2, 0.9)
        b = NilPoint(2.0, 0.5, -0.3)
        g = osc_multiply(OscElement(a.x, a.y, a.z, 0.0), OscElement(b.x, b.y, b.z, 0.0))
        p = nil_multiply(a, b)
        assert (g.x, g.y, g.z, g.t) == (p.x, p.y, p.z, 0.0)


class TestMatrixForms:
    def test_identity_element(self):
        assert np.array_equal(osc_to_matrix(OscElement(0.0, 0.0, 0.0, 0.0)), np.eye(4))

    def test_known_entries(self):
        m = osc_to_matrix(OscElement(1.0, 2.0, 0.25, 0.0))
        assert m[0, 1] == -2.0
        assert m[0, 2] == 1.0
        assert m[0, 3] == 0.5
        assert m[1, 3] == 1.0
        assert m[2, 3] == 2.0
        assert np.array_equal(m[1:3, 1:3], np.eye(2))

    def test_product_is_matrix_product(self):
        g = OscElement(0.3, -0.7, 0.2, 0.9)
        h = OscElement(-1.1, 0.4, 0.05, -0.6)
        direct = osc_to_matrix(osc_multiply(g, h))
        matprod = osc_to_matrix(g) @ osc_to_matrix(h)
        assert float(np.max(np.abs(direct - matprod))) <= 1e-12

    def test_algebra_matrix_squares_to_zero_when_flat(self):
        # analytically zero; matmul may leave fused-multiply dust
        m = algebra_matrix(OscVector(0.7, -0.2, 1.3, 0.0))
        assert float(np.max(np.abs(m @ m))) <= 1e-15

    @given(coord, coord, coord, st.floats(-3.0, 3.0))
    def test_round_trip(self, x, y, z, t):
        g = OscElement(x, y, z, t)
        back = matrix_to_osc(osc_to_matrix(g))
        assert back.x == pytest.approx(g.x, abs=1e-12)
        assert back.y == pytest.approx(g.y, abs=1e-12)
        assert back.z == pytest.approx(g.z, abs=1e-12)
        assert back.t == pytest.approx(g.t, abs=1e-12)

    def test_branch_hint_unwinds_angle(self):
        t = 2.0 * math.pi + 0.1
        m = osc_to_matrix(OscElement(0.0, 0.0, 0.0, t))
        assert matrix_to_osc(m).t == pytest.approx(0.1, abs=1e-12)
        assert matrix_to_osc(m, t_hint=6.0).t == pytest.approx(t, abs=1e-12)

    def test_rejects_sheared_block(self):
        m = np.eye(4)
        m[1, 2] = 0.5
        with pytest.raises(ShapeError):
            matrix_to_osc(m)

    def test_rejects_reflection(self):
        m = np.eye(4)
        m[1, 1] = -1.0
        with pytest.raises(ShapeError):
            matrix_to_osc(m)


class TestMatrixExp:
    def test_zero_matrix(self):
        assert np.array_equal(matrix_exp(np.zeros((4, 4))), np.eye(4))

    def test_nilpotent_exponential_is_affine(self):
        v = OscVector(0.7, -0.2, 1.3, 0.0)
        m = algebra_matrix(v)
        assert float(np.max(np.abs(matrix_exp(m) - (np.eye(4) + m)))) <= 1e-15

    def test_rotation_generator(self):
        t = 1.234
        got = matrix_exp(algebra_matrix(OscVector(0.0, 0.0, 0.0, t)))
        want = osc_to_matrix(OscElement(0.0, 0.0, 0.0, t))
        assert float(np.max(np.abs(got - want))) <= 1e-14

    @pytest.mark.parametrize("seed,scale,tol", [(0, 0.5, 1e-14), (1, 4.0, 1e-13), (2, 10.0, 1e-12)])
    def test_against_high_precision_oracle(self, seed, scale, tol):
        rng = np.random.default_rng(seed)
        m = rng.uniform(-1.0, 1.0, size=(4, 4)) * scale
        got = matrix_exp(m)
        with mpmath.workdps(50):
            ref = mpmath.expm(mpmath.matrix(m.tolist()))
            ref = np.array(ref.tolist(), dtype=float)
        denom = max(1.0, float(np.max(np.abs(ref))))
        assert float(np.max(np.abs(got - ref))) / denom <= tol


class TestExponentials:
    def test_exp_nil_reeb_direction(self):
        g = exp_nil(OscVector(0.0, 0.0, 2.5, 0.0))
        assert g == NilPoint(0.0, 0.0, 2.5)

    def test_exp_nil_straight_lines(self):
        g = exp_nil(OscVector(1.0, -2.0, 0.5, 0.0))
        assert g == NilPoint(1.0, -2.0, 0.5)

    def test_exp_nil_rejects_rotation_part(self):
        with pytest.raises(DomainError):
            exp_nil(OscVector(1.0, 0.0, 0.0, 0.1))

    @given(*(st.floats(-2.0, 2.0) for _ in range(6)))
    def test_exp_nil_addition_rule(self, a1, a2, a3, b1, b2, b3):
        """Products of exponentials close with a single commutator correction."""
        a = OscVector(a1, a2, a3, 0.0)
        b = OscVector(b1, b2, b3, 0.0)
        comm = bracket(a, b)
        s = OscVector(a1 + b1, a2 + b2, a3 + b3 + 0.5 * comm.e3, 0.0)
        left = nil_multiply(exp_nil(a), exp_nil(b))
        right = exp_nil(s)
        assert left.x == pytest.approx(right.x, abs=1e-12)
        assert left.y == pytest.approx(right.y, abs=1e-12)
        assert left.z == pytest.approx(right.z, abs=1e-12)

    def test_exp_osc_rotation_axis(self):
        g = exp_osc(OscVector(0.0, 0.0, 0.0, 2.5))
        assert g.x == 0.0 and g.y == 0.0 and g.z == 0.0
        assert g.t == pytest.approx(2.5, abs=1e-14)

    def test_exp_osc_central_axis(self):
        g = exp_osc(OscVector(0.0, 0.0, 1.75, 1.75))
        assert g.x == pytest.approx(0.0, abs=1e-14)
        assert g.y == pytest.approx(0.0, abs=1e-14)
        assert g.z == pytest.approx(1.75, abs=1e-13)
        assert g.t == pytest.approx(1.75, abs=1e-14)

    def test_exp_osc_flat_part_matches_exp_nil(self):
        v = OscVector(0.9, -0.4, 0.3, 0.0)
        g = exp_osc(v)
        p = exp_nil(v)
        assert g.x == pytest.approx(p.x, abs=1e-13)
        assert g.y == pytest.approx(p.y, abs=1e-13)
        assert g.z == pytest.approx(p.z, abs=1e-13)
        assert g.t == pytest.approx(0.0, abs=1e-13)

    @given(
        st.floats(-1.0, 1.0),
        st.floats(-1.0, 1.0),
        st.floats(-1.0, 1.0),
        st.floats(-1.0, 1.0),
        st.floats(-10.0, 10.0),
        st.floats(-10.0, 10.0),
    )
    def test_exp_osc_one_parameter_property(self, v1, v2, v3, v4, s, u):
        v = OscVector(v1, v2, v3, v4)
        scaled = lambda c: OscVector(c * v1, c * v2, c * v3, c * v4)
        left = osc_multiply(exp_osc(scaled(s)), exp_osc(scaled(u)))
        right = exp_osc(scaled(s + u))
        assert left.x == pytest.approx(right.x, abs=1e-10)
        assert left.y == pytest.approx(right.y, abs=1e-10)
        assert left.z == pytest.approx(right.z, abs=1e-10)
        assert left.t == pytest.approx(right.t, abs=1e-10)


class TestOscAction:
    def test_identity_acts_trivially(self):
        p = NilPoint(0.3, -0.8, 1.1)
        assert osc_action(OscElement(0.0, 0.0, 0.0, 0.0), p) == p

    def test_nil_elements_act_by_group_law(self):
        g = OscElement(0.4, -1.2, 0.9, 0.0)
        p = NilPoint(2.0, 0.5, -0.3)
        assert osc_action(g, p) == nil_multiply(NilPoint(0.4, -1.2, 0.9), p)

    def test_pure_rotation(self):
        got = osc_action(OscElement(0.0, 0.0, 0.0, math.pi / 2), NilPoint(1.0, 0.0, 0.0))
        assert got.x == pytest.approx(0.0, abs=1e-15)
        assert got.y == pytest.approx(1.0)
        assert got.z == pytest.approx(0.0, abs=1e-15)

    @given(*(st.floats(-3.0, 3.0) for _ in range(11)))
    def test_action_respects_products(self, gx, gy, gz, gt, hx, hy, hz, ht, px, py, pz):
        g = OscElement(gx, gy, gz, gt)
        h = OscElement(hx, hy, hz, ht)
        p = NilPoint(px, py, pz)
        joined = osc_action(osc_multiply(g, h), p)
        stepped = osc_action(g, osc_action(h, p))
        assert joined.x == pytest.approx(stepped.x, abs=1e-12)
        assert joined.y == pytest.approx(stepped.y, abs=1e-12)
        assert joined.z == pytest.approx(stepped.z, abs=1e-12)


class TestSplit:
    def test_nil3_decomposition(self):
        h, m = split(OscVector(1.0, 2.0, 3.0, 4.0), "nil3")
        assert h == OscVector(0.0, 0.0, 0.0, 4.0)
        assert m == OscVector(1.0, 2.0, 3.0, 0.0)

    def test_m_decomposition(self):
        h, m = split(OscVector(1.0, 2.0, 3.0, 4.0), "m")
        assert h == OscVector(0.0, 0.0, 0.0, 1.0)
        assert m == OscVector(1.0, 2.0, 3.0, 3.0)

    @pytest.mark.parametrize("decomposition", ["nil3", "m"])
    def test_parts_sum_back(self, decomposition):
        w = OscVector(-0.7, 0.25, 1.9, -2.4)
        h, m = split(w, decomposition)
        assert vec(h) + vec(m) == pytest.approx(vec(w), abs=0.0)

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            split(E1, "cartan")
