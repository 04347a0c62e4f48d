import numpy as np
import pytest
import sympy

from latticeforce import gring
from latticeforce.errors import NotInvertibleMod2Error
from latticeforce.gring import GaussInt


def random_gauss_matrix(rng, n, lo=-4, hi=5):
    return rng.integers(lo, hi, (n, n)) + 1j * rng.integers(lo, hi, (n, n))


def random_unimodular(rng, n, steps=12):
    """Product of elementary row operations: exactly unimodular."""
    m = np.eye(n, dtype=complex)
    units = (1, -1, 1j, -1j)
    for _ in range(steps):
        i, j = rng.integers(0, n, 2)
        if i == j:
            m[i] *= units[rng.integers(0, 4)]
        else:
            q = complex(rng.integers(-2, 3), rng.integers(-2, 3))
            m[i] += q * m[j]
    return m


def sympy_matrix(a):
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    return sympy.Matrix(
        [
            [sympy.Integer(int(round(z.real))) + sympy.I * sympy.Integer(int(round(z.imag)))
             for z in row]
            for row in a
        ]
    )


# ---------------------------------------------------------------------------
# round_gaussian
# ---------------------------------------------------------------------------

def test_round_componentwise():
    assert gring.round_gaussian(0.4 + 0.6j) == 1j


def test_round_fixed_point():
    assert gring.round_gaussian(2 - 3j) == 2 - 3j


def test_round_half_away_from_zero():
    assert gring.round_gaussian(1.5 + 0.5j) == 2 + 1j
    assert gring.round_gaussian(-1.5 - 0.5j) == -2 - 1j


def test_round_array_shape():
    out = gring.round_gaussian([[0.2 + 0.9j, -0.7], [1.1j, 0]])
    assert out.shape == (2, 2)
    assert np.array_equal(out, [[1j, -1], [1j, 0]])


def test_round_shift_equivariance():
    # ties have measure zero on continuous inputs; test off-tie points
    rng = np.random.default_rng(21)
    for _ in range(500):
        z = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
        g = complex(rng.integers(-10, 11), rng.integers(-10, 11))
        assert gring.round_gaussian(z + g) == gring.round_gaussian(z) + g


# ---------------------------------------------------------------------------
# GaussInt basics
# ---------------------------------------------------------------------------

def test_gaussint_arithmetic():
    a, b = GaussInt(1, 2), GaussInt(3, -1)
    assert a + b == GaussInt(4, 1)
    assert a - b == GaussInt(-2, 3)
    assert a * b == GaussInt(5, 5)
    assert (-a) == GaussInt(-1, -2)
    assert a.conj() == GaussInt(1, -2)
    assert a.norm() == 5
    assert not a.is_unit()
    assert GaussInt(0, -1).is_unit()


# ---------------------------------------------------------------------------
# exact determinant / unimodularity
# ---------------------------------------------------------------------------

def test_unimodular_identity():
    assert gring.is_unimodular(np.eye(2))


def test_unimodular_hand_cases():
    assert gring.is_unimodular([[1, 0], [-1 - 1j, 1]])
    assert not gring.is_unimodular([[1 + 1j, 0], [0, 1]])


def test_invertible_zi_examples():
    assert gring.is_invertible_zi([[1, 0], [0, 1j]])
    assert not gring.is_invertible_zi([[2, 0], [0, 1]])
    # det = 1 - i has norm 2: not a unit
    assert not gring.is_invertible_zi([[1, 1j], [1, 1]])


def test_det_exact_against_sympy():
    rng = np.random.default_rng(22)
    for _ in range(300):
        n = int(rng.integers(1, 5))
        m = random_gauss_matrix(rng, n)
        got = gring.det_exact(m)
        expect = sympy.expand(sympy_matrix(m).det())
        assert sympy.expand(
            sympy.Integer(got.re) + sympy.I * sympy.Integer(got.im) - expect
        ) == 0


def test_unimodular_iff_exact_inverse_unimodular():
    rng = np.random.default_rng(23)
    for _ in range(1000):
        n = int(rng.integers(2, 4))
        u = random_unimodular(rng, n)
        assert gring.is_unimodular(u)
        inv = np.array(sympy_matrix(u).inv()).astype(complex)
        assert np.allclose(inv, np.rint(inv.real) + 1j * np.rint(inv.imag))
        assert gring.is_unimodular(inv)


def test_rank_zi():
    assert gring.rank_zi([[1, 1j], [2, 2j]]) == 1
    assert gring.rank_zi([[1, 0], [0, 2]]) == 2
    assert gring.rank_zi([[0, 0], [0, 0]]) == 0


# ---------------------------------------------------------------------------
# mod-2 residue ring
# ---------------------------------------------------------------------------

def test_units_table_exhaustive():
    elements = (0, 1, 1j, 1 + 1j)
    units = set()
    for x in elements:
        for y in elements:
            if gring.mul_mod2(x, y) == 1:
                units.add(x)
                units.add(y)
    assert units == {1, 1j}
    # 1+i is nilpotent
    assert gring.mul_mod2(1 + 1j, 1 + 1j) == 0


def test_invert_mod2_identity():
    assert np.array_equal(gring.invert_mod2(np.eye(2)), np.eye(2))


def test_invert_mod2_hand_case():
    a = np.array([[1, 1 + 1j], [0, 1j]])
    inv = gring.invert_mod2(a)
    assert np.array_equal(inv, a)  # this matrix squares to I mod 2


def test_invert_mod2_zero_divisor():
    with pytest.raises(NotInvertibleMod2Error):
        gring.invert_mod2([[1 + 1j, 0], [0, 1]])


def test_invert_mod2_round_trips():
    rng = np.random.default_rng(24)
    done = 0
    while done < 1000:
        n = int(rng.integers(2, 4))
        a = random_gauss_matrix(rng, n)
        if not gring.is_invertible_mod2(a):
            continue
        inv = gring.invert_mod2(a)
        prod = gring.mod2(np.rint((inv @ a).real) + 1j * np.rint((inv @ a).imag))
        assert np.array_equal(prod, np.eye(n))
        done += 1


def test_solve_mod2_identity():
    out = gring.solve_mod2(np.eye(2), [1 + 1j, 0])
    assert np.array_equal(out, [1 + 1j, 0])


def test_solve_mod2_hand_case():
    a = [[1, 1 + 1j], [0, 1j]]
    out = gring.solve_mod2(a, [0, 1j])
    assert np.array_equal(out, [1 + 1j, 1])


def test_solve_mod2_round_trip():
    rng = np.random.default_rng(25)
    done = 0
    while done < 300:
        n = int(rng.integers(2, 4))
        a = random_gauss_matrix(rng, n)
        if not gring.is_invertible_mod2(a):
            continue
        s = rng.integers(0, 2, n) + 1j * rng.integers(0, 2, n)
        r = gring.mod2(np.asarray(a, dtype=complex) @ s)
        assert np.array_equal(gring.solve_mod2(a, r), s)
        done += 1


def test_is_invertible_mod2_matches_det_criterion():
    # invertible over the mod-2 ring iff det mod 2 is a unit (1 or i)
    rng = np.random.default_rng(26)
    for _ in range(500):
        n = int(rng.integers(2, 4))
        a = random_gauss_matrix(rng, n)
        det = gring.det_exact(a)
        det_res = complex(det.re % 2, det.im % 2)
        assert gring.is_invertible_mod2(a) == (det_res in (1, 1j))
