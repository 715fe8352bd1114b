from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modvar.exactlin import (
    DEFAULT_FIELD,
    KERNEL,
    PrimeField,
    Rationals,
    field_from_name,
    inverse,
    kernel_basis,
    nullspace,
    random_invertible,
    random_matrix,
    rank,
    solve_linear,
)
from modvar.exactlin import kernel as kern

QQ = Rationals()
F5 = PrimeField(5)


def test_rank_examples():
    assert rank(DEFAULT_FIELD.eye(3)) == 3
    assert rank(DEFAULT_FIELD.zeros(2, 5)) == 0
    assert rank(QQ.array([[1, 2], [2, 4]]), QQ) == 1
    assert rank(DEFAULT_FIELD.zeros(0, 4)) == 0
    assert rank(DEFAULT_FIELD.zeros(4, 0)) == 0


def test_kernel_basis_examples():
    F = DEFAULT_FIELD
    assert kernel_basis(F.eye(2)) == []
    assert len(kernel_basis(F.zeros(2, 3))) == 3
    (v,) = kernel_basis(QQ.array([[1, 1]]), QQ)
    assert v.shape == (2, 1)
    assert v[0, 0] == -v[1, 0] != 0


def test_solve_linear_examples():
    F = DEFAULT_FIELD
    rhs = F.array([[4], [7]])
    assert np.array_equal(solve_linear(F.eye(2), rhs), rhs)
    assert solve_linear(F.zeros(2, 2), F.array([[1], [0]])) is None
    m = QQ.array([[1, 0], [0, 0]])
    x = solve_linear(m, QQ.array([[3], [0]]), QQ)
    assert x[0, 0] == 3
    assert np.array_equal(QQ.matmul(m, x), QQ.array([[3], [0]]))


def test_random_matrix_contract():
    F = DEFAULT_FIELD
    assert random_matrix(0, 3, F, np.random.default_rng(1)).shape == (0, 3)
    a = random_matrix(3, 3, F, np.random.default_rng(7))
    b = random_matrix(3, 3, F, np.random.default_rng(7))
    assert np.array_equal(a, b)
    c = random_matrix(2, 2, F5, np.random.default_rng(3))
    assert c.min() >= 0 and c.max() <= 4
    r = random_matrix(4, 4, QQ, np.random.default_rng(3))
    assert all(isinstance(x, Fraction) and abs(x) <= 9 for x in r.flat)


def test_field_names():
    assert field_from_name("p") == DEFAULT_FIELD
    assert field_from_name("GF(7)") == PrimeField(7)
    assert field_from_name("11") == PrimeField(11)
    assert isinstance(field_from_name("rat"), Rationals)
    with pytest.raises(ValueError):
        PrimeField(6)
    with pytest.raises(ValueError):
        field_from_name("C")


def test_large_prime_matmul_is_exact():
    F = DEFAULT_FIELD
    rng = np.random.default_rng(0)
    a, b = F.random(5, 7, rng), F.random(7, 3, rng)
    exact = np.array([[sum(int(a[i, k]) * int(b[k, j]) for k in range(7)) % F.p for j in range(3)] for i in range(5)])
    assert np.array_equal(F.matmul(a, b), exact)


def test_inverse_roundtrip_and_singular():
    for F in (DEFAULT_FIELD, QQ, F5):
        g = random_invertible(4, F, np.random.default_rng(2))
        assert np.array_equal(F.matmul(g, inverse(g, F)), F.eye(4))
    with pytest.raises(ZeroDivisionError):
        inverse(DEFAULT_FIELD.zeros(2, 2))


matrices = st.tuples(st.integers(0, 6), st.integers(0, 6), st.integers(0, 2**32)).map(
    lambda t: (t[0], t[1], np.random.default_rng(t[2]))
)


@settings(max_examples=60, deadline=None)
@given(matrices, st.sampled_from(["p", "5", "rat"]), st.booleans())
def test_rank_transpose_kernel_and_solve(shape, fname, low_rank):
    rows, cols, rng = shape
    F = field_from_name(fname)
    m = random_matrix(rows, cols, F, rng)
    if low_rank and rows and cols:
        k = random_matrix(rows, 1, F, rng)
        m = F.matmul(k, random_matrix(1, cols, F, rng))
    r = rank(m, F)
    assert r == rank(np.ascontiguousarray(m.T), F)
    ns = nullspace(m, F)
    assert ns.shape == (cols, cols - r)
    assert F.is_zero(F.matmul(m, ns))
    x0 = random_matrix(cols, 1, F, rng)
    rhs = F.matmul(m, x0)
    x = solve_linear(m, rhs, F)
    assert x is not None and np.array_equal(F.matmul(m, x), rhs)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**32), st.sampled_from([2, 3, 65537, 2147483647]))
def test_kernels_agree(rows, cols, seed, p):
    rng = np.random.default_rng(seed)
    m = rng.integers(0, p, size=(rows, cols), dtype=np.int64)
    if rows > 2:
        m[-1] = (m[0] + m[1]) % p  # force a dependent row
    a, b = m.copy(), m.copy()
    pa = kern.python_rref_modp(a, p)
    pb = kern.rref_modp(b, p)
    assert list(pa) == list(pb)
    assert np.array_equal(a, b)


def test_kernel_selection():
    assert KERNEL in ("cython", "python")
