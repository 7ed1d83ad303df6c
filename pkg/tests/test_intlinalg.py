"""Tests for the exact integer linear algebra core.

The invariant-factor oracle used here is independent of the Smith
implementation: d_1 * ... * d_k equals the gcd of all k x k minors, so the
factors can be recovered from determinant combinatorics alone (feasible up
to 4 x 4).
"""

import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dehn24.intlinalg import (
    AbelianGroup,
    IntMatrix,
    cokernel,
    complete_to_basis,
    generates,
    is_primitive,
    kernel_basis,
    row_hermite,
    snf,
    solve_in_lattice,
)


def minor_gcd_invariant_factors(a: IntMatrix) -> list[int]:
    """Invariant factors via gcds of k x k minors (brute force, dims <= 4)."""
    assert a.rows <= 4 and a.cols <= 4
    factors = []
    previous = 1
    for k in range(1, min(a.rows, a.cols) + 1):
        g = 0
        for rows in itertools.combinations(range(a.rows), k):
            for cols in itertools.combinations(range(a.cols), k):
                sub = IntMatrix([[a[i, j] for j in cols] for i in rows], cols=k)
                g = math.gcd(g, sub.det())
        if g == 0:
            break
        factors.append(g // previous)
        previous = g
    return factors


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 9) -> IntMatrix:
    return IntMatrix([[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)],
                     cols=cols)


def random_unimodular(rng: random.Random, n: int, steps: int = 12) -> IntMatrix:
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i, k = rng.randrange(n), rng.randrange(n)
        if i == k:
            continue
        c = rng.randint(-2, 2)
        rows[i] = [x + c * y for x, y in zip(rows[i], rows[k])]
    return IntMatrix(rows, cols=n)


def test_snf_identity():
    decomp = snf(IntMatrix.identity(3))
    assert decomp.D == IntMatrix.identity(3)
    assert decomp.U == IntMatrix.identity(3)
    assert decomp.V == IntMatrix.identity(3)


def test_snf_frozen_2x2():
    # Expected factors confirmed by the minor-gcd oracle below.
    a = IntMatrix([[2, 4], [6, 8]])
    decomp = snf(a)
    assert decomp.D.diagonal_entries() == (2, 4)
    assert minor_gcd_invariant_factors(a) == [2, 4]


def test_snf_transform_identity_holds():
    rng = random.Random(7)
    for _ in range(400):
        m, n = rng.randint(1, 6), rng.randint(1, 6)
        a = random_matrix(rng, m, n)
        decomp = snf(a)
        assert decomp.U * a * decomp.V == decomp.D
        assert decomp.U.det() in (1, -1)
        assert decomp.V.det() in (1, -1)
        assert decomp.U * decomp.u_inv == IntMatrix.identity(m)
        assert decomp.V * decomp.v_inv == IntMatrix.identity(n)
        diag = [d for d in decomp.D.diagonal_entries() if d != 0]
        assert all(d > 0 for d in diag)
        for x, y in zip(diag, diag[1:]):
            assert y % x == 0
        # Off-diagonal must be exactly zero.
        for i in range(m):
            for j in range(n):
                if i != j:
                    assert decomp.D[i, j] == 0


def test_snf_matches_minor_gcd_oracle():
    rng = random.Random(11)
    for _ in range(300):
        m, n = rng.randint(1, 4), rng.randint(1, 4)
        a = random_matrix(rng, m, n)
        assert list(snf(a).invariant_factors()) == minor_gcd_invariant_factors(a)


def test_snf_deterministic():
    a = IntMatrix([[3, 1, -4], [1, 5, 9], [-2, 6, 5]])
    first = snf(a)
    second = snf(a)
    assert first.U == second.U and first.V == second.V and first.D == second.D


def test_cokernel_simple_cases():
    assert cokernel(IntMatrix([[2]])) == AbelianGroup(0, (2,))
    assert cokernel(IntMatrix.zero(5, 3)) == AbelianGroup(5)
    assert cokernel(IntMatrix.identity(4)) == AbelianGroup(0)


def test_cokernel_unimodular_invariance():
    rng = random.Random(23)
    for _ in range(60):
        m, n = rng.randint(1, 5), rng.randint(1, 5)
        a = random_matrix(rng, m, n)
        left = random_unimodular(rng, m)
        right = random_unimodular(rng, n)
        assert cokernel(a) == cokernel(left * a * right)


def test_kernel_basis_projection_and_injective():
    k = kernel_basis(IntMatrix([[1, 0, 0]]))
    assert k.cols == 2
    assert kernel_basis(IntMatrix([[2, 1], [1, 1]])).cols == 0


def test_kernel_basis_is_actual_kernel():
    rng = random.Random(31)
    for _ in range(200):
        m, n = rng.randint(1, 5), rng.randint(1, 6)
        a = random_matrix(rng, m, n)
        k = kernel_basis(a)
        assert (a * k).is_zero() or k.cols == 0
        # Columns are integrally independent: Hermite form has no zero column.
        if k.cols:
            decomp = snf(k)
            assert decomp.rank == k.cols


def test_kernel_basis_canonical_under_row_operations():
    # The kernel lattice only depends on the row space, and the canonical
    # basis must not notice which presentation produced it.
    rng = random.Random(37)
    for _ in range(100):
        m, n = rng.randint(1, 4), rng.randint(2, 6)
        a = random_matrix(rng, m, n)
        u = random_unimodular(rng, m)
        assert kernel_basis(a) == kernel_basis(u * a)


def test_kernel_membership_solver():
    rng = random.Random(41)
    for _ in range(100):
        m, n = rng.randint(1, 4), rng.randint(2, 6)
        a = random_matrix(rng, m, n)
        k = kernel_basis(a)
        if k.cols == 0:
            continue
        coeffs = [rng.randint(-5, 5) for _ in range(k.cols)]
        target = k.apply(coeffs)
        assert solve_in_lattice(k, target) == tuple(coeffs)


def test_is_primitive():
    assert is_primitive((1, 17, -4))
    assert not is_primitive((0, 0, 0))
    assert not is_primitive((2, 4, 6))
    assert is_primitive((0, 1, 0))


@given(st.integers(-50, 50), st.integers(-50, 50))
@settings(max_examples=60)
def test_slope_vectors_are_primitive(b, c):
    assert is_primitive((1, b, c))


def test_complete_to_basis_identity_case():
    assert complete_to_basis((1, 0, 0)) == IntMatrix.identity(3)


def test_complete_to_basis_properties():
    rng = random.Random(43)
    done = 0
    while done < 150:
        n = rng.randint(1, 6)
        v = [rng.randint(-9, 9) for _ in range(n)]
        if not is_primitive(v):
            continue
        done += 1
        basis = complete_to_basis(v)
        assert basis.column(0) == tuple(v)
        assert basis.det() in (1, -1)


def test_complete_to_basis_rejects_imprimitive():
    with pytest.raises(ValueError):
        complete_to_basis((2, 4))
    with pytest.raises(ValueError):
        complete_to_basis((0, 0))


def test_generates():
    basis = [(1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0),
             (0, 0, 0, 1, 0), (0, 0, 0, 0, 1)]
    assert generates(basis, 5)
    doubled = [(2, 0, 0, 0, 0)] + list(basis[1:])
    assert not generates(doubled, 5)
    assert generates([], 0)
    assert not generates([], 3)


def test_generates_matches_cokernel_triviality():
    rng = random.Random(53)
    for _ in range(100):
        n = rng.randint(1, 5)
        count = rng.randint(1, 6)
        vectors = [tuple(rng.randint(-4, 4) for _ in range(n)) for _ in range(count)]
        expected = cokernel(IntMatrix.from_columns(vectors, rows=n)).is_trivial()
        assert generates(vectors, n) == expected


def test_row_hermite_canonical():
    a = IntMatrix([[2, 7, 17], [3, 11, 19]])
    h = row_hermite(a)
    # Echelon with positive pivots and reduced entries above.
    assert h == row_hermite(h)
    rng = random.Random(59)
    for _ in range(100):
        m, n = rng.randint(1, 4), rng.randint(1, 5)
        b = random_matrix(rng, m, n)
        u = random_unimodular(rng, m)
        assert row_hermite(b) == row_hermite(u * b)


def test_abelian_group_descriptions():
    assert AbelianGroup(5).describe() == "Z^5"
    assert AbelianGroup(0, (2, 2, 2, 2, 2, 2)).describe() == "Z_2^6"
    assert AbelianGroup(0).describe() == "0"
    assert AbelianGroup(1, (2, 4)).describe() == "Z + Z_2 + Z_4"
    with pytest.raises(ValueError):
        AbelianGroup(0, (3, 2))
