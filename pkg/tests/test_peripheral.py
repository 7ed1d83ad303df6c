"""Tests for cusp cross sections and adapted peripheral bases.

Section counts, cube counts and section homology for the bundled
pairing are frozen from the same invariants the gluing tests pin down;
the adapted-basis algebra is additionally exercised on hand-written
matrices where every answer is checkable by eye.
"""

import pathlib

import pytest

from dehn24.chains import homology, induced_h1
from dehn24.gluing import quotient_complex
from dehn24.intlinalg import IntMatrix, generates, is_primitive
from dehn24.peripheral import (
    PeripheralError,
    adapted_basis,
    cusp_sections,
    peripheral_matrix,
    peripheral_system,
    report,
    slope,
)
from test_gluing import three_torus_spec


def rank1_matrix(rows, row, col, value=1):
    data = [[0] * 3 for _ in range(rows)]
    data[row][col] = value
    return IntMatrix(data, cols=3)


# ---------------------------------------------------------------------------
# Sections of the bundled pairing.


def test_sections_of_n(census_n):
    sections = cusp_sections(census_n)
    assert [s.cube_count for s in sections] == [2, 2, 2, 2, 16]
    for s in sections:
        h1 = homology(s.chain, 1)
        assert (h1.free_rank, h1.torsion) == (2, (2,))
        assert homology(s.chain, 0).free_rank == 1
        # Nonorientable: no fundamental class.
        h3 = homology(s.chain, 3)
        assert (h3.free_rank, h3.torsion) == (0, ())
        assert s.inclusion.commutes()


def test_sections_of_m(census_m):
    sections = cusp_sections(census_m)
    assert [s.cube_count for s in sections] == [4, 4, 4, 4, 32]
    for s in sections:
        got = [(homology(s.chain, k).free_rank, homology(s.chain, k).torsion)
               for k in range(4)]
        assert got == [(1, ()), (3, ()), (3, ()), (1, ())]


def test_sections_partition_boundary(census_m):
    q = census_m
    sections = cusp_sections(q)
    for k in range(4):
        flagged = {i for i, f in enumerate(q.boundary_flags[k]) if f}
        pieces = [set(s.cells[k]) for s in sections]
        assert set().union(*pieces) == flagged
        assert sum(len(p) for p in pieces) == len(flagged)


def test_section_ordering_follows_vertex_cycles(census_n):
    # Cusp i (i = 1..4) is the one containing the cubes of the ideal
    # vertices -e_i and e_i; the half-integer cusp comes last.
    sections = cusp_sections(census_n)
    vertex_pairs = []
    for s in sections[:4]:
        labels = [s.chain.cell_labels[3][j] for j in range(s.cube_count)]
        vertex_pairs.append(tuple(sorted(lab[2] for lab in labels)))
    assert vertex_pairs == [(0, 23), (9, 14), (10, 13), (11, 12)]


def test_no_boundary_means_no_sections():
    q = quotient_complex(three_torus_spec())
    with pytest.raises(PeripheralError, match="do not match"):
        cusp_sections(q)


# ---------------------------------------------------------------------------
# Peripheral matrices.


def test_peripheral_matrix_rejects_torsion_section(census_n):
    with pytest.raises(PeripheralError, match="torsion-free section"):
        peripheral_matrix(census_n, 0)


def test_peripheral_matrix_range(census_m):
    with pytest.raises(PeripheralError, match="out of range"):
        peripheral_matrix(census_m, 5)


def test_peripheral_matrices_of_m(census_m):
    for i in range(5):
        matrix = peripheral_matrix(census_m, i)
        assert (matrix.rows, matrix.cols) == (5, 3)
        decomp_rank = sum(1 for j in range(3) if any(matrix.column(j)))
        assert decomp_rank == 1  # exactly one surviving direction


def test_inclusion_induces_identity_on_self(census_m):
    # Degenerate sanity case: the identity chain map of a section.
    section = cusp_sections(census_m)[0]
    c = section.chain
    identity = type(section.inclusion)(
        source=c, target=c,
        maps=tuple(IntMatrix.identity(c.cell_count(k)) for k in range(4)))
    ind = induced_h1(identity)
    assert ind.free == IntMatrix.identity(3)


# ---------------------------------------------------------------------------
# Adapted bases and slopes.


def test_adapted_basis_coordinate_projection():
    matrix = rank1_matrix(5, 0, 0)
    k1, k2, k3 = adapted_basis(matrix)
    assert k1 == (1, 0, 0)
    assert sorted((k2, k3)) == [(0, 0, 1), (0, 1, 0)]


def test_adapted_basis_sign_fix():
    matrix = rank1_matrix(5, 3, 1, value=-1)
    k1, k2, k3 = adapted_basis(matrix)
    assert matrix.apply(k1) == (0, 0, 0, 1, 0)


def test_adapted_basis_is_unimodular_and_kernel_spans(census_m):
    for i in range(5):
        matrix = peripheral_matrix(census_m, i)
        k1, k2, k3 = adapted_basis(matrix)
        det = IntMatrix.from_columns([k1, k2, k3]).det()
        assert det in (1, -1)
        assert matrix.apply(k2) == (0,) * 5
        assert matrix.apply(k3) == (0,) * 5
        assert is_primitive(matrix.apply(k1))


def test_adapted_basis_requires_rank_one():
    full = IntMatrix([[1, 0, 0], [0, 1, 0], [0, 0, 0], [0, 0, 0], [0, 0, 0]])
    with pytest.raises(PeripheralError, match="kernel rank"):
        adapted_basis(full)


def test_adapted_basis_requires_summand_image():
    doubled = rank1_matrix(5, 0, 0, value=2)
    with pytest.raises(PeripheralError, match="direct summand"):
        adapted_basis(doubled)


def test_adapted_basis_deterministic():
    matrix = IntMatrix([[2, 4, 1], [0, 0, 0], [4, 8, 2], [0, 0, 0], [6, 12, 3]])
    assert adapted_basis(matrix) == adapted_basis(matrix)
    k1, k2, k3 = adapted_basis(matrix)
    assert is_primitive(matrix.apply(k1))
    assert matrix.apply(k2) == (0,) * 5 and matrix.apply(k3) == (0,) * 5


def test_slope_identity_and_primitivity():
    basis = adapted_basis(rank1_matrix(5, 0, 0))
    assert slope(basis, 0, 0) == basis[0]
    for b in range(-10, 10):
        for c in range(-10, 10):
            assert is_primitive(slope(basis, b, c))


def test_slope_image_constant(census_m):
    matrix = peripheral_matrix(census_m, 2)
    basis = adapted_basis(matrix)
    expected = matrix.apply(basis[0])
    for b, c in ((0, 0), (3, -7), (-50, 50), (11, 13)):
        assert matrix.apply(slope(basis, b, c)) == expected


# ---------------------------------------------------------------------------
# The assembled system.


def test_peripheral_system_of_m(census_m):
    system = peripheral_system(census_m)
    assert system.cusp_count == 5
    assert (system.ambient_h1.free_rank, system.ambient_h1.torsion) == (5, ())
    assert system.cube_counts == (4, 4, 4, 4, 32)
    assert generates(system.epsilons, 5)
    assert IntMatrix.from_columns(system.epsilons).det() in (1, -1)
    for eps in system.epsilons:
        assert is_primitive(eps)


def test_peripheral_system_rejects_n(census_n):
    with pytest.raises(PeripheralError, match="orientation double cover"):
        peripheral_system(census_n)


def test_report_golden(census_m):
    golden = pathlib.Path(__file__).parent / "data" / "peripheral_1011.txt"
    assert report(peripheral_system(census_m)) == golden.read_text()
