"""Cusp cross sections and their abelianized peripheral maps.

The boundary of a glued-up truncated polytope is a disjoint union of
flat 3-manifolds, one per ideal vertex cycle.  This module carves those
components out of a quotient complex as honest subcomplexes, computes
the map H_1(section) -> H_1(ambient) induced by inclusion, and builds
adapted bases (kappa_1, kappa_2, kappa_3) of each section's H_1 in
which the inclusion has the simplest possible shape: kappa_1 maps to a
primitive class epsilon_i and kappa_2, kappa_3 span the kernel.  Dehn
filling homology then reduces to a small cokernel (see filling).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .chains import ChainComplex, ChainMap, homology, induced_h1
from .gluing import QuotientComplex, geometry, vertex_cycles
from .intlinalg import AbelianGroup, IntMatrix, generates, kernel_basis, snf

Vector = tuple[int, ...]
AdaptedBasis = tuple[Vector, Vector, Vector]


class PeripheralError(ValueError):
    """A quotient complex fails a hypothesis of the peripheral setup."""


@dataclass(frozen=True, eq=False)
class CuspSection:
    """One boundary component of a quotient complex.

    ``cells[k]`` lists the ambient quotient cell indices forming the
    section in dimension k; ``chain`` is the section's own complex in
    the same cell order and ``inclusion`` the chain map back into the
    ambient complex.  ``cube_count`` is the number of top-dimensional
    (cubical) cells, which equals the section's covolume in units of a
    cross-section cube.  ``ambient`` keeps the quotient complex the
    section was carved from, so geometric consumers can reach the
    side-pairing maps behind each cell identification.
    """

    index: int
    cells: tuple[tuple[int, ...], ...]
    chain: ChainComplex
    inclusion: ChainMap
    cube_count: int
    ambient: QuotientComplex


@lru_cache(maxsize=8)
def cusp_sections(q: QuotientComplex) -> tuple[CuspSection, ...]:
    """Connected components of the boundary subcomplex, in cusp order.

    Components are matched against the ideal vertex cycles of the
    side-pairing and returned in the cycles' canonical order (cycles
    sorted by size then smallest member), so the short unit-vector
    cycles come first and the large half-integer cycle last.

    Raises:
        PeripheralError: if the boundary components fail to biject with
            the vertex cycles, which would mean the complex was not
            built by the gluing module's conventions.
    """
    geo = geometry(q.geometry_name)
    model = geo.model
    bdim = q.top_dim - 1

    parent: dict[tuple[int, int], tuple[int, int]] = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k in range(bdim + 1):
        for i, flagged in enumerate(q.boundary_flags[k]):
            if flagged:
                parent[(k, i)] = (k, i)
    for k in range(1, bdim + 1):
        for i, flagged in enumerate(q.boundary_flags[k]):
            if not flagged:
                continue
            copy, idx = q.representatives[k][i]
            for sub, _ in model.boundary_entries[k][idx]:
                j, _ = q.orbit_index[k - 1][(copy, sub)]
                a, b = find((k, i)), find((k - 1, j))
                if a != b:
                    parent[max(a, b)] = min(a, b)

    groups: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for key in parent:
        groups.setdefault(find(key), []).append(key)

    cycles = vertex_cycles(q.spec)
    by_cycle: dict[tuple, dict[int, list[int]]] = {}
    for members in groups.values():
        comp: dict[int, list[int]] = {}
        for k, i in members:
            comp.setdefault(k, []).append(i)
        tags = []
        for i in comp.get(bdim, ()):
            label = q.cell_label(bdim, i)
            if label[1] != "vertex":
                raise PeripheralError("boundary 3-cell is not a vertex cube")
            tags.append(label[2] if q.copies == 1 else (label[0], label[2]))
        by_cycle[tuple(sorted(tags))] = comp
    if sorted(by_cycle) != sorted(cycles):
        raise PeripheralError(
            f"boundary components do not match the ideal vertex cycles: "
            f"{len(by_cycle)} components for {len(cycles)} cycles")

    sections = []
    for ci, cycle in enumerate(cycles):
        comp = by_cycle[cycle]
        cells = tuple(tuple(sorted(comp.get(k, ()))) for k in range(bdim + 1))
        local = [{a: j for j, a in enumerate(cells[k])} for k in range(bdim + 1)]
        boundaries = [IntMatrix([[] for _ in range(0)], cols=len(cells[0]))]
        for k in range(1, bdim + 1):
            rows = [[0] * len(cells[k]) for _ in range(len(cells[k - 1]))]
            for j, a in enumerate(cells[k]):
                for r, coeff in enumerate(q.chain.boundary[k].column(a)):
                    if coeff:
                        rows[local[k - 1][r]][j] = coeff
            boundaries.append(IntMatrix(rows, cols=len(cells[k])))
        labels = tuple(tuple(q.chain.cell_labels[k][a] for a in cells[k])
                       for k in range(bdim + 1))
        chain = ChainComplex(boundary=tuple(boundaries), cell_labels=labels)
        maps = []
        for k in range(bdim + 1):
            cols = [[0] * len(cells[k]) for _ in range(q.chain.cell_count(k))]
            for j, a in enumerate(cells[k]):
                cols[a][j] = 1
            maps.append(IntMatrix(cols, cols=len(cells[k])))
        sections.append(CuspSection(
            index=ci,
            cells=cells,
            chain=chain,
            inclusion=ChainMap(source=chain, target=q.chain, maps=tuple(maps)),
            cube_count=len(cells[bdim]),
            ambient=q,
        ))
    return tuple(sections)


def peripheral_matrix(q: QuotientComplex, i: int) -> IntMatrix:
    """Matrix of the inclusion-induced map H_1(section i) -> H_1(ambient).

    Columns run over the canonical free generators of the section's H_1,
    rows over the ambient's.  Torsion on either side is unsupported: the
    downstream adapted-basis procedure needs a 3-torus section inside an
    ambient complex with free H_1.

    Raises:
        PeripheralError: cusp index out of range, or torsion present.
    """
    sections = cusp_sections(q)
    if not 0 <= i < len(sections):
        raise PeripheralError(f"cusp index {i} out of range: {len(sections)} cusps")
    ind = induced_h1(sections[i].inclusion)
    if ind.source_group.torsion:
        raise PeripheralError(
            f"cusp {i} section has H_1 = {ind.source_group}; adapted bases need a "
            f"torsion-free section (a 3-torus cross section)")
    if ind.target_group.torsion:
        raise PeripheralError(
            f"ambient H_1 = {ind.target_group} has torsion; peripheral matrices "
            f"are defined against a free ambient H_1")
    return ind.free


def _det3(u: Vector, v: Vector, w: Vector) -> int:
    return (u[0] * (v[1] * w[2] - v[2] * w[1])
            - u[1] * (v[0] * w[2] - v[2] * w[0])
            + u[2] * (v[0] * w[1] - v[1] * w[0]))


def adapted_basis(matrix: IntMatrix) -> AdaptedBasis:
    """A basis (kappa_1, kappa_2, kappa_3) of Z^3 adapted to the map.

    kappa_2 and kappa_3 are the canonical kernel basis; kappa_1 completes
    them to a unimodular basis and maps to a primitive class.  kappa_1 is
    pinned down by reducing against the kernel's Hermite rows and fixing
    the image's leading sign, so equal matrices give equal bases.

    Raises:
        PeripheralError: if the kernel rank is not 2 or the image is not
            a direct summand (both required by the surgery step).
    """
    if matrix.cols != 3:
        raise PeripheralError(f"peripheral matrix must have 3 columns, has {matrix.cols}")
    ker = kernel_basis(matrix)
    if ker.cols != 2:
        raise PeripheralError(
            f"kernel rank {ker.cols} != 2: the surgery procedure needs a rank-1 "
            f"peripheral image")
    decomp = snf(matrix)
    if decomp.D.diagonal_entries()[0] != 1:
        raise PeripheralError("peripheral image is not a direct summand of the "
                              "ambient H_1; no adapted basis exists")
    kappa1 = list(decomp.V.column(0))
    image = matrix.apply(kappa1)
    if next(x for x in image if x != 0) < 0:
        kappa1 = [-x for x in kappa1]
    for j in range(ker.cols):
        row = list(ker.column(j))
        p = next(i for i, x in enumerate(row) if x != 0)
        if row[p] < 0:
            row = [-x for x in row]
        shift = kappa1[p] // row[p]
        kappa1 = [x - shift * y for x, y in zip(kappa1, row)]
    basis = (tuple(kappa1), ker.column(0), ker.column(1))
    assert _det3(*basis) in (1, -1)
    return basis


def slope(basis: AdaptedBasis, b: int, c: int) -> Vector:
    """The filling class kappa_1 + b kappa_2 + c kappa_3.

    Always primitive: it extends the kernel pair to a basis of Z^3 with
    the same determinant as the adapted basis itself.
    """
    k1, k2, k3 = basis
    return tuple(x + b * y + c * z for x, y, z in zip(k1, k2, k3))


@dataclass(frozen=True)
class PeripheralSystem:
    """The full peripheral package of a quotient with torus cusps.

    ``matrices[i]`` is the inclusion-induced map of cusp i in canonical
    H_1 coordinates, ``bases[i]`` its adapted basis and ``epsilons[i]``
    the image of kappa_1, a primitive ambient class.  The epsilons are
    checked to generate the ambient H_1.
    """

    ambient_h1: AbelianGroup
    matrices: tuple[IntMatrix, ...]
    bases: tuple[AdaptedBasis, ...]
    epsilons: tuple[Vector, ...]
    cube_counts: tuple[int, ...]
    section_h1: tuple[AbelianGroup, ...]

    @property
    def cusp_count(self) -> int:
        return len(self.matrices)


def peripheral_system(q: QuotientComplex) -> PeripheralSystem:
    """Compute matrices, adapted bases and epsilon classes for all cusps.

    Raises:
        PeripheralError: on torsion anywhere, a cusp of the wrong rank,
            or epsilon classes failing to generate the ambient H_1.
    """
    sections = cusp_sections(q)
    ambient = homology(q.chain, 1)
    if ambient.torsion:
        raise PeripheralError(
            f"ambient H_1 = {ambient} has torsion; the peripheral system needs "
            f"free ambient H_1 (pass the orientation double cover)")
    matrices, bases, epsilons, section_groups = [], [], [], []
    for i, section in enumerate(sections):
        matrix = peripheral_matrix(q, i)
        basis = adapted_basis(matrix)
        matrices.append(matrix)
        bases.append(basis)
        epsilons.append(matrix.apply(basis[0]))
        section_groups.append(homology(section.chain, 1))
    if not generates(epsilons, ambient.free_rank):
        raise PeripheralError("the adapted classes' images do not generate the "
                              "ambient H_1")
    return PeripheralSystem(
        ambient_h1=ambient,
        matrices=tuple(matrices),
        bases=tuple(bases),
        epsilons=tuple(epsilons),
        cube_counts=tuple(s.cube_count for s in sections),
        section_h1=tuple(section_groups),
    )


def report(system: PeripheralSystem) -> str:
    """Stable text rendering of the system, suitable for golden files."""
    lines = [f"ambient H1 = {system.ambient_h1}"]
    for i in range(system.cusp_count):
        lines.append(f"cusp {i + 1}: cubes {system.cube_counts[i]}, "
                     f"section H1 = {system.section_h1[i]}")
        matrix = system.matrices[i]
        for r in range(matrix.rows):
            lines.append("  L " + " ".join(f"{x:3d}" for x in matrix.row(r)))
        for name, vec in zip(("kappa1", "kappa2", "kappa3"), system.bases[i]):
            lines.append(f"  {name} = ({', '.join(str(x) for x in vec)})")
        lines.append(f"  epsilon = ({', '.join(str(x) for x in system.epsilons[i])})")
    return "\n".join(lines) + "\n"
