"""Finite chain complexes over Z and their homology.

A complex stores one boundary matrix per dimension; homology is read off
Smith normal forms.  The generator cycles chosen for each homology group
follow a fixed convention (Smith form of the next boundary expressed in
the canonical kernel basis), so matrices of induced maps are reproducible
across runs and machines.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .intlinalg import (
    AbelianGroup,
    IntMatrix,
    kernel_basis,
    snf,
    solve_in_lattice,
)


@dataclass(frozen=True)
class ChainComplex:
    """A bounded chain complex of finitely generated free abelian groups.

    ``boundary[k]`` maps k-chains to (k-1)-chains; ``boundary[0]`` is the
    empty matrix with zero rows.  ``cell_labels[k]`` carries one opaque
    label per k-cell, purely for reporting.
    """

    boundary: tuple[IntMatrix, ...]
    cell_labels: tuple[tuple[object, ...], ...] = ()

    def __post_init__(self):
        if not self.boundary:
            raise ValueError("a complex needs at least dimension 0")
        if self.boundary[0].rows != 0:
            raise ValueError("boundary[0] must have zero rows")
        if self.cell_labels and len(self.cell_labels) != len(self.boundary):
            raise ValueError("cell_labels must cover every dimension")
        if self.cell_labels:
            for k, labels in enumerate(self.cell_labels):
                if len(labels) != self.boundary[k].cols:
                    raise ValueError(f"label count mismatch in dimension {k}")

    @property
    def top_dim(self) -> int:
        return len(self.boundary) - 1

    def cell_count(self, k: int) -> int:
        if 0 <= k <= self.top_dim:
            return self.boundary[k].cols
        return 0

    def boundary_or_zero(self, k: int) -> IntMatrix:
        """boundary[k], or the appropriate zero map just past the top."""
        if 0 <= k <= self.top_dim:
            return self.boundary[k]
        if k == self.top_dim + 1:
            return IntMatrix([[] for _ in range(self.cell_count(self.top_dim))], cols=0)
        raise ValueError(f"dimension {k} out of range")


def first_invalid(c: ChainComplex) -> tuple[int, int] | None:
    """Locate the first failure of d*d = 0, as a (dimension, cell) pair.

    The reported cell index is the column of boundary[k] whose composed
    boundary is nonzero.  Returns None when the complex is valid.
    """
    for k in range(1, c.top_dim + 1):
        if c.boundary[k].rows != c.boundary[k - 1].cols:
            return (k, 0)
        if k >= 2:
            composed = c.boundary[k - 1] * c.boundary[k]
            for j in range(composed.cols):
                if any(composed[i, j] != 0 for i in range(composed.rows)):
                    return (k, j)
    return None


def validate(c: ChainComplex) -> bool:
    """True iff dimensions chain correctly and every composite boundary is zero."""
    return first_invalid(c) is None


def euler_characteristic(c: ChainComplex) -> int:
    """Alternating sum of cell counts."""
    return sum((-1) ** k * c.cell_count(k) for k in range(c.top_dim + 1))


@dataclass(frozen=True)
class HomologyBasis:
    """Canonical generating cycles for one homology group.

    Generators are ordered free part first, then torsion in increasing
    invariant-factor order.  ``cycles`` holds one generating cycle per
    column, as a chain in the underlying complex.
    """

    group: AbelianGroup
    dim: int
    cycles: IntMatrix
    _kernel: IntMatrix = field(repr=False)
    _to_adapted: IntMatrix = field(repr=False)
    _orders: tuple[int, ...] = field(repr=False)
    _boundary: IntMatrix = field(repr=False)

    def coordinates(self, chain: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Coordinates of a cycle's homology class in this basis.

        Args:
            chain: a k-chain that must actually be a cycle.

        Returns:
            (free coordinates, torsion coordinates), torsion reduced into
            [0, d_i).

        Raises:
            ValueError: if the chain is not a cycle.
        """
        if any(x != 0 for x in self._boundary.apply(chain)):
            raise ValueError("chain is not a cycle")
        in_kernel = solve_in_lattice(self._kernel, chain)
        adapted = self._to_adapted.apply(in_kernel)
        free = tuple(adapted[i] for i, d in enumerate(self._orders) if d == 0)
        torsion = tuple(adapted[i] % d for i, d in enumerate(self._orders) if d >= 2)
        return free, torsion


@lru_cache(maxsize=64)
def homology_basis(c: ChainComplex, k: int) -> HomologyBasis:
    """Homology in dimension k together with its canonical generator cycles.

    Cached by value: complexes are immutable and repeat callers (induced
    maps, one call per cusp) would otherwise redo the same Smith forms.

    Raises:
        ValueError: if k is outside 0..top_dim.
    """
    if not 0 <= k <= c.top_dim:
        raise ValueError(f"dimension {k} out of range for a complex of top dimension {c.top_dim}")
    d_k = c.boundary[k]
    d_next = c.boundary_or_zero(k + 1)
    cycles = kernel_basis(d_k)
    z = cycles.cols
    # Express the image of the next boundary inside the cycle lattice; the
    # kernel is saturated, so the coefficients are integers.
    image_coords = IntMatrix.from_columns(
        [solve_in_lattice(cycles, d_next.column(j)) for j in range(d_next.cols)], rows=z)
    decomp = snf(image_coords)
    rank = decomp.rank
    factors = decomp.D.diagonal_entries()
    # Per adapted-basis position: 0 marks a free generator, 1 a killed one.
    orders = tuple(factors[i] if i < rank else 0 for i in range(z))
    adapted_cycles = cycles * decomp.u_inv
    generator_columns = [adapted_cycles.column(i) for i, d in enumerate(orders) if d == 0]
    generator_columns += [adapted_cycles.column(i) for i, d in enumerate(orders) if d >= 2]
    group = AbelianGroup(
        free_rank=sum(1 for d in orders if d == 0),
        torsion=tuple(d for d in orders if d >= 2),
    )
    return HomologyBasis(
        group=group,
        dim=k,
        cycles=IntMatrix.from_columns(generator_columns, rows=c.cell_count(k)),
        _kernel=cycles,
        _to_adapted=decomp.U,
        _orders=orders,
        _boundary=d_k,
    )


def homology(c: ChainComplex, k: int) -> AbelianGroup:
    """H_k(c; Z) in invariant-factor form."""
    return homology_basis(c, k).group


@dataclass(frozen=True)
class ChainMap:
    """A degreewise map of chain complexes, one matrix per dimension."""

    source: ChainComplex
    target: ChainComplex
    maps: tuple[IntMatrix, ...]

    def __post_init__(self):
        for k, f in enumerate(self.maps):
            if f.cols != self.source.cell_count(k) or f.rows != self.target.cell_count(k):
                raise ValueError(f"map dimensions wrong in degree {k}")

    def commutes(self) -> bool:
        """Check f d = d f in every degree where both sides exist."""
        for k in range(1, len(self.maps)):
            lhs = self.target.boundary[k] * self.maps[k]
            rhs = self.maps[k - 1] * self.source.boundary[k]
            if lhs != rhs:
                return False
        return True


@dataclass(frozen=True)
class InducedH1:
    """The H_1 functor applied to a chain map.

    Columns run over the source generators (free first, then torsion);
    ``free`` holds the coordinates in the target's free part and
    ``torsion`` those in the target's torsion part, reduced mod the
    invariant factors.
    """

    source_group: AbelianGroup
    target_group: AbelianGroup
    free: IntMatrix
    torsion: IntMatrix


def induced_h1(f: ChainMap) -> InducedH1:
    """Matrix of H_1(source) -> H_1(target) in the canonical bases.

    Raises:
        ValueError: if the map fails to commute with the boundaries.
    """
    if len(f.maps) < 2:
        raise ValueError("need matrices at least in degrees 0 and 1")
    if not f.commutes():
        raise ValueError("chain map does not commute with boundaries")
    source_basis = homology_basis(f.source, 1)
    target_basis = homology_basis(f.target, 1)
    free_cols = []
    torsion_cols = []
    for j in range(source_basis.cycles.cols):
        image_chain = f.maps[1].apply(source_basis.cycles.column(j))
        free, torsion = target_basis.coordinates(image_chain)
        free_cols.append(free)
        torsion_cols.append(torsion)
    return InducedH1(
        source_group=source_basis.group,
        target_group=target_basis.group,
        free=IntMatrix.from_columns(free_cols, rows=target_basis.group.free_rank),
        torsion=IntMatrix.from_columns(torsion_cols, rows=len(target_basis.group.torsion)),
    )
