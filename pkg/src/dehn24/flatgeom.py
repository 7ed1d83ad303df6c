"""Flat geometry of cusp cross sections.

A cross section carved out by :mod:`dehn24.peripheral` is an assembly
of unit cubes glued along their square faces.  Developing that gluing
in R^3 (place one cube, then propagate charts across shared faces)
either exposes rotational holonomy or exhibits the section as R^3
modulo a lattice of translations.  The lattice returned here is
*marked*: its three columns are the translations realized by the
section's canonical H_1 generators, so a slope class written in H_1
coordinates is measured against the basis the peripheral maps use.

All certified numerics are exact rational arithmetic: square roots are
enclosed with ``math.isqrt``, the exponential with a Taylor partial
sum plus a tail bound.  A comparison that the enclosures cannot decide
raises :class:`PrecisionError` instead of guessing.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor, isqrt
from typing import Iterable, Iterator, Sequence

from .chains import ChainMap, homology_basis
from .gluing import QuotientComplex, _compose, _invert, geometry
from .intlinalg import AbelianGroup, IntMatrix
from .peripheral import CuspSection

Vec3 = tuple[int, int, int]


class FlatGeometryError(ValueError):
    """A cross section or lattice request violates a structural hypothesis."""


class PrecisionError(ValueError):
    """The certified enclosures are too coarse to decide a comparison."""


# Certified bracket for 4*pi^2 = 39.4784176043574...; both comparisons in
# two_pi_ok are made against this closed interval, never against a float.
TWO_PI_SQUARED_LOW = Fraction("39.4784176043")
TWO_PI_SQUARED_HIGH = Fraction("39.4784176045")

_SQRT_SCALE = 10 ** 13


def _sqrt_enclosure(squared: Fraction) -> tuple[Fraction, Fraction]:
    """Rational lo <= sqrt(squared) <= hi with hi - lo <= 2/10^13."""
    scaled = squared * _SQRT_SCALE ** 2
    floor = scaled.numerator // scaled.denominator
    ceil = -((-scaled.numerator) // scaled.denominator)
    return (Fraction(isqrt(floor), _SQRT_SCALE),
            Fraction(isqrt(ceil) + 1, _SQRT_SCALE))


def _exp_enclosure(x: Fraction) -> tuple[Fraction, Fraction]:
    """Rational bounds on exp(x) for x >= 0.

    Partial Taylor sum; once n + 1 >= 2x the tail is dominated by a
    geometric series with ratio <= 1/2, so it is at most the last term.
    """
    if x < 0:
        raise ValueError("argument must be nonnegative")
    total = Fraction(1)
    term = Fraction(1)
    n = 0
    while True:
        n += 1
        term *= x / n
        total += term
        if n + 1 >= 2 * x and term * 10 ** 30 <= total:
            return total, total + term


def _det3(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


@dataclass(frozen=True)
class FlatLattice:
    """A marked translation lattice in R^3.

    Column j of ``basis`` is the developed translation of the j-th
    canonical H_1 generator of the section, so integer vectors in H_1
    coordinates (in particular slope classes) are measured directly.
    ``scale`` is the cross-section normalization: geometric lengths are
    ``scale`` times lattice lengths, so the default makes every
    cross-section cube a unit cube.
    """

    basis: tuple[tuple[Fraction, ...], ...]
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.basis)
        if len(rows) != 3 or any(len(row) != 3 for row in rows):
            raise FlatGeometryError("basis must be a 3 x 3 matrix")
        object.__setattr__(self, "basis", rows)
        object.__setattr__(self, "scale", Fraction(self.scale))
        if self.scale <= 0:
            raise FlatGeometryError("scale must be positive")
        if _det3(rows) == 0:
            raise FlatGeometryError("basis is singular")

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int | Fraction]],
                     scale: int | Fraction = 1) -> "FlatLattice":
        if len(columns) != 3 or any(len(c) != 3 for c in columns):
            raise FlatGeometryError("need three generator columns of length 3")
        rows = tuple(tuple(Fraction(columns[j][i]) for j in range(3)) for i in range(3))
        return cls(basis=rows, scale=Fraction(scale))

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(self.basis[i][j] for i in range(3))

    def gram(self) -> tuple[tuple[Fraction, ...], ...]:
        """Inner products of the generators (before scaling)."""
        cols = [self.column(j) for j in range(3)]
        return tuple(tuple(sum(a * b for a, b in zip(cols[i], cols[j]))
                           for j in range(3)) for i in range(3))

    def det(self) -> Fraction:
        return _det3(self.basis)

    def covolume(self) -> Fraction:
        """Volume of a fundamental domain, |det| * scale^3."""
        return abs(self.det()) * self.scale ** 3

    def dump(self) -> str:
        """Exact, byte-stable rendering: scale, then one generator per line."""
        lines = [f"scale: {self.scale}"]
        for j in range(3):
            lines.append(f"g{j + 1}: " + " ".join(str(x) for x in self.column(j)))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SlopeLength:
    """One measured slope: the class, its exact squared length, and a
    certified rational enclosure of the length itself."""

    slope: tuple[int, ...]
    squared: Fraction
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        object.__setattr__(self, "slope", tuple(int(x) for x in self.slope))
        object.__setattr__(self, "squared", Fraction(self.squared))
        object.__setattr__(self, "lower", Fraction(self.lower))
        object.__setattr__(self, "upper", Fraction(self.upper))
        if not 0 <= self.lower <= self.upper:
            raise FlatGeometryError("enclosure bounds out of order")
        if not self.lower ** 2 <= self.squared <= self.upper ** 2:
            raise FlatGeometryError("enclosure does not bracket the squared length")


SlopeLengths = tuple[SlopeLength, ...]


def slope_length(lattice: FlatLattice, v: Sequence[int]) -> SlopeLength:
    """Certified length of the lattice vector with coordinates v.

    The squared length scale^2 * v^T G v is exact; the length enclosure
    has width under 10^-12.

    Raises:
        FlatGeometryError: if v is zero or not a 3-vector.
    """
    if len(v) != 3:
        raise FlatGeometryError("slope classes are integer 3-vectors")
    if not any(v):
        raise FlatGeometryError("the zero class has no slope length")
    developed = [sum(lattice.basis[i][j] * v[j] for j in range(3)) for i in range(3)]
    squared = lattice.scale ** 2 * sum(x * x for x in developed)
    lower, upper = _sqrt_enclosure(squared)
    return SlopeLength(slope=tuple(v), squared=squared, lower=lower, upper=upper)


def slope_lengths(lattices: Sequence[FlatLattice],
                  classes: Sequence[Sequence[int]]) -> SlopeLengths:
    """Measure one slope class per cusp lattice, in order."""
    if len(lattices) != len(classes):
        raise FlatGeometryError(f"{len(lattices)} lattices but {len(classes)} classes")
    return tuple(slope_length(lat, v) for lat, v in zip(lattices, classes))


def enumerate_short(lattice: FlatLattice,
                    bound: int | Fraction) -> list[tuple[int, ...]]:
    """All nonzero classes with squared length strictly below ``bound``.

    A Gershgorin lower bound on the scaled Gram matrix gives a complete
    coordinate box when it is positive; otherwise an exact LDL^T
    decomposition drives a standard recursive enumeration.  Either way
    membership is decided by the exact quadratic form, and the output
    is sorted by (squared length, class).
    """
    bound = Fraction(bound)
    if bound <= 0:
        raise FlatGeometryError("bound must be positive")
    s2 = lattice.scale ** 2
    q = [[s2 * x for x in row] for row in lattice.gram()]

    def value(v: tuple[int, int, int]) -> Fraction:
        return sum(q[i][j] * v[i] * v[j] for i in range(3) for j in range(3))

    gershgorin = min(q[i][i] - sum(abs(q[i][j]) for j in range(3) if j != i)
                     for i in range(3))
    found = []
    if gershgorin > 0:
        radius = bound / gershgorin
        m = isqrt(radius.numerator // radius.denominator)
        while (m + 1) ** 2 < radius:
            m += 1
        while m >= 0 and m ** 2 >= radius:
            m -= 1
        span = range(-m, m + 1)
        for v in ((x, y, z) for x in span for y in span for z in span):
            if v != (0, 0, 0):
                val = value(v)
                if val < bound:
                    found.append((val, v))
    else:
        for v in _ldl_enumerate(q, bound):
            found.append((value(v), v))
    found.sort()
    return [v for _, v in found]


def _ldl_enumerate(q: list[list[Fraction]],
                   bound: Fraction) -> Iterator[tuple[int, int, int]]:
    """Exact Fincke-Pohst style search: v^T q v < bound, v nonzero."""
    s = [row[:] for row in q]
    d = []
    u = [[Fraction(0)] * 3 for _ in range(3)]
    for i in range(3):
        d.append(s[i][i])
        if d[i] <= 0:
            raise FlatGeometryError("quadratic form is not positive definite")
        for j in range(i + 1, 3):
            u[i][j] = s[i][j] / d[i]
        for k in range(i + 1, 3):
            for l in range(i + 1, 3):
                s[k][l] -= d[i] * u[i][k] * u[i][l]

    def span(center: Fraction, budget: Fraction, weight: Fraction) -> Iterable[int]:
        # Integers t with weight * (t + center)^2 <= budget, plus slack;
        # callers re-test exactly, so overshooting is harmless.
        if budget <= 0:
            return range(0)
        radius = budget / weight
        top = isqrt(-((-radius.numerator) // radius.denominator)) + 1
        lo = floor(-center) - top
        return range(lo, lo + 2 * top + 1)

    for v2 in span(Fraction(0), bound, d[2]):
        used2 = d[2] * v2 ** 2
        if used2 >= bound:
            continue
        c1 = u[1][2] * v2
        for v1 in span(c1, bound - used2, d[1]):
            used1 = used2 + d[1] * (v1 + c1) ** 2
            if used1 >= bound:
                continue
            c0 = u[0][1] * v1 + u[0][2] * v2
            for v0 in span(c0, bound - used1, d[0]):
                v = (v0, v1, v2)
                if v == (0, 0, 0):
                    continue
                if used1 + d[0] * (v0 + c0) ** 2 < bound:
                    yield v


def two_pi_ok(lengths: SlopeLengths) -> bool:
    """Whether every measured slope has length at least 2*pi.

    Each exact squared length is compared against the closed certified
    bracket [TWO_PI_SQUARED_LOW, TWO_PI_SQUARED_HIGH]: strictly below is
    a certified failure, strictly above a certified pass.

    Raises:
        PrecisionError: a squared length falls inside the bracket, where
            this enclosure of 4*pi^2 cannot decide the comparison.
        FlatGeometryError: no lengths given.
    """
    if not lengths:
        raise FlatGeometryError("no slope lengths given")
    if any(s.squared < TWO_PI_SQUARED_LOW for s in lengths):
        return False
    straddling = [s for s in lengths if s.squared <= TWO_PI_SQUARED_HIGH]
    if straddling:
        raise PrecisionError(
            f"squared length {straddling[0].squared} lies inside the 4*pi^2 "
            f"bracket [{TWO_PI_SQUARED_LOW}, {TWO_PI_SQUARED_HIGH}]; a tighter "
            f"enclosure is needed to decide")
    return True


def weakly_balanced(lengths: SlopeLengths, c: int | Fraction) -> bool:
    """Whether max length <= exp(c * min length^3), certified.

    Raises:
        PrecisionError: the length and exponential enclosures overlap
            so neither verdict is certified.
        FlatGeometryError: empty input or c <= 0.
    """
    if not lengths:
        raise FlatGeometryError("no slope lengths given")
    c = Fraction(c)
    if c <= 0:
        raise FlatGeometryError("balance constant must be positive")
    max_lo = max(s.lower for s in lengths)
    max_hi = max(s.upper for s in lengths)
    min_lo = min(s.lower for s in lengths)
    min_hi = min(s.upper for s in lengths)
    rhs_lo = _exp_enclosure(c * min_lo ** 3)[0]
    rhs_hi = _exp_enclosure(c * min_hi ** 3)[1]
    if max_hi <= rhs_lo:
        return True
    if max_lo > rhs_hi:
        return False
    raise PrecisionError(
        f"cannot separate max length in [{max_lo},{max_hi}] from the balance "
        f"bound in [{rhs_lo},{rhs_hi}]; a tighter enclosure is needed")


# ---------------------------------------------------------------------------
# Developing a cube assembly.


def closed_section(q: QuotientComplex) -> CuspSection:
    """Wrap a closed cubical 3-complex as a single all-of-it section.

    Lets small flat examples (a torus glued from one cube, say) run
    through the same developing machinery as genuine cusp sections.
    """
    if q.top_dim != 3:
        raise FlatGeometryError("need a quotient complex of top dimension 3")
    cells = tuple(tuple(range(q.chain.cell_count(k))) for k in range(4))
    maps = tuple(IntMatrix.identity(q.chain.cell_count(k)) for k in range(4))
    return CuspSection(
        index=0,
        cells=cells,
        chain=q.chain,
        inclusion=ChainMap(source=q.chain, target=q.chain, maps=maps),
        cube_count=q.chain.cell_count(3),
        ambient=q,
    )


def _cube_chart(model, idx: int) -> dict[int, Vec3]:
    """Coordinates in {0,1}^3 for the vertices of one combinatorial cube.

    The minimal vertex sits at the origin and its neighbors, in label
    order, along the axes; every face then lies in a coordinate plane.
    """
    verts = model.cells[3][idx]
    squares = [frozenset(model.cells[2][sq]) for sq, _ in model.boundary_entries[3][idx]]
    if len(verts) != 8 or len(squares) != 6 or any(len(s) != 4 for s in squares):
        raise FlatGeometryError(f"3-cell {idx} is not a combinatorial cube")
    origin = min(verts)
    containing = [s for s in squares if origin in s]
    shared = {g: sum(1 for s in containing if g in s) for g in verts if g != origin}
    neighbors = sorted(g for g, n in shared.items() if n == 2)
    if len(containing) != 3 or len(neighbors) != 3:
        raise FlatGeometryError(f"3-cell {idx} is not a combinatorial cube")
    planes = []
    for n in neighbors:
        omitting = [s for s in containing if n not in s]
        if len(omitting) != 1:
            raise FlatGeometryError(f"3-cell {idx} is not a combinatorial cube")
        planes.append(omitting[0])
    chart = {g: tuple(0 if g in planes[i] else 1 for i in range(3)) for g in verts}
    if len(set(chart.values())) != 8:
        raise FlatGeometryError(f"3-cell {idx} is not a combinatorial cube")
    return chart


def _face_normal(chart: dict[int, Vec3], face: Iterable[int]) -> Vec3:
    """Outward unit normal of a chart face lying in a coordinate plane."""
    coords = [chart[g] for g in face]
    for axis in range(3):
        values = {p[axis] for p in coords}
        if len(values) == 1:
            value = values.pop()
            normal = [0, 0, 0]
            normal[axis] = 1 if value == 1 else -1
            return tuple(normal)
    raise FlatGeometryError("face does not lie in a chart coordinate plane")


def _face_transition(chart_a: dict[int, Vec3], face_a: Sequence[int],
                     chart_b: dict[int, Vec3],
                     psi: dict[int, int] | None) -> tuple[IntMatrix, Vec3]:
    """The isometry T with T(chart_a point) = chart_b point across a face.

    Determined by three face vertices plus the requirement that the
    outward normal on one side map to the inward normal on the other.
    """
    image = (lambda g: g) if psi is None else psi.__getitem__
    qs = [chart_a[g] for g in face_a]
    ps = [chart_b[image(g)] for g in face_a]
    q0, p0 = qs[0], ps[0]
    edges = [k for k in range(1, 4)
             if sum((a - b) ** 2 for a, b in zip(qs[k], q0)) == 1]
    if len(edges) != 2:
        raise FlatGeometryError("face is not a chart unit square")
    n_a = _face_normal(chart_a, face_a)
    n_b = _face_normal(chart_b, [image(g) for g in face_a])
    q_cols = [tuple(a - b for a, b in zip(qs[k], q0)) for k in edges] + [n_a]
    p_cols = [tuple(a - b for a, b in zip(ps[k], p0)) for k in edges] + \
        [tuple(-x for x in n_b)]
    q_mat = IntMatrix.from_columns(q_cols, rows=3)
    linear = IntMatrix.from_columns(p_cols, rows=3) * q_mat.transpose()
    offset = tuple(a - b for a, b in zip(p0, linear.apply(q0)))
    for g in face_a:
        got = tuple(a + b for a, b in zip(linear.apply(chart_a[g]), offset))
        if got != chart_b[image(g)]:
            raise FlatGeometryError("face identification is not an isometry "
                                    "of the chart cubes")
    return linear, offset


@lru_cache(maxsize=32)
def _edge_vectors(section: CuspSection) -> tuple[Vec3, ...]:
    """Developed displacement of each section 1-cell, holonomy-corrected.

    Develops the section's cubes in R^3 by breadth-first chart
    propagation, then records for every quotient edge the displacement
    of its representative, measured relative to fixed reference
    positions of the quotient vertices.  Summing these over a 1-cycle
    gives the cycle's translational holonomy.

    Raises:
        FlatGeometryError: rotational holonomy (the section is not a
            torus), or a structural defect in the cube assembly.
    """
    q = section.ambient
    model = geometry(q.geometry_name).model

    owners: dict[int, int] = {}
    for key, (pos, _) in q.orbit_index[3].items():
        owners[pos] = owners.get(pos, 0) + 1
    for pos in section.cells[3]:
        if owners[pos] != 1:
            raise FlatGeometryError("3-cells of the section must be unidentified cubes")

    cube_keys = [q.representatives[3][pos] for pos in section.cells[3]]
    charts = {key: _cube_chart(model, key[1]) for key in cube_keys}

    members: dict[int, list[tuple[tuple[int, int], int]]] = {}
    for key in cube_keys:
        copy, idx = key
        for sq, _ in model.boundary_entries[3][idx]:
            pos, _sign = q.orbit_index[2][(copy, sq)]
            members.setdefault(pos, []).append((key, sq))

    adjacency: dict[tuple[int, int], list] = {key: [] for key in cube_keys}
    for pos in sorted(members):
        pair = sorted(members[pos])
        if len(pair) != 2:
            raise FlatGeometryError(
                f"boundary square glued {len(pair)} time(s); the section is "
                f"not a closed 3-manifold")
        (k1, s1), (k2, s2) = pair
        psi = _compose(q.maps_to_rep[2][(k1[0], s1)],
                       _invert(q.maps_to_rep[2][(k2[0], s2)]))
        linear, offset = _face_transition(charts[k1], model.cells[2][s1],
                                          charts[k2], psi)
        inv_linear = linear.transpose()
        inv_offset = tuple(-x for x in inv_linear.apply(offset))
        adjacency[k1].append((k2, linear, offset))
        adjacency[k2].append((k1, inv_linear, inv_offset))

    base = min(cube_keys)
    placements = {base: (IntMatrix.identity(3), (0, 0, 0))}
    queue = deque([base])
    while queue:
        k1 = queue.popleft()
        r1, t1 = placements[k1]
        for k2, linear, offset in adjacency[k1]:
            r2 = r1 * linear.transpose()
            t2 = tuple(a - b for a, b in zip(t1, r2.apply(offset)))
            if k2 not in placements:
                placements[k2] = (r2, t2)
                queue.append(k2)
            elif placements[k2][0] != r2:
                raise FlatGeometryError(
                    "cross section has rotational holonomy; not a torus")
    if len(placements) != len(cube_keys):
        raise FlatGeometryError("cross section is not connected")

    positions: dict[tuple[int, int], Vec3] = {}
    vertex_cube: dict[tuple[int, int], tuple[int, int]] = {}
    for key in cube_keys:
        rot, shift = placements[key]
        for g, coord in charts[key].items():
            positions[(key[0], g)] = tuple(
                a + b for a, b in zip(rot.apply(coord), shift))
            vertex_cube[(key[0], g)] = key

    references: dict[int, Vec3] = {}
    for vkey in sorted(positions):
        pos, _ = q.orbit_index[0][vkey]
        references.setdefault(pos, positions[vkey])

    vectors = []
    for orbit in section.cells[1]:
        copy, eidx = q.representatives[1][orbit]
        total = (0, 0, 0)
        for mv, coeff in model.boundary_entries[1][eidx]:
            vkey = (copy, mv)
            if vkey not in positions:
                raise FlatGeometryError("edge representative leaves the section cubes")
            rel = tuple(a - b for a, b in zip(
                positions[vkey], references[q.orbit_index[0][vkey][0]]))
            total = tuple(a + coeff * b for a, b in zip(total, rel))
        vectors.append(total)
    return tuple(vectors)


def section_holonomy(section: CuspSection, chain: Sequence[int]) -> Vec3:
    """Translational holonomy of a 1-cycle, in developed coordinates.

    Raises:
        FlatGeometryError: wrong length, not a cycle, or the section
            fails to develop (rotational holonomy, defects).
    """
    vectors = _edge_vectors(section)
    if len(chain) != len(vectors):
        raise FlatGeometryError(f"chain has {len(chain)} coefficients for "
                                f"{len(vectors)} section edges")
    if any(section.chain.boundary[1].apply(chain)):
        raise FlatGeometryError("chain is not a cycle")
    total = (0, 0, 0)
    for a, vec in zip(chain, vectors):
        if a:
            total = tuple(t + a * x for t, x in zip(total, vec))
    return total


def develop_lattice(section: CuspSection,
                    scale: int | Fraction = 1) -> FlatLattice:
    """The marked translation lattice of a 3-torus cross section.

    Column j is the holonomy of the j-th canonical H_1 generator, so
    slope classes in H_1 coordinates measure correctly.  The covolume
    equals the section's cube count times scale^3.

    Raises:
        FlatGeometryError: rotational holonomy ("not a torus"), H_1 not
            Z^3, or structural defects in the cube assembly.
    """
    _edge_vectors(section)
    basis = homology_basis(section.chain, 1)
    if basis.group != AbelianGroup(3):
        raise FlatGeometryError(f"section has H_1 = {basis.group}; developing "
                                f"a lattice needs a 3-torus")
    columns = [section_holonomy(section, basis.cycles.column(j)) for j in range(3)]
    lattice = FlatLattice.from_columns(columns, scale=scale)
    if abs(lattice.det()) != section.cube_count:
        raise FlatGeometryError(
            f"developed covolume {abs(lattice.det())} does not match the "
            f"cube count {section.cube_count}")
    return lattice
