"""Side-pairings of a polytope and their quotient CW complexes.

A side-pairing matches the facets of a polytope in pairs, each pairing
carrying a vertex bijection of the glued facets.  This module ingests
such pairings, builds the quotient CW complex with exact integer boundary
matrices (propagating cell orientations through every identification),
computes ideal-vertex cycles, the orientation character, the orientation
double cover on two polytope copies, and the fundamental-polyhedron group
presentation with one relator per ridge cycle.

The main polytope is the truncated regular ideal 24-cell from
:mod:`dehn24.polytope`; pairings there are given on the six ideal
vertices of each octahedral facet and extended to the truncated cells.
A square and a cube are provided as low-dimensional geometries so the
identical machinery can be exercised on torus and Klein-bottle gluings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .chains import ChainComplex
from .intlinalg import AbelianGroup, IntMatrix, cokernel, kernel_basis

GEOMETRIES = ("ideal24", "square", "cube")


class GluingError(ValueError):
    """A side-pairing cannot be interpreted as requested."""


class PairingError(GluingError):
    """A pairing file or spec fails validation."""


@dataclass(frozen=True)
class Pairing:
    """One glued facet pair with its vertex bijection.

    ``vertex_map`` sends vertices of ``facet_a`` to vertices of
    ``facet_b``; the record also implicitly provides the inverse gluing
    from ``facet_b`` back.  Copy indices only matter for two-copy
    (double-cover) specs.
    """

    facet_a: int
    facet_b: int
    vertex_map: tuple[tuple[int, int], ...]
    copy_a: int = 0
    copy_b: int = 0

    def forward(self) -> dict[int, int]:
        return dict(self.vertex_map)

    def backward(self) -> dict[int, int]:
        return {w: v for v, w in self.vertex_map}

    def is_self_pairing(self) -> bool:
        return (self.copy_a, self.facet_a) == (self.copy_b, self.facet_b)


@dataclass(frozen=True)
class SidePairingSpec:
    """A full side-pairing: a perfect matching of all facet slots.

    ``copies`` is 1 for a plain quotient, 2 for a double-cover spec whose
    pairings reference (copy, facet) slots.
    """

    pairings: tuple[Pairing, ...]
    geometry: str = "ideal24"
    copies: int = 1
    metadata: tuple[tuple[str, str], ...] = ()

    def metadata_dict(self) -> dict[str, str]:
        return dict(self.metadata)


# ---------------------------------------------------------------------------
# Solid polytopes as regular CW complexes with exact boundary chains.


@dataclass(frozen=True, eq=False)
class CellModel:
    """A solid convex polytope with boundary chains for every cell.

    ``cells[k]`` lists k-cells as sorted vertex tuples; the last dimension
    holds the single body cell.  ``boundary_entries[k][i]`` is the sparse
    boundary chain of cell i as ((subcell index, coefficient), ...); the
    orientation convention is the fundamental cycle of each cell's
    boundary sphere, normalized to +1 on its least subcell.
    """

    dim: int
    cells: tuple[tuple[tuple[int, ...], ...], ...]
    boundary_entries: tuple[tuple[tuple[tuple[int, int], ...], ...], ...]
    cell_index: tuple[dict[tuple[int, ...], int], ...]

    def index_of(self, dim: int, vertices) -> int:
        try:
            return self.cell_index[dim][tuple(sorted(vertices))]
        except KeyError:
            raise GluingError(f"no {dim}-cell with vertex set {sorted(vertices)}") from None

    def boundary_matrix(self, k: int) -> IntMatrix:
        rows = len(self.cells[k - 1]) if k >= 1 else 0
        cols = [[0] * len(self.cells[k]) for _ in range(rows)]
        for j, entries in enumerate(self.boundary_entries[k]):
            for i, coeff in entries:
                cols[i][j] = coeff
        return IntMatrix(cols, cols=len(self.cells[k]))

    def body_facet_coefficients(self) -> dict[int, int]:
        """Coefficient of each facet in the body cell's boundary cycle."""
        return dict(self.boundary_entries[self.dim][0])


def build_cell_model(faces_by_dim) -> CellModel:
    """Compute boundary chains for a polytope given its face lists.

    Args:
        faces_by_dim: per dimension 0..D, the faces as sorted vertex
            tuples; dimension D must hold exactly the body cell.

    Subfaces are recognized by vertex-set containment, which is exact for
    faces of a convex polytope.  Each cell's boundary is the fundamental
    cycle of its boundary sphere, found as the rank-one kernel of the
    sphere's own boundary matrix; this keeps every orientation choice
    deterministic without any coordinate geometry.
    """
    dim = len(faces_by_dim) - 1
    cells = tuple(tuple(tuple(f) for f in faces_by_dim[k]) for k in range(dim + 1))
    index = tuple({f: i for i, f in enumerate(cells[k])} for k in range(dim + 1))
    boundary: list[tuple[tuple[tuple[int, int], ...], ...]] = [tuple(() for _ in cells[0])]

    for k in range(1, dim + 1):
        previous = boundary[k - 1]
        level = []
        for cell in cells[k]:
            members = set(cell)
            subs = [i for i, f in enumerate(cells[k - 1]) if members.issuperset(f)]
            if k == 1:
                a, b = cell
                level.append(((index[0][(a,)], -1), (index[0][(b,)], 1)))
                continue
            # Local chain complex of the boundary sphere of this cell.
            rows = sorted({i for s in subs for i, _ in previous[s]})
            row_pos = {r: t for t, r in enumerate(rows)}
            local = [[0] * len(subs) for _ in rows]
            for col, s in enumerate(subs):
                for r, coeff in previous[s]:
                    local[row_pos[r]][col] = coeff
            cycle = kernel_basis(IntMatrix(local, cols=len(subs)))
            if cycle.cols != 1:
                raise GluingError(f"boundary of a {k}-cell is not a sphere cycle")
            coeffs = cycle.column(0)
            if any(c not in (1, -1) for c in coeffs):
                raise GluingError(f"degenerate fundamental cycle on a {k}-cell")
            if coeffs[0] < 0:
                coeffs = tuple(-c for c in coeffs)
            level.append(tuple(sorted(zip(subs, coeffs))))
        boundary.append(tuple(level))

    return CellModel(dim=dim, cells=cells, boundary_entries=tuple(boundary), cell_index=index)


# ---------------------------------------------------------------------------
# Geometries: which polytope a spec refers to, and how spec-level facet
# bijections act on the model cells.


@dataclass(frozen=True, eq=False)
class Geometry:
    """Binding between spec-level facets and a concrete cell model."""

    name: str
    model: CellModel
    spec_vertex_count: int
    facet_vertices: tuple[tuple[int, ...], ...]
    facet_subcells: tuple[tuple[frozenset[int], ...], ...]
    model_facet: tuple[int, ...]
    labels: tuple[tuple[tuple[object, ...], ...], ...]
    boundary_mask: tuple[tuple[bool, ...], ...]
    extend_map: "callable"

    @property
    def facet_count(self) -> int:
        return len(self.facet_vertices)


@lru_cache(maxsize=None)
def geometry(name: str) -> Geometry:
    if name == "ideal24":
        return _ideal24_geometry()
    if name == "square":
        return _square_geometry()
    if name == "cube":
        return _cube_geometry()
    raise GluingError(f"unknown geometry {name!r}")


def _ideal24_geometry() -> Geometry:
    from .polytope import build_24cell, truncate

    base = build_24cell()
    trunc = truncate()
    model = build_cell_model(trunc.faces)

    edges = base.faces[1]
    triangles = base.faces[2]
    facet_subcells = []
    for members in base.faces[3]:
        s = set(members)
        subs = [frozenset(e) for e in edges if s.issuperset(e)]
        subs += [frozenset(t) for t in triangles if s.issuperset(t)]
        facet_subcells.append(tuple(subs))

    model_facet = tuple(trunc.troct_facet(o) for o in range(24))

    labels = tuple(tuple(trunc.provenance[k][i] for i in range(len(trunc.faces[k])))
                   for k in range(5))
    boundary_kinds = {"flag", "corner_edge", "vertex_facet", "vertex"}
    mask = tuple(tuple(lab[0] in boundary_kinds for lab in labels[k]) for k in range(5))

    edge_index = {frozenset(e): i for i, e in enumerate(edges)}

    def extend(pairing: Pairing) -> dict[int, int]:
        phi = pairing.forward()
        mapping = {}
        source = set(base.faces[3][pairing.facet_a])
        for (v, e), flag in trunc._flag_index.items():
            if v in source and set(edges[e]) <= source:
                image_edge = edge_index[frozenset(phi[w] for w in edges[e])]
                mapping[flag] = trunc.flag_index(phi[v], image_edge)
        return mapping

    return Geometry(
        name="ideal24",
        model=model,
        spec_vertex_count=24,
        facet_vertices=base.faces[3],
        facet_subcells=tuple(facet_subcells),
        model_facet=model_facet,
        labels=labels,
        boundary_mask=mask,
        extend_map=extend,
    )


def _identity_extension(pairing: Pairing) -> dict[int, int]:
    return pairing.forward()


def _square_geometry() -> Geometry:
    faces = (
        ((0,), (1,), (2,), (3,)),
        ((0, 1), (0, 3), (1, 2), (2, 3)),
        ((0, 1, 2, 3),),
    )
    model = build_cell_model(faces)
    labels = tuple(tuple(("cell", k, i) for i in range(len(faces[k]))) for k in range(3))
    mask = tuple(tuple(False for _ in faces[k]) for k in range(3))
    return Geometry(
        name="square",
        model=model,
        spec_vertex_count=4,
        facet_vertices=faces[1],
        facet_subcells=tuple(() for _ in faces[1]),
        model_facet=tuple(range(4)),
        labels=labels,
        boundary_mask=mask,
        extend_map=_identity_extension,
    )


def _cube_geometry() -> Geometry:
    # Vertex i has binary coordinates (i & 1, (i >> 1) & 1, (i >> 2) & 1).
    vertices = tuple((i,) for i in range(8))
    edges = tuple(sorted(tuple(sorted((i, i ^ bit))) for i in range(8)
                         for bit in (1, 2, 4) if i < i ^ bit))
    squares = []
    for axis in (1, 2, 4):
        for level in (0, 1):
            members = tuple(sorted(i for i in range(8)
                                   if (1 if i & axis else 0) == level))
            squares.append(members)
    faces = (vertices, edges, tuple(sorted(squares)), (tuple(range(8)),))
    model = build_cell_model(faces)
    square_edges = []
    for members in faces[2]:
        s = set(members)
        square_edges.append(tuple(frozenset(e) for e in edges if s.issuperset(e)))
    labels = tuple(tuple(("cell", k, i) for i in range(len(faces[k]))) for k in range(4))
    mask = tuple(tuple(False for _ in faces[k]) for k in range(4))
    return Geometry(
        name="cube",
        model=model,
        spec_vertex_count=8,
        facet_vertices=faces[2],
        facet_subcells=tuple(square_edges),
        model_facet=tuple(range(6)),
        labels=labels,
        boundary_mask=mask,
        extend_map=_identity_extension,
    )


# ---------------------------------------------------------------------------
# Validation and the pairing file format.


def validate_spec(spec: SidePairingSpec) -> None:
    """Check matching and facet-isomorphism conditions; raise PairingError."""
    geo = geometry(spec.geometry)
    if spec.copies not in (1, 2):
        raise PairingError("copies must be 1 or 2")
    seen: set[tuple[int, int]] = set()
    for p in spec.pairings:
        for copy, facet in ((p.copy_a, p.facet_a), (p.copy_b, p.facet_b)):
            if not 0 <= facet < geo.facet_count:
                raise PairingError(f"facet index {facet} out of range")
            if not 0 <= copy < spec.copies:
                raise PairingError(f"copy index {copy} out of range")
        slots = {(p.copy_a, p.facet_a), (p.copy_b, p.facet_b)}
        if slots & seen:
            raise PairingError(
                f"facet {tuple(sorted(slots & seen))[0]} appears in more than one pairing")
        seen |= slots
        _validate_bijection(geo, p)
    expected = spec.copies * geo.facet_count
    if len(seen) != expected:
        missing = [(c, f) for c in range(spec.copies) for f in range(geo.facet_count)
                   if (c, f) not in seen]
        raise PairingError(f"facets left unpaired: {missing[:4]}{'...' if len(missing) > 4 else ''}")


def _validate_bijection(geo: Geometry, p: Pairing) -> None:
    forward = p.forward()
    source = geo.facet_vertices[p.facet_a]
    target = geo.facet_vertices[p.facet_b]
    if p.is_self_pairing() and all(v == w for v, w in forward.items()):
        # Nontrivial self-maps are caught at quotient time; the identity
        # would silently glue nothing, so refuse it here.
        raise PairingError(f"facet {p.facet_a} glued to itself pointwise")
    if sorted(forward) != sorted(source):
        raise PairingError(
            f"bijection domain {sorted(forward)} is not facet {p.facet_a}'s vertex set")
    if sorted(forward.values()) != sorted(target):
        raise PairingError(
            f"bijection image is not facet {p.facet_b}'s vertex set")
    target_subcells = set(geo.facet_subcells[p.facet_b])
    for sub in geo.facet_subcells[p.facet_a]:
        image = frozenset(forward[v] for v in sub)
        if image not in target_subcells:
            raise PairingError(
                f"bijection sends face {sorted(sub)} of facet {p.facet_a} to the "
                f"non-face {sorted(image)} of facet {p.facet_b}")


def census_pairing() -> SidePairingSpec:
    """The bundled side-pairing of census manifold 1011 (code 14FF28)."""
    from importlib import resources

    text = resources.files("dehn24").joinpath("data/pairing_1011.txt").read_text("utf-8")
    return parse_pairing(text)


def parse_pairing(text: str) -> SidePairingSpec:
    """Parse a pairing file into a validated spec (24-cell geometry).

    Format: optional `key: value` metadata lines, `#` comments, then one
    record per pairing: ``facet_a facet_b ; v1->w1 ... v6->w6`` with the
    canonical facet and vertex indices of the 24-cell's face lattice.
    """
    metadata: list[tuple[str, str]] = []
    pairings: list[Pairing] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ";" not in line and ":" in line:
            key, value = line.split(":", 1)
            metadata.append((key.strip(), value.strip()))
            continue
        try:
            head, _, tail = line.partition(";")
            fa_str, fb_str = head.split()
            assignments = []
            for token in tail.split():
                v_str, _, w_str = token.partition("->")
                assignments.append((int(v_str), int(w_str)))
        except ValueError:
            raise PairingError(f"line {lineno}: cannot parse pairing record {line!r}") from None
        if len(assignments) != 6:
            raise PairingError(f"line {lineno}: expected 6 vertex assignments, "
                               f"got {len(assignments)}")
        pairings.append(Pairing(facet_a=int(fa_str), facet_b=int(fb_str),
                                vertex_map=tuple(sorted(assignments))))
    spec = SidePairingSpec(pairings=tuple(pairings), geometry="ideal24",
                           metadata=tuple(metadata))
    validate_spec(spec)
    return spec


def write_pairing(spec: SidePairingSpec) -> str:
    """Serialize a single-copy spec to the canonical pairing file text.

    Records are sorted by facet pair and vertex assignments by source
    vertex, so equal specs always produce byte-identical files.
    """
    if spec.copies != 1:
        raise GluingError("only single-copy specs have a file representation")
    lines = [f"{key}: {value}" for key, value in spec.metadata]
    records = []
    for p in spec.pairings:
        pairs = " ".join(f"{v}->{w}" for v, w in sorted(p.vertex_map))
        records.append((p.facet_a, p.facet_b, f"{p.facet_a} {p.facet_b} ; {pairs}"))
    lines.extend(text for _, _, text in sorted(records))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Vertex cycles.


def vertex_cycles(spec: SidePairingSpec):
    """Orbits of the polytope vertices under all pairing bijections.

    Returns a canonical partition: every cycle sorted, cycles ordered by
    (size, first member).  For a single-copy spec the members are vertex
    indices; for a two-copy spec they are (copy, vertex) pairs.
    """
    validate_spec(spec)
    geo = geometry(spec.geometry)
    elements = [(c, v) for c in range(spec.copies) for v in range(geo.spec_vertex_count)]
    parent = {e: e for e in elements}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in spec.pairings:
        for v, w in p.vertex_map:
            a, b = find((p.copy_a, v)), find((p.copy_b, w))
            if a != b:
                parent[max(a, b)] = min(a, b)

    groups: dict[tuple[int, int], list] = {}
    for e in elements:
        groups.setdefault(find(e), []).append(e)
    cycles = sorted((sorted(g) for g in groups.values()), key=lambda g: (len(g), g[0]))
    if spec.copies == 1:
        return tuple(tuple(v for _, v in g) for g in cycles)
    return tuple(tuple(g) for g in cycles)


# ---------------------------------------------------------------------------
# Orientation bookkeeping.


def _map_sign(model: CellModel, dim: int, source: int, mapping: dict[int, int],
              memo: dict[tuple[int, int], tuple[int, int]]) -> tuple[int, int]:
    """Target cell and orientation sign of a combinatorial cell map.

    ``mapping`` must cover the source cell's vertices.  The sign compares
    the pushed-forward boundary chain with the target cell's own chain;
    both are fundamental cycles, so they agree up to a global sign.
    """
    key = (dim, source)
    if key in memo:
        return memo[key]
    target = model.index_of(dim, (mapping[v] for v in model.cells[dim][source]))
    if dim == 0:
        memo[key] = (target, 1)
        return memo[key]
    pushed: dict[int, int] = {}
    for sub, coeff in model.boundary_entries[dim][source]:
        sub_target, sub_sign = _map_sign(model, dim - 1, sub, mapping, memo)
        pushed[sub_target] = pushed.get(sub_target, 0) + coeff * sub_sign
    reference = dict(model.boundary_entries[dim][target])
    first = min(reference)
    sign = 1 if pushed[first] == reference[first] else -1
    if pushed != {c: sign * x for c, x in reference.items()}:
        raise GluingError("vertex bijection does not extend to a cell isomorphism")
    memo[key] = (target, sign)
    return memo[key]


@dataclass(frozen=True)
class OrientationCharacter:
    """Orientation behavior of each side-pairing generator.

    ``signs[i]`` is +1 iff pairing i extends to an orientation-preserving
    map of the polytope across the glued facet; the quotient is
    orientable iff consistent polytope orientations exist, in which case
    every sign is +1.
    """

    signs: tuple[int, ...]
    orientable: bool


def _facet_gluing_signs(spec: SidePairingSpec) -> list[int]:
    """Per pairing: sign relating fixed per-copy orientations across the glue.

    Computed as -(omega_a * omega_b * facet map sign), where omega is the
    coefficient of each facet in the body cell's fundamental boundary
    cycle: two cells glued along a facet induce opposite boundary
    orientations on it exactly when the gluing respects orientation.
    """
    geo = geometry(spec.geometry)
    model = geo.model
    omega = model.body_facet_coefficients()
    signs = []
    for p in spec.pairings:
        mapping = geo.extend_map(p)
        fa = geo.model_facet[p.facet_a]
        fb = geo.model_facet[p.facet_b]
        target, sign = _map_sign(model, model.dim - 1, fa, mapping, {})
        assert target == fb
        signs.append(-omega[fa] * omega[fb] * sign)
    return signs


def orientation_character(spec: SidePairingSpec) -> OrientationCharacter:
    """Orientation sign per generator and orientability of the quotient."""
    validate_spec(spec)
    signs = _facet_gluing_signs(spec)
    # The quotient is orientable iff the polytope copies admit +-1 labels
    # with label_a * label_b = sign for every pairing.
    label = {0: 1}
    orientable = True
    pending = list(range(len(spec.pairings)))
    while pending and orientable:
        progressed = False
        for i in list(pending):
            p = spec.pairings[i]
            la = label.get(p.copy_a)
            lb = label.get(p.copy_b)
            if la is None and lb is None:
                continue
            if la is not None and lb is not None:
                if la * lb != signs[i]:
                    orientable = False
            elif la is not None:
                label[p.copy_b] = la * signs[i]
            else:
                label[p.copy_a] = lb * signs[i]
            pending.remove(i)
            progressed = True
        if not progressed:
            break
    if orientable and pending:
        # Disconnected copy graph cannot occur for validated full matchings
        # with copies <= 2; treat leftovers as independently labeled.
        orientable = all(signs[i] == 1 for i in pending)
    reported = tuple(1 for _ in signs) if orientable else tuple(signs)
    return OrientationCharacter(signs=reported, orientable=orientable)


def double_cover(spec: SidePairingSpec) -> SidePairingSpec:
    """The orientation double cover as a two-copy side-pairing.

    Orientation-preserving generators glue within each copy;
    orientation-reversing ones cross between the copies (the second copy
    plays the mirror-image polytope).

    Raises:
        GluingError: if the quotient is already orientable, where the
            construction would just produce two disjoint pieces.
    """
    if spec.copies != 1:
        raise GluingError("double cover expects a single-copy spec")
    character = orientation_character(spec)
    if character.orientable:
        raise GluingError("quotient is orientable; its orientation double cover "
                          "would be disconnected")
    doubled = []
    for p, sign in zip(spec.pairings, character.signs):
        if sign == 1:
            doubled.append(Pairing(p.facet_a, p.facet_b, p.vertex_map, 0, 0))
            doubled.append(Pairing(p.facet_a, p.facet_b, p.vertex_map, 1, 1))
        else:
            doubled.append(Pairing(p.facet_a, p.facet_b, p.vertex_map, 0, 1))
            doubled.append(Pairing(p.facet_a, p.facet_b, p.vertex_map, 1, 0))
    metadata = spec.metadata + (("cover", "orientation double cover"),)
    return SidePairingSpec(pairings=tuple(doubled), geometry=spec.geometry,
                           copies=2, metadata=metadata)


# ---------------------------------------------------------------------------
# The quotient complex.


class _Orbits:
    """Union-find on (copy, cell) keys carrying vertex maps and signs.

    ``to_root`` composes the vertex bijections along the identification
    path, so closing a loop with a nontrivial self-map of a cell (an
    orbifold-like gluing) is detected exactly.
    """

    def __init__(self):
        self.parent: dict = {}
        self.to_root_map: dict = {}
        self.to_root_sign: dict = {}

    def add(self, key) -> None:
        if key not in self.parent:
            self.parent[key] = key
            self.to_root_map[key] = None  # identity
            self.to_root_sign[key] = 1

    def find(self, key):
        path = []
        while self.parent[key] != key:
            path.append(key)
            key = self.parent[key]
        mapping = None
        sign = 1
        for node in reversed(path):
            mapping = _compose(self.to_root_map[node], mapping)
            sign *= self.to_root_sign[node]
            self.parent[node] = key
            self.to_root_map[node] = mapping
            self.to_root_sign[node] = sign
        # Recompute per-node data relative to the root for the caller.
        return key

    def relation(self, key):
        root = self.find(key)
        return root, self.to_root_map[key], self.to_root_sign[key]

    def union(self, ka, kb, mapping: dict[int, int], sign: int) -> None:
        ra, ma, sa = self.relation(ka)
        rb, mb, sb = self.relation(kb)
        # Induced map between roots: root_a -> a -> b -> root_b.
        induced = _compose(_compose(_invert(ma), mapping), mb)
        induced_sign = sa * sign * sb
        if ra == rb:
            if not _is_identity(induced):
                raise GluingError("side-pairing identifies a cell with itself by a "
                                  "nontrivial symmetry; the quotient is not a CW complex")
            return
        self.parent[ra] = rb
        self.to_root_map[ra] = induced
        self.to_root_sign[ra] = induced_sign


def _compose(first: dict | None, second: dict | None) -> dict | None:
    """Apply ``first`` then ``second`` (either may be None for identity)."""
    if first is None:
        return None if second is None else dict(second)
    if second is None:
        return dict(first)
    return {v: second[w] for v, w in first.items()}


def _invert(mapping: dict | None) -> dict | None:
    return None if mapping is None else {w: v for v, w in mapping.items()}


def _is_identity(mapping: dict | None) -> bool:
    return mapping is None or all(v == w for v, w in mapping.items())


@dataclass(frozen=True, eq=False)
class QuotientComplex:
    """The quotient CW complex of a side-pairing.

    ``chain`` is the underlying chain complex; its cell labels carry the
    provenance (copy, original face data) of each orbit representative.
    ``boundary_flags[k][i]`` marks quotient cells lying in the manifold
    boundary (the cubical cells of the truncated polytope).
    """

    spec: SidePairingSpec
    geometry_name: str
    copies: int
    chain: ChainComplex
    representatives: tuple[tuple[tuple[int, int], ...], ...]
    orbit_index: tuple[dict[tuple[int, int], tuple[int, int]], ...]
    boundary_flags: tuple[tuple[bool, ...], ...]
    maps_to_rep: tuple[dict[tuple[int, int], dict[int, int] | None], ...] = field(repr=False)

    @property
    def top_dim(self) -> int:
        return self.chain.top_dim

    def cell_label(self, dim: int, index: int):
        return self.chain.cell_labels[dim][index]


def quotient_complex(spec: SidePairingSpec, copies: int = 1) -> QuotientComplex:
    """Glue the polytope (or two copies of it) along the side-pairing.

    With ``copies=2`` a single-copy spec is first lifted to its
    orientation double cover; a spec already on two copies is used as is.

    Returns a complex whose boundary matrices satisfy d d = 0 by
    construction; orientation reversals are not an error (they simply
    show up in homology), but identifying a cell with itself through a
    nontrivial symmetry raises GluingError.
    """
    if copies not in (1, 2):
        raise GluingError("copies must be 1 or 2")
    if spec.copies == 1 and copies == 2:
        spec = double_cover(spec)
    elif spec.copies != copies:
        raise GluingError(f"spec has {spec.copies} copies, requested {copies}")
    validate_spec(spec)
    geo = geometry(spec.geometry)
    model = geo.model
    top = model.dim

    orbits = [_Orbits() for _ in range(top + 1)]
    for k in range(top + 1):
        for c in range(spec.copies):
            for i in range(len(model.cells[k])):
                orbits[k].add((c, i))

    facet_cells = _facet_cell_cache(geo)
    for p in spec.pairings:
        mapping = geo.extend_map(p)
        memo: dict[tuple[int, int], tuple[int, int]] = {}
        for dim, idx in facet_cells[p.facet_a]:
            target, sign = _map_sign(model, dim, idx, mapping, memo)
            cell_map = {v: mapping[v] for v in model.cells[dim][idx]}
            orbits[dim].union((p.copy_a, idx), (p.copy_b, target), cell_map, sign)

    representatives = []
    orbit_index = []
    maps_to_rep = []
    for k in range(top + 1):
        groups: dict = {}
        for key in orbits[k].parent:
            root = orbits[k].find(key)
            groups.setdefault(root, []).append(key)
        reps = sorted(min(members) for members in groups.values())
        rep_of_root = {orbits[k].find(rep): rep for rep in reps}
        index_of_rep = {rep: i for i, rep in enumerate(reps)}
        table = {}
        rep_maps = {}
        for key in orbits[k].parent:
            root, key_map, key_sign = orbits[k].relation(key)
            rep = rep_of_root[root]
            _, rep_map, rep_sign = orbits[k].relation(rep)
            # map key -> rep through the root.
            full = _compose(key_map, _invert(rep_map))
            table[key] = (index_of_rep[rep], key_sign * rep_sign)
            rep_maps[key] = full
        representatives.append(tuple(reps))
        orbit_index.append(table)
        maps_to_rep.append(rep_maps)

    boundary_matrices = [IntMatrix([[] for _ in range(0)], cols=len(representatives[0]))]
    for k in range(1, top + 1):
        rows = len(representatives[k - 1])
        cols = [[0] * len(representatives[k]) for _ in range(rows)]
        for j, (copy, idx) in enumerate(representatives[k]):
            for sub, coeff in model.boundary_entries[k][idx]:
                q, sign = orbit_index[k - 1][(copy, sub)]
                cols[q][j] += coeff * sign
        boundary_matrices.append(IntMatrix(cols, cols=len(representatives[k])))

    labels = tuple(
        tuple((copy,) + tuple(geo.labels[k][idx]) for copy, idx in representatives[k])
        for k in range(top + 1))
    flags = tuple(
        tuple(geo.boundary_mask[k][idx] for _, idx in representatives[k])
        for k in range(top + 1))

    return QuotientComplex(
        spec=spec,
        geometry_name=spec.geometry,
        copies=spec.copies,
        chain=ChainComplex(boundary=tuple(boundary_matrices), cell_labels=labels),
        representatives=tuple(representatives),
        orbit_index=tuple(orbit_index),
        boundary_flags=flags,
        maps_to_rep=tuple(maps_to_rep),
    )


@lru_cache(maxsize=None)
def _facet_cell_cache_by_name(name: str) -> tuple[tuple[tuple[int, int], ...], ...]:
    geo = geometry(name)
    model = geo.model
    out = []
    for f in range(geo.facet_count):
        facet_verts = set(model.cells[model.dim - 1][geo.model_facet[f]])
        cells = []
        for k in range(model.dim):
            for i, cell in enumerate(model.cells[k]):
                if facet_verts.issuperset(cell):
                    cells.append((k, i))
        out.append(tuple(cells))
    return tuple(out)


def _facet_cell_cache(geo: Geometry):
    return _facet_cell_cache_by_name(geo.name)


# ---------------------------------------------------------------------------
# Poincare polyhedron presentation.


@dataclass(frozen=True)
class Presentation:
    """Group presentation with one generator per pairing.

    Relators are words of signed 1-based generator indices (negative for
    inverses): ridge-cycle words, squares of self-paired generators, and
    one length-one word per spanning-tree crossing in the two-copy case.
    """

    generators: tuple[str, ...]
    relators: tuple[tuple[int, ...], ...]

    def abelianization(self) -> AbelianGroup:
        rows = len(self.generators)
        cols = []
        for word in self.relators:
            exponent = [0] * rows
            for letter in word:
                exponent[abs(letter) - 1] += 1 if letter > 0 else -1
            cols.append(exponent)
        if not cols:
            return AbelianGroup(rows)
        return cokernel(IntMatrix.from_columns(cols, rows=rows))

    def word_text(self, word: tuple[int, ...]) -> str:
        parts = []
        for letter in word:
            name = self.generators[abs(letter) - 1]
            parts.append(name if letter > 0 else f"{name}^-1")
        return " ".join(parts) if parts else "1"


def _generator_names(count: int) -> tuple[str, ...]:
    if count <= 26:
        return tuple(chr(ord("a") + i) for i in range(count))
    return tuple(f"x{i + 1}" for i in range(count))


def presentation(spec: SidePairingSpec) -> Presentation:
    """Fundamental-polyhedron presentation of the quotient's fundamental group.

    Generators are the side-pairing transformations; each ridge cycle of
    the polytope contributes the cyclic word of generators crossed while
    walking around the ridge.  Words are defined up to cyclic rotation,
    inversion and base-point conventions.
    """
    validate_spec(spec)
    geo = geometry(spec.geometry)
    model = geo.model
    top = model.dim

    slot_of_facet: dict[tuple[int, int], tuple[int, int]] = {}
    for i, p in enumerate(spec.pairings):
        slot_of_facet[(p.copy_a, geo.model_facet[p.facet_a])] = (i, 1)
        if not p.is_self_pairing():
            slot_of_facet[(p.copy_b, geo.model_facet[p.facet_b])] = (i, -1)

    paired_facets = {geo.model_facet[f] for p in spec.pairings
                     for f in (p.facet_a, p.facet_b)}
    ridge_facets: dict[int, tuple[int, ...]] = {}
    for r, cell in enumerate(model.cells[top - 2]):
        members = set(cell)
        incident = tuple(f for f in range(len(model.cells[top - 1]))
                         if set(model.cells[top - 1][f]).issuperset(members)
                         and f in paired_facets)
        if len(incident) == 2:
            ridge_facets[r] = incident

    extensions = {i: geo.extend_map(p) for i, p in enumerate(spec.pairings)}

    def step(state):
        copy, ridge, facet = state
        gen, direction = slot_of_facet[(copy, facet)]
        p = spec.pairings[gen]
        mapping = extensions[gen] if direction == 1 else _invert(extensions[gen])
        new_copy = p.copy_b if direction == 1 else p.copy_a
        arrival = geo.model_facet[p.facet_b if direction == 1 else p.facet_a]
        new_ridge = model.index_of(top - 2, (mapping[v] for v in model.cells[top - 2][ridge]))
        a, b = ridge_facets[new_ridge]
        next_facet = b if a == arrival else a
        assert arrival in (a, b)
        letter = gen + 1 if direction == 1 else -(gen + 1)
        return (new_copy, new_ridge, next_facet), letter

    visited: set = set()
    relators: list[tuple[int, ...]] = []
    limit = 2 * len(ridge_facets) * spec.copies + 2
    for copy in range(spec.copies):
        for ridge in sorted(ridge_facets):
            start = (copy, ridge, ridge_facets[ridge][0])
            if start in visited:
                continue
            word = []
            state = start
            for _ in range(limit):
                a, b = ridge_facets[state[1]]
                visited.add(state)
                visited.add((state[0], state[1], b if state[2] == a else a))
                state, letter = step(state)
                word.append(letter)
                if state == start:
                    break
            else:
                raise GluingError("ridge cycle failed to close")
            relators.append(tuple(word))

    for i, p in enumerate(spec.pairings):
        if p.is_self_pairing():
            relators.append((i + 1, i + 1))
    if spec.copies == 2:
        # Contract one crossing generator so the groupoid presents a group.
        tree_gen = next(i for i, p in enumerate(spec.pairings) if p.copy_a != p.copy_b)
        relators.append((tree_gen + 1,))

    return Presentation(generators=_generator_names(len(spec.pairings)),
                        relators=tuple(relators))
