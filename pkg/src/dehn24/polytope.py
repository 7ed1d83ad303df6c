"""Exact combinatorics of the regular ideal 24-cell and its truncation.

Vertices are the eight unit vectors ±e_i together with the sixteen
half-integer vectors (±1/2, ±1/2, ±1/2, ±1/2).  All incidence comes from
exact rational inner products: a vertex v lies on the facet with normal u
iff <u, v> = 1, and two vertices span an edge iff <v, w> = 1/2.  No
floating point is involved anywhere, so face indices are bit-stable.

Truncating chops every vertex, turning each octahedral facet into a
truncated octahedron and adding one cubical facet per original vertex
(the vertex figure of the 24-cell is a cube).  The truncation here is
purely combinatorial: its vertices are flags (vertex, incident edge) of
the original polytope.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

Coord = tuple[Fraction, Fraction, Fraction, Fraction]

HALF = Fraction(1, 2)


def _inner(a: Coord, b: Coord) -> Fraction:
    return sum(x * y for x, y in zip(a, b))


def _vertex_coordinates() -> tuple[Coord, ...]:
    points: list[Coord] = []
    for i in range(4):
        for s in (-1, 1):
            v = [Fraction(0)] * 4
            v[i] = Fraction(s)
            points.append(tuple(v))
    for signs in itertools.product((-HALF, HALF), repeat=4):
        points.append(tuple(signs))
    return tuple(sorted(points))


def _facet_normals() -> tuple[Coord, ...]:
    normals = []
    for i, j in itertools.combinations(range(4), 2):
        for si, sj in itertools.product((-1, 1), repeat=2):
            u = [Fraction(0)] * 4
            u[i], u[j] = Fraction(si), Fraction(sj)
            normals.append(tuple(u))
    return tuple(sorted(normals))


@dataclass(frozen=True)
class FaceLattice:
    """The face lattice of the 24-cell.

    ``faces[k]`` lists the k-faces as sorted tuples of vertex indices, in
    canonical (lexicographic) order; dimension 4 is the single body face.
    ``facet_normal[i]`` is the outward normal of facet i, satisfying
    <normal, v> = 1 exactly on that facet's vertices.
    """

    vertices: tuple[Coord, ...]
    faces: tuple[tuple[tuple[int, ...], ...], ...]
    facet_normal: tuple[Coord, ...]

    def vertex_index(self, coords: Coord) -> int:
        return self.vertices.index(tuple(coords))

    def face_index(self, dim: int, vertex_set: tuple[int, ...]) -> int:
        return self.faces[dim].index(tuple(sorted(vertex_set)))

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.faces[k]) for k in range(4))

    def facet_of_normal(self, normal: Coord) -> int:
        """Index of the facet whose outward normal is ``normal``."""
        members = tuple(sorted(i for i, v in enumerate(self.vertices)
                               if _inner(normal, v) == 1))
        return self.faces[3].index(members)

    def dump(self) -> str:
        """Canonical text dump: one face per line as `dim index v1 v2 ...`."""
        lines = []
        for dim in range(5):
            for idx, vs in enumerate(self.faces[dim]):
                lines.append(f"{dim} {idx} " + " ".join(str(v) for v in vs))
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=1)
def build_24cell() -> FaceLattice:
    """Construct the 24-cell's face lattice from exact inner products."""
    vertices = _vertex_coordinates()
    normals = _facet_normals()

    facet_members = []
    for u in normals:
        members = tuple(sorted(i for i, v in enumerate(vertices) if _inner(u, v) == 1))
        assert len(members) == 6
        facet_members.append(members)

    adjacency = {
        (i, j)
        for i, j in itertools.combinations(range(len(vertices)), 2)
        if _inner(vertices[i], vertices[j]) == HALF
    }

    edges: set[tuple[int, ...]] = set()
    triangles: set[tuple[int, ...]] = set()
    for members in facet_members:
        local_edges = [(a, b) for a, b in itertools.combinations(members, 2)
                       if (a, b) in adjacency]
        edges.update(local_edges)
        # Octahedron faces are exactly its vertex triples that are
        # pairwise adjacent (antipodal pairs are the non-edges).
        for trio in itertools.combinations(members, 3):
            if all(pair in adjacency for pair in itertools.combinations(trio, 2)):
                triangles.add(trio)

    order = sorted  # canonical: lexicographic on sorted vertex tuples
    facet_order = order(facet_members)
    normal_by_members = {m: u for m, u in zip(facet_members, normals)}
    faces = (
        tuple((i,) for i in range(len(vertices))),
        tuple(order(edges)),
        tuple(order(triangles)),
        tuple(facet_order),
        (tuple(range(len(vertices))),),
    )
    return FaceLattice(
        vertices=vertices,
        faces=faces,
        facet_normal=tuple(normal_by_members[m] for m in facet_order),
    )


@dataclass(frozen=True)
class TruncatedLattice:
    """The truncated 24-cell, with provenance back to the ideal lattice.

    Vertices are flags (original vertex, incident original edge); every
    face is a sorted tuple of flag indices.  ``facet_kind[i]`` is "cube"
    or "troct"; ``facet_origin[i]`` is the original vertex index for a
    cube, the original facet index for a truncated octahedron.
    """

    base: FaceLattice
    flags: tuple[tuple[int, int], ...]
    faces: tuple[tuple[tuple[int, ...], ...], ...]
    facet_kind: tuple[str, ...]
    facet_origin: tuple[int, ...]
    provenance: tuple[tuple[tuple[object, ...], ...], ...]
    _flag_index: dict[tuple[int, int], int] = field(repr=False, hash=False, compare=False)

    def flag_index(self, vertex: int, edge: int) -> int:
        return self._flag_index[(vertex, edge)]

    def cube_facet(self, vertex: int) -> int:
        """Facet index of the cubical facet truncating ``vertex``."""
        return self._facet_by(("cube", vertex))

    def troct_facet(self, facet: int) -> int:
        """Facet index of the truncated octahedron from original facet."""
        return self._facet_by(("troct", facet))

    def _facet_by(self, key: tuple[str, int]) -> int:
        kind, origin = key
        for i, (k, o) in enumerate(zip(self.facet_kind, self.facet_origin)):
            if k == kind and o == origin:
                return i
        raise KeyError(key)

    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(self.faces[k]) for k in range(4))

    def dump(self) -> str:
        lines = []
        for dim in range(5):
            for idx, vs in enumerate(self.faces[dim]):
                lines.append(f"{dim} {idx} " + " ".join(str(v) for v in vs))
        return "\n".join(lines) + "\n"


@lru_cache(maxsize=1)
def truncate(lattice: FaceLattice | None = None) -> TruncatedLattice:
    """Truncate every ideal vertex of the 24-cell, combinatorially.

    The vertex figure of each ideal vertex is a cube: its 8 vertices are
    the edges at the vertex, its 12 edges the triangles there, its 6
    squares the facets there.  Each original octahedral facet becomes a
    truncated octahedron; original triangles become hexagons.
    """
    base = lattice if lattice is not None else build_24cell()
    edges = base.faces[1]
    triangles = base.faces[2]
    facets = base.faces[3]

    flags = tuple(sorted((v, e) for e, pair in enumerate(edges) for v in pair))
    flag_index = {f: i for i, f in enumerate(flags)}

    def corner(vertex: int, edge: int) -> int:
        return flag_index[(vertex, edge)]

    # dim 1: truncated middles of original edges, plus cube edges (one per
    # incident vertex-triangle flag).
    middles = {}
    for e, (a, b) in enumerate(edges):
        middles[tuple(sorted((corner(a, e), corner(b, e))))] = ("edge", e)
    cube_edges = {}
    for t, trio in enumerate(triangles):
        tri_edges = [e for e, pair in enumerate(edges) if set(pair) <= set(trio)]
        assert len(tri_edges) == 3
        for v in trio:
            ends = tuple(sorted(corner(v, e) for e in tri_edges if v in edges[e]))
            assert len(ends) == 2
            cube_edges[ends] = ("corner_edge", v, t)

    # dim 2: hexagons from original triangles; squares where a cube meets
    # a truncated octahedron (one per incident vertex-facet flag).
    hexagons = {}
    for t, trio in enumerate(triangles):
        tri_edges = [e for e, pair in enumerate(edges) if set(pair) <= set(trio)]
        members = tuple(sorted(corner(v, e) for e in tri_edges for v in edges[e]))
        assert len(members) == 6
        hexagons[members] = ("triangle", t)
    squares = {}
    for o, members6 in enumerate(facets):
        facet_edges = [e for e, pair in enumerate(edges) if set(pair) <= set(members6)]
        for v in members6:
            ends = tuple(sorted(corner(v, e) for e in facet_edges if v in edges[e]))
            assert len(ends) == 4
            squares[ends] = ("vertex_facet", v, o)

    # dim 3: cubes (vertex figures) and truncated octahedra.
    cubes = {}
    for v in range(len(base.vertices)):
        members = tuple(sorted(i for i, (w, _) in enumerate(flags) if w == v))
        assert len(members) == 8
        cubes[members] = ("vertex", v)
    trocts = {}
    for o, members6 in enumerate(facets):
        facet_edges = [e for e, pair in enumerate(edges) if set(pair) <= set(members6)]
        members = tuple(sorted(corner(v, e) for e in facet_edges for v in edges[e]))
        assert len(members) == 24
        trocts[members] = ("facet", o)

    def sorted_faces(table: dict) -> tuple[list[tuple[int, ...]], list[tuple]]:
        keys = sorted(table)
        return keys, [table[k] for k in keys]

    dim1_faces, dim1_prov = sorted_faces(middles | cube_edges)
    dim2_faces, dim2_prov = sorted_faces(hexagons | squares)
    dim3_faces, dim3_prov = sorted_faces(cubes | trocts)

    faces = (
        tuple((i,) for i in range(len(flags))),
        tuple(dim1_faces),
        tuple(dim2_faces),
        tuple(dim3_faces),
        (tuple(range(len(flags))),),
    )
    provenance = (
        tuple(("flag",) + flags[i] for i in range(len(flags))),
        tuple(dim1_prov),
        tuple(dim2_prov),
        tuple(dim3_prov),
        (("body",),),
    )
    facet_kind = tuple("cube" if p[0] == "vertex" else "troct" for p in dim3_prov)
    facet_origin = tuple(p[1] for p in dim3_prov)
    return TruncatedLattice(
        base=base,
        flags=flags,
        faces=faces,
        facet_kind=facet_kind,
        facet_origin=facet_origin,
        provenance=provenance,
        _flag_index=flag_index,
    )
