"""Planar combinatorial maps as rotation systems.

Conventions, fixed once here and relied on everywhere else:

* Darts are the integers ``0 .. 2E-1``.  Edge ``i`` owns darts ``2i`` and
  ``2i+1``, so the twin involution is never stored: ``alpha(d) = d ^ 1``.
* ``sigma[d]`` is the next dart counterclockwise around the origin vertex of
  ``d``.  Vertices are the sigma-orbits, numbered by minimal dart.
* Faces are the orbits of ``phi = sigma^{-1} o alpha``, the successor along a
  face boundary that keeps the face on the *left* of every dart.  With sigma
  counterclockwise, inner faces are traversed counterclockwise and the outer
  face orbit runs clockwise along the boundary; whenever a construction needs
  a "clockwise boundary order" it reads the outer face orbit forward.
  (Note ``sigma o alpha`` would glue the same sets of darts into mirror faces;
  the orbit count, hence Euler's formula, is identical.  The left-face choice
  is the one all boundary-angle and curvature sign conventions assume, and it
  matters as soon as some vertex has degree >= 3.)
* ``corner(d)`` is the wedge at the origin of ``d`` between ``d`` and
  ``sigma(d)``; it lies in the face left of ``d``.  In particular boundary
  corners are exactly the darts of the outer face orbit.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence


class MapError(Exception):
    """Base class for combinatorial-map construction errors."""


class NonPlanarError(MapError):
    """Rotation system does not satisfy Euler's formula V - E + F = 2."""


class DisconnectedError(MapError):
    """Underlying graph is not connected."""


class DegreeTooLowError(MapError):
    """Some vertex has degree < 2 (isolated vertices included)."""


class NotSimpleError(MapError):
    """Input graph has a loop or parallel edges."""


class PlanarMap:
    """Immutable rotation system with a designated outer face.

    Not validated on construction beyond structural consistency; the planarity
    / connectivity / simplicity / degree invariants are enforced by
    :func:`build_map` for *input* graphs.  Derived constructions (duals,
    quadri-tilings, doubles) legitimately produce multigraphs, degree-1
    vertices or isolated vertices and therefore use this constructor directly.

    Optional decorations:

    * ``coords``: one complex number per vertex (an embedding), or None.
    * ``tags``: one string per vertex (vertex class of derived graphs).
    * ``vertex_keys`` / ``edge_keys``: the caller's labels, kept so derived
      graphs can be queried by provenance instead of by raw index.
    * ``isolated_tags``: tags for dartless vertices; these get the vertex ids
      after all sigma-orbit vertices.
    """

    def __init__(self, sigma: Sequence[int], outer_dart: int | None,
                 coords: Sequence[complex] | None = None,
                 tags: Sequence[str] | None = None,
                 vertex_keys: Sequence[Hashable] | None = None,
                 edge_keys: Sequence[Hashable] | None = None,
                 isolated_tags: Sequence[str] = ()):
        sigma = tuple(sigma)
        n = len(sigma)
        if n % 2 != 0:
            raise MapError("odd number of darts")
        if sorted(sigma) != list(range(n)):
            raise MapError("sigma is not a permutation of 0..%d" % (n - 1))
        self.sigma = sigma
        self.sigma_inv = tuple(_invert(sigma))
        self.n_edges = n // 2
        self.n_isolated = len(isolated_tags)
        self.isolated_tags = tuple(isolated_tags)

        self._vertices = _orbits(sigma)
        self._vertex_of = _orbit_index(self._vertices, n)
        # phi = sigma^{-1} o alpha: next dart along the face left of d.
        phi = tuple(self.sigma_inv[d ^ 1] for d in range(n))
        self._phi = phi
        self._faces = _orbits(phi)
        self._face_of = _orbit_index(self._faces, n)

        if n == 0:
            # A dartless map still has one face (the whole plane); this keeps
            # Euler bookkeeping for things like restricted_dual(C4) honest.
            self.outer_dart = None
            self.outer_face = 0
            self.n_faces = 1
        else:
            if outer_dart is None:
                raise MapError("outer face dart required")
            self.outer_dart = outer_dart
            self.outer_face = self._face_of[outer_dart]
            self.n_faces = len(self._faces)

        self.n_vertices = len(self._vertices) + self.n_isolated
        self.coords = tuple(coords) if coords is not None else None
        self.tags = tuple(tags) if tags is not None else None
        self.vertex_keys = tuple(vertex_keys) if vertex_keys is not None else None
        self.edge_keys = tuple(edge_keys) if edge_keys is not None else None
        self._vertex_index = (
            {k: i for i, k in enumerate(self.vertex_keys)}
            if self.vertex_keys is not None else None)
        self._edge_index = (
            {k: i for i, k in enumerate(self.edge_keys)}
            if self.edge_keys is not None else None)

    # -- permutations ------------------------------------------------------

    @staticmethod
    def alpha(d: int) -> int:
        return d ^ 1

    def phi(self, d: int) -> int:
        """Next dart along the face left of d (ccw on inner faces)."""
        return self._phi[d]

    def phi_inv(self, d: int) -> int:
        return self.sigma[d] ^ 1

    # -- incidences --------------------------------------------------------

    @property
    def vertices(self) -> tuple[tuple[int, ...], ...]:
        """Sigma-orbits (ccw dart lists), one per non-isolated vertex."""
        return self._vertices

    @property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        """Phi-orbits; ``faces[outer_face]`` runs clockwise on the boundary."""
        return self._faces

    def vertex_of(self, d: int) -> int:
        return self._vertex_of[d]

    def face_of(self, d: int) -> int:
        """Face left of dart d."""
        return self._face_of[d]

    def degree(self, v: int) -> int:
        if v >= len(self._vertices):
            return 0
        return len(self._vertices[v])

    @staticmethod
    def edge_of(d: int) -> int:
        return d >> 1

    def endpoints(self, e: int) -> tuple[int, int]:
        return self._vertex_of[2 * e], self._vertex_of[2 * e + 1]

    @property
    def outer_orbit(self) -> tuple[int, ...]:
        return self._faces[self.outer_face] if self._faces else ()

    def is_outer_dart(self, d: int) -> bool:
        return self._face_of[d] == self.outer_face

    def is_boundary_edge(self, e: int) -> bool:
        return (self._face_of[2 * e] == self.outer_face
                or self._face_of[2 * e + 1] == self.outer_face)

    def boundary_edges(self) -> tuple[int, ...]:
        return tuple(e for e in range(self.n_edges) if self.is_boundary_edge(e))

    # -- label lookups -----------------------------------------------------

    def vertex_id(self, key: Hashable) -> int:
        if self._vertex_index is None:
            raise KeyError("map carries no vertex keys")
        return self._vertex_index[key]

    def edge_id(self, key: Hashable) -> int:
        if self._edge_index is None:
            raise KeyError("map carries no edge keys")
        return self._edge_index[key]

    def vertex_key(self, v: int) -> Hashable:
        return self.vertex_keys[v] if self.vertex_keys is not None else v

    def edge_key(self, e: int) -> Hashable:
        return self.edge_keys[e] if self.edge_keys is not None else e

    # -- global checks -----------------------------------------------------

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    def is_connected(self) -> bool:
        n = len(self.sigma)
        if n == 0:
            return self.n_vertices <= 1
        if self.n_isolated:
            return False
        seen = [False] * n
        stack = [0]
        seen[0] = True
        while stack:
            d = stack.pop()
            for nxt in (self.sigma[d], d ^ 1):
                if not seen[nxt]:
                    seen[nxt] = True
                    stack.append(nxt)
        return all(seen)

    def __repr__(self) -> str:  # debugging aid only
        return "PlanarMap(V=%d, E=%d, F=%d, outer=%d)" % (
            self.n_vertices, self.n_edges, self.n_faces, self.outer_face)


def _invert(perm: Sequence[int]) -> list[int]:
    inv = [0] * len(perm)
    for i, p in enumerate(perm):
        inv[p] = i
    return inv


def _orbits(perm: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Orbits of a permutation, each starting at its minimal element,
    listed in order of minimal element."""
    n = len(perm)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        orbit = []
        d = start
        while not seen[d]:
            seen[d] = True
            orbit.append(d)
            d = perm[d]
        out.append(tuple(orbit))
    return tuple(out)


def _orbit_index(orbits: Iterable[tuple[int, ...]], n: int) -> tuple[int, ...]:
    idx = [0] * n
    for i, orb in enumerate(orbits):
        for d in orb:
            idx[d] = i
    return tuple(idx)


# ---------------------------------------------------------------------------
# construction from rotation data
# ---------------------------------------------------------------------------

def map_from_rotations(rotations: Mapping[Hashable, Sequence[Hashable]],
                       outer: tuple[Hashable, Hashable] | tuple[Hashable, Hashable, int] | None,
                       coords: Mapping[Hashable, complex] | None = None,
                       tags: Mapping[Hashable, str] | str | None = None,
                       isolated_tags: Sequence[str] = ()) -> PlanarMap:
    """Build a PlanarMap from per-vertex ccw edge-key rotations.

    Args:
      rotations: vertex key -> cyclic sequence of edge keys in ccw order.
        Every edge key must occur exactly twice overall (twice at the same
        vertex for a loop).  Vertex ids are assigned in iteration order of
        this mapping, edge ids in order of first appearance.
      outer: ``(vertex key, edge key)`` or ``(vertex key, edge key, k)``
        naming the dart originating at that vertex along that edge (k-th
        occurrence at the vertex, for loops/repeats) whose *left* face is the
        outer face.  May be None only for a dartless map.
      coords: optional vertex key -> complex embedding.
      tags: optional vertex key -> tag, or a single tag for all vertices.
      isolated_tags: tags of extra dartless vertices.
    """
    vertex_keys = list(rotations.keys())
    edge_keys: list[Hashable] = []
    edge_index: dict[Hashable, int] = {}
    # (vertex, position) slots per edge key, in scan order
    slots: dict[Hashable, list[tuple[Hashable, int]]] = {}
    for v in vertex_keys:
        for pos, ek in enumerate(rotations[v]):
            if ek not in edge_index:
                edge_index[ek] = len(edge_keys)
                edge_keys.append(ek)
                slots[ek] = []
            slots[ek].append((v, pos))
    for ek, occ in slots.items():
        if len(occ) != 2:
            raise MapError("edge key %r occurs %d times (want 2)" % (ek, len(occ)))

    # dart at each (vertex, position): 2e for the first-scanned slot, 2e+1
    # for the second.
    dart_at: dict[tuple[Hashable, int], int] = {}
    for ek, occ in slots.items():
        e = edge_index[ek]
        dart_at[occ[0]] = 2 * e
        dart_at[occ[1]] = 2 * e + 1

    sigma = [0] * (2 * len(edge_keys))
    for v in vertex_keys:
        rot = rotations[v]
        k = len(rot)
        for pos in range(k):
            sigma[dart_at[(v, pos)]] = dart_at[(v, (pos + 1) % k)]

    outer_dart = None
    if outer is not None:
        ov, oe = outer[0], outer[1]
        occ_wanted = outer[2] if len(outer) > 2 else 0
        hits = [dart_at[(ov, pos)] for pos, ek in enumerate(rotations[ov]) if ek == oe]
        if not hits:
            raise MapError("outer dart (%r, %r) not found" % (ov, oe))
        outer_dart = hits[occ_wanted]
    elif edge_keys:
        raise MapError("outer face designation required")

    # vertex ids follow sigma-orbit numbering (by minimal dart), which need
    # not match rotations order; realign keys/coords/tags via a dart lookup.
    tmp = PlanarMap(sigma, outer_dart)
    dart_vertex: dict[int, Hashable] = {}
    for (v, _pos), d in dart_at.items():
        dart_vertex[d] = v
    ordered_keys = [dart_vertex[orb[0]] for orb in tmp.vertices]

    coord_list = None
    if coords is not None:
        coord_list = [complex(coords[k]) for k in ordered_keys]
    tag_list = None
    if tags is not None:
        if isinstance(tags, str):
            tag_list = [tags] * len(ordered_keys)
        else:
            tag_list = [tags[k] for k in ordered_keys]

    return PlanarMap(sigma, outer_dart, coords=coord_list, tags=tag_list,
                     vertex_keys=ordered_keys, edge_keys=edge_keys,
                     isolated_tags=isolated_tags)


def build_map(edge_list: Sequence[tuple[Hashable, Hashable]],
              rotations: Mapping[Hashable, Sequence[int]],
              outer: tuple[Hashable, int] | tuple[Hashable, int, int],
              coords: Mapping[Hashable, complex] | None = None) -> PlanarMap:
    """Validated map construction for input graphs.

    Args:
      edge_list: edges as vertex-key pairs; edge i is referred to by index i.
      rotations: vertex key -> ccw cyclic order of incident edge *indices*.
      outer: (vertex key, edge index[, occurrence]) naming the dart whose
        left face is outer, as in :func:`map_from_rotations`.
      coords: optional embedding.

    Raises:
      NotSimpleError: loop or parallel edge.
      DegreeTooLowError: vertex of degree < 2 (or unlisted/isolated vertex).
      DisconnectedError: more than one component.
      NonPlanarError: Euler's formula fails for the designated rotation.
    """
    seen_pairs = set()
    for (u, v) in edge_list:
        if u == v:
            raise NotSimpleError("loop at %r" % (u,))
        pair = frozenset((u, v))
        if pair in seen_pairs:
            raise NotSimpleError("parallel edge %r-%r" % (u, v))
        seen_pairs.add(pair)

    m = map_from_rotations(rotations, outer, coords=coords)
    for v in range(len(m.vertices)):
        if m.degree(v) < 2:
            raise DegreeTooLowError("vertex %r has degree %d"
                                    % (m.vertex_key(v), m.degree(v)))
    if len(rotations) != len(m.vertices):
        raise DegreeTooLowError("isolated vertex in rotation data")
    if not m.is_connected():
        raise DisconnectedError("graph is not connected")
    if m.euler_characteristic() != 2:
        raise NonPlanarError("V - E + F = %d != 2 (rotation system is not "
                             "planar for this outer face)" % m.euler_characteristic())
    return m


def validate_simple_input(m: PlanarMap) -> PlanarMap:
    """The build_map invariants, checked on an already-built map.

    Used for graphs loaded from files, which bypass build_map.  Raises the
    same errors: NotSimpleError on loops/parallel edges, DegreeTooLowError
    below degree 2 or on isolated vertices, DisconnectedError,
    NonPlanarError when Euler's formula fails.
    """
    seen_pairs = set()
    for e in range(m.n_edges):
        u, v = m.endpoints(e)
        if u == v:
            raise NotSimpleError("loop at vertex %d" % u)
        pair = frozenset((u, v))
        if pair in seen_pairs:
            raise NotSimpleError("parallel edge between %d and %d" % (u, v))
        seen_pairs.add(pair)
    if m.n_isolated:
        raise DegreeTooLowError("isolated vertex")
    for v in range(m.n_vertices):
        if m.degree(v) < 2:
            raise DegreeTooLowError("vertex %d has degree %d" % (v, m.degree(v)))
    if not m.is_connected():
        raise DisconnectedError("graph is not connected")
    if m.euler_characteristic() != 2:
        raise NonPlanarError("V - E + F = %d != 2 (rotation system is not "
                             "planar for this outer face)"
                             % m.euler_characteristic())
    return m


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------

def dual_map(m: PlanarMap) -> PlanarMap:
    """Planar dual on the same dart set: sigma* = phi, alpha* = alpha.

    Dual dart d originates at the dual vertex f_left(d) and its twin at
    f_right(d), so each dual edge crosses its primal edge; edge indices are
    shared with the primal map.  The dual's outer face is designated by the
    dart alpha(sigma(d0)) for d0 the stored outer dart of m; that face
    corresponds to the primal vertex v(d0), and this particular choice
    makes dualizing twice reproduce m exactly -- dual(dual(m)) has
    sigma'' = alpha o sigma o alpha and outer dart alpha(d0), i.e. the
    alpha-relabeling of m with the *same* outer face.
    """
    if not m.sigma:
        raise MapError("dual of a dartless map is undefined")
    sigma_star = tuple(m.phi(d) for d in range(len(m.sigma)))
    d0 = m.outer_dart
    coords = None
    if m.coords is not None:
        # best-effort: dual vertex at the centroid of its face's corners
        coords_by_face = []
        for orb in m.faces:
            pts = [m.coords[m.vertex_of(d)] for d in orb]
            coords_by_face.append(sum(pts) / len(pts))
        # dual vertices are sigma*-orbits = phi-orbits, numbered by min dart,
        # which is exactly the face numbering of m
        coords = coords_by_face
    dual = PlanarMap(sigma_star, m.sigma[d0] ^ 1, coords=coords,
                     edge_keys=m.edge_keys)
    return dual


def restricted_dual(m: PlanarMap) -> PlanarMap:
    """Dual minus the outer-face vertex and the duals of boundary edges.

    Inner faces that end up with no surviving dual edge become isolated
    vertices (e.g. the restricted dual of a cycle is one isolated vertex).
    """
    inner_faces = [f for f in range(len(m.faces)) if f != m.outer_face]
    kept_edges = [e for e in range(m.n_edges) if not m.is_boundary_edge(e)]
    kept = set(kept_edges)
    rotations: dict[Hashable, list[Hashable]] = {}
    touched = set()
    for f in inner_faces:
        rot = [("re", m.edge_of(d)) for d in m.faces[f] if m.edge_of(d) in kept]
        if rot:
            rotations[("f", f)] = rot
            touched.add(f)
    isolated = tuple("dual" for f in inner_faces if f not in touched)
    if not rotations:
        return PlanarMap((), None, isolated_tags=isolated)
    # outer face of the restricted dual: the face left over along the old
    # boundary; pick it as the face of the dual dart lying on the outer side
    # of the minimal kept edge adjacent to a dropped region.  For corpus
    # graphs the restricted dual is a small inner object; the face containing
    # the dart alpha-side of the minimal kept edge works and is deterministic.
    first = ("re", kept_edges[0])
    owner = next(v for v, rot in rotations.items() if first in rot)
    sub = map_from_rotations(rotations, (owner, first), tags="dual",
                             isolated_tags=isolated)
    # Prefer the true unbounded face: the one with maximal orbit length
    # (ties: smallest id).  Rebuild with that designation if it differs.
    best = max(range(len(sub.faces)), key=lambda f: (len(sub.faces[f]), -f))
    if best != sub.outer_face:
        dart = sub.faces[best][0]
        v_key = sub.vertex_key(sub.vertex_of(dart))
        e_key = sub.edge_key(sub.edge_of(dart))
        occ = _occurrence(sub, dart)
        sub = map_from_rotations(rotations, (v_key, e_key, occ), tags="dual",
                                 isolated_tags=isolated)
    return sub


def _occurrence(m: PlanarMap, dart: int) -> int:
    """Index of `dart` among same-edge-key darts at its vertex (loops)."""
    v = m.vertex_of(dart)
    ek = m.edge_key(m.edge_of(dart))
    hits = [d for d in m.vertices[v] if m.edge_key(m.edge_of(d)) == ek]
    return hits.index(dart)


# ---------------------------------------------------------------------------
# canonical form / isomorphism (test helper)
# ---------------------------------------------------------------------------

def canonical_key(m: PlanarMap, include_outer: bool = True) -> tuple:
    """Canonical invariant of a connected map under dart relabeling.

    Breadth-first relabeling from every possible anchor dart; the minimal
    encoding wins.  Encodes sigma and alpha in the new labels plus (optionally)
    which face is outer.  Quadratic in the dart count -- test-sized inputs only.
    """
    n = len(m.sigma)
    if n == 0:
        return (m.n_isolated,)
    best = None
    for anchor in range(n):
        labels = {anchor: 0}
        order = [anchor]
        head = 0
        while head < len(order):
            d = order[head]
            head += 1
            for nxt in (m.sigma[d], d ^ 1):
                if nxt not in labels:
                    labels[nxt] = len(order)
                    order.append(nxt)
        enc = []
        for d in order:
            enc.append(labels[m.sigma[d]])
            enc.append(labels[d ^ 1])
        if include_outer:
            enc.append(min(labels[d] for d in m.outer_orbit))
        key = tuple(enc)
        if best is None or key < best:
            best = key
    return (m.n_isolated,) + best


def is_isomorphic(a: PlanarMap, b: PlanarMap, include_outer: bool = True) -> bool:
    return canonical_key(a, include_outer) == canonical_key(b, include_outer)
