"""Graphs derived from a planar map: diamond graph, quadri-tiling graph,
extended primal/dual pair, and the extended double graph.

All constructions go through :func:`map_from_rotations`, with vertex and
edge keys recording provenance:

* diamond graph: vertices ``('p', v)`` / ``('f', F)``, one edge ``('c', d)``
  per corner dart d joining v(d) to the face left of d;
* quadri-tiling graph: one white ``('w', d)`` and one black ``('b', d)``
  vertex per dart (the two flags of d), edges ``('cp', d)`` crossing the
  primal edge of d, ``('cd', d)`` crossing its dual edge, ``('ex', d)``
  external at corner d;
* extended dual: inner-face vertices ``('f', F)`` plus one outer vertex
  ``('u', delta)`` per boundary corner, edges ``('dual', e)`` and rim edges
  ``('rim', delta)``;
* extended primal: ``('p', v)`` plus the root ``('r',)``, edges ``('e', e)``
  and boundary spokes ``('bd', delta)``;
* extended double: superposition of the previous two with a white vertex on
  every crossing -- ``('we', e)`` on each primal/dual pair, ``('wb', delta)``
  on each boundary-spoke/rim pair -- and the root removed.  Edge keys are the
  four half-edge families ``('hp', d)``, ``('hd', d)``, ``('hb', delta)``,
  ``('hr', delta, 0|1)``; half ``('hr', delta, 0)`` is the rim half towards
  u_{alpha sigma delta} (the one that survives splitting conventions
  downstream) and ``('hr', delta, 1)`` the half towards u_delta.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable

from .maps import MapError, PlanarMap, map_from_rotations


# ---------------------------------------------------------------------------
# diamond graph
# ---------------------------------------------------------------------------

def quad_graph(m: PlanarMap, restricted: bool = False) -> PlanarMap:
    """Diamond graph: vertices of m plus its faces, one edge per corner.

    With ``restricted=True`` the outer face vertex and every corner incident
    to it are dropped; faces in the full mode are the rhombi of the isoradial
    embedding plus one outer quadrangle.  The full diamond's outer face is
    designated as the quadrangle of the minimal boundary corner; in
    restricted mode, as the unique face of maximal length (the boundary
    face), ties broken by smallest id.
    """
    rotations: dict[Hashable, list[Hashable]] = {}
    for v in range(len(m.vertices)):
        rot = [("c", d) for d in m.vertices[v]
               if not (restricted and m.is_outer_dart(d))]
        rotations[("p", v)] = rot
    for f in range(len(m.faces)):
        if restricted and f == m.outer_face:
            continue
        rotations[("f", f)] = [("c", d) for d in m.faces[f]]

    coords = None
    if m.coords is not None:
        coords = {("p", v): m.coords[v] for v in range(len(m.vertices))}
        for f in range(len(m.faces)):
            pts = [m.coords[m.vertex_of(d)] for d in m.faces[f]]
            coords[("f", f)] = sum(pts) / len(pts)
        coords = {k: coords[k] for k in rotations}
    tags = {k: ("primal" if k[0] == "p" else "dual") for k in rotations}

    d0 = min(m.outer_orbit)
    if restricted:
        # corner alpha(d0) is always kept (its left face is inner); use it
        # provisionally, then fix the outer face to the max-length face.
        start = ("c", d0 ^ 1)
        q = map_from_rotations(rotations, (("p", m.vertex_of(d0 ^ 1)), start),
                               coords=coords, tags=tags)
        best = max(range(len(q.faces)), key=lambda f: (len(q.faces[f]), -f))
        dart = q.faces[best][0]
        q = map_from_rotations(
            rotations,
            (q.vertex_key(q.vertex_of(dart)), q.edge_key(q.edge_of(dart))),
            coords=coords, tags=tags)
        return q

    q = map_from_rotations(rotations, (("p", m.vertex_of(d0)), ("c", d0)),
                           coords=coords, tags=tags)
    # outer face := the quadrangle of the edge carrying the minimal outer
    # corner, i.e. the face with corner-key set {d0, phi d0, a d0, phi a d0}
    want = frozenset(("c", x) for x in
                     (d0, m.phi(d0), d0 ^ 1, m.phi(d0 ^ 1)))
    target = _face_with_keys(q, want)
    dart = q.faces[target][0]
    return map_from_rotations(
        rotations,
        (q.vertex_key(q.vertex_of(dart)), q.edge_key(q.edge_of(dart)),
         _occ(q, dart)),
        coords=coords, tags=tags)


def _face_keys(m: PlanarMap, f: int) -> frozenset:
    return frozenset(m.edge_key(m.edge_of(d)) for d in m.faces[f])


def _face_with_keys(m: PlanarMap, keys: frozenset) -> int:
    hits = [f for f in range(len(m.faces)) if _face_keys(m, f) == keys]
    if len(hits) != 1:
        raise MapError("face with key set %r not unique: %r" % (keys, hits))
    return hits[0]


def _occ(m: PlanarMap, dart: int) -> int:
    v = m.vertex_of(dart)
    ek = m.edge_key(m.edge_of(dart))
    hits = [d for d in m.vertices[v] if m.edge_key(m.edge_of(d)) == ek]
    return hits.index(dart)


# ---------------------------------------------------------------------------
# quadri-tiling graph
# ---------------------------------------------------------------------------

def quadri_tiling(m: PlanarMap) -> PlanarMap:
    """Bipartite 3-regular graph with one white and one black flag per dart.

    The two flags of dart d sit on the two sides of d near its origin:
    ``('w', d)`` on the right (in the face right of d), ``('b', d)`` on the
    left.  Edges and their geometric roles:

    * ``('cp', d)``: w(d) -- b(d), crossing the primal edge of d;
    * ``('cd', d)``: w(d) -- b(alpha d), crossing the dual edge of d;
    * ``('ex', d)``: b(d) -- w(sigma d), external edge in corner d (a
      boundary external edge exactly when corner d is a boundary corner).

    Faces then split into one quadrangle per edge of m, one face per vertex
    (length 2 deg) and one per face of m (length 2 x face degree); the
    designated outer face is the one of m's outer face.
    """
    n = len(m.sigma)
    rotations: dict[Hashable, list[Hashable]] = {}
    tags: dict[Hashable, str] = {}
    for d in range(n):
        rotations[("b", d)] = [("cp", d), ("cd", d ^ 1), ("ex", d)]
        tags[("b", d)] = "black"
    for d in range(n):
        rotations[("w", d)] = [("ex", m.sigma_inv[d]), ("cd", d), ("cp", d)]
        tags[("w", d)] = "white"

    d0 = min(m.outer_orbit)
    q = map_from_rotations(rotations, (("b", d0), ("ex", d0)), tags=tags)
    # the external edge at boundary corner d0 borders the vertex-face of
    # v(d0) (which contains ('cp', d0)) and the outer face: designate the
    # side away from ('cp', d0).
    e_id = q.edge_id(("ex", d0))
    darts = (2 * e_id, 2 * e_id + 1)
    sides = [f for f in (q.face_of(darts[0]), q.face_of(darts[1]))
             if ("cp", d0) not in _face_keys(q, f)]
    if len(sides) != 1:
        raise MapError("outer face of the quadri-tiling graph is ambiguous")
    dart = next(d for d in q.faces[sides[0]] if d in darts)
    return map_from_rotations(
        rotations,
        (q.vertex_key(q.vertex_of(dart)), ("ex", d0), _occ(q, dart)),
        tags=tags)


def quadri_face_classes(gq: PlanarMap, m: PlanarMap) -> dict[int, tuple]:
    """Classify the faces of quadri_tiling(m) against their expected shapes.

    Returns face id -> ("edge", e) | ("vertex", v) | ("face", f).  Raises if
    the face key sets do not match the predicted partition exactly (used as a
    structural self-check in tests).
    """
    expected: dict[frozenset, tuple] = {}
    for e in range(m.n_edges):
        keys = frozenset([("cp", 2 * e), ("cp", 2 * e + 1),
                          ("cd", 2 * e), ("cd", 2 * e + 1)])
        expected[keys] = ("edge", e)
    for v in range(len(m.vertices)):
        keys = frozenset([("cp", d) for d in m.vertices[v]]
                         + [("ex", d) for d in m.vertices[v]])
        expected[keys] = ("vertex", v)
    for f in range(len(m.faces)):
        keys = frozenset([("cd", x ^ 1) for x in m.faces[f]]
                         + [("ex", x) for x in m.faces[f]])
        expected[keys] = ("face", f)
    out = {}
    for fid in range(len(gq.faces)):
        keys = _face_keys(gq, fid)
        if keys not in expected:
            raise MapError("unexpected quadri-tiling face %r" % (sorted(keys),))
        out[fid] = expected[keys]
    if len(out) != len(expected):
        raise MapError("quadri-tiling faces do not exhaust the expected list")
    return out


# ---------------------------------------------------------------------------
# extended primal / dual pair
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtendedPair:
    """Extended primal graph, extended dual graph, and the primal root.

    ``primal`` has vertex keys ('p', v) and ('r',); the root r is joined to
    each boundary vertex once per boundary corner by spokes ('bd', delta).
    ``dual`` replaces the outer-face vertex by one vertex ('u', delta) per
    boundary corner, joined cyclically by rim edges ('rim', delta); the dual
    of boundary edge e(delta) becomes the spoke ('dual', e) at ('u', delta).
    ``root_id`` is the vertex id of ('r',) in ``primal``.
    """
    primal: PlanarMap
    dual: PlanarMap
    root_id: int


def extended_pair(m: PlanarMap) -> ExtendedPair:
    boundary = m.outer_orbit  # clockwise
    # --- extended dual ---
    rot_d: dict[Hashable, list[Hashable]] = {}
    for f in range(len(m.faces)):
        if f == m.outer_face:
            continue
        rot_d[("f", f)] = [("dual", m.edge_of(x)) for x in m.faces[f]]
    for delta in boundary:
        rot_d[("u", delta)] = [("rim", delta), ("dual", m.edge_of(delta)),
                               ("rim", m.phi(delta))]
    tags_d = {k: ("dual" if k[0] == "f" else "outer") for k in rot_d}
    d0 = min(boundary)
    star = map_from_rotations(rot_d, (("u", d0), ("rim", d0)), tags=tags_d)
    star = _redesignate(star, rot_d, tags_d, _all_rim_face(star))

    # --- extended primal (direct construction) ---
    rot_p: dict[Hashable, list[Hashable]] = {}
    for v in range(len(m.vertices)):
        rot = []
        for d in m.vertices[v]:
            rot.append(("e", m.edge_of(d)))
            if m.is_outer_dart(d):
                rot.append(("bd", d))
        rot_p[("p", v)] = rot
    # rotation at the root = spokes in forward outer-orbit order: the orbit
    # keeps the outer face on its left, hence winds counterclockwise around
    # any point placed inside that face (this is also the phi-orbit of the
    # all-rim face of the extended dual, whose rim edges the spokes cross).
    rot_p[("r",)] = [("bd", delta) for delta in boundary]
    tags_p = {k: ("root" if k == ("r",) else "primal") for k in rot_p}
    coords_p = None
    if m.coords is not None:
        center = sum(m.coords) / len(m.coords)
        radius = max(abs(z - center) for z in m.coords) if len(m.coords) else 1.0
        coords_p = {("p", v): m.coords[v] for v in range(len(m.vertices))}
        coords_p[("r",)] = center + 2.5 * (radius if radius else 1.0)
    ext = map_from_rotations(rot_p, (("r",), ("bd", d0)),
                             coords=coords_p, tags=tags_p)
    return ExtendedPair(primal=ext, dual=star, root_id=ext.vertex_id(("r",)))


def _all_rim_face(star: PlanarMap) -> int:
    hits = [f for f in range(len(star.faces))
            if all(star.edge_key(star.edge_of(d))[0] == "rim"
                   for d in star.faces[f])]
    if len(hits) != 1:
        raise MapError("outer rim face not unique: %r" % hits)
    return hits[0]


def _redesignate(m: PlanarMap, rotations, tags, face: int,
                 coords=None) -> PlanarMap:
    """Rebuild via map_from_rotations with `face` as the outer face."""
    dart = m.faces[face][0]
    return map_from_rotations(
        rotations,
        (m.vertex_key(m.vertex_of(dart)), m.edge_key(m.edge_of(dart)),
         _occ(m, dart)),
        coords=coords, tags=tags)


# ---------------------------------------------------------------------------
# extended double graph
# ---------------------------------------------------------------------------

def extended_double(m: PlanarMap) -> PlanarMap:
    """Superposition of extended primal (minus root) and extended dual.

    Every crossing of a primal object with its dual partner carries a white
    vertex; the surviving black vertices are the primal ones ('p', v) and the
    dual ones ('f', F), ('u', delta).  Whites come in two kinds:

    * ``('we', e)`` where edge e crosses its dual edge, with four half-edges
      ('hp', d)/('hp', alpha d) along the primal edge and ('hd', d)/
      ('hd', alpha d) along the dual one (an ('hd', delta) half attaches to
      ('u', delta) when corner delta is on the boundary);
    * ``('wb', delta)`` where the boundary spoke ('bd', delta) crosses the
      rim edge ('rim', delta), with three half-edges: ('hb', delta) towards
      the boundary vertex -- the root half is cut -- and the two rim halves
      ('hr', delta, 0) towards u_{alpha sigma delta}, ('hr', delta, 1)
      towards u_delta.

    The map is bipartite with whites of degree 4 (interior) and 3 (boundary);
    every inner face is a quadrangle with exactly two whites, and the outer
    face alternates rim halves around the boundary.
    """
    boundary = m.outer_orbit
    rotations: dict[Hashable, list[Hashable]] = {}
    tags: dict[Hashable, str] = {}

    for v in range(len(m.vertices)):
        rot = []
        for d in m.vertices[v]:
            rot.append(("hp", d))
            if m.is_outer_dart(d):
                rot.append(("hb", d))
        rotations[("p", v)] = rot
        tags[("p", v)] = "black-primal"
    for f in range(len(m.faces)):
        if f == m.outer_face:
            continue
        rotations[("f", f)] = [("hd", x) for x in m.faces[f]]
        tags[("f", f)] = "black-dual"
    for delta in boundary:
        rotations[("u", delta)] = [("hr", delta, 1), ("hd", delta),
                                   ("hr", m.phi(delta), 0)]
        tags[("u", delta)] = "black-dual"
    for e in range(m.n_edges):
        d = 2 * e
        rotations[("we", e)] = [("hp", d ^ 1), ("hd", d), ("hp", d),
                                ("hd", d ^ 1)]
        tags[("we", e)] = "white"
    for delta in boundary:
        rotations[("wb", delta)] = [("hr", delta, 0), ("hb", delta),
                                    ("hr", delta, 1)]
        tags[("wb", delta)] = "white"

    d0 = min(boundary)
    dd = map_from_rotations(rotations, (("wb", d0), ("hr", d0, 0)), tags=tags)
    hits = [f for f in range(len(dd.faces))
            if all(dd.edge_key(dd.edge_of(x))[0] == "hr" for x in dd.faces[f])]
    if len(hits) != 1:
        raise MapError("outer rim face of the double not unique: %r" % hits)
    return _redesignate(dd, rotations, tags, hits[0])
