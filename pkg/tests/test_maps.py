"""Combinatorial map construction, validation, duality, isomorphism."""

import pytest

from isingtree.generators import cycle, grid
from isingtree.maps import (DegreeTooLowError, DisconnectedError, MapError,
                            NonPlanarError, NotSimpleError, PlanarMap,
                            build_map, canonical_key, dual_map, is_isomorphic,
                            map_from_rotations, restricted_dual,
                            validate_simple_input)


def square(edge_order=(0, 1, 2, 3)):
    """C4 built by hand; edge_order permutes the edge indices to exercise
    labelling invariance."""
    raw = [(0, 1), (1, 2), (2, 3), (3, 0)]
    edges = [raw[i] for i in edge_order]
    pos = {edge_order[i]: i for i in range(4)}
    rotations = {k: [pos[(k - 1) % 4], pos[k]] for k in range(4)}
    return build_map(edges, rotations, (0, pos[3]))


def test_square_counts():
    m = square()
    assert (m.n_vertices, m.n_edges, len(m.faces)) == (4, 4, 2)
    assert m.euler_characteristic() == 2
    assert all(m.degree(v) == 2 for v in range(4))
    assert len(m.outer_orbit) == 4


def test_triangle_counts():
    m, _ = cycle(3)
    assert (m.n_vertices, m.n_edges, len(m.faces)) == (3, 3, 2)


def test_grid_counts():
    m, _ = grid(3, 3)
    assert (m.n_vertices, m.n_edges, len(m.faces)) == (9, 12, 5)
    assert len(m.boundary_edges()) == 8


def test_involution_and_orbit_consistency(pipelines):
    for p in pipelines.values():
        m = p.m
        for d in range(2 * m.n_edges):
            assert m.alpha(m.alpha(d)) == d
            assert m.phi_inv(m.phi(d)) == d
            # phi keeps the face, sigma keeps the vertex
            assert m.face_of(m.phi(d)) == m.face_of(d)
            assert m.vertex_of(m.sigma[d]) == m.vertex_of(d)
            assert m.edge_of(d) == d >> 1


def test_outer_orbit_is_a_face(pipelines):
    for p in pipelines.values():
        m = p.m
        orbit = m.outer_orbit
        assert set(orbit) == set(m.faces[m.outer_face])
        assert all(m.is_outer_dart(d) for d in orbit)
        walked = [orbit[0]]
        while len(walked) < len(orbit):
            walked.append(m.phi(walked[-1]))
        assert set(walked) == set(orbit)


def test_loop_rejected():
    with pytest.raises(NotSimpleError):
        build_map([(0, 0)], {0: [0, 0]}, (0, 0))


def test_parallel_edge_rejected():
    with pytest.raises(NotSimpleError):
        build_map([(0, 1), (1, 0)], {0: [0, 1], 1: [1, 0]}, (0, 0))


def test_degree_one_rejected():
    with pytest.raises(DegreeTooLowError):
        build_map([(0, 1), (1, 2)], {0: [0], 1: [0, 1], 2: [1]}, (0, 0))


def test_isolated_vertex_rejected():
    rot = {0: [2, 0], 1: [0, 1], 2: [1, 2], 9: []}
    with pytest.raises(DegreeTooLowError):
        build_map([(0, 1), (1, 2), (2, 0)], rot, (0, 2))


def test_disconnected_rejected():
    edges = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]
    rot = {0: [2, 0], 1: [0, 1], 2: [1, 2],
           3: [5, 3], 4: [3, 4], 5: [4, 5]}
    with pytest.raises(DisconnectedError):
        build_map(edges, rot, (0, 2))


def test_k5_rejected_as_nonplanar():
    # every rotation system of K5 has genus >= 1, so Euler's count fails
    edges = [(a, b) for a in range(5) for b in range(a + 1, 5)]
    rot = {v: [i for i, (a, b) in enumerate(edges) if v in (a, b)]
           for v in range(5)}
    with pytest.raises(NonPlanarError):
        build_map(edges, rot, (0, 0))


def test_map_from_rotations_requires_two_occurrences():
    with pytest.raises(MapError):
        map_from_rotations({0: ["a"], 1: ["a", "b"]}, (0, "a"))
    with pytest.raises(MapError):
        map_from_rotations({0: ["a", "b"], 1: ["a", "b"]}, (0, "missing"))


def test_map_from_rotations_loop_occurrence():
    # a loop plus a digon: legal as a bare map, rejected as simple input
    m = map_from_rotations({0: ["l", "l", "a", "b"], 1: ["b", "a"]}, (0, "l"))
    assert (m.n_vertices, m.n_edges) == (2, 3)
    with pytest.raises(NotSimpleError):
        validate_simple_input(m)


def test_validate_simple_input_accepts_corpus(pipelines):
    for p in pipelines.values():
        assert validate_simple_input(p.m) is p.m


def test_validate_simple_input_parallel():
    m = map_from_rotations({0: ["a", "b"], 1: ["b", "a"]}, (0, "a"))
    with pytest.raises(NotSimpleError):
        validate_simple_input(m)


def test_dual_of_triangle():
    m, _ = cycle(3)
    d = dual_map(m)
    assert (d.n_vertices, d.n_edges, len(d.faces)) == (2, 3, 3)
    # every dual edge joins the same two vertices: a triple edge
    assert {frozenset(d.endpoints(e)) for e in range(3)} == {frozenset((0, 1))}


def test_dual_of_grid():
    m, _ = grid(3, 3)
    d = dual_map(m)
    assert (d.n_vertices, d.n_edges, len(d.faces)) == (5, 12, 9)


def test_dual_is_an_involution(pipelines):
    for p in pipelines.values():
        assert is_isomorphic(dual_map(dual_map(p.m)), p.m)


def test_restricted_dual_of_cycles():
    for n in (3, 4):
        m, _ = cycle(n)
        rd = restricted_dual(m)
        assert (rd.n_vertices, rd.n_edges) == (1, 0)
        assert rd.n_isolated == 1
        assert rd.isolated_tags == ("dual",)


def test_restricted_dual_of_grid_is_a_four_cycle():
    m, _ = grid(3, 3)
    rd = restricted_dual(m)
    assert (rd.n_vertices, rd.n_edges) == (4, 4)
    assert is_isomorphic(rd, cycle(4)[0], include_outer=False)


@pytest.mark.parametrize("order", [(0, 1, 2, 3), (2, 0, 3, 1), (3, 2, 1, 0)])
def test_canonical_key_ignores_labelling(order):
    assert canonical_key(square(order)) == canonical_key(square())


def test_canonical_key_separates_cycles():
    assert not is_isomorphic(cycle(3)[0], cycle(4)[0])


def test_outer_face_choice_matters():
    m, _ = grid(3, 3)
    inner = next(f for f in range(len(m.faces)) if f != m.outer_face)
    rerooted = PlanarMap(m.sigma, m.faces[inner][0])
    assert not is_isomorphic(rerooted, m, include_outer=True)
    assert is_isomorphic(rerooted, m, include_outer=False)
