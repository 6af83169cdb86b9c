"""Phased adjacency matrix of the quadri-tiling graph and its determinant."""

import cmath
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from isingtree.kasteleyn import (assign_phases, build_kasteleyn, check_flat,
                                 dimer_Z_det, verify_squared_ising)
from isingtree.oracles import complex_det, dimer_Z
from isingtree.isoradial import critical_couplings, dimer_weights

DETS = {"C3": -6.75, "C4": 9.0, "grid": 100.20826112068524}


@pytest.mark.parametrize("name", ["C3", "C4", "grid"])
def test_determinant_frozen_values(pipelines, name):
    det = pipelines[name].K.det()
    assert det.real == pytest.approx(DETS[name], rel=1e-12)
    assert abs(det.imag) < 1e-9 * abs(det)


def test_phasing_is_flat_on_every_face(pipelines):
    for p in pipelines.values():
        phases = assign_phases(p.gq, p.iso, p.bnd)
        rep = check_flat(p.gq, phases)
        assert rep.flat
        assert rep.max_deviation < 1e-12
        assert all(abs(c - 1.0) < 1e-12 for c in rep.curvatures)


def test_determinant_equals_dimer_sum(pipelines):
    for p in pipelines.values():
        nu = dimer_weights(critical_couplings(p.iso), p.gq)
        _, mod = dimer_Z_det(p.K)
        assert mod == pytest.approx(abs(dimer_Z(p.gq, nu)), rel=1e-9)


def test_white_row_sums(pipelines):
    # interior whites sum to zero; the white over a boundary corner delta
    # sums to -i e^{-i theta_e} (e^{-i theta_bd} - 1) for its own edge e
    for p in pipelines.values():
        m, K = p.m, p.K
        sig_inv = {m.sigma[d]: d for d in range(len(m.sigma))}
        for i, (_, wd) in enumerate(K.whites):
            rs = sum(K.rows[i])
            delta = sig_inv[wd]
            if m.is_outer_dart(delta):
                want = (-1j * cmath.exp(-1j * p.iso.theta[wd >> 1])
                        * (cmath.exp(-1j * p.bnd.theta[delta]) - 1.0))
                assert abs(rs - want) < 1e-12
            else:
                assert abs(rs) < 1e-12


def test_entries_have_prescribed_moduli(c4):
    for i, w in enumerate(c4.K.whites):
        for j, b in enumerate(c4.K.blacks):
            x = c4.K.rows[i][j]
            if x == 0:
                continue
            mod = abs(x)
            th = c4.iso.theta[0]  # all C4 angles equal
            assert min(abs(mod - v)
                       for v in (1.0, math.cos(th), math.sin(th))) < 1e-12


@given(st.floats(min_value=0.0, max_value=2.0 * math.pi))
def test_gauge_phase_on_a_row_keeps_the_modulus(c3, phi):
    rows = [list(r) for r in c3.K.rows]
    rows[0] = [cmath.exp(1j * phi) * x for x in rows[0]]
    assert abs(complex_det(rows)) == pytest.approx(abs(c3.K.det()), rel=1e-9)


def test_nonflat_phasing_warns(c3):
    zero = {k: 0.0 for k in c3.gq.edge_keys}
    with pytest.warns(UserWarning):
        build_kasteleyn(c3.gq, c3.iso, c3.bnd, phases=zero)


@pytest.mark.parametrize("name", ["C3", "C4", "grid"])
def test_squared_ising_identity(pipelines, name):
    p = pipelines[name]
    rep = verify_squared_ising(p.m, p.iso)
    assert rep.passed
    assert len(rep.checks) == 4  # critical couplings plus three samples
