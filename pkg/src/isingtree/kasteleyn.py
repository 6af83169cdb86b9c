"""Kasteleyn theory on the quadri-tiling graph.

The critical dimer weights on the quadri-tiling graph of an isoradial map
admit a flat phasing: each edge weight nu_uv is multiplied by a unit complex
e^{i phi_uv} so that around every face the alternating product of phases is
trivial, after which the dimer partition function is |det K| for the
white-by-black weighted adjacency matrix K.

Phase convention (edges named by their quadri-tiling keys):

* ``('cd', d)``  (crossing the dual edge):    phi = 0,      |K| = sin theta
* ``('cp', d)``  (crossing the primal edge):  phi = pi/2,   |K| = cos theta
* ``('ex', d)``  (external, corner d):        |K| = 1 and
    phi = 3 pi/2 - theta_{e(sigma d)}                      (interior corner)
    phi = 3 pi/2 - theta_{e(sigma d)} - theta_bd(d)        (boundary corner)

With this convention every white row of K sums to zero at interior corners;
at a boundary corner the row sums to i e^{-i theta} (1 - e^{-i theta_bd}),
which is exactly minus the weight carried by the root arc of the directed
corner graph built downstream.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from typing import Mapping

from .derived import quadri_tiling
from .isoradial import (BoundaryAngles, IsoradialData, boundary_angles,
                        critical_couplings, dimer_weights)
from .maps import PlanarMap
from .oracles import complex_det, dimer_Z, ising_Z
from .report import CheckResult, Report, check

EPS_NUM = 1e-9


def assign_phases(gq: PlanarMap, iso: IsoradialData,
                  bnd: BoundaryAngles) -> dict:
    """Phase (argument) per quadri-tiling edge key, following the module
    convention above."""
    m = iso.map
    phases = {}
    for key in gq.edge_keys:
        kind, d = key
        if kind == "cd":
            phases[key] = 0.0
        elif kind == "cp":
            phases[key] = math.pi / 2.0
        elif kind == "ex":
            th = iso.theta[m.edge_of(m.sigma[d])]
            phi = 1.5 * math.pi - th
            if m.is_outer_dart(d):
                phi -= bnd.theta[d]
            phases[key] = phi
        else:
            raise ValueError("unexpected quadri-tiling edge %r" % (key,))
    return phases


def curvature(gq: PlanarMap, phases: Mapping, face: int) -> complex:
    """Alternating phase product around a face, read clockwise.

    For a face of length 2k with clockwise vertex sequence
    w1 b1 w2 b2 ... wk bk the curvature is
    (-1)^(k-1) * prod e^{i phi(w_j b_j)} / prod e^{i phi(w_{j+1} b_j)},
    i.e. numerator over white->black steps, denominator over black->white
    steps of the clockwise walk.  A flat phasing has curvature 1 everywhere.
    """
    orb = gq.faces[face]
    n = len(orb)
    num, den = 1.0 + 0j, 1.0 + 0j
    for i in reversed(range(n)):
        a = gq.vertex_of(orb[(i + 1) % n])   # step a -> b, clockwise
        e_key = gq.edge_key(gq.edge_of(orb[i]))
        ph = cmath.exp(1j * phases[e_key])
        if gq.tags[a] == "white":
            num *= ph
        else:
            den *= ph
    k = n // 2
    return (-1) ** (k - 1) * num / den


@dataclass(frozen=True)
class FlatnessReport:
    curvatures: tuple[complex, ...]     # by face id
    max_deviation: float
    flat: bool


def check_flat(gq: PlanarMap, phases: Mapping,
               tol: float = EPS_NUM) -> FlatnessReport:
    curv = tuple(curvature(gq, phases, f) for f in range(len(gq.faces)))
    dev = max(abs(c - 1.0) for c in curv)
    return FlatnessReport(curvatures=curv, max_deviation=dev,
                          flat=dev <= tol)


@dataclass(frozen=True)
class KasteleynMatrix:
    """White-by-black phased adjacency matrix of the quadri-tiling graph."""
    whites: tuple
    blacks: tuple
    rows: tuple[tuple[complex, ...], ...]

    def entry(self, white, black) -> complex:
        return self.rows[self.whites.index(white)][self.blacks.index(black)]

    def det(self) -> complex:
        return complex_det(self.rows)


def build_kasteleyn(gq: PlanarMap, iso: IsoradialData, bnd: BoundaryAngles,
                    phases: Mapping | None = None,
                    warn_nonflat: bool = True) -> KasteleynMatrix:
    """K[w, b] = nu_wb e^{i phi_wb} over the quadri-tiling edges.

    If the supplied (or default) phasing is not flat a warning is printed and
    the matrix is still returned; |det K| then need not equal the dimer sum.
    """
    if phases is None:
        phases = assign_phases(gq, iso, bnd)
    flat = check_flat(gq, phases)
    if warn_nonflat and not flat.flat:
        import warnings
        warnings.warn("phasing is not flat (max deviation %.3g); "
                      "|det K| need not equal the dimer partition function"
                      % flat.max_deviation)
    m = iso.map
    whites = tuple(sorted(k for k in gq.vertex_keys if k[0] == "w"))
    blacks = tuple(sorted(k for k in gq.vertex_keys if k[0] == "b"))
    wi = {k: i for i, k in enumerate(whites)}
    bi = {k: i for i, k in enumerate(blacks)}
    rows = [[0j] * len(blacks) for _ in whites]
    for e in range(gq.n_edges):
        key = gq.edge_key(e)
        ka, kb = (gq.vertex_key(v) for v in gq.endpoints(e))
        wkey, bkey = (ka, kb) if ka[0] == "w" else (kb, ka)
        kind, d = key
        if kind == "cp":
            mod = math.cos(iso.theta[d >> 1])
        elif kind == "cd":
            mod = math.sin(iso.theta[d >> 1])
        else:
            mod = 1.0
        rows[wi[wkey]][bi[bkey]] += mod * cmath.exp(1j * phases[key])
    return KasteleynMatrix(whites=whites, blacks=blacks,
                           rows=tuple(tuple(r) for r in rows))


def dimer_Z_det(K: KasteleynMatrix) -> tuple[complex, float]:
    """(det K, |det K|); with a flat phasing |det K| is the dimer sum."""
    d = K.det()
    return d, abs(d)


def verify_squared_ising(m: PlanarMap, iso: IsoradialData,
                         n_samples: int = 3, seed: int = 11,
                         tol: float = EPS_NUM) -> Report:
    """Check Z_Ising(G, J)^2 = 2^|V| prod_e cosh(2 J_e) * Z_dimer(G^Q, nu(J))
    by exhaustive enumeration of both sides, at the critical couplings and at
    `n_samples` seeded positive coupling vectors."""
    gq = quadri_tiling(m)
    rng = random.Random(seed)
    rep = Report()
    trials = [("critical", critical_couplings(iso))]
    for k in range(n_samples):
        trials.append(("sample-%d" % (k + 1),
                       tuple(rng.uniform(0.15, 1.2) for _ in range(m.n_edges))))
    for label, J in trials:
        nu = dimer_weights(J, gq)
        zi = ising_Z(m, J)
        zd = dimer_Z(gq, nu)
        lhs = zi * zi
        rhs = (2 ** m.n_vertices
               * math.prod(math.cosh(2.0 * j) for j in J) * zd)
        rep.add(check("squared-ising[%s]" % label, lhs, rhs, tol))
    return rep
