"""Shared fixtures: the three-graph corpus and everything derived from it.

Building the full chain (quadri-tiling, Kasteleyn matrix, corner graphs,
extended double, extended pair) once per session keeps the suite fast; the
objects are all immutable, so sharing is safe.
"""

import pytest

from isingtree import correspondence as co
from isingtree.derived import extended_double, extended_pair, quadri_tiling
from isingtree.generators import cycle, grid
from isingtree.isoradial import (boundary_angles, double_weights,
                                 tree_weights_tau, validate_isoradial)
from isingtree.kasteleyn import build_kasteleyn

CORPUS = ("C3", "C4", "grid")


def make_input(name):
    if name == "C3":
        return cycle(3)
    if name == "C4":
        return cycle(4)
    if name == "grid":
        return grid(3, 3)
    raise ValueError(name)


class Pipeline:
    """One corpus graph with the whole derived chain attached."""

    def __init__(self, name):
        self.name = name
        self.m, self.theta_exact = make_input(name)
        self.iso = validate_isoradial(self.m, self.theta_exact)
        self.bnd = boundary_angles(self.iso)
        self.gq = quadri_tiling(self.m)
        self.K = build_kasteleyn(self.gq, self.iso, self.bnd)
        self.g0 = co.build_G0(self.gq, self.K, self.m)
        self.g = co.build_G(self.g0)
        self.dd = extended_double(self.m)
        self.ext = extended_pair(self.m)
        self.rho_star, self.tau2 = double_weights(self.iso, self.bnd, self.dd)
        self.tw = tree_weights_tau(self.iso, self.bnd)
        self.s_key = co.double_root(self.m)


@pytest.fixture(scope="session")
def pipelines():
    return {name: Pipeline(name) for name in CORPUS}


@pytest.fixture(scope="session")
def c3(pipelines):
    return pipelines["C3"]


@pytest.fixture(scope="session")
def c4(pipelines):
    return pipelines["C4"]


@pytest.fixture(scope="session")
def grid33(pipelines):
    return pipelines["grid"]
