from __future__ import annotations

import pytest

from grmf import Potential, WeightSequence
from grmf.abelian import INTEGERS
from grmf.grpoly import graded_ring


def z_graded_ring(names):
    return graded_ring(INTEGERS, [(n, INTEGERS.element([1])) for n in names])


def single_variable(d):
    """(k[x], x^d) with the standard grading."""
    ring = z_graded_ring(["x"])
    return ring, Potential.create(ring, ring.var(0) ** d)


def fermat(names, exponents):
    """Diagonal potential sum x_i^{d_i} with all variables in degree one."""
    ring = z_graded_ring(list(names))
    poly = ring.zero()
    for i, d in enumerate(exponents):
        poly = poly + ring.var(i) ** d
    return ring, Potential.create(ring, poly)


def maximally_graded_fermat(weights, names=None):
    """Z^n modulo d_i e_i = d_j e_j with variable i in the class of e_i."""
    seq = WeightSequence(tuple(weights))
    group, gens = seq.grading_group()
    names = names or [f"x{i}" for i in range(len(weights))]
    ring = graded_ring(group, list(zip(names, gens)))
    poly = ring.zero()
    for i, d in enumerate(weights):
        poly = poly + ring.var(i) ** d
    return ring, Potential.create(ring, poly)


@pytest.fixture
def zint():
    return INTEGERS
