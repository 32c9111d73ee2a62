from __future__ import annotations

import pytest

import presheaf_automata as pa
from presheaf_automata.dcat import ObjId
from presheaf_automata.fixtures import (
    cube_mor,
    square_with_tail,
    two_state_fsa,
    unit_square,
)
from presheaf_automata.path import DOWN, UP, Path


@pytest.fixture(scope="session")
def g_ab():
    return pa.build_G(["a", "b"])


@pytest.fixture(scope="session")
def cube2():
    return pa.build_precube(2)


@pytest.fixture(scope="session")
def fsa():
    return two_state_fsa()


@pytest.fixture(scope="session")
def oldsq():
    return square_with_tail()


@pytest.fixture(scope="session")
def square():
    return unit_square()


@pytest.fixture(scope="session")
def square_paths(square):
    """The four worked paths alpha, beta, gamma, zeta on the unit square."""
    frag = square.frag
    m = lambda s, t, slots: cube_mor(frag, s, t, slots)
    E = square.element
    a, b, d = E("a"), E("b"), E("d")
    p, q, s, u = E("p"), E("q"), E("s"), E("u")
    d01_1, d11_1 = m(0, 1, [(1, 0)]), m(0, 1, [(1, 1)])
    d01, d02 = m(1, 2, [(1, 0)]), m(1, 2, [(2, 0)])
    d11, _d12 = m(1, 2, [(1, 1)]), m(1, 2, [(2, 1)])
    d0_12, d1_12 = m(0, 2, [(1, 0), (2, 0)]), m(0, 2, [(1, 1), (2, 1)])
    alpha = Path(UP + UP + DOWN, (a, p, u, d), (d01_1, d02, d1_12))
    beta = Path(UP + DOWN, (a, u, d), (d0_12, d1_12))
    gamma = Path(UP + UP + DOWN + DOWN, (a, q, u, s, d), (d01_1, d01, d11, d11_1))
    zeta = Path(UP + DOWN + UP + DOWN, (a, p, b, s, d), (d01_1, d11_1, d01_1, d11_1))
    return {"alpha": alpha, "beta": beta, "gamma": gamma, "zeta": zeta}
