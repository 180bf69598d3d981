import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dissipative_memory.exceptions import (
    EmptyGrid,
    GridMismatch,
    LengthMismatch,
    NegativeOccupation,
    NonFinite,
    NonPositiveGamma,
    NegativeTime,
)
from dissipative_memory.modes import (
    EvolvedState,
    MemoryCode,
    build_grid,
    code_distance_at_zero,
    code_from_occupations,
)


def test_single_mode_energy_defaults_to_omega():
    g = build_grid([(1.0, 0.5)])
    assert len(g) == 1
    assert g[0].energy == 1.0


def test_total_gamma():
    g = build_grid([(1.0, 0.5), (2.0, 0.25)])
    assert len(g) == 2
    assert g.total_gamma == 0.75
    assert [m.index for m in g] == [0, 1]


def test_explicit_energy_and_mapping_specs():
    g = build_grid([{"omega": 1.0, "gamma": 0.1, "energy": 3.0}, (2.0, 0.2, 5.0)])
    assert g.energies.tolist() == [3.0, 5.0]


@pytest.mark.parametrize(
    "specs, exc, index",
    [
        ([(1.0, 0.0)], NonPositiveGamma, 0),
        ([(1.0, 0.5), (1.0, -1.0)], NonPositiveGamma, 1),
        ([(math.nan, 0.5)], NonFinite, 0),
        ([(1.0, 0.5), (1.0, math.inf)], NonFinite, 1),
    ],
)
def test_grid_rejects_invalid(specs, exc, index):
    with pytest.raises(exc) as info:
        build_grid(specs)
    assert info.value.index == index


def test_empty_grid():
    with pytest.raises(EmptyGrid):
        build_grid([])


def test_indices_must_increase():
    with pytest.raises(ValueError):
        build_grid([(1, 1), (1, 1)], indices=[3, 2])


def test_code_from_zero_occupation(one_mode):
    assert code_from_occupations(one_mode, [0.0]).thetas == (0.0,)


def test_code_from_occupation_matches_bisection(one_mode):
    # bisection of sinh^2 theta = 1.3811 at 40 digits gives 1.0000005940...
    th = code_from_occupations(one_mode, [1.3811]).thetas[0]
    assert th == pytest.approx(1.000000594028061, abs=1e-12)
    assert math.sinh(th) ** 2 == pytest.approx(1.3811, rel=1e-12)


def test_negative_occupation(one_mode):
    with pytest.raises(NegativeOccupation) as info:
        code_from_occupations(one_mode, [-0.1])
    assert info.value.index == 0


def test_occupation_length_mismatch(one_mode):
    with pytest.raises(LengthMismatch):
        code_from_occupations(one_mode, [1.0, 2.0])


@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=1, max_size=6))
def test_occupation_round_trip(thetas):
    g = build_grid([(1.0, 0.5)] * len(thetas))
    code = MemoryCode(g, tuple(thetas))
    back = code_from_occupations(g, code.occupations())
    # the inversion returns |theta|
    assert np.allclose(back.thetas, np.abs(thetas), rtol=0, atol=1e-10)


def test_code_distance_identical(code_factory):
    a = code_factory([0.3, 0.7, 1.0])
    d = code_distance_at_zero(a, a)
    assert np.all(d.delta_n == 0) and d.max_abs == 0


def test_code_distance_one_mode(one_mode):
    a = MemoryCode(one_mode, (1.0,))
    b = MemoryCode(one_mode, (0.0,))
    # sinh^2(1) from a 40-digit evaluation
    assert code_distance_at_zero(a, b).max_abs == pytest.approx(1.3810978455418157, abs=1e-12)


def test_code_distance_zero_codes(code_factory):
    a = code_factory([0.0, 0.0, 0.0])
    assert code_distance_at_zero(a, a).max_abs == 0.0


@given(
    st.lists(st.floats(-3, 3, allow_nan=False), min_size=3, max_size=3),
    st.lists(st.floats(-3, 3, allow_nan=False), min_size=3, max_size=3),
)
def test_code_distance_antisymmetric(t1, t2):
    g = build_grid([(1.0, 0.5)] * 3)
    a, b = MemoryCode(g, tuple(t1)), MemoryCode(g, tuple(t2))
    ab, ba = code_distance_at_zero(a, b), code_distance_at_zero(b, a)
    assert np.array_equal(ab.delta_n, -ba.delta_n)
    assert ab.max_abs == ba.max_abs


def test_code_distance_grid_mismatch(code_factory):
    with pytest.raises(GridMismatch):
        code_distance_at_zero(code_factory([1.0]), code_factory([1.0], gammas=[0.3]))


def test_evolved_state_rejects_negative_time(one_mode):
    with pytest.raises(NegativeTime):
        EvolvedState(MemoryCode(one_mode, (1.0,)), -1.0)


def test_negative_theta_allowed(one_mode):
    s = MemoryCode(one_mode, (-0.5,)).at(1.0)
    assert s.squeeze_parameters()[0] == pytest.approx(1.0)


def test_values_are_immutable(one_mode):
    code = MemoryCode(one_mode, (1.0,))
    with pytest.raises(AttributeError):
        code.thetas = (2.0,)
