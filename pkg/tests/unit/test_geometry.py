"""
Unit tests for array geometry, steering vectors and meta-atom coordinates.
"""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from pydantic import ValidationError

from sim_doa.core.geometry import (
    DEFAULT_WAVELENGTH,
    ElectricalAngles,
    PhysicalAngles,
    SimGeometry,
    atom_position,
    electrical_from_physical,
    layer_positions,
    split_index,
    steering_vector,
    wrap_to_2pi,
    wrap_to_pi,
)

angles = st.floats(min_value=-1.0, max_value=0.999, allow_nan=False)


def test_reference_defaults():
    geom = SimGeometry()
    assert geom.n_elements == 16
    assert geom.n_atoms == 144
    assert geom.num_layers == 9
    assert geom.d_x == pytest.approx(DEFAULT_WAVELENGTH / 2)
    assert geom.layer_spacing == pytest.approx(DEFAULT_WAVELENGTH)
    assert geom.wavelength == pytest.approx(5.0e-3, rel=1e-3)
    assert geom.meta_atom_area == pytest.approx(geom.s_x * geom.s_y)
    assert geom.thickness == pytest.approx(9 * DEFAULT_WAVELENGTH)


def test_unknown_and_invalid_fields_rejected():
    with pytest.raises(ValidationError):
        SimGeometry(colour="blue")
    with pytest.raises(ValidationError):
        SimGeometry(n_x=0)
    with pytest.raises(ValidationError):
        SimGeometry(layer_spacing=-1.0)


def test_geometry_hash_tracks_content():
    a = SimGeometry()
    assert a.geometry_hash() == SimGeometry().geometry_hash()
    assert a.geometry_hash() != SimGeometry(num_layers=3).geometry_hash()


def test_split_index_is_x_major():
    assert split_index(0, 4) == (0, 0)
    assert split_index(5, 4) == (1, 1)
    assert split_index(7, 4) == (3, 1)


# ---------- electrical angles ----------
def test_broadside_gives_zero_electrical_angles():
    psi = electrical_from_physical(SimGeometry(), PhysicalAngles(azimuth=1.3, elevation=0.0))
    assert psi.psi_x == 0.0
    assert psi.psi_y == 0.0


def test_endfire_along_x_reaches_pi():
    geom = SimGeometry.from_wavelength(1.0)
    psi = electrical_from_physical(geom, PhysicalAngles(azimuth=0.0, elevation=math.pi / 2))
    # kappa * d = pi lands on the boundary of the principal interval
    assert abs(psi.psi_x) == pytest.approx(math.pi)
    assert psi.psi_y == pytest.approx(0.0, abs=1e-12)


def test_diagonal_direction():
    geom = SimGeometry.from_wavelength(1.0)
    psi = electrical_from_physical(geom, PhysicalAngles(azimuth=math.pi / 4, elevation=math.pi / 4))
    assert psi.psi_x == pytest.approx(math.pi / 2)
    assert psi.psi_y == pytest.approx(math.pi / 2)


def test_physical_angle_ranges_enforced():
    with pytest.raises(ValueError):
        PhysicalAngles(azimuth=2 * math.pi, elevation=0.0)
    with pytest.raises(ValueError):
        PhysicalAngles(azimuth=0.0, elevation=-0.1)


@given(angles, angles)
def test_pi_unit_conversion_stays_principal(x, y):
    psi = ElectricalAngles.from_pi_units(x, y)
    assert -math.pi <= psi.psi_x < math.pi
    assert -math.pi <= psi.psi_y < math.pi
    back_x, back_y = psi.in_pi_units()
    assert back_x == pytest.approx(x, abs=1e-12)
    assert back_y == pytest.approx(y, abs=1e-12)


@given(st.floats(min_value=-50.0, max_value=50.0, allow_nan=False))
def test_wrapping_intervals(value):
    assert -math.pi <= wrap_to_pi(value) < math.pi
    assert 0.0 <= wrap_to_2pi(value) < 2 * math.pi


# ---------- steering vector ----------
def test_steering_vector_at_origin_is_all_ones():
    a = steering_vector(SimGeometry(), ElectricalAngles(0.0, 0.0))
    assert a.shape == (16,)
    np.testing.assert_array_equal(a, np.ones(16))


def test_steering_vector_two_elements():
    geom = SimGeometry(n_x=2, n_y=1)
    a = steering_vector(geom, ElectricalAngles(math.pi, 0.0))
    np.testing.assert_allclose(a, [1.0, -1.0], atol=1e-15)


def test_steering_vector_kronecker_order():
    geom = SimGeometry(n_x=2, n_y=2)
    a = steering_vector(geom, ElectricalAngles(math.pi / 2, math.pi))
    np.testing.assert_allclose(a, [1.0, 1j, -1.0, -1j], atol=1e-15)


@given(angles, angles)
def test_steering_vector_unit_modulus_and_rows(x, y):
    geom = SimGeometry(n_x=4, n_y=3)
    psi = ElectricalAngles.from_pi_units(x, y)
    a = steering_vector(geom, psi)
    np.testing.assert_allclose(np.abs(a), 1.0, atol=1e-12)

    rows = a.reshape(geom.n_y, geom.n_x)
    a_x = np.exp(1j * psi.psi_x * np.arange(geom.n_x))
    for n_y in range(geom.n_y):
        np.testing.assert_allclose(rows[n_y], a_x * np.exp(1j * psi.psi_y * n_y), atol=1e-12)


# ---------- positions ----------
def test_layer_heights_decrease_to_ground():
    geom = SimGeometry.from_wavelength(1.0, num_layers=3)
    heights = [geom.layer_z(layer) for layer in range(5)]
    assert heights == pytest.approx([4.0, 3.0, 2.0, 1.0, 0.0])
    with pytest.raises(IndexError):
        geom.layer_z(5)


def test_single_atom_layer_sits_on_axis():
    geom = SimGeometry.from_wavelength(1.0, m_side=1, num_layers=2)
    np.testing.assert_allclose(atom_position(geom, 1, 0), [0.0, 0.0, 2.0])


def test_two_atoms_straddle_the_axis():
    geom = SimGeometry(wavelength=1.0, m_x=2, m_y=1, s_x=0.5, layer_spacing=1.0, num_layers=1)
    xs = layer_positions(geom, 1)[:, 0]
    np.testing.assert_allclose(xs, [-0.25, 0.25])


def test_corner_atom_of_three_by_three_grid():
    geom = SimGeometry.from_wavelength(1.0, m_side=3, num_layers=1)
    np.testing.assert_allclose(atom_position(geom, 1, 0), [-0.5, -0.5, 1.0])
    np.testing.assert_allclose(atom_position(geom, 1, 8), [0.5, 0.5, 1.0])


def test_grids_are_centred(reference_geometry):
    for layer in (0, 1, reference_geometry.num_layers + 1):
        xy = layer_positions(reference_geometry, layer)[:, :2]
        mirrored = -xy[::-1]
        np.testing.assert_allclose(xy, mirrored, atol=1e-15)


def test_atom_index_out_of_range():
    geom = SimGeometry.from_wavelength(1.0, m_side=3)
    with pytest.raises(IndexError):
        atom_position(geom, 1, 9)
    with pytest.raises(IndexError):
        atom_position(geom, 11, 0)
