"""
Physical layout of the SIM receiver.

Layer 0 is the input metasurface, layers 1..L are the trainable intermediate
metasurfaces and layer L+1 is the receiving array lying on the ground plane
(z = 0). Every grid is centred on the common z-axis and elements are ordered
x-major: element ``n`` sits at column ``n % n_x`` and row ``n // n_x``.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

SPEED_OF_LIGHT = 299_792_458.0
DEFAULT_CARRIER_HZ = 60e9
DEFAULT_WAVELENGTH = SPEED_OF_LIGHT / DEFAULT_CARRIER_HZ

TWO_PI = 2.0 * math.pi


def wrap_to_pi(value: np.ndarray | float) -> np.ndarray | float:
    """Wrap radians into the principal interval [-pi, pi)."""
    wrapped = np.mod(np.asarray(value, dtype=float) + math.pi, TWO_PI) - math.pi
    # np.mod can round up to exactly 2*pi for tiny negative inputs
    wrapped = np.where(wrapped >= math.pi, wrapped - TWO_PI, wrapped)
    return float(wrapped) if np.ndim(wrapped) == 0 else wrapped


def wrap_to_2pi(value: np.ndarray | float) -> np.ndarray | float:
    """Reduce radians into [0, 2*pi)."""
    wrapped = np.mod(np.asarray(value, dtype=float), TWO_PI)
    wrapped = np.where(wrapped >= TWO_PI, wrapped - TWO_PI, wrapped)
    return float(wrapped) if np.ndim(wrapped) == 0 else wrapped


def split_index(index: int | np.ndarray, per_row: int) -> Tuple[int | np.ndarray, int | np.ndarray]:
    """Split a linear x-major index into its (x, y) grid coordinates."""
    row, col = np.divmod(index, per_row)
    return col, row


class SimGeometry(BaseModel):
    """Full physical layout of the SIM; every distance in the model derives from it."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    wavelength: float = Field(default=DEFAULT_WAVELENGTH, gt=0, description="Carrier wavelength (m)")
    n_x: int = Field(default=4, ge=1, description="Input-layer / receiver elements along x")
    n_y: int = Field(default=4, ge=1, description="Input-layer / receiver elements along y")
    d_x: float = Field(default=DEFAULT_WAVELENGTH / 2, gt=0, description="Input-layer / receiver pitch along x (m)")
    d_y: float = Field(default=DEFAULT_WAVELENGTH / 2, gt=0, description="Input-layer / receiver pitch along y (m)")
    m_x: int = Field(default=12, ge=1, description="Meta-atoms per intermediate layer along x")
    m_y: int = Field(default=12, ge=1, description="Meta-atoms per intermediate layer along y")
    s_x: float = Field(default=DEFAULT_WAVELENGTH / 2, gt=0, description="Intermediate-layer pitch along x (m)")
    s_y: float = Field(default=DEFAULT_WAVELENGTH / 2, gt=0, description="Intermediate-layer pitch along y (m)")
    num_layers: int = Field(default=9, ge=1, description="Number of trainable intermediate layers L")
    layer_spacing: float = Field(default=DEFAULT_WAVELENGTH, gt=0, description="Vertical gap between adjacent layers (m)")
    atom_area: Optional[float] = Field(
        default=None, gt=0, description="Meta-atom area (m^2); defaults to s_x * s_y"
    )

    @classmethod
    def from_wavelength(
        cls,
        wavelength: float = DEFAULT_WAVELENGTH,
        *,
        n_side: int = 4,
        m_side: int = 12,
        num_layers: int = 9,
        layer_spacing_wavelengths: float = 1.0,
    ) -> "SimGeometry":
        """Square grids at half-wavelength pitch with layer spacing given in wavelengths."""
        half = wavelength / 2
        return cls(
            wavelength=wavelength,
            n_x=n_side,
            n_y=n_side,
            d_x=half,
            d_y=half,
            m_x=m_side,
            m_y=m_side,
            s_x=half,
            s_y=half,
            num_layers=num_layers,
            layer_spacing=layer_spacing_wavelengths * wavelength,
        )

    @property
    def wavenumber(self) -> float:
        return TWO_PI / self.wavelength

    @property
    def n_elements(self) -> int:
        """N, size of the input layer and of the receiving array."""
        return self.n_x * self.n_y

    @property
    def n_atoms(self) -> int:
        """M, meta-atoms per intermediate layer."""
        return self.m_x * self.m_y

    @property
    def meta_atom_area(self) -> float:
        return self.atom_area if self.atom_area is not None else self.s_x * self.s_y

    @property
    def thickness(self) -> float:
        """T_SIM = L * s_layer."""
        return self.num_layers * self.layer_spacing

    def geometry_hash(self) -> str:
        return hashlib.sha256(self.model_dump_json().encode("utf-8")).hexdigest()

    def layer_z(self, layer: int) -> float:
        """Height of ``layer`` (0 = input layer, L + 1 = receiver on the ground)."""
        if not 0 <= layer <= self.num_layers + 1:
            raise IndexError(f"layer {layer} outside 0..{self.num_layers + 1}")
        return (self.num_layers + 1 - layer) * self.layer_spacing

    def layer_grid(self, layer: int) -> Tuple[int, int, float, float]:
        """(count_x, count_y, pitch_x, pitch_y) of ``layer``."""
        if not 0 <= layer <= self.num_layers + 1:
            raise IndexError(f"layer {layer} outside 0..{self.num_layers + 1}")
        if layer == 0 or layer == self.num_layers + 1:
            return self.n_x, self.n_y, self.d_x, self.d_y
        return self.m_x, self.m_y, self.s_x, self.s_y


@dataclass(frozen=True)
class ElectricalAngles:
    """Electrical angles in radians, each in [-pi, pi)."""

    psi_x: float
    psi_y: float

    @classmethod
    def from_pi_units(cls, psi_x: float, psi_y: float) -> "ElectricalAngles":
        return cls(float(wrap_to_pi(psi_x * math.pi)), float(wrap_to_pi(psi_y * math.pi)))

    def in_pi_units(self) -> Tuple[float, float]:
        return self.psi_x / math.pi, self.psi_y / math.pi


@dataclass(frozen=True)
class PhysicalAngles:
    """Azimuth in [0, 2*pi) and elevation in [0, pi/2], radians."""

    azimuth: float
    elevation: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.azimuth < TWO_PI:
            raise ValueError(f"azimuth {self.azimuth} outside [0, 2*pi)")
        if not 0.0 <= self.elevation <= math.pi / 2:
            raise ValueError(f"elevation {self.elevation} outside [0, pi/2]")


def electrical_from_physical(geom: SimGeometry, angles: PhysicalAngles) -> ElectricalAngles:
    kappa = geom.wavenumber
    sin_el = math.sin(angles.elevation)
    psi_x = kappa * geom.d_x * sin_el * math.cos(angles.azimuth)
    psi_y = kappa * geom.d_y * sin_el * math.sin(angles.azimuth)
    return ElectricalAngles(float(wrap_to_pi(psi_x)), float(wrap_to_pi(psi_y)))


def steering_vector(geom: SimGeometry, psi: ElectricalAngles) -> np.ndarray:
    """Array response a_y(psi_y) kron a_x(psi_x), length N, x-major ordering."""
    a_x = np.exp(1j * psi.psi_x * np.arange(geom.n_x))
    a_y = np.exp(1j * psi.psi_y * np.arange(geom.n_y))
    return np.kron(a_y, a_x)


def layer_positions(geom: SimGeometry, layer: int) -> np.ndarray:
    """(count, 3) coordinates of every element on ``layer``, x-major order."""
    count_x, count_y, pitch_x, pitch_y = geom.layer_grid(layer)
    xs = (np.arange(count_x) - (count_x - 1) / 2.0) * pitch_x
    ys = (np.arange(count_y) - (count_y - 1) / 2.0) * pitch_y
    grid_x, grid_y = np.meshgrid(xs, ys)  # rows follow y, so ravel is x-major
    z = np.full(count_x * count_y, geom.layer_z(layer))
    return np.column_stack([grid_x.ravel(), grid_y.ravel(), z])


def atom_position(geom: SimGeometry, layer: int, atom: int) -> np.ndarray:
    positions = layer_positions(geom, layer)
    if not 0 <= atom < positions.shape[0]:
        raise IndexError(f"atom {atom} outside 0..{positions.shape[0] - 1} on layer {layer}")
    return positions[atom]


__all__ = [
    "SPEED_OF_LIGHT",
    "DEFAULT_WAVELENGTH",
    "SimGeometry",
    "ElectricalAngles",
    "PhysicalAngles",
    "wrap_to_pi",
    "wrap_to_2pi",
    "split_index",
    "electrical_from_physical",
    "steering_vector",
    "layer_positions",
    "atom_position",
]
