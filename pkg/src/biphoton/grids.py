"""Square transverse grids, midpoint quadrature and the 2D Fourier transform.

All physics modules share the same discretization: an n-by-n Cartesian grid,
symmetric about the origin, with a half-cell offset so that no sample sits at
zero and the sample set is closed under y -> -y (the beamsplitter reflection
maps grid points to grid points exactly).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np


class Representation(Enum):
    MOMENTUM = "momentum"
    POSITION = "position"


@dataclass(frozen=True)
class Grid:
    """Uniform square sampling lattice with physical half-width.

    Samples along each axis are (i - (n-1)/2) * spacing for i in 0..n-1,
    i.e. offset by half a cell from the origin.  Quadrature is the midpoint
    rule with weight spacing**2 per cell.
    """

    n: int
    half_width: float

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n

    @cached_property
    def axis(self) -> np.ndarray:
        ax = (np.arange(self.n) - (self.n - 1) / 2.0) * self.spacing
        ax.setflags(write=False)
        return ax

    @property
    def weight(self) -> float:
        return self.spacing ** 2

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.axis, self.axis, indexing="ij")

    def conjugate(self) -> "Grid":
        # Fourier-conjugate grid: spacing_out = pi / half_width_in per axis,
        # so that spacing_in * spacing_out = 2 pi / n.  Involutive.
        return Grid(self.n, self.n * np.pi / (2.0 * self.half_width))


def make_grid(n: int, half_width: float) -> Grid:
    """Build a reflection-closed grid; n must be even and >= 8."""
    if n % 2 != 0 or n < 8:
        raise ValueError(f"grid size must be even and >= 8, got {n}")
    if half_width <= 0:
        raise ValueError(f"half_width must be positive, got {half_width}")
    return Grid(n, float(half_width))


@dataclass(frozen=True, eq=False)
class TransverseMode:
    """Complex single-photon amplitude on a 2D grid, values indexed [ix, iy]."""

    values: np.ndarray
    grid: Grid
    representation: Representation

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"values shape {v.shape} does not match grid n={self.grid.n}")
        object.__setattr__(self, "values", v)


def _check_compatible(a: TransverseMode, b: TransverseMode) -> None:
    if a.grid != b.grid:
        raise ValueError("modes live on different grids")
    if a.representation is not b.representation:
        raise ValueError("mixed momentum/position arithmetic is not defined")


def inner_product_2d(a: TransverseMode, b: TransverseMode) -> complex:
    """Midpoint-rule L2 inner product, conjugate-linear in the first slot."""
    _check_compatible(a, b)
    return complex(np.vdot(a.values, b.values) * a.grid.weight)


def mode_norm(a: TransverseMode) -> float:
    return float(np.sqrt(np.sum(np.abs(a.values) ** 2) * a.grid.weight))


def normalize_mode(a: TransverseMode) -> TransverseMode:
    nrm = mode_norm(a)
    if nrm == 0.0:
        raise ValueError("cannot normalize a zero mode")
    return TransverseMode(a.values / nrm, a.grid, a.representation)


def reflect_y(a: TransverseMode) -> TransverseMode:
    """y -> -y reflection; exact on the half-offset grid (index reversal)."""
    return TransverseMode(a.values[:, ::-1], a.grid, a.representation)


def _kernel(grid_in: Grid, grid_out: Grid, sign: int) -> np.ndarray:
    # 1D transform matrix: out_j = sum_k kernel[j, k] * in_k, with the
    # continuum kernel exp(sign * i * x q) / sqrt(2 pi) and midpoint weights.
    phase = sign * 1j * np.outer(grid_out.axis, grid_in.axis)
    return (grid_in.spacing / np.sqrt(2.0 * np.pi)) * np.exp(phase)


def fourier_2d(mode: TransverseMode, direction: str = "forward") -> TransverseMode:
    """Unitary 2D Fourier transform between momentum and position.

    The forward map takes momentum to position with the exp(+i x.q)/(2 pi)
    kernel; the inverse is its adjoint.  The output lives on the conjugate
    grid, and inverse(forward(f)) == f up to roundoff.
    """
    if direction == "forward":
        if mode.representation is not Representation.MOMENTUM:
            raise ValueError("forward transform expects a momentum-representation mode")
        out_rep = Representation.POSITION
        sign = +1
    elif direction == "inverse":
        if mode.representation is not Representation.POSITION:
            raise ValueError("inverse transform expects a position-representation mode")
        out_rep = Representation.MOMENTUM
        sign = -1
    else:
        raise ValueError(f"unknown direction {direction!r}")
    grid_out = mode.grid.conjugate()
    k = _kernel(mode.grid, grid_out, sign)
    values = k @ mode.values @ k.T
    return TransverseMode(values, grid_out, out_rep)


def fourier_kernel_1d(grid_in: Grid, sign: int = +1) -> np.ndarray:
    """The per-axis transform matrix onto the conjugate grid (shared with the
    two-photon factor-wise transform)."""
    return _kernel(grid_in, grid_in.conjugate(), sign)
