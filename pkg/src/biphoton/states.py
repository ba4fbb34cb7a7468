"""Factories for the physical states: OAM rings and Bell pairs, Gaussian and
Hermite-Gaussian pump modes, SPDC biphotons, and the thin-crystal Gaussian
state after propagation.

Conventions:
  * Gaussian pump, momentum space: v(q) ~ exp(-|q|^2 w0^2 / 4), whose
    position-space partner is exp(-|x|^2 / w0^2).
  * HG_mn follows the same scaling, H_m(qx w0/sqrt2) H_n(qy w0/sqrt2) times
    the Gaussian in momentum space (m along x, n along y); the y-parity is
    (-1)^n, exact on the reflection-closed grid.
  * OAM ring |l>: q^|l| exp(-q^2 w0^2/4) e^{i l theta} (Laguerre-Gauss p=0
    radial profile; the interference results do not depend on this choice).
All outputs are normalized on the grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import eval_hermite

from .amplitudes import TwoPhotonAmplitude, from_modes, normalize
from .errors import TruncationError
from .grids import Grid, Representation, TransverseMode, normalize_mode

_MAX_DENSE_SPDC_N = 48


def _mesh(grid: Grid):
    return grid.meshgrid()


def gaussian_g00(w0: float, grid: Grid,
                 representation: Representation = Representation.MOMENTUM) -> TransverseMode:
    """Fundamental Gaussian mode, normalized on the grid."""
    if w0 <= 0:
        raise ValueError("waist must be positive")
    _check_resolution(w0, grid, representation)
    qx, qy = _mesh(grid)
    if representation is Representation.MOMENTUM:
        values = np.exp(-(qx ** 2 + qy ** 2) * w0 ** 2 / 4.0)
    else:
        values = np.exp(-(qx ** 2 + qy ** 2) / w0 ** 2)
    return normalize_mode(TransverseMode(values, grid, representation))


def _check_resolution(w0: float, grid: Grid, representation: Representation) -> None:
    # Require at least 4 samples across the 1/e^2 intensity width.
    width = 4.0 / w0 if representation is Representation.MOMENTUM else 2.0 * w0
    if grid.spacing * 4.0 > width:
        raise ValueError(
            f"grid spacing {grid.spacing:g} does not resolve a mode of waist {w0:g}")


def hermite_gaussian(m: int, n: int, w0: float, grid: Grid,
                     representation: Representation = Representation.MOMENTUM) -> TransverseMode:
    """HG_mn mode with m along x and n along y; y-parity is (-1)^n."""
    if m < 0 or n < 0:
        raise ValueError("mode indices must be non-negative")
    _check_resolution(w0, grid, representation)
    qx, qy = _mesh(grid)
    if representation is Representation.MOMENTUM:
        sx, sy = qx * w0 / np.sqrt(2.0), qy * w0 / np.sqrt(2.0)
        env = np.exp(-(qx ** 2 + qy ** 2) * w0 ** 2 / 4.0)
    else:
        sx, sy = np.sqrt(2.0) * qx / w0, np.sqrt(2.0) * qy / w0
        env = np.exp(-(qx ** 2 + qy ** 2) / w0 ** 2)
    values = eval_hermite(m, sx) * eval_hermite(n, sy) * env
    return normalize_mode(TransverseMode(values, grid, representation))


def oam_ring(l: int, w0: float, grid: Grid,
             representation: Representation = Representation.MOMENTUM) -> TransverseMode:
    """Ring mode R(q) e^{i l theta}; y-reflection maps it to the -l mode."""
    qx, qy = _mesh(grid)
    q = np.hypot(qx, qy)
    theta = np.arctan2(qy, qx)
    radial = q ** abs(l) * np.exp(-q ** 2 * w0 ** 2 / 4.0)
    return normalize_mode(
        TransverseMode(radial * np.exp(1j * l * theta), grid, representation))


_BELL_KINDS = {
    "psi-plus": ("psi", +1.0),
    "psi-minus": ("psi", -1.0),
    "phi-plus": ("phi", +1.0),
    "phi-minus": ("phi", -1.0),
}


def bell_state(kind: str, l: int, w0: float, grid: Grid) -> TwoPhotonAmplitude:
    """OAM Bell state: |Psi+-> = (|l,l> +- |-l,-l>)/sqrt2,
    |Phi+-> = (|l,-l> +- |-l,l>)/sqrt2."""
    if kind not in _BELL_KINDS:
        raise ValueError(f"unknown Bell state {kind!r}; choose from {sorted(_BELL_KINDS)}")
    if l == 0:
        raise ValueError("Bell states are degenerate for l = 0")
    family, sign = _BELL_KINDS[kind]
    plus = oam_ring(l, w0, grid)
    minus = oam_ring(-l, w0, grid)
    if family == "psi":
        terms = [(1.0, plus, plus), (sign, minus, minus)]
    else:
        terms = [(1.0, plus, minus), (sign, minus, plus)]
    return normalize(from_modes(terms))


def product_state(f: TransverseMode, g: TransverseMode) -> TwoPhotonAmplitude:
    """Non-entangled pair Phi(q1, q2) = f(q1) g(q2), normalized."""
    return normalize(from_modes([(1.0, f, g)]))


@dataclass(frozen=True)
class PumpMode:
    """Closed-form pump angular spectrum, evaluated analytically at q1 + q2."""

    kind: str  # "gaussian" or "hermite"
    waist: float
    m: int = 0
    n: int = 0

    def evaluate(self, qx: np.ndarray, qy: np.ndarray) -> np.ndarray:
        env = np.exp(-(qx ** 2 + qy ** 2) * self.waist ** 2 / 4.0)
        if self.kind == "gaussian":
            return env
        if self.kind == "hermite":
            s = self.waist / np.sqrt(2.0)
            return eval_hermite(self.m, qx * s) * eval_hermite(self.n, qy * s) * env
        raise ValueError(f"unknown pump kind {self.kind!r}")

    @property
    def y_parity(self) -> int:
        return 1 if self.kind == "gaussian" else (-1) ** self.n


@dataclass(frozen=True)
class SpdcParams:
    crystal_length: float
    pump_wavenumber: float
    pump: PumpMode

    def __post_init__(self):
        if self.crystal_length <= 0 or self.pump_wavenumber <= 0:
            raise ValueError("crystal length and pump wavenumber must be positive")


def _sinc(x: np.ndarray) -> np.ndarray:
    return np.sinc(x / np.pi)  # sin(x)/x with sinc(0) = 1


def spdc_state(params: SpdcParams, grid: Grid, *,
               rank_tol: float = 1e-6, max_rank: int | None = None) -> TwoPhotonAmplitude:
    """Down-converted pair v(q1+q2) sinc(L |q1-q2|^2 / (4 k_p)), normalized,
    rank-compressed across the photon split by a truncated SVD.

    The achieved relative norm error of the truncation is stored on the
    returned amplitude as `truncation_error`.
    """
    n = grid.n
    if n > _MAX_DENSE_SPDC_N:
        raise ValueError(
            f"spdc_state factorizes through a dense (n^2, n^2) unfolding; "
            f"n = {n} exceeds the supported maximum {_MAX_DENSE_SPDC_N}")
    ax = grid.axis
    sum_x = ax[:, None, None, None] + ax[None, None, :, None]   # q1x + q2x
    sum_y = ax[None, :, None, None] + ax[None, None, None, :]   # q1y + q2y
    diff_x = ax[:, None, None, None] - ax[None, None, :, None]
    diff_y = ax[None, :, None, None] - ax[None, None, None, :]
    pump = params.pump.evaluate(sum_x, sum_y)
    phase_match = _sinc(params.crystal_length * (diff_x ** 2 + diff_y ** 2)
                        / (4.0 * params.pump_wavenumber))
    dense = (pump * phase_match).reshape(n * n, n * n)
    u, sv, vh = np.linalg.svd(dense, full_matrices=False)
    total = float(np.sum(sv ** 2))
    tail = total - np.cumsum(sv ** 2)
    rank = int(np.searchsorted(-tail, -rank_tol ** 2 * total) + 1)
    rank = min(rank, sv.size)
    if max_rank is not None and rank > max_rank:
        raise TruncationError(
            f"rank {rank} needed for tolerance {rank_tol:g}, cap is {max_rank}")
    err = float(np.sqrt(max(tail[rank - 1], 0.0) / total))
    amp = TwoPhotonAmplitude(
        sv[:rank].astype(complex),
        u[:, :rank].T.reshape(rank, n, n),
        vh[:rank].reshape(rank, n, n),
        grid, Representation.MOMENTUM, truncation_error=err,
    )
    return normalize(amp)


@dataclass(frozen=True)
class GaussianBeamParams:
    """Gaussian-beam propagation parameters for the thin-crystal biphoton."""

    waist: float
    z: float
    pump_wavenumber: float

    def __post_init__(self):
        if self.waist <= 0 or self.pump_wavenumber <= 0:
            raise ValueError("waist and pump wavenumber must be positive")
        if self.z < 0:
            raise ValueError("propagation distance must be non-negative")

    @property
    def rayleigh_length(self) -> float:
        return self.pump_wavenumber * self.waist ** 2 / 2.0

    @property
    def spot_size(self) -> float:
        return self.waist * np.sqrt(1.0 + (self.z / self.rayleigh_length) ** 2)

    @property
    def curvature_radius(self) -> float:
        if self.z == 0.0:
            return np.inf
        return (self.z ** 2 + self.rayleigh_length ** 2) / self.z


def thin_crystal_gaussian(params: GaussianBeamParams, grid: Grid, *,
                          include_phase: bool = True, rank_tol: float = 1e-6,
                          max_rank: int = 4096) -> TwoPhotonAmplitude:
    """Position-space biphoton from a thin crystal pumped by a Gaussian:

        Psi ~ exp{-|x1+x2|^2/(4 w^2(z))
               + i (k_p/4) [z0^2 |x1-x2|^2 / (2 z^2 R(z)) + (|x1|^2+|x2|^2)/R(z)]}

    The amplitude separates per Cartesian axis, so the photon-split
    factorization is built from a single per-axis SVD; at z = 0 the phase
    terms vanish (R -> infinity).  The achieved relative truncation error is
    stored on the result as `truncation_error`.
    """
    w = params.spot_size
    ax = grid.axis
    s = ax[:, None]
    t = ax[None, :]
    exponent = -((s + t) ** 2) / (4.0 * w ** 2)
    if include_phase and params.z > 0.0:
        kp = params.pump_wavenumber
        z0 = params.rayleigh_length
        r = params.curvature_radius
        exponent = exponent + 1j * (kp / 4.0) * (
            z0 ** 2 * (s - t) ** 2 / (2.0 * params.z ** 2 * r)
            + (s ** 2 + t ** 2) / r)
    psi_axis = np.exp(exponent)
    u, sv, vh = np.linalg.svd(psi_axis)
    # Pair weights sigma_k sigma_k' over the two axes, truncated together.
    pair_w = np.outer(sv, sv).ravel()
    order = np.argsort(pair_w)[::-1]
    total = float(np.sum(pair_w ** 2))
    tail = total - np.cumsum(pair_w[order] ** 2)
    rank = int(np.searchsorted(-tail, -rank_tol ** 2 * total) + 1)
    rank = min(rank, pair_w.size)
    if rank > max_rank:
        raise TruncationError(
            f"rank {rank} needed for tolerance {rank_tol:g}, cap is {max_rank}; "
            f"reduce the aperture or loosen the tolerance")
    err = float(np.sqrt(max(tail[rank - 1], 0.0) / total))
    kept = order[:rank]
    kx, ky = np.unravel_index(kept, (sv.size, sv.size))
    photon1 = u[:, kx].T[:, :, None] * u[:, ky].T[:, None, :]
    photon2 = vh[kx][:, :, None] * vh[ky][:, None, :]
    amp = TwoPhotonAmplitude(
        pair_w[kept].astype(complex), photon1, photon2,
        grid, Representation.POSITION, truncation_error=err,
    )
    return normalize(amp)
