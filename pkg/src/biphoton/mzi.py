"""Mach-Zehnder interferometer with two identical spiral phase plates.

The MZI acts only on beam 1.  Transmission and reflection through the two
arms superpose the SPP phases exp(+i zeta theta) and exp(-i zeta theta), so
the beam that reaches the final beamsplitter carries a sine envelope
sin[zeta (theta1 - pi) + alpha_plus] while part of the light leaves through
the discarded port.  We report the coincidence probability conditioned on
both photons reaching the last beamsplitter, together with the survival
probability (throughput) of photon 1.

Propagation between the SPPs and the last beamsplitter is taken as zero.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .amplitudes import (TwoPhotonAmplitude, normalize, norm_squared,
                         position_representation)
from .errors import DegenerateInterferenceError
from .grids import Grid, Representation, TransverseMode, make_grid
from .interference import coincidence_probability
from .states import GaussianBeamParams, thin_crystal_gaussian

_ETA_FLOOR = 1e-12


@dataclass(frozen=True)
class SppParams:
    """Spiral-phase-plate winding parameter; non-integer values are allowed
    (the plate then has a phase discontinuity along theta = 0)."""

    zeta: float


@dataclass(frozen=True)
class MziPhases:
    """Aggregate interferometer phases entering the sine envelope."""

    alpha_plus: float
    alpha_minus: float = 0.0

    @classmethod
    def from_raw(cls, phi: float, phi_1tau: float, phi_1rho: float,
                 phi_2tau: float, phi_2rho: float) -> "MziPhases":
        common = phi + phi_1tau + phi_2tau
        diff = phi_1rho - phi_2rho
        return cls(alpha_plus=(common + diff) / 2.0, alpha_minus=(common - diff) / 2.0)


@dataclass(frozen=True)
class MziGeometry:
    """Propagation distances, photon wavenumber and aperture.

    The aperture is aperture_factor times the spot size w(z): a disc of
    radius aperture_factor * w(z) when circular (the default, which is what
    converges to the delta-correlation limit), otherwise the full square
    grid of half-width aperture_factor * w(z).
    """

    z1: float
    z2: float
    k: float = 1.0
    aperture_factor: float = 40.0
    circular: bool = True

    def __post_init__(self):
        if self.z1 < 0 or self.z2 < 0:
            raise ValueError("propagation distances must be non-negative")
        if self.aperture_factor < 4.0:
            warnings.warn("aperture_factor below 4 barely covers the biphoton "
                          "correlation width; results will be aperture-dominated",
                          stacklevel=2)


@dataclass(frozen=True)
class MziResult:
    conditional_pc: float
    throughput_eta: float
    parameters: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ScanRow:
    parameter: float
    conditional_pc: float
    oracle_pc: float
    throughput: float
    flag: str


@dataclass(frozen=True)
class ScanResult:
    parameter_name: str
    rows: list[ScanRow]
    metadata: dict


def azimuth(grid: Grid) -> np.ndarray:
    """Azimuthal angle in [0, 2 pi) at every grid sample.  The half-cell
    offset guarantees the origin itself is never sampled."""
    x, y = grid.meshgrid()
    return np.mod(np.arctan2(y, x), 2.0 * np.pi)


def fresnel_phase(amp: TwoPhotonAmplitude, z1: float, z2: float, k: float) -> TwoPhotonAmplitude:
    """Paraxial propagation phase exp[i k z - i |q|^2 z / (2k)] applied to
    photon 1 over z1 and photon 2 over z2 (momentum representation)."""
    if amp.representation is not Representation.MOMENTUM:
        raise ValueError("fresnel_phase acts in the momentum representation")
    qx, qy = amp.grid.meshgrid()
    q2 = qx ** 2 + qy ** 2
    ph1 = np.exp(1j * (k * z1 - q2 * z1 / (2.0 * k)))
    ph2 = np.exp(1j * (k * z2 - q2 * z2 / (2.0 * k)))
    return TwoPhotonAmplitude(
        amp.coeffs, amp.photon1 * ph1, amp.photon2 * ph2,
        amp.grid, amp.representation, amp.truncation_error,
    )


def spp_phase(mode: TransverseMode, zeta: float) -> TransverseMode:
    """Pointwise spiral phase exp(i zeta theta)."""
    return TransverseMode(
        mode.values * np.exp(1j * zeta * azimuth(mode.grid)),
        mode.grid, mode.representation,
    )


def circular_aperture(amp: TwoPhotonAmplitude) -> TwoPhotonAmplitude:
    """Clip both photons to the disc inscribed in the grid and renormalize."""
    x, y = amp.grid.meshgrid()
    mask = (x ** 2 + y ** 2 <= amp.grid.half_width ** 2).astype(float)
    return normalize(TwoPhotonAmplitude(
        amp.coeffs, amp.photon1 * mask, amp.photon2 * mask,
        amp.grid, amp.representation, amp.truncation_error,
    ))


def sine_envelope(grid: Grid, zeta: float, alpha_plus: float) -> np.ndarray:
    return np.sin(zeta * (azimuth(grid) - np.pi) + alpha_plus)


def mzi_effective_amplitude(amp: TwoPhotonAmplitude, spp: SppParams,
                            phases: MziPhases) -> tuple[TwoPhotonAmplitude, float]:
    """Attach the MZI sine envelope to photon 1 of a normalized position-space
    amplitude.  Returns the renormalized amplitude and the throughput eta
    (its squared norm before renormalization).  Rank is unchanged.

    The overall prefactor i exp[i (zeta pi + alpha_minus)] is a global phase
    and is dropped.
    """
    if amp.representation is not Representation.POSITION:
        raise ValueError("the sine envelope acts in the position representation")
    envelope = sine_envelope(amp.grid, spp.zeta, phases.alpha_plus)
    out = TwoPhotonAmplitude(
        amp.coeffs, amp.photon1 * envelope, amp.photon2,
        amp.grid, amp.representation, amp.truncation_error,
    )
    eta = norm_squared(out)
    if eta < _ETA_FLOOR:
        raise DegenerateInterferenceError(
            f"MZI output vanished (eta = {eta:.3e}) for zeta = {spp.zeta}, "
            f"alpha_plus = {phases.alpha_plus}")
    return normalize(out), float(eta)


def _thin_crystal_fast(source: GaussianBeamParams, spp: SppParams, phases: MziPhases,
                       geom: MziGeometry, grid_n: int) -> MziResult:
    # Exact reorganization of the discrete 4D quadrature: the biphoton weight
    # depends only on x1 + x2 (the phase factors cancel pointwise between
    # Phi(1,2) and Phi*(sigma(1,2))), so both the sigma overlap and the norm
    # are Gaussian-weighted sums over linear convolutions, O(n^2 log n).
    w = source.spot_size
    grid = make_grid(grid_n, geom.aperture_factor * w)
    x, y = grid.meshgrid()
    if geom.circular:
        mask = (x ** 2 + y ** 2 <= grid.half_width ** 2).astype(float)
    else:
        mask = np.ones_like(x)
    envelope = sine_envelope(grid, spp.zeta, phases.alpha_plus) * mask
    n = grid.n
    sum_axis = (np.arange(2 * n - 1) - (n - 1)) * grid.spacing
    u, v = np.meshgrid(sum_axis, sum_axis, indexing="ij")
    gauss = np.exp(-(u ** 2 + v ** 2) / (2.0 * w ** 2))
    num = float(np.sum(gauss * fftconvolve(envelope, envelope[:, ::-1])))
    den = float(np.sum(gauss * fftconvolve(envelope ** 2, mask)))
    tot = float(np.sum(gauss * fftconvolve(mask, mask)))
    if den / tot < _ETA_FLOOR:
        raise DegenerateInterferenceError(
            f"MZI output vanished for zeta = {spp.zeta}, alpha_plus = {phases.alpha_plus}")
    return MziResult(
        conditional_pc=(1.0 - num / den) / 2.0,
        throughput_eta=den / tot,
        parameters={"zeta": spp.zeta, "alpha_plus": phases.alpha_plus,
                    "aperture_factor": geom.aperture_factor, "grid_n": grid_n,
                    "z": source.z, "waist": source.waist, "circular": geom.circular},
    )


def mzi_coincidence(source, spp: SppParams, phases: MziPhases, geom: MziGeometry,
                    *, grid_n: int = 1024, waist: float = 1.0) -> MziResult:
    """Conditional coincidence probability and throughput at the last BS.

    `source` may be:
      * None - thin-crystal Gaussian biphoton with the default waist,
        propagated z = z1 = z2 (requires equal arms);
      * GaussianBeamParams - thin-crystal biphoton with those parameters
        (fast dedicated path, exact for this source);
      * TwoPhotonAmplitude - generic low-rank state; momentum-representation
        input is propagated (Fresnel) and Fourier-transformed, a
        position-representation input is taken as already at the last BS.
    """
    if source is None:
        if geom.z1 != geom.z2:
            raise ValueError("the default thin-crystal source assumes z1 == z2")
        source = GaussianBeamParams(waist, geom.z1, 2.0 * geom.k)
    if isinstance(source, GaussianBeamParams):
        if not (geom.z1 == geom.z2 == source.z):
            raise ValueError("thin-crystal source requires z1 == z2 == source.z")
        return _thin_crystal_fast(source, spp, phases, geom, grid_n)
    amp = source
    if amp.representation is Representation.MOMENTUM:
        amp = position_representation(fresnel_phase(amp, geom.z1, geom.z2, geom.k))
    if geom.circular:
        amp = circular_aperture(amp)
    effective, eta = mzi_effective_amplitude(amp, spp, phases)
    return MziResult(
        conditional_pc=coincidence_probability(effective),
        throughput_eta=eta,
        parameters={"zeta": spp.zeta, "alpha_plus": phases.alpha_plus,
                    "grid_n": amp.grid.n, "circular": geom.circular},
    )


def delta_limit_oracle(spp: SppParams, phases: MziPhases, nodes: int = 4096) -> float:
    """Infinite-aperture limit of the MZI coincidence probability.

    With an aperture much larger than the spot size the biphoton enforces
    x2 = -x1, i.e. theta2 = theta1 + pi, and the 4D overlap collapses to a 1D
    angular integral.  The reflected photon-2 angle is then (pi - theta1)
    mod 2 pi, so

        P_c = (1/2) (1 - I),
        I = int S(theta) S((pi - theta) mod 2 pi) dtheta / int S(theta)^2 dtheta,

    with S(theta) = sin[zeta (theta - pi) + alpha_plus].  For integer zeta
    this evaluates to (1/2)[1 + (-1)^zeta cos(2 alpha_plus)].
    """
    if nodes < 4096:
        raise ValueError("use at least 4096 quadrature nodes")
    theta = (np.arange(nodes) + 0.5) * 2.0 * np.pi / nodes
    s = np.sin(spp.zeta * (theta - np.pi) + phases.alpha_plus)
    reflected = np.mod(np.pi - theta, 2.0 * np.pi)
    s_ref = np.sin(spp.zeta * (reflected - np.pi) + phases.alpha_plus)
    den = float(np.sum(s * s))
    if den / nodes < _ETA_FLOOR:
        raise DegenerateInterferenceError(
            f"sine envelope vanishes identically for zeta = {spp.zeta}, "
            f"alpha_plus = {phases.alpha_plus}")
    return (1.0 - float(np.sum(s * s_ref)) / den) / 2.0


def _scan_row(value: float, parameter: str, spp: SppParams, phases: MziPhases,
              geom: MziGeometry, grid_n: int, waist: float) -> ScanRow:
    if parameter == "zeta":
        spp = SppParams(zeta=value)
    else:
        phases = MziPhases(alpha_plus=value, alpha_minus=phases.alpha_minus)
    try:
        full = mzi_coincidence(None, spp, phases, geom, grid_n=grid_n, waist=waist)
        oracle = delta_limit_oracle(spp, phases)
        return ScanRow(value, full.conditional_pc, oracle, full.throughput_eta, "ok")
    except DegenerateInterferenceError:
        return ScanRow(value, np.nan, np.nan, np.nan, "degenerate")


def scan(parameter: str, lo: float, hi: float, steps: int, *,
         spp: SppParams = SppParams(1.0), phases: MziPhases = MziPhases(0.0),
         geom: MziGeometry = MziGeometry(1.0, 1.0), grid_n: int = 1024,
         waist: float = 1.0) -> ScanResult:
    """Sweep zeta or alpha_plus; each row carries the full finite-aperture
    result, the infinite-aperture oracle, and the throughput.  Degenerate
    rows are flagged instead of aborting the sweep."""
    if parameter not in ("zeta", "alpha_plus"):
        raise ValueError(f"scan parameter must be 'zeta' or 'alpha_plus', got {parameter!r}")
    if steps < 2:
        raise ValueError("need at least 2 scan steps")
    if not lo < hi:
        raise ValueError("scan range must satisfy lo < hi")
    values = np.linspace(lo, hi, steps)
    n_workers = int(os.environ.get("BIPHOTON_THREADS", "1"))
    args = [(float(v), parameter, spp, phases, geom, grid_n, waist) for v in values]
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            rows = list(pool.map(lambda a: _scan_row(*a), args))
    else:
        rows = [_scan_row(*a) for a in args]
    metadata = {
        "parameter": parameter, "lo": lo, "hi": hi, "steps": steps,
        "zeta": spp.zeta, "alpha_plus": phases.alpha_plus,
        "z1": geom.z1, "z2": geom.z2, "k": geom.k,
        "aperture_factor": geom.aperture_factor, "circular": geom.circular,
        "grid_n": grid_n, "waist": waist,
        "reference_pc": 0.5,  # no-interference baseline
    }
    return ScanResult(parameter, rows, metadata)
