"""The 50/50 beamsplitter: output channel probabilities, coincidence rate,
and the one-sided entanglement witness.

The coincidence probability is P_c = (1 - J)/2 with J = <sigma Phi, Phi>:
J = 1 gives perfect coalescence (both photons bunch), J = -1 perfect
anti-coalescence.  Product states always have J = |<f, Pi_y g>|^2 >= 0, so
P_c > 1/2 certifies entanglement; P_c <= 1/2 certifies nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .amplitudes import TwoPhotonAmplitude, apply_sigma, sigma_overlap


@dataclass(frozen=True)
class BsPhases:
    """Unitary beamsplitter phases; they move amplitude phases around but no
    output probability depends on them."""

    phi_tau: float = 0.0
    phi_rho: float = 0.0

    @property
    def phi(self) -> float:
        return self.phi_tau + self.phi_rho


@dataclass(frozen=True, eq=False)
class BsOutput:
    p_both_port1: float
    p_both_port2: float
    p_coincidence: float
    coincidence_amplitude: TwoPhotonAmplitude  # unnormalized (Phi - sigma Phi)/2


class Verdict(Enum):
    ENTANGLED = "entangled"
    INCONCLUSIVE = "inconclusive"


def coincidence_probability(amp: TwoPhotonAmplitude) -> float:
    """P_c = (1 - <sigma Phi, Phi>)/2 for a normalized amplitude."""
    return (1.0 - sigma_overlap(amp)) / 2.0


def beamsplitter_output(amp: TwoPhotonAmplitude, phases: BsPhases = BsPhases()) -> BsOutput:
    """Output channel probabilities of the 50/50 splitter.

    The antisymmetric part of the input exits as a coincidence; the symmetric
    part bunches, split evenly between the two output ports.
    """
    j = sigma_overlap(amp)
    symmetric = (1.0 + j) / 2.0
    sig = apply_sigma(amp)
    coincidence_amp = TwoPhotonAmplitude(
        np.concatenate([amp.coeffs, -sig.coeffs]) / 2.0,
        np.concatenate([amp.photon1, sig.photon1]),
        np.concatenate([amp.photon2, sig.photon2]),
        amp.grid, amp.representation,
    )
    return BsOutput(
        p_both_port1=symmetric / 2.0,
        p_both_port2=symmetric / 2.0,
        p_coincidence=(1.0 - j) / 2.0,
        coincidence_amplitude=coincidence_amp,
    )


def entanglement_witness(amp: TwoPhotonAmplitude, margin: float = 1e-6) -> Verdict:
    """Entangled iff P_c > 1/2 + margin; the witness is one-sided, so the
    alternative is 'inconclusive', never 'separable'."""
    if margin < 0:
        raise ValueError("margin must be non-negative")
    if coincidence_probability(amp) > 0.5 + margin:
        return Verdict.ENTANGLED
    return Verdict.INCONCLUSIVE
