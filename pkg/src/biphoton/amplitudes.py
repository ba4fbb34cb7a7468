"""Two-photon amplitude algebra in low-rank product-sum form.

An amplitude Phi(r1, r2) is stored as sum_r c_r f_r(r1) g_r(r2) over a shared
grid.  The exchange-reflection involution sigma (swap photons, flip both
y components) acts term-wise, and the overlap <sigma Phi, Phi> that controls
the beamsplitter coincidence rate reduces to O(R^2) 2D inner products.

A dense 4D form is kept for small grids purely as a brute-force oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grids import Grid, Representation, TransverseMode, fourier_kernel_1d

_DENSE_MAX_N = 32


@dataclass(frozen=True, eq=False)
class TwoPhotonAmplitude:
    """Low-rank two-photon amplitude: coeffs (R,), factors (R, n, n)."""

    coeffs: np.ndarray
    photon1: np.ndarray
    photon2: np.ndarray
    grid: Grid
    representation: Representation
    truncation_error: float | None = field(default=None, compare=False)

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        f1 = np.asarray(self.photon1, dtype=complex)
        f2 = np.asarray(self.photon2, dtype=complex)
        n = self.grid.n
        if f1.shape != (c.size, n, n) or f2.shape != (c.size, n, n):
            raise ValueError("factor arrays must have shape (rank, n, n)")
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "photon1", f1)
        object.__setattr__(self, "photon2", f2)

    @property
    def rank(self) -> int:
        return self.coeffs.size


@dataclass(frozen=True, eq=False)
class DenseAmplitude:
    """Brute-force 4D amplitude indexed (x1, y1, x2, y2); small grids only."""

    values: np.ndarray
    grid: Grid
    representation: Representation

    def __post_init__(self):
        n = self.grid.n
        if n > _DENSE_MAX_N:
            raise ValueError(f"dense form limited to n <= {_DENSE_MAX_N}, got {n}")
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (n, n, n, n):
            raise ValueError("dense values must have shape (n, n, n, n)")
        object.__setattr__(self, "values", v)


def from_modes(terms: list[tuple[complex, TransverseMode, TransverseMode]]) -> TwoPhotonAmplitude:
    """Assemble an (unnormalized) amplitude from (coefficient, f, g) terms."""
    if not terms:
        raise ValueError("need at least one product term")
    _, f0, g0 = terms[0]
    for _, f, g in terms:
        if f.grid != f0.grid or g.grid != f0.grid:
            raise ValueError("all factors must share one grid")
        if f.representation is not f0.representation or g.representation is not f0.representation:
            raise ValueError("all factors must share one representation")
    coeffs = np.array([c for c, _, _ in terms], dtype=complex)
    photon1 = np.stack([f.values for _, f, _ in terms])
    photon2 = np.stack([g.values for _, _, g in terms])
    return TwoPhotonAmplitude(coeffs, photon1, photon2, f0.grid, f0.representation)


def _gram(a: np.ndarray, b: np.ndarray, weight: float) -> np.ndarray:
    # G[r, s] = <a_r, b_s> with midpoint weights.
    ra = a.reshape(a.shape[0], -1)
    rb = b.reshape(b.shape[0], -1)
    return (ra.conj() @ rb.T) * weight


def norm_squared(amp: TwoPhotonAmplitude) -> float:
    g1 = _gram(amp.photon1, amp.photon1, amp.grid.weight)
    g2 = _gram(amp.photon2, amp.photon2, amp.grid.weight)
    val = np.einsum("r,s,rs,rs->", amp.coeffs.conj(), amp.coeffs, g1, g2)
    return float(val.real)


def normalize(amp: TwoPhotonAmplitude) -> TwoPhotonAmplitude:
    nsq = norm_squared(amp)
    if nsq <= 0.0:
        raise ValueError("cannot normalize a zero-norm amplitude")
    return TwoPhotonAmplitude(
        amp.coeffs / np.sqrt(nsq), amp.photon1, amp.photon2,
        amp.grid, amp.representation, amp.truncation_error,
    )


def apply_sigma(amp: TwoPhotonAmplitude) -> TwoPhotonAmplitude:
    """Exchange-reflection involution: (c, f, g) -> (c, Pi_y g, Pi_y f)."""
    return TwoPhotonAmplitude(
        amp.coeffs, amp.photon2[:, :, ::-1], amp.photon1[:, :, ::-1],
        amp.grid, amp.representation,
    )


def _overlap(a: TwoPhotonAmplitude, b: TwoPhotonAmplitude) -> complex:
    g1 = _gram(a.photon1, b.photon1, a.grid.weight)
    g2 = _gram(a.photon2, b.photon2, a.grid.weight)
    return complex(np.einsum("r,s,rs,rs->", a.coeffs.conj(), b.coeffs, g1, g2))


def sigma_overlap(amp: TwoPhotonAmplitude, *, norm_tol: float = 1e-6) -> float:
    """J = <sigma Phi, Phi>, real in [-1, 1] for a normalized amplitude.

    J = 1 for sigma-symmetric amplitudes (perfect coalescence), J = -1 for
    antisymmetric ones (perfect anti-coalescence).
    """
    nsq = norm_squared(amp)
    if abs(nsq - 1.0) > norm_tol:
        raise ValueError(f"amplitude not normalized: ||Phi||^2 = {nsq}")
    j = _overlap(apply_sigma(amp), amp)
    if abs(j.imag) > 1e-10:
        raise AssertionError(f"sigma overlap has imaginary part {j.imag}")
    return j.real


def symmetry_decompose(amp: TwoPhotonAmplitude) -> tuple[float, float]:
    """Norms of the symmetric and antisymmetric parts (Phi +- sigma Phi)/2.

    The weights sum to 1 for a normalized input and equal ((1+J)/2, (1-J)/2);
    they are computed here from the explicit parts, not from J.
    """
    nsq = norm_squared(amp)
    if abs(nsq - 1.0) > 1e-6:
        raise ValueError(f"amplitude not normalized: ||Phi||^2 = {nsq}")
    sig = apply_sigma(amp)

    def _part(sign: float) -> float:
        part = TwoPhotonAmplitude(
            np.concatenate([amp.coeffs, sign * sig.coeffs]) / 2.0,
            np.concatenate([amp.photon1, sig.photon1]),
            np.concatenate([amp.photon2, sig.photon2]),
            amp.grid, amp.representation,
        )
        return max(norm_squared(part), 0.0)  # guard roundoff negatives

    return _part(+1.0), _part(-1.0)


def to_dense(amp: TwoPhotonAmplitude) -> DenseAmplitude:
    if amp.grid.n > _DENSE_MAX_N:
        raise ValueError(f"grid too large for the dense oracle (n = {amp.grid.n})")
    values = np.einsum("r,rab,rcd->abcd", amp.coeffs, amp.photon1, amp.photon2)
    return DenseAmplitude(values, amp.grid, amp.representation)


def dense_sigma(amp: DenseAmplitude) -> DenseAmplitude:
    # (sigma Phi)(q1, q2) = Phi(q2x, -q2y, q1x, -q1y); index reversal is the
    # exact y negation on the half-offset grid.
    values = np.flip(amp.values.transpose(2, 3, 0, 1), axis=(1, 3))
    return DenseAmplitude(values, amp.grid, amp.representation)


def dense_norm_squared(amp: DenseAmplitude) -> float:
    return float(np.sum(np.abs(amp.values) ** 2) * amp.grid.weight ** 2)


def dense_normalize(amp: DenseAmplitude) -> DenseAmplitude:
    nsq = dense_norm_squared(amp)
    if nsq <= 0.0:
        raise ValueError("cannot normalize a zero-norm amplitude")
    return DenseAmplitude(amp.values / np.sqrt(nsq), amp.grid, amp.representation)


def dense_sigma_overlap(amp: DenseAmplitude) -> float:
    j = np.vdot(dense_sigma(amp).values, amp.values) * amp.grid.weight ** 2
    return float(j.real)


def position_representation(amp: TwoPhotonAmplitude) -> TwoPhotonAmplitude:
    """Factor-wise Fourier transform of a momentum amplitude to position."""
    if amp.representation is not Representation.MOMENTUM:
        raise ValueError("amplitude is already in the position representation")
    k = fourier_kernel_1d(amp.grid, sign=+1)
    f1 = np.einsum("ia,rab,jb->rij", k, amp.photon1, k)
    f2 = np.einsum("ia,rab,jb->rij", k, amp.photon2, k)
    return TwoPhotonAmplitude(
        amp.coeffs, f1, f2, amp.grid.conjugate(), Representation.POSITION,
        amp.truncation_error,
    )


def compress(amp: TwoPhotonAmplitude, tol: float = 1e-12) -> TwoPhotonAmplitude:
    """Re-orthogonalize the product-sum and drop terms with coefficient
    magnitude below `tol`; bounds rank growth from repeated operations."""
    s = amp.grid.spacing  # sqrt of the 2D quadrature weight
    a = amp.photon1.reshape(amp.rank, -1).T * s
    b = amp.photon2.reshape(amp.rank, -1).T * s
    q1, r1 = np.linalg.qr(a)
    q2, r2 = np.linalg.qr(b)
    core = r1 @ np.diag(amp.coeffs) @ r2.T
    u, sv, vh = np.linalg.svd(core)
    coeffs = sv
    keep = coeffs > tol
    if not np.any(keep):
        keep[0] = True
    f1 = (q1 @ u)[:, keep].T.reshape(-1, amp.grid.n, amp.grid.n) / s
    f2 = (q2 @ vh.T)[:, keep].T.reshape(-1, amp.grid.n, amp.grid.n) / s
    return TwoPhotonAmplitude(
        coeffs[keep].astype(complex), f1, f2, amp.grid, amp.representation,
        amp.truncation_error,
    )
