import numpy as np
import pytest

from biphoton import (Representation, TwoPhotonAmplitude, apply_sigma,
                      bell_state, compress, dense_normalize, dense_sigma,
                      dense_sigma_overlap, from_modes, gaussian_g00,
                      hermite_gaussian, make_grid, normalize, norm_squared,
                      oam_ring, position_representation, product_state,
                      sigma_overlap, symmetry_decompose, to_dense)

from _helpers import random_amplitude, small_grid, smooth_random_mode


def test_normalize_idempotent_and_homogeneous():
    rng = np.random.default_rng(0)
    amp = random_amplitude(rng, small_grid())
    again = normalize(amp)
    assert np.abs(again.coeffs - amp.coeffs).max() < 1e-12
    scaled = TwoPhotonAmplitude(3j * amp.coeffs, amp.photon1, amp.photon2,
                                amp.grid, amp.representation)
    assert norm_squared(normalize(scaled)) == pytest.approx(1.0, abs=1e-10)


def test_normalize_rank2_orthonormal_dense_oracle():
    g = small_grid()
    f = hermite_gaussian(1, 0, 1.0, g)
    h = hermite_gaussian(0, 1, 1.0, g)
    amp = normalize(from_modes([(1.0, f, f), (1.0, h, h)]))
    assert np.abs(amp.coeffs).max() == pytest.approx(1 / np.sqrt(2), abs=1e-10)
    dense = to_dense(amp)
    dn = np.sum(np.abs(dense.values) ** 2) * g.weight ** 2
    assert dn == pytest.approx(1.0, abs=1e-10)


def test_normalize_zero_rejected():
    g = small_grid()
    zero = TwoPhotonAmplitude(np.zeros(1), np.zeros((1, g.n, g.n)),
                              np.zeros((1, g.n, g.n)), g, Representation.MOMENTUM)
    with pytest.raises(ValueError):
        normalize(zero)


def test_sigma_is_involution_exact():
    rng = np.random.default_rng(1)
    amp = random_amplitude(rng, small_grid(), rank=4)
    twice = apply_sigma(apply_sigma(amp))
    assert np.array_equal(twice.photon1, amp.photon1)
    assert np.array_equal(twice.photon2, amp.photon2)
    assert np.array_equal(twice.coeffs, amp.coeffs)


def test_sigma_on_even_product_is_exchange():
    g = small_grid()
    f = gaussian_g00(1.0, g)
    h = hermite_gaussian(2, 0, 1.0, g)  # y-even
    amp = from_modes([(1.0, f, h)])
    sig = apply_sigma(amp)
    assert np.abs(sig.photon1[0] - h.values).max() < 1e-14
    assert np.abs(sig.photon2[0] - f.values).max() < 1e-14


def test_sigma_fixes_opposite_oam_ring_pair():
    g = make_grid(32, 8.0)
    amp = normalize(from_modes([(1.0, oam_ring(2, 1.0, g), oam_ring(-2, 1.0, g))]))
    sig = apply_sigma(amp)
    d1 = to_dense(amp).values
    d2 = to_dense(sig).values
    assert np.abs(d1 - d2).max() < 1e-12


def test_sigma_overlap_symmetric_antisymmetric():
    g = make_grid(32, 8.0)
    assert sigma_overlap(bell_state("psi-minus", 1, 1.0, g)) == pytest.approx(-1.0, abs=1e-10)
    assert sigma_overlap(bell_state("psi-plus", 1, 1.0, g)) == pytest.approx(1.0, abs=1e-10)


def test_sigma_overlap_product_nonnegative():
    rng = np.random.default_rng(2)
    g = small_grid()
    for _ in range(25):
        amp = product_state(smooth_random_mode(rng, g), smooth_random_mode(rng, g))
        assert sigma_overlap(amp) >= -1e-10


def test_sigma_overlap_requires_normalization():
    rng = np.random.default_rng(3)
    amp = random_amplitude(rng, small_grid())
    bad = TwoPhotonAmplitude(amp.coeffs * 2.0, amp.photon1, amp.photon2,
                             amp.grid, amp.representation)
    with pytest.raises(ValueError):
        sigma_overlap(bad)


def test_symmetry_decompose_matches_overlap():
    rng = np.random.default_rng(4)
    for seed in range(5):
        amp = random_amplitude(np.random.default_rng(seed), small_grid())
        j = sigma_overlap(amp)
        sym, asym = symmetry_decompose(amp)
        assert sym + asym == pytest.approx(1.0, abs=1e-10)
        assert sym == pytest.approx((1 + j) / 2, abs=1e-10)
        assert asym == pytest.approx((1 - j) / 2, abs=1e-10)


def test_symmetry_decompose_bell():
    g = make_grid(32, 8.0)
    assert symmetry_decompose(bell_state("psi-minus", 1, 1.0, g)) == pytest.approx((0.0, 1.0), abs=1e-10)
    assert symmetry_decompose(bell_state("phi-plus", 1, 1.0, g)) == pytest.approx((1.0, 0.0), abs=1e-10)


def test_symmetry_decompose_equal_mixture():
    g = make_grid(32, 8.0)
    sym_part = bell_state("phi-plus", 1, 1.0, g)
    asym_part = bell_state("psi-minus", 1, 1.0, g)
    mix = normalize(TwoPhotonAmplitude(
        np.concatenate([sym_part.coeffs, asym_part.coeffs]),
        np.concatenate([sym_part.photon1, asym_part.photon1]),
        np.concatenate([sym_part.photon2, asym_part.photon2]),
        g, Representation.MOMENTUM))
    assert symmetry_decompose(mix) == pytest.approx((0.5, 0.5), abs=1e-10)


def test_to_dense_rank1_outer_product():
    rng = np.random.default_rng(5)
    g = small_grid()
    f = smooth_random_mode(rng, g)
    h = smooth_random_mode(rng, g)
    dense = to_dense(from_modes([(1.0, f, h)]))
    expected = np.einsum("ab,cd->abcd", f.values, h.values)
    assert np.abs(dense.values - expected).max() < 1e-14


def test_to_dense_rejects_large_grids():
    g = make_grid(64, 8.0)
    amp = bell_state("psi-plus", 1, 1.0, g)
    with pytest.raises(ValueError):
        to_dense(amp)


def test_dense_oracle_agrees_on_overlap_and_norm():
    for seed in range(10):
        rng = np.random.default_rng(seed)
        amp = random_amplitude(rng, small_grid(), rank=3)
        dense = to_dense(amp)
        assert dense_sigma_overlap(dense) == pytest.approx(sigma_overlap(amp), abs=1e-10)
        dn = np.sum(np.abs(dense.values) ** 2) * amp.grid.weight ** 2
        assert dn == pytest.approx(norm_squared(amp), abs=1e-10)


def test_dense_sigma_is_involution():
    rng = np.random.default_rng(6)
    dense = dense_normalize(to_dense(random_amplitude(rng, small_grid())))
    assert np.array_equal(dense_sigma(dense_sigma(dense)).values, dense.values)


def test_position_representation_preserves_overlap():
    for seed in range(5):
        amp = random_amplitude(np.random.default_rng(seed), small_grid())
        pos = position_representation(amp)
        assert pos.representation is Representation.POSITION
        assert norm_squared(pos) == pytest.approx(1.0, abs=1e-8)
        assert sigma_overlap(pos) == pytest.approx(sigma_overlap(amp), abs=1e-8)


def test_position_representation_preserves_factor_parity():
    g = small_grid()
    odd = hermite_gaussian(0, 1, 1.0, g)
    amp = position_representation(from_modes([(1.0, odd, odd)]))
    for factor in (amp.photon1[0], amp.photon2[0]):
        assert np.abs(factor + factor[:, ::-1]).max() < 1e-12


def test_position_representation_rejects_position_input():
    rng = np.random.default_rng(7)
    amp = random_amplitude(rng, small_grid(16, 3.0),
                           representation=Representation.POSITION)
    with pytest.raises(ValueError):
        position_representation(amp)


def test_compress_reduces_padded_rank():
    rng = np.random.default_rng(8)
    amp = random_amplitude(rng, small_grid(), rank=3)
    # duplicate the terms with split coefficients: rank 6 but true rank 3
    padded = TwoPhotonAmplitude(
        np.concatenate([amp.coeffs / 2, amp.coeffs / 2]),
        np.concatenate([amp.photon1, amp.photon1]),
        np.concatenate([amp.photon2, amp.photon2]),
        amp.grid, amp.representation)
    squeezed = compress(padded, tol=1e-10)
    assert squeezed.rank == 3
    assert norm_squared(squeezed) == pytest.approx(1.0, abs=1e-10)
    assert sigma_overlap(squeezed) == pytest.approx(sigma_overlap(amp), abs=1e-10)
