import numpy as np
import pytest

from ftrpca import (
    DimensionMismatch,
    ImageTooSmall,
    MetricsReport,
    NegativeThreshold,
    Tensor3,
    ZeroReference,
    age,
    compute_metrics,
    msssim,
    pceps,
    peps,
    psnr,
    rse,
)
from ftrpca.metrics import luminance


class TestLuminance:
    def test_gray_passthrough(self):
        img = np.arange(12.0).reshape(3, 4)
        np.testing.assert_array_equal(luminance(img), img)

    def test_rgb_weights(self):
        img = np.zeros((2, 2, 3))
        img[..., 0] = 100.0
        np.testing.assert_allclose(luminance(img), 29.9)
        img = np.ones((2, 2, 3)) * 50.0
        np.testing.assert_allclose(luminance(img), 50.0)

    def test_rejects_other_shapes(self):
        with pytest.raises(DimensionMismatch):
            luminance(np.zeros((2, 2, 4)))


class TestPsnrRse:
    def test_psnr_hand_value(self):
        ref = np.full((10, 10), 255.0)
        test = ref.copy()
        test[0, 0] = 254.0
        # 10*log10(100 * 255^2 / 1)
        assert psnr(ref, test) == pytest.approx(10 * np.log10(100 * 255.0**2))

    def test_identical_is_inf(self):
        a = np.random.default_rng(0).uniform(0, 255, (8, 8))
        assert psnr(a, a.copy()) == np.inf

    def test_cross_identity(self):
        rng = np.random.default_rng(1)
        a = rng.uniform(1, 255, (16, 16))
        b = a + rng.normal(0, 5, a.shape)
        # psnr = 10 log10(n peak^2 / (rse * ||a||)^2)
        lhs = psnr(a, b)
        rhs = 10 * np.log10(
            a.size * np.abs(a).max() ** 2 / (rse(a, b) * np.linalg.norm(a)) ** 2
        )
        assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_zero_reference_rejected(self):
        z = np.zeros((4, 4))
        with pytest.raises(ZeroReference):
            psnr(z, z)
        with pytest.raises(ZeroReference):
            rse(z, np.ones((4, 4)))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            psnr(np.zeros((3, 3)), np.zeros((4, 4)))

    def test_accepts_tensor3(self):
        t = Tensor3(np.full((4, 4, 2), 10.0))
        assert rse(t, t) == 0.0

    def test_rse_doubled_and_zeroed_reference(self):
        rng = np.random.default_rng(6)
        a = rng.uniform(1.0, 9.0, size=(5, 5))
        assert rse(a, 2.0 * a) == pytest.approx(1.0)
        assert rse(a, np.zeros_like(a)) == pytest.approx(1.0)

    def test_psnr_scale_invariant(self):
        rng = np.random.default_rng(7)
        a = rng.uniform(10.0, 200.0, size=(6, 6))
        b = a + rng.normal(0.0, 3.0, size=(6, 6))
        assert psnr(3.0 * a, 3.0 * b) == pytest.approx(psnr(a, b), abs=1e-9)


class TestAge:
    def test_constant_shift(self):
        a = np.full((6, 6), 100.0)
        assert age(a, a + 3.0) == pytest.approx(3.0)

    def test_half_off_by_two(self):
        a = np.full((4, 6), 50.0)
        b = a.copy()
        b[:2, :] += 2.0
        assert age(a, b) == pytest.approx(1.0)

    def test_symmetric(self):
        rng = np.random.default_rng(8)
        a = rng.uniform(0.0, 255.0, size=(8, 8))
        b = rng.uniform(0.0, 255.0, size=(8, 8))
        assert age(a, b) == pytest.approx(age(b, a))
        assert peps(a, b) == peps(b, a)
        assert pceps(a, b) == pceps(b, a)

    def test_color_reduces_to_luminance(self):
        a = np.zeros((4, 4, 3))
        b = a.copy()
        b[..., 0] = 10.0  # raises luminance by 2.99
        assert age(a, b) == pytest.approx(2.99)


class TestErrorPixels:
    def test_peps_counts_exceedances(self):
        a = np.zeros((10, 10))
        b = a.copy()
        b[0, :3] = 30.0
        assert peps(a, b, threshold=20.0) == pytest.approx(0.03)
        assert peps(a, b, threshold=40.0) == 0.0

    def test_pceps_requires_clustering(self):
        a = np.zeros((10, 10))
        scattered = a.copy()
        for i in range(0, 10, 2):
            scattered[i, i] = 30.0  # isolated pixels: clustered count 0
        assert pceps(a, scattered) == 0.0
        block = a.copy()
        block[2:7, 2:7] = 30.0  # 5x5 block: 3x3 interior survives
        assert pceps(a, block) == pytest.approx(9 / 100)

    def test_border_pixels_can_cluster(self):
        a = np.zeros((5, 5))
        b = np.full((5, 5), 30.0)
        # everything is an error pixel; padding treats the outside as
        # error too, so the whole frame clusters
        assert pceps(a, b) == 1.0

    def test_pceps_never_exceeds_peps(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            a = rng.uniform(0, 255, (12, 12))
            b = rng.uniform(0, 255, (12, 12))
            assert pceps(a, b) <= peps(a, b) + 1e-12

    def test_negative_threshold_rejected(self):
        with pytest.raises(NegativeThreshold):
            peps(np.zeros((4, 4)), np.zeros((4, 4)), threshold=-1.0)


class TestMsssim:
    def test_identical_is_one(self):
        img = np.random.default_rng(3).uniform(0, 255, (64, 64))
        assert msssim(img, img.copy()) == pytest.approx(1.0, abs=1e-9)

    def test_noise_lowers_score(self):
        rng = np.random.default_rng(4)
        img = np.clip(
            128 + 40 * np.sin(np.linspace(0, 8 * np.pi, 96))[None, :]
            + 40 * np.cos(np.linspace(0, 6 * np.pi, 96))[:, None],
            0,
            255,
        )
        noisy = np.clip(img + rng.normal(0, 30, img.shape), 0, 255)
        s = msssim(img, noisy)
        assert 0.0 < s < 0.99

    def test_more_noise_scores_lower(self):
        rng = np.random.default_rng(5)
        img = np.clip(
            128 + 60 * np.sin(np.linspace(0, 6 * np.pi, 80))[None, :] * np.ones((80, 1)),
            0,
            255,
        )
        light = np.clip(img + rng.normal(0, 10, img.shape), 0, 255)
        heavy = np.clip(img + rng.normal(0, 60, img.shape), 0, 255)
        assert msssim(img, heavy) < msssim(img, light)

    def test_blur_scores_below_one(self):
        img = np.clip(
            128
            + 80 * np.sin(np.linspace(0, 10 * np.pi, 96))[None, :]
            * np.ones((96, 1)),
            0,
            255,
        )
        blurred = img.copy()
        for _ in range(4):  # repeated box blur flattens the stripes
            blurred = (
                np.roll(blurred, 1, axis=1)
                + blurred
                + np.roll(blurred, -1, axis=1)
            ) / 3.0
        assert msssim(img, blurred) < 1.0 - 1e-3

    def test_small_image_rejected(self):
        tiny = np.zeros((8, 8))
        with pytest.raises(ImageTooSmall):
            msssim(tiny, tiny)

    def test_single_scale_image_accepted(self):
        # 16 px: one scale only, weights renormalize to that scale
        img = np.random.default_rng(6).uniform(0, 255, (16, 16))
        assert msssim(img, img.copy()) == pytest.approx(1.0, abs=1e-9)

    def test_color_input(self):
        img = np.random.default_rng(7).uniform(0, 255, (48, 48, 3))
        assert msssim(img, img.copy()) == pytest.approx(1.0, abs=1e-9)


class TestReport:
    def test_compute_and_serialize(self):
        rng = np.random.default_rng(8)
        a = rng.uniform(0, 255, (32, 32))
        b = np.clip(a + rng.normal(0, 10, a.shape), 0, 255)
        rep = compute_metrics(a, b)
        assert isinstance(rep, MetricsReport)
        csv = rep.to_csv()
        lines = csv.strip().split("\n")
        assert lines[0] == "psnr,rse,age,peps,pceps,msssim"
        assert len(lines[1].split(",")) == 6
        table = rep.format_table()
        for name in ("psnr", "rse", "age", "peps", "pceps", "msssim"):
            assert name in table

    def test_report_consistent_with_functions(self):
        rng = np.random.default_rng(9)
        a = rng.uniform(0, 255, (24, 24, 3))
        b = np.clip(a + rng.normal(0, 15, a.shape), 0, 255)
        rep = compute_metrics(a, b)
        assert rep.psnr == pytest.approx(psnr(a, b))
        assert rep.rse == pytest.approx(rse(a, b))
        assert rep.age == pytest.approx(age(a, b))
        assert rep.msssim == pytest.approx(msssim(a, b))
