"""Detector scans, graymap encoding/decoding, and shot noise."""

import numpy as np
import pytest

from oamsim import DetectorScan, add_shot_noise, detector_scan, read_pgm, to_grayscale_bitmap


def random_intensity(shape, seed=0):
    return np.random.default_rng(seed).random(shape)


class TestDetectorScan:
    def test_constant_grid_scans_to_the_same_constant(self):
        scan = detector_scan(np.full((96, 96), 2.5), 1.0, 1.0, 20, 20)
        assert np.allclose(scan.values, 2.5)

    def test_area_weighted_sum_is_conserved(self):
        intensity = random_intensity((96, 80), seed=1)
        scan = detector_scan(intensity, 1.0, 1.0, 20, 12)  # non-divisible blocks
        fine_sum = intensity.mean()
        coarse_sum = scan.values.mean()
        assert abs(coarse_sum - fine_sum) < 1e-9 * fine_sum

    def test_full_resolution_scan_is_the_identity(self):
        intensity = random_intensity((32, 32))
        scan = detector_scan(intensity, 1.0, 1.0, 32, 32)
        assert np.allclose(scan.values, intensity, atol=1e-12)

    def test_upsampling_rejected(self):
        with pytest.raises(ValueError):
            detector_scan(np.ones((16, 16)), 1.0, 1.0, 32, 16)

    def test_non_positive_resolution_rejected(self):
        with pytest.raises(ValueError):
            detector_scan(np.ones((16, 16)), 1.0, 1.0, 0, 8)

    def test_negative_values_rejected(self):
        with pytest.raises(ValueError):
            DetectorScan(np.array([[1.0, -0.1], [0.0, 0.0]]), 1.0, 1.0)


class TestGrayscaleBitmap:
    def test_two_level_scan_maps_to_endpoints(self):
        scan = DetectorScan(np.array([[0.0, 1.0], [1.0, 0.0]] * 8 + [[0.0, 1.0]] * 0), 1.0, 1.0)
        data = to_grayscale_bitmap(scan)
        header, raster = data.split(b"255\n", 1)
        assert header == b"P5\n16 2\n"
        assert set(raster) == {0, 255}

    def test_constant_scan_warns_and_encodes_black(self):
        scan = DetectorScan(np.full((20, 20), 3.0), 1.0, 1.0)
        with pytest.warns(UserWarning):
            data = to_grayscale_bitmap(scan)
        assert set(data.split(b"255\n", 1)[1]) == {0}

    def test_round_trip_through_read_pgm(self):
        values = np.rint(255 * random_intensity((24, 16), seed=3))
        scan = DetectorScan(values, 1.0, 1.0)
        decoded = read_pgm(to_grayscale_bitmap(scan))
        expected = np.rint(255 * (values - values.min()) / np.ptp(values))
        assert np.array_equal(decoded, expected)

    def test_raster_layout_marker_pixel(self):
        # One bright cell at (i=1, j=2): column 1, and with +y rendered first
        # (top row down) it lands in raster row n_y - 1 - j.
        values = np.zeros((4, 4))
        values[1, 2] = 1.0
        data = to_grayscale_bitmap(DetectorScan(values, 1.0, 1.0))
        raster = np.frombuffer(data.split(b"255\n", 1)[1], dtype=np.uint8).reshape(4, 4)
        assert raster[4 - 1 - 2, 1] == 255
        assert raster.sum() == 255

    def test_read_pgm_rejects_other_formats(self):
        with pytest.raises(ValueError):
            read_pgm(b"P2\n2 2\n255\n0 0 0 0")


class TestShotNoise:
    def setup_method(self):
        self.scan = DetectorScan(random_intensity((20, 20), seed=4), 1.0, 1.0)

    def test_same_seed_is_deterministic(self):
        a = add_shot_noise(self.scan, 1000, seed=42)
        b = add_shot_noise(self.scan, 1000, seed=42)
        assert np.array_equal(a.values, b.values)

    def test_different_seeds_differ(self):
        a = add_shot_noise(self.scan, 1000, seed=1)
        b = add_shot_noise(self.scan, 1000, seed=2)
        assert not np.array_equal(a.values, b.values)

    def test_high_count_limit_converges(self):
        noisy = add_shot_noise(self.scan, 1e6, seed=7)
        scale = 1e6 / self.scan.values.mean()
        rel = (noisy.values / scale - self.scan.values) / self.scan.values
        assert np.sqrt(np.mean(rel**2)) < 0.01

    def test_non_positive_mean_rejected(self):
        with pytest.raises(ValueError):
            add_shot_noise(self.scan, 0.0, seed=1)

    def test_zero_scan_rejected(self):
        empty = DetectorScan(np.zeros((20, 20)), 1.0, 1.0)
        with pytest.raises(ValueError):
            add_shot_noise(empty, 100, seed=1)
