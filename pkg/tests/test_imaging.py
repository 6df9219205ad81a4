import numpy as np
import pytest

from arguide.geometry import BoundingBox2D, CameraIntrinsics
from arguide.guidance import DimensionMismatch, crop_image, enhance_blue, image_plane_scale
from arguide.vision import SegmentationMask


def mask_of(bits):
    arr = np.asarray(bits, bool)
    return SegmentationMask(width=arr.shape[1], height=arr.shape[0], bitmask=arr)


class TestEnhanceBlue:
    def test_triple_without_clamp(self):
        crop = np.array([[[10, 20, 30]]], np.uint8)
        out = enhance_blue(crop, mask_of([[True]]))
        assert out[0, 0].tolist() == [10, 20, 90, 255]

    def test_clamped_at_channel_max(self):
        crop = np.array([[[0, 0, 200]]], np.uint8)
        out = enhance_blue(crop, mask_of([[True]]))
        assert out[0, 0].tolist() == [0, 0, 255, 255]

    def test_unmasked_pixels_transparent_and_unchanged(self):
        crop = np.array([[[10, 20, 30]]], np.uint8)
        out = enhance_blue(crop, mask_of([[False]]))
        assert out[0, 0].tolist() == [10, 20, 30, 0]

    def test_dimension_mismatch(self):
        crop = np.zeros((2, 3, 3), np.uint8)
        with pytest.raises(DimensionMismatch):
            enhance_blue(crop, mask_of([[True]]))

    def test_idempotent_at_max_and_red_green_untouched(self):
        rng = np.random.default_rng(3)
        crop = rng.integers(0, 256, size=(8, 8, 3), dtype=np.uint8)
        mask = mask_of(rng.random((8, 8)) > 0.5)
        once = enhance_blue(crop, mask)
        twice = enhance_blue(once[:, :, :3], mask)
        # red/green are never modified
        assert np.array_equal(once[:, :, 0], crop[:, :, 0])
        assert np.array_equal(once[:, :, 1], crop[:, :, 1])
        # pixels already clamped stay put on re-application
        saturated = once[:, :, 2] == 255
        assert np.array_equal(twice[:, :, 2][saturated], once[:, :, 2][saturated])


class TestImagePlaneScale:
    K = CameraIntrinsics(fx=1000.0, fy=1000.0, cx=320, cy=240, width=640, height=480)

    def test_similar_triangles(self):
        box = BoundingBox2D(100, 200, 150, 300)  # 100 px wide, 50 px tall
        w, h = image_plane_scale(box, 2.0, self.K)
        assert w == pytest.approx(0.2)
        assert h == pytest.approx(0.1)

    def test_linear_in_depth(self):
        box = BoundingBox2D(100, 200, 150, 300)
        w1, h1 = image_plane_scale(box, 1.5, self.K)
        w2, h2 = image_plane_scale(box, 3.0, self.K)
        assert w2 == pytest.approx(2 * w1)
        assert h2 == pytest.approx(2 * h1)

    def test_requires_positive_depth(self):
        with pytest.raises(ValueError):
            image_plane_scale(BoundingBox2D(0, 0, 10, 10), 0.0, self.K)


class TestCrop:
    def test_crop_covers_box(self):
        image = np.arange(100 * 100 * 3, dtype=np.uint8).reshape(100, 100, 3)
        crop = crop_image(image, BoundingBox2D(10, 20, 30, 50))
        assert crop.shape == (20, 30, 3)
        assert np.array_equal(crop, image[10:30, 20:50])
