import numpy as np
import pytest

from arguide.geometry import (
    BehindCamera,
    BoundingBox2D,
    CameraIntrinsics,
    CameraPose,
    DegenerateError,
    DepthMap,
    HoleError,
    NotARotation,
    Point2,
    Point3,
    bbox_to_world_corners,
    box_from_provider,
    face_pose_orientation,
    project,
    sample_depth,
    surface_normal,
    unproject,
)

K = CameraIntrinsics(fx=500.0, fy=500.0, cx=320.0, cy=240.0, width=640, height=480)
IDENTITY = CameraPose.identity()


def random_rotation(rng):
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_pose(rng):
    return CameraPose(random_rotation(rng), rng.normal(scale=2.0, size=3))


class TestCameraTypes:
    def test_intrinsics_invariants(self):
        with pytest.raises(ValueError):
            CameraIntrinsics(fx=0, fy=500, cx=320, cy=240, width=640, height=480)
        with pytest.raises(ValueError):
            CameraIntrinsics(fx=500, fy=500, cx=700, cy=240, width=640, height=480)

    def test_pose_rejects_non_rotation(self):
        with pytest.raises(NotARotation):
            CameraPose(np.eye(3) * 2, np.zeros(3))
        reflection = np.diag([1.0, 1.0, -1.0])
        with pytest.raises(NotARotation):
            CameraPose(reflection, np.zeros(3))

    def test_box_invariants(self):
        with pytest.raises(ValueError):
            BoundingBox2D(10, 10, 10, 20)  # zero height
        box = BoundingBox2D(10, 20, 110, 220)
        assert box.width == 200 and box.height == 100
        assert box.center == Point2(120, 60)

    def test_point_rejects_non_finite(self):
        with pytest.raises(ValueError):
            Point3(float("nan"), 0, 0)
        with pytest.raises(ValueError):
            Point2(float("inf"), 0)


class TestProviderBoxUnits:
    def test_pixels_passed_through_on_small_images(self):
        box = box_from_provider([412, 655, 450, 710], 960, 720)
        assert (box.y_min, box.x_min, box.y_max, box.x_max) == (412, 655, 450, 710)

    def test_normalized_units_rescaled_on_large_images(self):
        # 0..1000 convention is only detectable when the image exceeds 1000 px
        box = box_from_provider([100, 250, 200, 500], 1920, 1080)
        assert box.x_min == pytest.approx(250 / 1000 * 1920)
        assert box.y_max == pytest.approx(200 / 1000 * 1080)

    def test_large_pixel_values_not_rescaled(self):
        box = box_from_provider([100, 1200, 300, 1500], 1920, 1080)
        assert box.x_max == 1500

    def test_clamped_to_image(self):
        box = box_from_provider([-10, -10, 2000, 2000], 640, 480)
        assert (box.y_min, box.x_min, box.y_max, box.x_max) == (0, 0, 480, 640)


class TestDepthSampling:
    def test_uniform_map(self):
        depth = DepthMap(width=8, height=6, values=np.full((6, 8), 2.0, np.float32))
        assert sample_depth(depth, Point2(3.2, 4.9)) == pytest.approx(2.0)

    def test_single_hole_filled_by_neighbors(self):
        values = np.full((5, 5), 1.5, np.float32)
        values[2, 2] = 0.0
        depth = DepthMap(width=5, height=5, values=values)
        assert sample_depth(depth, Point2(2, 2)) == pytest.approx(1.5)

    def test_all_holes_raises(self):
        depth = DepthMap(width=4, height=4, values=np.zeros((4, 4), np.float32))
        with pytest.raises(HoleError):
            sample_depth(depth, Point2(1, 1))

    def test_scaling_from_image_resolution(self):
        values = np.zeros((4, 4), np.float32)
        values[3, 3] = 2.5
        depth = DepthMap(width=4, height=4, values=values)
        # pixel near the bottom-right of a 640x480 image lands on cell (3,3)
        assert sample_depth(depth, Point2(600, 450), 640, 480) == pytest.approx(2.5)

    def test_median_of_mixed_neighbors(self):
        values = np.zeros((3, 3), np.float32)
        values[0, 0] = 1.0
        values[0, 1] = 3.0
        values[2, 2] = 2.0
        depth = DepthMap(width=3, height=3, values=values)
        assert sample_depth(depth, Point2(1, 1)) == pytest.approx(2.0)

    def test_nan_is_hole(self):
        values = np.full((3, 3), 1.25, np.float32)
        values[1, 1] = np.nan
        depth = DepthMap(width=3, height=3, values=values)
        assert sample_depth(depth, Point2(1, 1)) == pytest.approx(1.25)


class TestUnprojectProject:
    def test_principal_point_on_axis(self):
        p = unproject(Point2(K.cx, K.cy), 1.0, K, IDENTITY)
        assert p == Point3(0.0, 0.0, -1.0)

    def test_offset_pixel(self):
        # (420-320)*2/500 = 0.4 right, on the horizontal centerline, 2 m out
        p = unproject(Point2(420, 240), 2.0, K, IDENTITY)
        assert p.as_array() == pytest.approx([0.4, 0.0, -2.0])
        back = project(p, K, IDENTITY)
        assert back.as_array() == pytest.approx([420, 240], abs=1e-9)

    def test_translation_only_pose(self):
        pose = CameraPose(np.eye(3), np.array([1.0, 2.0, 3.0]))
        p = unproject(Point2(K.cx, K.cy), 1.0, K, pose)
        assert p.as_array() == pytest.approx([1.0, 2.0, 2.0])

    def test_pixel_v_down_maps_to_minus_y(self):
        p = unproject(Point2(K.cx, K.cy + 100), 1.0, K, IDENTITY)
        assert p.y < 0

    def test_project_principal(self):
        assert project(Point3(0, 0, -1), K, IDENTITY) == Point2(K.cx, K.cy)

    def test_project_behind_camera(self):
        with pytest.raises(BehindCamera):
            project(Point3(0, 0, 1.0), K, IDENTITY)
        with pytest.raises(BehindCamera):
            project(Point3(0.5, 0.5, 0.0), K, IDENTITY)

    def test_nonpositive_depth_rejected(self):
        with pytest.raises(ValueError):
            unproject(Point2(10, 10), 0.0, K, IDENTITY)

    def test_round_trip_1000_random_cases(self):
        rng = np.random.default_rng(20240913)
        for _ in range(1000):
            pose = random_pose(rng)
            p = Point2(rng.uniform(0, K.width), rng.uniform(0, K.height))
            d = rng.uniform(0.05, 12.0)
            q = unproject(p, d, K, pose)
            back = project(q, K, pose)
            assert abs(back.u - p.u) < 1e-6 and abs(back.v - p.v) < 1e-6


class TestSurfaceNormal:
    def test_fronto_parallel_faces_camera(self):
        n = surface_normal(
            Point3(0, 0, -1), Point3(0.2, 0, -1), Point3(0.1, 0.1, -1), Point3(0, 0, 0)
        )
        assert n == pytest.approx([0, 0, 1])

    def test_collinear_points_degenerate(self):
        with pytest.raises(DegenerateError):
            surface_normal(Point3(0, 0, 0), Point3(1, 0, 0), Point3(2, 0, 0), Point3(0, 5, 0))

    def test_flip_toward_camera(self):
        # cross-product oracle: (1,0,0)x(0,0,1) = (0,-1,0), flipped toward +y camera
        n = surface_normal(Point3(0, 0, 0), Point3(1, 0, 0), Point3(0, 0, 1), Point3(0, 5, 0))
        assert n == pytest.approx([0, 1, 0])

    def test_invariants_1000_random_triples(self):
        rng = np.random.default_rng(77)
        count = 0
        while count < 1000:
            pts = rng.normal(size=(3, 3))
            cam = rng.normal(scale=3.0, size=3)
            a = pts[1] - pts[0]
            b = pts[2] - pts[0]
            cross = np.cross(a, b)
            if np.linalg.norm(cross) < 1e-6:
                continue
            # skip camera positions lying in the surface plane
            if abs(np.dot(cross / np.linalg.norm(cross), cam - pts[2])) < 1e-6:
                continue
            n = surface_normal(
                Point3(*pts[0]), Point3(*pts[1]), Point3(*pts[2]), Point3(*cam)
            )
            assert abs(np.linalg.norm(n) - 1.0) < 1e-9
            assert abs(n @ a) < 1e-9 * max(1.0, np.linalg.norm(a))
            assert abs(n @ b) < 1e-9 * max(1.0, np.linalg.norm(b))
            assert n @ (cam - pts[2]) > 0
            count += 1


class TestBBoxToWorld:
    def uniform_depth(self, meters=1.0):
        return DepthMap(width=160, height=120, values=np.full((120, 160), meters, np.float32))

    def test_fronto_parallel_planar_rectangle(self):
        box = BoundingBox2D(100, 100, 200, 200)
        world = bbox_to_world_corners(box, self.uniform_depth(), K, IDENTITY)
        edges = world.edge_lengths
        assert edges["top"] == pytest.approx(edges["bottom"], abs=1e-9)
        assert edges["left"] == pytest.approx(edges["right"], abs=1e-9)
        # planarity: every corner in the plane of the face normal
        corners = np.stack([c.as_array() for c in world.corners])
        n = np.cross(corners[1] - corners[0], corners[2] - corners[0])
        n = n / np.linalg.norm(n)
        for corner in corners:
            assert abs(n @ (corner - corners[0])) < 1e-9

    def test_similar_triangles_edge_length(self):
        k = CameraIntrinsics(fx=1000, fy=1000, cx=320, cy=240, width=640, height=480)
        box = BoundingBox2D(200, 250, 260, 350)  # 100 px wide
        world = bbox_to_world_corners(box, self.uniform_depth(1.0), k, IDENTITY)
        assert world.edge_lengths["bottom"] == pytest.approx(0.1)
        assert world.edge_lengths["top"] == pytest.approx(0.1)

    def test_corner_hole_propagates(self):
        values = np.full((120, 160), 1.0, np.float32)
        values[:40, :40] = 0.0  # top-left corner region all holes
        depth = DepthMap(width=160, height=120, values=values)
        box = BoundingBox2D(10, 10, 400, 600)
        with pytest.raises(HoleError):
            bbox_to_world_corners(box, depth, K, IDENTITY)

    def test_anchoring_is_pose_independent(self):
        """World coordinates stay bitwise identical across later re-projections."""
        box = BoundingBox2D(100, 100, 200, 200)
        rng = np.random.default_rng(5)
        saved = random_pose(rng)
        world = bbox_to_world_corners(box, self.uniform_depth(), K, saved)
        frozen = [c.as_array().tobytes() for c in world.corners]
        for _ in range(5):
            other = random_pose(rng)
            for corner in world.corners:
                try:
                    project(corner, K, other)
                except BehindCamera:
                    pass
        assert [c.as_array().tobytes() for c in world.corners] == frozen


class TestFacePoseOrientation:
    def test_axis_aligned(self):
        r = face_pose_orientation(Point3(0, 0, -1), IDENTITY)
        assert r[:, 2] == pytest.approx([0, 0, 1])
        assert r[:, 0] == pytest.approx([1, 0, 0])
        assert r[:, 1] == pytest.approx([0, 1, 0])

    def test_singular_ray_fallback_stays_orthonormal(self):
        # anchor straight below the camera: view ray parallel to world up
        r = face_pose_orientation(Point3(0, -2, 0), IDENTITY)
        assert np.allclose(r.T @ r, np.eye(3), atol=1e-9)
        assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-9)
        assert r[:, 2] == pytest.approx([0, 1, 0])

    def test_random_frames_orthonormal_and_facing(self):
        rng = np.random.default_rng(99)
        for _ in range(300):
            pose = random_pose(rng)
            anchor = Point3(*rng.normal(scale=2.0, size=3))
            if np.linalg.norm(pose.origin - anchor.as_array()) < 1e-6:
                continue
            r = face_pose_orientation(anchor, pose)
            assert np.allclose(r.T @ r, np.eye(3), atol=1e-9)
            assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-9)
            assert r[:, 2] @ (pose.origin - anchor.as_array()) > 0

    def test_x_axis_horizontal_when_not_singular(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            pose = random_pose(rng)
            anchor = Point3(*rng.normal(scale=2.0, size=3))
            ray = pose.origin - anchor.as_array()
            if np.linalg.norm(ray) < 1e-6:
                continue
            z = ray / np.linalg.norm(ray)
            if abs(z[1]) > 0.999:
                continue
            r = face_pose_orientation(anchor, pose)
            assert abs(r[:, 0] @ np.array([0.0, 1.0, 0.0])) < 1e-9
