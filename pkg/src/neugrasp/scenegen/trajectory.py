"""Camera model and the spiral viewpoint trajectory.

The trajectory sweeps one-sixth of a hemisphere above the workspace:
radius in [0.4, 0.5] m, polar angle in [pi/12, pi/8], azimuth in [0, pi/3],
azimuths strictly increasing from the spiral start at azimuth 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..geometry import Workspace, default_workspace

RADIUS_RANGE = (0.4, 0.5)
POLAR_RANGE = (math.pi / 12, math.pi / 8)
AZIMUTH_RANGE = (0.0, math.pi / 3)


@dataclass(frozen=True)
class CameraIntrinsics:
    focal_length_px: float
    principal_point: tuple  # (cx, cy) pixels
    image_size: tuple  # (width, height) pixels

    def __post_init__(self):
        if self.focal_length_px <= 0:
            raise ValueError("focal length must be positive")
        w, h = self.image_size
        cx, cy = self.principal_point
        if not (0 <= cx < w and 0 <= cy < h):
            raise ValueError("principal point outside image")


def default_intrinsics(image_size: int = 128) -> CameraIntrinsics:
    w = h = int(image_size)
    # 0.7*W focal: half-FOV ~35.5 deg, keeps the whole cube in frame at r=0.4
    return CameraIntrinsics(
        focal_length_px=0.7 * w,
        principal_point=((w - 1) / 2, (h - 1) / 2),
        image_size=(w, h),
    )


@dataclass
class CameraPose:
    """World-to-camera rotation/translation plus the generating spherical coords."""

    rotation: np.ndarray  # (3, 3), x_cam = R @ x_world + t
    translation: np.ndarray  # (3,)
    spherical_coords: tuple  # (radius m, polar rad, azimuth rad) about workspace center

    def __post_init__(self):
        self.rotation = np.asarray(self.rotation, dtype=np.float64)
        self.translation = np.asarray(self.translation, dtype=np.float64)

    @property
    def camera_center(self) -> np.ndarray:
        return -self.rotation.T @ self.translation

    def matrix4(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = self.rotation
        m[:3, 3] = self.translation
        return m

    @classmethod
    def from_matrix4(cls, m, spherical_coords=(0.0, 0.0, 0.0)) -> "CameraPose":
        m = np.asarray(m, dtype=np.float64)
        return cls(rotation=m[:3, :3], translation=m[:3, 3], spherical_coords=tuple(spherical_coords))


def look_at_pose(eye, target, spherical_coords, up=(0.0, 0.0, 1.0)) -> CameraPose:
    """OpenCV-style pose: camera +z toward target, +x right, +y down."""
    eye = np.asarray(eye, dtype=np.float64)
    z_cam = np.asarray(target, dtype=np.float64) - eye
    z_cam /= np.linalg.norm(z_cam)
    x_cam = np.cross(z_cam, np.asarray(up, dtype=np.float64))
    x_cam /= np.linalg.norm(x_cam)
    y_cam = np.cross(z_cam, x_cam)
    rot = np.stack([x_cam, y_cam, z_cam], axis=0)  # rows: camera axes in world
    return CameraPose(rotation=rot, translation=-rot @ eye, spherical_coords=tuple(spherical_coords))


def spherical_to_eye(radius, polar, azimuth, center) -> np.ndarray:
    return np.asarray(center) + radius * np.array(
        [
            math.sin(polar) * math.cos(azimuth),
            math.sin(polar) * math.sin(azimuth),
            math.cos(polar),
        ]
    )


def sample_trajectory(seed: int, n_views: int = 4, workspace: Workspace | None = None):
    """Spiral of `n_views` poses looking at the workspace center.

    Deterministic in `seed`. The spiral starts at azimuth 0 and sweeps a
    randomized fraction of the azimuth interval with randomized gaps, so that
    over many seeds every decile of each coordinate interval is visited while
    each pose still satisfies the interval constraints exactly.
    """
    if n_views < 1:
        raise ValueError("n_views must be >= 1")
    ws = workspace or default_workspace()
    rng = np.random.default_rng(seed)

    r0, r1 = rng.uniform(*RADIUS_RANGE, size=2)
    th0, th1 = rng.uniform(*POLAR_RANGE, size=2)
    sweep = rng.uniform(0.7, 1.0) * AZIMUTH_RANGE[1]

    if n_views == 1:
        fracs = np.array([0.0])
    else:
        gaps = rng.uniform(0.5, 1.5, size=n_views - 1)
        fracs = np.concatenate([[0.0], np.cumsum(gaps) / gaps.sum()])

    poses = []
    for i, f in enumerate(fracs):
        t = i / max(n_views - 1, 1)
        radius = r0 + (r1 - r0) * t
        polar = th0 + (th1 - th0) * t
        azimuth = f * sweep
        eye = spherical_to_eye(radius, polar, azimuth, ws.center)
        poses.append(look_at_pose(eye, ws.center, (radius, polar, azimuth)))
    return poses
