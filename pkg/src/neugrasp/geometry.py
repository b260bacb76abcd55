"""Shared geometric core: workspace box, voxel grids, SDF volumes, quaternions, rays.

Conventions used throughout the package:
  - world frame: z up, table plane at z = 0, workspace cube [0, 0.3]^3 meters
  - quaternions are (w, x, y, z), unit norm, mapping gripper/object frame to world
  - voxel grids are indexed [x, y, z]; voxel center i is origin + (i + 0.5) * voxel_size
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import FormatError, GridMismatch

WORKSPACE_SIDE = 0.30  # meters
GRIPPER_MAX_WIDTH = 0.085  # Robotiq 2F-85 opening, meters


@dataclass(frozen=True)
class Workspace:
    """Axis-aligned cube the whole pipeline operates in."""

    lo: np.ndarray
    hi: np.ndarray

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    @property
    def side(self) -> float:
        return float(self.hi[0] - self.lo[0])

    def contains(self, points, margin: float = 0.0):
        p = np.atleast_2d(np.asarray(points, dtype=np.float64))
        ok = np.all((p >= self.lo - margin) & (p <= self.hi + margin), axis=-1)
        return ok if np.asarray(points).ndim > 1 else bool(ok[0])


def default_workspace() -> Workspace:
    return Workspace(lo=np.zeros(3), hi=np.full(3, WORKSPACE_SIDE))


@dataclass(frozen=True)
class GridSpec:
    """Regular voxel grid tiling the workspace cube."""

    origin: tuple
    voxel_size: float
    dims: tuple  # (Dx, Dy, Dz)

    def __post_init__(self):
        if self.voxel_size <= 0:
            raise ValueError("voxel_size must be positive")

    @classmethod
    def for_workspace(cls, dims, workspace: Workspace | None = None) -> "GridSpec":
        ws = workspace or default_workspace()
        if isinstance(dims, int):
            dims = (dims, dims, dims)
        voxel = ws.side / dims[0]
        for d in dims:
            if not math.isclose(d * voxel, ws.side, rel_tol=1e-9):
                raise ValueError("grid must exactly tile the workspace cube")
        return cls(origin=tuple(float(v) for v in ws.lo), voxel_size=voxel, dims=tuple(dims))

    def voxel_centers(self) -> np.ndarray:
        """All voxel centers, shape (Dx, Dy, Dz, 3)."""
        ax = [self.origin[k] + (np.arange(self.dims[k]) + 0.5) * self.voxel_size for k in range(3)]
        gx, gy, gz = np.meshgrid(*ax, indexing="ij")
        return np.stack([gx, gy, gz], axis=-1)

    def voxel_center(self, idx) -> np.ndarray:
        return np.asarray(self.origin) + (np.asarray(idx, dtype=np.float64) + 0.5) * self.voxel_size

    @property
    def lo(self) -> np.ndarray:
        return np.asarray(self.origin, dtype=np.float64)

    @property
    def hi(self) -> np.ndarray:
        return self.lo + np.asarray(self.dims) * self.voxel_size


@dataclass
class SDFVolume:
    """Truncated, normalized signed-distance grid over the workspace.

    values are in [-1, 1]: raw signed distance clamped to +-truncation then
    divided by truncation.
    """

    grid: GridSpec
    values: np.ndarray  # (Dx, Dy, Dz) float32
    truncation: float

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float32)
        if self.values.shape != tuple(self.grid.dims):
            raise GridMismatch(
                f"values shape {self.values.shape} != grid dims {self.grid.dims}"
            )


# ---------------------------------------------------------------------------
# quaternions (w, x, y, z)
# ---------------------------------------------------------------------------

def quat_normalize(q) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64)
    return q / np.linalg.norm(q)


def quat_multiply(a, b) -> np.ndarray:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return np.array(
        [
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        ]
    )


def quat_conjugate(q) -> np.ndarray:
    w, x, y, z = q
    return np.array([w, -x, -y, -z])


def quat_to_matrix(q) -> np.ndarray:
    w, x, y, z = quat_normalize(q)
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )


def quat_rotate(q, v) -> np.ndarray:
    return quat_to_matrix(q) @ np.asarray(v, dtype=np.float64)


def random_quat(rng: np.random.Generator) -> np.ndarray:
    """Uniform rotation (Shoemake)."""
    u1, u2, u3 = rng.uniform(size=3)
    a, b = math.sqrt(1 - u1), math.sqrt(u1)
    return np.array(
        [
            a * math.sin(2 * math.pi * u2),
            a * math.cos(2 * math.pi * u2),
            b * math.sin(2 * math.pi * u3),
            b * math.cos(2 * math.pi * u3),
        ]
    )


# 180 degree rotation about the gripper closing axis (x); the two-fold
# symmetry of a parallel-jaw grasp.
QUAT_FLIP_X = np.array([0.0, 1.0, 0.0, 0.0])


def quat_flip_closing_axis(q) -> np.ndarray:
    return quat_multiply(q, QUAT_FLIP_X)


# ---------------------------------------------------------------------------
# grasp data
# ---------------------------------------------------------------------------

@dataclass
class GraspCandidate:
    """6-DoF parallel-jaw grasp: center, orientation, quality, opening width."""

    center: np.ndarray  # (3,) meters
    orientation: np.ndarray  # unit quaternion (w, x, y, z)
    quality: float
    width: float

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=np.float64)
        self.orientation = np.asarray(self.orientation, dtype=np.float64)


@dataclass
class GraspLabel:
    """Oracle-adjudicated grasp sample used for supervision."""

    center: np.ndarray
    orientation: np.ndarray  # unit quaternion (w, x, y, z)
    width: float
    success: bool

    def __post_init__(self):
        self.center = np.asarray(self.center, dtype=np.float64)
        self.orientation = np.asarray(self.orientation, dtype=np.float64)


def grasp_axes(quaternion):
    """World-frame (closing_axis, approach_axis) of a grasp orientation.

    Gripper frame: x = closing axis (fingers travel along it), z = approach
    axis pointing from wrist toward the fingertips.
    """
    rot = quat_to_matrix(quaternion)
    return rot[:, 0], rot[:, 2]


# ---------------------------------------------------------------------------
# rays
# ---------------------------------------------------------------------------

def ray_box_intersect(origins, directions, lo, hi, eps: float = 1e-12):
    """Slab test. Returns (t_near, t_far, hit) with t clamped to t >= 0.

    Accepts (3,) or (R, 3) inputs.
    """
    o = np.atleast_2d(np.asarray(origins, dtype=np.float64))
    d = np.atleast_2d(np.asarray(directions, dtype=np.float64))
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)

    safe_d = np.where(np.abs(d) < eps, eps, d)
    t0 = (lo - o) / safe_d
    t1 = (hi - o) / safe_d
    tmin = np.minimum(t0, t1).max(axis=-1)
    tmax = np.maximum(t0, t1).min(axis=-1)
    # parallel rays outside the slab never hit
    parallel_miss = np.any((np.abs(d) < eps) & ((o < lo) | (o > hi)), axis=-1)
    tmin = np.maximum(tmin, 0.0)
    hit = (tmax > tmin) & (tmax > 0.0) & ~parallel_miss
    if np.asarray(origins).ndim == 1:
        return float(tmin[0]), float(tmax[0]), bool(hit[0])
    return tmin, tmax, hit


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------

def round_sig(value: float, sig: int = 9) -> float:
    """Round a float to `sig` significant decimal digits."""
    if not math.isfinite(value):
        return value
    return float(f"{value:.{sig}g}")


def jsonify(obj, sig: int = 9):
    """Recursively convert numpy scalars/arrays and round floats for JSON."""
    if isinstance(obj, (np.floating, float)):
        return round_sig(float(obj), sig)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return jsonify(obj.tolist(), sig)
    if isinstance(obj, (list, tuple)):
        return [jsonify(v, sig) for v in obj]
    if isinstance(obj, dict):
        return {k: jsonify(v, sig) for k, v in obj.items()}
    return obj


def dump_json(obj, path, sig: int = 9):
    with open(path, "w") as fh:
        json.dump(jsonify(obj, sig), fh, indent=2)
        fh.write("\n")


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def save_volume_f32(values: np.ndarray, path):
    """Write a (Dx, Dy, Dz) array as little-endian float32, x-fastest."""
    arr = np.asarray(values, dtype="<f4")
    # ravel(order="F") iterates x fastest, then y, then z for [x, y, z] arrays
    arr.ravel(order="F").tofile(path)


def load_volume_f32(path, dims) -> np.ndarray:
    raw = np.fromfile(path, dtype="<f4")
    expected = int(np.prod(dims))
    if raw.size != expected:
        raise FormatError(f"volume payload has {raw.size} floats, expected {expected}")
    return raw.reshape(tuple(dims), order="F")


def volume_sidecar(grid: GridSpec, truncation: float | None = None) -> dict:
    meta = {
        "origin": list(grid.origin),
        "voxel_size": grid.voxel_size,
        "dims": list(grid.dims),
        "order": "x-fastest",
        "dtype": "<f4",
    }
    if truncation is not None:
        meta["truncation"] = truncation
    return meta
