"""Antipodal grasp oracle and label generation against the analytic scene.

A grasp succeeds when
  (a) both fingers, closing symmetrically from the maximum opening toward the
      grasp center, contact the same object with surface normals anti-parallel
      within 30 degrees of each other along the closing line,
  (b) the contact separation fits the 0.085 m gripper opening, and
  (c) the swept gripper body is collision-free against everything except the
      grasped object (table included).
"""

from __future__ import annotations

import numpy as np

from ..errors import EmptyScene
from ..geometry import (
    GRIPPER_MAX_WIDTH,
    GraspCandidate,
    GraspLabel,
    grasp_axes,
    quat_flip_closing_axis,
    quat_normalize,
    quat_rotate,
    quat_to_matrix,
    random_quat,
)
from .scene import SceneDescription, scene_sdf, scene_sdf_argmin

ANTIPODAL_CONE_DEG = 30.0
FINGER_LENGTH = 0.05  # meters along the approach axis
SURFACE_BAND = 0.01  # label centers sampled within 1 cm of surfaces
_MARCH_STEP = 1e-3
_CONTACT_TOL = 1e-6


def _object_normal(scene: SceneDescription, obj_idx: int, point, h: float = 1e-6):
    obj = scene.objects[obj_idx]
    grad = np.zeros(3)
    for axis in range(3):
        d = np.zeros(3)
        d[axis] = h
        grad[axis] = obj.sdf(point + d) - obj.sdf(point - d)
    n = np.linalg.norm(grad)
    return grad / max(n, 1e-12)


def _finger_contact(scene: SceneDescription, center, closing_dir):
    """First outside->inside crossing marching from max opening toward center.

    Returns (distance from center, object index) or None. Returns "blocked"
    when the finger's start pose already penetrates an object.
    """
    start = 0.5 * GRIPPER_MAX_WIDTH
    sdf0, _ = scene_sdf_argmin(scene, center + start * closing_dir)
    if sdf0 < 0:
        return "blocked"
    n_steps = int(np.ceil(start / _MARCH_STEP))
    offsets = np.linspace(start, 0.0, n_steps + 1)
    pts = center + offsets[:, None] * closing_dir
    sdf, ids = scene_sdf_argmin(scene, pts)
    crossing = np.nonzero((sdf[:-1] > 0) & (sdf[1:] <= 0))[0]
    if crossing.size == 0:
        return None
    i = crossing[0]
    obj_idx = int(ids[i + 1])
    obj = scene.objects[obj_idx]
    lo_off, hi_off = offsets[i + 1], offsets[i]  # lo is inside, hi outside
    for _ in range(60):
        mid = 0.5 * (lo_off + hi_off)
        if obj.sdf(center + mid * closing_dir) > 0:
            hi_off = mid
        else:
            lo_off = mid
        if hi_off - lo_off < _CONTACT_TOL:
            break
    return 0.5 * (lo_off + hi_off), obj_idx


def _gripper_body_points(center, closing_dir, approach_dir, width):
    """Sample points on fingers (swept open -> contact), fingertip path, palm."""
    pts = []
    half_max = 0.5 * GRIPPER_MAX_WIDTH
    depth_samples = np.linspace(0.0, FINGER_LENGTH, 6)
    width_samples = np.linspace(min(width / 2 + 1e-3, half_max), half_max, 5)
    for side in (1.0, -1.0):
        for w in width_samples:
            for d in depth_samples:
                pts.append(center + side * w * closing_dir - d * approach_dir)
    # palm bar behind the fingers
    for w in np.linspace(-0.5 * GRIPPER_MAX_WIDTH, 0.5 * GRIPPER_MAX_WIDTH, 9):
        pts.append(center + w * closing_dir - FINGER_LENGTH * approach_dir)
    return np.asarray(pts)


def grasp_contacts(scene: SceneDescription, center, quaternion):
    """Full adjudication. Returns a dict with success, contacted object, width."""
    center = np.asarray(center, dtype=np.float64)
    closing, approach = grasp_axes(quaternion)

    result = {"success": False, "object_index": None, "width": 0.0, "reason": ""}
    if not scene.objects:
        result["reason"] = "empty scene"
        return result

    c_pos = _finger_contact(scene, center, closing)
    c_neg = _finger_contact(scene, center, -closing)
    if c_pos == "blocked" or c_neg == "blocked":
        result["reason"] = "finger start pose penetrates an object"
        return result
    if c_pos is None or c_neg is None:
        result["reason"] = "no contact"
        return result

    d_pos, obj_pos = c_pos
    d_neg, obj_neg = c_neg
    if obj_pos != obj_neg:
        result["reason"] = "fingers contact different objects"
        return result

    width = d_pos + d_neg
    result["width"] = float(width)
    result["object_index"] = obj_pos
    if width > GRIPPER_MAX_WIDTH:
        result["reason"] = "required width exceeds gripper opening"
        return result

    p_pos = center + d_pos * closing
    p_neg = center - d_neg * closing
    n_pos = _object_normal(scene, obj_pos, p_pos)
    n_neg = _object_normal(scene, obj_neg, p_neg)
    cos_anti = float(np.dot(n_pos, -n_neg))
    if cos_anti < np.cos(np.deg2rad(ANTIPODAL_CONE_DEG)):
        result["reason"] = "contact normals not antipodal"
        return result

    body = _gripper_body_points(center, closing, approach, width)
    clearance = scene_sdf(scene, body, include_table=True, exclude=obj_pos)
    if np.min(clearance) < 0.0:
        result["reason"] = "gripper body collides"
        return result

    result["success"] = True
    result["reason"] = "ok"
    return result


def grasp_oracle(scene: SceneDescription, grasp: GraspCandidate) -> bool:
    """Success flag for a candidate grasp (see module docstring for the rule)."""
    return bool(grasp_contacts(scene, grasp.center, grasp.orientation)["success"])


def _snap_downward(quaternion):
    """Flip 180 deg about the closing axis if the approach axis points upward."""
    approach = quat_rotate(quaternion, [0.0, 0.0, 1.0])
    if approach[2] > 0:
        return quat_flip_closing_axis(quaternion)
    return np.asarray(quaternion, dtype=np.float64)


def generate_grasp_labels(scene: SceneDescription, n_samples: int, seed: int):
    """Oracle-adjudicated grasp labels near object surfaces. Deterministic."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if not scene.objects:
        raise EmptyScene("cannot sample grasp labels in an empty scene")
    rng = np.random.default_rng(seed)
    ws = scene.workspace

    labels = []
    attempts = 0
    while len(labels) < n_samples:
        attempts += 1
        if attempts > 1000 * n_samples:
            raise RuntimeError("grasp label sampling failed to stay inside the workspace")
        obj_idx = int(rng.integers(len(scene.objects)))
        obj = scene.objects[obj_idx]
        surf = obj.surface_points(n=1, rng=rng)[0]
        normal = _object_normal(scene, obj_idx, surf)
        center = surf + rng.uniform(-SURFACE_BAND, SURFACE_BAND) * normal
        if not ws.contains(center):
            continue
        quat = _snap_downward(quat_normalize(random_quat(rng)))
        detail = grasp_contacts(scene, center, quat)
        width = detail["width"] if detail["width"] <= GRIPPER_MAX_WIDTH else 0.0
        labels.append(
            GraspLabel(center=center, orientation=quat, width=float(width), success=detail["success"])
        )
    return labels
