"""Sphere-traced RGB rendering of analytic scenes.

Materials:
  diffuse     — Lambertian under one fixed directional light
  specular    — Lambertian plus a view-dependent Blinn-Phong highlight
  transparent — 0.8 * background ray continuation + 0.2 * Fresnel-like rim

`background_only=True` renders the same rays with every object removed, so a
background image is bitwise identical to re-rendering the scene without
objects.
"""

from __future__ import annotations

import numpy as np

from .scene import DIFFUSE, SPECULAR, TRANSPARENT, SceneDescription, object_sdfs
from .trajectory import CameraIntrinsics, CameraPose

LIGHT_DIR = np.array([0.35, -0.45, 0.82])
LIGHT_DIR = LIGHT_DIR / np.linalg.norm(LIGHT_DIR)
AMBIENT = 0.35
DIFFUSE_GAIN = 0.65
SPECULAR_GAIN = 0.55
SHININESS = 48.0
TRANSPARENT_BG_WEIGHT = 0.8
TRANSPARENT_RIM_WEIGHT = 0.2

_HIT_EPS = 1e-4
_MAX_T = 1.6
_MAX_STEPS = 192

TABLE_ID = -1
MISS_ID = -2


def pixel_rays(pose: CameraPose, intr: CameraIntrinsics):
    """Ray origin (3,) and unit directions (H, W, 3) through all pixel centers."""
    w, h = intr.image_size
    cx, cy = intr.principal_point
    u, v = np.meshgrid(np.arange(w), np.arange(h))  # v is the row index
    d_cam = np.stack(
        [(u - cx) / intr.focal_length_px, (v - cy) / intr.focal_length_px, np.ones_like(u, dtype=np.float64)],
        axis=-1,
    )
    d_world = d_cam @ pose.rotation  # (R^T d) row-wise
    d_world /= np.linalg.norm(d_world, axis=-1, keepdims=True)
    return pose.camera_center, d_world


def _render_sdf(scene: SceneDescription, points, with_objects: bool):
    """(sdf, nearest id) used by the tracer: table always present."""
    p = np.asarray(points, dtype=np.float64)
    best = p[..., 2].copy()
    ids = np.full(p.shape[:-1], TABLE_ID, dtype=np.int64)
    if with_objects:
        per = object_sdfs(scene, p)
        for k in range(per.shape[0]):
            closer = per[k] < best
            best = np.where(closer, per[k], best)
            ids = np.where(closer, k, ids)
    return best, ids


def _trace(scene: SceneDescription, origin, dirs, with_objects: bool):
    """Sphere tracing. Returns (t, hit_id) per ray; MISS_ID where no hit."""
    flat_dirs = dirs.reshape(-1, 3)
    n = flat_dirs.shape[0]
    t = np.zeros(n)
    active = np.ones(n, dtype=bool)
    hit_ids = np.full(n, MISS_ID, dtype=np.int64)
    for _ in range(_MAX_STEPS):
        if not active.any():
            break
        pts = origin + t[active, None] * flat_dirs[active]
        sdf, ids = _render_sdf(scene, pts, with_objects)
        newly_hit = sdf < _HIT_EPS
        act_idx = np.nonzero(active)[0]
        hit_ids[act_idx[newly_hit]] = ids[newly_hit]
        t[act_idx] += np.maximum(sdf, 2.0 * _HIT_EPS) * ~newly_hit
        still = ~newly_hit & (t[act_idx] < _MAX_T)
        active[act_idx] = still
    return t.reshape(dirs.shape[:-1]), hit_ids.reshape(dirs.shape[:-1])


def _normals(scene: SceneDescription, points, with_objects: bool, h: float = 1e-5):
    grads = np.zeros_like(points)
    for axis in range(3):
        d = np.zeros(3)
        d[axis] = h
        hi, _ = _render_sdf(scene, points + d, with_objects)
        lo, _ = _render_sdf(scene, points - d, with_objects)
        grads[..., axis] = (hi - lo) / (2 * h)
    norm = np.linalg.norm(grads, axis=-1, keepdims=True)
    return grads / np.maximum(norm, 1e-12)


def _table_pattern(scene: SceneDescription, xy):
    """World-anchored smooth color pattern so backgrounds carry texture."""
    rng = np.random.default_rng(scene.backdrop_pattern_seed)
    freqs = rng.uniform(25.0, 70.0, size=(3, 2))
    phases = rng.uniform(0, 2 * np.pi, size=(3, 2))
    x, y = xy[..., 0], xy[..., 1]
    channels = []
    for c in range(3):
        wave = np.sin(freqs[c, 0] * x + phases[c, 0]) * np.sin(freqs[c, 1] * y + phases[c, 1])
        channels.append(scene.table_albedo[c] * (0.78 + 0.22 * wave))
    return np.stack(channels, axis=-1)


def _sky_color(scene: SceneDescription, dirs):
    rng = np.random.default_rng(scene.backdrop_pattern_seed + 1)
    base = rng.uniform(0.45, 0.75, size=3)
    tilt = np.clip(dirs[..., 2], -1.0, 1.0)
    return base * (0.8 + 0.2 * tilt[..., None])


def _shade_lambert(albedo, normals, view_dirs, specular: bool):
    ndotl = np.clip(np.sum(normals * LIGHT_DIR, axis=-1), 0.0, None)
    shade = AMBIENT + DIFFUSE_GAIN * ndotl
    color = albedo * shade[..., None]
    if specular:
        half = LIGHT_DIR - view_dirs  # view_dirs point away from camera
        half /= np.maximum(np.linalg.norm(half, axis=-1, keepdims=True), 1e-12)
        ndoth = np.clip(np.sum(normals * half, axis=-1), 0.0, None)
        color = color + SPECULAR_GAIN * (ndoth**SHININESS)[..., None]
    return color


def _background_colors(scene: SceneDescription, origin, dirs):
    """Color of rays traced against table + backdrop only."""
    t, ids = _trace(scene, origin, dirs, with_objects=False)
    pts = origin + t[..., None] * dirs
    colors = _sky_color(scene, dirs)
    table = ids == TABLE_ID
    if table.any():
        normals = np.zeros_like(pts[table])
        normals[:, 2] = 1.0
        albedo = _table_pattern(scene, pts[table][:, :2])
        colors[table] = _shade_lambert(albedo, normals, dirs[table], specular=False)
    return colors


def render_view(
    scene: SceneDescription,
    pose: CameraPose,
    intr: CameraIntrinsics,
    background_only: bool = False,
) -> np.ndarray:
    """Render one view to an (H, W, 3) uint8 image. Pure function of inputs."""
    origin, dirs = pixel_rays(pose, intr)
    if background_only or not scene.objects:
        colors = _background_colors(scene, origin, dirs)
        return _quantize(colors)

    t, ids = _trace(scene, origin, dirs, with_objects=True)
    pts = origin + t[..., None] * dirs
    colors = _sky_color(scene, dirs)

    table = ids == TABLE_ID
    if table.any():
        n = np.zeros_like(pts[table])
        n[:, 2] = 1.0
        albedo = _table_pattern(scene, pts[table][:, :2])
        colors[table] = _shade_lambert(albedo, n, dirs[table], specular=False)

    for k, obj in enumerate(scene.objects):
        mask = ids == k
        if not mask.any():
            continue
        n = _normals(scene, pts[mask], with_objects=True)
        if obj.material == TRANSPARENT:
            bg = _background_colors(scene, origin, dirs[mask])
            ndotv = np.abs(np.sum(n * dirs[mask], axis=-1))
            rim = ((1.0 - ndotv) ** 3)[..., None] * (0.5 + 0.5 * obj.albedo)
            colors[mask] = TRANSPARENT_BG_WEIGHT * bg + TRANSPARENT_RIM_WEIGHT * rim
        else:
            colors[mask] = _shade_lambert(
                obj.albedo, n, dirs[mask], specular=(obj.material == SPECULAR)
            )
    return _quantize(colors)


def _quantize(colors) -> np.ndarray:
    return np.round(np.clip(colors, 0.0, 1.0) * 255.0).astype(np.uint8)
