"""Analytic signed distance functions for the three object primitives.

All SDFs are exact (not just bounds) and vectorized over (..., 3) point
arrays. Distances are in meters, negative inside.
"""

from __future__ import annotations

import numpy as np

SPHERE = "sphere"
BOX = "box"
CYLINDER = "cylinder"

PRIMITIVES = (SPHERE, BOX, CYLINDER)


def sd_sphere(points, radius):
    p = np.asarray(points, dtype=np.float64)
    return np.linalg.norm(p, axis=-1) - radius


def sd_box(points, half_extents):
    p = np.asarray(points, dtype=np.float64)
    q = np.abs(p) - np.asarray(half_extents, dtype=np.float64)
    outside = np.linalg.norm(np.maximum(q, 0.0), axis=-1)
    inside = np.minimum(q.max(axis=-1), 0.0)
    return outside + inside


def sd_cylinder(points, radius, half_height):
    """Capped cylinder with axis z, centered at origin."""
    p = np.asarray(points, dtype=np.float64)
    d_radial = np.linalg.norm(p[..., :2], axis=-1) - radius
    d_axial = np.abs(p[..., 2]) - half_height
    d = np.stack([d_radial, d_axial], axis=-1)
    outside = np.linalg.norm(np.maximum(d, 0.0), axis=-1)
    inside = np.minimum(d.max(axis=-1), 0.0)
    return outside + inside


def primitive_sdf(primitive, points, dimensions):
    """Dispatch on primitive type; `dimensions` per SceneObject convention:
    sphere (radius,), box (lx, ly, lz) full extents, cylinder (radius, height).
    """
    if primitive == SPHERE:
        return sd_sphere(points, dimensions[0])
    if primitive == BOX:
        return sd_box(points, 0.5 * np.asarray(dimensions, dtype=np.float64))
    if primitive == CYLINDER:
        return sd_cylinder(points, dimensions[0], 0.5 * dimensions[1])
    raise ValueError(f"unknown primitive {primitive!r}")


def primitive_bounding_radius(primitive, dimensions) -> float:
    """Radius of the smallest origin-centered sphere containing the primitive."""
    if primitive == SPHERE:
        return float(dimensions[0])
    if primitive == BOX:
        return float(0.5 * np.linalg.norm(dimensions))
    if primitive == CYLINDER:
        return float(np.hypot(dimensions[0], 0.5 * dimensions[1]))
    raise ValueError(f"unknown primitive {primitive!r}")


def primitive_surface_points(primitive, dimensions, n: int, rng: np.random.Generator):
    """Approximately uniform samples on the primitive surface (object frame)."""
    if primitive == SPHERE:
        v = rng.normal(size=(n, 3))
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        return v * dimensions[0]
    if primitive == BOX:
        hx, hy, hz = 0.5 * np.asarray(dimensions, dtype=np.float64)
        areas = np.array([hy * hz, hx * hz, hx * hy])  # per +- face pair
        face_axis = rng.choice(3, size=n, p=areas / areas.sum())
        sign = rng.choice([-1.0, 1.0], size=n)
        pts = rng.uniform(-1.0, 1.0, size=(n, 3)) * np.array([hx, hy, hz])
        half = np.array([hx, hy, hz])
        pts[np.arange(n), face_axis] = sign * half[face_axis]
        return pts
    if primitive == CYLINDER:
        r, h = dimensions[0], dimensions[1]
        side_area = 2 * np.pi * r * h
        cap_area = 2 * np.pi * r * r
        on_side = rng.uniform(size=n) < side_area / (side_area + cap_area)
        theta = rng.uniform(0, 2 * np.pi, size=n)
        pts = np.empty((n, 3))
        # lateral surface
        pts[:, 0] = r * np.cos(theta)
        pts[:, 1] = r * np.sin(theta)
        pts[:, 2] = rng.uniform(-0.5 * h, 0.5 * h, size=n)
        # caps: radius sampled with sqrt for uniform area
        cap = ~on_side
        rad = r * np.sqrt(rng.uniform(size=n))
        pts[cap, 0] = rad[cap] * np.cos(theta[cap])
        pts[cap, 1] = rad[cap] * np.sin(theta[cap])
        pts[cap, 2] = np.sign(rng.uniform(-1, 1, size=n))[cap] * 0.5 * h
        return pts
    raise ValueError(f"unknown primitive {primitive!r}")
