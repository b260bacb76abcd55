"""Tabletop scene construction from analytic SDF primitives.

Layouts:
  single — one object near the workspace center
  pile   — objects dropped one by one and settled by sphere-tracing straight
           down against the SDF of everything already placed
  packed — upright objects placed by rejection sampling
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import PlacementFailure
from ..geometry import (
    Workspace,
    default_workspace,
    quat_to_matrix,
    random_quat,
)
from . import primitives as prim

DIFFUSE = "diffuse"
SPECULAR = "specular"
TRANSPARENT = "transparent"
MATERIALS = (DIFFUSE, SPECULAR, TRANSPARENT)

LAYOUTS = ("single", "pile", "packed")
MATERIAL_MODES = ("mixed", "transparent_specular_only", "diffuse_only")

# surface samples per object used for settling / separation checks
_N_SURFACE = 256
_MAX_ATTEMPTS = 1000


@dataclass
class SceneObject:
    primitive: str
    position: np.ndarray  # (3,) object origin in world
    orientation: np.ndarray  # unit quaternion (w, x, y, z)
    dimensions: tuple  # sphere (radius,), box (lx,ly,lz), cylinder (radius, height)
    material: str
    albedo: np.ndarray  # rgb in [0,1]

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=np.float64)
        self.orientation = np.asarray(self.orientation, dtype=np.float64)
        self.albedo = np.asarray(self.albedo, dtype=np.float64)
        self._rot = quat_to_matrix(self.orientation)

    def sdf(self, points) -> np.ndarray:
        p = np.asarray(points, dtype=np.float64)
        local = (p - self.position) @ self._rot  # R^T applied row-wise
        return prim.primitive_sdf(self.primitive, local, self.dimensions)

    def surface_points(self, n: int = _N_SURFACE, rng=None) -> np.ndarray:
        rng = rng or np.random.default_rng(0)
        local = prim.primitive_surface_points(self.primitive, self.dimensions, n, rng)
        return local @ self._rot.T + self.position

    @property
    def bounding_radius(self) -> float:
        return prim.primitive_bounding_radius(self.primitive, self.dimensions)

    def translated(self, delta) -> "SceneObject":
        return SceneObject(
            primitive=self.primitive,
            position=self.position + np.asarray(delta, dtype=np.float64),
            orientation=self.orientation.copy(),
            dimensions=self.dimensions,
            material=self.material,
            albedo=self.albedo.copy(),
        )


@dataclass
class SceneDescription:
    objects: list
    layout: str
    table_albedo: np.ndarray
    backdrop_pattern_seed: int
    workspace: Workspace = field(default_factory=default_workspace)

    def __post_init__(self):
        self.table_albedo = np.asarray(self.table_albedo, dtype=np.float64)

    def without_object(self, index: int) -> "SceneDescription":
        objs = [o for k, o in enumerate(self.objects) if k != index]
        return SceneDescription(
            objects=objs,
            layout=self.layout,
            table_albedo=self.table_albedo.copy(),
            backdrop_pattern_seed=self.backdrop_pattern_seed,
            workspace=self.workspace,
        )


def object_sdfs(scene: SceneDescription, points) -> np.ndarray:
    """Per-object SDF values, shape (n_objects, ...)."""
    p = np.asarray(points, dtype=np.float64)
    if not scene.objects:
        return np.full((0,) + p.shape[:-1], np.inf)
    return np.stack([obj.sdf(p) for obj in scene.objects], axis=0)


def scene_sdf(scene: SceneDescription, points, include_table: bool = True, exclude=None):
    """Exact signed distance to the union of objects (and the table half-space).

    `exclude` removes one object index from the union (used by the grasp
    oracle's collision check). The ground-truth TSDF uses include_table=False
    so that an empty scene is empty space everywhere.
    """
    p = np.asarray(points, dtype=np.float64)
    best = np.full(p.shape[:-1], np.inf)
    for k, obj in enumerate(scene.objects):
        if exclude is not None and k == exclude:
            continue
        best = np.minimum(best, obj.sdf(p))
    if include_table:
        best = np.minimum(best, p[..., 2])
    return best if p.ndim > 1 else float(best)


def scene_sdf_argmin(scene: SceneDescription, points):
    """(sdf, object index) of the nearest object; table excluded. Index -1 if no objects."""
    per = object_sdfs(scene, points)
    if per.shape[0] == 0:
        p = np.asarray(points, dtype=np.float64)
        return np.full(p.shape[:-1], np.inf), np.full(p.shape[:-1], -1, dtype=int)
    idx = per.argmin(axis=0)
    return per.min(axis=0), idx


def _sample_object(rng: np.random.Generator, material_mode: str, upright: bool):
    primitive = str(rng.choice(prim.PRIMITIVES))
    if primitive == prim.SPHERE:
        dims = (float(rng.uniform(0.020, 0.034)),)
    elif primitive == prim.BOX:
        dims = tuple(float(v) for v in rng.uniform(0.030, 0.068, size=3))
    else:
        dims = (float(rng.uniform(0.016, 0.030)), float(rng.uniform(0.040, 0.080)))

    if material_mode == "diffuse_only":
        material = DIFFUSE
    elif material_mode == "transparent_specular_only":
        material = rng.choice([SPECULAR, TRANSPARENT])
    else:
        material = rng.choice(MATERIALS)

    if upright:
        angle = rng.uniform(0, 2 * np.pi)
        orientation = np.array([np.cos(angle / 2), 0.0, 0.0, np.sin(angle / 2)])
    else:
        orientation = random_quat(rng)

    albedo = rng.uniform(0.15, 0.95, size=3)
    return SceneObject(
        primitive=str(primitive),
        position=np.zeros(3),
        orientation=orientation,
        dimensions=dims,
        material=str(material),
        albedo=albedo,
    )


def _rest_height(obj: SceneObject) -> float:
    """Height of the object origin when resting on the table (upright objects)."""
    if obj.primitive == prim.SPHERE:
        return obj.dimensions[0]
    if obj.primitive == prim.BOX:
        return 0.5 * obj.dimensions[2]
    return 0.5 * obj.dimensions[1]  # upright cylinder


def _settle_drop(scene_objects, obj: SceneObject, workspace: Workspace, rng):
    """Sphere-trace the object straight down until it contacts table or pile.

    Moving down by the current minimum clearance can never create
    interpenetration (SDF is 1-Lipschitz), so the final gap is in [0, 1e-4].
    Returns the settled object or None if it ends outside the workspace.
    """
    pts = obj.surface_points(rng=np.random.default_rng(rng.integers(2**32)))
    partial = SceneDescription(
        objects=list(scene_objects), layout="pile", table_albedo=np.zeros(3), backdrop_pattern_seed=0
    )
    drop = 0.0
    for _ in range(200):
        clearance = np.min(scene_sdf(partial, pts - np.array([0.0, 0.0, drop]), include_table=True))
        if clearance < 1e-4:
            break
        drop += float(clearance) * 0.999
    settled = obj.translated([0.0, 0.0, -drop])
    pts_settled = pts - np.array([0.0, 0.0, drop])
    inside = np.all(pts_settled >= workspace.lo - 1e-6) and np.all(pts_settled <= workspace.hi + 1e-6)
    return settled if inside else None


def _min_separation(a: SceneObject, b: SceneObject) -> float:
    """min over a's surface samples of b's SDF (symmetrized)."""
    sa = a.surface_points(rng=np.random.default_rng(1))
    sb = b.surface_points(rng=np.random.default_rng(2))
    return float(min(b.sdf(sa).min(), a.sdf(sb).min()))


def build_scene(seed: int, layout: str, n_objects: int = 5, material_mode: str = "mixed") -> SceneDescription:
    """Procedurally place `n_objects` non-interpenetrating objects."""
    if layout not in LAYOUTS:
        raise ValueError(f"layout must be one of {LAYOUTS}")
    if material_mode not in MATERIAL_MODES:
        raise ValueError(f"material_mode must be one of {MATERIAL_MODES}")
    if layout == "single" and n_objects != 1:
        raise ValueError("single layout requires n_objects=1")

    rng = np.random.default_rng(seed)
    ws = default_workspace()
    table_albedo = rng.uniform(0.35, 0.75, size=3)
    backdrop_seed = int(rng.integers(2**31))

    placed = []
    attempts = 0
    while len(placed) < n_objects:
        attempts += 1
        if attempts > _MAX_ATTEMPTS:
            raise PlacementFailure(
                f"could not place object {len(placed) + 1}/{n_objects} after {_MAX_ATTEMPTS} attempts"
            )

        if layout == "single":
            obj = _sample_object(rng, material_mode, upright=True)
            jitter = rng.uniform(-0.02, 0.02, size=2)
            center = ws.center[:2] + jitter
            obj = obj.translated([center[0], center[1], _rest_height(obj)])
            candidate = obj
        elif layout == "packed":
            obj = _sample_object(rng, material_mode, upright=True)
            margin = obj.bounding_radius + 0.01
            xy = rng.uniform(ws.lo[:2] + margin, ws.hi[:2] - margin)
            candidate = obj.translated([xy[0], xy[1], _rest_height(obj)])
        else:  # pile
            obj = _sample_object(rng, material_mode, upright=False)
            margin = obj.bounding_radius + 0.005
            xy = rng.uniform(ws.lo[:2] + margin, ws.hi[:2] - margin)
            start = obj.translated([xy[0], xy[1], ws.hi[2] - obj.bounding_radius - 1e-3])
            candidate = _settle_drop(placed, start, ws, rng)
            if candidate is None:
                continue

        if any(_min_separation(candidate, other) < -1e-4 for other in placed):
            continue
        surf = candidate.surface_points(rng=np.random.default_rng(3))
        if not (np.all(surf >= ws.lo - 1e-6) and np.all(surf <= ws.hi + 1e-6)):
            continue
        placed.append(candidate)

    return SceneDescription(
        objects=placed,
        layout=layout,
        table_albedo=table_albedo,
        backdrop_pattern_seed=backdrop_seed,
    )
