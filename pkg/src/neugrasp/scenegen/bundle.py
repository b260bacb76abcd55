"""SceneBundle: the unit of training/eval data, and its on-disk layout.

Directory format:
  meta.json    seed, layout, N, intrinsics, poses (4x4 row-major), objects,
               schema_version, payload checksums (sha256)
  scene_{i}.png / bg_{i}.png   8-bit RGB, lossless
  gt_tsdf.f32  little-endian float32, x-fastest then y then z
  grasps.json  array of labels

JSON floats carry 9 significant digits.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np
from PIL import Image

from ..errors import FormatError
from ..geometry import (
    GraspLabel,
    GridSpec,
    SDFVolume,
    dump_json,
    jsonify,
    load_volume_f32,
    save_volume_f32,
    sha256_file,
    volume_sidecar,
)
from .oracle import generate_grasp_labels
from .render import render_view
from .scene import SceneDescription, SceneObject, build_scene
from .trajectory import CameraIntrinsics, CameraPose, default_intrinsics, sample_trajectory
from .tsdf import ground_truth_tsdf

SCHEMA_VERSION = 1


@dataclass
class SceneBundle:
    scene_images: np.ndarray  # (N, H, W, 3) uint8
    background_images: np.ndarray  # (N, H, W, 3) uint8
    poses: list  # N CameraPose
    intrinsics: CameraIntrinsics
    gt_tsdf: SDFVolume
    grasp_labels: list  # GraspLabel
    scene: SceneDescription
    seed: int

    @property
    def n_views(self) -> int:
        return len(self.poses)


def generate_bundle(
    seed: int,
    layout: str = "pile",
    material_mode: str = "mixed",
    n_views: int = 4,
    n_objects: int = 5,
    image_size: int = 128,
    grid_dims: int = 40,
    n_labels: int = 128,
) -> SceneBundle:
    """End-to-end synthesis of one paired scene/background bundle."""
    if layout == "single":
        n_objects = 1
    scene = build_scene(seed, layout, n_objects=n_objects, material_mode=material_mode)
    poses = sample_trajectory(seed, n_views=n_views)
    intr = default_intrinsics(image_size)
    scene_images = np.stack([render_view(scene, p, intr, background_only=False) for p in poses])
    background_images = np.stack([render_view(scene, p, intr, background_only=True) for p in poses])
    grid = GridSpec.for_workspace(grid_dims)
    tsdf = ground_truth_tsdf(scene, grid)
    labels = generate_grasp_labels(scene, n_samples=n_labels, seed=seed)
    return SceneBundle(
        scene_images=scene_images,
        background_images=background_images,
        poses=poses,
        intrinsics=intr,
        gt_tsdf=tsdf,
        grasp_labels=labels,
        scene=scene,
        seed=seed,
    )


def _object_to_dict(obj: SceneObject) -> dict:
    return {
        "primitive": obj.primitive,
        "position": obj.position.tolist(),
        "orientation": obj.orientation.tolist(),
        "dimensions": list(obj.dimensions),
        "material": obj.material,
        "albedo": obj.albedo.tolist(),
    }


def _object_from_dict(d: dict) -> SceneObject:
    return SceneObject(
        primitive=d["primitive"],
        position=np.asarray(d["position"]),
        orientation=np.asarray(d["orientation"]),
        dimensions=tuple(d["dimensions"]),
        material=d["material"],
        albedo=np.asarray(d["albedo"]),
    )


def export_bundle(bundle: SceneBundle, path) -> None:
    os.makedirs(path, exist_ok=True)
    n = bundle.n_views

    payload_files = []
    for i in range(n):
        for name, img in ((f"scene_{i}.png", bundle.scene_images[i]), (f"bg_{i}.png", bundle.background_images[i])):
            Image.fromarray(img, mode="RGB").save(os.path.join(path, name))
            payload_files.append(name)
    save_volume_f32(bundle.gt_tsdf.values, os.path.join(path, "gt_tsdf.f32"))
    payload_files.append("gt_tsdf.f32")

    grasps = [
        {
            "center": lbl.center.tolist(),
            "quaternion_wxyz": lbl.orientation.tolist(),
            "width": lbl.width,
            "success": bool(lbl.success),
        }
        for lbl in bundle.grasp_labels
    ]
    dump_json(grasps, os.path.join(path, "grasps.json"))
    payload_files.append("grasps.json")

    meta = {
        "schema_version": SCHEMA_VERSION,
        "seed": bundle.seed,
        "layout": bundle.scene.layout,
        "n_views": n,
        "intrinsics": {
            "focal_length_px": bundle.intrinsics.focal_length_px,
            "principal_point": list(bundle.intrinsics.principal_point),
            "image_size": list(bundle.intrinsics.image_size),
        },
        "poses": [
            {"matrix4_row_major": p.matrix4().reshape(-1).tolist(), "spherical": list(p.spherical_coords)}
            for p in bundle.poses
        ],
        "objects": [_object_to_dict(o) for o in bundle.scene.objects],
        "table_albedo": bundle.scene.table_albedo.tolist(),
        "backdrop_pattern_seed": bundle.scene.backdrop_pattern_seed,
        "tsdf": volume_sidecar(bundle.gt_tsdf.grid, bundle.gt_tsdf.truncation),
        "checksums": {f: sha256_file(os.path.join(path, f)) for f in payload_files},
    }
    dump_json(meta, os.path.join(path, "meta.json"))


def import_bundle(path) -> SceneBundle:
    meta_path = os.path.join(path, "meta.json")
    if not os.path.isfile(meta_path):
        raise FormatError(f"missing meta.json under {path}")
    with open(meta_path) as fh:
        meta = json.load(fh)
    if meta.get("schema_version") != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema_version {meta.get('schema_version')}")

    for fname, expected in meta["checksums"].items():
        full = os.path.join(path, fname)
        if not os.path.isfile(full):
            raise FormatError(f"missing payload file {fname}")
        actual = sha256_file(full)
        if actual != expected:
            raise FormatError(f"checksum mismatch for {fname}")

    n = meta["n_views"]
    scene_images = np.stack(
        [np.asarray(Image.open(os.path.join(path, f"scene_{i}.png")).convert("RGB")) for i in range(n)]
    )
    background_images = np.stack(
        [np.asarray(Image.open(os.path.join(path, f"bg_{i}.png")).convert("RGB")) for i in range(n)]
    )

    intr = CameraIntrinsics(
        focal_length_px=meta["intrinsics"]["focal_length_px"],
        principal_point=tuple(meta["intrinsics"]["principal_point"]),
        image_size=tuple(meta["intrinsics"]["image_size"]),
    )
    poses = [
        CameraPose.from_matrix4(
            np.asarray(p["matrix4_row_major"]).reshape(4, 4), spherical_coords=tuple(p["spherical"])
        )
        for p in meta["poses"]
    ]

    tsdf_meta = meta["tsdf"]
    grid = GridSpec(
        origin=tuple(tsdf_meta["origin"]),
        voxel_size=tsdf_meta["voxel_size"],
        dims=tuple(tsdf_meta["dims"]),
    )
    values = load_volume_f32(os.path.join(path, "gt_tsdf.f32"), grid.dims)
    tsdf = SDFVolume(grid=grid, values=values, truncation=tsdf_meta["truncation"])

    with open(os.path.join(path, "grasps.json")) as fh:
        grasps_raw = json.load(fh)
    labels = [
        GraspLabel(
            center=np.asarray(g["center"]),
            orientation=np.asarray(g["quaternion_wxyz"]),
            width=g["width"],
            success=bool(g["success"]),
        )
        for g in grasps_raw
    ]

    scene = SceneDescription(
        objects=[_object_from_dict(d) for d in meta["objects"]],
        layout=meta["layout"],
        table_albedo=np.asarray(meta["table_albedo"]),
        backdrop_pattern_seed=meta["backdrop_pattern_seed"],
    )
    return SceneBundle(
        scene_images=scene_images,
        background_images=background_images,
        poses=poses,
        intrinsics=intr,
        gt_tsdf=tsdf,
        grasp_labels=labels,
        scene=scene,
        seed=meta["seed"],
    )
