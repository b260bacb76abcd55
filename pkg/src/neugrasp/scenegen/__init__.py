"""Synthetic scene generation: analytic SDF scenes, paired scene/background
renders along the spiral trajectory, ground-truth TSDFs, and the antipodal
grasp oracle."""

from .bundle import SceneBundle, export_bundle, generate_bundle, import_bundle
from .oracle import generate_grasp_labels, grasp_contacts, grasp_oracle
from .render import render_view
from .scene import SceneDescription, SceneObject, build_scene, scene_sdf
from .trajectory import (
    CameraIntrinsics,
    CameraPose,
    default_intrinsics,
    sample_trajectory,
)
from .tsdf import ground_truth_tsdf, truncation_for

__all__ = [
    "SceneBundle",
    "SceneDescription",
    "SceneObject",
    "CameraIntrinsics",
    "CameraPose",
    "build_scene",
    "scene_sdf",
    "render_view",
    "sample_trajectory",
    "default_intrinsics",
    "ground_truth_tsdf",
    "truncation_for",
    "grasp_oracle",
    "grasp_contacts",
    "generate_grasp_labels",
    "generate_bundle",
    "export_bundle",
    "import_bundle",
]
