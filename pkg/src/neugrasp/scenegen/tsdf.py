"""Ground-truth truncated SDF volumes from the analytic scene.

The TSDF covers objects only (no table half-space): an empty scene is +1
everywhere, and a lone sphere matches the closed-form sphere TSDF exactly.
Truncation distance is 4 voxel sizes.
"""

from __future__ import annotations

import numpy as np

from ..geometry import GridSpec, SDFVolume
from .scene import SceneDescription, scene_sdf

TRUNCATION_VOXELS = 4.0


def truncation_for(grid: GridSpec) -> float:
    return TRUNCATION_VOXELS * grid.voxel_size


def ground_truth_tsdf(scene: SceneDescription, grid: GridSpec) -> SDFVolume:
    centers = grid.voxel_centers()  # (Dx, Dy, Dz, 3)
    sdf = scene_sdf(scene, centers.reshape(-1, 3), include_table=False)
    trunc = truncation_for(grid)
    values = np.clip(sdf, -trunc, trunc) / trunc
    return SDFVolume(grid=grid, values=values.reshape(grid.dims).astype(np.float32), truncation=trunc)
