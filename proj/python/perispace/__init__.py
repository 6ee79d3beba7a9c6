"""Perirobot-space coverage simulation (C++ core)."""

from ._core import (
    CameraSpec,
    CellState,
    ConfigError,
    ConfusionCounts,
    IncompleteDataError,
    LidarSpec,
    ParseError,
    HumanBox,
    RobotSphere,
    Scene,
    VoxelGrid,
    cli,
    confusion,
    f1,
    fuse,
    human_roi,
    kappa,
    lattice,
    load_scene,
    robot_roi,
    roi_cell_count,
    sense_lidar,
    sense_rgbd,
    snapshot_count,
    voxelize,
)

__all__ = [
    "CameraSpec",
    "CellState",
    "ConfigError",
    "ConfusionCounts",
    "IncompleteDataError",
    "LidarSpec",
    "ParseError",
    "HumanBox",
    "RobotSphere",
    "Scene",
    "VoxelGrid",
    "cli",
    "confusion",
    "f1",
    "fuse",
    "human_roi",
    "kappa",
    "lattice",
    "load_scene",
    "robot_roi",
    "roi_cell_count",
    "sense_lidar",
    "sense_rgbd",
    "snapshot_count",
    "voxelize",
]
