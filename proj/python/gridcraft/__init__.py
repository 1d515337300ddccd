"""Voxel gridworld builder toolkit."""

from ._core import (
    ACTIONS,
    Env,
    Error,
    Grid,
    Task,
    done_action_reward,
    evaluate,
    f1_score,
    load_task,
    load_task_dir,
    normalize_commands,
    placement_reward,
    plan_subtasks,
    preprocess_dialog,
    run_episode,
    validate_plan,
    voxelize,
)

__all__ = [
    "ACTIONS",
    "Env",
    "Error",
    "Grid",
    "Task",
    "done_action_reward",
    "evaluate",
    "f1_score",
    "load_task",
    "load_task_dir",
    "normalize_commands",
    "placement_reward",
    "plan_subtasks",
    "preprocess_dialog",
    "run_episode",
    "validate_plan",
    "voxelize",
]
