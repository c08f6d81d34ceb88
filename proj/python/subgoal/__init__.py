"""Subgoal discovery from model-change counts in grid worlds."""

import json

from ._core import (
    ConfigError,
    GridWorld,
    Layout,
    LayoutError,
    default_config,
    detect,
    free_energy,
    layout_names,
    load_layout,
    optimal_policy,
    otsu_threshold,
    parse_layout,
    shaped_utility,
    thompson_policy,
)
from ._core import run as _run

UP, DOWN, LEFT, RIGHT, TRANSFER = range(5)


def run(config_text="", seeds=None, out_dir=None):
    """Run an experiment and return per-seed results plus the parsed summary."""
    result = _run(config_text, seeds, out_dir)
    result["summary"] = json.loads(result.pop("summary_json"))
    return result


__all__ = [
    "ConfigError", "GridWorld", "Layout", "LayoutError", "default_config", "detect", "free_energy",
    "layout_names", "load_layout", "optimal_policy", "otsu_threshold", "parse_layout", "run",
    "shaped_utility", "thompson_policy", "UP", "DOWN", "LEFT", "RIGHT", "TRANSFER",
]
