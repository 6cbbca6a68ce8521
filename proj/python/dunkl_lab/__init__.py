"""Dunkl process simulation and verification lab."""

import json

from ._core import (
    DunklError,
    RootSystem,
    harmonicity_residual,
    philox4x32,
    reflect,
    simulate_dunkl,
    simulate_radial,
)
from . import _core


def verify_harmonic(system, k, points=100, seed=1):
    """Harmonicity reports as a list of dicts."""
    return json.loads(_core.verify_harmonic_json(system, list(k), points, seed))


def verify_suite(config, sets=(), threads=1):
    """Runs the verification battery described by a run configuration file."""
    return json.loads(_core.verify_suite_json(str(config), list(sets), threads))


__all__ = [
    "DunklError",
    "RootSystem",
    "harmonicity_residual",
    "philox4x32",
    "reflect",
    "simulate_dunkl",
    "simulate_radial",
    "verify_harmonic",
    "verify_suite",
]
