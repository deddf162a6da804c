"""Bundled example instances, loaded from the packaged data files.

The bundle contains a two-state weighted duel where the first player needs
unbounded memory under the diverge-or-rezero objective, the three-state
two-target loop arena with its prefix and cycle monitors and their product,
and the matching relation files.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from . import formats
from .arena import Arena
from .preference import PreferenceRelation
from .skeleton import MemorySkeleton
from .strategy import ProductArena, reachable_product


def data_text(name: str) -> str:
    return resources.files("fmgames.data").joinpath(name).read_text(encoding="utf-8")


DATA_FILES = (
    "plus_minus_loops.arena",
    "two_target_loop.arena",
    "two_target_loop_product.arena",
    "target1_monitor.skel",
    "target_progress.skel",
    "two_target.pref",
    "zero_reset.pref",
)


@lru_cache(maxsize=None)
def plus_minus_loops() -> Arena:
    """Two states, +-1 loops and crossings; player 1 owns s1."""
    return formats.parse_arena(data_text("plus_minus_loops.arena"))


@lru_cache(maxsize=None)
def two_target_loop() -> Arena:
    """One-player three-state arena where both targets must be visited."""
    return formats.parse_arena(data_text("two_target_loop.arena"))


@lru_cache(maxsize=None)
def two_target_loop_product() -> Arena:
    """The reachable product of the loop arena with the progress monitor."""
    return formats.parse_arena(data_text("two_target_loop_product.arena"))


@lru_cache(maxsize=None)
def target1_monitor() -> MemorySkeleton:
    """Two-state monitor: has a first-target color been read yet?"""
    return formats.parse_skeleton(data_text("target1_monitor.skel"))


@lru_cache(maxsize=None)
def target_progress() -> MemorySkeleton:
    """Three-state monitor tracking which of the two targets were read."""
    return formats.parse_skeleton(data_text("target_progress.skel"))


@lru_cache(maxsize=None)
def two_target_pref() -> PreferenceRelation:
    spec = formats.parse_pref(data_text("two_target.pref"))
    return spec.bind(two_target_loop().alphabet)


@lru_cache(maxsize=None)
def zero_reset_pref() -> PreferenceRelation:
    spec = formats.parse_pref(data_text("zero_reset.pref"))
    return spec.bind(plus_minus_loops().alphabet)


def two_target_product() -> ProductArena:
    """Product object (with provenance) matching the bundled product arena."""
    return reachable_product(two_target_loop(), target_progress())
