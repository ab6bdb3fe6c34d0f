"""Shared per-video domain containers: ground-truth masks and point annotations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .masks import FrameDims

POSITIVE = "pos"
NEGATIVE = "neg"


@dataclass(frozen=True)
class LabeledPoint:
    x: int
    y: int
    label: str  # POSITIVE or NEGATIVE


@dataclass
class GtMaskTrack:
    """One ground-truth object: per-frame visibility and dense masks."""

    object_id: int
    category: int
    present: list[bool]
    masks: list[np.ndarray | None]  # None exactly where not present


@dataclass
class VideoGt:
    video_id: str
    dims: FrameDims
    length: int
    objects: list[GtMaskTrack] = field(default_factory=list)


@dataclass(frozen=True)
class PointFrame:
    present: bool
    points: tuple[LabeledPoint, ...] = ()


@dataclass
class GtObject:
    """One point-annotated video object: sparse points plus presence flags."""

    object_id: int
    category: int
    frames: list[PointFrame]

    def annotated_frames(self) -> list[int]:
        return [t for t, f in enumerate(self.frames) if f.present and f.points]


@dataclass
class PointAnnotationSet:
    video_id: str
    dims: FrameDims
    length: int
    objects: list[GtObject] = field(default_factory=list)
