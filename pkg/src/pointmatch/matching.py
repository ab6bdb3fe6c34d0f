"""Matching tracked proposals to point-annotated objects.

The pairwise cost between an object and a track combines three terms:
a count of annotated points the track's binarized masks disagree with,
a count of other objects' positive points the track covers (those are
free negatives: a pixel inside another instance cannot belong to this
one), and the negated track score to prefer confident masks. The
optimal injective assignment minimizes the weighted sum.

Costs are accumulated only over frames where the object is present, and
a frame where a track has no mask reads as all-background there.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .assignment import solve_min_cost_assignment
from .errors import NoPoints, NotEnoughProposals, OutOfBoundsPoint
from .masks import FrameDims, Rle, empty_rle, rle_decode
from .tracking import FrameProposal, TrackedProposal, score, track_proposals
from .video import POSITIVE, GtObject, PointAnnotationSet, PointFrame

MATCHING_MODES = ("spatio-temporal", "per-frame")


@dataclass(frozen=True)
class MatchWeights:
    lambda_ann: float = 5.0
    lambda_cineg: float = 5.0
    lambda_maskness: float = 2.0

    def __post_init__(self):
        if min(self.lambda_ann, self.lambda_cineg, self.lambda_maskness) < 0:
            raise ValueError("weights must be non-negative")
        if self.lambda_ann == self.lambda_cineg == self.lambda_maskness == 0:
            raise ValueError("at least one weight must be positive")


@dataclass(frozen=True)
class ObjectAssignment:
    object_id: int
    track_id: int
    cost_ann: float
    cost_cineg: float
    cost_maskness: float
    total: float


@dataclass
class MatchResult:
    assignments: list[ObjectAssignment]

    def by_object(self) -> dict[int, ObjectAssignment]:
        return {a.object_id: a for a in self.assignments}


@dataclass
class FrameMatch:
    t: int
    result: MatchResult


@dataclass
class PseudoObject:
    object_id: int
    category: int
    present: list[bool]
    masks: list[Rle | None]


@dataclass
class PseudoLabelSet:
    video_id: str
    dims: FrameDims
    length: int
    objects: list[PseudoObject]


def _decoded_masks(track: TrackedProposal) -> list[np.ndarray | None]:
    return [None if f is None else rle_decode(f.rle) for f in track.frames]


def _lookup(masks: list[np.ndarray | None], t: int, x: int, y: int) -> bool:
    m = masks[t]
    if m is None:
        return False
    h, w = m.shape
    if not (0 <= x < w and 0 <= y < h):
        raise OutOfBoundsPoint(f"point ({x}, {y}) outside {w}x{h} frame {t}")
    return bool(m[y, x])


def _cost_ann(obj: GtObject, masks: list[np.ndarray | None]) -> float:
    mismatches = 0
    for t, frame in enumerate(obj.frames):
        if not frame.present:
            continue
        for p in frame.points:
            covered = _lookup(masks, t, p.x, p.y)
            if covered != (p.label == POSITIVE):
                mismatches += 1
    return float(mismatches)


def _cost_cineg(obj: GtObject, others: Sequence[GtObject], masks: list[np.ndarray | None]) -> float:
    covered = 0
    for t, frame in enumerate(obj.frames):
        if not frame.present:
            continue
        for other in others:
            of = other.frames[t]
            if not of.present:
                continue
            for p in of.points:
                if p.label == POSITIVE and _lookup(masks, t, p.x, p.y):
                    covered += 1
    return float(covered)


def cost_ann(obj: GtObject, track: TrackedProposal) -> float:
    """Count of this object's annotated points the track's masks get wrong."""
    return _cost_ann(obj, _decoded_masks(track))


def cost_cineg(obj: GtObject, others: Sequence[GtObject], track: TrackedProposal) -> float:
    """Count of other objects' positive points the track covers on obj's frames."""
    others = [o for o in others if o is not obj]
    return _cost_cineg(obj, others, _decoded_masks(track))


def cost_maskness(track: TrackedProposal, source: str = "maskness") -> float:
    """Negated track score; lower cost for more confident masks."""
    return -score(track, source)


def match_video(gt: Sequence[GtObject], tracks: Sequence[TrackedProposal],
                weights: MatchWeights = MatchWeights(),
                source: str = "maskness") -> MatchResult:
    """Assign one track to every annotated object, minimizing total cost."""
    gt = list(gt)
    tracks = list(tracks)
    if len(gt) > len(tracks):
        raise NotEnoughProposals(f"{len(gt)} objects but only {len(tracks)} tracks")
    for obj in gt:
        if not obj.annotated_frames():
            raise NoPoints(f"object {obj.object_id} has no points on any present frame")

    decoded = [_decoded_masks(tr) for tr in tracks]
    score_costs = [cost_maskness(tr, source) for tr in tracks]

    ann = np.empty((len(gt), len(tracks)))
    cineg = np.empty_like(ann)
    costs = np.empty_like(ann)
    for j, obj in enumerate(gt):
        others = [o for o in gt if o is not obj]
        for r in range(len(tracks)):
            ann[j, r] = _cost_ann(obj, decoded[r])
            cineg[j, r] = _cost_cineg(obj, others, decoded[r])
            costs[j, r] = (weights.lambda_ann * ann[j, r]
                           + weights.lambda_cineg * cineg[j, r]
                           + weights.lambda_maskness * score_costs[r])

    mapping = solve_min_cost_assignment(costs).mapping
    assignments = []
    for j, obj in enumerate(gt):
        r = mapping[j]
        assignments.append(ObjectAssignment(
            object_id=obj.object_id,
            track_id=tracks[r].track_id,
            cost_ann=float(ann[j, r]),
            cost_cineg=float(cineg[j, r]),
            cost_maskness=float(score_costs[r]),
            total=float(costs[j, r]),
        ))
    return MatchResult(assignments)


def _frame_slice(obj: GtObject, t: int) -> GtObject:
    return GtObject(obj.object_id, obj.category, [obj.frames[t]])


def match_per_frame(gt: Sequence[GtObject], frames: Sequence[Sequence[FrameProposal]],
                    weights: MatchWeights = MatchWeights(),
                    source: str = "maskness",
                    maskness_mode: str = "foreground-mean") -> list[FrameMatch]:
    """Match every annotated frame independently.

    Each frame with at least one annotated object is treated as its own
    single-frame video: proposals become single-frame tracks (so track
    ids are maskness ranks within the frame) and costs are restricted to
    that frame. Frames with no annotated points yield no entry.
    """
    results = []
    for t, proposals in enumerate(frames):
        sub_gt = [_frame_slice(o, t) for o in gt
                  if t < len(o.frames) and o.frames[t].present and o.frames[t].points]
        if not sub_gt:
            continue
        sf_tracks = track_proposals([proposals], maskness_mode)
        results.append(FrameMatch(t, match_video(sub_gt, sf_tracks, weights, source)))
    return results


def emit_pseudo_labels(result: MatchResult, gt: PointAnnotationSet,
                       tracks: Sequence[TrackedProposal]) -> PseudoLabelSet:
    """Copy each object's assigned track masks, pruned to its present frames."""
    by_id = {tr.track_id: tr for tr in tracks}
    objects = []
    for a in result.assignments:
        obj = next(o for o in gt.objects if o.object_id == a.object_id)
        track = by_id[a.track_id]
        masks: list[Rle | None] = []
        for t in range(gt.length):
            if not obj.frames[t].present:
                masks.append(None)
            else:
                frame = track.frames[t] if t < len(track.frames) else None
                masks.append(frame.rle if frame is not None else empty_rle(gt.dims))
        objects.append(PseudoObject(obj.object_id, obj.category,
                                    [f.present for f in obj.frames], masks))
    return PseudoLabelSet(gt.video_id, gt.dims, gt.length, objects)


def emit_pseudo_labels_per_frame(frame_results: Sequence[FrameMatch], gt: PointAnnotationSet,
                                 frames: Sequence[Sequence[FrameProposal]],
                                 maskness_mode: str = "foreground-mean") -> PseudoLabelSet:
    """Per-frame counterpart of emit_pseudo_labels.

    Present frames that carried no annotation get no mask (there is no
    assignment to copy from).
    """
    masks = {o.object_id: [None] * gt.length for o in gt.objects}
    for fm in frame_results:
        sf_tracks = track_proposals([frames[fm.t]], maskness_mode)
        by_id = {tr.track_id: tr for tr in sf_tracks}
        for a in fm.result.assignments:
            masks[a.object_id][fm.t] = by_id[a.track_id].frames[0].rle
    objects = []
    for obj in gt.objects:
        present = [f.present for f in obj.frames]
        pruned = [masks[obj.object_id][t] if present[t] else None for t in range(gt.length)]
        objects.append(PseudoObject(obj.object_id, obj.category, present, pruned))
    return PseudoLabelSet(gt.video_id, gt.dims, gt.length, objects)
