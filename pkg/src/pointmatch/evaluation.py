"""Pseudo-label quality metrics against synthetic ground truth.

The desk-scale stand-ins for benchmark AP are per-object spatio-temporal
IoU of the emitted pseudo-masks, and selection accuracy: how often the
matcher picked a track that attains the best achievable IoU for its
object. The matcher cannot beat its proposal set, so selection accuracy
of 1.0 pins mean IoU to the proposal quality ceiling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import EmptyEval, UnknownObject
from .masks import mask_iou, rle_decode
from .matching import FrameMatch, MatchResult, PseudoLabelSet
from .tracking import FrameProposal, TrackedProposal, track_proposals
from .video import VideoGt


@dataclass(frozen=True)
class ObjectEval:
    object_id: int
    iou: float
    selected_best: bool


@dataclass
class EvalReport:
    per_object: list[ObjectEval]
    mean_iou: float
    selection_accuracy: float
    config_echo: dict = field(default_factory=dict)


def _gt_by_id(gt: VideoGt, object_id: int):
    for obj in gt.objects:
        if obj.object_id == object_id:
            return obj
    raise UnknownObject(f"object {object_id} not in ground truth")


def _zeros(gt: VideoGt) -> np.ndarray:
    return np.zeros((gt.dims.height, gt.dims.width), bool)


def _pseudo_sequence(masks, present_ts, gt: VideoGt) -> list[np.ndarray]:
    return [rle_decode(masks[t]) if masks[t] is not None else _zeros(gt) for t in present_ts]


def _track_sequence(track: TrackedProposal, present_ts, gt: VideoGt) -> list[np.ndarray]:
    out = []
    for t in present_ts:
        frame = track.frames[t] if t < len(track.frames) else None
        out.append(rle_decode(frame.rle) if frame is not None else _zeros(gt))
    return out


def pseudo_label_iou(pseudo: PseudoLabelSet, gt: VideoGt) -> tuple[dict[int, float], float]:
    """Per-object spatio-temporal IoU over the object's present frames, plus the mean."""
    if not pseudo.objects:
        raise EmptyEval("no objects to evaluate")
    ious = {}
    for pobj in pseudo.objects:
        gobj = _gt_by_id(gt, pobj.object_id)
        present_ts = [t for t in range(gt.length) if gobj.present[t]]
        gt_seq = [gobj.masks[t] for t in present_ts]
        ps_seq = _pseudo_sequence(pobj.masks, present_ts, gt)
        ious[pobj.object_id] = mask_iou(ps_seq, gt_seq)
    mean = sum(ious.values()) / len(ious)
    return ious, mean


def track_gt_iou(track: TrackedProposal, gt: VideoGt, object_id: int) -> float:
    """Spatio-temporal IoU of a track against one object, over its present frames."""
    gobj = _gt_by_id(gt, object_id)
    present_ts = [t for t in range(gt.length) if gobj.present[t]]
    return mask_iou(_track_sequence(track, present_ts, gt), [gobj.masks[t] for t in present_ts])


def selection_accuracy(result: MatchResult, gt: VideoGt,
                       tracks: Sequence[TrackedProposal]) -> tuple[dict[int, bool], float]:
    """Fraction of objects whose assigned track attains the maximum IoU.

    Ties count as best. Returns the per-object flags and the fraction.
    """
    by_id = {tr.track_id: tr for tr in tracks}
    flags = {}
    for a in result.assignments:
        ious = [track_gt_iou(tr, gt, a.object_id) for tr in tracks]
        achieved = track_gt_iou(by_id[a.track_id], gt, a.object_id)
        flags[a.object_id] = achieved >= max(ious)
    if not flags:
        return {}, 1.0
    return flags, sum(flags.values()) / len(flags)


def selection_accuracy_per_frame(frame_results: Sequence[FrameMatch], gt: VideoGt,
                                 frames: Sequence[Sequence[FrameProposal]],
                                 maskness_mode: str = "foreground-mean") -> tuple[dict[int, bool], float]:
    """Selection flags for per-frame matching.

    An object counts as correctly selected only if every one of its
    annotated frames picked a proposal of maximal single-frame IoU, so a
    single temporally inconsistent frame marks the object wrong.
    """
    flags: dict[int, bool] = {}
    for fm in frame_results:
        sf_tracks = track_proposals([frames[fm.t]], maskness_mode)
        by_id = {tr.track_id: tr for tr in sf_tracks}
        for a in fm.result.assignments:
            gobj = _gt_by_id(gt, a.object_id)
            gt_mask = gobj.masks[fm.t]
            if gt_mask is None:
                continue
            ious = [mask_iou([rle_decode(tr.frames[0].rle)], [gt_mask]) for tr in sf_tracks]
            achieved = mask_iou([rle_decode(by_id[a.track_id].frames[0].rle)], [gt_mask])
            ok = achieved >= max(ious)
            flags[a.object_id] = flags.get(a.object_id, True) and ok
    if not flags:
        return {}, 1.0
    return flags, sum(flags.values()) / len(flags)


def build_report(pseudo: PseudoLabelSet, gt: VideoGt,
                 selection_flags: dict[int, bool],
                 config_echo: dict | None = None) -> EvalReport:
    """Assemble per-object IoUs and selection flags into one report."""
    ious, mean = pseudo_label_iou(pseudo, gt)
    if not selection_flags:
        raise EmptyEval("no selection flags")
    per_object = [ObjectEval(oid, ious[oid], bool(selection_flags.get(oid, False)))
                  for oid in sorted(ious)]
    accuracy = sum(o.selected_best for o in per_object) / len(per_object)
    return EvalReport(per_object, mean, accuracy, dict(config_echo or {}))
