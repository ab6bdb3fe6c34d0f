"""Pseudo-label generation for point-supervised video instance masks.

Links per-frame class-agnostic mask proposals into spatio-temporal
tracks, matches tracks to sparsely point-annotated video objects with a
three-term assignment cost, and emits dense pseudo-masks. Ships with a
synthetic scene harness so the whole pipeline is testable at desk scale.
"""

from .assignment import Assignment, brute_force_assignment, solve_min_cost_assignment
from .backend import active_backend
from .edt import euclidean_distance_transform, squared_distance_transform
from .evaluation import EvalReport, build_report, pseudo_label_iou, selection_accuracy
from .masks import (FrameDims, Rle, SoftFrameStats, binarize, mask_iou, maskness,
                    rle_decode, rle_encode)
from .matching import (MatchResult, MatchWeights, PseudoLabelSet, cost_ann, cost_cineg,
                       cost_maskness, emit_pseudo_labels, emit_pseudo_labels_per_frame,
                       match_per_frame, match_video)
from .pipeline import PipelineConfig, run_pipeline
from .sampling import SamplingSpec, sample_negative, sample_positive, synthesize_annotations
from .scenes import (ProposalNoiseConfig, SceneConfig, SceneObject, generate_proposals,
                     generate_scene)
from .tracking import (FrameProposal, TrackedProposal, embedding_similarity_costs, score,
                       track_proposals)
from .video import GtObject, LabeledPoint, PointAnnotationSet, VideoGt

__version__ = "0.1.0"

__all__ = [
    "Assignment", "EvalReport", "FrameDims", "FrameProposal", "GtObject", "LabeledPoint",
    "MatchResult", "MatchWeights", "PipelineConfig", "PointAnnotationSet",
    "ProposalNoiseConfig", "PseudoLabelSet", "Rle", "SamplingSpec", "SceneConfig",
    "SceneObject", "SoftFrameStats", "TrackedProposal", "VideoGt", "active_backend",
    "binarize", "brute_force_assignment", "build_report", "cost_ann", "cost_cineg",
    "cost_maskness", "embedding_similarity_costs", "emit_pseudo_labels",
    "emit_pseudo_labels_per_frame", "euclidean_distance_transform", "generate_proposals",
    "generate_scene", "mask_iou", "maskness", "match_per_frame", "match_video",
    "pseudo_label_iou", "rle_decode", "rle_encode", "run_pipeline", "sample_negative",
    "sample_positive", "score", "selection_accuracy", "solve_min_cost_assignment",
    "squared_distance_transform", "synthesize_annotations", "track_proposals",
]
