"""End-to-end driver: scene -> points -> tracks -> match -> pseudo-labels -> report."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from . import io
from .errors import PipelineError, PointMatchError, SchemaError
from .evaluation import (EvalReport, build_report, selection_accuracy,
                         selection_accuracy_per_frame)
from .matching import (MatchWeights, emit_pseudo_labels, emit_pseudo_labels_per_frame,
                       match_per_frame, match_video)
from .sampling import SamplingSpec, synthesize_annotations
from .scenes import ProposalNoiseConfig, SceneConfig, generate_proposals, generate_scene
from .tracking import TrackSet, track_proposals


@dataclass
class PipelineConfig:
    scene: SceneConfig
    noise: ProposalNoiseConfig
    sampling: SamplingSpec
    weights: MatchWeights = MatchWeights()
    score_source: str = "maskness"
    maskness_mode: str = "foreground-mean"
    matching: str = "spatio-temporal"
    threads: int = 1
    fallback: str | None = None

    def echo(self) -> dict:
        return {
            "weights": {"lambda_ann": self.weights.lambda_ann,
                        "lambda_cineg": self.weights.lambda_cineg,
                        "lambda_maskness": self.weights.lambda_maskness},
            "score_source": self.score_source,
            "maskness_mode": self.maskness_mode,
            "matching": self.matching,
            "threads": self.threads,
            "sampling": {"n_pos": self.sampling.n_pos, "n_neg": self.sampling.n_neg,
                         "pos_strategy": self.sampling.pos_strategy,
                         "neg_strategy": self.sampling.neg_strategy,
                         "band_threshold": self.sampling.band_threshold,
                         "seed": self.sampling.seed},
            "scene_seed": self.scene.seed,
            "noise_seed": self.noise.seed,
        }


def _staged(name: str, fn):
    try:
        return fn()
    except SchemaError:
        raise
    except PipelineError:
        raise
    except PointMatchError as e:
        raise PipelineError(f"stage {name}: {e}") from e


def run_pipeline(cfg: PipelineConfig, out_dir) -> EvalReport:
    """Run all stages on one synthetic scene, writing every artifact to out_dir.

    Stages: gen-scene, sample-points, track, match, emit, eval. Outputs
    are byte-deterministic for fixed seeds regardless of thread count.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    def gen():
        gt = generate_scene(cfg.scene)
        props = generate_proposals(gt, cfg.noise)
        io.save_gt(gt, out / "gt.json")
        io.save_proposals(props, out / "proposals.json")
        return gt, props

    gt, props = _staged("gen-scene", gen)

    def sample():
        ann = synthesize_annotations(gt, cfg.sampling, fallback_neg=cfg.fallback,
                                     threads=cfg.threads)
        io.save_points(ann, out / "points.json")
        return ann

    ann = _staged("sample-points", sample)

    def track():
        tracks = track_proposals(props.frames, cfg.maskness_mode)
        io.save_tracks(TrackSet(gt.video_id, gt.dims, gt.length, tracks), out / "tracks.json")
        return tracks

    tracks = _staged("track", track)

    def match():
        md = io.MatchDocument(gt.video_id, gt.dims, gt.length, cfg.matching,
                              cfg.score_source, cfg.maskness_mode, cfg.weights)
        if cfg.matching == "spatio-temporal":
            md.result = match_video(ann.objects, tracks, cfg.weights, cfg.score_source)
        else:
            md.frame_results = match_per_frame(ann.objects, props.frames, cfg.weights,
                                               cfg.score_source, cfg.maskness_mode)
        io.save_match(md, out / "match.json")
        return md

    md = _staged("match", match)

    def emit():
        if cfg.matching == "spatio-temporal":
            pseudo = emit_pseudo_labels(md.result, ann, tracks)
        else:
            pseudo = emit_pseudo_labels_per_frame(md.frame_results, ann, props.frames,
                                                  cfg.maskness_mode)
        io.save_pseudo(pseudo, out / "pseudo.json")
        return pseudo

    pseudo = _staged("emit", emit)

    def evaluate():
        if cfg.matching == "spatio-temporal":
            flags, _ = selection_accuracy(md.result, gt, tracks)
        else:
            flags, _ = selection_accuracy_per_frame(md.frame_results, gt, props.frames,
                                                    cfg.maskness_mode)
        report = build_report(pseudo, gt, flags, cfg.echo())
        io.save_report(report, out / "report.json")
        return report

    return _staged("eval", evaluate)
