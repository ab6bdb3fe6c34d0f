"""Command-line pipeline driver.

Exit codes: 0 success, 1 schema error in an input document, 2 any other
pipeline failure.
"""

from __future__ import annotations

import functools
import sys
from importlib import resources
from pathlib import Path

import click

from . import io
from .errors import PointMatchError, SchemaError
from .evaluation import build_report, selection_accuracy, selection_accuracy_per_frame
from .io import MASKNESS_MODES, MatchDocument
from .matching import (MATCHING_MODES, MatchWeights, emit_pseudo_labels,
                       emit_pseudo_labels_per_frame, match_per_frame, match_video)
from .pipeline import PipelineConfig, run_pipeline
from .sampling import NEG_STRATEGIES, POS_STRATEGIES, SamplingSpec, synthesize_annotations
from .scenes import generate_proposals, generate_scene
from .tracking import SCORE_SOURCES, TrackSet, track_proposals


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except SchemaError as e:
            click.echo(f"schema error: {e}", err=True)
            sys.exit(1)
        except PointMatchError as e:
            click.echo(f"error: {e}", err=True)
            sys.exit(2)

    return wrapper


def _demo_config():
    text = resources.files("pointmatch").joinpath("data/demo_scene.json").read_text("utf-8")
    import json

    return io.parse_scene_config(json.loads(text), "demo_scene.json")


def _scene_config(config_path):
    if config_path is None:
        return _demo_config()
    return io.load_scene_config(config_path)


_sampling_options = [
    click.option("--n-pos", default=1, show_default=True, help="Positive points per frame."),
    click.option("--n-neg", default=0, show_default=True, help="Negative points per frame."),
    click.option("--pos-strategy", type=click.Choice(POS_STRATEGIES), default="random",
                 show_default=True),
    click.option("--neg-strategy", type=click.Choice(NEG_STRATEGIES), default="in-box",
                 show_default=True),
    click.option("--band-threshold", default=50.0, show_default=True,
                 help="Distance-band radius in pixels."),
    click.option("--seed", default=0, show_default=True, help="Point sampling seed."),
    click.option("--fallback", type=click.Choice(NEG_STRATEGIES), default=None,
                 help="Negative strategy to retry with when a region is empty."),
]

_weight_options = [
    click.option("--lambda-ann", default=5.0, show_default=True),
    click.option("--lambda-cineg", default=5.0, show_default=True),
    click.option("--lambda-maskness", default=2.0, show_default=True),
    click.option("--score-source", type=click.Choice(SCORE_SOURCES), default="maskness",
                 show_default=True),
]


def _add_options(options):
    def deco(fn):
        for opt in reversed(options):
            fn = opt(fn)
        return fn

    return deco


@click.group()
def main():
    """Pseudo-label generation for point-annotated video objects."""


@main.command("gen-scene")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Scene config JSON; defaults to the bundled demo scene.")
@click.option("--out-gt", default="gt.json", show_default=True)
@click.option("--out-proposals", default="proposals.json", show_default=True)
@_handle_errors
def gen_scene_cmd(config_path, out_gt, out_proposals):
    """Render a synthetic scene and simulate proposals for it."""
    scene, noise = _scene_config(config_path)
    gt = generate_scene(scene)
    io.save_gt(gt, out_gt)
    io.save_proposals(generate_proposals(gt, noise), out_proposals)
    click.echo(f"wrote {out_gt} and {out_proposals}")


@main.command("sample-points")
@click.option("--gt", "gt_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", default="points.json", show_default=True)
@_add_options(_sampling_options)
@click.option("--threads", default=1, show_default=True)
@_handle_errors
def sample_points_cmd(gt_path, out, n_pos, n_neg, pos_strategy, neg_strategy,
                      band_threshold, seed, fallback, threads):
    """Synthesize point annotations from ground-truth masks."""
    gt = io.load_gt(gt_path)
    spec = SamplingSpec(n_pos, n_neg, pos_strategy, neg_strategy, band_threshold, seed)
    ann = synthesize_annotations(gt, spec, fallback_neg=fallback, threads=threads)
    io.save_points(ann, out)
    click.echo(f"wrote {out}")


@main.command("track")
@click.option("--proposals", "proposals_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--out", default="tracks.json", show_default=True)
@click.option("--maskness-mode", type=click.Choice(MASKNESS_MODES), default="foreground-mean",
              show_default=True)
@_handle_errors
def track_cmd(proposals_path, out, maskness_mode):
    """Link per-frame proposals into spatio-temporal tracks."""
    props = io.load_proposals(proposals_path)
    tracks = track_proposals(props.frames, maskness_mode)
    io.save_tracks(TrackSet(props.video_id, props.dims, props.length, tracks), out)
    click.echo(f"wrote {out}")


@main.command("match")
@click.option("--points", "points_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--tracks", "tracks_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Required for spatio-temporal matching.")
@click.option("--proposals", "proposals_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Required for per-frame matching.")
@click.option("--matching", type=click.Choice(MATCHING_MODES), default="spatio-temporal",
              show_default=True)
@click.option("--maskness-mode", type=click.Choice(MASKNESS_MODES), default="foreground-mean",
              show_default=True)
@_add_options(_weight_options)
@click.option("--out", default="match.json", show_default=True)
@_handle_errors
def match_cmd(points_path, tracks_path, proposals_path, matching, maskness_mode,
              lambda_ann, lambda_cineg, lambda_maskness, score_source, out):
    """Match tracks (or per-frame proposals) to point-annotated objects."""
    ann = io.load_points(points_path)
    weights = MatchWeights(lambda_ann, lambda_cineg, lambda_maskness)
    md = MatchDocument(ann.video_id, ann.dims, ann.length, matching, score_source,
                       maskness_mode, weights)
    if matching == "spatio-temporal":
        if tracks_path is None:
            raise click.UsageError("--tracks is required for spatio-temporal matching")
        md.result = match_video(ann.objects, io.load_tracks(tracks_path).tracks,
                                weights, score_source)
    else:
        if proposals_path is None:
            raise click.UsageError("--proposals is required for per-frame matching")
        md.frame_results = match_per_frame(ann.objects, io.load_proposals(proposals_path).frames,
                                           weights, score_source, maskness_mode)
    io.save_match(md, out)
    click.echo(f"wrote {out}")


@main.command("emit")
@click.option("--match", "match_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--points", "points_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--tracks", "tracks_path", type=click.Path(exists=True, dir_okay=False),
              default=None)
@click.option("--proposals", "proposals_path", type=click.Path(exists=True, dir_okay=False),
              default=None)
@click.option("--out", default="pseudo.json", show_default=True)
@_handle_errors
def emit_cmd(match_path, points_path, tracks_path, proposals_path, out):
    """Emit dense pseudo-masks from a match report."""
    md = io.load_match(match_path)
    ann = io.load_points(points_path)
    if md.matching == "spatio-temporal":
        if tracks_path is None:
            raise click.UsageError("--tracks is required for a spatio-temporal match report")
        pseudo = emit_pseudo_labels(md.result, ann, io.load_tracks(tracks_path).tracks)
    else:
        if proposals_path is None:
            raise click.UsageError("--proposals is required for a per-frame match report")
        pseudo = emit_pseudo_labels_per_frame(md.frame_results, ann,
                                              io.load_proposals(proposals_path).frames,
                                              md.maskness_mode)
    io.save_pseudo(pseudo, out)
    click.echo(f"wrote {out}")


@main.command("eval")
@click.option("--pseudo", "pseudo_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--gt", "gt_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--match", "match_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--tracks", "tracks_path", type=click.Path(exists=True, dir_okay=False),
              default=None)
@click.option("--proposals", "proposals_path", type=click.Path(exists=True, dir_okay=False),
              default=None)
@click.option("--out", default="report.json", show_default=True)
@_handle_errors
def eval_cmd(pseudo_path, gt_path, match_path, tracks_path, proposals_path, out):
    """Score pseudo-masks against ground truth."""
    pseudo = io.load_pseudo(pseudo_path)
    gt = io.load_gt(gt_path)
    md = io.load_match(match_path)
    if md.matching == "spatio-temporal":
        if tracks_path is None:
            raise click.UsageError("--tracks is required for a spatio-temporal match report")
        flags, _ = selection_accuracy(md.result, gt, io.load_tracks(tracks_path).tracks)
    else:
        if proposals_path is None:
            raise click.UsageError("--proposals is required for a per-frame match report")
        flags, _ = selection_accuracy_per_frame(md.frame_results, gt,
                                                io.load_proposals(proposals_path).frames,
                                                md.maskness_mode)
    echo = {"matching": md.matching, "score_source": md.score_source,
            "maskness_mode": md.maskness_mode,
            "weights": {"lambda_ann": md.weights.lambda_ann,
                        "lambda_cineg": md.weights.lambda_cineg,
                        "lambda_maskness": md.weights.lambda_maskness}}
    io.save_report(build_report(pseudo, gt, flags, echo), out)
    click.echo(f"wrote {out}")


@main.command("run")
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Scene config JSON; defaults to the bundled demo scene.")
@_add_options(_sampling_options)
@_add_options(_weight_options)
@click.option("--maskness-mode", type=click.Choice(MASKNESS_MODES), default="foreground-mean",
              show_default=True)
@click.option("--matching", type=click.Choice(MATCHING_MODES), default="spatio-temporal",
              show_default=True)
@click.option("--threads", default=1, show_default=True)
@_handle_errors
def run_cmd(out_dir, config_path, n_pos, n_neg, pos_strategy, neg_strategy, band_threshold,
            seed, fallback, lambda_ann, lambda_cineg, lambda_maskness, score_source,
            maskness_mode, matching, threads):
    """Run the full pipeline: scene, points, tracks, match, pseudo-labels, report."""
    scene, noise = _scene_config(config_path)
    cfg = PipelineConfig(
        scene=scene,
        noise=noise,
        sampling=SamplingSpec(n_pos, n_neg, pos_strategy, neg_strategy, band_threshold, seed),
        weights=MatchWeights(lambda_ann, lambda_cineg, lambda_maskness),
        score_source=score_source,
        maskness_mode=maskness_mode,
        matching=matching,
        threads=threads,
        fallback=fallback,
    )
    report = run_pipeline(cfg, out_dir)
    click.echo(f"report: mean_iou={report.mean_iou:.4f} "
               f"selection_accuracy={report.selection_accuracy:.4f} "
               f"({Path(out_dir) / 'report.json'})")


if __name__ == "__main__":
    main()
