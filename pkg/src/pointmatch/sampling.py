"""Point-annotation synthesis from ground-truth masks.

Positive points are drawn inside the mask, either uniformly or with
probability proportional to the distance-transform value (which biases
samples toward the object interior). Negative points are drawn uniformly
from one of four background regions: inside the tight bounding box, in
the ring between the tight box and the box scaled to 200%, anywhere off
the mask, or within a fixed distance band around the mask.

Every (video, object, frame) triple gets its own RNG substream derived
from the root seed, so generation order and parallelism cannot change
the output.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .edt import squared_distance_transform
from .errors import EmptyRegion, TooManyPoints
from .video import NEGATIVE, POSITIVE, GtObject, LabeledPoint, PointAnnotationSet, PointFrame, VideoGt

POS_STRATEGIES = ("random", "distance-transform")
NEG_STRATEGIES = ("in-box", "out-box-200", "out-mask", "distance-band")


@dataclass(frozen=True)
class SamplingSpec:
    n_pos: int = 1
    n_neg: int = 0
    pos_strategy: str = "random"
    neg_strategy: str = "in-box"
    band_threshold: float = 50.0
    seed: int = 0

    def __post_init__(self):
        if self.n_pos < 0 or self.n_neg < 0:
            raise ValueError("point counts must be non-negative")
        if self.pos_strategy not in POS_STRATEGIES:
            raise ValueError(f"unknown positive strategy {self.pos_strategy!r}")
        if self.neg_strategy not in NEG_STRATEGIES:
            raise ValueError(f"unknown negative strategy {self.neg_strategy!r}")
        if self.band_threshold <= 0:
            raise ValueError("band_threshold must be positive")


def subseed_rng(seed: int, video_id: str, object_id: int, t: int) -> np.random.Generator:
    """Independent RNG stream for one (video, object, frame) cell."""
    vid_tag = int.from_bytes(hashlib.blake2s(video_id.encode("utf-8"), digest_size=8).digest(), "big")
    entropy = [seed & 0xFFFFFFFFFFFFFFFF, vid_tag, object_id & 0xFFFFFFFFFFFFFFFF, t]
    return np.random.default_rng(np.random.SeedSequence(entropy))


@lru_cache(maxsize=128)
def _edt_weights(key: bytes, shape: tuple[int, int]) -> np.ndarray:
    mask = np.frombuffer(key, dtype=bool).reshape(shape)
    w = np.sqrt(squared_distance_transform(mask).astype(np.float64))
    w.setflags(write=False)
    return w


def _draw(region: np.ndarray, n: int, rng: np.random.Generator, label: str,
          weights: np.ndarray | None = None) -> list[LabeledPoint]:
    ys, xs = np.nonzero(region)
    count = ys.size
    if count == 0:
        raise EmptyRegion("sampling region has no pixels")
    if n > count:
        raise TooManyPoints(f"requested {n} points from a region of {count} pixels")
    if weights is None:
        idx = rng.choice(count, size=n, replace=False)
    else:
        p = weights[ys, xs]
        idx = rng.choice(count, size=n, replace=False, p=p / p.sum())
    return [LabeledPoint(int(xs[i]), int(ys[i]), label) for i in idx]


def sample_positive(mask: np.ndarray, spec: SamplingSpec,
                    rng: np.random.Generator | None = None) -> list[LabeledPoint]:
    """Draw spec.n_pos distinct foreground points."""
    mask = np.asarray(mask) != 0
    if not mask.any():
        raise EmptyRegion("mask has no foreground pixels")
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    weights = None
    if spec.pos_strategy == "distance-transform":
        weights = _edt_weights(mask.tobytes(), mask.shape)
    return _draw(mask, spec.n_pos, rng, POSITIVE, weights)


def _bbox(mask: np.ndarray) -> tuple[int, int, int, int]:
    ys, xs = np.nonzero(mask)
    return int(xs.min()), int(ys.min()), int(xs.max()), int(ys.max())


def negative_region(mask: np.ndarray, strategy: str, band_threshold: float = 50.0) -> np.ndarray:
    """Boolean region a given negative strategy samples from."""
    mask = np.asarray(mask) != 0
    h, w = mask.shape
    if strategy == "out-mask":
        return ~mask
    if not mask.any():
        raise EmptyRegion(f"strategy {strategy!r} needs a non-empty mask")
    if strategy == "in-box":
        x0, y0, x1, y1 = _bbox(mask)
        box = np.zeros_like(mask)
        box[y0:y1 + 1, x0:x1 + 1] = True
        return box & ~mask
    if strategy == "out-box-200":
        x0, y0, x1, y1 = _bbox(mask)
        bw, bh = x1 - x0 + 1, y1 - y0 + 1
        # Scale to twice the width/height about the center; the extra
        # extent splits floor/ceil across the two sides, then clips.
        sx0, sx1 = max(0, x0 - bw // 2), min(w - 1, x1 + (bw - bw // 2))
        sy0, sy1 = max(0, y0 - bh // 2), min(h - 1, y1 + (bh - bh // 2))
        scaled = np.zeros_like(mask)
        scaled[sy0:sy1 + 1, sx0:sx1 + 1] = True
        scaled[y0:y1 + 1, x0:x1 + 1] = False
        return scaled & ~mask
    if strategy == "distance-band":
        sq = squared_distance_transform(~mask)
        return ~mask & (sq <= band_threshold * band_threshold)
    raise ValueError(f"unknown negative strategy {strategy!r}")


def sample_negative(mask: np.ndarray, spec: SamplingSpec,
                    rng: np.random.Generator | None = None) -> list[LabeledPoint]:
    """Draw spec.n_neg distinct background points from the strategy's region."""
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    region = negative_region(mask, spec.neg_strategy, spec.band_threshold)
    return _draw(region, spec.n_neg, rng, NEGATIVE)


def _sample_frame(mask: np.ndarray, spec: SamplingSpec, rng: np.random.Generator,
                  fallback_neg: str | None) -> tuple[LabeledPoint, ...]:
    points: list[LabeledPoint] = []
    if spec.n_pos:
        points.extend(sample_positive(mask, spec, rng))
    if spec.n_neg:
        try:
            points.extend(sample_negative(mask, spec, rng))
        except EmptyRegion:
            if fallback_neg is None:
                raise
            retry = SamplingSpec(spec.n_pos, spec.n_neg, spec.pos_strategy,
                                 fallback_neg, spec.band_threshold, spec.seed)
            points.extend(sample_negative(mask, retry, rng))
    return tuple(points)


def synthesize_annotations(gt: VideoGt, spec: SamplingSpec,
                           fallback_neg: str | None = None,
                           threads: int = 1) -> PointAnnotationSet:
    """Sample points for every object on every present frame of a video.

    Absent frames get no points. Raises EmptyRegion with object/frame
    context unless `fallback_neg` names a negative strategy to retry with.
    """
    if fallback_neg is not None and fallback_neg not in NEG_STRATEGIES:
        raise ValueError(f"unknown fallback strategy {fallback_neg!r}")

    def one(obj, t):
        mask = obj.masks[t]
        rng = subseed_rng(spec.seed, gt.video_id, obj.object_id, t)
        try:
            return _sample_frame(mask, spec, rng, fallback_neg)
        except EmptyRegion as e:
            raise EmptyRegion(f"object {obj.object_id} frame {t}: {e}") from e

    tasks = [(obj, t) for obj in gt.objects for t in range(gt.length) if obj.present[t]]
    if threads > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda a: one(*a), tasks))
        drawn = {(obj.object_id, t): pts for (obj, t), pts in zip(tasks, results)}
    else:
        drawn = {(obj.object_id, t): one(obj, t) for obj, t in tasks}

    objects = []
    for obj in gt.objects:
        frames = [
            PointFrame(True, drawn[(obj.object_id, t)]) if obj.present[t] else PointFrame(False)
            for t in range(gt.length)
        ]
        objects.append(GtObject(obj.object_id, obj.category, frames))
    return PointAnnotationSet(gt.video_id, gt.dims, gt.length, objects)
