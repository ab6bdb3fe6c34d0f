"""Deterministic synthetic videos and noisy proposal simulation.

Scenes are moving rectangles and ellipses with birth/death windows;
later-listed objects occlude earlier ones, so ground-truth instance
masks are pairwise disjoint within a frame. The proposal simulator emits
one perturbed copy of every visible object per frame plus configurable
distractors chosen to stress the matcher: unions of two instances
(supersets that satisfy any positive point of either object), shifted
copies, and background blobs. Distractors carry reduced foreground
confidence so maskness ranks them below shape-faithful proposals.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .edt import squared_distance_transform
from .errors import DegenerateObject
from .masks import FrameDims, SoftFrameStats, rle_encode
from .tracking import FrameProposal, ProposalSet
from .video import GtMaskTrack, VideoGt

_SEED_MASK = 0xFFFFFFFFFFFFFFFF


@dataclass(frozen=True)
class SceneObject:
    shape: str  # "ellipse" | "rectangle"
    size: int  # bounding-box side in pixels; ellipses are circular
    start: tuple[float, float]  # bounding-box top-left at t=0
    velocity: tuple[float, float]  # pixels per frame
    birth_t: int = 0
    death_t: int | None = None  # inclusive; None = last frame
    category: int = 1

    def __post_init__(self):
        if self.shape not in ("ellipse", "rectangle"):
            raise ValueError(f"unknown shape {self.shape!r}")
        if self.size < 1:
            raise ValueError("size must be >= 1 pixel")


@dataclass(frozen=True)
class SceneConfig:
    dims: FrameDims
    length: int
    objects: tuple[SceneObject, ...]
    seed: int = 0
    video_id: str = "scene"

    def __post_init__(self):
        if self.length < 1:
            raise ValueError("scene needs at least one frame")
        for i, obj in enumerate(self.objects):
            death = obj.death_t if obj.death_t is not None else self.length - 1
            if not (0 <= obj.birth_t <= death < self.length):
                raise ValueError(f"object {i}: bad birth/death window [{obj.birth_t}, {death}]")


@dataclass(frozen=True)
class ProposalNoiseConfig:
    morph_radius: int = 0
    boundary_flip_prob: float = 0.0
    n_distractors: int = 0
    embedding_dim: int = 16
    embedding_noise: float = 0.0
    soft_fg_level: float = 0.9
    soft_bg_level: float = 0.05
    seed: int = 0
    shuffle_frames: bool = False

    def __post_init__(self):
        if not (self.soft_fg_level > 0.5 > self.soft_bg_level >= 0.0):
            raise ValueError("need soft_fg_level > 0.5 > soft_bg_level >= 0")
        if self.morph_radius < 0 or self.n_distractors < 0 or self.embedding_dim < 1:
            raise ValueError("bad noise config")


def _raster(obj: SceneObject, t: int, dims: FrameDims) -> np.ndarray:
    x0 = obj.start[0] + obj.velocity[0] * t
    y0 = obj.start[1] + obj.velocity[1] * t
    xs = np.arange(dims.width) + 0.5
    ys = np.arange(dims.height) + 0.5
    if obj.shape == "rectangle":
        in_x = (xs >= x0) & (xs < x0 + obj.size)
        in_y = (ys >= y0) & (ys < y0 + obj.size)
        return in_y[:, None] & in_x[None, :]
    a = obj.size / 2.0
    cx, cy = x0 + a, y0 + a
    dx = (xs - cx) / a
    dy = (ys - cy) / a
    return dy[:, None] ** 2 + dx[None, :] ** 2 <= 1.0


def _dilate(mask: np.ndarray, r: int) -> np.ndarray:
    if r == 0 or not (~mask).any():
        return mask
    return squared_distance_transform(~mask) <= r * r


def _erode(mask: np.ndarray, r: int) -> np.ndarray:
    if r == 0:
        return mask
    return squared_distance_transform(mask) > r * r


def generate_scene(cfg: SceneConfig) -> VideoGt:
    """Render ground-truth masks and presence flags for one scene.

    An object is present when its birth/death window covers the frame
    and at least one of its pixels survives clipping and occlusion.
    """
    n = len(cfg.objects)
    visible = [[None] * cfg.length for _ in range(n)]
    for t in range(cfg.length):
        occupied = np.zeros((cfg.dims.height, cfg.dims.width), bool)
        for i in range(n - 1, -1, -1):
            obj = cfg.objects[i]
            death = obj.death_t if obj.death_t is not None else cfg.length - 1
            if not (obj.birth_t <= t <= death):
                continue
            shape = _raster(obj, t, cfg.dims)
            visible[i][t] = shape & ~occupied
            occupied |= shape

    tracks = []
    for i, obj in enumerate(cfg.objects):
        present = [m is not None and bool(m.any()) for m in visible[i]]
        if not any(present):
            raise DegenerateObject(f"object {i} is never visible")
        masks = [visible[i][t] if present[t] else None for t in range(cfg.length)]
        tracks.append(GtMaskTrack(object_id=i, category=obj.category, present=present, masks=masks))
    return VideoGt(cfg.video_id, cfg.dims, cfg.length, tracks)


def _unit(v: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v)
    return v / n if n > 0 else v


def _const_level_stats(area: int, fg: float, bg: float, dims: FrameDims) -> SoftFrameStats:
    if area == 0:
        return SoftFrameStats(0.0, 0, 0.0)
    return SoftFrameStats(
        fg_prob_sum=fg * area,
        fg_area=area,
        vol_prob_sum=fg * area + bg * (dims.area - area),
    )


@dataclass(frozen=True)
class _DistractorSlot:
    kind: str  # "union" | "shifted" | "blob"
    params: tuple
    embedding: np.ndarray


def _shift_mask(mask: np.ndarray, dx: int, dy: int) -> np.ndarray:
    h, w = mask.shape
    out = np.zeros_like(mask)
    src_y = slice(max(0, -dy), min(h, h - dy))
    src_x = slice(max(0, -dx), min(w, w - dx))
    dst_y = slice(max(0, dy), min(h, h + dy))
    dst_x = slice(max(0, dx), min(w, w + dx))
    out[dst_y, dst_x] = mask[src_y, src_x]
    return out


def _blob_mask(cx: float, cy: float, ax: float, ay: float, dims: FrameDims) -> np.ndarray:
    xs = np.arange(dims.width) + 0.5
    ys = np.arange(dims.height) + 0.5
    return ((ys - cy) / ay)[:, None] ** 2 + ((xs - cx) / ax)[None, :] ** 2 <= 1.0


def _build_slots(gt: VideoGt, cfg: ProposalNoiseConfig) -> list[_DistractorSlot]:
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed & _SEED_MASK, 1]))
    n = len(gt.objects)
    pairs = list(itertools.combinations(range(n), 2))
    slots = []
    n_union = n_shift = 0
    for k in range(cfg.n_distractors):
        kind = ("union", "shifted", "blob")[k % 3]
        if kind == "union" and not pairs:
            kind = "shifted" if n else "blob"
        if kind == "shifted" and not n:
            kind = "blob"
        if kind == "union":
            params = pairs[n_union % len(pairs)]
            n_union += 1
        elif kind == "shifted":
            src = n_shift % n
            n_shift += 1
            area = max((int(m.sum()) for m in gt.objects[src].masks if m is not None), default=16)
            span = max(2, int(np.sqrt(area) / 2))
            dx = int(rng.integers(1, span + 1)) * (1 if rng.random() < 0.5 else -1)
            dy = int(rng.integers(1, span + 1)) * (1 if rng.random() < 0.5 else -1)
            params = (src, dx, dy)
        else:
            cx = rng.uniform(0, gt.dims.width)
            cy = rng.uniform(0, gt.dims.height)
            ax = rng.uniform(max(2.0, gt.dims.width / 16), gt.dims.width / 5)
            ay = rng.uniform(max(2.0, gt.dims.height / 16), gt.dims.height / 5)
            params = (cx, cy, ax, ay)
        emb = _unit(rng.standard_normal(cfg.embedding_dim))
        slots.append(_DistractorSlot(kind, params, emb))
    return slots


def _slot_mask(slot: _DistractorSlot, gt: VideoGt, t: int) -> np.ndarray:
    if slot.kind == "union":
        i, j = slot.params
        out = np.zeros((gt.dims.height, gt.dims.width), bool)
        for idx in (i, j):
            m = gt.objects[idx].masks[t]
            if m is not None:
                out |= m
        return out
    if slot.kind == "shifted":
        src, dx, dy = slot.params
        m = gt.objects[src].masks[t]
        if m is None:
            return np.zeros((gt.dims.height, gt.dims.width), bool)
        return _shift_mask(m, dx, dy)
    cx, cy, ax, ay = slot.params
    return _blob_mask(cx, cy, ax, ay, gt.dims)


def generate_proposals(gt: VideoGt, cfg: ProposalNoiseConfig) -> ProposalSet:
    """Simulate per-frame class-agnostic proposals for a ground-truth video.

    Every visible object yields one perturbed copy of its mask
    (dilation or erosion by morph_radius with random sign, then boundary
    flips); distractor slots persist across frames so they link into
    coherent tracks; frames are padded with empty proposals to a constant
    count. Each object keeps one base unit embedding plus per-frame
    Gaussian noise.
    """
    rng_base = np.random.default_rng(np.random.SeedSequence([cfg.seed & _SEED_MASK, 0]))
    bases = {obj.object_id: _unit(rng_base.standard_normal(cfg.embedding_dim)) for obj in gt.objects}
    slots = _build_slots(gt, cfg)

    counts = [sum(obj.present[t] for obj in gt.objects) + len(slots) for t in range(gt.length)]
    r_total = max(counts)

    frames: list[list[FrameProposal]] = []
    sources: list[list[int]] = []
    for t in range(gt.length):
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed & _SEED_MASK, 2, t]))
        props: list[FrameProposal] = []
        ids: list[int] = []
        for obj in gt.objects:
            if not obj.present[t]:
                continue
            mask = obj.masks[t]
            noisy = mask
            if cfg.morph_radius > 0:
                grow = rng.integers(0, 2) == 0
                noisy = (_dilate if grow else _erode)(noisy, cfg.morph_radius)
            if cfg.boundary_flip_prob > 0:
                band = _dilate(noisy, 1) & ~_erode(noisy, 1)
                flips = band & (rng.random(noisy.shape) < cfg.boundary_flip_prob)
                noisy = noisy ^ flips
            if not noisy.any():
                noisy = mask
            fg = float(np.clip(cfg.soft_fg_level + rng.uniform(-0.02, 0.02), 0.501, 0.999))
            emb = bases[obj.object_id] + cfg.embedding_noise * rng.standard_normal(cfg.embedding_dim)
            props.append(FrameProposal(
                rle=rle_encode(noisy),
                stats=_const_level_stats(int(noisy.sum()), fg, cfg.soft_bg_level, gt.dims),
                embedding=emb,
                confidence=float(0.8 + 0.15 * rng.random()),
            ))
            ids.append(obj.object_id)
        for slot in slots:
            mask = _slot_mask(slot, gt, t)
            # distractors sit closer to the binarization threshold, so
            # maskness ranks them below shape-faithful proposals
            fg = float(np.clip(0.5 + 0.55 * (cfg.soft_fg_level - 0.5) + rng.uniform(-0.01, 0.01),
                               0.501, 0.99))
            emb = slot.embedding + cfg.embedding_noise * rng.standard_normal(cfg.embedding_dim)
            props.append(FrameProposal(
                rle=rle_encode(mask),
                stats=_const_level_stats(int(mask.sum()), fg, cfg.soft_bg_level, gt.dims),
                embedding=emb,
                confidence=float(0.3 + 0.3 * rng.random()),
            ))
            ids.append(-1)
        while len(props) < r_total:
            empty = np.zeros((gt.dims.height, gt.dims.width), bool)
            props.append(FrameProposal(
                rle=rle_encode(empty),
                stats=SoftFrameStats(0.0, 0, 0.0),
                embedding=np.zeros(cfg.embedding_dim),
                confidence=0.0,
            ))
            ids.append(-1)
        if cfg.shuffle_frames:
            perm = rng.permutation(r_total)
            props = [props[i] for i in perm]
            ids = [ids[i] for i in perm]
        frames.append(props)
        sources.append(ids)

    return ProposalSet(gt.video_id, gt.dims, gt.length, frames, source_ids=sources)
