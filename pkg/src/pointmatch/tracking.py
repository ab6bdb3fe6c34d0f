"""Linking per-frame mask proposals into spatio-temporal tracks.

Frame 0 seeds one track per proposal; every later frame is matched to
the tracks by minimum-cost assignment on cosine distance between each
track's running-mean embedding and the frame's proposal embeddings.
The running mean damps per-frame embedding noise. Finished tracks are
scored by maskness and re-indexed by descending score.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .assignment import solve_min_cost_assignment
from .errors import DimMismatch, MissingConfidence, RaggedFrames
from .masks import FrameDims, Rle, SoftFrameStats, maskness

SCORE_SOURCES = ("maskness", "confidence")


@dataclass(frozen=True)
class FrameProposal:
    rle: Rle
    stats: SoftFrameStats
    embedding: np.ndarray
    confidence: float | None = None


@dataclass(frozen=True)
class TrackFrame:
    rle: Rle
    stats: SoftFrameStats
    confidence: float | None = None


@dataclass
class TrackedProposal:
    track_id: int
    frames: list[TrackFrame | None]
    embedding_mean: np.ndarray
    maskness: float
    confidence: float | None = None

    def filled_frames(self) -> list[int]:
        return [t for t, f in enumerate(self.frames) if f is not None]


@dataclass
class ProposalSet:
    video_id: str
    dims: FrameDims
    length: int
    frames: list[list[FrameProposal]]
    # ground-truth object id behind each proposal, -1 for distractors and
    # padding; populated by the synthetic generator, never serialized
    source_ids: list[list[int]] | None = field(default=None, repr=False)


@dataclass
class TrackSet:
    video_id: str
    dims: FrameDims
    length: int
    tracks: list[TrackedProposal]


def _unit_rows(embs: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(embs, axis=1, keepdims=True)
    safe = np.where(norms > 0, norms, 1.0)
    return embs / safe


def cosine_cost_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """1 - cosine similarity for every row pair; zero vectors count as cosine 0."""
    if a.shape[1] != b.shape[1]:
        raise DimMismatch(f"embedding dims differ: {a.shape[1]} vs {b.shape[1]}")
    return 1.0 - _unit_rows(a) @ _unit_rows(b).T


def embedding_similarity_costs(prev: Sequence[FrameProposal], curr: Sequence[FrameProposal]) -> np.ndarray:
    """Association cost matrix between two frames' proposals."""
    if not prev or not curr:
        raise ValueError("both proposal sets must be non-empty")
    a = np.stack([np.asarray(p.embedding, dtype=np.float64) for p in prev])
    b = np.stack([np.asarray(p.embedding, dtype=np.float64) for p in curr])
    return cosine_cost_matrix(a, b)


def track_proposals(video: Sequence[Sequence[FrameProposal]],
                    maskness_mode: str = "foreground-mean") -> list[TrackedProposal]:
    """Link a constant number of per-frame proposals into tracks.

    Requires every frame to carry the same number of proposals (pad
    upstream with empty proposals if needed). Output is sorted by
    descending maskness with track_id equal to the rank.
    """
    if not video:
        raise ValueError("video has no frames")
    r = len(video[0])
    if r == 0:
        raise ValueError("frames carry no proposals")
    for t, frame in enumerate(video):
        if len(frame) != r:
            raise RaggedFrames(f"frame {t} has {len(frame)} proposals, expected {r}")

    dims = video[0][0].rle.dims
    dim = np.asarray(video[0][0].embedding).shape[0]
    members: list[list[FrameProposal]] = [[p] for p in video[0]]
    emb_sum = np.stack([np.asarray(p.embedding, dtype=np.float64) for p in video[0]])
    if emb_sum.shape[1] != dim:
        raise DimMismatch("inconsistent embedding dims in frame 0")

    for t in range(1, len(video)):
        curr = video[t]
        means = emb_sum / len(members[0])
        costs = cosine_cost_matrix(means, np.stack(
            [np.asarray(p.embedding, dtype=np.float64) for p in curr]))
        mapping = solve_min_cost_assignment(costs).mapping
        for i, j in enumerate(mapping):
            members[i].append(curr[j])
            emb_sum[i] += np.asarray(curr[j].embedding, dtype=np.float64)

    t_total = len(video)
    tracks = []
    for i, chain in enumerate(members):
        score = maskness([p.stats for p in chain], dims, maskness_mode)
        confidences = [p.confidence for p in chain]
        conf = None
        if all(c is not None for c in confidences):
            conf = sum(confidences) / t_total
        tracks.append((i, chain, score, conf))

    order = sorted(range(r), key=lambda i: (-tracks[i][2], i))
    out = []
    for rank, i in enumerate(order):
        _, chain, score, conf = tracks[i]
        out.append(TrackedProposal(
            track_id=rank,
            frames=[TrackFrame(p.rle, p.stats, p.confidence) for p in chain],
            embedding_mean=emb_sum[i] / t_total,
            maskness=score,
            confidence=conf,
        ))
    return out


def score(track: TrackedProposal, source: str = "maskness") -> float:
    """Track score used by the matcher: maskness, or mean classifier confidence."""
    if source == "maskness":
        return track.maskness
    if source == "confidence":
        if track.confidence is None:
            raise MissingConfidence(f"track {track.track_id} has frames without confidence")
        return track.confidence
    raise ValueError(f"unknown score source {source!r}")
