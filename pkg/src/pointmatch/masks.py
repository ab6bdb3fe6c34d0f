"""Binary masks, run-length coding, soft-mask statistics, maskness, IoU.

Coordinate convention used everywhere in this package: points are (x, y),
zero-indexed, with x the column in [0, W) and y the row in [0, H); dense
masks are numpy arrays indexed [y, x]. RLE runs over the column-major
flattening (flat index = x * H + y) and always starts with a zero-run,
which may have length 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimsMismatch, MalformedRle

DEFAULT_THRESHOLD = 0.5


@dataclass(frozen=True)
class FrameDims:
    width: int
    height: int

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"frame dims must be positive, got {self.width}x{self.height}")

    @property
    def area(self) -> int:
        return self.width * self.height


@dataclass(frozen=True)
class Rle:
    """Uncompressed column-major run-length encoding of a binary mask."""

    dims: FrameDims
    counts: tuple[int, ...]

    def to_json(self) -> dict:
        return {"h": self.dims.height, "w": self.dims.width, "counts": list(self.counts)}

    @classmethod
    def from_json(cls, doc: dict) -> "Rle":
        return cls(FrameDims(int(doc["w"]), int(doc["h"])), tuple(int(c) for c in doc["counts"]))


@dataclass(frozen=True)
class SoftFrameStats:
    """Scalar summaries of one frame's soft mask.

    fg_prob_sum sums soft probabilities over binarized-foreground pixels,
    fg_area counts those pixels, vol_prob_sum sums over the whole frame.
    These three numbers suffice to compute both maskness modes exactly.
    """

    fg_prob_sum: float
    fg_area: int
    vol_prob_sum: float


def empty_stats() -> SoftFrameStats:
    return SoftFrameStats(0.0, 0, 0.0)


def rle_encode(mask: np.ndarray) -> Rle:
    """Encode a (H, W) boolean mask as column-major RLE starting with a zero-run."""
    h, w = mask.shape
    flat = np.ascontiguousarray(mask != 0).ravel(order="F").astype(np.int8)
    changes = np.flatnonzero(np.diff(flat))
    bounds = np.concatenate(([0], changes + 1, [flat.size]))
    counts = np.diff(bounds).tolist()
    if flat[0] == 1:
        counts.insert(0, 0)
    return Rle(FrameDims(w, h), tuple(int(c) for c in counts))


def rle_decode(rle: Rle) -> np.ndarray:
    """Decode an Rle back into a (H, W) boolean mask."""
    w, h = rle.dims.width, rle.dims.height
    counts = np.asarray(rle.counts, dtype=np.int64)
    if counts.size and counts.min() < 0:
        raise MalformedRle(f"negative run length in counts {rle.counts[:8]}...")
    total = int(counts.sum())
    if total != w * h:
        raise MalformedRle(f"counts sum to {total}, expected {w}x{h}={w * h}")
    values = np.zeros(counts.size, dtype=bool)
    values[1::2] = True
    flat = np.repeat(values, counts)
    return flat.reshape((h, w), order="F")


def empty_rle(dims: FrameDims) -> Rle:
    return Rle(dims, (dims.area,))


def rle_area(rle: Rle) -> int:
    """Foreground pixel count, straight from the one-runs."""
    return int(sum(rle.counts[1::2]))


def binarize(soft: np.ndarray, threshold: float = DEFAULT_THRESHOLD) -> tuple[np.ndarray, SoftFrameStats]:
    """Threshold a soft mask (values in [0, 1]) and summarize it.

    A pixel is foreground iff soft >= threshold. Returns the boolean mask
    and the SoftFrameStats computed from the same grid.
    """
    soft = np.asarray(soft, dtype=np.float64)
    mask = soft >= threshold
    return mask, SoftFrameStats(
        fg_prob_sum=float(soft[mask].sum()),
        fg_area=int(mask.sum()),
        vol_prob_sum=float(soft.sum()),
    )


def maskness(frames: Sequence[SoftFrameStats], dims: FrameDims, mode: str = "foreground-mean") -> float:
    """Confidence of a soft spatio-temporal mask.

    "foreground-mean" averages soft probabilities inside the binarized
    mask; "volume-mean" averages over the full H*W*T volume and therefore
    grows with mask size. Returns 0.0 for an everywhere-empty foreground.
    """
    if not frames:
        raise ValueError("maskness needs at least one frame")
    if mode == "foreground-mean":
        fg_area = sum(f.fg_area for f in frames)
        if fg_area == 0:
            return 0.0
        return sum(f.fg_prob_sum for f in frames) / fg_area
    if mode == "volume-mean":
        return sum(f.vol_prob_sum for f in frames) / (dims.area * len(frames))
    raise ValueError(f"unknown maskness mode {mode!r}")


def mask_iou(a: Iterable[np.ndarray], b: Iterable[np.ndarray]) -> float:
    """Spatio-temporal IoU of two aligned mask sequences.

    Intersection and union are accumulated over all frames. Two
    everywhere-empty sequences have IoU 1.0 by convention.
    """
    a = list(a)
    b = list(b)
    if len(a) != len(b):
        raise DimsMismatch(f"sequence lengths differ: {len(a)} vs {len(b)}")
    inter = 0
    union = 0
    for ma, mb in zip(a, b):
        if ma.shape != mb.shape:
            raise DimsMismatch(f"frame shapes differ: {ma.shape} vs {mb.shape}")
        inter += int(np.count_nonzero(ma & mb))
        union += int(np.count_nonzero(ma | mb))
    if union == 0:
        return 1.0
    return inter / union
