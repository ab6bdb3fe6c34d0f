"""JSON document formats, schema validation, deterministic serialization.

All pipeline artifacts are UTF-8 JSON with sorted keys, no extraneous
whitespace, and floats rendered with 17 significant digits so every
value round-trips exactly. Loaders validate structure and invariants
(RLE sums, point bounds, presence consistency) and report violations
with the JSON path of the offending node.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import SchemaError
from .evaluation import EvalReport, ObjectEval
from .masks import FrameDims, Rle, SoftFrameStats, rle_area, rle_decode, rle_encode
from .matching import (FrameMatch, MATCHING_MODES, MatchResult, MatchWeights, ObjectAssignment,
                       PseudoLabelSet, PseudoObject)
from .scenes import ProposalNoiseConfig, SceneConfig, SceneObject
from .tracking import (FrameProposal, ProposalSet, SCORE_SOURCES, TrackFrame, TrackSet,
                       TrackedProposal)
from .video import GtMaskTrack, GtObject, LabeledPoint, PointAnnotationSet, PointFrame, VideoGt

MASKNESS_MODES = ("foreground-mean", "volume-mean")


# ---------------------------------------------------------------------------
# canonical writer

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    return format(x, ".17g")


def _write(node, emit) -> None:
    if node is None:
        emit("null")
    elif isinstance(node, bool) or isinstance(node, np.bool_):
        emit("true" if node else "false")
    elif isinstance(node, (int, np.integer)):
        emit(str(int(node)))
    elif isinstance(node, (float, np.floating)):
        emit(_fmt_float(float(node)))
    elif isinstance(node, str):
        emit(json.dumps(node))
    elif isinstance(node, (list, tuple)):
        emit("[")
        for i, item in enumerate(node):
            if i:
                emit(",")
            _write(item, emit)
        emit("]")
    elif isinstance(node, dict):
        emit("{")
        for i, key in enumerate(sorted(node)):
            if i:
                emit(",")
            emit(json.dumps(key))
            emit(":")
            _write(node[key], emit)
        emit("}")
    else:
        raise TypeError(f"cannot serialize {type(node).__name__}")


def dumps_canonical(doc) -> str:
    parts: list[str] = []
    _write(doc, parts.append)
    return "".join(parts)


def _save(doc, path) -> None:
    Path(path).write_text(dumps_canonical(doc) + "\n", encoding="utf-8")


def _load_json(path, label: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SchemaError(label, "$", f"cannot read file: {e}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(label, "$", f"invalid JSON: {e}") from e


# ---------------------------------------------------------------------------
# validation helpers

class _Check:
    def __init__(self, label: str):
        self.label = label

    def fail(self, path: str, reason: str):
        raise SchemaError(self.label, path, reason)

    def obj(self, node, path, required, optional=()) -> dict:
        if not isinstance(node, dict):
            self.fail(path, f"expected object, got {type(node).__name__}")
        missing = set(required) - set(node)
        if missing:
            self.fail(path, f"missing keys {sorted(missing)}")
        extra = set(node) - set(required) - set(optional)
        if extra:
            self.fail(path, f"unexpected keys {sorted(extra)}")
        return node

    def list_(self, node, path) -> list:
        if not isinstance(node, list):
            self.fail(path, f"expected array, got {type(node).__name__}")
        return node

    def str_(self, node, path) -> str:
        if not isinstance(node, str):
            self.fail(path, f"expected string, got {type(node).__name__}")
        return node

    def bool_(self, node, path) -> bool:
        if not isinstance(node, bool):
            self.fail(path, f"expected boolean, got {type(node).__name__}")
        return node

    def int_(self, node, path, lo=None, hi=None) -> int:
        if isinstance(node, bool) or not isinstance(node, int):
            self.fail(path, f"expected integer, got {type(node).__name__}")
        if lo is not None and node < lo:
            self.fail(path, f"{node} below minimum {lo}")
        if hi is not None and node > hi:
            self.fail(path, f"{node} above maximum {hi}")
        return node

    def num(self, node, path, lo=None, hi=None) -> float:
        if isinstance(node, bool) or not isinstance(node, (int, float)):
            self.fail(path, f"expected number, got {type(node).__name__}")
        x = float(node)
        if not math.isfinite(x):
            self.fail(path, f"non-finite number {node!r}")
        if lo is not None and x < lo:
            self.fail(path, f"{x} below minimum {lo}")
        if hi is not None and x > hi:
            self.fail(path, f"{x} above maximum {hi}")
        return x

    def enum(self, node, path, allowed) -> str:
        s = self.str_(node, path)
        if s not in allowed:
            self.fail(path, f"{s!r} not one of {list(allowed)}")
        return s


def _parse_video_header(c: _Check, doc) -> tuple[str, FrameDims, int]:
    v = c.obj(doc.get("video"), "video", ["id", "w", "h", "t"])
    vid = c.str_(v["id"], "video.id")
    w = c.int_(v["w"], "video.w", lo=1)
    h = c.int_(v["h"], "video.h", lo=1)
    t = c.int_(v["t"], "video.t", lo=1)
    return vid, FrameDims(w, h), t


def _video_header(video_id: str, dims: FrameDims, length: int) -> dict:
    return {"id": video_id, "w": dims.width, "h": dims.height, "t": length}


def _parse_rle(c: _Check, node, path: str, dims: FrameDims) -> Rle:
    r = c.obj(node, path, ["h", "w", "counts"])
    h = c.int_(r["h"], f"{path}.h", lo=1)
    w = c.int_(r["w"], f"{path}.w", lo=1)
    if (w, h) != (dims.width, dims.height):
        c.fail(path, f"rle dims {w}x{h} do not match video {dims.width}x{dims.height}")
    counts = c.list_(r["counts"], f"{path}.counts")
    total = 0
    for i, cnt in enumerate(counts):
        lo = 0 if i == 0 else 1
        total += c.int_(cnt, f"{path}.counts[{i}]", lo=lo)
    if total != dims.area:
        c.fail(f"{path}.counts", f"rle length mismatch: counts sum to {total}, expected {dims.area}")
    return Rle(dims, tuple(counts))


def _check_frame_index(c: _Check, frames: list, path: str, length: int) -> None:
    ts = []
    for i, f in enumerate(frames):
        if isinstance(f, dict) and "t" in f:
            ts.append(c.int_(f["t"], f"{path}[{i}].t", lo=0, hi=length - 1))
    if ts != sorted(set(ts)):
        c.fail(path, "frame indices must be strictly ascending and unique")


def _check_full_frame_index(c: _Check, frames: list, path: str, length: int) -> None:
    _check_frame_index(c, frames, path, length)
    if len(frames) != length:
        c.fail(path, f"expected one record per frame ({length}), got {len(frames)}")


# ---------------------------------------------------------------------------
# gt.json

def gt_to_doc(gt: VideoGt) -> dict:
    objects = []
    for obj in sorted(gt.objects, key=lambda o: o.object_id):
        frames = []
        for t in range(gt.length):
            rle = rle_encode(obj.masks[t]).to_json() if obj.present[t] else None
            frames.append({"t": t, "present": obj.present[t], "rle": rle})
        objects.append({"id": obj.object_id, "category": obj.category, "frames": frames})
    return {"video": _video_header(gt.video_id, gt.dims, gt.length), "objects": objects}


def parse_gt(doc, label: str = "gt.json") -> VideoGt:
    c = _Check(label)
    c.obj(doc, "$", ["video", "objects"])
    vid, dims, length = _parse_video_header(c, doc)
    objects = []
    seen = set()
    for i, onode in enumerate(c.list_(doc["objects"], "objects")):
        p = f"objects[{i}]"
        o = c.obj(onode, p, ["id", "category", "frames"])
        oid = c.int_(o["id"], f"{p}.id")
        if oid in seen:
            c.fail(f"{p}.id", f"duplicate object id {oid}")
        seen.add(oid)
        cat = c.int_(o["category"], f"{p}.category")
        frames = c.list_(o["frames"], f"{p}.frames")
        _check_full_frame_index(c, frames, f"{p}.frames", length)
        present = []
        masks = []
        for k, fnode in enumerate(frames):
            fp = f"{p}.frames[{k}]"
            f = c.obj(fnode, fp, ["t", "present", "rle"])
            pres = c.bool_(f["present"], f"{fp}.present")
            if pres:
                if f["rle"] is None:
                    c.fail(f"{fp}.rle", "present frame must carry an rle")
                masks.append(rle_decode(_parse_rle(c, f["rle"], f"{fp}.rle", dims)))
            else:
                if f["rle"] is not None:
                    c.fail(f"{fp}.rle", "absent frame must not carry an rle")
                masks.append(None)
            present.append(pres)
        objects.append(GtMaskTrack(oid, cat, present, masks))
    return VideoGt(vid, dims, length, objects)


def save_gt(gt: VideoGt, path) -> None:
    _save(gt_to_doc(gt), path)


def load_gt(path) -> VideoGt:
    return parse_gt(_load_json(path, Path(path).name), Path(path).name)


# ---------------------------------------------------------------------------
# points.json

def points_to_doc(ann: PointAnnotationSet) -> dict:
    objects = []
    for obj in sorted(ann.objects, key=lambda o: o.object_id):
        frames = []
        for t, f in enumerate(obj.frames):
            pts = [{"x": p.x, "y": p.y, "label": p.label} for p in f.points]
            frames.append({"t": t, "present": f.present, "points": pts})
        objects.append({"id": obj.object_id, "category": obj.category, "frames": frames})
    return {"video": _video_header(ann.video_id, ann.dims, ann.length), "objects": objects}


def parse_points(doc, label: str = "points.json") -> PointAnnotationSet:
    c = _Check(label)
    c.obj(doc, "$", ["video", "objects"])
    vid, dims, length = _parse_video_header(c, doc)
    objects = []
    seen = set()
    for i, onode in enumerate(c.list_(doc["objects"], "objects")):
        p = f"objects[{i}]"
        o = c.obj(onode, p, ["id", "category", "frames"])
        oid = c.int_(o["id"], f"{p}.id")
        if oid in seen:
            c.fail(f"{p}.id", f"duplicate object id {oid}")
        seen.add(oid)
        cat = c.int_(o["category"], f"{p}.category")
        frames = c.list_(o["frames"], f"{p}.frames")
        _check_full_frame_index(c, frames, f"{p}.frames", length)
        pframes = []
        for k, fnode in enumerate(frames):
            fp = f"{p}.frames[{k}]"
            f = c.obj(fnode, fp, ["t", "present", "points"])
            pres = c.bool_(f["present"], f"{fp}.present")
            pts = c.list_(f["points"], f"{fp}.points")
            if not pres and pts:
                c.fail(f"{fp}.points", "absent frame must not carry points")
            parsed = []
            for m, pnode in enumerate(pts):
                pp = f"{fp}.points[{m}]"
                pt = c.obj(pnode, pp, ["x", "y", "label"])
                x = c.int_(pt["x"], f"{pp}.x", lo=0, hi=dims.width - 1)
                y = c.int_(pt["y"], f"{pp}.y", lo=0, hi=dims.height - 1)
                lab = c.enum(pt["label"], f"{pp}.label", ("pos", "neg"))
                parsed.append(LabeledPoint(x, y, lab))
            pframes.append(PointFrame(pres, tuple(parsed)))
        objects.append(GtObject(oid, cat, pframes))
    return PointAnnotationSet(vid, dims, length, objects)


def save_points(ann: PointAnnotationSet, path) -> None:
    _save(points_to_doc(ann), path)


def load_points(path) -> PointAnnotationSet:
    return parse_points(_load_json(path, Path(path).name), Path(path).name)


# ---------------------------------------------------------------------------
# proposals.json

def proposals_to_doc(props: ProposalSet) -> dict:
    frames = []
    for t, plist in enumerate(props.frames):
        entries = []
        for p in plist:
            entries.append({
                "rle": p.rle.to_json(),
                "fg_prob_sum": p.stats.fg_prob_sum,
                "fg_area": p.stats.fg_area,
                "vol_prob_sum": p.stats.vol_prob_sum,
                "embedding": [float(v) for v in np.asarray(p.embedding, dtype=np.float64)],
                "confidence": p.confidence,
            })
        frames.append({"t": t, "proposals": entries})
    return {"video": _video_header(props.video_id, props.dims, props.length), "frames": frames}


def _parse_stats(c: _Check, node: dict, path: str, dims: FrameDims, rle: Rle) -> SoftFrameStats:
    fg_area = c.int_(node["fg_area"], f"{path}.fg_area", lo=0)
    fg_prob = c.num(node["fg_prob_sum"], f"{path}.fg_prob_sum", lo=0.0)
    vol = c.num(node["vol_prob_sum"], f"{path}.vol_prob_sum", lo=0.0, hi=float(dims.area))
    if fg_prob > fg_area:
        c.fail(f"{path}.fg_prob_sum", f"{fg_prob} exceeds fg_area {fg_area}")
    if vol < fg_prob:
        c.fail(f"{path}.vol_prob_sum", f"{vol} below fg_prob_sum {fg_prob}")
    if fg_area != rle_area(rle):
        c.fail(f"{path}.fg_area", f"{fg_area} does not match rle area {rle_area(rle)}")
    return SoftFrameStats(fg_prob, fg_area, vol)


def parse_proposals(doc, label: str = "proposals.json") -> ProposalSet:
    c = _Check(label)
    c.obj(doc, "$", ["video", "frames"])
    vid, dims, length = _parse_video_header(c, doc)
    frames_node = c.list_(doc["frames"], "frames")
    _check_full_frame_index(c, frames_node, "frames", length)
    emb_dim = None
    frames = []
    for k, fnode in enumerate(frames_node):
        fp = f"frames[{k}]"
        f = c.obj(fnode, fp, ["t", "proposals"])
        plist = []
        for m, pnode in enumerate(c.list_(f["proposals"], f"{fp}.proposals")):
            pp = f"{fp}.proposals[{m}]"
            p = c.obj(pnode, pp, ["rle", "fg_prob_sum", "fg_area", "vol_prob_sum",
                                  "embedding", "confidence"])
            rle = _parse_rle(c, p["rle"], f"{pp}.rle", dims)
            stats = _parse_stats(c, p, pp, dims, rle)
            emb = [c.num(v, f"{pp}.embedding[{n}]") for n, v in
                   enumerate(c.list_(p["embedding"], f"{pp}.embedding"))]
            if not emb:
                c.fail(f"{pp}.embedding", "embedding must be non-empty")
            if emb_dim is None:
                emb_dim = len(emb)
            elif len(emb) != emb_dim:
                c.fail(f"{pp}.embedding", f"dim {len(emb)} differs from {emb_dim} used earlier")
            conf = None if p["confidence"] is None else c.num(p["confidence"], f"{pp}.confidence",
                                                              lo=0.0, hi=1.0)
            plist.append(FrameProposal(rle, stats, np.asarray(emb, dtype=np.float64), conf))
        frames.append(plist)
    return ProposalSet(vid, dims, length, frames)


def save_proposals(props: ProposalSet, path) -> None:
    _save(proposals_to_doc(props), path)


def load_proposals(path) -> ProposalSet:
    return parse_proposals(_load_json(path, Path(path).name), Path(path).name)


# ---------------------------------------------------------------------------
# tracks.json

def tracks_to_doc(ts: TrackSet) -> dict:
    tracks = []
    for tr in sorted(ts.tracks, key=lambda tr: tr.track_id):
        frames = []
        for t, f in enumerate(tr.frames):
            if f is None:
                continue
            frames.append({
                "t": t,
                "rle": f.rle.to_json(),
                "fg_prob_sum": f.stats.fg_prob_sum,
                "fg_area": f.stats.fg_area,
                "vol_prob_sum": f.stats.vol_prob_sum,
            })
        tracks.append({
            "track_id": tr.track_id,
            "maskness": tr.maskness,
            "confidence": tr.confidence,
            "frames": frames,
        })
    return {"video": _video_header(ts.video_id, ts.dims, ts.length), "tracks": tracks}


def parse_tracks(doc, label: str = "tracks.json") -> TrackSet:
    c = _Check(label)
    c.obj(doc, "$", ["video", "tracks"])
    vid, dims, length = _parse_video_header(c, doc)
    tracks = []
    seen = set()
    for i, tnode in enumerate(c.list_(doc["tracks"], "tracks")):
        tp = f"tracks[{i}]"
        tdoc = c.obj(tnode, tp, ["track_id", "maskness", "confidence", "frames"])
        tid = c.int_(tdoc["track_id"], f"{tp}.track_id", lo=0)
        if tid in seen:
            c.fail(f"{tp}.track_id", f"duplicate track id {tid}")
        seen.add(tid)
        mn = c.num(tdoc["maskness"], f"{tp}.maskness", lo=0.0, hi=1.0)
        conf = None if tdoc["confidence"] is None else c.num(tdoc["confidence"],
                                                             f"{tp}.confidence", lo=0.0, hi=1.0)
        fnodes = c.list_(tdoc["frames"], f"{tp}.frames")
        if not fnodes:
            c.fail(f"{tp}.frames", "track must fill at least one frame")
        _check_frame_index(c, fnodes, f"{tp}.frames", length)
        frames: list[TrackFrame | None] = [None] * length
        for k, fnode in enumerate(fnodes):
            fp = f"{tp}.frames[{k}]"
            f = c.obj(fnode, fp, ["t", "rle", "fg_prob_sum", "fg_area", "vol_prob_sum"])
            t = f["t"]
            rle = _parse_rle(c, f["rle"], f"{fp}.rle", dims)
            frames[t] = TrackFrame(rle, _parse_stats(c, f, fp, dims, rle))
        tracks.append(TrackedProposal(tid, frames, np.zeros(0), mn, conf))
    return TrackSet(vid, dims, length, tracks)


def save_tracks(ts: TrackSet, path) -> None:
    _save(tracks_to_doc(ts), path)


def load_tracks(path) -> TrackSet:
    return parse_tracks(_load_json(path, Path(path).name), Path(path).name)


# ---------------------------------------------------------------------------
# pseudo.json

def pseudo_to_doc(ps: PseudoLabelSet) -> dict:
    objects = []
    for obj in sorted(ps.objects, key=lambda o: o.object_id):
        frames = []
        for t in range(ps.length):
            rle = obj.masks[t].to_json() if obj.masks[t] is not None else None
            frames.append({"t": t, "present": obj.present[t], "rle": rle})
        objects.append({"id": obj.object_id, "category": obj.category, "frames": frames})
    return {"video": _video_header(ps.video_id, ps.dims, ps.length), "objects": objects}


def parse_pseudo(doc, label: str = "pseudo.json") -> PseudoLabelSet:
    c = _Check(label)
    c.obj(doc, "$", ["video", "objects"])
    vid, dims, length = _parse_video_header(c, doc)
    objects = []
    seen = set()
    for i, onode in enumerate(c.list_(doc["objects"], "objects")):
        p = f"objects[{i}]"
        o = c.obj(onode, p, ["id", "category", "frames"])
        oid = c.int_(o["id"], f"{p}.id")
        if oid in seen:
            c.fail(f"{p}.id", f"duplicate object id {oid}")
        seen.add(oid)
        cat = c.int_(o["category"], f"{p}.category")
        frames = c.list_(o["frames"], f"{p}.frames")
        _check_full_frame_index(c, frames, f"{p}.frames", length)
        present = []
        masks = []
        for k, fnode in enumerate(frames):
            fp = f"{p}.frames[{k}]"
            f = c.obj(fnode, fp, ["t", "present", "rle"])
            pres = c.bool_(f["present"], f"{fp}.present")
            if f["rle"] is None:
                masks.append(None)
            else:
                # masks may exist only on present frames; present frames
                # without annotation (per-frame mode) legitimately lack one
                if not pres:
                    c.fail(f"{fp}.rle", "absent frame must not carry a mask")
                masks.append(_parse_rle(c, f["rle"], f"{fp}.rle", dims))
            present.append(pres)
        objects.append(PseudoObject(oid, cat, present, masks))
    return PseudoLabelSet(vid, dims, length, objects)


def save_pseudo(ps: PseudoLabelSet, path) -> None:
    _save(pseudo_to_doc(ps), path)


def load_pseudo(path) -> PseudoLabelSet:
    return parse_pseudo(_load_json(path, Path(path).name), Path(path).name)


# ---------------------------------------------------------------------------
# match.json

@dataclass
class MatchDocument:
    video_id: str
    dims: FrameDims
    length: int
    matching: str
    score_source: str
    maskness_mode: str
    weights: MatchWeights
    result: MatchResult | None = None
    frame_results: list[FrameMatch] | None = None


def _assignment_to_doc(a: ObjectAssignment) -> dict:
    return {"object_id": a.object_id, "track_id": a.track_id, "cost_ann": a.cost_ann,
            "cost_cineg": a.cost_cineg, "cost_maskness": a.cost_maskness, "total": a.total}


def match_to_doc(md: MatchDocument) -> dict:
    doc = {
        "video": _video_header(md.video_id, md.dims, md.length),
        "matching": md.matching,
        "score_source": md.score_source,
        "maskness_mode": md.maskness_mode,
        "weights": {"lambda_ann": md.weights.lambda_ann,
                    "lambda_cineg": md.weights.lambda_cineg,
                    "lambda_maskness": md.weights.lambda_maskness},
    }
    if md.matching == "spatio-temporal":
        doc["assignments"] = [_assignment_to_doc(a) for a in md.result.assignments]
    else:
        doc["frames"] = [{"t": fm.t,
                          "assignments": [_assignment_to_doc(a) for a in fm.result.assignments]}
                         for fm in md.frame_results]
    return doc


def _parse_assignments(c: _Check, node, path: str, w: MatchWeights) -> list[ObjectAssignment]:
    out = []
    seen_obj = set()
    seen_track = set()
    for i, anode in enumerate(c.list_(node, path)):
        ap = f"{path}[{i}]"
        a = c.obj(anode, ap, ["object_id", "track_id", "cost_ann", "cost_cineg",
                              "cost_maskness", "total"])
        oid = c.int_(a["object_id"], f"{ap}.object_id")
        tid = c.int_(a["track_id"], f"{ap}.track_id", lo=0)
        if oid in seen_obj:
            c.fail(f"{ap}.object_id", f"duplicate object id {oid}")
        if tid in seen_track:
            c.fail(f"{ap}.track_id", f"track {tid} assigned to two objects")
        seen_obj.add(oid)
        seen_track.add(tid)
        ann = c.num(a["cost_ann"], f"{ap}.cost_ann", lo=0.0)
        cineg = c.num(a["cost_cineg"], f"{ap}.cost_cineg", lo=0.0)
        mcost = c.num(a["cost_maskness"], f"{ap}.cost_maskness")
        total = c.num(a["total"], f"{ap}.total")
        expect = w.lambda_ann * ann + w.lambda_cineg * cineg + w.lambda_maskness * mcost
        if not math.isclose(total, expect, rel_tol=1e-12, abs_tol=1e-12):
            c.fail(f"{ap}.total", f"{total} is not the weighted cost sum {expect}")
        out.append(ObjectAssignment(oid, tid, ann, cineg, mcost, total))
    return out


def parse_match(doc, label: str = "match.json") -> MatchDocument:
    c = _Check(label)
    if not isinstance(doc, dict) or "matching" not in doc:
        c.fail("$", "expected object with a 'matching' key")
    matching = c.enum(doc["matching"], "matching", MATCHING_MODES)
    payload = "assignments" if matching == "spatio-temporal" else "frames"
    c.obj(doc, "$", ["video", "matching", "score_source", "maskness_mode", "weights", payload])
    vid, dims, length = _parse_video_header(c, doc)
    source = c.enum(doc["score_source"], "score_source", SCORE_SOURCES)
    mode = c.enum(doc["maskness_mode"], "maskness_mode", MASKNESS_MODES)
    wnode = c.obj(doc["weights"], "weights", ["lambda_ann", "lambda_cineg", "lambda_maskness"])
    weights = MatchWeights(c.num(wnode["lambda_ann"], "weights.lambda_ann", lo=0.0),
                           c.num(wnode["lambda_cineg"], "weights.lambda_cineg", lo=0.0),
                           c.num(wnode["lambda_maskness"], "weights.lambda_maskness", lo=0.0))
    md = MatchDocument(vid, dims, length, matching, source, mode, weights)
    if matching == "spatio-temporal":
        md.result = MatchResult(_parse_assignments(c, doc["assignments"], "assignments", weights))
    else:
        fms = []
        fnodes = c.list_(doc["frames"], "frames")
        _check_frame_index(c, fnodes, "frames", length)
        for k, fnode in enumerate(fnodes):
            fp = f"frames[{k}]"
            f = c.obj(fnode, fp, ["t", "assignments"])
            fms.append(FrameMatch(f["t"], MatchResult(
                _parse_assignments(c, f["assignments"], f"{fp}.assignments", weights))))
        md.frame_results = fms
    return md


def save_match(md: MatchDocument, path) -> None:
    _save(match_to_doc(md), path)


def load_match(path) -> MatchDocument:
    return parse_match(_load_json(path, Path(path).name), Path(path).name)


# ---------------------------------------------------------------------------
# report.json

def report_to_doc(report: EvalReport) -> dict:
    return {
        "per_object": [{"object_id": o.object_id, "iou": o.iou, "selected_best": o.selected_best}
                       for o in report.per_object],
        "mean_iou": report.mean_iou,
        "selection_accuracy": report.selection_accuracy,
        "config_echo": report.config_echo,
    }


def parse_report(doc, label: str = "report.json") -> EvalReport:
    c = _Check(label)
    c.obj(doc, "$", ["per_object", "mean_iou", "selection_accuracy", "config_echo"])
    per_object = []
    for i, onode in enumerate(c.list_(doc["per_object"], "per_object")):
        p = f"per_object[{i}]"
        o = c.obj(onode, p, ["object_id", "iou", "selected_best"])
        per_object.append(ObjectEval(c.int_(o["object_id"], f"{p}.object_id"),
                                     c.num(o["iou"], f"{p}.iou", lo=0.0, hi=1.0),
                                     c.bool_(o["selected_best"], f"{p}.selected_best")))
    mean = c.num(doc["mean_iou"], "mean_iou", lo=0.0, hi=1.0)
    acc = c.num(doc["selection_accuracy"], "selection_accuracy", lo=0.0, hi=1.0)
    if per_object:
        expect_mean = sum(o.iou for o in per_object) / len(per_object)
        if not math.isclose(mean, expect_mean, rel_tol=1e-12, abs_tol=1e-12):
            c.fail("mean_iou", f"{mean} is not the mean of per-object ious {expect_mean}")
        expect_acc = sum(o.selected_best for o in per_object) / len(per_object)
        if not math.isclose(acc, expect_acc, rel_tol=1e-12, abs_tol=1e-12):
            c.fail("selection_accuracy", f"{acc} is not the fraction selected best {expect_acc}")
    if not isinstance(doc["config_echo"], dict):
        c.fail("config_echo", "expected object")
    return EvalReport(per_object, mean, acc, doc["config_echo"])


def save_report(report: EvalReport, path) -> None:
    _save(report_to_doc(report), path)


def load_report(path) -> EvalReport:
    return parse_report(_load_json(path, Path(path).name), Path(path).name)


# ---------------------------------------------------------------------------
# scene config (CLI input, not a pipeline artifact)

def parse_scene_config(doc, label: str = "scene-config") -> tuple[SceneConfig, ProposalNoiseConfig]:
    c = _Check(label)
    c.obj(doc, "$", ["scene"], optional=["noise"])
    s = c.obj(doc["scene"], "scene", ["w", "h", "t", "objects"],
              optional=["seed", "video_id"])
    dims = FrameDims(c.int_(s["w"], "scene.w", lo=1), c.int_(s["h"], "scene.h", lo=1))
    length = c.int_(s["t"], "scene.t", lo=1)
    objects = []
    for i, onode in enumerate(c.list_(s["objects"], "scene.objects")):
        p = f"scene.objects[{i}]"
        o = c.obj(onode, p, ["shape", "size", "start", "velocity"],
                  optional=["birth_t", "death_t", "category"])
        shape = c.enum(o["shape"], f"{p}.shape", ("ellipse", "rectangle"))
        size = c.int_(o["size"], f"{p}.size", lo=1)
        start = c.list_(o["start"], f"{p}.start")
        vel = c.list_(o["velocity"], f"{p}.velocity")
        if len(start) != 2 or len(vel) != 2:
            c.fail(p, "start and velocity must be [x, y] pairs")
        objects.append(SceneObject(
            shape=shape, size=size,
            start=(c.num(start[0], f"{p}.start[0]"), c.num(start[1], f"{p}.start[1]")),
            velocity=(c.num(vel[0], f"{p}.velocity[0]"), c.num(vel[1], f"{p}.velocity[1]")),
            birth_t=c.int_(o["birth_t"], f"{p}.birth_t", lo=0) if "birth_t" in o else 0,
            death_t=c.int_(o["death_t"], f"{p}.death_t", lo=0) if "death_t" in o else None,
            category=c.int_(o["category"], f"{p}.category") if "category" in o else 1,
        ))
    try:
        scene = SceneConfig(dims, length, tuple(objects),
                            seed=c.int_(s["seed"], "scene.seed") if "seed" in s else 0,
                            video_id=c.str_(s["video_id"], "scene.video_id") if "video_id" in s else "scene")
    except ValueError as e:
        c.fail("scene", str(e))

    defaults = ProposalNoiseConfig()
    nd = doc.get("noise", {})
    n = c.obj(nd, "noise", [], optional=["morph_radius", "boundary_flip_prob", "n_distractors",
                                         "embedding_dim", "embedding_noise", "soft_fg_level",
                                         "soft_bg_level", "seed", "shuffle_frames"])
    try:
        noise = ProposalNoiseConfig(
            morph_radius=c.int_(n["morph_radius"], "noise.morph_radius", lo=0)
            if "morph_radius" in n else defaults.morph_radius,
            boundary_flip_prob=c.num(n["boundary_flip_prob"], "noise.boundary_flip_prob",
                                     lo=0.0, hi=1.0)
            if "boundary_flip_prob" in n else defaults.boundary_flip_prob,
            n_distractors=c.int_(n["n_distractors"], "noise.n_distractors", lo=0)
            if "n_distractors" in n else defaults.n_distractors,
            embedding_dim=c.int_(n["embedding_dim"], "noise.embedding_dim", lo=1)
            if "embedding_dim" in n else defaults.embedding_dim,
            embedding_noise=c.num(n["embedding_noise"], "noise.embedding_noise", lo=0.0)
            if "embedding_noise" in n else defaults.embedding_noise,
            soft_fg_level=c.num(n["soft_fg_level"], "noise.soft_fg_level")
            if "soft_fg_level" in n else defaults.soft_fg_level,
            soft_bg_level=c.num(n["soft_bg_level"], "noise.soft_bg_level")
            if "soft_bg_level" in n else defaults.soft_bg_level,
            seed=c.int_(n["seed"], "noise.seed") if "seed" in n else defaults.seed,
            shuffle_frames=c.bool_(n["shuffle_frames"], "noise.shuffle_frames")
            if "shuffle_frames" in n else defaults.shuffle_frames,
        )
    except ValueError as e:
        c.fail("noise", str(e))
    return scene, noise


def load_scene_config(path) -> tuple[SceneConfig, ProposalNoiseConfig]:
    return parse_scene_config(_load_json(path, Path(path).name), Path(path).name)
