"""Domain types for ROI metadata and the structural rules they obey.

An ROI is an axis-aligned rectangle tagged with an integer track label.
Labels identify the same object across frames and are allocated in order
of first appearance; within a frame ROIs are listed in increasing label
order.  A track that vanishes and later returns gets a fresh label.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import ContractError, MalformedStreamError

#: Hard cap on ROIs per frame; bounds decoder allocations on corrupt input.
MAX_ROIS_PER_FRAME = 65535


class FrameKind(enum.Enum):
    INTRA = "intra"
    INTER = "inter"


@dataclass(frozen=True)
class Roi:
    """One region of interest: track label plus top-left corner and size.

    ``label`` must be >= 1 (0 is reserved so label-minus-one stays
    non-negative on the wire) and the box must have positive area.
    Containment in a particular frame geometry is checked by
    :func:`validate_sequence`, not here.
    """

    label: int
    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        for name in ("label", "x", "y", "w", "h"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise ValueError(f"Roi.{name} must be an int, got {v!r}")
        if self.label < 1:
            raise ValueError(f"Roi.label must be >= 1, got {self.label}")
        if self.x < 0 or self.y < 0:
            raise ValueError(f"Roi position must be non-negative, got ({self.x}, {self.y})")
        if self.w < 1 or self.h < 1:
            raise ValueError(f"Roi size must be positive, got {self.w}x{self.h}")


@dataclass(frozen=True)
class RoiDelta:
    """Signed component-wise location difference between two ROIs."""

    dx: int
    dy: int
    dw: int
    dh: int

    def negate(self) -> "RoiDelta":
        return RoiDelta(-self.dx, -self.dy, -self.dw, -self.dh)

    def is_zero(self) -> bool:
        return self.dx == 0 and self.dy == 0 and self.dw == 0 and self.dh == 0


@dataclass(frozen=True)
class FrameRois:
    """Ordered ROI list for one frame.

    The label-ordering rule (strictly increasing along ``rois``) is a
    requirement for encoding; it is reported by :func:`validate_sequence`
    and enforced by the encoders, so out-of-order frames remain
    constructible for validation purposes.
    """

    frame_index: int
    kind: FrameKind
    rois: tuple[Roi, ...] = ()

    def __post_init__(self):
        if not isinstance(self.frame_index, int) or self.frame_index < 0:
            raise ValueError(f"frame_index must be a non-negative int, got {self.frame_index!r}")
        if not isinstance(self.kind, FrameKind):
            raise ValueError(f"kind must be a FrameKind, got {self.kind!r}")
        object.__setattr__(self, "rois", tuple(self.rois))

    def labels(self) -> tuple[int, ...]:
        return tuple(r.label for r in self.rois)


@dataclass(frozen=True)
class SequenceRois:
    """A whole sequence: frame geometry plus per-frame ROI lists."""

    frame_width: int
    frame_height: int
    frames: tuple[FrameRois, ...] = ()

    def __post_init__(self):
        if not isinstance(self.frame_width, int) or self.frame_width < 1:
            raise ValueError(f"frame_width must be a positive int, got {self.frame_width!r}")
        if not isinstance(self.frame_height, int) or self.frame_height < 1:
            raise ValueError(f"frame_height must be a positive int, got {self.frame_height!r}")
        object.__setattr__(self, "frames", tuple(self.frames))


@dataclass(frozen=True)
class Violation:
    """One broken rule found by :func:`validate_sequence`.

    ``frame_index`` is None for sequence-level problems.
    """

    frame_index: int | None
    rule: str
    message: str


def labels_strictly_increasing(rois) -> bool:
    labels = [r.label for r in rois]
    return all(a < b for a, b in zip(labels, labels[1:]))


def validate_sequence(seq: SequenceRois) -> list[Violation]:
    """Check every structural rule a sequence must satisfy before encoding.

    Returns an empty list iff the sequence is valid.  Violations are data,
    not exceptions: callers decide whether to abort.
    """
    out: list[Violation] = []
    prev_frame: FrameRois | None = None
    prev_index: int | None = None
    max_label = 0

    for pos, frame in enumerate(seq.frames):
        fi = frame.frame_index
        if prev_index is not None and fi <= prev_index:
            out.append(Violation(fi, "frame index not strictly increasing",
                                 f"frame_index {fi} follows {prev_index}"))
        prev_index = fi

        if pos == 0 and frame.kind is not FrameKind.INTRA:
            out.append(Violation(fi, "first frame not intra",
                                 "the first frame of a sequence must be intra-coded"))

        if len(frame.rois) > MAX_ROIS_PER_FRAME:
            out.append(Violation(fi, "too many ROIs",
                                 f"{len(frame.rois)} ROIs exceeds the {MAX_ROIS_PER_FRAME} cap"))

        if not labels_strictly_increasing(frame.rois):
            out.append(Violation(fi, "labels not strictly increasing",
                                 f"labels {list(frame.labels())} are not strictly increasing"))
            # Continuity checks below assume ordered labels; skip them for
            # this frame but keep scanning the rest of the sequence.
            prev_frame = frame
            max_label = max([max_label, *frame.labels()], default=max_label)
            continue

        for roi in frame.rois:
            if roi.x + roi.w > seq.frame_width or roi.y + roi.h > seq.frame_height:
                out.append(Violation(fi, "ROI outside frame bounds",
                                     f"label {roi.label} box ({roi.x},{roi.y},{roi.w},{roi.h}) "
                                     f"exceeds {seq.frame_width}x{seq.frame_height}"))

        old = [r.label for r in frame.rois if r.label <= max_label]
        new = [r.label for r in frame.rois if r.label > max_label]

        if frame.kind is FrameKind.INTER:
            prev_labels = set(prev_frame.labels()) if prev_frame is not None else set()
            for label in old:
                if label not in prev_labels:
                    out.append(Violation(fi, "old label missing from previous frame",
                                         f"label {label} was allocated earlier but is absent "
                                         f"from the previous frame"))

        for offset, label in enumerate(new):
            expected = max_label + 1 + offset
            if label != expected:
                out.append(Violation(fi, "non-consecutive new label",
                                     f"new label {label} should be {expected}"))
                break

        max_label = max([max_label, *frame.labels()], default=max_label)
        prev_frame = frame

    return out


def diff(current: Roi, reference: Roi) -> RoiDelta:
    """Component-wise location difference ``current - reference``.

    Both ROIs must belong to the same track.
    """
    if current.label != reference.label:
        raise ContractError(
            f"cannot diff ROIs with different labels ({current.label} vs {reference.label})")
    return RoiDelta(current.x - reference.x, current.y - reference.y,
                    current.w - reference.w, current.h - reference.h)


def apply_delta(reference: Roi, delta: RoiDelta) -> Roi:
    """Inverse of :func:`diff`: shift ``reference`` by ``delta``.

    Raises :class:`MalformedStreamError` when the result is not a valid
    ROI, since invalid deltas only ever come from corrupt streams.
    """
    x = reference.x + delta.dx
    y = reference.y + delta.dy
    w = reference.w + delta.dw
    h = reference.h + delta.dh
    if x < 0 or y < 0:
        raise MalformedStreamError(
            f"delta moves ROI label {reference.label} to negative position ({x}, {y})")
    if w < 1 or h < 1:
        raise MalformedStreamError(
            f"delta shrinks ROI label {reference.label} to invalid size {w}x{h}")
    return Roi(reference.label, x, y, w, h)


# --- JSON interchange -------------------------------------------------------
#
# {"frame_width": W, "frame_height": H,
#  "frames": [{"frame_index": i, "kind": "intra"|"inter",
#              "rois": [{"label": l, "x": x, "y": y, "w": w, "h": h}, ...]},
#             ...]}

class JsonFormatError(ValueError):
    """Raised when a JSON object does not match the interchange schema."""


def _expect_int(obj, key, context) -> int:
    v = obj.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise JsonFormatError(f"{context}: field {key!r} must be an integer, got {v!r}")
    return v


def sequence_from_json_obj(obj) -> SequenceRois:
    """Build a :class:`SequenceRois` from a parsed JSON object.

    Raises :class:`JsonFormatError` on schema problems and ``ValueError``
    on out-of-range field values (via the type constructors).
    """
    if not isinstance(obj, dict):
        raise JsonFormatError(f"top level must be an object, got {type(obj).__name__}")
    width = _expect_int(obj, "frame_width", "top level")
    height = _expect_int(obj, "frame_height", "top level")
    raw_frames = obj.get("frames")
    if not isinstance(raw_frames, list):
        raise JsonFormatError("top level: field 'frames' must be an array")

    frames = []
    for n, rf in enumerate(raw_frames):
        ctx = f"frames[{n}]"
        if not isinstance(rf, dict):
            raise JsonFormatError(f"{ctx}: must be an object")
        fi = _expect_int(rf, "frame_index", ctx)
        kind_raw = rf.get("kind")
        try:
            kind = FrameKind(kind_raw)
        except ValueError:
            raise JsonFormatError(f"{ctx}: kind must be 'intra' or 'inter', got {kind_raw!r}") from None
        raw_rois = rf.get("rois")
        if not isinstance(raw_rois, list):
            raise JsonFormatError(f"{ctx}: field 'rois' must be an array")
        rois = []
        for m, rr in enumerate(raw_rois):
            rctx = f"{ctx}.rois[{m}]"
            if not isinstance(rr, dict):
                raise JsonFormatError(f"{rctx}: must be an object")
            rois.append(Roi(label=_expect_int(rr, "label", rctx),
                            x=_expect_int(rr, "x", rctx),
                            y=_expect_int(rr, "y", rctx),
                            w=_expect_int(rr, "w", rctx),
                            h=_expect_int(rr, "h", rctx)))
        frames.append(FrameRois(frame_index=fi, kind=kind, rois=tuple(rois)))

    return SequenceRois(frame_width=width, frame_height=height, frames=tuple(frames))


def sequence_to_json_obj(seq: SequenceRois) -> dict:
    """Serialize to the interchange schema (plain dict, ready for json.dump)."""
    return {
        "frame_width": seq.frame_width,
        "frame_height": seq.frame_height,
        "frames": [
            {
                "frame_index": f.frame_index,
                "kind": f.kind.value,
                "rois": [
                    {"label": r.label, "x": r.x, "y": r.y, "w": r.w, "h": r.h}
                    for r in f.rois
                ],
            }
            for f in seq.frames
        ],
    }
