"""Canonical event and frame-probability data model.

Events carry a class index, an interval in seconds and a confidence score.
The same detections can be viewed frame-wise as a per-class probability
matrix on a fixed hop; this module owns the conversions between the two
views (rasterize / binarize), interval geometry, and same-class
de-overlapping.

All types are immutable values; all operations are pure functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .kernels import threshold_runs

# Normalized boxes may violate the [0, 1] clip bounds by up to this much
# (float round trips); anything worse is rejected.
BOX_EDGE_TOL = 1e-9


@dataclass(frozen=True)
class Event:
    """One detected or annotated sound event."""

    class_id: int
    onset_s: float
    offset_s: float
    score: float = 1.0

    def __post_init__(self):
        if self.class_id < 0:
            raise ValueError(f"class_id must be >= 0, got {self.class_id}")
        if not (0.0 <= self.onset_s < self.offset_s):
            raise ValueError(
                f"need 0 <= onset < offset, got ({self.onset_s}, {self.offset_s})"
            )
        if not (0.0 <= self.score <= 1.0):
            raise ValueError(f"score must be in [0, 1], got {self.score}")

    @property
    def duration_s(self) -> float:
        return self.offset_s - self.onset_s

    @property
    def interval(self) -> tuple[float, float]:
        return (self.onset_s, self.offset_s)


@dataclass(frozen=True)
class NormalizedBox:
    """Event boundary as (center, length), both as fractions of the clip."""

    center: float
    length: float

    def __post_init__(self):
        if self.length <= 0.0:
            raise ValueError(f"length must be positive, got {self.length}")
        lo = self.center - self.length / 2.0
        hi = self.center + self.length / 2.0
        if lo < -BOX_EDGE_TOL or hi > 1.0 + BOX_EDGE_TOL:
            raise ValueError(f"box ({self.center}, {self.length}) lies outside the clip")
        # Clamp sub-tolerance overshoot back onto [0, 1].
        if lo < 0.0 or hi > 1.0:
            lo, hi = max(lo, 0.0), min(hi, 1.0)
            object.__setattr__(self, "center", (lo + hi) / 2.0)
            object.__setattr__(self, "length", hi - lo)

    @property
    def interval(self) -> tuple[float, float]:
        """Box as a (low, high) interval in clip fractions."""
        return (self.center - self.length / 2.0, self.center + self.length / 2.0)


@dataclass(frozen=True)
class EventSet:
    """Events of one clip. ``clip_duration_s`` may be attached later by I/O."""

    clip_id: str
    clip_duration_s: float | None
    events: tuple[Event, ...]

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))
        if self.clip_duration_s is not None:
            if self.clip_duration_s <= 0:
                raise ValueError(f"clip duration must be positive, got {self.clip_duration_s}")
            for ev in self.events:
                if ev.offset_s > self.clip_duration_s:
                    raise ValueError(
                        f"event offset {ev.offset_s} exceeds clip duration "
                        f"{self.clip_duration_s} in clip {self.clip_id!r}"
                    )

    def __len__(self) -> int:
        return len(self.events)

    def with_duration(self, duration_s: float) -> "EventSet":
        return EventSet(self.clip_id, duration_s, self.events)


@dataclass(frozen=True)
class FrameGrid:
    """Per-clip matrix of per-class frame probabilities on a fixed hop.

    ``probs`` has shape [num_classes, num_frames]; entries lie in [0, 1].
    The array is copied and frozen on construction.
    """

    clip_id: str
    hop_s: float
    probs: np.ndarray

    def __post_init__(self):
        if self.hop_s <= 0:
            raise ValueError(f"hop must be positive, got {self.hop_s}")
        p = np.array(self.probs, dtype=np.float64)
        if p.ndim != 2:
            raise ValueError(f"probs must be 2-D [classes, frames], got shape {p.shape}")
        if p.size and (p.min() < 0.0 or p.max() > 1.0):
            raise ValueError("frame probabilities must lie in [0, 1]")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @property
    def num_classes(self) -> int:
        return self.probs.shape[0]

    @property
    def num_frames(self) -> int:
        return self.probs.shape[1]


@dataclass(frozen=True)
class ClipLabel:
    """Clip-level class tags: hard {0, 1} or predicted probabilities."""

    tags: np.ndarray

    def __post_init__(self):
        t = np.array(self.tags, dtype=np.float64)
        if t.ndim != 1:
            raise ValueError("tags must be a vector")
        if t.size and (t.min() < 0.0 or t.max() > 1.0):
            raise ValueError("tags must lie in [0, 1]")
        t.setflags(write=False)
        object.__setattr__(self, "tags", t)


def num_frames(clip_duration_s: float, hop_s: float) -> int:
    """Frame count of a clip on the given hop."""
    if clip_duration_s <= 0 or hop_s <= 0:
        raise ValueError("duration and hop must be positive")
    return int(math.ceil(clip_duration_s / hop_s))


def box_to_interval(box: NormalizedBox, clip_duration_s: float) -> tuple[float, float]:
    """Denormalize a (center, length) box into (onset, offset) seconds."""
    if clip_duration_s <= 0:
        raise ValueError(f"clip duration must be positive, got {clip_duration_s}")
    lo, hi = box.interval
    return (lo * clip_duration_s, hi * clip_duration_s)


def interval_to_box(onset_s: float, offset_s: float, clip_duration_s: float) -> NormalizedBox:
    """Normalize an (onset, offset) interval into a (center, length) box."""
    if clip_duration_s <= 0:
        raise ValueError(f"clip duration must be positive, got {clip_duration_s}")
    if not (0.0 <= onset_s < offset_s <= clip_duration_s):
        raise ValueError(
            f"need 0 <= onset < offset <= duration, got ({onset_s}, {offset_s}) "
            f"in a {clip_duration_s}s clip"
        )
    return NormalizedBox(
        center=(onset_s + offset_s) / (2.0 * clip_duration_s),
        length=(offset_s - onset_s) / clip_duration_s,
    )


def segment_iou(a: tuple[float, float], b: tuple[float, float]) -> float:
    """1-D intersection over union of two intervals; 0 when disjoint."""
    a_lo, a_hi = a
    b_lo, b_hi = b
    if a_lo >= a_hi or b_lo >= b_hi:
        raise ValueError(f"invalid interval: {a} vs {b}")
    inter = min(a_hi, b_hi) - max(a_lo, b_lo)
    if inter <= 0.0:
        return 0.0
    union = (a_hi - a_lo) + (b_hi - b_lo) - inter
    return inter / union


def frame_centers(n: int, hop_s: float) -> np.ndarray:
    return (np.arange(n) + 0.5) * hop_s


def rasterize(events: EventSet, hop_s: float, num_classes: int) -> FrameGrid:
    """Paint events onto a frame grid.

    A frame belongs to an event iff its center time lies in [onset, offset).
    Same-class overlaps resolve per frame by max score.
    """
    if events.clip_duration_s is None:
        raise ValueError(f"clip {events.clip_id!r} has no duration; cannot rasterize")
    n = num_frames(events.clip_duration_s, hop_s)
    grid = np.zeros((num_classes, n), dtype=np.float64)
    centers = frame_centers(n, hop_s)
    for ev in events.events:
        if ev.class_id >= num_classes:
            raise ValueError(f"class_id {ev.class_id} out of range for {num_classes} classes")
        mask = (centers >= ev.onset_s) & (centers < ev.offset_s)
        row = grid[ev.class_id]
        row[mask] = np.maximum(row[mask], ev.score)
    return FrameGrid(events.clip_id, hop_s, grid)


def binarize_to_events(grid: FrameGrid, thresholds: float | Sequence[float]) -> EventSet:
    """Threshold a frame grid back into events.

    Per class, each maximal run of frames with prob >= threshold becomes one
    event with frame-edge-aligned boundaries and score = max prob in the run.
    """
    thr = np.broadcast_to(np.asarray(thresholds, dtype=np.float64), (grid.num_classes,))
    if thr.size and (thr.min() <= 0.0 or thr.max() >= 1.0):
        raise ValueError("thresholds must lie strictly inside (0, 1)")
    out: list[Event] = []
    for c in range(grid.num_classes):
        starts, stops, peaks = threshold_runs(grid.probs[c], float(thr[c]))
        for s, e, pk in zip(starts, stops, peaks):
            out.append(Event(c, s * grid.hop_s, e * grid.hop_s, float(pk)))
    return EventSet(grid.clip_id, grid.num_frames * grid.hop_s, tuple(out))


def _overlaps(a: Event, b: Event) -> bool:
    return a.onset_s < b.offset_s and b.onset_s < a.offset_s


def de_overlap(events: EventSet) -> EventSet:
    """Resolve same-class temporal overlaps.

    Per class, overlapping events are grouped into connected components
    (chains of pairwise overlap); only the highest-score event of each
    component survives. Ties break by earlier onset, then longer duration.
    Events of different classes never compete. Idempotent.
    """
    keep: set[int] = set()
    by_class: dict[int, list[int]] = {}
    for idx, ev in enumerate(events.events):
        by_class.setdefault(ev.class_id, []).append(idx)

    for indices in by_class.values():
        ordered = sorted(indices, key=lambda i: (events.events[i].onset_s, events.events[i].offset_s))
        component: list[int] = []
        reach = -math.inf
        for i in ordered:
            ev = events.events[i]
            if component and ev.onset_s >= reach:
                keep.add(_best_of(component, events.events))
                component = []
            component.append(i)
            reach = max(reach, ev.offset_s)
        if component:
            keep.add(_best_of(component, events.events))

    survivors = tuple(ev for idx, ev in enumerate(events.events) if idx in keep)
    return EventSet(events.clip_id, events.clip_duration_s, survivors)


def _best_of(component: Iterable[int], events: Sequence[Event]) -> int:
    return min(
        component,
        key=lambda i: (-events[i].score, events[i].onset_s, -events[i].duration_s, i),
    )
