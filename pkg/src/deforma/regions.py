"""Body-part region decomposition, mask rasterization, symmetry fallback.

A pose splits into 10 rigid parts: head (axis-aligned box of the head
joints), torso (the full image, so background texture travels with it),
and 8 limb segments (rotated rectangles around each joint pair). Missing
joints leave the affected part EMPTY; a missing limb may later borrow
its left/right twin's rectangle via apply_symmetry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, ValidationError
from .tensor_io import Keypoints, Tensor

_EPS = 1e-9


class BodyPart(Enum):
    HEAD = "head"
    TORSO = "torso"
    LUARM = "luarm"
    LLARM = "llarm"
    RUARM = "ruarm"
    RLARM = "rlarm"
    LULEG = "luleg"
    LLLEG = "llleg"
    RULEG = "ruleg"
    RLLEG = "rlleg"


PART_ORDER = tuple(BodyPart)

# Limb part -> (first joint, second joint) over the BODY-18 indices.
LIMB_JOINTS = {
    BodyPart.LUARM: (5, 6),
    BodyPart.LLARM: (6, 7),
    BodyPart.RUARM: (2, 3),
    BodyPart.RLARM: (3, 4),
    BodyPart.LULEG: (11, 12),
    BodyPart.LLLEG: (12, 13),
    BodyPart.RULEG: (8, 9),
    BodyPart.RLLEG: (9, 10),
}

MIRROR_PARTS = {
    BodyPart.LUARM: BodyPart.RUARM,
    BodyPart.RUARM: BodyPart.LUARM,
    BodyPart.LLARM: BodyPart.RLARM,
    BodyPart.RLARM: BodyPart.LLARM,
    BodyPart.LULEG: BodyPart.RULEG,
    BodyPart.RULEG: BodyPart.LULEG,
    BodyPart.LLLEG: BodyPart.RLLEG,
    BodyPart.RLLEG: BodyPart.LLLEG,
}


@dataclass(frozen=True)
class RegionConfig:
    """Joint subsets driving the decomposition.

    head_joints: indices whose axis-aligned box forms the head region.
    torso_anchor_joints: indices whose box supplies the diagonal used to
    size limb widths (one third of it); with fewer than 2 anchors
    detected, limbs fall back to fallback_width_ratio * image height.
    """

    head_joints: tuple[int, ...] = (0, 1, 14, 15, 16, 17)
    torso_anchor_joints: tuple[int, ...] = (2, 5, 8, 11)
    fallback_width_ratio: float = 0.15


@dataclass(frozen=True)
class Region:
    """One body-part quadrilateral; corners is None when the part is EMPTY."""

    part: BodyPart
    corners: np.ndarray | None
    source_dims: tuple[int, int]

    def __post_init__(self):
        if self.corners is not None:
            c = np.ascontiguousarray(self.corners, dtype=np.float64)
            if c.shape != (4, 2) or not np.isfinite(c).all():
                raise ValidationError(f"{self.part.value}: corners must be finite (4, 2)")
            c.flags.writeable = False
            object.__setattr__(self, "corners", c)

    @property
    def empty(self) -> bool:
        return self.corners is None


@dataclass(frozen=True)
class Mask:
    """Single-channel binary tensor; all-zero exactly for EMPTY regions."""

    tensor: Tensor

    def __post_init__(self):
        if self.tensor.channels != 1:
            raise ValidationError(f"mask must have 1 channel, got {self.tensor.channels}")
        d = self.tensor.data
        if not ((d == 0.0) | (d == 1.0)).all():
            raise ValidationError("mask values must be exactly 0.0 or 1.0")


def _bounding_box(points: list[tuple[float, float]]) -> np.ndarray:
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    return np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]], dtype=np.float64)


def _limb_width(kp: Keypoints, height: int, cfg: RegionConfig) -> float:
    anchors = [kp[i] for i in cfg.torso_anchor_joints if kp[i] is not None]
    fallback = cfg.fallback_width_ratio * height
    if len(anchors) < 2:
        return fallback
    box = _bounding_box(anchors)
    diagonal = float(np.hypot(box[2, 0] - box[0, 0], box[2, 1] - box[0, 1]))
    if diagonal < _EPS:  # coincident anchors give no usable scale
        return fallback
    return diagonal / 3.0


def _limb_corners(j1, j2, width: float) -> np.ndarray | None:
    p1 = np.array(j1, dtype=np.float64)
    p2 = np.array(j2, dtype=np.float64)
    axis = p2 - p1
    length = float(np.hypot(axis[0], axis[1]))
    if length < _EPS or width < _EPS:
        return None
    u = axis / length
    v = np.array([-u[1], u[0]])  # +90 degree normal; fixes corner correspondence
    h = 0.5 * width
    return np.array([p1 + h * v, p2 + h * v, p2 - h * v, p1 - h * v])


def decompose(kp: Keypoints, height: int, width: int,
              cfg: RegionConfig = RegionConfig()) -> list[Region]:
    """Split a pose into the 10 part regions, in fixed BodyPart order.

    Head needs at least 2 of its joints (and a non-degenerate box); each
    limb needs both of its joints; the torso is the whole image unless
    every torso anchor joint is missing. Degenerate geometry never
    raises, it produces EMPTY parts.
    """
    if height < 1 or width < 1:
        raise DomainError(f"dims must be >= 1, got {height}x{width}")
    dims = (height, width)
    regions: list[Region] = []

    head_pts = [kp[i] for i in cfg.head_joints if kp[i] is not None]
    head_corners = _bounding_box(head_pts) if len(head_pts) >= 2 else None
    if head_corners is not None:
        if head_corners[1, 0] - head_corners[0, 0] < _EPS or \
                head_corners[3, 1] - head_corners[0, 1] < _EPS:
            head_corners = None
    regions.append(Region(BodyPart.HEAD, head_corners, dims))

    anchors_present = any(kp[i] is not None for i in cfg.torso_anchor_joints)
    torso_corners = None
    if anchors_present:
        torso_corners = np.array(
            [[0.0, 0.0], [width, 0.0], [width, height], [0.0, height]]
        )
    regions.append(Region(BodyPart.TORSO, torso_corners, dims))

    limb_width = _limb_width(kp, height, cfg)
    for part in PART_ORDER[2:]:
        i1, i2 = LIMB_JOINTS[part]
        corners = None
        if kp[i1] is not None and kp[i2] is not None:
            corners = _limb_corners(kp[i1], kp[i2], limb_width)
        regions.append(Region(part, corners, dims))
    return regions


def rasterize_mask(region: Region, height: int, width: int) -> Mask:
    """Binary mask of pixel centers inside or on the region quadrilateral.

    The boundary is inclusive; corners outside the image are simply
    clipped by the grid. EMPTY regions give an all-zero mask.
    """
    if height < 1 or width < 1:
        raise DomainError(f"dims must be >= 1, got {height}x{width}")
    if region.empty:
        return Mask(Tensor.zeros(height, width, 1))
    corners = np.asarray(region.corners, dtype=np.float64)
    # Normalize winding so every interior half-plane test reads cross >= 0.
    x, y = corners[:, 0], corners[:, 1]
    area2 = np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    if area2 < 0.0:
        corners = corners[::-1]
    px = np.arange(width, dtype=np.float64)[None, :]
    py = np.arange(height, dtype=np.float64)[:, None]
    inside = np.ones((height, width), dtype=bool)
    for i in range(4):
        x1, y1 = corners[i]
        x2, y2 = corners[(i + 1) % 4]
        cross = (x2 - x1) * (py - y1) - (y2 - y1) * (px - x1)
        inside &= cross >= 0.0
    return Mask(Tensor(inside[:, :, None].astype(np.float32)))


def apply_symmetry(regions_a: list[Region], regions_b: list[Region]) -> list[Region]:
    """Fill EMPTY limbs of regions_a from their left/right twin.

    A limb h is substituted only when all three hold: regions_a[h] is
    EMPTY, regions_b[h] is not (so a transform can still be fitted), and
    the twin limb in regions_a is not. Donors are taken from the input
    list, head and torso are never substituted, regions_b is untouched.
    """
    _check_canonical(regions_a, "regions_a")
    _check_canonical(regions_b, "regions_b")
    by_part = {r.part: r for r in regions_a}
    out: list[Region] = []
    for idx, region in enumerate(regions_a):
        twin_part = MIRROR_PARTS.get(region.part)
        if (
            twin_part is not None
            and region.empty
            and not regions_b[idx].empty
            and not by_part[twin_part].empty
        ):
            donor = by_part[twin_part]
            region = Region(region.part, donor.corners, donor.source_dims)
        out.append(region)
    return out


def _check_canonical(regions: list[Region], name: str) -> None:
    if len(regions) != len(PART_ORDER) or \
            any(r.part is not p for r, p in zip(regions, PART_ORDER)):
        raise DomainError(f"{name} must hold the 10 parts in canonical order")
