"""2D affine transforms: least-squares fit, resolution rescaling, inversion.

Point convention used across the package: p = (x, y) with x = column,
y = row, origin at the top-left pixel center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateError, DomainError, SingularError

# Condition limit for the 3x3 normal matrix of the fit.
_COND_LIMIT = 1e12
_DET_LIMIT = 1e-9


@dataclass(frozen=True)
class AffineTransform:
    """Maps p to A @ p + t with A = [[a11, a12], [a21, a22]], t = (tx, ty)."""

    a11: float
    a12: float
    a21: float
    a22: float
    tx: float
    ty: float

    def __post_init__(self):
        for name in ("a11", "a12", "a21", "a22", "tx", "ty"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"affine parameter {name} is not finite")

    @classmethod
    def identity(cls) -> "AffineTransform":
        return cls(1.0, 0.0, 0.0, 1.0, 0.0, 0.0)

    def matrix(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]], dtype=np.float64)

    def translation(self) -> np.ndarray:
        return np.array([self.tx, self.ty], dtype=np.float64)

    def det(self) -> float:
        return self.a11 * self.a22 - self.a12 * self.a21


def apply_affine(t: AffineTransform, p) -> tuple[float, float]:
    """Transform a single (x, y) point."""
    x, y = float(p[0]), float(p[1])
    return (t.a11 * x + t.a12 * y + t.tx, t.a21 * x + t.a22 * y + t.ty)


def apply_affine_array(t: AffineTransform, pts: np.ndarray) -> np.ndarray:
    """Transform an (N, 2) array of (x, y) points."""
    pts = np.asarray(pts, dtype=np.float64)
    return pts @ t.matrix().T + t.translation()


def fit_affine(src, dst) -> AffineTransform:
    """Least-squares affine from 4 source points onto 4 destination points.

    The 8x6 system decouples into two 4x3 problems sharing one design
    matrix G = [x, y, 1], so a single 3x3 normal matrix is solved for
    both coordinate rows. Raises DegenerateError when the sources are
    (near-)collinear, detected by the normal-matrix condition number.
    """
    src = np.asarray(src, dtype=np.float64)
    dst = np.asarray(dst, dtype=np.float64)
    if src.shape != (4, 2) or dst.shape != (4, 2):
        raise DomainError(f"expected 4 point pairs, got {src.shape} and {dst.shape}")
    if not (np.isfinite(src).all() and np.isfinite(dst).all()):
        raise DomainError("fit points must be finite")

    design = np.hstack([src, np.ones((4, 1))])
    normal = design.T @ design
    if np.linalg.cond(normal) > _COND_LIMIT:
        raise DegenerateError("source points are collinear or coincident")
    # One factorization, two right-hand sides: x' and y' rows of the transform.
    rows = np.linalg.solve(normal, design.T @ dst).T
    return AffineTransform(
        a11=rows[0, 0], a12=rows[0, 1], tx=rows[0, 2],
        a21=rows[1, 0], a22=rows[1, 1], ty=rows[1, 2],
    )


def rescale_affine(t: AffineTransform, from_dims, to_dims) -> AffineTransform:
    """Conjugate by the axis scaling S = diag(W'/W, H'/H): S o t o S^-1.

    Maps scaled source points to scaled destination points exactly, which
    adapts a transform fitted at one resolution to another.
    """
    from_h, from_w = from_dims
    to_h, to_w = to_dims
    if min(from_h, from_w, to_h, to_w) < 1:
        raise DomainError(f"dims must be >= 1, got {from_dims} -> {to_dims}")
    sx = to_w / from_w
    sy = to_h / from_h
    return AffineTransform(
        a11=t.a11,
        a12=t.a12 * (sx / sy),
        a21=t.a21 * (sy / sx),
        a22=t.a22,
        tx=t.tx * sx,
        ty=t.ty * sy,
    )


def invert_affine(t: AffineTransform) -> AffineTransform:
    """Inverse transform; raises SingularError when |det A| <= 1e-9."""
    det = t.det()
    if abs(det) <= _DET_LIMIT:
        raise SingularError(f"affine transform is singular (det {det:.3e})")
    i11 = t.a22 / det
    i12 = -t.a12 / det
    i21 = -t.a21 / det
    i22 = t.a11 / det
    return AffineTransform(
        a11=i11, a12=i12, a21=i21, a22=i22,
        tx=-(i11 * t.tx + i12 * t.ty),
        ty=-(i21 * t.tx + i22 * t.ty),
    )


def compose_affine(g: AffineTransform, f: AffineTransform) -> AffineTransform:
    """The transform applying f first, then g."""
    a = g.matrix() @ f.matrix()
    t = g.matrix() @ f.translation() + g.translation()
    return AffineTransform(a[0, 0], a[0, 1], a[1, 0], a[1, 1], t[0], t[1])
