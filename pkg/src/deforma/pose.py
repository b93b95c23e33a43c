"""Joint heatmap encoding and controlled pose perturbation.

Each detected joint j becomes one channel holding
exp(-dist(p, p_j) / sigma^2) over the pixel grid, with dist the plain
(unsquared) Euclidean distance. The squared=True variant uses
exp(-dist^2 / sigma^2) instead; missing joints yield all-zero channels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError
from .tensor_io import JOINT_COUNT, Keypoints, Tensor

DEFAULT_SIGMA = 6.0

# Joint-index groups over the BODY-18 ordering; shoulders belong to the
# arms and hips to the legs, mirroring how the limb segments are anchored.
JOINT_GROUPS = {
    "head": (0, 1, 14, 15, 16, 17),
    "torso": (2, 5, 8, 11),
    "arms": (2, 3, 4, 5, 6, 7),
    "legs": (8, 9, 10, 11, 12, 13),
}

DEFAULT_PERTURB_SELECTOR = ("arms", "legs")


@dataclass(frozen=True)
class HeatmapStack:
    """An 18-channel tensor, one heatmap per joint, values in [0, 1]."""

    tensor: Tensor

    def __post_init__(self):
        if self.tensor.channels != JOINT_COUNT:
            raise ValidationError(
                f"heatmap stack needs {JOINT_COUNT} channels, got {self.tensor.channels}"
            )
        data = self.tensor.data
        if data.min() < 0.0 or data.max() > 1.0:
            raise ValidationError("heatmap values must lie in [0, 1]")


def encode_heatmaps(
    kp: Keypoints,
    height: int,
    width: int,
    sigma: float = DEFAULT_SIGMA,
    squared: bool = False,
) -> HeatmapStack:
    """Evaluate one exponential-decay heatmap per joint at every pixel center."""
    if height < 1 or width < 1:
        raise DomainError(f"dims must be >= 1, got {height}x{width}")
    if not sigma > 0.0:
        raise DomainError(f"sigma must be > 0, got {sigma}")
    ys = np.arange(height, dtype=np.float64)[:, None]
    xs = np.arange(width, dtype=np.float64)[None, :]
    out = np.zeros((height, width, JOINT_COUNT), dtype=np.float32)
    inv = 1.0 / (sigma * sigma)
    for j, joint in enumerate(kp):
        if joint is None:
            continue
        d2 = (xs - joint[0]) ** 2 + (ys - joint[1]) ** 2
        expo = d2 if squared else np.sqrt(d2)
        out[:, :, j] = np.exp(-expo * inv)
    return HeatmapStack(Tensor(out))


def _selected_indices(selector) -> frozenset[int]:
    indices: set[int] = set()
    for item in selector:
        if isinstance(item, str):
            try:
                indices.update(JOINT_GROUPS[item])
            except KeyError:
                raise DomainError(
                    f"unknown joint group {item!r}; known: {sorted(JOINT_GROUPS)}"
                ) from None
        else:
            idx = int(item)
            if not 0 <= idx < JOINT_COUNT:
                raise DomainError(f"joint index {idx} out of range")
            indices.add(idx)
    return frozenset(indices)


def perturb_pose(
    kp: Keypoints,
    sigma_noise: float,
    selector=DEFAULT_PERTURB_SELECTOR,
    rng_seed: int = 0,
) -> Keypoints:
    """Displace selected detected joints by i.i.d. N(0, sigma_noise^2) per axis.

    Unselected and missing joints pass through unchanged; the MISSING
    pattern is always preserved. Deterministic given rng_seed: noise is
    drawn in joint-index order for the selected, detected joints.
    """
    if sigma_noise < 0.0:
        raise DomainError(f"sigma_noise must be >= 0, got {sigma_noise}")
    selected = _selected_indices(selector)
    if sigma_noise == 0.0:
        return Keypoints(kp.joints)
    rng = np.random.default_rng(rng_seed)
    joints = []
    for idx, joint in enumerate(kp):
        if joint is None or idx not in selected:
            joints.append(joint)
            continue
        dx, dy = rng.normal(0.0, sigma_noise, size=2)
        joints.append((joint[0] + dx, joint[1] + dy))
    return Keypoints(joints)
