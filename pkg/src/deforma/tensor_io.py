"""Dense float32 tensor container and the portable on-disk formats.

Two formats live here: the binary "DFT1" tensor file and the pose JSON
file holding 18 optional joint locations (OpenPose BODY-18 order, see
README for the index table).
"""

from __future__ import annotations

import json
import math
import struct
from pathlib import Path

import numpy as np

from .errors import FormatError, IoError, ValidationError

MAGIC = b"DFT1"
_HEADER = struct.Struct("<4sIIIB")  # magic, height, width, channels, flags

JOINT_COUNT = 18

# OpenPose BODY-18 joint order.
JOINT_NAMES = (
    "nose", "neck",
    "r_shoulder", "r_elbow", "r_wrist",
    "l_shoulder", "l_elbow", "l_wrist",
    "r_hip", "r_knee", "r_ankle",
    "l_hip", "l_knee", "l_ankle",
    "r_eye", "l_eye", "r_ear", "l_ear",
)

DEFAULT_CONFIDENCE_THRESHOLD = 0.05


class Tensor:
    """Immutable rank-3 float32 array, row-major height x width x channels."""

    __slots__ = ("_data",)

    def __init__(self, data: np.ndarray):
        arr = np.asarray(data)
        if arr.ndim != 3:
            raise ValidationError(f"tensor must be rank 3, got shape {arr.shape}")
        if min(arr.shape) < 1:
            raise ValidationError(f"tensor dims must be positive, got {arr.shape}")
        arr = np.ascontiguousarray(arr, dtype=np.float32)
        if not np.isfinite(arr).all():
            raise ValidationError("tensor holds NaN or Inf")
        if arr is data or not arr.flags.owndata:
            arr = arr.copy()
        arr.flags.writeable = False
        self._data = arr

    @classmethod
    def zeros(cls, height: int, width: int, channels: int) -> "Tensor":
        return cls(np.zeros((height, width, channels), dtype=np.float32))

    @property
    def data(self) -> np.ndarray:
        """Read-only (H, W, C) float32 view."""
        return self._data

    @property
    def height(self) -> int:
        return self._data.shape[0]

    @property
    def width(self) -> int:
        return self._data.shape[1]

    @property
    def channels(self) -> int:
        return self._data.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self._data.shape

    def __eq__(self, other) -> bool:
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.shape == other.shape and bool(
            (self._data.view(np.uint32) == other._data.view(np.uint32)).all()
        )

    def __hash__(self):
        return hash((self.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"Tensor({self.height}x{self.width}x{self.channels})"


class Keypoints:
    """Ordered list of 18 optional (x, y) joint locations in pixels."""

    __slots__ = ("_joints",)

    def __init__(self, joints):
        joints = tuple(None if j is None else (float(j[0]), float(j[1])) for j in joints)
        if len(joints) != JOINT_COUNT:
            raise ValidationError(f"expected {JOINT_COUNT} joints, got {len(joints)}")
        for idx, j in enumerate(joints):
            if j is not None and not (math.isfinite(j[0]) and math.isfinite(j[1])):
                raise ValidationError(f"joint {idx} has non-finite coordinates")
        self._joints = joints

    @property
    def joints(self) -> tuple:
        return self._joints

    def __getitem__(self, idx: int):
        return self._joints[idx]

    def __iter__(self):
        return iter(self._joints)

    def __len__(self) -> int:
        return JOINT_COUNT

    def __eq__(self, other) -> bool:
        if not isinstance(other, Keypoints):
            return NotImplemented
        return self._joints == other._joints

    def __hash__(self):
        return hash(self._joints)

    def present(self) -> tuple[int, ...]:
        """Indices of detected joints."""
        return tuple(i for i, j in enumerate(self._joints) if j is not None)

    def __repr__(self) -> str:
        return f"Keypoints({len(self.present())}/{JOINT_COUNT} present)"


def write_tensor(t: Tensor, path) -> None:
    """Serialize to DFT1: 17-byte header, then little-endian f32 payload."""
    header = _HEADER.pack(MAGIC, t.height, t.width, t.channels, 0)
    payload = t.data.astype("<f4", copy=False).tobytes()
    try:
        Path(path).write_bytes(header + payload)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def read_tensor(path) -> Tensor:
    """Read a DFT1 file; bit-exact inverse of write_tensor."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    if len(raw) < _HEADER.size:
        raise FormatError(f"{path}: truncated header ({len(raw)} bytes)")
    magic, height, width, channels, flags = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise FormatError(f"{path}: bad magic {magic!r}")
    if flags != 0:
        raise FormatError(f"{path}: unsupported flags byte {flags}")
    if min(height, width, channels) < 1:
        raise FormatError(f"{path}: non-positive dims {height}x{width}x{channels}")
    count = height * width * channels
    expected = _HEADER.size + 4 * count
    if len(raw) != expected:
        raise FormatError(
            f"{path}: payload holds {(len(raw) - _HEADER.size) // 4} floats, "
            f"header claims {count}"
        )
    values = np.frombuffer(raw, dtype="<f4", count=count, offset=_HEADER.size)
    arr = values.reshape(height, width, channels)
    if not np.isfinite(arr).all():
        raise ValidationError(f"{path}: payload holds NaN or Inf")
    return Tensor(arr)


def read_pose(path, confidence_threshold: float = DEFAULT_CONFIDENCE_THRESHOLD) -> Keypoints:
    """Read pose JSON; joints that are null or below the confidence cut are MISSING."""
    try:
        raw = Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "joints" not in doc:
        raise FormatError(f"{path}: missing top-level 'joints' key")
    entries = doc["joints"]
    if not isinstance(entries, list) or len(entries) != JOINT_COUNT:
        raise FormatError(
            f"{path}: expected {JOINT_COUNT} joint entries, got "
            f"{len(entries) if isinstance(entries, list) else type(entries).__name__}"
        )
    joints = []
    for idx, entry in enumerate(entries):
        if entry is None:
            joints.append(None)
            continue
        if not isinstance(entry, dict):
            raise FormatError(f"{path}: joint {idx} is neither null nor an object")
        try:
            x, y = entry["x"], entry["y"]
        except KeyError as exc:
            raise FormatError(f"{path}: joint {idx} lacks key {exc}") from exc
        if isinstance(x, bool) or isinstance(y, bool) or \
                not isinstance(x, (int, float)) or not isinstance(y, (int, float)):
            raise FormatError(f"{path}: joint {idx} has non-numeric coordinates")
        if not (math.isfinite(x) and math.isfinite(y)):
            raise FormatError(f"{path}: joint {idx} has non-finite coordinates")
        conf = entry.get("c", 1.0)
        if isinstance(conf, bool) or not isinstance(conf, (int, float)):
            raise FormatError(f"{path}: joint {idx} has non-numeric confidence")
        if conf < confidence_threshold:
            joints.append(None)
        else:
            joints.append((float(x), float(y)))
    return Keypoints(joints)


def write_pose(kp: Keypoints, path) -> None:
    """Serialize keypoints as pose JSON; MISSING joints become null."""
    entries = [None if j is None else {"x": j[0], "y": j[1]} for j in kp]
    try:
        Path(path).write_text(json.dumps({"joints": entries}, indent=1) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
