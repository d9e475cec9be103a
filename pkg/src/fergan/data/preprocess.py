"""Face-chip preprocessing: crop, grayscale, resize.

The classifier consumes size x size x 1 chips in [0, 1]. Cropping happens
before resizing; without a face box a centered square covering
`crop_fraction` of the short side is used. Grayscale uses the standard
luminance weights (0.299, 0.587, 0.114).
"""

import hashlib
import os
import tempfile
from pathlib import Path

import numpy as np
from PIL import Image

from ..validation import check_image
from .records import FaceDataset, LabeledFace

LUMINANCE_WEIGHTS = (0.299, 0.587, 0.114)

CACHE_ENV_VAR = "FERGAN_CACHE_DIR"


def _to_grayscale(image: np.ndarray) -> np.ndarray:
    if image.shape[2] == 1:
        return image
    weights = np.asarray(LUMINANCE_WEIGHTS, dtype=np.float32)
    return (image @ weights)[:, :, None]


def _resize(image: np.ndarray, size: int) -> np.ndarray:
    if image.shape[0] == size and image.shape[1] == size:
        return image
    chans = []
    for c in range(image.shape[2]):
        plane = Image.fromarray(image[:, :, c], mode="F")
        plane = plane.resize((size, size), Image.BILINEAR)
        chans.append(np.asarray(plane, dtype=np.float32))
    return np.stack(chans, axis=-1)


def _crop(image: np.ndarray, face_box, crop_fraction: float) -> np.ndarray:
    h, w = image.shape[:2]
    if face_box is not None:
        x0, y0, x1, y1 = (int(v) for v in face_box)
        if x1 <= x0 or y1 <= y0:
            raise ValueError(f"degenerate face box {face_box!r}")
        if x0 < 0 or y0 < 0 or x1 > w or y1 > h:
            raise ValueError(f"face box {face_box!r} outside image bounds {w}x{h}")
        return image[y0:y1, x0:x1, :]
    side = max(1, int(round(crop_fraction * min(h, w))))
    y0 = (h - side) // 2
    x0 = (w - side) // 2
    return image[y0:y0 + side, x0:x0 + side, :]


def preprocess(image, face_box=None, size: int = 64, crop_fraction: float = 0.8) -> np.ndarray:
    """Crop -> grayscale -> resize; returns a size x size x 1 chip in [0, 1]."""
    image = check_image(image)
    cropped = _crop(image, face_box, crop_fraction)
    gray = _to_grayscale(cropped)
    resized = _resize(gray, size)
    return np.clip(resized, 0.0, 1.0)


def resolve_cache_dir(configured: str | None) -> Path | None:
    """Environment variable wins over the configured cache directory."""
    override = os.environ.get(CACHE_ENV_VAR)
    value = override or configured
    return Path(value) if value else None


def _cache_key(image: np.ndarray, size: int, crop_fraction: float, face_box) -> str:
    h = hashlib.sha256()
    h.update(image.astype("<f4").tobytes())
    h.update(repr((image.shape, size, round(crop_fraction, 9), face_box)).encode())
    return h.hexdigest()


def _cache_load(cache_dir: Path, key: str) -> np.ndarray | None:
    path = cache_dir / f"{key}.npy"
    if path.exists():
        return np.load(path)
    return None


def _cache_store(cache_dir: Path, key: str, chip: np.ndarray):
    cache_dir.mkdir(parents=True, exist_ok=True)
    # write-temp-then-rename so concurrent sweep points never see partial files
    fd, tmp = tempfile.mkstemp(dir=cache_dir, suffix=".npy.tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            np.save(fh, chip)
        os.replace(tmp, cache_dir / f"{key}.npy")
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def preprocess_dataset(dataset: FaceDataset, size: int = 64, crop_fraction: float = 0.8,
                       cache_dir=None) -> FaceDataset:
    """Preprocess every record; chips are cached by content hash when a cache
    directory is set."""
    cache_dir = Path(cache_dir) if cache_dir else None
    records = []
    for rec in dataset.records:
        chip = None
        key = None
        if cache_dir is not None:
            key = _cache_key(rec.image, size, crop_fraction, rec.face_box)
            chip = _cache_load(cache_dir, key)
        if chip is None:
            chip = preprocess(rec.image, face_box=rec.face_box, size=size,
                              crop_fraction=crop_fraction)
            if cache_dir is not None:
                _cache_store(cache_dir, key, chip)
        records.append(
            LabeledFace(
                image=chip,
                emotion=rec.emotion,
                identity_id=rec.identity_id,
                provenance=rec.provenance,
                source_db=rec.source_db,
                path=rec.path,
            )
        )
    return FaceDataset(records, tag=dataset.tag)
