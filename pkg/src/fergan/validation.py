"""Input validation helpers shared by the estimators and the data layer.

Images travel through the pipeline as H x W x C float arrays in [0, 1];
the helpers here normalize dtypes/shapes and fail loudly on anything else.
"""

import numpy as np

from .emotions import N_CLASSES


def check_image(image, image_size: int | None = None, channels: int | None = None) -> np.ndarray:
    """Validate a single H x W x C image in [0, 1]; 2-D input gains a channel axis."""
    arr = np.asarray(image, dtype=np.float32)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3:
        raise ValueError(f"image must be HxWxC, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError("image is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains non-finite values")
    if arr.min() < -1e-6 or arr.max() > 1.0 + 1e-6:
        raise ValueError(
            f"image intensities must lie in [0, 1], got range "
            f"[{arr.min():.4f}, {arr.max():.4f}]"
        )
    if image_size is not None and arr.shape[:2] != (image_size, image_size):
        raise ValueError(
            f"expected a {image_size}x{image_size} image, got {arr.shape[0]}x{arr.shape[1]}"
        )
    if channels is not None and arr.shape[2] != channels:
        raise ValueError(f"expected {channels} channel(s), got {arr.shape[2]}")
    return np.clip(arr, 0.0, 1.0)


def check_image_batch(X, image_size: int | None = None, channels: int | None = None) -> np.ndarray:
    """Validate a batch of images as an (N, H, W, C) float32 array in [0, 1]."""
    arr = np.asarray(X, dtype=np.float32)
    if arr.ndim == 3:  # (N, H, W) grayscale
        arr = arr[:, :, :, None]
    if arr.ndim != 4:
        raise ValueError(f"image batch must be (N, H, W, C), got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValueError("image batch is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image batch contains non-finite values")
    if arr.min() < -1e-6 or arr.max() > 1.0 + 1e-6:
        raise ValueError("image intensities must lie in [0, 1]")
    if image_size is not None and arr.shape[1:3] != (image_size, image_size):
        raise ValueError(
            f"expected {image_size}x{image_size} images, got "
            f"{arr.shape[1]}x{arr.shape[2]}"
        )
    if channels is not None and arr.shape[3] != channels:
        raise ValueError(f"expected {channels} channel(s), got {arr.shape[3]}")
    return np.clip(arr, 0.0, 1.0)


def check_labels(y, n_samples: int | None = None) -> np.ndarray:
    """Validate integer emotion labels in 0..5."""
    arr = np.asarray(y)
    if arr.ndim != 1:
        raise ValueError(f"labels must be 1-D, got shape {arr.shape}")
    if arr.size and not np.issubdtype(arr.dtype, np.number):
        raise ValueError("labels must be integers")
    arr = arr.astype(np.int64)
    if arr.size and (arr.min() < 0 or arr.max() >= N_CLASSES):
        raise ValueError(f"labels must lie in 0..{N_CLASSES - 1}")
    if n_samples is not None and arr.shape[0] != n_samples:
        raise ValueError(f"expected {n_samples} labels, got {arr.shape[0]}")
    return arr


def check_latent(latent, latent_dim: int) -> np.ndarray:
    """Validate a latent vector of the configured dimension with finite entries."""
    arr = np.asarray(latent, dtype=np.float32).reshape(-1)
    if arr.shape[0] != latent_dim:
        raise ValueError(f"latent vector must have length {latent_dim}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("latent vector contains non-finite entries")
    return arr


def check_seed(seed) -> int:
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be a nonnegative integer")
    return seed
