"""Framework-neutral checkpoint archives.

A checkpoint is a single zip file containing `meta.json` (kind, step,
config, config digest, tensor index) plus one raw little-endian float32
blob per tensor. The format is inspectable with stock tools and carries
enough metadata to rebuild the network it came from.
"""

import io
import json
import zipfile
from pathlib import Path

import numpy as np
import torch

from .errors import FerganError

FORMAT_VERSION = 1

# Fixed zip timestamp so identical contents produce identical archive bytes.
_EPOCH = (1980, 1, 1, 0, 0, 0)


class CheckpointError(FerganError):
    pass


def _blob_name(index: int, tensor_name: str) -> str:
    safe = tensor_name.replace("/", "_")
    return f"tensors/{index:04d}__{safe}.bin"


def save_checkpoint(path, kind: str, state_dict: dict, config: dict,
                    config_digest: str, step: int = 0, extra: dict | None = None):
    """Write a checkpoint archive; tensors are stored as little-endian float32."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    index = []
    blobs = []
    for i, (name, tensor) in enumerate(state_dict.items()):
        arr = tensor.detach().cpu().numpy().astype("<f4")
        blob = _blob_name(i, name)
        index.append({"name": name, "shape": list(arr.shape), "dtype": "float32", "file": blob})
        blobs.append((blob, arr.tobytes()))
    meta = {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "step": int(step),
        "config": config,
        "config_digest": config_digest,
        "tensors": index,
    }
    if extra:
        meta["extra"] = extra
    tmp = path.with_name(path.name + ".tmp")
    with zipfile.ZipFile(tmp, "w", compression=zipfile.ZIP_STORED) as zf:
        info = zipfile.ZipInfo("meta.json", date_time=_EPOCH)
        zf.writestr(info, json.dumps(meta, indent=2, sort_keys=True))
        for blob, data in blobs:
            info = zipfile.ZipInfo(blob, date_time=_EPOCH)
            zf.writestr(info, data)
    tmp.replace(path)


def read_meta(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise CheckpointError(f"checkpoint does not exist: {path}")
    try:
        with zipfile.ZipFile(path) as zf:
            return json.loads(zf.read("meta.json"))
    except (zipfile.BadZipFile, KeyError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"not a valid checkpoint archive: {path} ({exc})") from None


def load_checkpoint(path, expected_kind: str | None = None):
    """Read an archive back into (meta, state_dict of float32 tensors)."""
    path = Path(path)
    meta = read_meta(path)
    if meta.get("format_version") != FORMAT_VERSION:
        raise CheckpointError(
            f"unsupported checkpoint format version {meta.get('format_version')} in {path}"
        )
    if expected_kind is not None and meta.get("kind") != expected_kind:
        raise CheckpointError(
            f"expected a {expected_kind!r} checkpoint, found {meta.get('kind')!r} in {path}"
        )
    state = {}
    with zipfile.ZipFile(path) as zf:
        for entry in meta["tensors"]:
            raw = zf.read(entry["file"])
            arr = np.frombuffer(raw, dtype="<f4").reshape(entry["shape"]).copy()
            state[entry["name"]] = torch.from_numpy(arr)
    return meta, state


def verify_digest(meta: dict, digest_fn) -> None:
    """Recompute the config digest from the embedded config and compare."""
    embedded = meta.get("config", {})
    expected = digest_fn(embedded)
    if expected != meta.get("config_digest"):
        raise CheckpointError(
            "checkpoint config digest mismatch: archive metadata is inconsistent"
        )


def state_dict_bytes(state_dict: dict) -> bytes:
    """Canonical byte serialization of a state dict (for equality checks)."""
    buf = io.BytesIO()
    for name in sorted(state_dict):
        buf.write(name.encode())
        buf.write(state_dict[name].detach().cpu().numpy().astype("<f4").tobytes())
    return buf.getvalue()
