"""Manifest CSV reading/writing and corpus persistence.

A manifest is a UTF-8 CSV with header
`path,identity_id,emotion,provenance,source_db` and forward-slash relative
paths; it is the adapter surface for any licensed corpus the user supplies.
An optional `face_box` column carries `x0;y0;x1;y1` pixel rectangles for
corpora that ship detector output.
"""

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image

from ..emotions import CLASS_NAMES, parse_emotion
from ..errors import ManifestError
from .records import PROVENANCES, FaceDataset, LabeledFace

MANIFEST_COLUMNS = ("path", "identity_id", "emotion", "provenance", "source_db")
OPTIONAL_COLUMNS = ("face_box",)


@dataclass
class ManifestRecord:
    relative_path: str
    identity_id: str
    emotion: str
    provenance: str
    source_db: str
    face_box: tuple | None = None

    def validate(self, row: int):
        if not self.relative_path:
            raise ManifestError("empty path", row=row)
        if not self.identity_id:
            raise ManifestError("empty identity_id", row=row)
        try:
            parse_emotion(self.emotion)
        except ValueError as exc:
            raise ManifestError(str(exc), row=row) from None
        if self.provenance not in PROVENANCES:
            raise ManifestError(
                f"provenance must be one of {PROVENANCES}, got {self.provenance!r}", row=row
            )


def _parse_face_box(raw: str, row: int) -> tuple | None:
    raw = (raw or "").strip()
    if not raw:
        return None
    parts = raw.split(";")
    if len(parts) != 4:
        raise ManifestError(f"face_box must be 'x0;y0;x1;y1', got {raw!r}", row=row)
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise ManifestError(f"face_box entries must be integers, got {raw!r}", row=row) from None


def read_manifest(path) -> list[ManifestRecord]:
    """Parse a manifest file; errors name the offending row (1-based data rows)."""
    path = Path(path)
    if not path.exists():
        raise ManifestError(f"manifest file does not exist: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ManifestError(f"manifest {path} is empty (missing header)") from None
        header = [h.strip() for h in header]
        if tuple(header[: len(MANIFEST_COLUMNS)]) != MANIFEST_COLUMNS:
            raise ManifestError(
                f"manifest header must start with {','.join(MANIFEST_COLUMNS)}, "
                f"got {','.join(header)}"
            )
        extras = header[len(MANIFEST_COLUMNS):]
        unknown = [c for c in extras if c not in OPTIONAL_COLUMNS]
        if unknown:
            raise ManifestError(f"unknown manifest column(s): {', '.join(unknown)}")
        records = []
        for row_no, row in enumerate(reader, start=1):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) < len(MANIFEST_COLUMNS):
                raise ManifestError(
                    f"expected at least {len(MANIFEST_COLUMNS)} columns, got {len(row)}",
                    row=row_no,
                )
            values = [cell.strip() for cell in row]
            face_box = None
            if "face_box" in extras:
                face_box = _parse_face_box(values[len(MANIFEST_COLUMNS) + extras.index("face_box")], row_no)
            rec = ManifestRecord(*values[: len(MANIFEST_COLUMNS)], face_box=face_box)
            rec.validate(row_no)
            records.append(rec)
    return records


def write_manifest(path, rows):
    """Write manifest rows; accepts ManifestRecord or (LabeledFace, relpath) pairs."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(MANIFEST_COLUMNS)
        for row in rows:
            writer.writerow(
                [
                    row.relative_path.replace("\\", "/"),
                    row.identity_id,
                    row.emotion,
                    row.provenance,
                    row.source_db,
                ]
            )
    return path


def manifest_rows_for_dataset(dataset: FaceDataset, root) -> list[ManifestRecord]:
    """Manifest rows referencing each record's on-disk image, relative to root."""
    root = Path(root).resolve()
    rows = []
    for rec in dataset.records:
        if not rec.path:
            raise ManifestError(
                f"record for identity {rec.identity_id!r} has no backing image file; "
                "persist the dataset first"
            )
        rel = Path(rec.path).resolve().relative_to(root)
        rows.append(
            ManifestRecord(
                relative_path=str(rel).replace("\\", "/"),
                identity_id=rec.identity_id,
                emotion=CLASS_NAMES[int(rec.emotion)],
                provenance=rec.provenance,
                source_db=rec.source_db,
            )
        )
    return rows


def _decode_image(path: Path) -> np.ndarray:
    try:
        with Image.open(path) as img:
            if img.mode not in ("L", "RGB"):
                img = img.convert("RGB")
            arr = np.asarray(img, dtype=np.float32) / 255.0
    except (OSError, ValueError) as exc:
        raise ManifestError(f"cannot decode image {path}: {exc}") from None
    if arr.ndim == 2:
        arr = arr[:, :, None]
    return arr


def load_corpus(manifest_path, tag: str = "") -> FaceDataset:
    """Load a manifest and decode every referenced image into a FaceDataset."""
    manifest_path = Path(manifest_path)
    rows = read_manifest(manifest_path)
    root = manifest_path.parent
    records = []
    for row_no, row in enumerate(rows, start=1):
        image_path = (root / row.relative_path).resolve()
        if not image_path.exists():
            raise ManifestError(f"image file does not exist: {image_path}", row=row_no)
        image = _decode_image(image_path)
        records.append(
            LabeledFace(
                image=image,
                emotion=parse_emotion(row.emotion),
                identity_id=row.identity_id,
                provenance=row.provenance,
                source_db=row.source_db,
                path=str(image_path),
                face_box=row.face_box,
            )
        )
    return FaceDataset(records, tag=tag or manifest_path.stem)


def save_dataset(dataset: FaceDataset, directory, image_dir: str = "images") -> Path:
    """Persist a dataset as PNG images plus a manifest; returns the manifest path.

    Images are quantized to 8-bit. Filenames are `{identity}_{emotion}.png`,
    so re-saving the same dataset is byte-reproducible.
    """
    directory = Path(directory)
    (directory / image_dir).mkdir(parents=True, exist_ok=True)
    rows = []
    for rec in dataset.records:
        name = f"{rec.identity_id}_{CLASS_NAMES[int(rec.emotion)]}.png"
        rel = f"{image_dir}/{name}"
        out_path = directory / image_dir / name
        arr = np.clip(np.round(rec.image * 255.0), 0, 255).astype(np.uint8)
        if arr.shape[2] == 1:
            Image.fromarray(arr[:, :, 0], mode="L").save(out_path)
        else:
            Image.fromarray(arr, mode="RGB").save(out_path)
        rec.path = str(out_path.resolve())
        rows.append(
            ManifestRecord(
                relative_path=rel,
                identity_id=rec.identity_id,
                emotion=CLASS_NAMES[int(rec.emotion)],
                provenance=rec.provenance,
                source_db=rec.source_db,
            )
        )
    return write_manifest(directory / "manifest.csv", rows)


def manifest_identities(manifest_path) -> set:
    return {row.identity_id for row in read_manifest(manifest_path)}


def manifest_image_paths(manifest_path) -> set:
    manifest_path = Path(manifest_path)
    root = manifest_path.parent
    return {str((root / row.relative_path).resolve()) for row in read_manifest(manifest_path)}
