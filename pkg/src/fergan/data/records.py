"""Labeled face records and identity-indexed datasets."""

from dataclasses import dataclass, field

import numpy as np

from ..emotions import N_CLASSES, CLASS_NAMES, EmotionLabel, coerce_label
from ..validation import check_image

PROVENANCES = ("real", "generated")


@dataclass
class LabeledFace:
    """One face image with its emotion label, subject identity, and origin."""

    image: np.ndarray
    emotion: EmotionLabel
    identity_id: str
    provenance: str = "real"
    source_db: str = ""
    path: str | None = None  # original file, when the record came from disk
    face_box: tuple | None = None  # detector rectangle from the manifest, if any

    def __post_init__(self):
        self.image = check_image(self.image)
        self.emotion = coerce_label(self.emotion)
        if not str(self.identity_id):
            raise ValueError("identity_id must be nonempty")
        self.identity_id = str(self.identity_id)
        if self.provenance not in PROVENANCES:
            raise ValueError(f"provenance must be one of {PROVENANCES}, got {self.provenance!r}")


class FaceDataset:
    """An immutable-by-convention collection of LabeledFace records.

    Maintains an identity index (identity_id -> record positions, in
    first-appearance order) and rejects duplicate
    (identity_id, emotion, provenance, source_db) tuples at construction.
    """

    def __init__(self, records, tag: str = ""):
        self.records: list[LabeledFace] = list(records)
        self.tag = tag
        self.identity_index: dict[str, list[int]] = {}
        seen = set()
        for i, rec in enumerate(self.records):
            if not isinstance(rec, LabeledFace):
                raise TypeError(f"record {i} is not a LabeledFace")
            key = (rec.identity_id, int(rec.emotion), rec.provenance, rec.source_db)
            if key in seen:
                raise ValueError(
                    f"duplicate record for identity {rec.identity_id!r}, "
                    f"emotion {rec.emotion.name.lower()}, provenance {rec.provenance}, "
                    f"source_db {rec.source_db!r}"
                )
            seen.add(key)
            self.identity_index.setdefault(rec.identity_id, []).append(i)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def identities(self) -> list[str]:
        """Identity ids in first-appearance order."""
        return list(self.identity_index)

    @property
    def n_identities(self) -> int:
        return len(self.identity_index)

    def labels(self) -> np.ndarray:
        return np.array([int(r.emotion) for r in self.records], dtype=np.int64)

    def images(self) -> np.ndarray:
        """Stacked (N, H, W, C) array; requires uniform image shapes."""
        if not self.records:
            return np.zeros((0, 0, 0, 0), dtype=np.float32)
        shapes = {r.image.shape for r in self.records}
        if len(shapes) != 1:
            raise ValueError(f"dataset holds mixed image shapes: {sorted(shapes)}")
        return np.stack([r.image for r in self.records])

    def subset_by_identities(self, identity_ids, tag: str = "") -> "FaceDataset":
        """Records of the given identities, preserving dataset order."""
        wanted = set(identity_ids)
        records = [r for r in self.records if r.identity_id in wanted]
        return FaceDataset(records, tag=tag or self.tag)

    def class_counts(self) -> dict[str, int]:
        counts = dict.fromkeys(CLASS_NAMES, 0)
        for rec in self.records:
            counts[CLASS_NAMES[int(rec.emotion)]] += 1
        return counts


@dataclass
class BalanceReport:
    """Outcome of a balance check: one record per emotion per identity."""

    balanced: bool
    per_class_counts: dict = field(default_factory=dict)
    offending_identities: list = field(default_factory=list)


def validate_balance(dataset: FaceDataset) -> BalanceReport:
    """Report whether every identity contributes exactly one face per emotion."""
    offenders = []
    for identity, indices in dataset.identity_index.items():
        emotions = sorted(int(dataset.records[i].emotion) for i in indices)
        if emotions != list(range(N_CLASSES)):
            offenders.append(identity)
    return BalanceReport(
        balanced=not offenders,
        per_class_counts=dataset.class_counts(),
        offending_identities=offenders,
    )


def concat_datasets(first: FaceDataset, second: FaceDataset, tag: str = "") -> FaceDataset:
    return FaceDataset(list(first.records) + list(second.records), tag=tag)
