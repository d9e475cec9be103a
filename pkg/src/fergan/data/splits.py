"""Identity-disjoint train/val/test splitting.

Splitting by identity (rather than by image) is what guarantees that no
subject leaks across splits; every record follows its identity.
"""

import math

import numpy as np

from ..config import SplitSpec
from ..errors import InfeasibleSplitError
from .records import FaceDataset


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def resolve_split_counts(spec: SplitSpec, n_identities: int) -> tuple[int, int, int]:
    """Resolve counts/fractions/'rest' to exact identity counts covering all
    identities; anything else is infeasible."""
    spec.validate()
    resolved: dict[str, int | None] = {}
    for name in ("train", "val", "test"):
        value = getattr(spec, name)
        if isinstance(value, str):  # "rest"
            resolved[name] = None
        elif isinstance(value, float):
            resolved[name] = _round_half_up(value * n_identities)
        else:
            resolved[name] = int(value)
    fixed = sum(v for v in resolved.values() if v is not None)
    if fixed > n_identities:
        raise InfeasibleSplitError(
            f"split requests {fixed} identities but only {n_identities} are available"
        )
    rest_names = [name for name, v in resolved.items() if v is None]
    if rest_names:
        resolved[rest_names[0]] = n_identities - fixed
    elif fixed != n_identities:
        raise InfeasibleSplitError(
            f"split counts sum to {fixed} but the dataset has {n_identities} identities; "
            "use 'rest' on one field or adjust the counts"
        )
    return resolved["train"], resolved["val"], resolved["test"]


def split_by_identity(dataset: FaceDataset, spec: SplitSpec) -> tuple[FaceDataset, FaceDataset, FaceDataset]:
    """Split a dataset into identity-disjoint train/val/test parts.

    Deterministic in spec.seed: identities (in first-appearance order) are
    permuted once and assigned to train, then val, then test.
    """
    identities = dataset.identities
    n_train, n_val, n_test = resolve_split_counts(spec, len(identities))
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    order = [identities[i] for i in rng.permutation(len(identities))]
    train_ids = set(order[:n_train])
    val_ids = set(order[n_train:n_train + n_val])
    test_ids = set(order[n_train + n_val:n_train + n_val + n_test])
    return (
        dataset.subset_by_identities(train_ids, tag=f"{dataset.tag}-train"),
        dataset.subset_by_identities(val_ids, tag=f"{dataset.tag}-val"),
        dataset.subset_by_identities(test_ids, tag=f"{dataset.tag}-test"),
    )
