"""Real + generated dataset mixing for the augmentation-ratio sweep.

A composition of k units extends the real set with k * |real identities|
generated identities, consumed from the pool in its manifest order and
without replacement, so the draw for a larger k is a superset of the draw
for a smaller one.
"""

from ..errors import PoolExhaustedError
from .records import FaceDataset, concat_datasets


def mix(real_train: FaceDataset, k: int, pool: FaceDataset) -> FaceDataset:
    """Extend real_train with k units of generated identities from the pool."""
    k = int(k)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return real_train
    n_real = real_train.n_identities
    needed = k * n_real
    pool_ids = pool.identities
    if len(pool_ids) < needed:
        raise PoolExhaustedError(
            f"mix needs {needed} generated identities (k={k} x {n_real} real) "
            f"but the pool holds {len(pool_ids)}"
        )
    chosen = pool_ids[:needed]
    generated = pool.subset_by_identities(chosen, tag=f"{pool.tag}-x{k}")
    return concat_datasets(real_train, generated,
                           tag=f"{real_train.tag}+{k}x{pool.tag or 'gfe'}")
