"""Seeded row and column permutations of an instance"""

from typing import Tuple

import numpy as np

from fixprop.models.instance import MipInstance


def permutation_indices(num_rows: int, num_cols: int, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """Row and column orders for ``seed``; seed 0 is the identity"""
    if seed == 0:
        return np.arange(num_rows), np.arange(num_cols)
    rng = np.random.default_rng(seed)
    return rng.permutation(num_rows), rng.permutation(num_cols)


def permute_instance(instance: MipInstance, seed: int) -> MipInstance:
    """
    Reorder rows and columns of ``instance``

    Position k of the result holds original row rows[k] (column cols[k]);
    names travel with their rows and columns.
    """
    if seed == 0:
        return instance
    rows, cols = permutation_indices(instance.num_rows, instance.num_cols, seed)
    return MipInstance(
        c=instance.c[cols],
        A=instance.A[rows][:, cols],
        row_lower=instance.row_lower[rows],
        row_upper=instance.row_upper[rows],
        col_lower=instance.col_lower[cols],
        col_upper=instance.col_upper[cols],
        is_integer=instance.is_integer[cols],
        name=instance.name,
        row_names=tuple(instance.row_names[i] for i in rows),
        col_names=tuple(instance.col_names[j] for j in cols),
        objective_offset=instance.objective_offset,
        maximize=instance.maximize,
    )
