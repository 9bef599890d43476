__all__ = ["Standardizer", "fit_standardizer", "apply_standardizer"]

from collections.abc import Sequence

import equinox as eqx
import jax
import jax.numpy as jnp
import numpy as np

from kinemark.errors import EmptyMatrix, SchemaMismatch
from kinemark.features.matrix import FeatureMatrix
from kinemark.types import Array


class Standardizer(eqx.Module):
    """Per-feature centring and scaling fitted on a training matrix

    Columns that were constant in the training matrix map to zero.

    Args:
        mean: The training mean of every column
        scale: The population standard deviation of every column, 1 where
            the column was constant
        constant: Whether each column was constant
        names: The feature names the parameters belong to
    """

    mean: Array
    scale: Array
    constant: Array
    names: tuple[str, ...] = eqx.field(static=True, converter=tuple)

    def __check_init__(self) -> None:
        if not self.mean.shape == self.scale.shape == self.constant.shape == (
            len(self.names),
        ):
            raise ValueError("Standardizer parameters must have one entry per feature")

    @jax.jit
    def transform(self, X: Array) -> Array:
        z = (X - self.mean) / self.scale
        return jnp.where(self.constant, 0.0, z)

    def __call__(self, matrix: FeatureMatrix | Array) -> FeatureMatrix | np.ndarray:
        return apply_standardizer(matrix, self)


def fit_standardizer(
    matrix: FeatureMatrix | Array, names: Sequence[str] | None = None
) -> Standardizer:
    """Fit the mean and population standard deviation of every column

    Raises:
        EmptyMatrix: if the matrix has no rows
    """
    if isinstance(matrix, FeatureMatrix):
        X, names = matrix.values, matrix.names
    else:
        X = jnp.asarray(matrix, dtype=jnp.float64)
        if names is None:
            names = tuple(f"f{i}" for i in range(X.shape[-1]))
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyMatrix("Cannot fit a standardizer without training rows")
    constant = jnp.max(X, axis=0) == jnp.min(X, axis=0)
    mean = jnp.mean(X, axis=0)
    std = jnp.std(X, axis=0)
    scale = jnp.where(constant | (std == 0), 1.0, std)
    return Standardizer(mean, scale, constant, names)


def apply_standardizer(
    matrix: FeatureMatrix | Array, params: Standardizer
) -> FeatureMatrix | np.ndarray:
    """Standardize a matrix with previously fitted parameters

    Plain arrays come back as numpy arrays; feature matrices keep their row
    identifiers.

    Raises:
        SchemaMismatch: if the columns differ from the fitted ones
    """
    if isinstance(matrix, FeatureMatrix):
        if tuple(matrix.names) != params.names:
            raise SchemaMismatch("The matrix columns differ from the standardized ones")
        return FeatureMatrix(
            params.transform(matrix.values),
            matrix.names,
            matrix.participant_ids,
            matrix.labels,
            matrix.window_index,
        )
    X = jnp.asarray(matrix, dtype=jnp.float64)
    if X.ndim != 2 or X.shape[1] != len(params.names):
        raise SchemaMismatch(
            f"Expected {len(params.names)} feature columns, got shape {tuple(X.shape)}"
        )
    return np.asarray(params.transform(X))
