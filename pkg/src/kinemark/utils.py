__all__ = ["get_dtype_eps", "safe_divide", "entropy_bits", "samples_for"]

import jax
import jax.numpy as jnp
from jax.scipy.special import entr

from kinemark.errors import NonIntegralWindow
from kinemark.types import Array


def get_dtype_eps(x):
    return jnp.finfo(jax.dtypes.result_type(x)).eps


def safe_divide(num: Array, denom: Array) -> Array:
    """Divide, returning 0 wherever the denominator is exactly 0"""
    ok = denom != 0
    return jnp.where(ok, num / jnp.where(ok, denom, 1), 0.0)


def entropy_bits(p: Array, axis: int = -1) -> Array:
    """Shannon entropy in bits of a (normalized) distribution, with 0 log 0 = 0"""
    return jnp.sum(entr(p), axis=axis) / jnp.log(2.0)


def samples_for(duration_s: float, sample_rate: float, what: str = "window") -> int:
    """The integral number of samples spanning ``duration_s`` at ``sample_rate``

    Raises:
        NonIntegralWindow: if the product is not a positive integer
    """
    exact = duration_s * sample_rate
    count = round(exact)
    if count < 1 or abs(exact - count) > 1e-9 * max(1.0, abs(exact)):
        raise NonIntegralWindow(
            f"A {what} of {duration_s:g} s at {sample_rate:g} Hz spans {exact:g} "
            "samples, which is not a positive integer"
        )
    return int(count)
