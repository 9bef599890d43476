"""Annotation aliases

``Array`` is anything ``jnp.asarray`` or ``np.asarray`` accepts: a JAX or
NumPy array, a nested sequence or a scalar. ``Quantity`` is a plain number,
read in the unit a function declares, or a pint or jpu quantity convertible to
that unit.
"""

from typing import Any, TypeAlias

Array: TypeAlias = Any
Quantity: TypeAlias = Any
