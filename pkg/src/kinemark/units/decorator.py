__all__ = ["quantity_input", "magnitude"]

import inspect
from collections.abc import Callable
from functools import wraps
from typing import Any

from pint import DimensionalityError

from kinemark.units.registry import unit_registry


def quantity_input(
    func: Callable[..., Any] | None = None,
    *,
    _strict: bool = False,
    **units: Any,
) -> Any:
    """A decorator to check and convert the units of physical inputs

    Each keyword argument names a parameter of the wrapped function and the
    unit it must be expressed in. Quantities are converted to that unit, so the
    wrapped function can rely on, say, ``window_len`` always being in seconds:

    .. code-block:: python

        from kinemark.units import unit_registry as ureg

        @units.quantity_input(window_len=ureg.s, sample_rate=ureg.Hz)
        def window_samples(window_len, sample_rate):
            return window_len * sample_rate

        window_samples(500 * ureg.ms, 60 * ureg.Hz)  # 30 dimensionless

    Plain numbers are assumed to already be in the declared unit and are
    wrapped as quantities, unless ``_strict`` is ``True`` in which case a
    ``ValueError`` is raised. Parameters whose value and default are both
    ``None`` pass through untouched, and ``*args``/``**kwargs`` cannot be given
    units.
    """
    if func is None:
        return lambda f: _wrap(f, units, _strict)
    if not callable(func):
        raise TypeError(
            "The first argument to 'quantity_input' must be a callable function, "
            "and all unit specifications must be passed as keyword arguments "
            "by name"
        )
    return _wrap(func, units, _strict)


def _wrap(func: Callable, units: dict[str, Any], strict: bool) -> Callable:
    signature = inspect.signature(func)
    for name in units:
        param = signature.parameters.get(name)
        if param is None:
            raise TypeError(f"'{func.__name__}' has no parameter named '{name}'")
        if param.kind in (
            inspect.Parameter.VAR_KEYWORD,
            inspect.Parameter.VAR_POSITIONAL,
        ):
            raise TypeError(
                "Units for general variable arguments and keyword "
                "arguments are not supported"
            )

    @wraps(func)
    def wrapped(*args: Any, **kwargs: Any) -> Any:
        bound = signature.bind(*args, **kwargs)
        bound.apply_defaults()
        for name, unit in units.items():
            value = bound.arguments[name]
            if value is None and signature.parameters[name].default is None:
                continue
            bound.arguments[name] = _apply_units(value, unit, strict=strict, name=name)
        return func(*bound.args, **bound.kwargs)

    return wrapped


def _apply_units(
    value: Any, units: Any, strict: bool = False, name: str | None = None
) -> Any:
    if units is None:
        return value
    if _is_quantity(value):
        try:
            return value.to(units)
        except DimensionalityError as e:
            raise DimensionalityError(
                e.units1,
                e.units2,
                e.dim1,
                e.dim2,
                "" if name is None else f" for input '{name}'",
            ) from None
    elif strict:
        raise ValueError("Arguments must be quantities for strict parsing")
    else:
        return unit_registry.Quantity(value, units)


def magnitude(value: Any, units: Any) -> float:
    """The plain float value of a scalar quantity (or number) in ``units``"""
    return float(_apply_units(value, units).magnitude)


def _is_quantity(x: Any) -> bool:
    return hasattr(x, "_magnitude") and hasattr(x, "_units")
