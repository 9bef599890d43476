from kinemark.units.decorator import (
    magnitude as magnitude,
    quantity_input as quantity_input,
)
from kinemark.units.registry import unit_registry as unit_registry
