__all__ = ["corpus", "features", "harness", "kinematics", "models", "prep", "units"]

import jax

# Feature values and exported models are defined in double precision
jax.config.update("jax_enable_x64", True)

from kinemark import (  # noqa: E402
    corpus as corpus,
    features as features,
    harness as harness,
    kinematics as kinematics,
    models as models,
    prep as prep,
    units as units,
)
from kinemark.kinemark_version import __version__ as __version__  # noqa: E402
