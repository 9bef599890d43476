__all__ = [
    "FeatureMask",
    "SplitPlan",
    "Standardizer",
    "apply_standardizer",
    "assert_disjoint",
    "fit_standardizer",
    "rfe_select",
    "route_windows",
    "smote",
    "split_participants",
]

from kinemark.prep.rfe import FeatureMask as FeatureMask, rfe_select as rfe_select
from kinemark.prep.smote import smote as smote
from kinemark.prep.split import (
    SplitPlan as SplitPlan,
    assert_disjoint as assert_disjoint,
    route_windows as route_windows,
    split_participants as split_participants,
)
from kinemark.prep.standardize import (
    Standardizer as Standardizer,
    apply_standardizer as apply_standardizer,
    fit_standardizer as fit_standardizer,
)
