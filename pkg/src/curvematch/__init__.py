"""Curve/point-set matching under the Fréchet distance."""

from .approx import approx_allpoints, restricted_allpoints_decide, restricted_allpoints_optimize
from .errors import InstanceTooLargeError, InvalidFormulaError, UnroutableFormulaError
from .frechet import Curve, continuous_frechet_decide, continuous_frechet_value, discrete_frechet
from .gadgets import (
    GadgetInstance,
    gen_discrete_cipsm_instance,
    gen_imprecise_subset_instance,
    gen_unique_subset_instance,
    transfer_chain,
    verify_equivalence,
)
from .imprecise import ImpreciseRegion, discrete_cipsm_nonunique_decide, region_ball_patterns
from .precise import (
    brute_force_allpoints_decide,
    brute_force_subset_decide,
    continuous_subset_decide,
    continuous_subset_optimize,
    discrete_allpoints_decide,
    discrete_subset_decide,
)
from .reductions import CnfFormula, sat_bruteforce, validate_3b2

__version__ = "0.1.0"
