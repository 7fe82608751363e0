"""Exact verification laboratory for geodesic semilocal E-preinvexity and
fractional multiobjective optimality conditions."""

from .certify import Certificate, CertKind, check_certificate, soundness_probe, verify_hypotheses
from .config import ConfigDocument, ConfigError, emit_config, parse_config
from .duality import DualPoint, converse_duality_check, dual_feasible, weak_duality_scan
from .funclass import (
    FnClass,
    Theorem,
    check_class,
    crosscheck_theorem,
    epigraph,
    level_set,
    piecewise_fn,
    polynomial_fn,
)
from .geometry import EGeodesicSpace, builtin_space, eval_E, eval_eta, eval_gamma, make_space, validate_space
from .region import Region, member
from .semidiff import check_lemma2, semiderivative
from .sets import ProbePolicy, SetProperty, Status, build_probes, check_set_property, locality_u
from .vfp import (
    VfpInstance,
    active_set,
    crosscheck_lemma1,
    feasible,
    lambda_star,
    objective_ratio,
    weak_efficient_oracle,
)

__version__ = "0.1.0"
