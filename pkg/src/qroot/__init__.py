"""Maximal cyclic representations of U_eps(sl_(n+1)) at an odd root of unity, in exact arithmetic."""

from .cyclotomic import Cyclotomic, CyclotomicZeroDivisionError, parse_cyclotomic
from .modules import (
    Subspace,
    dimension_report,
    irreducibility_certificate,
    kernel_intersection,
    primitive_subspace,
    submodule_closure,
    weight_decompose,
)
from .operators import LinearOp, MonomialOp, SizeCapExceeded, SpaceShape, SparseMatrix, SparseVector, to_matrix
from .representation import (
    ParamSet,
    SpecializationError,
    default_params,
    divided_power_image,
    gen_image,
    load_params,
    shift_params,
    validate_params,
)
from .roots import ConventionFlag, RootInterval, calibrate_conventions, positive_roots, root_vector
from .suites import relation_suite, run_suite

__version__ = "0.1.0"
