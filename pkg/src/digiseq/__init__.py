"""Digital low-discrepancy sequences over prime fields and their discrepancy norms."""

from .discrepancy import (
    ResourceError,
    WeightSequence,
    l2_warnock,
    l2_warnock_prefixes,
    local_disc,
    lp_quadrature,
    star_disc_exact,
    weighted_star,
)
from .finite_field import FieldElement, FieldError, FieldMatrix, rank
from .haar import (
    HaarIndex,
    bmo_seminorm_dyadic,
    haar_coeff,
    haar_energy,
    littlewood_paley_rhs,
    orlicz_estimate,
)
from .laurent import LaurentSeries, PrecisionError
from .nets import block_net_scan, d_admissibility, exact_t, t_value_at_m, verify_net
from .pointset import DigitalPoint, PointSet, read_csv, write_csv
from .sequences import (
    GeneratorSet,
    generate,
    generate_points,
    halton,
    halton_points,
    interlace2,
    deinterlace2,
    kronecker_direct,
    kronecker_matrices,
    preset,
)

__version__ = "0.1.0"

__all__ = [
    "FieldElement",
    "FieldError",
    "FieldMatrix",
    "rank",
    "LaurentSeries",
    "PrecisionError",
    "DigitalPoint",
    "PointSet",
    "read_csv",
    "write_csv",
    "GeneratorSet",
    "generate",
    "generate_points",
    "preset",
    "halton",
    "halton_points",
    "kronecker_matrices",
    "kronecker_direct",
    "interlace2",
    "deinterlace2",
    "t_value_at_m",
    "exact_t",
    "verify_net",
    "block_net_scan",
    "d_admissibility",
    "ResourceError",
    "local_disc",
    "star_disc_exact",
    "l2_warnock",
    "l2_warnock_prefixes",
    "lp_quadrature",
    "WeightSequence",
    "weighted_star",
    "HaarIndex",
    "haar_coeff",
    "haar_energy",
    "littlewood_paley_rhs",
    "bmo_seminorm_dyadic",
    "orlicz_estimate",
]
