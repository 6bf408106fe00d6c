"""Curvature and spectral tools for solvable metric Lie algebras built from j-maps."""

from .catalog import catalog_build, catalog_names, qab, square_lattice
from .curvature import (
    CurvatureData,
    closed_form_connection,
    curvature,
    mean_curvature,
    solvable_curvature,
    symmetry_residuals,
)
from .homogeneous import (
    DamekReport,
    EinsteinReport,
    constant_scalar_verdict,
    damek_witness,
    einstein_check,
    nil_sphere_samples,
    nil_sphere_scalar,
    nil_sphere_scalar_closed,
)
from .jmaps import (
    EquivalenceCertificate,
    IsospectralityReport,
    build_equivalence_isometry,
    find_equivalence,
    find_lattice_equivalence,
    is_heisenberg_type,
    is_isospectral,
    skew_commutant_dim,
    spectrum_at,
)
from .lie_model import (
    JMap,
    Lattice,
    MetricLieAlgebra,
    dump_jmap,
    heisenberg_algebra,
    hyperbolic_algebra,
    load_jmap,
    quotient_data,
    solvable_extension,
)
from .linalg import ValidationError
from .report import full_report, isospectral_pair_report, report_lines, report_payload
from .submanifold import (
    SubmanifoldPoint,
    scalar_profile,
    sub_scalar,
    sub_sectional,
    weingarten,
)
from .threshold import (
    ThresholdReport,
    family_scan,
    lambda_bisect,
    lambda_submanifold,
    max_sectional,
    max_sectional_submanifold,
)

__version__ = "0.1.0"

__all__ = [
    "CurvatureData",
    "DamekReport",
    "EinsteinReport",
    "EquivalenceCertificate",
    "IsospectralityReport",
    "JMap",
    "Lattice",
    "MetricLieAlgebra",
    "SubmanifoldPoint",
    "ThresholdReport",
    "ValidationError",
    "build_equivalence_isometry",
    "catalog_build",
    "catalog_names",
    "closed_form_connection",
    "constant_scalar_verdict",
    "curvature",
    "damek_witness",
    "dump_jmap",
    "einstein_check",
    "family_scan",
    "find_equivalence",
    "find_lattice_equivalence",
    "full_report",
    "heisenberg_algebra",
    "hyperbolic_algebra",
    "is_heisenberg_type",
    "is_isospectral",
    "isospectral_pair_report",
    "lambda_bisect",
    "lambda_submanifold",
    "load_jmap",
    "max_sectional",
    "max_sectional_submanifold",
    "mean_curvature",
    "nil_sphere_samples",
    "nil_sphere_scalar",
    "nil_sphere_scalar_closed",
    "qab",
    "quotient_data",
    "report_lines",
    "report_payload",
    "scalar_profile",
    "skew_commutant_dim",
    "solvable_curvature",
    "solvable_extension",
    "spectrum_at",
    "square_lattice",
    "sub_scalar",
    "sub_sectional",
    "symmetry_residuals",
    "weingarten",
    "__version__",
]
