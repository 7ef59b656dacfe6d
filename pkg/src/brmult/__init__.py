"""brmult - joint reductions and Buchsbaum-Rim multiplicities over k[x1..xd] at the origin.

Example:
    from brmult import PolyRing, Submodule, colength, mixed_br

    R = PolyRing(("x", "y"))
    x, y = R.gens()
    M = Submodule.from_matrix(R, [[x, y, R.zero], [R.zero, x, y]])
    colength(M)                  # lambda(R^2 / M)
    mixed_br([M, M]).value       # br(M|M)
"""

from brmult.certificates import CertificateLog
from brmult.config import DEFAULT_BOUNDS, DEFAULT_FIELD, Bounds, FieldSpec
from brmult.errors import (
    BrmultError,
    CandidateNotJointReduction,
    CertificateStatus,
    ExitCode,
    GeneratorOverflow,
    Indeterminate,
    InstanceError,
    InstanceSyntaxError,
    NotFiniteColength,
    NotFound,
    NotLocal,
    PreconditionError,
    WindowTooSmall,
)
from brmult.exactla import DenseMatrix, PrimeField, RationalField, field_from_spec
from brmult.instance import InstanceFile, parse_instance, serialize
from brmult.jointred import (
    JointReduction,
    joint_reduction_number,
    random_candidate,
    verify_determinantal,
    verify_equational,
)
from brmult.koszul import Endo, det_koszul_colength, h0_length, verify_comparison
from brmult.localring import MIdeal, Poly, PolyRing, ideal_colength, mprimary_exponent
from brmult.reports import TheoremReport, to_json
from brmult.submod import Submodule, colength, contains, fitting_ideal
from brmult.symprod import (
    BRTable,
    br_function,
    br_multiplicity,
    br_table,
    graded_product,
    mixed_br,
    sym_power,
)

__version__ = "0.1.0"

__all__ = [
    # Scalars and linear algebra
    "PrimeField",
    "RationalField",
    "DenseMatrix",
    "field_from_spec",
    # Local ring
    "PolyRing",
    "Poly",
    "MIdeal",
    "ideal_colength",
    "mprimary_exponent",
    # Submodules and products
    "Submodule",
    "colength",
    "contains",
    "fitting_ideal",
    "sym_power",
    "graded_product",
    "br_function",
    "br_table",
    "BRTable",
    "mixed_br",
    "br_multiplicity",
    # Koszul comparison
    "Endo",
    "h0_length",
    "det_koszul_colength",
    "verify_comparison",
    # Joint reductions
    "JointReduction",
    "random_candidate",
    "verify_equational",
    "verify_determinantal",
    "joint_reduction_number",
    # Instances and reports
    "InstanceFile",
    "parse_instance",
    "serialize",
    "TheoremReport",
    "to_json",
    "CertificateLog",
    # Configuration
    "Bounds",
    "FieldSpec",
    "DEFAULT_BOUNDS",
    "DEFAULT_FIELD",
    # Errors
    "BrmultError",
    "PreconditionError",
    "NotFiniteColength",
    "WindowTooSmall",
    "GeneratorOverflow",
    "CandidateNotJointReduction",
    "NotLocal",
    "InstanceError",
    "InstanceSyntaxError",
    "CertificateStatus",
    "ExitCode",
    "Indeterminate",
    "NotFound",
]
