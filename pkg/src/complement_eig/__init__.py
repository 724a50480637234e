"""Hermitian eigenvectors from adjugates and reduced complements of minor determinants."""

from . import oracles
from .errors import (
    ComplementEigError,
    ConvergenceError,
    DimensionGuardError,
    HermiticityError,
    InvalidIndexError,
    InvalidPermutationError,
    MultiplicityError,
    OrderError,
    ParameterError,
    ShapeError,
)
from .results import IdentityCheckResult
from .spectral import (
    CharacteristicMatrix,
    EigenGroup,
    Eigenpair,
    SpectralConfig,
    SpectrumReport,
    eigenvalues,
    eigenvector_nondegenerate,
    eigenvectors_degenerate,
    full_spectrum,
    multiplicity_by_vanishing,
)
from .tensor_core import AntisymTensor, MultiIndex, adjugate, complement, det, kronecker, minor_det
from .trace_identities import (
    characteristic_coefficients,
    minor_trace_sum,
    reduced_complement_via_bell,
    reduced_complement_via_traces,
)

__version__ = "0.1.0"
