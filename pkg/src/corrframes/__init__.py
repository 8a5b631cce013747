"""Correlation-minimizing uniform Parseval frames in small real dimensions."""

from ._backend import available_backends, backend_name, set_backend, use_backend
from .catalog import build, coherence_reference, known_coherence, rattle_feasibility_check
from .equivalence import equivalent, type1_equivalent
from .errors import (
    ConstructionError,
    DegenerateInputError,
    FrameError,
    FrameFileError,
    InvalidInputError,
    NotFoundError,
    OptimizerFailure,
)
from .frame import (
    Frame,
    analyze,
    grammian,
    is_equiangular,
    max_correlation,
    parseval_defect,
    tightness_diagnostics,
    uniformity_defect,
    welch_bound,
)
from .frameio import parse_frame_file, read_frame, save_frame, write_frame_file
from .optimizer import OptimizerConfig, minimize
from .transforms import SignedPermutation, apply_signed_permutation, complement, rotate, union

__version__ = "0.1.0"
