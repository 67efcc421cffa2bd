"""Frames for Hilbert C*-modules over finite-dimensional matrix algebras.

Coefficient algebras are direct sums of full complex matrix blocks; shape
``(1,)`` recovers plain Hilbert spaces, so the classical theory ships as a
special case. The package provides the frame-bound analysis, frame
transform, canonical dual and reconstruction machinery for module frames,
isomorphism invariants of finitely generated projective modules,
resolutions of the identity read as tight module frames, and the
closest-tight-frame toolbox for Hilbert-space frames (Balan minimizers,
symmetric approximation, Loewdin orthogonalization).

All dense linear algebra funnels through a cyclic Jacobi eigensolver with
a compiled core and a pure Python fallback; ``modframe.KERNEL_BACKEND``
names the one in use.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .cstar import AlgebraElement, AlgebraShape
from .errors import ModframeError
from .frames import (
    Frame,
    FrameReport,
    analyze,
    canonical_dual,
    frame_transform,
    from_partial_isometry,
    reconstruct,
    riesz_check,
    test_similarity,
)
from .invariants import (
    GramInvariant,
    build_unitary_from_matching_grams,
    change_of_basis_mp,
    normalized_tight_inner_product,
)
from .module_space import (
    ModuleOperator,
    ModuleVector,
    SubmoduleDescriptor,
    embed_hilbert_frame,
    inner,
)
from .resolution import (
    ResolutionSequence,
    coefficient_inequality,
    frame_transform_range,
    polar_factorization,
    verify_resolution,
)
from .tight import (
    HilbertFrame,
    balan_minimizers,
    closest_tight_multiple,
    example_56_family,
    loewdin_orthogonalization,
    nearness,
    quadratic_closeness,
    symmetric_approximation,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "__version__",
    "AlgebraElement",
    "AlgebraShape",
    "ModframeError",
    "Frame",
    "FrameReport",
    "analyze",
    "canonical_dual",
    "frame_transform",
    "from_partial_isometry",
    "reconstruct",
    "riesz_check",
    "test_similarity",
    "GramInvariant",
    "build_unitary_from_matching_grams",
    "change_of_basis_mp",
    "normalized_tight_inner_product",
    "ModuleOperator",
    "ModuleVector",
    "SubmoduleDescriptor",
    "embed_hilbert_frame",
    "inner",
    "ResolutionSequence",
    "coefficient_inequality",
    "frame_transform_range",
    "polar_factorization",
    "verify_resolution",
    "HilbertFrame",
    "balan_minimizers",
    "closest_tight_multiple",
    "example_56_family",
    "loewdin_orthogonalization",
    "nearness",
    "quadratic_closeness",
    "symmetric_approximation",
]
