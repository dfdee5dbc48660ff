"""structmv: structured matrix-vector products with verified multiplication
counts.

Circulant, Toeplitz, Hankel, symmetric, Toeplitz-plus-Hankel, sparse, and
arbitrarily nested multilevel (Kronecker) structures, each with a bilinear
program whose genuine-multiplication count is minimal and measured at
runtime, plus a literal direct path and a dense brute-force oracle for
cross-checking.
"""

from .bilinear import BilinearProgram, CountReport, apply, conjugate_by, kron, prune_check
from .kernels import (
    circulant_program,
    direct_circulant_matvec,
    direct_hankel_matvec,
    direct_matvec,
    direct_sparse_matvec,
    direct_symmetric_matvec,
    direct_toeplitz_matvec,
    direct_tph_matvec,
    hankel_program,
    sparse_program,
    symmetric_program,
    toeplitz_embedding,
    toeplitz_program,
    tph_program,
)
from .multilevel import (
    intermediate_w_values,
    multilevel_matvec_direct,
    multilevel_program,
    param_vector,
)
from .oracle import dense, naive_matvec
from .structures import (
    CirculantRep,
    HankelRep,
    MultilevelRep,
    SparseRep,
    SparsityPattern,
    StructureError,
    StructuredMatrix,
    SymmetricRep,
    ToeplitzPlusHankelRep,
    ToeplitzRep,
    order,
    param_dim,
    validate,
)
from .transform import dft, exchange_apply, fourier_matrix, idft

__version__ = "0.1.0"

__all__ = [
    "BilinearProgram",
    "CirculantRep",
    "CountReport",
    "HankelRep",
    "MultilevelRep",
    "SparseRep",
    "SparsityPattern",
    "StructureError",
    "StructuredMatrix",
    "SymmetricRep",
    "ToeplitzPlusHankelRep",
    "ToeplitzRep",
    "apply",
    "circulant_program",
    "conjugate_by",
    "dense",
    "dft",
    "direct_circulant_matvec",
    "direct_hankel_matvec",
    "direct_matvec",
    "direct_sparse_matvec",
    "direct_symmetric_matvec",
    "direct_toeplitz_matvec",
    "direct_tph_matvec",
    "exchange_apply",
    "fourier_matrix",
    "hankel_program",
    "idft",
    "intermediate_w_values",
    "kron",
    "multilevel_matvec_direct",
    "multilevel_program",
    "naive_matvec",
    "order",
    "param_dim",
    "param_vector",
    "prune_check",
    "sparse_program",
    "symmetric_program",
    "toeplitz_embedding",
    "toeplitz_program",
    "tph_program",
    "validate",
]
