"""NN, SVM, LSSVM, ELM and KELM classifiers plus a cross-domain benchmark harness."""

from svmelm._backend import NAME as BACKEND
from svmelm.kernels import KernelKind, KernelSpec, kernel_matrix
from svmelm.numerics import RngStream, cholesky_solve, pairwise_sq_dists, uniform_matrix

__version__ = "0.1.0"
