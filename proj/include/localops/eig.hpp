#ifndef LOCALOPS_EIG_HPP
#define LOCALOPS_EIG_HPP

#include <vector>

#include "localops/complex_matrix.hpp"

namespace localops {

struct EigResult {
    std::vector<double> values;   // descending
    ComplexMatrix vectors;        // columns, aligned with values
    double offdiag_residual = 0.0;
    int sweeps = 0;
};

// Cyclic Jacobi diagonalization for Hermitian matrices. Sweeps rotate every
// off-diagonal pair until the off-diagonal Frobenius mass drops below
// 1e-12 * ||M||_F, capped at 100 sweeps. Throws numerical_error if the input
// is visibly non-Hermitian (defect above herm_tol) or convergence fails.
EigResult hermitian_eig(const ComplexMatrix& m, double herm_tol = 1e-10);

// M = V diag(values) V* reassembly for a previously computed decomposition.
ComplexMatrix eig_reassemble(const EigResult& e);

double fro_norm(const ComplexMatrix& m);
// Hilbert-Schmidt inner product <A,B> = tr(A* B), conjugate-linear in A.
cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

// Operator norm. Hermitian inputs go through hermitian_eig directly;
// general square matrices use the singular values of M via M* M.
double op_norm(const ComplexMatrix& m);
// Sum of singular values (sum of |eigenvalue| in the Hermitian case).
double trace_norm(const ComplexMatrix& m);

// Smallest eigenvalue of the Hermitian part.
double min_eigenvalue(const ComplexMatrix& m);

// True when every eigenvalue is >= -tol.
bool psd_check(const ComplexMatrix& m, double tol = 1e-9);

// Nearest PSD matrix in Frobenius distance: clip negative eigenvalues to zero.
ComplexMatrix psd_project(const ComplexMatrix& m);

// Hermitian square root of a PSD matrix (negative eigenvalues clipped).
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

} // namespace localops

#endif
