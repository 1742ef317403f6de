#ifndef LOCALOPS_QSPACE_HPP
#define LOCALOPS_QSPACE_HPP

#include <cstdint>
#include <vector>

#include "localops/layout.hpp"

namespace localops {

// Orthonormal Hermitian basis of d x d matrices in a fixed deterministic
// order: diagonal units first, then for each pair i < j (row-major) the
// symmetric and antisymmetric combinations.
std::vector<ComplexMatrix> hermitian_basis(std::size_t d);

// Modified Gram-Schmidt over the Hilbert-Schmidt inner product with one
// re-orthogonalization pass; inputs whose residual norm falls below
// drop_tol are dropped. Returns an orthonormal set spanning the input.
std::vector<ComplexMatrix> gram_schmidt(const std::vector<ComplexMatrix>& input,
                                        double drop_tol = 1e-8);

// The single-party subspace Q: Hermitian operators on A (x) X whose partial
// trace over A is a real multiple of the identity. Real dimension
// (dout * din)^2 - din^2 + 1.
std::size_t q_dim(PartyDims dims);

// Orthonormal basis of Q, built by projecting the canonical Hermitian basis
// and orthonormalizing.
struct QSubspaceBasis {
    PartyDims dims;
    std::vector<ComplexMatrix> elements;
};
QSubspaceBasis q_basis(PartyDims dims);

// Orthogonal projection onto Q for a single party block, factors [A, X]:
//   P(Y) = Y - (1/dout) I_A (x) (Tr_A Y - (tr Y / din) I_X).
ComplexMatrix project_onto_Q(const ComplexMatrix& y, PartyDims dims);

// Orthogonal projection onto Q_1 (x) ... (x) Q_m, input in global ordering.
ComplexMatrix project_onto_tensor_Q(const ComplexMatrix& x_global, const SystemLayout& layout);

// Residual of the marginal constraint for a party subset K (bitmask over
// parties, bit i = party i):  with T = Tr_{A_K} X and the X_K factors
// permuted to the rear, || T - (Tr_{X_K} T) / d_{X_K} (x) I_{X_K} ||_F.
double k_marginal_residual(const ComplexMatrix& x_global, const SystemLayout& layout,
                           std::uint32_t k_mask);

struct MembershipReport {
    double projection_residual = 0.0;   // Frobenius distance to the subspace
    double constraint_residual = 0.0;   // worst marginal constraint over K
    std::vector<double> per_constraint; // indexed by mask-1 over nonempty K
    bool member = false;
    bool borderline = false;            // tests disagreed inside the 10x band
};

// Dual membership test: exact projection distance against the 2^m - 1
// marginal constraints. The two must agree; a disagreement wider than
// 10 * tol raises numerical_error.
MembershipReport in_tensor_Q(const ComplexMatrix& x_global, const SystemLayout& layout,
                             double tol = 1e-8);

struct BallParameters {
    std::vector<std::size_t> q_dims;  // per-party dim(Q_i)
    std::size_t n = 1;                // product of the above
    double k = 0.0;                   // 2^{m-1} sqrt(n) (n+1)
    double radius_unnormalized = 0.0; // 1/k
    double radius_normalized = 0.0;   // 1/(k * dout_total)
};
BallParameters ball_parameters(const SystemLayout& layout);

} // namespace localops

#endif
