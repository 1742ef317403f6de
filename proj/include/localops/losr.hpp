#pragma once

#include <cstddef>
#include <vector>

#include "localops/choi.hpp"
#include "localops/complex_matrix.hpp"
#include "localops/layout.hpp"
#include "localops/sep.hpp"

namespace localops {

// Certificate that I - A is an unnormalized mixture of product channels:
// (1 - k ||A||_F) I plus the expansion of k ||A||_F I - A, for A in the
// tensor of the per-party marginal subspaces with ||A||_F <= 1/k.
SeparableCertificate ball_certificate(const ComplexMatrix& a_global, const SystemLayout& layout,
                                      double membership_tol = 1e-8);

struct LosrTerm {
    double prob = 0.0;
    std::vector<KrausChannel> channels; // one single-party channel per party
};

// Convex mixture of product channels, with the scalar that relates it back
// to the certificate it came from: normalization * mixture == target.
struct LosrForm {
    SystemLayout layout;
    double normalization = 0.0;
    std::vector<LosrTerm> terms;

    ChoiOperator mixture_choi() const; // global ordering, CPTP
};

LosrForm certificate_to_losr(const SeparableCertificate& cert, double tol = 1e-8);

// One shared classical outcome per mixture term: party i applies its j-th
// channel when the environment register holds |j>.
struct LosrRealization {
    SystemLayout layout;
    std::size_t env_dim = 1;             // shared-outcome count t
    std::vector<double> sigma_diag;      // outcome probabilities
    std::vector<KrausChannel> local_ops; // party i: X_i (x) E_i -> A_i

    ComplexMatrix sigma() const; // diagonal shared state on env_dim^m
};

LosrRealization realize_shared_randomness(const LosrForm& form);

// Choi (global ordering) of X -> (Psi_1 (x) ... (x) Psi_m)(X (x) sigma).
ChoiOperator realization_choi(const LosrRealization& realization);

} // namespace localops
