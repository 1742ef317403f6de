#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "localops/complex_matrix.hpp"
#include "localops/layout.hpp"

namespace localops {

// Which operator space the per-party certificate factors live in.
enum class CertSpace { q_subspace, hermitian };

// One product term w * F_1 (x) ... (x) F_m of a separable decomposition.
struct CertTerm {
    double weight = 0.0;
    std::vector<ComplexMatrix> factors; // one square block per party, PSD
};

// A list of product terms together with the operator they are claimed to sum
// to.  `target` and reassemble() use grouped ordering [A_1 X_1 ... A_m X_m].
struct SeparableCertificate {
    CertSpace space = CertSpace::q_subspace;
    SystemLayout layout;
    std::vector<CertTerm> terms;
    ComplexMatrix target;

    ComplexMatrix reassemble() const;
};

struct CertificateReport {
    double reassembly_residual = 0.0; // ||sum - target||_F / max(1, ||target||_F)
    double worst_psd_defect = 0.0;    // most negative factor eigenvalue, flipped
    double worst_space_residual = 0.0;
    double min_weight = 0.0;
    bool pass = false;
};

CertificateReport verify_certificate(const SeparableCertificate& cert, double tol = 1e-8,
                                     double psd_tol = 1e-9);

// (||x|| I + x)/2 and (||x|| I - x)/2: a PSD pair differing by x, each with
// operator norm at most ||x||.
std::pair<ComplexMatrix, ComplexMatrix> split_psd(const ComplexMatrix& x);

// Real dimension n of the chosen product space: prod q_dim for the Q
// subspace, prod (din*dout)^2 for the full hermitian space.
std::size_t space_dimension(const SystemLayout& layout, CertSpace space);

// Orthonormal hermitian basis of the chosen space for one party.
std::vector<ComplexMatrix> party_basis(PartyDims dims, CertSpace space);

// X = plus - minus with both parts certified separable and
// ||plus||, ||minus|| <= 2^{m-1} sqrt(n) ||X||_F.
struct SeparableSplit {
    SeparableCertificate plus;
    SeparableCertificate minus;
    double norm_bound = 0.0;
    double plus_norm = 0.0;
    double minus_norm = 0.0;
};

SeparableSplit sep_generate(const ComplexMatrix& x_global, const SystemLayout& layout,
                            CertSpace space, double membership_tol = 1e-8);

// Same sum and same total weight with at most n+1 terms (affine reduction of
// the term coordinates).
SeparableCertificate caratheodory_reduce(const SeparableCertificate& cert);

// Certificate for (prod_i ||P_i||) I - P_1 (x) ... (x) P_m given PSD in-space
// factors; 2^m - 1 terms.
SeparableCertificate identity_minus_product(const std::vector<ComplexMatrix>& factors,
                                            const SystemLayout& layout, CertSpace space);

// Certificate for (n+1) ||Q|| I - Q given a certified separable Q.
SeparableCertificate identity_minus_separable(const SeparableCertificate& cert);

// Certificate for k ||X||_F I - X for any in-space X, where
// k = 2^{m-1} sqrt(n) (n+1).
SeparableCertificate identity_minus_any(const ComplexMatrix& x_global,
                                        const SystemLayout& layout, CertSpace space,
                                        double membership_tol = 1e-8);

} // namespace localops
