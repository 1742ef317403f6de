#ifndef LOCALOPS_CHOI_HPP
#define LOCALOPS_CHOI_HPP

#include <vector>

#include "localops/layout.hpp"
#include "localops/random.hpp"

namespace localops {

// Channel in Kraus form, mapping L(X_all) -> L(A_all) over the layout's
// joint input and output spaces. Every Kraus operator is dout_total x
// din_total.
struct KrausChannel {
    SystemLayout layout;
    std::vector<ComplexMatrix> kraus;

    void validate() const;
};

// Choi representation, stored in global ordering: the matrix acts on
// A_1 (x) ... (x) A_m (x) X_1 (x) ... (x) X_m, with
//   J[(a,i),(b,j)] = <a| Phi(|i><j|) |b>  summed into position (a i),(b j).
// Equivalently J = sum_k w_k w_k* where w_k is the row-major vectorization
// of the k-th Kraus operator.
struct ChoiOperator {
    SystemLayout layout;
    ComplexMatrix matrix;

    void validate() const;
};

ChoiOperator choi_of_kraus(const KrausChannel& ch);

// Eigendecomposition of the Choi matrix, keeping eigenvalues above
// `threshold` (CP inputs within tolerance reproduce the channel).
KrausChannel kraus_of_choi(const ChoiOperator& j, double threshold = 1e-10);

// Phi(X) = Tr_X[ J (I_A (x) X^T) ], evaluated by direct index contraction.
ComplexMatrix apply_choi(const ChoiOperator& j, const ComplexMatrix& x);
ComplexMatrix apply_kraus(const KrausChannel& ch, const ComplexMatrix& x);

struct CptpReport {
    double min_eig = 0.0;       // smallest Choi eigenvalue
    double tp_residual = 0.0;   // || Tr_A J - I_X ||_F
    bool cp = false;
    bool tp = false;
    bool cptp() const { return cp && tp; }
};

CptpReport check_cptp(const ChoiOperator& j, double psd_tol = 1e-9, double tp_tol = 1e-8);
bool is_cp(const ChoiOperator& j, double psd_tol = 1e-9);
bool is_tp(const ChoiOperator& j, double tp_tol = 1e-8);

// Choi of the tensor product of independent per-party channels, regrouped
// into global ordering. Each part must be a single-party Choi.
ChoiOperator product_choi(const std::vector<ChoiOperator>& parts);

// Choi of Lambda(X) = Psi(X (x) Z) given the Choi of Psi with factors
// ordered [A, X, E]:  J(Lambda) = Tr_E[ (I_{A (x) X} (x) Z^T) J(Psi) ].
ComplexMatrix restrict_by_state(const ComplexMatrix& j_psi, std::size_t d_a,
                                std::size_t d_x, std::size_t d_e,
                                const ComplexMatrix& z);

// | <H, J(Lambda)> - <Zbar, (phi_H (x) id_E)(J(Psi))> | for the same data;
// both sides are returned so harnesses can log them.
struct PairingCheck {
    cplx direct;
    cplx via_environment;
    double residual() const;
};
PairingCheck functional_pairing_check(const ComplexMatrix& h, const ComplexMatrix& j_psi,
                                      std::size_t d_a, std::size_t d_x, std::size_t d_e,
                                      const ComplexMatrix& z);

// phi_H applied to the leading block: out[e][f] = sum_{u,v} conj(H[u][v]) M[(u,e),(v,f)].
ComplexMatrix functional_on_leading_block(const ComplexMatrix& h, const ComplexMatrix& m,
                                          std::size_t d_lead, std::size_t d_rest);

// Random rank-r channel: QR-style orthonormalization of a (dout * r) x din
// Ginibre draw, cut into r Kraus blocks. Requires dout * r >= din.
KrausChannel random_cptp(const SystemLayout& layout, std::size_t rank, RandomSource& rng);

} // namespace localops

#endif
