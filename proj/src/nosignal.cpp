#include "localops/nosignal.hpp"

#include <algorithm>
#include <cmath>

#include "localops/eig.hpp"
#include "localops/errors.hpp"
#include "localops/qspace.hpp"
#include "localops/random.hpp"
#include "localops/tensor.hpp"

namespace localops {

namespace {

void check_input(const ChoiOperator& j) {
    j.validate();
    if (j.matrix.hermiticity_defect() > 1e-7 * std::max(1.0, fro_norm(j.matrix)))
        throw usage_error("no-signaling check requires a hermitian Choi matrix");
}

std::vector<std::size_t> mask_members(std::uint32_t mask, std::size_t m) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < m; ++i)
        if ((mask >> i) & 1u) out.push_back(i);
    return out;
}

// Orthogonal projection of an operator on the joint input space onto
// {B : discarding the K inputs leaves zero}.
ComplexMatrix project_input_kernel(const ComplexMatrix& b, const FactorShape& xshape,
                                   std::uint32_t mask) {
    const std::size_t m = xshape.dims.size();
    std::vector<std::size_t> perm;
    std::size_t d_k = 1;
    for (std::size_t i = 0; i < m; ++i)
        if (!((mask >> i) & 1u)) perm.push_back(i);
    for (std::size_t i = 0; i < m; ++i)
        if ((mask >> i) & 1u) {
            perm.push_back(i);
            d_k *= xshape.dims[i];
        }
    const std::size_t d_rest = xshape.total() / d_k;

    ComplexMatrix bp = permute_subsystems(b, xshape, perm);
    ComplexMatrix marg = partial_trace(bp, FactorShape({d_rest, d_k}), SubsystemSelector({1}));
    bp -= kron(marg * cplx(1.0 / double(d_k), 0.0), ComplexMatrix::identity(d_k));
    return permute_subsystems(bp, permuted_shape(xshape, perm), inverse_permutation(perm));
}

NoSignalReport finalize(NoSignalReport rep, double tol) {
    rep.worst = 0.0;
    rep.pass = true;
    for (auto& e : rep.entries) {
        e.pass = e.residual <= tol;
        rep.worst = std::max(rep.worst, e.residual);
        rep.pass = rep.pass && e.pass;
    }
    return rep;
}

} // namespace

NoSignalReport check_constraints(const ChoiOperator& j, double tol) {
    check_input(j);
    const std::size_t m = j.layout.party_count();
    if (m > 20) throw usage_error("too many parties for subset enumeration");

    NoSignalReport rep;
    rep.method = "constraint";
    rep.entries.push_back(NoSignalEntry{0, 0.0, true});
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask)
        rep.entries.push_back(
            NoSignalEntry{mask, k_marginal_residual(j.matrix, j.layout, mask), true});
    return finalize(std::move(rep), tol);
}

NoSignalReport check_semantic(const ChoiOperator& j, std::size_t trials, std::uint64_t seed,
                              double tol) {
    check_input(j);
    const std::size_t m = j.layout.party_count();
    if (m > 20) throw usage_error("too many parties for subset enumeration");

    FactorShape xshape;
    FactorShape ashape;
    for (const auto& p : j.layout.parties) {
        xshape.dims.push_back(p.din);
        ashape.dims.push_back(p.dout);
    }
    const std::size_t d_x = xshape.total();

    std::vector<ComplexMatrix> full_basis = hermitian_basis(d_x);
    RandomSource rng(seed == 0 ? 0x6e6f736967ULL : seed);

    NoSignalReport rep;
    rep.method = "semantic";
    rep.entries.push_back(NoSignalEntry{0, 0.0, true});
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
        const std::vector<std::size_t> members = mask_members(mask, m);
        std::size_t d_rest = 1;
        for (std::size_t i = 0; i < m; ++i)
            if (!((mask >> i) & 1u)) d_rest *= xshape.dims[i];

        // Basis of input differences invisible outside K.
        std::vector<ComplexMatrix> projected;
        for (const auto& b : full_basis)
            projected.push_back(project_input_kernel(b, xshape, mask));
        std::vector<ComplexMatrix> kernel = gram_schmidt(projected);
        if (kernel.size() != d_x * d_x - d_rest * d_rest)
            throw numerical_error("check_semantic: kernel basis rank mismatch");

        double residual = 0.0;
        for (const auto& b : kernel) {
            ComplexMatrix out = apply_choi(j, b);
            residual = std::max(
                residual, fro_norm(partial_trace(out, ashape, SubsystemSelector(members))));
        }

        // Random input pairs with matched marginals outside K.
        for (std::size_t trial = 0; trial < trials; ++trial) {
            ComplexMatrix rho = rng.density(d_x);
            ComplexMatrix sigma = rng.density(d_x);
            ComplexMatrix diff = rho - sigma;
            ComplexMatrix sigma_adj =
                sigma + (diff - project_input_kernel(diff, xshape, mask));
            ComplexMatrix out = apply_choi(j, rho - sigma_adj);
            residual = std::max(
                residual, fro_norm(partial_trace(out, ashape, SubsystemSelector(members))));
        }
        rep.entries.push_back(NoSignalEntry{mask, residual, true});
    }
    return finalize(std::move(rep), tol);
}

} // namespace localops
