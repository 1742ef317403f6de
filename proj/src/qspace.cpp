#include "localops/qspace.hpp"

#include <cmath>

#include "localops/eig.hpp"
#include "localops/errors.hpp"
#include "localops/tensor.hpp"

namespace localops {

std::vector<ComplexMatrix> hermitian_basis(std::size_t d) {
    std::vector<ComplexMatrix> out;
    out.reserve(d * d);
    for (std::size_t i = 0; i < d; ++i) {
        ComplexMatrix m(d, d);
        m.at(i, i) = 1.0;
        out.push_back(std::move(m));
    }
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            ComplexMatrix sym(d, d);
            sym.at(i, j) = s;
            sym.at(j, i) = s;
            out.push_back(std::move(sym));
            ComplexMatrix asym(d, d);
            asym.at(i, j) = cplx(0.0, s);
            asym.at(j, i) = cplx(0.0, -s);
            out.push_back(std::move(asym));
        }
    return out;
}

std::vector<ComplexMatrix> gram_schmidt(const std::vector<ComplexMatrix>& input,
                                        double drop_tol) {
    std::vector<ComplexMatrix> out;
    for (const auto& raw : input) {
        ComplexMatrix v = raw;
        const double orig = fro_norm(v);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& u : out) v -= u * hs_inner(u, v);
        const double norm = fro_norm(v);
        if (norm <= drop_tol * std::max(1.0, orig)) continue;
        out.push_back(v * cplx(1.0 / norm, 0.0));
    }
    return out;
}

std::size_t q_dim(PartyDims dims) {
    const std::size_t d = dims.dout * dims.din;
    return d * d - dims.din * dims.din + 1;
}

ComplexMatrix project_onto_Q(const ComplexMatrix& y, PartyDims dims) {
    const std::size_t da = dims.dout, dx = dims.din;
    if (!y.is_square() || y.rows() != da * dx)
        throw usage_error("project_onto_Q: shape does not match party dims");
    FactorShape shape({da, dx});
    ComplexMatrix tr_a = partial_trace(y, shape, SubsystemSelector({0}));
    const cplx full_tr = y.trace();
    ComplexMatrix excess = tr_a - ComplexMatrix::identity(dx) * (full_tr / double(dx));
    return y - kron(ComplexMatrix::identity(da), excess) * cplx(1.0 / double(da), 0.0);
}

QSubspaceBasis q_basis(PartyDims dims) {
    std::vector<ComplexMatrix> projected;
    for (const auto& b : hermitian_basis(dims.dout * dims.din))
        projected.push_back(project_onto_Q(b, dims));
    QSubspaceBasis out;
    out.dims = dims;
    out.elements = gram_schmidt(projected);
    if (out.elements.size() != q_dim(dims))
        throw numerical_error("q_basis: rank does not match the dimension formula");
    return out;
}

ComplexMatrix project_onto_tensor_Q(const ComplexMatrix& x_global, const SystemLayout& layout) {
    layout.validate();
    const std::size_t m = layout.party_count();
    const FactorShape shape = layout.global_shape();
    if (!x_global.is_square() || x_global.rows() != shape.total())
        throw usage_error("project_onto_tensor_Q: shape mismatch");

    ComplexMatrix cur = x_global;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t da = layout.parties[i].dout;
        const std::size_t dx = layout.parties[i].din;
        const std::size_t rest = shape.total() / (da * dx);

        // Bring the party block to the front: [A_i, X_i, everything else].
        std::vector<std::size_t> perm = {i, m + i};
        for (std::size_t f = 0; f < 2 * m; ++f)
            if (f != i && f != m + i) perm.push_back(f);
        ComplexMatrix fronted = permute_subsystems(cur, shape, perm);

        // Single-party projection with a spectator factor on the right.
        FactorShape coarse({da, dx * rest});
        ComplexMatrix tr_a = partial_trace(fronted, coarse, SubsystemSelector({0}));
        FactorShape coarse2({dx, rest});
        ComplexMatrix tr_ax = partial_trace(tr_a, coarse2, SubsystemSelector({0}));
        ComplexMatrix excess =
            tr_a - kron(ComplexMatrix::identity(dx), tr_ax) * cplx(1.0 / double(dx), 0.0);
        fronted -= kron(ComplexMatrix::identity(da), excess) * cplx(1.0 / double(da), 0.0);

        cur = permute_subsystems(fronted, permuted_shape(shape, perm),
                                 inverse_permutation(perm));
    }
    return cur;
}

double k_marginal_residual(const ComplexMatrix& x_global, const SystemLayout& layout,
                           std::uint32_t k_mask) {
    layout.validate();
    const std::size_t m = layout.party_count();
    if (m > 31 || k_mask == 0 || k_mask >= (1u << m))
        throw usage_error("k_marginal_residual: bad party subset");
    const FactorShape shape = layout.global_shape();
    if (!x_global.is_square() || x_global.rows() != shape.total())
        throw usage_error("k_marginal_residual: shape mismatch");

    std::vector<std::size_t> traced_a;
    for (std::size_t i = 0; i < m; ++i)
        if ((k_mask >> i) & 1u) traced_a.push_back(i);
    ComplexMatrix t = partial_trace(x_global, shape, SubsystemSelector(traced_a));

    // Factors of t: [A_j for j not in K ..., X_0 ... X_{m-1}].
    FactorShape t_shape;
    const std::size_t r = m - traced_a.size();
    for (std::size_t i = 0; i < m; ++i)
        if (!((k_mask >> i) & 1u)) t_shape.dims.push_back(layout.parties[i].dout);
    for (std::size_t i = 0; i < m; ++i) t_shape.dims.push_back(layout.parties[i].din);

    // Move the K input factors to the rear.
    std::vector<std::size_t> perm;
    for (std::size_t f = 0; f < r; ++f) perm.push_back(f);
    for (std::size_t i = 0; i < m; ++i)
        if (!((k_mask >> i) & 1u)) perm.push_back(r + i);
    std::size_t d_xk = 1;
    for (std::size_t i = 0; i < m; ++i)
        if ((k_mask >> i) & 1u) {
            perm.push_back(r + i);
            d_xk *= layout.parties[i].din;
        }
    ComplexMatrix tp = permute_subsystems(t, t_shape, perm);

    const std::size_t lead = tp.rows() / d_xk;
    ComplexMatrix q_hat = partial_trace(tp, FactorShape({lead, d_xk}), SubsystemSelector({1}));
    ComplexMatrix model =
        kron(q_hat * cplx(1.0 / double(d_xk), 0.0), ComplexMatrix::identity(d_xk));
    return fro_norm(tp - model);
}

MembershipReport in_tensor_Q(const ComplexMatrix& x_global, const SystemLayout& layout,
                             double tol) {
    MembershipReport rep;
    rep.projection_residual = fro_norm(x_global - project_onto_tensor_Q(x_global, layout));

    const std::size_t m = layout.party_count();
    rep.constraint_residual = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
        const double res = k_marginal_residual(x_global, layout, mask);
        rep.per_constraint.push_back(res);
        rep.constraint_residual = std::max(rep.constraint_residual, res);
    }

    const bool proj_ok = rep.projection_residual <= tol;
    const bool cons_ok = rep.constraint_residual <= tol;
    if (proj_ok == cons_ok) {
        rep.member = proj_ok;
    } else {
        const double worst = std::max(rep.projection_residual, rep.constraint_residual);
        if (worst > 10.0 * tol)
            throw numerical_error("in_tensor_Q: projection and constraint tests disagree");
        rep.member = false;
        rep.borderline = true;
    }
    return rep;
}

BallParameters ball_parameters(const SystemLayout& layout) {
    layout.validate();
    BallParameters bp;
    for (const auto& p : layout.parties) bp.q_dims.push_back(q_dim(p));
    bp.n = 1;
    for (auto d : bp.q_dims) bp.n *= d;
    const double m = double(layout.party_count());
    bp.k = std::pow(2.0, m - 1.0) * std::sqrt(double(bp.n)) * double(bp.n + 1);
    bp.radius_unnormalized = 1.0 / bp.k;
    bp.radius_normalized = 1.0 / (bp.k * double(layout.dout_total()));
    return bp;
}

} // namespace localops
