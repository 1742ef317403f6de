#include "localops/choi.hpp"

#include <cmath>

#include "localops/eig.hpp"
#include "localops/errors.hpp"

namespace localops {

void KrausChannel::validate() const {
    layout.validate();
    if (kraus.empty()) throw usage_error("channel needs at least one Kraus operator");
    for (const auto& k : kraus)
        if (k.rows() != layout.dout_total() || k.cols() != layout.din_total())
            throw usage_error("Kraus operator shape does not match layout");
}

void ChoiOperator::validate() const {
    layout.validate();
    if (!matrix.is_square() || matrix.rows() != layout.choi_dim())
        throw usage_error("Choi matrix shape does not match layout");
}

ChoiOperator choi_of_kraus(const KrausChannel& ch) {
    ch.validate();
    const std::size_t da = ch.layout.dout_total();
    const std::size_t dx = ch.layout.din_total();
    const std::size_t d = da * dx;

    ChoiOperator out;
    out.layout = ch.layout;
    out.matrix = ComplexMatrix(d, d);
    std::vector<cplx> w(d);
    for (const auto& k : ch.kraus) {
        for (std::size_t a = 0; a < da; ++a)
            for (std::size_t i = 0; i < dx; ++i) w[a * dx + i] = k.at(a, i);
        for (std::size_t r = 0; r < d; ++r) {
            if (w[r] == cplx(0.0, 0.0)) continue;
            for (std::size_t c = 0; c < d; ++c)
                out.matrix.at(r, c) += w[r] * std::conj(w[c]);
        }
    }
    return out;
}

KrausChannel kraus_of_choi(const ChoiOperator& j, double threshold) {
    j.validate();
    const std::size_t da = j.layout.dout_total();
    const std::size_t dx = j.layout.din_total();
    auto e = hermitian_eig(j.matrix.hermitian_part());

    KrausChannel out;
    out.layout = j.layout;
    for (std::size_t c = 0; c < e.values.size(); ++c) {
        if (e.values[c] <= threshold) continue;
        const double s = std::sqrt(e.values[c]);
        ComplexMatrix k(da, dx);
        for (std::size_t a = 0; a < da; ++a)
            for (std::size_t i = 0; i < dx; ++i)
                k.at(a, i) = s * e.vectors.at(a * dx + i, c);
        out.kraus.push_back(std::move(k));
    }
    if (out.kraus.empty()) out.kraus.push_back(ComplexMatrix::zero(da, dx));
    return out;
}

ComplexMatrix apply_choi(const ChoiOperator& j, const ComplexMatrix& x) {
    j.validate();
    const std::size_t da = j.layout.dout_total();
    const std::size_t dx = j.layout.din_total();
    if (!x.is_square() || x.rows() != dx)
        throw usage_error("apply_choi: input shape does not match layout");

    ComplexMatrix out(da, da);
    for (std::size_t a = 0; a < da; ++a)
        for (std::size_t b = 0; b < da; ++b) {
            cplx sum(0.0, 0.0);
            for (std::size_t i = 0; i < dx; ++i)
                for (std::size_t k = 0; k < dx; ++k)
                    sum += j.matrix.at(a * dx + i, b * dx + k) * x.at(i, k);
            out.at(a, b) = sum;
        }
    return out;
}

ComplexMatrix apply_kraus(const KrausChannel& ch, const ComplexMatrix& x) {
    ch.validate();
    if (!x.is_square() || x.rows() != ch.layout.din_total())
        throw usage_error("apply_kraus: input shape does not match layout");
    ComplexMatrix out(ch.layout.dout_total(), ch.layout.dout_total());
    for (const auto& k : ch.kraus) out += k * x * k.adjoint();
    return out;
}

CptpReport check_cptp(const ChoiOperator& j, double psd_tol, double tp_tol) {
    j.validate();
    CptpReport rep;
    rep.min_eig = min_eigenvalue(j.matrix);
    rep.cp = j.matrix.hermiticity_defect() <=
                 std::max(psd_tol, 1e-10 * std::max(1.0, fro_norm(j.matrix))) &&
             rep.min_eig >= -psd_tol;

    ComplexMatrix reduced = partial_trace(j.matrix, j.layout.coarse_shape(),
                                          SubsystemSelector({0}));
    rep.tp_residual = fro_norm(reduced - ComplexMatrix::identity(j.layout.din_total()));
    rep.tp = rep.tp_residual <= tp_tol;
    return rep;
}

bool is_cp(const ChoiOperator& j, double psd_tol) { return check_cptp(j, psd_tol).cp; }
bool is_tp(const ChoiOperator& j, double tp_tol) { return check_cptp(j, 1e-9, tp_tol).tp; }

ChoiOperator product_choi(const std::vector<ChoiOperator>& parts) {
    if (parts.empty()) throw usage_error("product_choi needs at least one part");
    SystemLayout joint;
    std::vector<ComplexMatrix> grouped;
    for (const auto& p : parts) {
        p.validate();
        if (p.layout.party_count() != 1)
            throw usage_error("product_choi expects single-party parts");
        joint.parties.push_back(p.layout.parties[0]);
        grouped.push_back(p.matrix);  // single party: global == grouped
    }
    ChoiOperator out;
    out.layout = joint;
    out.matrix = to_global(kron_all(grouped), joint);
    return out;
}

ComplexMatrix restrict_by_state(const ComplexMatrix& j_psi, std::size_t d_a,
                                std::size_t d_x, std::size_t d_e,
                                const ComplexMatrix& z) {
    const std::size_t d = d_a * d_x * d_e;
    if (!j_psi.is_square() || j_psi.rows() != d)
        throw usage_error("restrict_by_state: Choi shape mismatch");
    if (!z.is_square() || z.rows() != d_e)
        throw usage_error("restrict_by_state: state shape mismatch");

    // out[(u),(v)] = sum_{e,g} Z[g][e] J[(u,g),(v,e)] over the trailing
    // environment factor, which is exactly Tr_E[(I (x) Z^T) J].
    const std::size_t dax = d_a * d_x;
    ComplexMatrix out(dax, dax);
    for (std::size_t u = 0; u < dax; ++u)
        for (std::size_t v = 0; v < dax; ++v) {
            cplx sum(0.0, 0.0);
            for (std::size_t g = 0; g < d_e; ++g)
                for (std::size_t e = 0; e < d_e; ++e)
                    sum += z.at(g, e) * j_psi.at(u * d_e + g, v * d_e + e);
            out.at(u, v) = sum;
        }
    return out;
}

ComplexMatrix functional_on_leading_block(const ComplexMatrix& h, const ComplexMatrix& m,
                                          std::size_t d_lead, std::size_t d_rest) {
    if (!h.is_square() || h.rows() != d_lead)
        throw usage_error("functional_on_leading_block: functional shape mismatch");
    if (!m.is_square() || m.rows() != d_lead * d_rest)
        throw usage_error("functional_on_leading_block: operand shape mismatch");
    ComplexMatrix out(d_rest, d_rest);
    for (std::size_t e = 0; e < d_rest; ++e)
        for (std::size_t f = 0; f < d_rest; ++f) {
            cplx sum(0.0, 0.0);
            for (std::size_t u = 0; u < d_lead; ++u)
                for (std::size_t v = 0; v < d_lead; ++v)
                    sum += std::conj(h.at(u, v)) * m.at(u * d_rest + e, v * d_rest + f);
            out.at(e, f) = sum;
        }
    return out;
}

double PairingCheck::residual() const { return std::abs(direct - via_environment); }

PairingCheck functional_pairing_check(const ComplexMatrix& h, const ComplexMatrix& j_psi,
                                      std::size_t d_a, std::size_t d_x, std::size_t d_e,
                                      const ComplexMatrix& z) {
    PairingCheck out;
    ComplexMatrix j_lambda = restrict_by_state(j_psi, d_a, d_x, d_e, z);
    out.direct = hs_inner(h, j_lambda);
    ComplexMatrix on_env = functional_on_leading_block(h, j_psi, d_a * d_x, d_e);
    out.via_environment = hs_inner(z.conj(), on_env);
    return out;
}

KrausChannel random_cptp(const SystemLayout& layout, std::size_t rank, RandomSource& rng) {
    layout.validate();
    const std::size_t din = layout.din_total();
    const std::size_t dout = layout.dout_total();
    if (rank == 0 || dout * rank < din)
        throw usage_error("random_cptp: rank too small for an isometry");

    ComplexMatrix v = rng.isometry(dout * rank, din);
    KrausChannel out;
    out.layout = layout;
    for (std::size_t r = 0; r < rank; ++r) {
        ComplexMatrix k(dout, din);
        for (std::size_t a = 0; a < dout; ++a)
            for (std::size_t i = 0; i < din; ++i) k.at(a, i) = v.at(r * dout + a, i);
        out.kraus.push_back(std::move(k));
    }
    return out;
}

} // namespace localops
