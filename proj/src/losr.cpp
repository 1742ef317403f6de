#include "localops/losr.hpp"

#include <cmath>

#include "localops/eig.hpp"
#include "localops/errors.hpp"
#include "localops/qspace.hpp"
#include "localops/tensor.hpp"

namespace localops {

namespace {

constexpr double kDropTol = 1e-12;

} // namespace

SeparableCertificate ball_certificate(const ComplexMatrix& a_global, const SystemLayout& layout,
                                      double membership_tol) {
    layout.validate();
    const std::size_t d = layout.choi_dim();
    if (!a_global.is_square() || a_global.rows() != d)
        throw usage_error("ball_certificate: shape mismatch");

    const double a_fro = fro_norm(a_global);
    const BallParameters bp = ball_parameters(layout);
    if (bp.k * a_fro > 1.0 + 1e-12)
        throw contract_error("ball_certificate: ||A||_F exceeds the ball radius 1/k");

    // Membership and hermiticity are enforced inside identity_minus_any.
    SeparableCertificate cert = identity_minus_any(a_global, layout, CertSpace::q_subspace,
                                                   membership_tol);
    const double margin = 1.0 - bp.k * a_fro;
    if (margin > kDropTol) {
        CertTerm id_term;
        id_term.weight = margin;
        for (const auto& p : layout.parties)
            id_term.factors.push_back(ComplexMatrix::identity(p.dout * p.din));
        cert.terms.push_back(std::move(id_term));
    }
    cert.target = ComplexMatrix::identity(d) - to_grouped(a_global, layout);
    return cert;
}

ChoiOperator LosrForm::mixture_choi() const {
    layout.validate();
    const std::size_t d = layout.choi_dim();
    ComplexMatrix sum = ComplexMatrix::zero(d, d);
    for (const auto& term : terms) {
        std::vector<ChoiOperator> parts;
        for (const auto& ch : term.channels) parts.push_back(choi_of_kraus(ch));
        sum += product_choi(parts).matrix * cplx(term.prob, 0.0);
    }
    return ChoiOperator{layout, std::move(sum)};
}

LosrForm certificate_to_losr(const SeparableCertificate& cert, double tol) {
    CertificateReport rep = verify_certificate(cert, tol);
    if (!rep.pass)
        throw contract_error("certificate_to_losr: input certificate does not verify");

    const SystemLayout& layout = cert.layout;
    const std::size_t m = layout.party_count();
    const std::size_t d_x = layout.din_total();

    LosrForm form;
    form.layout = layout;
    std::vector<double> raw;
    for (const auto& term : cert.terms) {
        LosrTerm out_term;
        double scale = term.weight;
        bool degenerate = false;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& f = term.factors[i];
            const PartyDims p = layout.parties[i];
            const double lambda = f.trace().real() / double(p.din);
            if (lambda <= kDropTol * std::max(1.0, fro_norm(f))) {
                // PSD with vanishing marginal weight means the factor is zero.
                if (fro_norm(f) > tol * double(p.din))
                    throw numerical_error("certificate_to_losr: factor has zero trace but "
                                          "nonzero norm");
                degenerate = true;
                break;
            }
            ComplexMatrix tr_a =
                partial_trace(f, FactorShape({p.dout, p.din}), SubsystemSelector({0}));
            if (fro_norm(tr_a - ComplexMatrix::identity(p.din) * cplx(lambda, 0.0)) >
                tol * std::max(1.0, fro_norm(f)))
                throw contract_error("certificate_to_losr: factor marginal is not "
                                     "proportional to the identity");
            ComplexMatrix choi = f * cplx(1.0 / lambda, 0.0);
            out_term.channels.push_back(kraus_of_choi(ChoiOperator{SystemLayout{{p}}, choi}));
            scale *= lambda;
        }
        if (degenerate || scale <= 0.0) continue;
        out_term.prob = scale;
        raw.push_back(scale);
        form.terms.push_back(std::move(out_term));
    }

    double z = 0.0;
    for (double r : raw) z += r;
    if (z <= kDropTol)
        throw contract_error("certificate_to_losr: certificate reassembles to zero");

    // The target scaled by 1/z must be trace preserving; given the factor
    // marginals above this is a consistency check on the reassembly.
    ComplexMatrix target_global = to_global(cert.target, layout);
    ComplexMatrix marginal =
        partial_trace(target_global, layout.coarse_shape(), SubsystemSelector({0}));
    const double tp_residual =
        fro_norm(marginal * cplx(1.0 / z, 0.0) - ComplexMatrix::identity(d_x));
    if (tp_residual > tol * std::max(1.0, fro_norm(marginal) / z))
        throw contract_error("certificate_to_losr: target is not trace preserving after "
                             "normalization");

    for (auto& term : form.terms) term.prob /= z;
    form.normalization = z;
    return form;
}

ComplexMatrix LosrRealization::sigma() const {
    const std::size_t m = layout.party_count();
    std::size_t dim = 1;
    for (std::size_t i = 0; i < m; ++i) dim *= env_dim;
    ComplexMatrix s = ComplexMatrix::zero(dim, dim);
    for (std::size_t j = 0; j < sigma_diag.size(); ++j) {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < m; ++i) idx = idx * env_dim + j;
        s.at(idx, idx) = sigma_diag[j];
    }
    return s;
}

LosrRealization realize_shared_randomness(const LosrForm& form) {
    form.layout.validate();
    const std::size_t m = form.layout.party_count();
    const std::size_t t = form.terms.size();
    if (t == 0) throw usage_error("realize_shared_randomness: empty mixture");
    for (const auto& term : form.terms)
        if (term.channels.size() != m)
            throw usage_error("realize_shared_randomness: term channel count mismatch");

    LosrRealization out;
    out.layout = form.layout;
    out.env_dim = t;
    for (const auto& term : form.terms) out.sigma_diag.push_back(term.prob);

    for (std::size_t i = 0; i < m; ++i) {
        const PartyDims p = form.layout.parties[i];
        KrausChannel op;
        op.layout = SystemLayout{{PartyDims{p.din * t, p.dout}}};
        for (std::size_t j = 0; j < t; ++j)
            for (const auto& k : form.terms[j].channels[i].kraus) {
                if (k.rows() != p.dout || k.cols() != p.din)
                    throw usage_error("realize_shared_randomness: channel shape mismatch");
                ComplexMatrix lifted = ComplexMatrix::zero(p.dout, p.din * t);
                for (std::size_t a = 0; a < p.dout; ++a)
                    for (std::size_t x = 0; x < p.din; ++x)
                        lifted.at(a, x * t + j) = k.at(a, x);
                op.kraus.push_back(std::move(lifted));
            }
        out.local_ops.push_back(std::move(op));
    }
    return out;
}

ChoiOperator realization_choi(const LosrRealization& realization) {
    const std::size_t m = realization.layout.party_count();
    const std::size_t t = realization.env_dim;
    if (realization.local_ops.size() != m)
        throw usage_error("realization_choi: one local operation per party required");

    std::vector<ChoiOperator> parts;
    for (const auto& op : realization.local_ops) parts.push_back(choi_of_kraus(op));
    ChoiOperator joint = product_choi(parts);

    // Joint factors: [A_1..A_m, X_1, E_1, X_2, E_2, ...]; bring every
    // environment register behind every channel input.
    FactorShape shape;
    for (std::size_t i = 0; i < m; ++i) shape.dims.push_back(realization.layout.parties[i].dout);
    for (std::size_t i = 0; i < m; ++i) {
        shape.dims.push_back(realization.layout.parties[i].din);
        shape.dims.push_back(t);
    }
    std::vector<std::size_t> perm;
    for (std::size_t i = 0; i < m; ++i) perm.push_back(i);
    for (std::size_t i = 0; i < m; ++i) perm.push_back(m + 2 * i);
    for (std::size_t i = 0; i < m; ++i) perm.push_back(m + 2 * i + 1);
    ComplexMatrix j_axe = permute_subsystems(joint.matrix, shape, perm);

    std::size_t d_e = 1;
    for (std::size_t i = 0; i < m; ++i) d_e *= t;
    ComplexMatrix restricted =
        restrict_by_state(j_axe, realization.layout.dout_total(), realization.layout.din_total(),
                          d_e, realization.sigma());
    return ChoiOperator{realization.layout, std::move(restricted)};
}

} // namespace localops
