#include "localops/sep.hpp"

#include <algorithm>
#include <cmath>

#include "localops/eig.hpp"
#include "localops/errors.hpp"
#include "localops/qspace.hpp"
#include "localops/tensor.hpp"

namespace localops {

namespace {

constexpr double kDropTol = 1e-12;

std::size_t party_block_dim(PartyDims p) { return p.dout * p.din; }

void check_factor_shapes(const SeparableCertificate& cert) {
    const std::size_t m = cert.layout.party_count();
    for (const auto& t : cert.terms) {
        if (t.factors.size() != m)
            throw usage_error("certificate term has wrong number of factors");
        for (std::size_t i = 0; i < m; ++i) {
            const std::size_t d = party_block_dim(cert.layout.parties[i]);
            if (t.factors[i].rows() != d || t.factors[i].cols() != d)
                throw usage_error("certificate factor has wrong shape");
        }
    }
}

double space_residual(const ComplexMatrix& f, PartyDims dims, CertSpace space) {
    double res = f.hermiticity_defect();
    if (space == CertSpace::q_subspace)
        res = std::max(res, fro_norm(f - project_onto_Q(f, dims)));
    return res;
}

// Real coordinates of a hermitian block in the orthonormal party basis.
std::vector<double> party_coordinates(const ComplexMatrix& f,
                                      const std::vector<ComplexMatrix>& basis) {
    std::vector<double> c(basis.size());
    for (std::size_t t = 0; t < basis.size(); ++t) c[t] = hs_inner(basis[t], f).real();
    return c;
}

// Reduced row echelon form in place; returns pivot column of each pivot row.
std::vector<std::size_t> rref(std::vector<std::vector<double>>& a, double pivot_tol) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a[0].size();
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t best = r;
        for (std::size_t i = r + 1; i < rows; ++i)
            if (std::abs(a[i][c]) > std::abs(a[best][c])) best = i;
        if (std::abs(a[best][c]) <= pivot_tol) continue;
        std::swap(a[r], a[best]);
        const double inv = 1.0 / a[r][c];
        for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r) continue;
            const double f = a[i][c];
            if (f == 0.0) continue;
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivot_cols.push_back(c);
        ++r;
    }
    return pivot_cols;
}

SeparableCertificate make_cert(CertSpace space, const SystemLayout& layout) {
    SeparableCertificate cert;
    cert.space = space;
    cert.layout = layout;
    const std::size_t d = layout.choi_dim();
    cert.target = ComplexMatrix::zero(d, d);
    return cert;
}

std::vector<ComplexMatrix> party_identities(const SystemLayout& layout) {
    std::vector<ComplexMatrix> ids;
    for (const auto& p : layout.parties)
        ids.push_back(ComplexMatrix::identity(party_block_dim(p)));
    return ids;
}

// Terms summing to (prod alphas) I - P_1 (x) ... (x) P_m, built recursively:
// one term P_{1..m} (x) S_{m+1} plus the previous terms extended by P_{m+1}
// and by S_{m+1}, where S_i = alpha_i I - P_i.
std::vector<CertTerm> id_minus_product_terms(const std::vector<ComplexMatrix>& parts,
                                             const std::vector<double>& alphas) {
    const std::size_t m = parts.size();
    std::vector<ComplexMatrix> slack;
    for (std::size_t i = 0; i < m; ++i)
        slack.push_back(ComplexMatrix::identity(parts[i].rows()) * cplx(alphas[i], 0.0) -
                        parts[i]);

    std::vector<CertTerm> terms;
    terms.push_back(CertTerm{1.0, {slack[0]}});
    for (std::size_t i = 1; i < m; ++i) {
        std::vector<CertTerm> next;
        CertTerm head;
        head.weight = 1.0;
        for (std::size_t j = 0; j < i; ++j) head.factors.push_back(parts[j]);
        head.factors.push_back(slack[i]);
        next.push_back(std::move(head));
        for (const auto& t : terms) {
            CertTerm ext_p = t;
            ext_p.factors.push_back(parts[i]);
            next.push_back(std::move(ext_p));
            CertTerm ext_s = t;
            ext_s.factors.push_back(slack[i]);
            next.push_back(std::move(ext_s));
        }
        terms = std::move(next);
    }
    return terms;
}

} // namespace

ComplexMatrix SeparableCertificate::reassemble() const {
    const std::size_t d = layout.choi_dim();
    ComplexMatrix sum = ComplexMatrix::zero(d, d);
    for (const auto& t : terms) sum += kron_all(t.factors) * cplx(t.weight, 0.0);
    return sum;
}

CertificateReport verify_certificate(const SeparableCertificate& cert, double tol,
                                     double psd_tol) {
    cert.layout.validate();
    check_factor_shapes(cert);
    const std::size_t d = cert.layout.choi_dim();
    if (cert.target.rows() != d || cert.target.cols() != d)
        throw usage_error("certificate target has wrong shape");

    CertificateReport rep;
    rep.min_weight = cert.terms.empty() ? 0.0 : cert.terms.front().weight;
    for (const auto& t : cert.terms) {
        rep.min_weight = std::min(rep.min_weight, t.weight);
        for (std::size_t i = 0; i < t.factors.size(); ++i) {
            const auto& f = t.factors[i];
            const double scale = std::max(1.0, fro_norm(f));
            const double defect = -std::min(0.0, min_eigenvalue(f));
            rep.worst_psd_defect = std::max(rep.worst_psd_defect, defect / scale);
            rep.worst_space_residual =
                std::max(rep.worst_space_residual,
                         space_residual(f, cert.layout.parties[i], cert.space) / scale);
        }
    }
    const double target_scale = std::max(1.0, fro_norm(cert.target));
    rep.reassembly_residual = fro_norm(cert.reassemble() - cert.target) / target_scale;
    rep.pass = rep.reassembly_residual <= tol && rep.worst_psd_defect <= psd_tol &&
               rep.worst_space_residual <= tol && rep.min_weight >= -kDropTol;
    return rep;
}

std::pair<ComplexMatrix, ComplexMatrix> split_psd(const ComplexMatrix& x) {
    if (!x.is_square()) throw usage_error("split_psd: square input required");
    const double norm = op_norm(x);
    ComplexMatrix scaled_id = ComplexMatrix::identity(x.rows()) * cplx(norm, 0.0);
    return {(scaled_id + x) * cplx(0.5, 0.0), (scaled_id - x) * cplx(0.5, 0.0)};
}

std::size_t space_dimension(const SystemLayout& layout, CertSpace space) {
    std::size_t n = 1;
    for (const auto& p : layout.parties) {
        const std::size_t d = party_block_dim(p);
        n *= (space == CertSpace::q_subspace) ? q_dim(p) : d * d;
    }
    return n;
}

std::vector<ComplexMatrix> party_basis(PartyDims dims, CertSpace space) {
    if (space == CertSpace::q_subspace) return q_basis(dims).elements;
    return hermitian_basis(party_block_dim(dims));
}

SeparableSplit sep_generate(const ComplexMatrix& x_global, const SystemLayout& layout,
                            CertSpace space, double membership_tol) {
    layout.validate();
    const std::size_t m = layout.party_count();
    const std::size_t d = layout.choi_dim();
    if (!x_global.is_square() || x_global.rows() != d)
        throw usage_error("sep_generate: shape mismatch");

    const double x_fro = fro_norm(x_global);
    const double scale = std::max(1.0, x_fro);
    if (x_global.hermiticity_defect() > membership_tol * scale)
        throw contract_error("sep_generate: input is not hermitian");
    if (space == CertSpace::q_subspace) {
        const double res = fro_norm(x_global - project_onto_tensor_Q(x_global, layout));
        if (res > membership_tol * scale)
            throw contract_error("sep_generate: input is outside the local-marginal subspace");
    }

    // Orthonormal product basis and the PSD split of every basis element.
    std::vector<std::vector<ComplexMatrix>> bases(m);
    std::vector<std::vector<std::pair<ComplexMatrix, ComplexMatrix>>> splits(m);
    for (std::size_t i = 0; i < m; ++i) {
        bases[i] = party_basis(layout.parties[i], space);
        for (const auto& b : bases[i]) splits[i].push_back(split_psd(b));
    }

    const ComplexMatrix x_grouped = to_grouped(x_global, layout);
    SeparableSplit out;
    out.plus = make_cert(space, layout);
    out.minus = make_cert(space, layout);

    // Walk all basis multi-indices; expand each contributing product basis
    // element into its 2^{m-1} plus-parity and 2^{m-1} minus-parity products.
    std::vector<std::size_t> idx(m, 0);
    for (;;) {
        std::vector<ComplexMatrix> element;
        for (std::size_t i = 0; i < m; ++i) element.push_back(bases[i][idx[i]]);
        const double coeff = hs_inner(kron_all(element), x_grouped).real();
        if (std::abs(coeff) > kDropTol * scale) {
            const double w = std::abs(coeff);
            for (std::size_t signs = 0; signs < (std::size_t(1) << m); ++signs) {
                CertTerm t;
                t.weight = w;
                bool parity = false;
                for (std::size_t i = 0; i < m; ++i) {
                    const bool neg = (signs >> i) & 1u;
                    parity ^= neg;
                    const auto& s = splits[i][idx[i]];
                    t.factors.push_back(neg ? s.second : s.first);
                }
                const bool plus_side = (coeff > 0.0) ? !parity : parity;
                (plus_side ? out.plus : out.minus).terms.push_back(std::move(t));
            }
        }
        std::size_t i = 0;
        while (i < m && ++idx[i] == bases[i].size()) idx[i++] = 0;
        if (i == m) break;
    }

    out.plus.target = out.plus.reassemble();
    out.minus.target = out.minus.reassemble();
    const double n = double(space_dimension(layout, space));
    out.norm_bound = std::pow(2.0, double(m) - 1.0) * std::sqrt(n) * x_fro;
    out.plus_norm = op_norm(out.plus.target);
    out.minus_norm = op_norm(out.minus.target);
    return out;
}

SeparableCertificate caratheodory_reduce(const SeparableCertificate& cert) {
    cert.layout.validate();
    check_factor_shapes(cert);
    const std::size_t m = cert.layout.party_count();
    const std::size_t n = space_dimension(cert.layout, cert.space);

    std::vector<std::vector<ComplexMatrix>> bases(m);
    for (std::size_t i = 0; i < m; ++i) bases[i] = party_basis(cert.layout.parties[i], cert.space);

    // Coordinate vector of each product term (tensor of per-party
    // coordinates) plus an all-ones row so total weight is preserved.
    auto term_column = [&](const CertTerm& t) {
        std::vector<double> col = party_coordinates(t.factors[0], bases[0]);
        for (std::size_t i = 1; i < m; ++i) {
            std::vector<double> c = party_coordinates(t.factors[i], bases[i]);
            std::vector<double> next;
            next.reserve(col.size() * c.size());
            for (double a : col)
                for (double b : c) next.push_back(a * b);
            col = std::move(next);
        }
        col.push_back(1.0);
        return col;
    };

    std::vector<CertTerm> terms = cert.terms;
    std::vector<double> weights;
    for (const auto& t : terms) {
        if (t.weight < -kDropTol) throw contract_error("caratheodory_reduce: negative weight");
        weights.push_back(std::max(0.0, t.weight));
    }

    while (terms.size() > 1) {
        const std::size_t cols = terms.size();
        std::vector<std::vector<double>> a(n + 1, std::vector<double>(cols));
        double max_abs = 1.0;
        for (std::size_t j = 0; j < cols; ++j) {
            std::vector<double> col = term_column(terms[j]);
            for (std::size_t r = 0; r <= n; ++r) {
                a[r][j] = col[r];
                max_abs = std::max(max_abs, std::abs(col[r]));
            }
        }
        std::vector<std::size_t> pivots = rref(a, 1e-10 * max_abs);
        if (pivots.size() == cols) break; // full column rank: nothing to remove

        // First free column gives a null vector of the coordinate matrix.
        std::vector<bool> is_pivot(cols, false);
        for (std::size_t p : pivots) is_pivot[p] = true;
        std::size_t free_col = cols;
        for (std::size_t j = 0; j < cols; ++j)
            if (!is_pivot[j]) { free_col = j; break; }

        std::vector<double> mu(cols, 0.0);
        mu[free_col] = 1.0;
        for (std::size_t r = 0; r < pivots.size(); ++r) mu[pivots[r]] = -a[r][free_col];

        double mu_max = 0.0;
        for (double v : mu) mu_max = std::max(mu_max, std::abs(v));
        bool has_positive = false;
        for (double v : mu)
            if (v > 1e-12 * mu_max) { has_positive = true; break; }
        if (!has_positive)
            for (double& v : mu) v = -v;

        double theta = 0.0;
        std::size_t drop_at = cols;
        bool first = true;
        for (std::size_t j = 0; j < cols; ++j) {
            if (mu[j] <= 1e-12 * mu_max) continue;
            const double ratio = weights[j] / mu[j];
            if (first || ratio < theta) {
                theta = ratio;
                drop_at = j;
                first = false;
            }
        }
        if (drop_at == cols)
            throw numerical_error("caratheodory_reduce: degenerate dependency");

        double w_max = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            weights[j] -= theta * mu[j];
            w_max = std::max(w_max, weights[j]);
        }
        weights[drop_at] = 0.0;

        std::vector<CertTerm> kept;
        std::vector<double> kept_w;
        for (std::size_t j = 0; j < cols; ++j) {
            if (weights[j] <= kDropTol * std::max(1.0, w_max)) continue;
            kept.push_back(terms[j]);
            kept_w.push_back(weights[j]);
        }
        if (kept.size() >= terms.size())
            throw numerical_error("caratheodory_reduce: no progress");
        terms = std::move(kept);
        weights = std::move(kept_w);
    }

    SeparableCertificate out = make_cert(cert.space, cert.layout);
    for (std::size_t j = 0; j < terms.size(); ++j) {
        CertTerm t = terms[j];
        t.weight = weights[j];
        out.terms.push_back(std::move(t));
    }
    out.target = cert.target;
    return out;
}

SeparableCertificate identity_minus_product(const std::vector<ComplexMatrix>& factors,
                                            const SystemLayout& layout, CertSpace space) {
    layout.validate();
    const std::size_t m = layout.party_count();
    if (factors.size() != m) throw usage_error("identity_minus_product: factor count mismatch");

    std::vector<double> alphas;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& f = factors[i];
        const std::size_t d = party_block_dim(layout.parties[i]);
        if (f.rows() != d || f.cols() != d)
            throw usage_error("identity_minus_product: factor shape mismatch");
        const double scale = std::max(1.0, fro_norm(f));
        if (min_eigenvalue(f) < -1e-9 * scale)
            throw contract_error("identity_minus_product: factor is not PSD");
        if (space_residual(f, layout.parties[i], space) > 1e-8 * scale)
            throw contract_error("identity_minus_product: factor is outside the space");
        alphas.push_back(op_norm(f));
    }

    SeparableCertificate cert = make_cert(space, layout);
    cert.terms = id_minus_product_terms(factors, alphas);
    double alpha = 1.0;
    for (double a : alphas) alpha *= a;
    cert.target =
        ComplexMatrix::identity(layout.choi_dim()) * cplx(alpha, 0.0) - kron_all(factors);
    return cert;
}

SeparableCertificate identity_minus_separable(const SeparableCertificate& cert) {
    CertificateReport rep = verify_certificate(cert);
    if (!rep.pass)
        throw contract_error("identity_minus_separable: input certificate does not verify");
    const std::size_t n = space_dimension(cert.layout, cert.space);
    const std::size_t d = cert.layout.choi_dim();
    const double q_norm = op_norm(cert.target);

    SeparableCertificate reduced = caratheodory_reduce(cert);
    if (reduced.terms.size() > n + 1)
        throw numerical_error("identity_minus_separable: reduction left too many terms");

    SeparableCertificate out = make_cert(cert.space, cert.layout);
    const std::vector<ComplexMatrix> ids = party_identities(cert.layout);
    for (const auto& t : reduced.terms) {
        // Fold the weight into the first factor, expand alpha_j I - w_j P_j,
        // then top up with (||Q|| - alpha_j) I.
        std::vector<ComplexMatrix> parts = t.factors;
        parts[0] *= cplx(t.weight, 0.0);
        std::vector<double> alphas;
        double alpha = 1.0;
        for (const auto& f : parts) {
            alphas.push_back(op_norm(f));
            alpha *= alphas.back();
        }
        for (auto& term : id_minus_product_terms(parts, alphas)) out.terms.push_back(term);
        const double top_up = q_norm - alpha;
        if (top_up < -1e-9 * std::max(1.0, q_norm))
            throw numerical_error("identity_minus_separable: term norm exceeds ||Q||");
        if (top_up > kDropTol) out.terms.push_back(CertTerm{top_up, ids});
    }
    const double fill = double(n + 1 - reduced.terms.size()) * q_norm;
    if (fill > kDropTol) out.terms.push_back(CertTerm{fill, ids});

    out.target = ComplexMatrix::identity(d) * cplx(double(n + 1) * q_norm, 0.0) - cert.target;
    return out;
}

SeparableCertificate identity_minus_any(const ComplexMatrix& x_global,
                                        const SystemLayout& layout, CertSpace space,
                                        double membership_tol) {
    SeparableSplit split = sep_generate(x_global, layout, space, membership_tol);
    const std::size_t n = space_dimension(layout, space);
    const std::size_t d = layout.choi_dim();
    const double x_fro = fro_norm(x_global);
    const double beta = split.norm_bound; // 2^{m-1} sqrt(n) ||X||_F

    SeparableCertificate out = make_cert(space, layout);
    if (x_fro > 0.0) {
        SeparableCertificate from_plus = identity_minus_separable(split.plus);
        out.terms = std::move(from_plus.terms);

        const double top_up = double(n + 1) * (beta - split.plus_norm);
        if (top_up < -1e-9 * std::max(1.0, beta))
            throw numerical_error("identity_minus_any: positive part exceeds its norm bound");
        if (top_up > kDropTol)
            out.terms.push_back(CertTerm{top_up, party_identities(layout)});

        for (const auto& t : split.minus.terms) out.terms.push_back(t);
    }

    const double k = double(n + 1) * std::pow(2.0, double(layout.party_count()) - 1.0) *
                     std::sqrt(double(n));
    out.target = ComplexMatrix::identity(d) * cplx(k * x_fro, 0.0) - to_grouped(x_global, layout);
    return out;
}

} // namespace localops
