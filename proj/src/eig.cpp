#include "localops/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "localops/errors.hpp"

namespace localops {

double fro_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const auto& v : m.data()) s += std::norm(v);
    return std::sqrt(s);
}

cplx hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw usage_error("hs_inner shape mismatch");
    cplx s(0.0, 0.0);
    const auto& da = a.data();
    const auto& db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) s += std::conj(da[i]) * db[i];
    return s;
}

// Off-diagonal Frobenius mass, the quantity the sweep loop drives down.
static double offdiag_mass(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            s += 2.0 * std::norm(a.at(i, j));
    return std::sqrt(s);
}

EigResult hermitian_eig(const ComplexMatrix& m, double herm_tol) {
    if (!m.is_square()) throw usage_error("hermitian_eig: non-square input");
    const std::size_t n = m.rows();

    const double scale = fro_norm(m);
    if (m.hermiticity_defect() > herm_tol * std::max(1.0, scale))
        throw numerical_error("hermitian_eig: input is not Hermitian within tolerance");

    EigResult out;
    out.vectors = ComplexMatrix::identity(n);
    out.values.assign(n, 0.0);
    if (n == 0) return out;

    ComplexMatrix a = m.hermitian_part();
    ComplexMatrix& v = out.vectors;
    const double target = 1e-12 * scale;

    if (scale == 0.0) return out;

    const int max_sweeps = 100;
    int sweep = 0;
    double off = offdiag_mass(a);
    while (off > target && sweep < max_sweeps) {
        ++sweep;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a.at(p, q);
                const double b = std::abs(apq);
                // Entries this small cannot push the off-diagonal mass
                // above the convergence target; rotating on them only
                // churns rounding error.
                if (2.0 * b * static_cast<double>(n) <= target) continue;

                const cplx phase = apq / b;  // e^{i phi}
                const double app = a.at(p, p).real();
                const double aqq = a.at(q, q).real();
                const double tau = (aqq - app) / (2.0 * b);
                double t;
                if (std::abs(tau) > 1e12) {
                    t = 1.0 / (2.0 * tau);
                } else {
                    const double sgn = (tau >= 0.0) ? 1.0 : -1.0;
                    t = sgn / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Unitary on the (p,q) plane: columns
                //   U[:,p] = ( c, -s e^{-i phi} ),  U[:,q] = ( s, c e^{-i phi} )
                // chosen so that U* A U has a zero (p,q) entry.
                const cplx phc = std::conj(phase);
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const cplx akp = a.at(k, p);
                    const cplx akq = a.at(k, q);
                    const cplx nkp = c * akp - s * phc * akq;
                    const cplx nkq = s * akp + c * phc * akq;
                    a.at(k, p) = nkp;
                    a.at(k, q) = nkq;
                    a.at(p, k) = std::conj(nkp);
                    a.at(q, k) = std::conj(nkq);
                }
                const double napp = c * c * app - 2.0 * c * s * b + s * s * aqq;
                const double naqq = s * s * app + 2.0 * c * s * b + c * c * aqq;
                a.at(p, p) = napp;
                a.at(q, q) = naqq;
                a.at(p, q) = 0.0;
                a.at(q, p) = 0.0;

                for (std::size_t k = 0; k < n; ++k) {
                    const cplx vkp = v.at(k, p);
                    const cplx vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - s * phc * vkq;
                    v.at(k, q) = s * vkp + c * phc * vkq;
                }
            }
        }
        off = offdiag_mass(a);
    }

    if (off > target)
        throw numerical_error("hermitian_eig: Jacobi sweeps did not converge");

    out.sweeps = sweep;
    out.offdiag_residual = off;
    for (std::size_t i = 0; i < n; ++i) out.values[i] = a.at(i, i).real();

    // Sort descending, carrying eigenvector columns along.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return out.values[x] > out.values[y]; });
    std::vector<double> sorted_vals(n);
    ComplexMatrix sorted_vecs(n, n);
    for (std::size_t c2 = 0; c2 < n; ++c2) {
        sorted_vals[c2] = out.values[order[c2]];
        for (std::size_t r = 0; r < n; ++r) sorted_vecs.at(r, c2) = v.at(r, order[c2]);
    }
    out.values = std::move(sorted_vals);
    out.vectors = std::move(sorted_vecs);
    return out;
}

ComplexMatrix eig_reassemble(const EigResult& e) {
    const std::size_t n = e.values.size();
    ComplexMatrix scaled = e.vectors;  // columns scaled by eigenvalues
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) scaled.at(r, c) *= e.values[c];
    return scaled * e.vectors.adjoint();
}

static bool near_hermitian(const ComplexMatrix& m) {
    return m.is_square() &&
           m.hermiticity_defect() <= 1e-10 * std::max(1.0, fro_norm(m));
}

double op_norm(const ComplexMatrix& m) {
    if (near_hermitian(m)) {
        auto e = hermitian_eig(m);
        double worst = 0.0;
        for (double v : e.values) worst = std::max(worst, std::abs(v));
        return worst;
    }
    // Largest singular value via the Gram matrix.
    auto e = hermitian_eig(m.adjoint() * m);
    const double top = e.values.empty() ? 0.0 : std::max(0.0, e.values.front());
    return std::sqrt(top);
}

double trace_norm(const ComplexMatrix& m) {
    if (near_hermitian(m)) {
        auto e = hermitian_eig(m);
        double s = 0.0;
        for (double v : e.values) s += std::abs(v);
        return s;
    }
    auto e = hermitian_eig(m.adjoint() * m);
    double s = 0.0;
    for (double v : e.values) s += std::sqrt(std::max(0.0, v));
    return s;
}

double min_eigenvalue(const ComplexMatrix& m) {
    auto e = hermitian_eig(m.hermitian_part());
    return e.values.empty() ? 0.0 : e.values.back();
}

bool psd_check(const ComplexMatrix& m, double tol) {
    if (!m.is_square()) return false;
    if (m.hermiticity_defect() > std::max(tol, 1e-10 * std::max(1.0, fro_norm(m))))
        return false;
    return min_eigenvalue(m) >= -tol;
}

ComplexMatrix psd_project(const ComplexMatrix& m) {
    auto e = hermitian_eig(m.hermitian_part());
    for (auto& v : e.values) v = std::max(0.0, v);
    return eig_reassemble(e);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
    auto e = hermitian_eig(m.hermitian_part());
    for (auto& v : e.values) v = std::sqrt(std::max(0.0, v));
    return eig_reassemble(e);
}

} // namespace localops
