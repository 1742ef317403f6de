#include "localops/random.hpp"

#include <cmath>

#include "localops/eig.hpp"
#include "localops/errors.hpp"

namespace localops {

double RandomSource::uniform() {
    // 53 bits of the raw stream, the usual double-precision ladder.
    return (gen_() >> 11) * (1.0 / 9007199254740992.0);
}

double RandomSource::gauss() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

cplx RandomSource::complex_gauss() {
    const double re = gauss();
    const double im = gauss();
    return cplx(re, im);
}

std::size_t RandomSource::index(std::size_t n) {
    if (n == 0) throw usage_error("index over empty range");
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

ComplexMatrix RandomSource::ginibre(std::size_t rows, std::size_t cols) {
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = complex_gauss();
    return m;
}

ComplexMatrix RandomSource::hermitian(std::size_t n) {
    ComplexMatrix g = ginibre(n, n);
    return g.hermitian_part();
}

ComplexMatrix RandomSource::isometry(std::size_t rows, std::size_t cols) {
    if (rows < cols) throw usage_error("isometry needs rows >= cols");
    // Modified Gram-Schmidt on Ginibre columns, with one re-orthogonalization
    // pass to keep the columns orthonormal to working precision. Degenerate
    // draws (norm collapse) are retried with fresh randomness.
    ComplexMatrix q(rows, cols);
    for (std::size_t c = 0; c < cols; ++c) {
        for (int attempt = 0;; ++attempt) {
            if (attempt > 32) throw numerical_error("isometry: repeated norm collapse");
            std::vector<cplx> v(rows);
            for (std::size_t r = 0; r < rows; ++r) v[r] = complex_gauss();
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t prev = 0; prev < c; ++prev) {
                    cplx overlap(0.0, 0.0);
                    for (std::size_t r = 0; r < rows; ++r)
                        overlap += std::conj(q.at(r, prev)) * v[r];
                    for (std::size_t r = 0; r < rows; ++r) v[r] -= overlap * q.at(r, prev);
                }
            }
            double norm2 = 0.0;
            for (const auto& x : v) norm2 += std::norm(x);
            if (norm2 < 1e-12) continue;
            const double inv = 1.0 / std::sqrt(norm2);
            for (std::size_t r = 0; r < rows; ++r) q.at(r, c) = v[r] * inv;
            break;
        }
    }
    return q;
}

ComplexMatrix RandomSource::unitary(std::size_t n) { return isometry(n, n); }

ComplexMatrix RandomSource::density(std::size_t n) {
    ComplexMatrix g = ginibre(n, n);
    ComplexMatrix rho = g * g.adjoint();
    const double t = rho.trace().real();
    return rho * cplx(1.0 / t, 0.0);
}

ComplexMatrix RandomSource::projector(std::size_t n, std::size_t rank) {
    if (rank > n) throw usage_error("projector rank exceeds dimension");
    ComplexMatrix v = isometry(n, rank);
    return v * v.adjoint();
}

} // namespace localops
