#include "doctest.h"

#include <cmath>

#include "localops/eig.hpp"
#include "localops/errors.hpp"
#include "localops/random.hpp"
#include "localops/tensor.hpp"

using namespace localops;

namespace {

ComplexMatrix diag(std::vector<double> v) {
    ComplexMatrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m.at(i, i) = v[i];
    return m;
}

} // namespace

TEST_CASE("eigenvalues of a real symmetric 2x2") {
    ComplexMatrix m(2, 2);
    m.at(0, 0) = 2.0; m.at(0, 1) = 1.0;
    m.at(1, 0) = 1.0; m.at(1, 1) = 2.0;
    auto e = hermitian_eig(m);
    REQUIRE(e.values.size() == 2);
    CHECK(e.values[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fro_norm(eig_reassemble(e) - m) <= 1e-12);
}

TEST_CASE("eigenvalues of a complex Hermitian 2x2") {
    // [[0, -i], [i, 0]] has eigenvalues +1 and -1.
    ComplexMatrix m(2, 2);
    m.at(0, 1) = cplx(0.0, -1.0);
    m.at(1, 0) = cplx(0.0, 1.0);
    auto e = hermitian_eig(m);
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(fro_norm(eig_reassemble(e) - m) <= 1e-12);
}

TEST_CASE("diagonal input returns immediately") {
    ComplexMatrix m = diag({5.0, -1.0, 3.0});
    auto e = hermitian_eig(m);
    CHECK(e.sweeps == 0);
    CHECK(e.values[0] == 5.0);
    CHECK(e.values[1] == 3.0);
    CHECK(e.values[2] == -1.0);
}

TEST_CASE("random Hermitian: reassembly, orthonormality, ordering") {
    RandomSource rng(7101);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t n = 3 + 4 * trial % 30;
        ComplexMatrix m = rng.hermitian(n);
        auto e = hermitian_eig(m);

        CHECK(fro_norm(eig_reassemble(e) - m) <= 1e-9 * std::max(1.0, fro_norm(m)));
        ComplexMatrix gram = e.vectors.adjoint() * e.vectors;
        CHECK(fro_norm(gram - ComplexMatrix::identity(n)) <= 1e-10 * n);
        for (std::size_t i = 0; i + 1 < e.values.size(); ++i)
            CHECK(e.values[i] >= e.values[i + 1]);
        // Eigenvalue sum equals the trace.
        double sum = 0.0;
        for (double v : e.values) sum += v;
        CHECK(sum == doctest::Approx(m.trace().real()).epsilon(1e-10));
    }
}

TEST_CASE("non-Hermitian input is rejected") {
    ComplexMatrix m(2, 2);
    m.at(0, 1) = 1.0;  // strictly upper triangular
    CHECK_THROWS_AS(hermitian_eig(m), numerical_error);
}

TEST_CASE("norms of a fixed indefinite diagonal") {
    ComplexMatrix m = diag({1.0, -2.0});
    CHECK(op_norm(m) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(trace_norm(m) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fro_norm(m) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
    CHECK(min_eigenvalue(m) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("norms of a non-Hermitian nilpotent") {
    ComplexMatrix m(2, 2);
    m.at(0, 1) = 1.0;
    CHECK(op_norm(m) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(trace_norm(m) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fro_norm(m) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("hs_inner is conjugate-linear on the left") {
    RandomSource rng(7102);
    ComplexMatrix a = rng.ginibre(3, 3);
    ComplexMatrix b = rng.ginibre(3, 3);
    const cplx s(0.4, -1.3);
    CHECK(std::abs(hs_inner(a * s, b) - std::conj(s) * hs_inner(a, b)) <= 1e-12);
    CHECK(std::abs(hs_inner(a, b * s) - s * hs_inner(a, b)) <= 1e-12);
    // <A,B> = tr(A* B)
    CHECK(std::abs(hs_inner(a, b) - (a.adjoint() * b).trace()) <= 1e-12);
}

TEST_CASE("psd projection clips negative eigenvalues") {
    ComplexMatrix m = diag({1.0, -2.0});
    ComplexMatrix p = psd_project(m);
    CHECK(fro_norm(p - diag({1.0, 0.0})) <= 1e-12);
    CHECK(psd_check(p));
    CHECK_FALSE(psd_check(m));

    RandomSource rng(7103);
    ComplexMatrix h = rng.hermitian(6);
    ComplexMatrix hp = psd_project(h);
    CHECK(psd_check(hp, 1e-9));
    // Projection is idempotent within tolerance.
    CHECK(fro_norm(psd_project(hp) - hp) <= 1e-9 * std::max(1.0, fro_norm(hp)));
}

TEST_CASE("psd square root squares back") {
    RandomSource rng(7104);
    ComplexMatrix rho = rng.density(5) * cplx(3.0, 0.0);
    ComplexMatrix s = psd_sqrt(rho);
    CHECK(fro_norm(s * s - rho) <= 1e-9);
}

TEST_CASE("jacobi handles tiny and huge scales") {
    ComplexMatrix m(2, 2);
    m.at(0, 0) = 1e-14; m.at(0, 1) = 2e-15;
    m.at(1, 0) = 2e-15; m.at(1, 1) = -1e-14;
    auto e = hermitian_eig(m);
    CHECK(fro_norm(eig_reassemble(e) - m) <= 1e-12 * fro_norm(m) + 1e-300);

    ComplexMatrix big(2, 2);
    big.at(0, 0) = 3e12; big.at(0, 1) = cplx(1e12, -2e12);
    big.at(1, 0) = cplx(1e12, 2e12); big.at(1, 1) = -5e12;
    auto e2 = hermitian_eig(big);
    CHECK(fro_norm(eig_reassemble(e2) - big) <= 1e-9 * fro_norm(big));
}
