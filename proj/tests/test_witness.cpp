#include "doctest.h"

#include <cmath>

#include "localops/canonical.hpp"
#include "localops/choi.hpp"
#include "localops/eig.hpp"
#include "localops/errors.hpp"
#include "localops/random.hpp"
#include "localops/tensor.hpp"
#include "localops/witness.hpp"

using namespace localops;

namespace {

const SystemLayout kTwoQubits({PartyDims{2, 2}, PartyDims{2, 2}});

AuditConfig light_audit(std::size_t restarts = 8) {
    AuditConfig cfg;
    cfg.restarts = restarts;
    cfg.max_outer = 20;
    cfg.max_pg_steps = 80;
    return cfg;
}

} // namespace

TEST_CASE("functional_value matches the trace pairing") {
    RandomSource rng(31);
    ComplexMatrix h = rng.hermitian(3);
    ComplexMatrix x = rng.hermitian(3);
    cplx manual(0.0, 0.0);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) manual += h.at(r, c) * x.at(r, c) * cplx(1.0, 0.0);
    // tr(H X) for Hermitian H equals sum_{rc} conj(H[r][c]) X[r][c].
    CHECK(std::abs(functional_value(h, x) - (h.adjoint() * x).trace().real()) <= 1e-12);
    CHECK_THROWS_AS(functional_value(h, rng.hermitian(4)), usage_error);
}

TEST_CASE("audit of a constant functional is exact") {
    // <-I, P_1 (x) P_2> = -tr = -d_X on the whole slice.
    AuditResult res = audit_positivity_on_cone(-ComplexMatrix::identity(16), kTwoQubits,
                                               light_audit(2));
    CHECK(std::abs(res.min_value - (-4.0)) <= 1e-9);
    REQUIRE(res.arg_factors.size() == 2);
    for (const ComplexMatrix& f : res.arg_factors) {
        CHECK(min_eigenvalue(f) >= -1e-7);
        CHECK(std::abs(f.trace() - cplx(2.0, 0.0)) <= 1e-8);
    }
}

TEST_CASE("audit reports nonnegative minima for positive functionals") {
    RandomSource rng(32);
    ComplexMatrix root = rng.hermitian(16);
    ComplexMatrix psd = root * root.adjoint();
    AuditResult res = audit_positivity_on_cone(psd, kTwoQubits, light_audit(4));
    CHECK(res.min_value >= -1e-8);
}

TEST_CASE("audit shifts linearly with the identity") {
    ComplexMatrix h = chsh_witness();
    AuditConfig cfg = light_audit(12);

    AuditResult base = audit_positivity_on_cone(h, kTwoQubits, cfg);
    CHECK(base.min_value >= -1e-6);
    CHECK(base.min_value <= 1e-3); // the deterministic optimum sits at zero

    const double c = 0.37;
    AuditResult shifted =
        audit_positivity_on_cone(h + ComplexMatrix::identity(16) * cplx(c, 0.0), kTwoQubits, cfg);
    CHECK(std::abs(shifted.min_value - (base.min_value + c * 4.0)) <= 1e-5);
}

TEST_CASE("audit requires a two-party layout") {
    SystemLayout three({PartyDims{2, 2}, PartyDims{2, 2}, PartyDims{2, 2}});
    CHECK_THROWS_AS(audit_positivity_on_cone(ComplexMatrix::identity(64), three, light_audit(1)),
                    usage_error);
}

TEST_CASE("witness certifies the box and clears the local strategies") {
    ComplexMatrix h = chsh_witness();
    AuditConfig cfg = light_audit(12);

    Witness against_box = certify_non_losr(h, choi_of_kraus(pr_box()), cfg);
    CHECK(against_box.certifies);
    CHECK(std::abs(against_box.value - (-0.25)) <= 1e-10);
    CHECK(against_box.margin >= 0.2);
    CHECK(against_box.audit.min_value >= -1e-6);

    Witness against_noise = certify_non_losr(h, choi_of_kraus(completely_noisy(kTwoQubits)), cfg);
    CHECK_FALSE(against_noise.certifies);
    CHECK(against_noise.value > 0.2);
}

TEST_CASE("environment pairing agrees with the direct functional") {
    RandomSource rng(33);
    for (std::size_t trial = 0; trial < 10; ++trial) {
        const std::size_t d_a = 2 + trial % 2;
        const std::size_t d_x = 2;
        const std::size_t d_e = 2 + trial % 3;
        SystemLayout lifted({PartyDims{d_x * d_e, d_a}});
        ComplexMatrix j_psi =
            choi_of_kraus(random_cptp(lifted, d_x * d_e / d_a + 1, rng)).matrix;
        ComplexMatrix z = rng.density(d_e);
        ComplexMatrix h = rng.hermitian(d_a * d_x);

        PairingCheck check = functional_pairing_check(h, j_psi, d_a, d_x, d_e, z);
        CHECK(check.residual() <= 1e-9);

        double via_restrict = functional_value(h, restrict_by_state(j_psi, d_a, d_x, d_e, z));
        CHECK(std::abs(via_restrict - check.direct.real()) <= 1e-9);
    }
}
