#pragma once

#include <cstdint>
#include <vector>

#include "localops/choi.hpp"
#include "localops/complex_matrix.hpp"
#include "localops/layout.hpp"

namespace localops {

// Re <H, X> for a Hermitian functional against a Hermitian operator; a
// visible imaginary part flags numerical trouble.
double functional_value(const ComplexMatrix& h, const ComplexMatrix& x);

struct AuditConfig {
    std::size_t restarts = 50;
    std::size_t max_outer = 40;
    std::size_t max_pg_steps = 120;
    double convergence_tol = 1e-7;
    std::uint64_t seed = 7;
};

struct AuditResult {
    double min_value = 0.0;                // lowest slice value found
    std::vector<ComplexMatrix> arg_factors; // per-party Chois achieving it
    bool nonnegative(double audit_tol = 1e-6) const { return min_value >= -audit_tol; }
};

// Heuristic minimum of <H, P_1 (x) P_2> over per-party channel Chois (the
// trace-din slice of each marginal cone, so scaling covers the whole cone).
// The reported minimum is achieved by the returned factors, hence an upper
// bound on the true minimum.
AuditResult audit_positivity_on_cone(const ComplexMatrix& h_global, const SystemLayout& layout,
                                     const AuditConfig& config = {});

struct Witness {
    ComplexMatrix h;
    AuditResult audit;
    double value = 0.0;  // <H, J>
    double margin = 0.0; // -value when negative
    bool certifies = false;
};

// A functional certifies when the audit keeps it nonnegative on the product
// cone while the channel's Choi pairs strictly negative.
Witness certify_non_losr(const ComplexMatrix& h_global, const ChoiOperator& j,
                         const AuditConfig& config = {}, double audit_tol = 1e-6,
                         double margin_tol = 1e-8);

} // namespace localops
