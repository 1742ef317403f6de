#include "localops/witness.hpp"

#include <algorithm>
#include <cmath>

#include "localops/eig.hpp"
#include "localops/errors.hpp"
#include "localops/games.hpp"

namespace localops {

double functional_value(const ComplexMatrix& h, const ComplexMatrix& x) {
    if (!h.is_square() || !x.is_square() || h.rows() != x.rows())
        throw usage_error("functional_value: dimension mismatch");
    cplx v = hs_inner(h, x);
    double scale = std::max(1.0, fro_norm(h) * fro_norm(x));
    bool hermitian_pair = h.hermiticity_defect() <= 1e-8 * std::max(1.0, fro_norm(h)) &&
                          x.hermiticity_defect() <= 1e-8 * std::max(1.0, fro_norm(x));
    if (hermitian_pair && std::abs(v.imag()) > 1e-7 * scale)
        throw numerical_error("functional_value: Hermitian pairing has a visible imaginary part");
    return v.real();
}

AuditResult audit_positivity_on_cone(const ComplexMatrix& h_global, const SystemLayout& layout,
                                     const AuditConfig& config) {
    layout.validate();
    if (layout.party_count() != 2)
        throw usage_error("audit_positivity_on_cone: exactly two parties are supported");
    if (!h_global.is_square() || h_global.rows() != layout.choi_dim())
        throw usage_error("audit_positivity_on_cone: dimension mismatch with layout");

    // Minimizing <H, .> over the product slice is maximizing <-H, .>; share
    // dimension one restricts the strategy search to exactly that slice.
    StrategySearchConfig search;
    search.env_dim = 1;
    search.restarts = config.restarts;
    search.max_outer = config.max_outer;
    search.max_pg_steps = config.max_pg_steps;
    search.convergence_tol = config.convergence_tol;
    search.seed = config.seed;
    search.seed_with_classical = true;

    SeesawResult sw = seesaw_functional(-h_global.hermitian_part(), layout, search);

    AuditResult res;
    res.min_value = -sw.value;
    res.arg_factors = sw.party_chois;
    return res;
}

Witness certify_non_losr(const ComplexMatrix& h_global, const ChoiOperator& j,
                         const AuditConfig& config, double audit_tol, double margin_tol) {
    j.validate();
    Witness w;
    w.h = h_global.hermitian_part();
    w.audit = audit_positivity_on_cone(w.h, j.layout, config);
    w.value = functional_value(w.h, j.matrix);
    w.margin = std::max(0.0, -w.value);
    w.certifies = w.audit.nonnegative(audit_tol) && w.value < -margin_tol;
    return w;
}

} // namespace localops
