#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "localops/choi.hpp"

namespace localops {

struct NoSignalEntry {
    std::uint32_t k_mask = 0; // bit i set = party i's side is discarded
    double residual = 0.0;
    bool pass = true;
};

struct NoSignalReport {
    std::vector<NoSignalEntry> entries; // indexed by mask, mask 0 vacuous
    double worst = 0.0;
    bool pass = false;
    std::string method;
};

// Linear marginal constraints: for every nonempty K, discarding the K
// outputs of the Choi matrix must leave something of the form Q (x) I on the
// K inputs.
NoSignalReport check_constraints(const ChoiOperator& j, double tol = 1e-8);

// Behavioral test: inputs agreeing outside K produce outputs agreeing
// outside K.  Checks a full basis of the kernel of the K-input marginal map
// (rank-verified), plus `trials` random input pairs per K.
NoSignalReport check_semantic(const ChoiOperator& j, std::size_t trials = 4,
                              std::uint64_t seed = 0, double tol = 1e-8);

} // namespace localops
