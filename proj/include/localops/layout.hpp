#ifndef LOCALOPS_LAYOUT_HPP
#define LOCALOPS_LAYOUT_HPP

#include <cstddef>
#include <vector>

#include "localops/tensor.hpp"

namespace localops {

// One party's input dimension (din, the X_i factor) and output dimension
// (dout, the A_i factor).
struct PartyDims {
    std::size_t din = 0;
    std::size_t dout = 0;
};

// Which factor ordering a serialized operator uses. Matrices on the joint
// output/input space carry 2m tensor factors; "global" keeps all outputs
// first (A_1 ... A_m, X_1 ... X_m) while "grouped" interleaves per party
// (A_1, X_1, A_2, X_2, ...). Everything in-memory is global; grouped shows
// up at serialization boundaries and in separable certificates, whose
// factors naturally live on single-party A_i (x) X_i blocks.
enum class Ordering { global, grouped };

struct SystemLayout {
    std::vector<PartyDims> parties;

    SystemLayout() = default;
    explicit SystemLayout(std::vector<PartyDims> p) : parties(std::move(p)) {}

    std::size_t party_count() const { return parties.size(); }
    std::size_t din_total() const;
    std::size_t dout_total() const;
    std::size_t choi_dim() const { return din_total() * dout_total(); }

    // 2m factors, outputs first: [dout_1..dout_m, din_1..din_m].
    FactorShape global_shape() const;
    // 2m factors interleaved: [dout_1, din_1, dout_2, din_2, ...].
    FactorShape grouped_shape() const;
    // Two coarse factors [dout_total, din_total]; enough for whole-block
    // partial traces.
    FactorShape coarse_shape() const;

    std::vector<std::size_t> global_to_grouped_perm() const;
    std::vector<std::size_t> grouped_to_global_perm() const;

    bool operator==(const SystemLayout& o) const;

    void validate() const;
};

ComplexMatrix to_grouped(const ComplexMatrix& global_ordered, const SystemLayout& layout);
ComplexMatrix to_global(const ComplexMatrix& grouped_ordered, const SystemLayout& layout);

} // namespace localops

#endif
