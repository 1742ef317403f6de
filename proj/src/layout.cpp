#include "localops/layout.hpp"

#include "localops/errors.hpp"

namespace localops {

std::size_t SystemLayout::din_total() const {
    std::size_t t = 1;
    for (const auto& p : parties) t *= p.din;
    return t;
}

std::size_t SystemLayout::dout_total() const {
    std::size_t t = 1;
    for (const auto& p : parties) t *= p.dout;
    return t;
}

FactorShape SystemLayout::global_shape() const {
    FactorShape s;
    for (const auto& p : parties) s.dims.push_back(p.dout);
    for (const auto& p : parties) s.dims.push_back(p.din);
    return s;
}

FactorShape SystemLayout::grouped_shape() const {
    FactorShape s;
    for (const auto& p : parties) {
        s.dims.push_back(p.dout);
        s.dims.push_back(p.din);
    }
    return s;
}

FactorShape SystemLayout::coarse_shape() const {
    return FactorShape({dout_total(), din_total()});
}

std::vector<std::size_t> SystemLayout::global_to_grouped_perm() const {
    const std::size_t m = party_count();
    std::vector<std::size_t> perm(2 * m);
    for (std::size_t i = 0; i < m; ++i) {
        perm[2 * i] = i;          // A_i sits at global position i
        perm[2 * i + 1] = m + i;  // X_i sits at global position m + i
    }
    return perm;
}

std::vector<std::size_t> SystemLayout::grouped_to_global_perm() const {
    return inverse_permutation(global_to_grouped_perm());
}

bool SystemLayout::operator==(const SystemLayout& o) const {
    if (parties.size() != o.parties.size()) return false;
    for (std::size_t i = 0; i < parties.size(); ++i)
        if (parties[i].din != o.parties[i].din || parties[i].dout != o.parties[i].dout)
            return false;
    return true;
}

void SystemLayout::validate() const {
    if (parties.empty()) throw usage_error("layout needs at least one party");
    for (const auto& p : parties)
        if (p.din == 0 || p.dout == 0) throw usage_error("party dimensions must be positive");
}

ComplexMatrix to_grouped(const ComplexMatrix& global_ordered, const SystemLayout& layout) {
    return permute_subsystems(global_ordered, layout.global_shape(),
                              layout.global_to_grouped_perm());
}

ComplexMatrix to_global(const ComplexMatrix& grouped_ordered, const SystemLayout& layout) {
    return permute_subsystems(grouped_ordered, layout.grouped_shape(),
                              layout.grouped_to_global_perm());
}

} // namespace localops
