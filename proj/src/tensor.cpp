#include "localops/tensor.hpp"

#include <algorithm>

#include "localops/errors.hpp"

namespace localops {

std::size_t FactorShape::flatten(const std::vector<std::size_t>& multi) const {
    std::size_t flat = 0;
    for (std::size_t f = 0; f < dims.size(); ++f) flat = flat * dims[f] + multi[f];
    return flat;
}

std::vector<std::size_t> FactorShape::unflatten(std::size_t flat) const {
    std::vector<std::size_t> multi(dims.size(), 0);
    for (std::size_t f = dims.size(); f-- > 0;) {
        multi[f] = flat % dims[f];
        flat /= dims[f];
    }
    return multi;
}

SubsystemSelector::SubsystemSelector(std::vector<std::size_t> w) : which(std::move(w)) {
    std::sort(which.begin(), which.end());
    which.erase(std::unique(which.begin(), which.end()), which.end());
}

bool SubsystemSelector::contains(std::size_t i) const {
    return std::binary_search(which.begin(), which.end(), i);
}

std::vector<std::size_t> SubsystemSelector::complement(std::size_t factor_count) const {
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < factor_count; ++i)
        if (!contains(i)) rest.push_back(i);
    return rest;
}

void SubsystemSelector::validate(const FactorShape& shape) const {
    for (auto i : which)
        if (i >= shape.count()) throw usage_error("subsystem index out of range");
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a.at(i, j);
            if (aij == cplx(0.0, 0.0)) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r.at(i * b.rows() + k, j * b.cols() + l) = aij * b.at(k, l);
        }
    return r;
}

ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors) {
    if (factors.empty()) throw usage_error("kron_all needs at least one factor");
    ComplexMatrix r = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i) r = kron(r, factors[i]);
    return r;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const FactorShape& shape,
                            const SubsystemSelector& traced) {
    if (!m.is_square() || m.rows() != shape.total())
        throw usage_error("partial_trace: matrix does not match shape");
    traced.validate(shape);

    const auto kept = traced.complement(shape.count());
    FactorShape kept_shape, traced_shape;
    for (auto i : kept) kept_shape.dims.push_back(shape.dims[i]);
    for (auto i : traced.which) traced_shape.dims.push_back(shape.dims[i]);

    const std::size_t dk = kept_shape.total();
    const std::size_t dt = traced_shape.total();
    ComplexMatrix r(dk, dk);

    // Strides of each factor in the flat index of the full space.
    std::vector<std::size_t> stride(shape.count(), 1);
    for (std::size_t f = shape.count(); f-- > 1;)
        stride[f - 1] = stride[f] * shape.dims[f];

    std::vector<std::size_t> kept_stride, traced_stride;
    for (auto i : kept) kept_stride.push_back(stride[i]);
    for (auto i : traced.which) traced_stride.push_back(stride[i]);

    // Offset of a sub-multi-index into the full flat index.
    auto offsets = [](const FactorShape& sub, const std::vector<std::size_t>& substride) {
        std::vector<std::size_t> off(sub.total(), 0);
        for (std::size_t v = 0; v < sub.total(); ++v) {
            auto multi = sub.unflatten(v);
            std::size_t o = 0;
            for (std::size_t f = 0; f < multi.size(); ++f) o += multi[f] * substride[f];
            off[v] = o;
        }
        return off;
    };
    const auto kept_off = offsets(kept_shape, kept_stride);
    const auto traced_off = offsets(traced_shape, traced_stride);

    for (std::size_t i = 0; i < dk; ++i)
        for (std::size_t j = 0; j < dk; ++j) {
            cplx sum(0.0, 0.0);
            for (std::size_t t = 0; t < dt; ++t)
                sum += m.at(kept_off[i] + traced_off[t], kept_off[j] + traced_off[t]);
            r.at(i, j) = sum;
        }
    return r;
}

std::vector<std::size_t> inverse_permutation(const std::vector<std::size_t>& perm) {
    std::vector<std::size_t> inv(perm.size());
    for (std::size_t l = 0; l < perm.size(); ++l) inv[perm[l]] = l;
    return inv;
}

FactorShape permuted_shape(const FactorShape& shape, const std::vector<std::size_t>& perm) {
    FactorShape out;
    for (auto p : perm) out.dims.push_back(shape.dims[p]);
    return out;
}

static void validate_permutation(const std::vector<std::size_t>& perm, std::size_t n) {
    if (perm.size() != n) throw usage_error("permutation length mismatch");
    std::vector<bool> seen(n, false);
    for (auto p : perm) {
        if (p >= n || seen[p]) throw usage_error("not a permutation");
        seen[p] = true;
    }
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m, const FactorShape& shape,
                                 const std::vector<std::size_t>& perm) {
    if (!m.is_square() || m.rows() != shape.total())
        throw usage_error("permute_subsystems: matrix does not match shape");
    validate_permutation(perm, shape.count());

    const std::size_t d = shape.total();
    const FactorShape new_shape = permuted_shape(shape, perm);

    // map[v] = flat index in the old ordering of the basis vector whose flat
    // index in the new ordering is v.
    std::vector<std::size_t> map(d);
    for (std::size_t v = 0; v < d; ++v) {
        auto new_multi = new_shape.unflatten(v);
        std::vector<std::size_t> old_multi(shape.count());
        for (std::size_t l = 0; l < perm.size(); ++l) old_multi[perm[l]] = new_multi[l];
        map[v] = shape.flatten(old_multi);
    }

    ComplexMatrix r(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            r.at(i, j) = m.at(map[i], map[j]);
    return r;
}

} // namespace localops
