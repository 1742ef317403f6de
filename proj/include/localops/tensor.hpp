#ifndef LOCALOPS_TENSOR_HPP
#define LOCALOPS_TENSOR_HPP

#include <cstddef>
#include <vector>

#include "localops/complex_matrix.hpp"

namespace localops {

// Dimensions of the tensor factors a square matrix acts on, in order.
// The matrix is indexed row-major over the product of these dimensions.
struct FactorShape {
    std::vector<std::size_t> dims;

    FactorShape() = default;
    explicit FactorShape(std::vector<std::size_t> d) : dims(std::move(d)) {}

    std::size_t count() const { return dims.size(); }
    std::size_t total() const {
        std::size_t t = 1;
        for (auto d : dims) t *= d;
        return t;
    }

    // Flat index of a multi-index, first factor slowest (row-major).
    std::size_t flatten(const std::vector<std::size_t>& multi) const;
    std::vector<std::size_t> unflatten(std::size_t flat) const;
};

// Subset of factor positions, kept sorted and duplicate-free.
struct SubsystemSelector {
    std::vector<std::size_t> which;

    SubsystemSelector() = default;
    explicit SubsystemSelector(std::vector<std::size_t> w);

    bool contains(std::size_t i) const;
    // Positions of shape not selected, in increasing order.
    std::vector<std::size_t> complement(std::size_t factor_count) const;
    void validate(const FactorShape& shape) const;
};

// Kronecker product, row-major convention: (A (x) B)[(i,k),(j,l)] = A[i,j] B[k,l].
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_all(const std::vector<ComplexMatrix>& factors);

// Traces out the selected factors. Implemented by direct multi-index
// arithmetic so the convention is pinned by this file alone.
ComplexMatrix partial_trace(const ComplexMatrix& m, const FactorShape& shape,
                            const SubsystemSelector& traced);

// Reorders tensor factors. perm[l] is the old position of the factor that
// lands at new position l, so the new shape is dims[perm[0]], dims[perm[1]], ...
// Applying perm and then its inverse restores the input exactly.
ComplexMatrix permute_subsystems(const ComplexMatrix& m, const FactorShape& shape,
                                 const std::vector<std::size_t>& perm);

std::vector<std::size_t> inverse_permutation(const std::vector<std::size_t>& perm);

FactorShape permuted_shape(const FactorShape& shape, const std::vector<std::size_t>& perm);

} // namespace localops

#endif
