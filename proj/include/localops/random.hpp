#ifndef LOCALOPS_RANDOM_HPP
#define LOCALOPS_RANDOM_HPP

#include <cstdint>
#include <random>

#include "localops/complex_matrix.hpp"

namespace localops {

// Seeded random source for all stochastic routines. Gaussians come from a
// hand-rolled Box-Muller transform over the raw mt19937_64 stream, so the
// same seed reproduces the same matrices regardless of the standard
// library's distribution internals.
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : gen_(seed) {}

    double uniform();                 // [0, 1)
    double gauss();                   // standard normal
    cplx complex_gauss();             // independent N(0,1) real and imag parts
    std::size_t index(std::size_t n); // uniform over {0, ..., n-1}

    ComplexMatrix ginibre(std::size_t rows, std::size_t cols);
    ComplexMatrix hermitian(std::size_t n);          // GUE-style, unnormalized
    ComplexMatrix unitary(std::size_t n);            // Haar-ish via QR of Ginibre
    ComplexMatrix density(std::size_t n);            // PSD, trace one
    ComplexMatrix projector(std::size_t n, std::size_t rank);

    // Isometry from C^cols into C^rows (rows >= cols), columns orthonormal.
    ComplexMatrix isometry(std::size_t rows, std::size_t cols);

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace localops

#endif
