#ifndef LOCALOPS_COMPLEX_MATRIX_HPP
#define LOCALOPS_COMPLEX_MATRIX_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace localops {

using cplx = std::complex<double>;

// Dense complex matrix with row-major storage. Kept deliberately small:
// the operator dimensions in this toolkit are tiny (products of qubit-scale
// factors), so a flat std::vector with explicit index arithmetic beats any
// heavier abstraction and keeps serialization trivial.
class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zero(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<cplx>& data() { return data_; }
    const std::vector<cplx>& data() const { return data_; }

    ComplexMatrix operator+(const ComplexMatrix& o) const;
    ComplexMatrix operator-(const ComplexMatrix& o) const;
    ComplexMatrix operator*(const ComplexMatrix& o) const;
    ComplexMatrix operator*(cplx s) const;
    ComplexMatrix operator-() const;
    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s);

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;

    cplx trace() const;

    // Largest absolute deviation from the adjoint, zero for exactly
    // Hermitian matrices.
    double hermiticity_defect() const;
    // Averages the matrix with its adjoint.
    ComplexMatrix hermitian_part() const;

private:
    std::size_t rows_, cols_;
    std::vector<cplx> data_;
};

inline ComplexMatrix operator*(cplx s, const ComplexMatrix& m) { return m * s; }
inline ComplexMatrix operator*(double s, const ComplexMatrix& m) { return m * cplx(s, 0.0); }

} // namespace localops

#endif
