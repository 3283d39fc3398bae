#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace causalq {

using Cx = std::complex<double>;

constexpr double kDefaultTol = 1e-9;

// Dense row-major complex matrix. Sized for few-qubit work (dims <= 64),
// so every operation favors clarity over blocking or vectorization.
class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Cx> data);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zero(std::size_t rows, std::size_t cols);
    // Column vector |ψ⟩⟨ψ| from amplitudes.
    static ComplexMatrix outer(const std::vector<Cx>& ket);
    static ComplexMatrix diag(const std::vector<double>& entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Cx& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Cx& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    const std::vector<Cx>& data() const { return data_; }

    ComplexMatrix operator+(const ComplexMatrix& other) const;
    ComplexMatrix operator-(const ComplexMatrix& other) const;
    ComplexMatrix operator*(const ComplexMatrix& other) const;
    ComplexMatrix operator*(Cx scalar) const;
    ComplexMatrix operator*(double scalar) const;

    bool operator==(const ComplexMatrix& other) const = default;

private:
    std::size_t rows_, cols_;
    std::vector<Cx> data_;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix dagger(const ComplexMatrix& m);
ComplexMatrix transpose(const ComplexMatrix& m);
ComplexMatrix conjugate(const ComplexMatrix& m);
Cx trace(const ComplexMatrix& m);

// max_ij |a_ij - b_ij|; shapes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
// max_ij |m_ij|
double max_abs(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol = kDefaultTol);

// Named tensor factor of a composite space, e.g. {"A_I", 2}.
struct SpaceLabel {
    std::string name;
    std::size_t dim = 0;

    bool operator==(const SpaceLabel& other) const = default;
};

std::size_t total_dim(const std::vector<SpaceLabel>& spaces);

}  // namespace causalq
