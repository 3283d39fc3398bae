#include "causalq/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace causalq {

namespace {

void require_finite(const std::vector<Cx>& data) {
    for (const Cx& v : data) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw std::invalid_argument("matrix entry is not finite");
        }
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Cx(0.0, 0.0)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Cx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw std::invalid_argument("matrix data size does not match rows*cols");
    }
    require_finite(data_);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zero(std::size_t rows, std::size_t cols) {
    return ComplexMatrix(rows, cols);
}

ComplexMatrix ComplexMatrix::outer(const std::vector<Cx>& ket) {
    const std::size_t n = ket.size();
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m.at(i, j) = ket[i] * std::conj(ket[j]);
        }
    }
    return m;
}

ComplexMatrix ComplexMatrix::diag(const std::vector<double>& entries) {
    ComplexMatrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m.at(i, i) = entries[i];
    return m;
}

ComplexMatrix ComplexMatrix::operator+(const ComplexMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("matrix addition shape mismatch");
    }
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + other.data_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator-(const ComplexMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("matrix subtraction shape mismatch");
    }
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - other.data_[i];
    return out;
}

ComplexMatrix ComplexMatrix::operator*(const ComplexMatrix& other) const {
    return matmul(*this, other);
}

ComplexMatrix ComplexMatrix::operator*(Cx scalar) const {
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * scalar;
    return out;
}

ComplexMatrix ComplexMatrix::operator*(double scalar) const {
    return (*this) * Cx(scalar, 0.0);
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul inner dimension mismatch");
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Cx aik = a.at(i, k);
            if (aik == Cx(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out.at(i, j) += aik * b.at(k, j);
            }
        }
    }
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const Cx av = a.at(ar, ac);
            if (av == Cx(0.0, 0.0)) continue;
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    out.at(ar * b.rows() + br, ac * b.cols() + bc) = av * b.at(br, bc);
                }
            }
        }
    }
    return out;
}

ComplexMatrix dagger(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out.at(c, r) = std::conj(m.at(r, c));
        }
    }
    return out;
}

ComplexMatrix transpose(const ComplexMatrix& m) {
    ComplexMatrix out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out.at(c, r) = m.at(r, c);
        }
    }
    return out;
}

ComplexMatrix conjugate(const ComplexMatrix& m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out.at(r, c) = std::conj(m.at(r, c));
        }
    }
    return out;
}

Cx trace(const ComplexMatrix& m) {
    if (!m.is_square()) {
        throw std::invalid_argument("trace of non-square matrix");
    }
    Cx t(0.0, 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) t += m.at(i, i);
    return t;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_abs_diff shape mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) {
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    }
    return worst;
}

double max_abs(const ComplexMatrix& m) {
    double worst = 0.0;
    for (const Cx& v : m.data()) worst = std::max(worst, std::abs(v));
    return worst;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (!m.is_square()) return false;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = r; c < m.cols(); ++c) {
            if (std::abs(m.at(r, c) - std::conj(m.at(c, r))) > tol) return false;
        }
    }
    return true;
}

std::size_t total_dim(const std::vector<SpaceLabel>& spaces) {
    std::size_t d = 1;
    for (const SpaceLabel& s : spaces) d *= s.dim;
    return d;
}

}  // namespace causalq
