#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hua {

using Complex = std::complex<double>;

/// Dense complex matrix. Points of the matrix domains, V(z), W(z,w) and every
/// coefficient tensor live in this type.
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex I_unit{0.0, 1.0};

/// Raised when a matrix is too close to singular for a meaningful inverse.
/// For V(z) and W(z,w) this means z sits (numerically) on the boundary.
class SingularMatrixError : public std::runtime_error {
public:
    explicit SingularMatrixError(const std::string &what) : std::runtime_error(what) {}
};

class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string &what) : std::invalid_argument(what) {}
};

inline ComplexMatrix identity(std::size_t n)
{
    return ComplexMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

/// Builds a matrix from row-major entries.
inline ComplexMatrix from_row_major(std::size_t rows, std::size_t cols, const std::vector<Complex> &entries)
{
    if (rows == 0 || cols == 0) {
        throw ShapeError("matrix dimensions must be positive");
    }
    if (entries.size() != rows * cols) {
        throw ShapeError("entry count " + std::to_string(entries.size()) + " does not match " + std::to_string(rows)
                         + "x" + std::to_string(cols));
    }
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = entries[r * cols + c];
        }
    }
    return m;
}

inline std::vector<Complex> to_row_major(const ComplexMatrix &m)
{
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            out.push_back(m(r, c));
        }
    }
    return out;
}

inline void require_square(const ComplexMatrix &m, const char *who)
{
    if (m.rows() != m.cols()) {
        throw ShapeError(std::string(who) + ": matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols())
                         + ", expected square");
    }
}

/// Determinant by LU with partial pivoting. Singular input gives 0 up to roundoff.
inline Complex det(const ComplexMatrix &m)
{
    require_square(m, "det");
    if (m.rows() == 0) {
        return {1.0, 0.0};
    }
    return m.partialPivLu().determinant();
}

/// Ratio |det M| / prod_i |row_i|. Lies in [0, 1] by Hadamard's inequality and
/// is invariant under row scaling, so it is a scale-free singularity measure.
inline double hadamard_ratio(const ComplexMatrix &m)
{
    require_square(m, "hadamard_ratio");
    double bound = 1.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const double nr = m.row(r).norm();
        if (nr == 0.0) {
            return 0.0;
        }
        bound *= nr;
    }
    return std::abs(det(m)) / bound;
}

inline constexpr double default_singular_floor = 1e-12;

/// Inverse; throws SingularMatrixError when hadamard_ratio(m) < floor.
inline ComplexMatrix inverse(const ComplexMatrix &m, double floor = default_singular_floor)
{
    require_square(m, "inverse");
    const double ratio = hadamard_ratio(m);
    if (!(ratio >= floor)) {
        throw SingularMatrixError("inverse: |det| / Hadamard bound = " + std::to_string(ratio) + " below floor "
                                  + std::to_string(floor));
    }
    return m.partialPivLu().inverse();
}

inline double max_abs(const ComplexMatrix &m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline bool is_symmetric(const ComplexMatrix &m, double tol = 0.0)
{
    return m.rows() == m.cols() && max_abs(m - m.transpose()) <= tol;
}

inline bool is_antisymmetric(const ComplexMatrix &m, double tol = 0.0)
{
    return m.rows() == m.cols() && max_abs(m + m.transpose()) <= tol;
}

/// Largest singular value.
inline double operator_norm(const ComplexMatrix &m)
{
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

} // namespace hua
