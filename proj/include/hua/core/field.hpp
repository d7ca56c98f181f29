#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "hua/core/complex_matrix.hpp"
#include "hua/core/polynomial.hpp"
#include "hua/core/wirtinger.hpp"

namespace hua {

/// A twice differentiable complex-valued function of a rows x cols matrix.
/// Either an exact polynomial in the entries and their conjugates, or an
/// opaque evaluator differentiated by finite differences. Opaque fields may
/// carry an analytic Hessian, which then takes precedence over differencing.
class WirtingerField {
public:
    using Evaluator = std::function<Complex(const ComplexMatrix &)>;
    /// Full-coordinate Hessian, (rows*cols) x (rows*cols), row-major indices.
    using HessianFn = std::function<ComplexMatrix(const ComplexMatrix &)>;

    static WirtingerField polynomial(std::size_t rows, std::size_t cols, Polynomial p)
    {
        if (p.vars() != rows * cols) {
            throw ShapeError("polynomial field: " + std::to_string(p.vars()) + " variables for a "
                             + std::to_string(rows) + "x" + std::to_string(cols) + " shape");
        }
        WirtingerField f(rows, cols);
        f.poly_ = std::make_shared<const Polynomial>(std::move(p));
        return f;
    }

    static WirtingerField opaque(std::size_t rows, std::size_t cols, Evaluator eval, HessianFn hessian = {})
    {
        if (!eval) {
            throw std::invalid_argument("opaque field needs an evaluator");
        }
        WirtingerField f(rows, cols);
        f.eval_ = std::move(eval);
        f.hessian_ = std::move(hessian);
        return f;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t arity() const { return rows_ * cols_; }
    bool is_polynomial() const { return poly_ != nullptr; }
    bool has_analytic_hessian() const { return static_cast<bool>(hessian_); }

    const Polynomial &as_polynomial() const
    {
        if (!poly_) {
            throw std::logic_error("field is not an exact polynomial");
        }
        return *poly_;
    }

    Complex operator()(const ComplexMatrix &z) const
    {
        require_shape(z);
        return poly_ ? poly_->evaluate(z) : eval_(z);
    }

    ComplexMatrix analytic_hessian(const ComplexMatrix &z) const
    {
        require_shape(z);
        if (!hessian_) {
            throw std::logic_error("field has no analytic Hessian");
        }
        return hessian_(z);
    }

    void require_shape(const ComplexMatrix &z) const
    {
        if (static_cast<std::size_t>(z.rows()) != rows_ || static_cast<std::size_t>(z.cols()) != cols_) {
            throw ShapeError("field expects " + std::to_string(rows_) + "x" + std::to_string(cols_) + ", got "
                             + std::to_string(z.rows()) + "x" + std::to_string(z.cols()));
        }
    }

private:
    WirtingerField(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols)
    {
        if (rows == 0 || cols == 0) {
            throw ShapeError("field shape must be positive");
        }
    }

    std::size_t rows_;
    std::size_t cols_;
    std::shared_ptr<const Polynomial> poly_;
    Evaluator eval_;
    HessianFn hessian_;
};

/// Full-coordinate complex Hessian H[(j,a),(k,b)] = d^2 u / dz_{ja} d conj(z_{kb}).
/// Exact for polynomial fields and fields with an analytic Hessian; central
/// differences otherwise (the step option is ignored on exact paths).
inline ComplexMatrix wirtinger_hessian(const WirtingerField &u, const ComplexMatrix &z, FdOptions opts = {})
{
    u.require_shape(z);
    if (u.is_polynomial()) {
        return polynomial_hessian(u.as_polynomial(), to_row_major(z));
    }
    if (u.has_analytic_hessian()) {
        return u.analytic_hessian(z);
    }
    return fd_hessian([&u](const ComplexMatrix &x) { return u(x); }, z, opts);
}

/// Hessian with tied-entry reduction for fields on symmetric / antisymmetric matrices.
inline ComplexMatrix wirtinger_hessian(const WirtingerField &u, const ComplexMatrix &z, Symmetry sym, Convention conv,
                                       FdOptions opts = {})
{
    return reduce_hessian(wirtinger_hessian(u, z, opts), static_cast<std::size_t>(z.rows()), sym, conv);
}

/// u(x) + v(x) pointwise; stays exact when both summands are polynomials.
inline WirtingerField operator+(const WirtingerField &u, const WirtingerField &v)
{
    if (u.rows() != v.rows() || u.cols() != v.cols()) {
        throw ShapeError("field sum: shape mismatch");
    }
    if (u.is_polynomial() && v.is_polynomial()) {
        return WirtingerField::polynomial(u.rows(), u.cols(), u.as_polynomial() + v.as_polynomial());
    }
    WirtingerField::HessianFn h;
    if ((u.is_polynomial() || u.has_analytic_hessian()) && (v.is_polynomial() || v.has_analytic_hessian())) {
        h = [u, v](const ComplexMatrix &z) -> ComplexMatrix {
            return wirtinger_hessian(u, z) + wirtinger_hessian(v, z);
        };
    }
    return WirtingerField::opaque(
        u.rows(), u.cols(), [u, v](const ComplexMatrix &z) { return u(z) + v(z); }, h);
}

inline WirtingerField operator*(Complex s, const WirtingerField &u)
{
    if (u.is_polynomial()) {
        return WirtingerField::polynomial(u.rows(), u.cols(), s * u.as_polynomial());
    }
    WirtingerField::HessianFn h;
    if (u.has_analytic_hessian()) {
        h = [u, s](const ComplexMatrix &z) -> ComplexMatrix { return s * u.analytic_hessian(z); };
    }
    return WirtingerField::opaque(
        u.rows(), u.cols(), [u, s](const ComplexMatrix &z) { return s * u(z); }, h);
}

/// Same field with its exact structure hidden, forcing the finite-difference path.
inline WirtingerField as_opaque(const WirtingerField &u)
{
    return WirtingerField::opaque(u.rows(), u.cols(), [u](const ComplexMatrix &z) { return u(z); });
}

} // namespace hua
