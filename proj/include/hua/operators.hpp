#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "hua/core/complex_matrix.hpp"
#include "hua/core/field.hpp"
#include "hua/core/wirtinger.hpp"
#include "hua/domains.hpp"

namespace hua {

enum class OperatorKind { Delta1, Delta2, Delta3, Delta4, BallInvariant, TildeBall };

inline std::string to_string(OperatorKind k)
{
    switch (k) {
    case OperatorKind::Delta1:
        return "Delta1";
    case OperatorKind::Delta2:
        return "Delta2";
    case OperatorKind::Delta3:
        return "Delta3";
    case OperatorKind::Delta4:
        return "Delta4";
    case OperatorKind::BallInvariant:
        return "BallInvariant";
    case OperatorKind::TildeBall:
        return "TildeBall";
    }
    return "?";
}

/// An operator, optionally restricted to its (j,k) component (0-based).
struct OperatorId {
    OperatorKind kind = OperatorKind::Delta1;
    std::optional<std::pair<int, int>> component;

    static OperatorId full(OperatorKind k) { return {k, std::nullopt}; }
    static OperatorId part(OperatorKind k, int j, int l)
    {
        if (k != OperatorKind::Delta1 && k != OperatorKind::Delta2 && k != OperatorKind::Delta3) {
            throw std::invalid_argument("components exist only for Delta1, Delta2, Delta3");
        }
        return {k, std::make_pair(j, l)};
    }
};

/// Coefficient of d^2 / dz_a d conj(z_b), a and b flattened row-major (j, alpha).
using CoefficientTensor = ComplexMatrix;

/// Options for applying an operator to a field.
struct ApplyOptions {
    Convention convention = Convention::independent;
    FdOptions fd{};
};

namespace detail {

inline void require_family(const DomainSpec &spec, OperatorKind k)
{
    bool ok = false;
    switch (k) {
    case OperatorKind::Delta1:
        ok = spec.family == Family::I;
        break;
    case OperatorKind::Delta2:
        ok = spec.family == Family::II;
        break;
    case OperatorKind::Delta3:
        ok = spec.family == Family::III;
        break;
    case OperatorKind::Delta4:
        ok = spec.family == Family::IV;
        break;
    case OperatorKind::BallInvariant:
    case OperatorKind::TildeBall:
        ok = spec.family == Family::I && spec.m == 1;
        break;
    }
    if (!ok) {
        throw std::invalid_argument(to_string(k) + " is not defined on " + spec.name());
    }
}

inline double kron(Eigen::Index a, Eigen::Index b)
{
    return a == b ? 1.0 : 0.0;
}

} // namespace detail

/// V(z) = I - z z*.
inline ComplexMatrix hua_V(const ComplexMatrix &z)
{
    return identity(static_cast<std::size_t>(z.rows())) - z * z.adjoint();
}

/// Coefficient tensor of the operator at z. Full Delta2 and Delta3 carry the
/// 1/4 prefactor; their components are the bare inner sums.
inline CoefficientTensor coefficients(const OperatorId &op, const MatrixPoint &point)
{
    const DomainSpec &spec = point.spec;
    detail::require_family(spec, op.kind);
    const ComplexMatrix &z = point.value;
    const Eigen::Index rows = z.rows();
    const Eigen::Index cols = z.cols();
    const Eigen::Index N = rows * cols;
    CoefficientTensor t = CoefficientTensor::Zero(N, N);

    if (op.component) {
        const auto [cj, ck] = *op.component;
        if (cj < 0 || ck < 0 || cj >= rows || ck >= rows) {
            throw std::out_of_range("component index out of range for " + spec.name());
        }
    }
    auto in_component = [&](Eigen::Index j, Eigen::Index k) {
        return !op.component || (op.component->first == j && op.component->second == k);
    };

    switch (op.kind) {
    case OperatorKind::Delta1: {
        const ComplexMatrix v = hua_V(z);
        // delta_ab - sum_l z_la conj(z_lb)
        const ComplexMatrix vt = identity(static_cast<std::size_t>(cols)) - z.transpose() * z.conjugate();
        for (Eigen::Index j = 0; j < rows; ++j) {
            for (Eigen::Index k = 0; k < rows; ++k) {
                if (!in_component(j, k)) {
                    continue;
                }
                const Complex outer = op.component ? Complex(1.0) : v(j, k);
                for (Eigen::Index a = 0; a < cols; ++a) {
                    for (Eigen::Index b = 0; b < cols; ++b) {
                        t(j * cols + a, k * cols + b) = outer * vt(a, b);
                    }
                }
            }
        }
        break;
    }
    case OperatorKind::Delta2:
    case OperatorKind::Delta3: {
        const ComplexMatrix v = hua_V(z);
        const bool two = op.kind == OperatorKind::Delta2;
        for (Eigen::Index j = 0; j < rows; ++j) {
            for (Eigen::Index k = 0; k < rows; ++k) {
                if (!in_component(j, k)) {
                    continue;
                }
                const Complex outer = op.component ? Complex(1.0) : 0.25 * v(j, k);
                for (Eigen::Index a = 0; a < cols; ++a) {
                    for (Eigen::Index b = 0; b < cols; ++b) {
                        const double weight = two ? 1.0 / ((1.0 - detail::kron(j, a) / 2.0) * (1.0 - detail::kron(k, b) / 2.0))
                                                  : (1.0 - detail::kron(j, a)) * (1.0 - detail::kron(k, b));
                        t(j * cols + a, k * cols + b) = outer * weight * v(a, b);
                    }
                }
            }
        }
        break;
    }
    case OperatorKind::Delta4: {
        Complex s = 0.0;
        for (Eigen::Index j = 0; j < cols; ++j) {
            s += z(0, j) * z(0, j);
        }
        const double r = 1.0 - 2.0 * z.squaredNorm() + std::norm(s);
        for (Eigen::Index j = 0; j < cols; ++j) {
            for (Eigen::Index k = 0; k < cols; ++k) {
                t(j, k) = r * (detail::kron(j, k) - 2.0 * z(0, j) * std::conj(z(0, k)))
                          + 2.0 * (std::conj(z(0, j)) - std::conj(s) * z(0, j)) * (z(0, k) - s * std::conj(z(0, k)));
            }
        }
        break;
    }
    case OperatorKind::BallInvariant: {
        const double rho = z.squaredNorm();
        for (Eigen::Index a = 0; a < cols; ++a) {
            for (Eigen::Index b = 0; b < cols; ++b) {
                t(a, b) = (1.0 - rho) * (detail::kron(a, b) - z(0, a) * std::conj(z(0, b)));
            }
        }
        break;
    }
    case OperatorKind::TildeBall: {
        const double rho = z.squaredNorm();
        for (Eigen::Index a = 0; a < cols; ++a) {
            for (Eigen::Index b = 0; b < cols; ++b) {
                t(a, b) = detail::kron(a, b) - rho * z(0, a) * std::conj(z(0, b));
            }
        }
        break;
    }
    }
    return t;
}

/// sum_ab T[a][b] H[a][b], in row-major order of (a, b).
inline Complex contract(const CoefficientTensor &t, const ComplexMatrix &h)
{
    if (t.rows() != h.rows() || t.cols() != h.cols()) {
        throw ShapeError("contract: tensor and Hessian shapes differ");
    }
    Complex sum = 0.0;
    for (Eigen::Index a = 0; a < t.rows(); ++a) {
        for (Eigen::Index b = 0; b < t.cols(); ++b) {
            sum += t(a, b) * h(a, b);
        }
    }
    return sum;
}

/// Hessian of u at z in the index convention the operators expect.
inline ComplexMatrix operator_hessian(const WirtingerField &u, const MatrixPoint &point, const ApplyOptions &opts = {})
{
    return wirtinger_hessian(u, point.value, point.spec.symmetry(), opts.convention, opts.fd);
}

inline Complex apply(const OperatorId &op, const WirtingerField &u, const MatrixPoint &point,
                     const ApplyOptions &opts = {})
{
    return contract(coefficients(op, point), operator_hessian(u, point, opts));
}

/// |full operator - sum_jk weight_jk * component_jk| with weight V_jk for
/// Delta1 and V_jk / 4 for Delta2, Delta3.
inline double component_sum_check(OperatorKind kind, const WirtingerField &u, const MatrixPoint &point,
                                  const ApplyOptions &opts = {})
{
    if (kind != OperatorKind::Delta1 && kind != OperatorKind::Delta2 && kind != OperatorKind::Delta3) {
        throw std::invalid_argument("component_sum_check needs Delta1, Delta2 or Delta3");
    }
    const ComplexMatrix h = operator_hessian(u, point, opts);
    const ComplexMatrix v = hua_V(point.value);
    const double scale = kind == OperatorKind::Delta1 ? 1.0 : 0.25;
    const Complex whole = contract(coefficients(OperatorId::full(kind), point), h);
    Complex sum = 0.0;
    const auto rows = static_cast<int>(point.value.rows());
    for (int j = 0; j < rows; ++j) {
        for (int k = 0; k < rows; ++k) {
            sum += scale * v(j, k) * contract(coefficients(OperatorId::part(kind, j, k), point), h);
        }
    }
    return std::abs(whole - sum);
}

} // namespace hua
