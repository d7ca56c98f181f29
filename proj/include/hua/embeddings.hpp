#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hua/core/complex_matrix.hpp"
#include "hua/core/field.hpp"
#include "hua/core/polynomial.hpp"
#include "hua/core/wirtinger.hpp"
#include "hua/domains.hpp"
#include "hua/operators.hpp"

namespace hua {

enum class EmbeddingKind { type_I, type_II, type_III };

inline std::string to_string(EmbeddingKind k)
{
    switch (k) {
    case EmbeddingKind::type_I:
        return "TypeI";
    case EmbeddingKind::type_II:
        return "TypeII";
    case EmbeddingKind::type_III:
        return "TypeIII";
    }
    return "?";
}

/// v / |v|. Intended for vectors with small rational entries.
inline std::vector<Complex> normalized(std::vector<Complex> v)
{
    double norm2 = 0.0;
    for (const auto &x : v) {
        norm2 += std::norm(x);
    }
    if (!(norm2 > 0.0)) {
        throw std::invalid_argument("normalized: zero vector");
    }
    const double s = 1.0 / std::sqrt(norm2);
    for (auto &x : v) {
        x *= s;
    }
    return v;
}

namespace detail {

inline double unitarity_defect(const ComplexMatrix &u)
{
    return max_abs(u.adjoint() * u - identity(static_cast<std::size_t>(u.rows())));
}

inline double squared_norm(const std::vector<Complex> &v)
{
    double s = 0.0;
    for (const auto &x : v) {
        s += std::norm(x);
    }
    return s;
}

/// Entries of U^t z U as linear polynomials in the n^2 entries of z.
inline std::vector<Polynomial> congruence_map(const ComplexMatrix &u)
{
    const auto n = static_cast<std::size_t>(u.rows());
    const std::size_t N = n * n;
    std::vector<Polynomial> out(N, Polynomial(N));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t a = 0; a < n; ++a) {
            Polynomial &e = out[j * n + a];
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t b = 0; b < n; ++b) {
                    const Complex c = u(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j))
                                      * u(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a));
                    if (c != Complex(0.0)) {
                        e += Polynomial::variable(N, k * n + b, c);
                    }
                }
            }
        }
    }
    return out;
}

} // namespace detail

/// A holomorphic map from a ball into a classical domain, kept as exact
/// polynomials in the ball variables (one per matrix entry, row-major).
///   TypeI:   xi in the unit sphere of C^m, z = xi^t lambda in I(m,n), lambda in B_n.
///   TypeII:  U unitary, z = (lambda U)^t (lambda U) in II(n), lambda in B_n.
///   TypeIII: z = [[0, lambda], [-lambda^t, 0]] in III(n), lambda in B_{n-1};
///            with U given, the image is U^t z U.
class BallEmbedding {
public:
    static constexpr double unit_tolerance = 1e-13;

    static BallEmbedding type_I(std::vector<Complex> xi, int n)
    {
        if (xi.empty()) {
            throw std::invalid_argument("TypeI embedding needs a non-empty xi");
        }
        if (std::abs(detail::squared_norm(xi) - 1.0) > unit_tolerance) {
            throw std::invalid_argument("TypeI embedding: xi must be a unit vector");
        }
        BallEmbedding e(EmbeddingKind::type_I, DomainSpec::type_I(static_cast<int>(xi.size()), n),
                        static_cast<std::size_t>(n));
        e.xi_ = std::move(xi);
        const std::size_t m = e.xi_.size();
        const auto d = static_cast<std::size_t>(n);
        for (std::size_t k = 0; k < m; ++k) {
            for (std::size_t a = 0; a < d; ++a) {
                e.map_.push_back(Polynomial::variable(d, a, e.xi_[k]));
            }
        }
        return e;
    }

    static BallEmbedding type_II(ComplexMatrix u)
    {
        if (u.rows() != u.cols() || u.rows() < 1) {
            throw ShapeError("TypeII embedding needs a square U");
        }
        if (detail::unitarity_defect(u) > unit_tolerance * 10) {
            throw std::invalid_argument("TypeII embedding: U must be unitary");
        }
        const auto n = static_cast<std::size_t>(u.rows());
        BallEmbedding e(EmbeddingKind::type_II, DomainSpec::type_II(static_cast<int>(n)), n);
        // x_i = sum_p lambda_p U_pi; z_ij = x_i x_j.
        std::vector<Polynomial> x(n, Polynomial(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t p = 0; p < n; ++p) {
                x[i] += Polynomial::variable(n, p, u(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(i)));
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                e.map_.push_back(x[i] * x[j]);
            }
        }
        e.unitary_ = std::move(u);
        return e;
    }

    static BallEmbedding type_III(int n, std::optional<ComplexMatrix> u = std::nullopt)
    {
        if (n < 2) {
            throw std::invalid_argument("TypeIII embedding needs n >= 2");
        }
        const auto N = static_cast<std::size_t>(n);
        const std::size_t d = N - 1;
        BallEmbedding e(EmbeddingKind::type_III, DomainSpec::type_III(n), d);
        std::vector<Polynomial> corner(N * N, Polynomial(d));
        for (std::size_t p = 1; p < N; ++p) {
            corner[p] = Polynomial::variable(d, p - 1);
            corner[p * N] = Polynomial::variable(d, p - 1, -1.0);
        }
        if (u) {
            if (u->rows() != n || u->cols() != n) {
                throw ShapeError("TypeIII embedding: U must be n x n");
            }
            if (detail::unitarity_defect(*u) > unit_tolerance * 10) {
                throw std::invalid_argument("TypeIII embedding: U must be unitary");
            }
            for (const auto &entry : detail::congruence_map(*u)) {
                e.map_.push_back(entry.compose(corner));
            }
            e.unitary_ = std::move(*u);
        } else {
            e.map_ = std::move(corner);
        }
        return e;
    }

    EmbeddingKind kind() const { return kind_; }
    const DomainSpec &target() const { return target_; }
    /// Dimension of the source ball.
    std::size_t ball_dimension() const { return ball_dim_; }
    const std::vector<Complex> &xi() const { return xi_; }
    const std::optional<ComplexMatrix> &unitary() const { return unitary_; }
    /// Entry polynomials of z(lambda), row-major.
    const std::vector<Polynomial> &map() const { return map_; }

    /// z(lambda) computed directly (exactly (anti)symmetric in floating point).
    ComplexMatrix value(const std::vector<Complex> &lambda) const
    {
        require_ball(lambda);
        const auto rows = static_cast<Eigen::Index>(target_.rows());
        const auto cols = static_cast<Eigen::Index>(target_.cols());
        ComplexMatrix z = ComplexMatrix::Zero(rows, cols);
        switch (kind_) {
        case EmbeddingKind::type_I:
            for (Eigen::Index k = 0; k < rows; ++k) {
                for (Eigen::Index a = 0; a < cols; ++a) {
                    z(k, a) = xi_[static_cast<std::size_t>(k)] * lambda[static_cast<std::size_t>(a)];
                }
            }
            break;
        case EmbeddingKind::type_II: {
            ComplexMatrix l(1, cols);
            for (Eigen::Index p = 0; p < cols; ++p) {
                l(0, p) = lambda[static_cast<std::size_t>(p)];
            }
            const ComplexMatrix x = l * *unitary_;
            for (Eigen::Index i = 0; i < cols; ++i) {
                for (Eigen::Index j = i; j < cols; ++j) {
                    z(i, j) = z(j, i) = x(0, i) * x(0, j);
                }
            }
            break;
        }
        case EmbeddingKind::type_III:
            for (Eigen::Index p = 1; p < cols; ++p) {
                z(0, p) = lambda[static_cast<std::size_t>(p - 1)];
                z(p, 0) = -z(0, p);
            }
            if (unitary_) {
                z = (unitary_->transpose() * z * *unitary_).eval();
                z = (0.5 * (z - z.transpose())).eval();
            }
            break;
        }
        return z;
    }

    void require_ball(const std::vector<Complex> &lambda) const
    {
        if (lambda.size() != ball_dim_) {
            throw ShapeError(to_string(kind_) + " embedding expects a point of C^" + std::to_string(ball_dim_));
        }
        if (!(detail::squared_norm(lambda) < 1.0)) {
            throw OutsideDomainError(to_string(kind_) + " embedding: |lambda| >= 1");
        }
    }

private:
    BallEmbedding(EmbeddingKind k, DomainSpec target, std::size_t d) : kind_(k), target_(target), ball_dim_(d) {}

    EmbeddingKind kind_;
    DomainSpec target_;
    std::size_t ball_dim_;
    std::vector<Complex> xi_;
    std::optional<ComplexMatrix> unitary_;
    std::vector<Polynomial> map_;
};

/// z(lambda) as a point of the target domain; the image is checked for membership.
inline MatrixPoint embed(const BallEmbedding &e, const std::vector<Complex> &lambda)
{
    MatrixPoint p(e.target(), e.value(lambda));
    if (!contains(p).inside) {
        throw OutsideDomainError("embed: image left " + e.target().name());
    }
    return p;
}

/// max over (i, j) of the coefficients of sum_p z_pi conj(z_pj) - lambda_i conj(lambda_j),
/// a polynomial that vanishes identically when |xi| = 1.
inline double typeI_norm_identity_defect(const BallEmbedding &e)
{
    if (e.kind() != EmbeddingKind::type_I) {
        throw std::invalid_argument("typeI_norm_identity_defect needs a TypeI embedding");
    }
    const std::size_t m = e.xi().size();
    const std::size_t n = e.ball_dimension();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Polynomial s = -1.0 * (Polynomial::variable(n, i) * Polynomial::conj_variable(n, j));
            for (std::size_t p = 0; p < m; ++p) {
                s += e.map()[p * n + i] * e.map()[p * n + j].conj();
            }
            worst = std::max(worst, max_coefficient(s));
        }
    }
    return worst;
}

namespace detail {

/// Hessian in lambda of u o z, exact when u is a polynomial.
inline ComplexMatrix pulled_hessian(const BallEmbedding &e, const WirtingerField &u, const std::vector<Complex> &lambda,
                                    const FdOptions &fd)
{
    if (u.is_polynomial()) {
        return polynomial_hessian(u.as_polynomial().compose(e.map()), lambda);
    }
    const std::size_t d = e.ball_dimension();
    const ComplexMatrix l0 = from_row_major(1, d, lambda);
    return fd_hessian([&](const ComplexMatrix &l) { return u(e.value(to_row_major(l))); }, l0, fd);
}

/// Full Hessian of u(U^t z U) at z: J H_u(U^t z U) J* with J_{(j a),(k b)} = U_jk U_ab.
inline ComplexMatrix congruence_hessian(const WirtingerField &u, const ComplexMatrix &unitary, const ComplexMatrix &z,
                                        const FdOptions &fd)
{
    const Eigen::Index n = unitary.rows();
    const ComplexMatrix w = unitary.transpose() * z * unitary;
    ComplexMatrix jac(n * n, n * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index k = 0; k < n; ++k) {
                for (Eigen::Index b = 0; b < n; ++b) {
                    jac(j * n + a, k * n + b) = unitary(j, k) * unitary(a, b);
                }
            }
        }
    }
    return jac * wirtinger_hessian(u, w, fd) * jac.adjoint();
}

inline std::vector<Complex> require_lambda(const BallEmbedding &e, const std::vector<Complex> &lambda)
{
    e.require_ball(lambda);
    return lambda;
}

} // namespace detail

/// The two sides of the reduction identity for one embedding and one point.
struct PullbackSides {
    /// Ball operator applied to g = u o z at lambda.
    Complex ball_side;
    /// Component operators of the target domain applied to u at z(lambda).
    Complex domain_side;
};

inline PullbackSides pullback_sides(const BallEmbedding &e, const WirtingerField &u, const std::vector<Complex> &lambda,
                                    FdOptions fd = {0.0, true})
{
    const std::vector<Complex> l = detail::require_lambda(e, lambda);
    const std::size_t d = e.ball_dimension();
    const double rho = detail::squared_norm(l);
    PullbackSides out{};

    switch (e.kind()) {
    case EmbeddingKind::type_I: {
        const ComplexMatrix hg = detail::pulled_hessian(e, u, l, fd);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                out.ball_side += ((i == j ? 1.0 : 0.0) - l[i] * std::conj(l[j]))
                                 * hg(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        }
        const MatrixPoint z = embed(e, l);
        const ComplexMatrix h = operator_hessian(u, z, {Convention::independent, fd});
        const std::size_t m = e.xi().size();
        for (std::size_t k = 0; k < m; ++k) {
            for (std::size_t q = 0; q < m; ++q) {
                const auto op = OperatorId::part(OperatorKind::Delta1, static_cast<int>(k), static_cast<int>(q));
                out.domain_side += e.xi()[k] * std::conj(e.xi()[q]) * contract(coefficients(op, z), h);
            }
        }
        break;
    }
    case EmbeddingKind::type_II: {
        const ComplexMatrix hv = detail::pulled_hessian(e, u, l, fd);
        for (std::size_t a = 0; a < d; ++a) {
            for (std::size_t b = 0; b < d; ++b) {
                out.ball_side += ((a == b ? 1.0 : 0.0) - rho * l[a] * std::conj(l[b]))
                                 * hv(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            }
        }
        const MatrixPoint z = embed(e, l);
        const ComplexMatrix h = operator_hessian(u, z, {Convention::independent, fd});
        const ComplexMatrix &U = *e.unitary();
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t k = 0; k < d; ++k) {
                const auto op = OperatorId::part(OperatorKind::Delta2, static_cast<int>(i), static_cast<int>(k));
                const Complex comp = contract(coefficients(op, z), h);
                Complex weight = 0.0;
                for (std::size_t p = 0; p < d; ++p) {
                    for (std::size_t q = 0; q < d; ++q) {
                        weight += l[p] * std::conj(l[q]) * U(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(i))
                                  * std::conj(U(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(k)));
                    }
                }
                out.domain_side += weight * comp;
            }
        }
        break;
    }
    case EmbeddingKind::type_III: {
        const ComplexMatrix hg = detail::pulled_hessian(e, u, l, fd);
        for (std::size_t p = 0; p < d; ++p) {
            for (std::size_t q = 0; q < d; ++q) {
                out.ball_side += ((p == q ? 1.0 : 0.0) - l[p] * std::conj(l[q]))
                                 * hg(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
            }
        }
        // Delta3^{11} of u_U(z) = u(U^t z U) at the corner point.
        const BallEmbedding corner = BallEmbedding::type_III(e.target().n);
        const MatrixPoint z = embed(corner, l);
        const ComplexMatrix h =
            e.unitary() ? reduce_hessian(detail::congruence_hessian(u, *e.unitary(), z.value, fd), e.target().cols(),
                                         Symmetry::antisymmetric, Convention::extension)
                        : operator_hessian(u, z, {Convention::extension, fd});
        out.domain_side = 4.0 * contract(coefficients(OperatorId::part(OperatorKind::Delta3, 0, 0), z), h);
        break;
    }
    }
    return out;
}

/// TypeI, TypeII: ball side - domain side; TypeIII: domain side - ball side.
/// Vanishes for every u.
inline Complex pullback_residual(const BallEmbedding &e, const WirtingerField &u, const std::vector<Complex> &lambda,
                                 FdOptions fd = {0.0, true})
{
    const PullbackSides s = pullback_sides(e, u, lambda, fd);
    return e.kind() == EmbeddingKind::type_III ? s.domain_side - s.ball_side : s.ball_side - s.domain_side;
}

/// max_ij |d^2(u o z)/dlambda_i dconj(lambda_j) - sum_kl u_{ki, l j} xi_k conj(xi_l)| for TypeI.
inline double typeI_chain_rule_residual(const BallEmbedding &e, const WirtingerField &u,
                                        const std::vector<Complex> &lambda, FdOptions fd = {0.0, true})
{
    if (e.kind() != EmbeddingKind::type_I) {
        throw std::invalid_argument("typeI_chain_rule_residual needs a TypeI embedding");
    }
    const std::vector<Complex> l = detail::require_lambda(e, lambda);
    const ComplexMatrix hg = detail::pulled_hessian(e, u, l, fd);
    const MatrixPoint z = embed(e, l);
    const ComplexMatrix h = operator_hessian(u, z, {Convention::independent, fd});
    const auto n = static_cast<Eigen::Index>(e.ball_dimension());
    const auto m = static_cast<Eigen::Index>(e.xi().size());
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            Complex s = 0.0;
            for (Eigen::Index k = 0; k < m; ++k) {
                for (Eigen::Index q = 0; q < m; ++q) {
                    s += h(k * n + i, q * n + j) * e.xi()[static_cast<std::size_t>(k)]
                         * std::conj(e.xi()[static_cast<std::size_t>(q)]);
                }
            }
            worst = std::max(worst, std::abs(hg(i, j) - s));
        }
    }
    return worst;
}

/// Intermediate quantities of the TypeII reduction, for diagnosing a
/// nonzero end-to-end residual.
struct TypeIIChain {
    Complex ball_side;
    /// sum_pq lambda_p conj(lambda_q) sum_ik U_pi conj(U_qk) sum_jl w V_jl u_{ij,kl}.
    Complex weighted_side;
    Complex domain_side;
    /// max over (alpha, beta) of |v_{alpha betabar} - chain-rule expression|.
    double hessian_line;
    /// max over (j, l) of |sum_ab (delta - |lambda|^2 lambda_a conj(lambda_b)) U_aj conj(U_bl) - V_jl|.
    double v_identification;
};

inline TypeIIChain typeII_chain(const BallEmbedding &e, const WirtingerField &u, const std::vector<Complex> &lambda,
                                FdOptions fd = {0.0, true})
{
    if (e.kind() != EmbeddingKind::type_II) {
        throw std::invalid_argument("typeII_chain needs a TypeII embedding");
    }
    const std::vector<Complex> l = detail::require_lambda(e, lambda);
    const auto n = static_cast<Eigen::Index>(e.ball_dimension());
    const double rho = detail::squared_norm(l);
    const ComplexMatrix &U = *e.unitary();
    const MatrixPoint z = embed(e, l);
    const ComplexMatrix h = operator_hessian(u, z, {Convention::independent, fd});
    const ComplexMatrix v = hua_V(z.value);
    const ComplexMatrix hv = detail::pulled_hessian(e, u, l, fd);
    const PullbackSides sides = pullback_sides(e, u, l, fd);

    ComplexVector lu = ComplexVector::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index p = 0; p < n; ++p) {
            lu(i) += l[static_cast<std::size_t>(p)] * U(p, i);
        }
    }
    auto w = [](Eigen::Index a, Eigen::Index b) { return a == b ? 2.0 : 1.0; };

    TypeIIChain out{sides.ball_side, 0.0, sides.domain_side, 0.0, 0.0};
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            Complex s = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    for (Eigen::Index k = 0; k < n; ++k) {
                        for (Eigen::Index q = 0; q < n; ++q) {
                            s += w(k, q) * w(i, j) * h(i * n + j, k * n + q) * lu(i) * U(a, j) * std::conj(lu(k))
                                 * std::conj(U(b, q));
                        }
                    }
                }
            }
            out.hessian_line = std::max(out.hessian_line, std::abs(hv(a, b) - s));
        }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index q = 0; q < n; ++q) {
            Complex s = 0.0;
            for (Eigen::Index a = 0; a < n; ++a) {
                for (Eigen::Index b = 0; b < n; ++b) {
                    s += ((a == b ? 1.0 : 0.0) - rho * l[static_cast<std::size_t>(a)] * std::conj(l[static_cast<std::size_t>(b)]))
                         * U(a, j) * std::conj(U(b, q));
                }
            }
            out.v_identification = std::max(out.v_identification, std::abs(s - v(j, q)));
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index k = 0; k < n; ++k) {
            for (Eigen::Index j = 0; j < n; ++j) {
                for (Eigen::Index q = 0; q < n; ++q) {
                    out.weighted_side += lu(i) * std::conj(lu(k)) * w(k, q) * w(i, j) * v(j, q) * h(i * n + j, k * n + q);
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Polarization

class PolarizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using QuadraticForm = std::function<Complex(const std::vector<Complex> &)>;

/// xi -> sum_jk M_jk xi_j conj(xi_k).
inline QuadraticForm form_from(ComplexMatrix m)
{
    if (m.rows() != m.cols()) {
        throw ShapeError("form_from needs a square matrix");
    }
    return [m = std::move(m)](const std::vector<Complex> &xi) {
        if (static_cast<Eigen::Index>(xi.size()) != m.rows()) {
            throw ShapeError("quadratic form: wrong vector length");
        }
        Complex s = 0.0;
        for (Eigen::Index j = 0; j < m.rows(); ++j) {
            for (Eigen::Index k = 0; k < m.cols(); ++k) {
                s += m(j, k) * xi[static_cast<std::size_t>(j)] * std::conj(xi[static_cast<std::size_t>(k)]);
            }
        }
        return s;
    };
}

struct PolarizationOptions {
    int probes = 8;
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
    /// Relative tolerance for the probe consistency check.
    double tolerance = 1e-9;
};

/// Recovers M from the values of form at unit vectors e_k,
/// (e_j + e_k)/sqrt 2 and (e_j + i e_k)/sqrt 2, then checks it at random probes.
inline ComplexMatrix polarization_recover(const QuadraticForm &form, std::size_t n, const PolarizationOptions &opts = {})
{
    const double r = 1.0 / std::sqrt(2.0);
    ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    std::vector<Complex> xi(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::fill(xi.begin(), xi.end(), Complex(0.0));
        xi[k] = 1.0;
        m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = form(xi);
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
            const auto J = static_cast<Eigen::Index>(j);
            const auto K = static_cast<Eigen::Index>(k);
            std::fill(xi.begin(), xi.end(), Complex(0.0));
            xi[j] = r;
            xi[k] = r;
            const Complex f1 = form(xi);
            xi[k] = Complex(0.0, r);
            const Complex f2 = form(xi);
            const Complex diag = m(J, J) + m(K, K);
            const Complex sum = 2.0 * f1 - diag;               // M_jk + M_kj
            const Complex diff = (2.0 * f2 - diag) / I_unit;   // M_kj - M_jk
            m(J, K) = 0.5 * (sum - diff);
            m(K, J) = 0.5 * (sum + diff);
        }
    }

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> g(0.0, 1.0);
    const QuadraticForm rebuilt = form_from(m);
    const double scale = std::max(1.0, max_abs(m));
    for (int t = 0; t < opts.probes; ++t) {
        for (auto &x : xi) {
            const double re = g(rng);
            const double im = g(rng);
            x = Complex(re, im);
        }
        xi = normalized(xi);
        const Complex want = form(xi);
        const Complex got = rebuilt(xi);
        if (std::abs(want - got) > opts.tolerance * scale) {
            throw PolarizationError("polarization_recover: form is not sesquilinear-quadratic (probe mismatch "
                                    + std::to_string(std::abs(want - got)) + ")");
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Hessian transport under holomorphic maps

inline bool is_holomorphic(const Polynomial &p)
{
    const std::size_t v = p.vars();
    for (const auto &[e, c] : p.terms()) {
        for (std::size_t a = 0; a < v; ++a) {
            if (e[v + a] != 0) {
                return false;
            }
        }
    }
    return true;
}

/// phi'(z0) with rows indexed by source variables j and columns by target k.
inline ComplexMatrix holomorphic_jacobian(const std::vector<Polynomial> &phi, const std::vector<Complex> &z0)
{
    const auto d = static_cast<Eigen::Index>(z0.size());
    const auto N = static_cast<Eigen::Index>(phi.size());
    ComplexMatrix j(d, N);
    for (Eigen::Index k = 0; k < N; ++k) {
        for (Eigen::Index a = 0; a < d; ++a) {
            j(a, k) = phi[static_cast<std::size_t>(k)].d(static_cast<std::size_t>(a)).evaluate(z0);
        }
    }
    return j;
}

/// || H_{u o phi}(z0) - phi'(z0) H_u(phi(z0)) phi'(z0)* ||_F. phi has one
/// component per entry of u's argument (row-major).
inline double hessian_transport_check(const std::vector<Polynomial> &phi, const WirtingerField &u,
                                      const std::vector<Complex> &z0, FdOptions fd = {0.0, true})
{
    if (phi.size() != u.arity()) {
        throw ShapeError("hessian_transport_check: map has " + std::to_string(phi.size()) + " components, field takes "
                         + std::to_string(u.arity()));
    }
    for (const auto &c : phi) {
        if (c.vars() != z0.size()) {
            throw ShapeError("hessian_transport_check: map arity does not match z0");
        }
        if (!is_holomorphic(c)) {
            throw std::invalid_argument("hessian_transport_check: map is not holomorphic");
        }
    }
    std::vector<Complex> image;
    image.reserve(phi.size());
    for (const auto &c : phi) {
        image.push_back(c.evaluate(z0));
    }
    const ComplexMatrix w = from_row_major(u.rows(), u.cols(), image);
    const ComplexMatrix jac = holomorphic_jacobian(phi, z0);
    const ComplexMatrix transported = jac * wirtinger_hessian(u, w, fd) * jac.adjoint();

    ComplexMatrix pulled;
    if (u.is_polynomial()) {
        pulled = polynomial_hessian(u.as_polynomial().compose(phi), z0);
    } else {
        auto eval = [&](const ComplexMatrix &x) {
            const std::vector<Complex> xs = to_row_major(x);
            std::vector<Complex> img;
            img.reserve(phi.size());
            for (const auto &c : phi) {
                img.push_back(c.evaluate(xs));
            }
            return u(from_row_major(u.rows(), u.cols(), img));
        };
        pulled = fd_hessian(eval, from_row_major(1, z0.size(), z0), fd);
    }
    return (pulled - transported).norm();
}

/// The polydisc-to-IV(2) map (z1, z2) -> ((z1 + z2)/2, (z1 - z2)/(2i)) as polynomials.
inline std::vector<Polynomial> biholo_IV2_map()
{
    const Polynomial z1 = Polynomial::variable(2, 0);
    const Polynomial z2 = Polynomial::variable(2, 1);
    return {0.5 * (z1 + z2), (1.0 / (2.0 * I_unit)) * (z1 - z2)};
}

/// The B_3-to-III(3) map as polynomials, row-major.
inline std::vector<Polynomial> biholo_III3_map()
{
    std::vector<Polynomial> out(9, Polynomial(3));
    const std::size_t upper[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (std::size_t a = 0; a < 3; ++a) {
        const auto [r, c] = std::pair{upper[a][0], upper[a][1]};
        out[r * 3 + c] = Polynomial::variable(3, a);
        out[c * 3 + r] = Polynomial::variable(3, a, -1.0);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fields on IV(2) pulled back from the polydisc

/// True when d^2 v / dz_j dconj(z_j) vanishes identically for every j.
inline bool is_coordinatewise_harmonic(const Polynomial &v, double tol = 1e-13)
{
    for (std::size_t j = 0; j < v.vars(); ++j) {
        if (max_coefficient(v.d(j).dbar(j)) > tol * std::max(1.0, max_coefficient(v))) {
            return false;
        }
    }
    return true;
}

/// u(w) = v(z) with z1 = (w1 + w2)/2, z2 = (w1 - w2)/(2i).
inline Polynomial polydisc_field_on_IV2(const Polynomial &v)
{
    if (v.vars() != 2) {
        throw ShapeError("polydisc_field_on_IV2 expects a polynomial in two variables");
    }
    const Polynomial w1 = Polynomial::variable(2, 0);
    const Polynomial w2 = Polynomial::variable(2, 1);
    return v.compose({0.5 * (w1 + w2), (1.0 / (2.0 * I_unit)) * (w1 - w2)});
}

struct PolydiscPullbackCheck {
    /// |u_{1 1bar} + u_{2 2bar}|, a quarter of the Euclidean Laplacian.
    double laplacian = 0.0;
    /// |2 Re u_{1 2bar}|.
    double mixed_real_part = 0.0;
};

/// For coordinate-wise harmonic real v on the polydisc, u = v o (z(w)) is
/// harmonic with 2 Re u_{1 2bar} = 0 on IV(2).
inline PolydiscPullbackCheck polydisc_pullback_check(const Polynomial &v, const std::vector<Complex> &w)
{
    if (!is_coordinatewise_harmonic(v)) {
        throw std::invalid_argument("polydisc_pullback_check: v is not harmonic in each variable");
    }
    const ComplexMatrix h = polynomial_hessian(polydisc_field_on_IV2(v), w);
    return {std::abs(h(0, 0) + h(1, 1)), std::abs(2.0 * h(0, 1).real())};
}

} // namespace hua
