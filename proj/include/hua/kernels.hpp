#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hua/core/complex_matrix.hpp"
#include "hua/core/field.hpp"
#include "hua/core/polynomial.hpp"
#include "hua/core/wirtinger.hpp"
#include "hua/domains.hpp"
#include "hua/operators.hpp"

namespace hua {

/// W(z, w) = I - z w*.
inline ComplexMatrix hua_W(const ComplexMatrix &z, const ComplexMatrix &w)
{
    return identity(static_cast<std::size_t>(z.rows())) - z * w.adjoint();
}

/// Interior point z, boundary point w and the matrices every kernel formula needs.
struct KernelPair {
    DomainSpec spec;
    ComplexMatrix z;
    ComplexMatrix w;
    ComplexMatrix V;
    ComplexMatrix W;
    ComplexMatrix V_inv;
    ComplexMatrix W_inv;
    double kappa = 0.0;
    double log_det_V = 0.0;
    Complex det_W;

    static KernelPair make(const MatrixPoint &z, const MatrixPoint &w)
    {
        if (!(z.spec == w.spec)) {
            throw std::invalid_argument("kernel pair: points belong to different domains");
        }
        KernelPair p;
        p.spec = z.spec;
        p.kappa = hua::kappa(z.spec).value();
        if (!contains(z).inside) {
            throw OutsideDomainError("kernel pair: z is not an interior point of " + z.spec.name());
        }
        p.z = z.value;
        p.w = w.value;
        p.V = hua_V(p.z);
        p.W = hua_W(p.z, p.w);
        p.V_inv = inverse(p.V);
        p.W_inv = inverse(p.W);
        p.log_det_V = std::log(det(p.V).real());
        p.det_W = det(p.W);
        return p;
    }

    std::size_t rows() const { return static_cast<std::size_t>(z.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(z.cols()); }
    MatrixPoint z_point() const { return {spec, z}; }

    /// P(z, w) = det V^kappa / |det W|^(2 kappa), evaluated through logarithms.
    double kernel() const { return std::exp(kappa * (log_det_V - std::log(std::norm(det_W)))); }

    /// Smallest length scale of the kernel near z: min(sigma_min(W), lambda_min(V)).
    double length_scale() const
    {
        Eigen::JacobiSVD<ComplexMatrix> svd(W);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(V, Eigen::EigenvaluesOnly);
        return std::min(svd.singularValues().minCoeff(), es.eigenvalues().minCoeff());
    }
};

inline double poisson_szego(const MatrixPoint &z, const MatrixPoint &w)
{
    return KernelPair::make(z, w).kernel();
}

/// P(., w) as an opaque field on the full ambient matrix space. No membership
/// check: the formula is smooth near the interior, which lets finite
/// differences step off the (anti)symmetric subspace.
inline WirtingerField kernel_field(const MatrixPoint &w)
{
    const double k = kappa(w.spec).value();
    const ComplexMatrix wv = w.value;
    return WirtingerField::opaque(w.spec.rows(), w.spec.cols(), [k, wv](const ComplexMatrix &z) -> Complex {
        const double dv = det(hua_V(z)).real();
        if (!(dv > 0.0)) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        return std::exp(k * (std::log(dv) - std::log(std::norm(det(hua_W(z, wv))))));
    });
}

/// b = d log det V / dz and c = d log det W / dz.
struct LogGradients {
    ComplexVector b;
    ComplexVector c;
};

namespace detail {

/// Flattened gradient g[(j, a)] = -[M]_{a j}.
inline ComplexVector flat_negative_transpose(const ComplexMatrix &m, std::size_t rows, std::size_t cols)
{
    ComplexVector g(static_cast<Eigen::Index>(rows * cols));
    for (std::size_t j = 0; j < rows; ++j) {
        for (std::size_t a = 0; a < cols; ++a) {
            g(static_cast<Eigen::Index>(j * cols + a)) = -m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j));
        }
    }
    return g;
}

} // namespace detail

/// Generic gradients from d log det M = tr(M^{-1} dM) on the full entry set,
/// mapped to the requested convention:
///   b[(j,a)] = -[z* V^{-1}]_{aj},  c[(j,a)] = -[w* W^{-1}]_{aj}.
inline LogGradients log_gradients(const KernelPair &p, Convention conv = Convention::independent)
{
    const Symmetry sym = p.spec.symmetry();
    const ComplexVector b = detail::flat_negative_transpose(p.z.adjoint() * p.V_inv, p.rows(), p.cols());
    const ComplexVector c = detail::flat_negative_transpose(p.w.adjoint() * p.W_inv, p.rows(), p.cols());
    return {reduce_gradient(b, p.cols(), sym, conv), reduce_gradient(c, p.cols(), sym, conv)};
}

/// Closed forms of c in independent-entry coordinates:
///   II:  c_ja = -(2 - d_ja) [w* W^{-1}]_ja
///   III: c_ja = 2 [w* W^{-1}]_ja
inline ComplexVector c_closed_form(const KernelPair &p)
{
    const std::size_t n = p.cols();
    const ComplexMatrix m = p.w.adjoint() * p.W_inv;
    ComplexVector c(static_cast<Eigen::Index>(n * n));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t a = 0; a < n; ++a) {
            const Complex v = m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(a));
            Complex out;
            if (p.spec.family == Family::II) {
                out = -(j == a ? 1.0 : 2.0) * v;
            } else if (p.spec.family == Family::III) {
                out = 2.0 * v;
            } else {
                throw UnsupportedError("closed-form c is stated for II(n) and III(n) only");
            }
            c(static_cast<Eigen::Index>(j * n + a)) = out;
        }
    }
    return c;
}

/// Conjugate closed forms: II: -(2 - d_kb) [W(w,z)^{-1} w]_kb, III: -2 [W(w,z)^{-1} w]_kb.
inline ComplexVector c_conjugate_closed_form(const KernelPair &p)
{
    const std::size_t n = p.cols();
    const ComplexMatrix m = inverse(hua_W(p.w, p.z)) * p.w;
    ComplexVector c(static_cast<Eigen::Index>(n * n));
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t b = 0; b < n; ++b) {
            const Complex v = m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(b));
            double weight = 2.0;
            if (p.spec.family == Family::II) {
                weight = k == b ? 1.0 : 2.0;
            } else if (p.spec.family != Family::III) {
                throw UnsupportedError("closed-form c is stated for II(n) and III(n) only");
            }
            c(static_cast<Eigen::Index>(k * n + b)) = -weight * v;
        }
    }
    return c;
}

/// Finite-difference c: the gradient of det W(., w) / det W(z, w) at z.
inline ComplexVector c_finite_difference(const KernelPair &p, FdOptions opts = {0.0, true})
{
    const ComplexMatrix w = p.w;
    const Complex base = p.det_W;
    const ComplexVector full = fd_gradient(
        [w, base](const ComplexMatrix &x) { return det(hua_W(x, w)) / base; }, p.z, opts);
    return reduce_gradient(full, p.cols(), p.spec.symmetry());
}

/// d^2 log det V / dz_{ja} d conj(z_{kb}) = -[V^{-1}]_{kj} [(I - z* z)^{-1}]_{ab}
/// on the full entry set, mapped to the requested convention.
inline ComplexMatrix log_det_V_hessian(const KernelPair &p, Convention conv = Convention::independent)
{
    const std::size_t rows = p.rows();
    const std::size_t cols = p.cols();
    const ComplexMatrix u = inverse(identity(cols) - p.z.adjoint() * p.z);
    const auto N = static_cast<Eigen::Index>(rows * cols);
    ComplexMatrix h(N, N);
    for (std::size_t j = 0; j < rows; ++j) {
        for (std::size_t a = 0; a < cols; ++a) {
            for (std::size_t k = 0; k < rows; ++k) {
                for (std::size_t b = 0; b < cols; ++b) {
                    h(static_cast<Eigen::Index>(j * cols + a), static_cast<Eigen::Index>(k * cols + b))
                        = -p.V_inv(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j))
                          * u(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
                }
            }
        }
    }
    return reduce_hessian(h, cols, p.spec.symmetry(), conv);
}

/// (1/(kappa^2 P)) d^2 P / dz dzbar from log derivatives:
///   (1/kappa) d dbar log det V + (b - c)(b - c)^*.
inline ComplexMatrix normalized_kernel_hessian_assembled(const KernelPair &p,
                                                         Convention conv = Convention::independent)
{
    const LogGradients g = log_gradients(p, conv);
    const ComplexVector d = g.b - g.c;
    return log_det_V_hessian(p, conv) / p.kappa + d * d.adjoint();
}

/// Exact kernel Hessian from determinant polynomials. det V(z) is expanded
/// once per domain shape; det W(z, w) once per boundary point. Immutable after
/// construction, so one instance may be shared across threads.
class DeterminantPolynomials {
public:
    explicit DeterminantPolynomials(const DomainSpec &spec) : spec_(spec)
    {
        const std::size_t rows = spec.rows();
        const std::size_t cols = spec.cols();
        const std::size_t N = rows * cols;
        std::vector<std::vector<Polynomial>> v(rows, std::vector<Polynomial>(rows, Polynomial(N)));
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < rows; ++j) {
                Polynomial e = Polynomial::constant(N, i == j ? 1.0 : 0.0);
                for (std::size_t l = 0; l < cols; ++l) {
                    e -= Polynomial::variable(N, i * cols + l) * Polynomial::conj_variable(N, j * cols + l);
                }
                v[i][j] = e;
            }
        }
        d_ = polynomial_determinant(v);
        da_.reserve(N);
        dab_.reserve(N * N);
        for (std::size_t a = 0; a < N; ++a) {
            da_.push_back(d_.d(a));
        }
        for (std::size_t a = 0; a < N; ++a) {
            for (std::size_t b = 0; b < N; ++b) {
                dab_.push_back(da_[a].dbar(b));
            }
        }
    }

    const DomainSpec &spec() const { return spec_; }
    const Polynomial &det_V() const { return d_; }

    /// det W(z, w) as a holomorphic polynomial in z.
    Polynomial det_W(const ComplexMatrix &w) const
    {
        const std::size_t rows = spec_.rows();
        const std::size_t cols = spec_.cols();
        const std::size_t N = rows * cols;
        std::vector<std::vector<Polynomial>> m(rows, std::vector<Polynomial>(rows, Polynomial(N)));
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < rows; ++j) {
                Polynomial e = Polynomial::constant(N, i == j ? 1.0 : 0.0);
                for (std::size_t l = 0; l < cols; ++l) {
                    e -= Polynomial::variable(
                        N, i * cols + l, std::conj(w(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l))));
                }
                m[i][j] = e;
            }
        }
        return polynomial_determinant(m);
    }

    /// Full-coordinate (1/(kappa^2 P)) d_a dbar_b P with D = det V, Q = det W:
    ///   (kappa-1)/kappa D_a D_b~ / D^2 + (1/kappa) D_ab~ / D
    ///   - (D_a/D) conj(Q_b/Q) - (D_b~/D)(Q_a/Q) + (Q_a/Q) conj(Q_b/Q).
    ComplexMatrix normalized_kernel_hessian(const ComplexMatrix &z, const ComplexMatrix &w, double kappa) const
    {
        const std::size_t N = spec_.dimension();
        const std::vector<Complex> x = to_row_major(z);
        const Polynomial q = det_W(w);
        const Complex dv = d_.evaluate(x);
        const Complex qv = q.evaluate(x);
        std::vector<Complex> dl(N);
        std::vector<Complex> ql(N);
        for (std::size_t a = 0; a < N; ++a) {
            dl[a] = da_[a].evaluate(x) / dv;
            ql[a] = q.d(a).evaluate(x) / qv;
        }
        const auto n = static_cast<Eigen::Index>(N);
        ComplexMatrix h(n, n);
        for (std::size_t a = 0; a < N; ++a) {
            for (std::size_t b = 0; b < N; ++b) {
                // D is real, so dbar_b D = conj(d_b D).
                const Complex db = std::conj(dl[b]);
                h(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))
                    = (kappa - 1.0) / kappa * dl[a] * db + dab_[a * N + b].evaluate(x) / dv / kappa
                      - dl[a] * std::conj(ql[b]) - db * ql[a] + ql[a] * std::conj(ql[b]);
            }
        }
        return h;
    }

private:
    DomainSpec spec_;
    Polynomial d_;
    std::vector<Polynomial> da_;
    std::vector<Polynomial> dab_;
};

/// (j,k)-indexed tensors whose signed sum A + B + C - D - E equals
/// (1/(kappa^2 P)) Delta^{jk} P.
struct IdentityTensors {
    ComplexMatrix A;
    ComplexMatrix B;
    ComplexMatrix C;
    ComplexMatrix D;
    ComplexMatrix E;
};

/// Sign table of the kernel identity. From
///   (1/(kappa^2 P)) P_{a bbar} = (1/kappa) L + b conj(b) + c conj(c) - b conj(c) - c conj(b)
/// the tensors b conj(c) (D) and c conj(b) (E) enter with minus signs.
inline ComplexMatrix theorem_sum(const IdentityTensors &t)
{
    return t.A + t.B + t.C - t.D - t.E;
}

inline OperatorKind operator_for(const DomainSpec &spec)
{
    switch (spec.family) {
    case Family::I:
        return OperatorKind::Delta1;
    case Family::II:
        return OperatorKind::Delta2;
    case Family::III:
        return OperatorKind::Delta3;
    case Family::IV:
        break;
    }
    throw UnsupportedError("no component operator for " + spec.name());
}

namespace detail {

inline ComplexMatrix outer(const ComplexVector &x, const ComplexVector &y)
{
    return x * y.adjoint();
}

} // namespace detail

/// Tensors by direct summation over (alpha, beta) with the component weights of
/// the domain's Hua operator (Delta1 for I, Delta2 for II, Delta3 for III).
inline IdentityTensors identity_tensors_direct(const KernelPair &p)
{
    const OperatorKind kind = operator_for(p.spec);
    const MatrixPoint zp = p.z_point();
    const LogGradients g = log_gradients(p);
    const ComplexMatrix L = log_det_V_hessian(p);
    const ComplexMatrix bb = detail::outer(g.b, g.b);
    const ComplexMatrix cc = detail::outer(g.c, g.c);
    const ComplexMatrix bc = detail::outer(g.b, g.c);
    const ComplexMatrix cb = detail::outer(g.c, g.b);
    const auto m = static_cast<Eigen::Index>(p.rows());
    IdentityTensors t{ComplexMatrix(m, m), ComplexMatrix(m, m), ComplexMatrix(m, m), ComplexMatrix(m, m),
                      ComplexMatrix(m, m)};
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index k = 0; k < m; ++k) {
            const CoefficientTensor w = coefficients(OperatorId::part(kind, static_cast<int>(j), static_cast<int>(k)), zp);
            t.A(j, k) = contract(w, L) / p.kappa;
            t.B(j, k) = contract(w, bb);
            t.C(j, k) = contract(w, cc);
            t.D(j, k) = contract(w, bc);
            t.E(j, k) = contract(w, cb);
        }
    }
    return t;
}

/// F(z, w) = W(w*, z*)^{-1} (I - w* w) W(z*, w*)^{-1}.
inline ComplexMatrix lemma_F(const KernelPair &p)
{
    const std::size_t n = p.cols();
    const ComplexMatrix wzs = inverse(hua_W(p.w.adjoint(), p.z.adjoint()));
    const ComplexMatrix zws = inverse(hua_W(p.z.adjoint(), p.w.adjoint()));
    return wzs * (identity(n) - p.w.adjoint() * p.w) * zws;
}

/// Closed forms, for II(n) and III(n):
///   A = -4 V^{kj} (II),  -(2/kappa)(n-1) V^{kj} (III)
///   B = 4 [V(z*)^{-1} - I]
///   C = 4 [W(z*,w*)^{-1} + W(w*,z*)^{-1} - I]  (III: minus F)
///   D = 4 [W(z*,w*)^{-1} - I],  E = 4 [W(w*,z*)^{-1} - I]
/// with V^{kj} = [V^{-1}]_{kj}. C assumes w on the Silov boundary.
inline IdentityTensors identity_tensors_closed(const KernelPair &p)
{
    if (p.spec.family != Family::II && p.spec.family != Family::III) {
        throw UnsupportedError("closed-form tensors are stated for II(n) and III(n) only");
    }
    const std::size_t n = p.cols();
    const ComplexMatrix id = identity(n);
    const ComplexMatrix vzs = inverse(identity(n) - p.z.adjoint() * p.z);
    const ComplexMatrix zws = inverse(hua_W(p.z.adjoint(), p.w.adjoint()));
    const ComplexMatrix wzs = inverse(hua_W(p.w.adjoint(), p.z.adjoint()));
    IdentityTensors t;
    const double a_scale = p.spec.family == Family::II ? -4.0 : -(2.0 / p.kappa) * (static_cast<double>(n) - 1.0);
    t.A = a_scale * p.V_inv.transpose();
    t.B = 4.0 * (vzs - id);
    t.C = 4.0 * (zws + wzs - id);
    if (p.spec.family == Family::III) {
        t.C -= 4.0 * lemma_F(p);
    }
    t.D = 4.0 * (zws - id);
    t.E = 4.0 * (wzs - id);
    return t;
}

inline double max_tensor_gap(const IdentityTensors &x, const IdentityTensors &y)
{
    return std::max({max_abs(x.A - y.A), max_abs(x.B - y.B), max_abs(x.C - y.C), max_abs(x.D - y.D),
                     max_abs(x.E - y.E)});
}

/// Finite-difference step for the kernel: 5e-3 of its local length scale,
/// used with Richardson extrapolation.
inline double kernel_fd_step(const KernelPair &p)
{
    return 5e-3 * p.length_scale();
}

/// Every route to the kernel identity at one (z, w) pair, all (j, k) at once.
/// Values are normalized by kappa^2 P; fd_raw is the unnormalized Delta^{jk} P.
struct Theorem22Check {
    ComplexMatrix fd;
    ComplexMatrix fd_raw;
    ComplexMatrix exact;
    ComplexMatrix direct_sum;
    std::optional<ComplexMatrix> closed_sum;
    std::optional<double> tensor_gap;
    double kernel = 0.0;
};

struct Theorem22Options {
    bool finite_differences = true;
    FdOptions fd{0.0, true};
    /// Optional exact-Hessian route; built for the pair's domain shape.
    const DeterminantPolynomials *polynomials = nullptr;
};

inline Theorem22Check check_theorem22(const KernelPair &p, const Theorem22Options &opts = {})
{
    const OperatorKind kind = operator_for(p.spec);
    const MatrixPoint zp = p.z_point();
    const auto m = static_cast<Eigen::Index>(p.rows());
    const std::size_t n = p.cols();
    Theorem22Check out;
    out.kernel = p.kernel();
    const double norm = p.kappa * p.kappa * out.kernel;

    std::vector<CoefficientTensor> weights;
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index k = 0; k < m; ++k) {
            weights.push_back(coefficients(OperatorId::part(kind, static_cast<int>(j), static_cast<int>(k)), zp));
        }
    }
    auto contract_all = [&](const ComplexMatrix &h) {
        ComplexMatrix r(m, m);
        for (Eigen::Index j = 0; j < m; ++j) {
            for (Eigen::Index k = 0; k < m; ++k) {
                r(j, k) = contract(weights[static_cast<std::size_t>(j * m + k)], h);
            }
        }
        return r;
    };

    const IdentityTensors direct = identity_tensors_direct(p);
    out.direct_sum = theorem_sum(direct);
    if (p.spec.family == Family::II || p.spec.family == Family::III) {
        const IdentityTensors closed = identity_tensors_closed(p);
        out.closed_sum = theorem_sum(closed);
        out.tensor_gap = max_tensor_gap(direct, closed);
    }
    if (opts.polynomials != nullptr) {
        if (!(opts.polynomials->spec() == p.spec)) {
            throw std::invalid_argument("determinant polynomials built for a different domain");
        }
        const ComplexMatrix full = opts.polynomials->normalized_kernel_hessian(p.z, p.w, p.kappa);
        out.exact = contract_all(reduce_hessian(full, n, p.spec.symmetry()));
    }
    if (opts.finite_differences) {
        FdOptions fd = opts.fd;
        if (fd.step <= 0.0) {
            fd.step = kernel_fd_step(p);
        }
        const WirtingerField field = kernel_field({p.spec, p.w});
        const ComplexMatrix h = reduce_hessian(wirtinger_hessian(field, p.z, fd), n, p.spec.symmetry());
        out.fd_raw = contract_all(h);
        out.fd = out.fd_raw / norm;
    }
    return out;
}

/// Residual pair for one component: r1 = |Delta^{jk} P| / (kappa^2 P) by
/// finite differences, r2 = the largest exact-route residual.
inline std::pair<double, double> check_theorem22(const MatrixPoint &z, const MatrixPoint &w, int j, int k)
{
    const KernelPair p = KernelPair::make(z, w);
    const Theorem22Check c = check_theorem22(p);
    const auto jj = static_cast<Eigen::Index>(j);
    const auto kk = static_cast<Eigen::Index>(k);
    double r2 = std::abs(c.direct_sum(jj, kk));
    if (c.closed_sum) {
        r2 = std::max(r2, std::abs((*c.closed_sum)(jj, kk)));
    }
    return {std::abs(c.fd(jj, kk)), r2};
}

} // namespace hua
