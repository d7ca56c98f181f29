#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hua {

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Compensated (Neumaier) running sum.
class NeumaierSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// (a)_m = a (a+1) ... (a+m-1), (a)_0 = 1.
inline double pochhammer(double a, unsigned m)
{
    double r = 1.0;
    for (unsigned i = 0; i < m; ++i) {
        r *= a + static_cast<double>(i);
    }
    return r;
}

/// log|Gamma(x)| by a Lanczos-type series (g = 607/128, 14 terms), with the
/// reflection formula for x < 1/2. Relative error about 2e-15 for x >= 1/2.
inline double log_gamma(double x)
{
    static constexpr std::array<double, 14> coef = {
        57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,     -0.491913816097620199,
        .339946499848118887e-4,  .465236289270485756e-4,  -.983744753048795646e-4, .158088703224912494e-3,
        -.210264441724104883e-3, .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
        -.261908384015814087e-4, .368991826595316234e-5};
    constexpr double pi = 3.14159265358979323846;
    if (x < 0.5) {
        return std::log(pi / std::abs(std::sin(pi * x))) - log_gamma(1.0 - x);
    }
    double tmp = x + 5.24218750000000000;
    tmp = (x + 0.5) * std::log(tmp) - tmp;
    double ser = 0.999999999999997092;
    double y = x;
    for (double c : coef) {
        y += 1.0;
        ser += c / y;
    }
    return tmp + std::log(2.5066282746310005 * ser / x);
}

/// Gamma(x) for x > 0 or non-integer x < 0.
inline double gamma_fn(double x)
{
    constexpr double pi = 3.14159265358979323846;
    if (x < 0.5) {
        return pi / (std::sin(pi * x) * gamma_fn(1.0 - x));
    }
    return std::exp(log_gamma(x));
}

inline bool is_nonpositive_integer(double x)
{
    return x <= 0.0 && x == std::floor(x);
}

struct HypergeomParams {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
};

struct SeriesResult {
    double value = 0.0;
    std::size_t terms = 0;
    /// t > 1/2 with c - a - b <= 0: the series converges slowly here.
    bool slow = false;
};

inline constexpr std::size_t series_term_cap = 1000000;

/// Gauss 2F1(a, b; c; t) by direct summation on 0 <= t < 1. Stops once a
/// geometric bound on the tail falls below 1e-15 of the partial sum.
inline SeriesResult gauss_2f1_series(double a, double b, double c, double t)
{
    if (is_nonpositive_integer(c)) {
        throw std::invalid_argument("2F1: c must not be a non-positive integer");
    }
    if (!(t >= 0.0 && t < 1.0)) {
        throw std::domain_error("2F1: t must lie in [0, 1)");
    }
    SeriesResult r;
    r.slow = t > 0.5 && c - a - b <= 0.0;
    NeumaierSum sum;
    double term = 1.0;
    sum.add(term);
    for (std::size_t n = 0; n < series_term_cap; ++n) {
        const double dn = static_cast<double>(n);
        const double ratio = (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * t;
        term *= ratio;
        sum.add(term);
        r.terms = n + 2;
        if (term == 0.0) {
            r.value = sum.value();
            return r;
        }
        // Successive ratios tend to t; once below one, bound the tail
        // geometrically by the larger of the current ratio and t.
        const double rb = std::max(std::abs(ratio), t);
        if (rb < 1.0 && std::abs(term) * rb / (1.0 - rb) <= 1e-16 * std::abs(sum.value())) {
            r.value = sum.value();
            return r;
        }
    }
    throw ConvergenceError("2F1(" + std::to_string(a) + ", " + std::to_string(b) + "; " + std::to_string(c) + "; "
                           + std::to_string(t) + ") did not converge within the term cap");
}

inline double gauss_2f1(double a, double b, double c, double t)
{
    return gauss_2f1_series(a, b, c, t).value;
}

inline double gauss_2f1(const HypergeomParams &p, double t)
{
    return gauss_2f1(p.a, p.b, p.c, t);
}

/// F(a, b; c; 1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)), needs c - a - b > 0.
inline double gauss_2f1_at_one(double a, double b, double c)
{
    if (!(c - a - b > 0.0)) {
        throw std::domain_error("2F1 at t = 1 diverges unless c - a - b > 0");
    }
    if (is_nonpositive_integer(c - a) || is_nonpositive_integer(c - b)) {
        return 0.0;
    }
    return gamma_fn(c) * gamma_fn(c - a - b) / (gamma_fn(c - a) * gamma_fn(c - b));
}

/// m-th t-derivative from the ladder d/dt F(a,b,c) = (ab/c) F(a+1,b+1,c+1).
inline double gauss_2f1_derivative(double a, double b, double c, double t, unsigned m)
{
    double scale = 1.0;
    for (unsigned i = 0; i < m; ++i) {
        scale *= (a + i) * (b + i) / (c + i);
    }
    if (scale == 0.0) {
        return 0.0;
    }
    return scale * gauss_2f1(a + m, b + m, c + m, t);
}

struct Lemma32Row {
    double t = 0.0;
    /// F(a,b,a+b;t) / log(1/(1-t)).
    double log_ratio = 0.0;
    /// (1-t) d/dt F(a,b,a+b;t): the same limit by l'Hopital, faster to settle.
    double log_ratio_derivative = 0.0;
    /// |F(a,b,a+b-s;t)(1-t)^s - F(b-s,a-s,a+b-s;t)|.
    double euler_gap = 0.0;
    /// (1-t)^s F(a,b,a+b-s;t).
    double power_limit = 0.0;
};

struct Lemma32Report {
    double a = 0.0;
    double b = 0.0;
    double s = 0.0;
    double log_limit = 0.0;
    double power_limit = 0.0;
    std::vector<Lemma32Row> rows;
    double max_euler_gap = 0.0;
};

/// Limits and Euler's transformation for F(a, b; a+b; t) and F(a, b; a+b-s; t).
inline Lemma32Report lemma32_checks(double a, double b, double s, const std::vector<double> &t_grid)
{
    if (!(a > 0.0 && b > 0.0 && s > 0.0 && a > s && b > s)) {
        throw std::invalid_argument("lemma32_checks needs a, b, s > 0 with a > s and b > s");
    }
    Lemma32Report rep;
    rep.a = a;
    rep.b = b;
    rep.s = s;
    rep.log_limit = gamma_fn(a + b) / (gamma_fn(a) * gamma_fn(b));
    rep.power_limit = gamma_fn(a + b - s) * gamma_fn(s) / (gamma_fn(a) * gamma_fn(b));
    for (double t : t_grid) {
        Lemma32Row row;
        row.t = t;
        const double one_minus = 1.0 - t;
        if (t > 0.0) {
            row.log_ratio = gauss_2f1(a, b, a + b, t) / -std::log1p(-t);
            row.log_ratio_derivative = one_minus * gauss_2f1_derivative(a, b, a + b, t, 1);
        }
        const double lhs = gauss_2f1(a, b, a + b - s, t);
        row.power_limit = std::pow(one_minus, s) * lhs;
        row.euler_gap = std::abs(row.power_limit - gauss_2f1(b - s, a - s, a + b - s, t));
        rep.max_euler_gap = std::max(rep.max_euler_gap, row.euler_gap);
        rep.rows.push_back(row);
    }
    return rep;
}

/// h(t) = F(p/2, q/2, (p+q+n+1)/2; t) / F(...; 1), the radial factor making
/// h(|z|^4) f_{p,q} harmonic for the ball operator with tilde weights.
class RadialProfile {
public:
    RadialProfile(int p, int q, int n) : p_(p), q_(q), n_(n)
    {
        if (p < 0 || q < 0 || n < 1) {
            throw std::invalid_argument("radial profile needs p, q >= 0 and n >= 1");
        }
        a_ = p / 2.0;
        b_ = q / 2.0;
        c_ = (p + q + n + 1) / 2.0;
        // c - a - b = (n+1)/2 > 0, so the value at 1 is finite.
        norm_ = gauss_2f1_at_one(a_, b_, c_);
    }

    static constexpr double boundary_snap = 1e-12;

    int p() const { return p_; }
    int q() const { return q_; }
    int n() const { return n_; }
    HypergeomParams params() const { return {a_, b_, c_}; }
    double normalization() const { return norm_; }
    bool trivial() const { return p_ == 0 || q_ == 0; }

    /// m-th derivative of h at t in [0, 1]; t = 1 only for m = 0, where h = 1.
    double derivative(double t, unsigned m) const
    {
        if (trivial()) {
            return m == 0 ? 1.0 : 0.0;
        }
        // Points on the unit sphere land within a few ulps of t = 1; the
        // series cannot be summed there, and h(t) = 1 + O((1-t)) for n >= 1.
        if (m == 0 && t >= 1.0 - boundary_snap) {
            if (t > 1.0 + boundary_snap) {
                throw std::domain_error("radial profile: t > 1");
            }
            return 1.0;
        }
        return gauss_2f1_derivative(a_, b_, c_, t, m) / norm_;
    }

    double operator()(double t) const { return derivative(t, 0); }

    /// t(1-t) h'' + [c - (a+b+1) t] h' - ab h.
    double ode_residual(double t) const
    {
        return t * (1.0 - t) * derivative(t, 2) + (c_ - (a_ + b_ + 1.0) * t) * derivative(t, 1)
               - a_ * b_ * derivative(t, 0);
    }

private:
    int p_;
    int q_;
    int n_;
    double a_ = 0.0;
    double b_ = 0.0;
    double c_ = 0.0;
    double norm_ = 1.0;
};

inline RadialProfile radial_profile(int p, int q, int n)
{
    return {p, q, n};
}

enum class SingularityKind { smooth, log_type, half_power };

inline std::string to_string(SingularityKind k)
{
    switch (k) {
    case SingularityKind::smooth:
        return "smooth";
    case SingularityKind::log_type:
        return "log-type";
    case SingularityKind::half_power:
        return "half-power";
    }
    return "?";
}

struct SingularityClass {
    SingularityKind kind = SingularityKind::smooth;
    /// Exponent of (1-t): k for log-type, k + 1/2 for half-power, 0 when smooth.
    double exponent = 0.0;
    /// Fitted coefficient of (1-t)^k log(1-t) or (1-t)^(k+1/2).
    double coefficient = 0.0;
    /// ||F - fit|| / ||singular part of the fit|| on the grid.
    double relative_fit_residual = 0.0;
    /// max |F - fit| on the grid.
    double max_fit_error = 0.0;
    /// The grid could not separate the basis functions.
    bool unstable = false;
    std::vector<double> grid;

    std::string label() const
    {
        switch (kind) {
        case SingularityKind::smooth:
            return "smooth";
        case SingularityKind::log_type:
            return "log-type(" + std::to_string(static_cast<int>(exponent)) + ")";
        case SingularityKind::half_power:
            return "half-power(" + std::to_string(static_cast<int>(exponent - 0.5)) + "+1/2)";
        }
        return "?";
    }
};

/// t_j = 1 - 2^-j, j = 4..14.
inline std::vector<double> singularity_grid()
{
    std::vector<double> g;
    for (int j = 4; j <= 14; ++j) {
        g.push_back(1.0 - std::ldexp(1.0, -j));
    }
    return g;
}

/// Classifies the behaviour of F(p/2, q/2, (p+q+n+1)/2; t) at t = 1 and
/// confirms the singular term by least squares on the grid. With
/// c - a - b = (n+1)/2: n odd gives (1-t)^k log(1-t), k = (n+1)/2; n even
/// gives (1-t)^(k+1/2), k = n/2. The basis adds analytic powers up to k+1 and
/// the next singular order.
inline SingularityClass classify_singularity(int p, int q, int n)
{
    if (p < 0 || q < 0 || n < 2) {
        throw std::invalid_argument("classify_singularity needs p, q >= 0 and n >= 2");
    }
    SingularityClass out;
    if (p == 0 || q == 0) {
        return out;
    }
    const int k = n % 2 == 1 ? (n + 1) / 2 : n / 2;
    out.kind = n % 2 == 1 ? SingularityKind::log_type : SingularityKind::half_power;
    out.exponent = out.kind == SingularityKind::log_type ? k : k + 0.5;
    out.grid = singularity_grid();

    const double a = p / 2.0;
    const double b = q / 2.0;
    const double c = (p + q + n + 1) / 2.0;
    const auto rows = static_cast<Eigen::Index>(out.grid.size());
    const Eigen::Index analytic = k + 2;
    const Eigen::Index cols = analytic + 2;
    Eigen::MatrixXd basis(rows, cols);
    Eigen::VectorXd f(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double t = out.grid[static_cast<std::size_t>(i)];
        const double x = 1.0 - t;
        f(i) = gauss_2f1(a, b, c, t);
        for (Eigen::Index e = 0; e < analytic; ++e) {
            basis(i, e) = std::pow(x, static_cast<double>(e));
        }
        if (out.kind == SingularityKind::log_type) {
            basis(i, analytic) = std::pow(x, k) * std::log(x);
            basis(i, analytic + 1) = std::pow(x, k + 1) * std::log(x);
        } else {
            basis(i, analytic) = std::pow(x, k + 0.5);
            basis(i, analytic + 1) = std::pow(x, k + 1.5);
        }
    }
    // Column scaling keeps the least-squares problem well conditioned.
    Eigen::VectorXd scale = basis.colwise().norm().transpose();
    const Eigen::MatrixXd scaled = basis * scale.cwiseInverse().asDiagonal();
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
    out.unstable = qr.rank() < cols;
    const Eigen::VectorXd coef = qr.solve(f).cwiseQuotient(scale);
    const Eigen::VectorXd fit = basis * coef;
    const Eigen::VectorXd singular = basis.rightCols(2) * coef.tail(2);
    out.coefficient = coef(analytic);
    out.max_fit_error = (f - fit).cwiseAbs().maxCoeff();
    const double sn = singular.norm();
    out.relative_fit_residual = sn > 0.0 ? (f - fit).norm() / sn : std::numeric_limits<double>::infinity();
    return out;
}

} // namespace hua
