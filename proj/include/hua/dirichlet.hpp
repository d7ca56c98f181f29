#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hua/core/complex_matrix.hpp"
#include "hua/core/field.hpp"
#include "hua/core/parallel.hpp"
#include "hua/core/polynomial.hpp"
#include "hua/domains.hpp"
#include "hua/hypergeom.hpp"
#include "hua/kernels.hpp"

namespace hua {

/// sum_j d^2 f / dz_j dconj(z_j).
inline Polynomial euclidean_laplacian(const Polynomial &f)
{
    Polynomial out(f.vars());
    for (std::size_t j = 0; j < f.vars(); ++j) {
        out += f.d(j).dbar(j);
    }
    return out;
}

/// |z|^2 in n variables.
inline Polynomial squared_norm_polynomial(std::size_t n)
{
    Polynomial r(n);
    for (std::size_t j = 0; j < n; ++j) {
        r += Polynomial::variable(n, j) * Polynomial::conj_variable(n, j);
    }
    return r;
}

/// Harmonic part of a (p,q)-bihomogeneous polynomial in n variables:
///   H f = sum_i c_i |z|^(2i) L^i f,  c_0 = 1,  c_{i+1} = -c_i / ((i+1)(n+p+q-i-2)),
/// from L(|z|^(2i) g) = |z|^(2i) L g + i(n + deg g + i - 1)|z|^(2i-2) g.
inline Polynomial harmonic_projection(const Polynomial &f, int p, int q)
{
    const auto n = static_cast<int>(f.vars());
    const Polynomial rho = squared_norm_polynomial(f.vars());
    Polynomial out = f;
    Polynomial lap = f;
    Polynomial rho_i = Polynomial::constant(f.vars(), 1.0);
    double c = 1.0;
    for (int i = 0; i < std::min(p, q); ++i) {
        lap = euclidean_laplacian(lap);
        if (lap.is_zero()) {
            break;
        }
        c = -c / ((i + 1.0) * (n + p + q - i - 2.0));
        rho_i = rho_i * rho;
        out += c * (rho_i * lap);
    }
    return out;
}

/// A Euclidean-harmonic polynomial of pure bidegree (p, q) on C^n.
struct BidegreeHarmonic {
    int p = 0;
    int q = 0;
    Polynomial f;

    std::size_t n() const { return f.vars(); }
    Complex operator()(const std::vector<Complex> &z) const { return f.evaluate(z); }
};

namespace detail {

inline void multi_indices(std::size_t n, int degree, std::vector<int> &cur, std::size_t pos,
                          std::vector<std::vector<int>> &out)
{
    if (pos + 1 == n) {
        cur[pos] = degree;
        out.push_back(cur);
        return;
    }
    for (int k = degree; k >= 0; --k) {
        cur[pos] = k;
        multi_indices(n, degree - k, cur, pos + 1, out);
    }
}

} // namespace detail

/// All multi-indices of length n summing to degree.
inline std::vector<std::vector<int>> multi_indices(std::size_t n, int degree)
{
    std::vector<std::vector<int>> out;
    std::vector<int> cur(n, 0);
    detail::multi_indices(n, degree, cur, 0, out);
    return out;
}

/// Wraps a given polynomial, checking bidegree and harmonicity.
inline BidegreeHarmonic bidegree_harmonic(Polynomial f, int p, int q)
{
    if (!f.is_bihomogeneous(p, q)) {
        throw std::invalid_argument("polynomial is not of pure bidegree (" + std::to_string(p) + ", "
                                    + std::to_string(q) + ")");
    }
    if (max_coefficient(euclidean_laplacian(f)) > 1e-12 * std::max(1.0, max_coefficient(f))) {
        throw std::invalid_argument("polynomial is not harmonic");
    }
    return {p, q, std::move(f)};
}

/// Random harmonic polynomial of bidegree (p, q) on C^n: Gaussian coefficients
/// on every (p, q) monomial, then the harmonic projection.
inline BidegreeHarmonic make_bidegree(std::size_t n, int p, int q, std::uint64_t seed)
{
    if (n < 2) {
        throw std::invalid_argument("make_bidegree needs n >= 2");
    }
    if (p < 0 || q < 0) {
        throw std::invalid_argument("make_bidegree needs p, q >= 0");
    }
    if (p == 0 && q == 0) {
        return {0, 0, Polynomial::constant(n, 1.0)};
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    const auto hol = multi_indices(n, p);
    const auto anti = multi_indices(n, q);
    for (;;) {
        Polynomial f(n);
        for (const auto &a : hol) {
            for (const auto &b : anti) {
                const double re = g(rng);
                const double im = g(rng);
                f += Polynomial::monomial(n, Complex(re, im), a, b);
            }
        }
        Polynomial h = harmonic_projection(f, p, q);
        if (max_coefficient(h) > 1e-6) {
            return {p, q, std::move(h)};
        }
    }
}

/// u(z) = sum h_{p,q}(|z|^4) f_{p,q}(z).
class DirichletSolution {
public:
    DirichletSolution(std::vector<BidegreeHarmonic> fs, std::size_t n) : n_(n)
    {
        for (auto &f : fs) {
            if (f.n() != n) {
                throw ShapeError("boundary term lives in the wrong dimension");
            }
            Prepared t{RadialProfile(f.p, f.q, static_cast<int>(n)), f, {}, {}, {}};
            for (std::size_t a = 0; a < n; ++a) {
                t.fa.push_back(f.f.d(a));
                t.fb.push_back(f.f.dbar(a));
            }
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b) {
                    t.fab.push_back(t.fa[a].dbar(b));
                }
            }
            terms_.push_back(std::move(t));
        }
    }

    std::size_t n() const { return n_; }
    std::size_t size() const { return terms_.size(); }
    const RadialProfile &profile(std::size_t i) const { return terms_.at(i).h; }
    const BidegreeHarmonic &boundary_term(std::size_t i) const { return terms_.at(i).f; }

    Complex operator()(const std::vector<Complex> &z) const
    {
        const double rho = norm2(z);
        Complex u = 0.0;
        for (const auto &t : terms_) {
            u += t.h(rho * rho) * t.f(z);
        }
        return u;
    }

    /// sum f_{p,q}(z), the boundary data.
    Complex boundary_value(const std::vector<Complex> &z) const
    {
        Complex u = 0.0;
        for (const auto &t : terms_) {
            u += t.f(z);
        }
        return u;
    }

    /// Full Wirtinger Hessian of h(rho^2) f with rho = |z|^2:
    ///   4 rho^2 h'' zbar_a z_b f + 2 h' (zbar_a z_b + rho d_ab) f
    ///   + 2 rho h' (zbar_a f_bbar + z_b f_a) + h f_{a bbar}.
    ComplexMatrix hessian(const std::vector<Complex> &z) const
    {
        const double rho = norm2(z);
        const double t = rho * rho;
        const auto N = static_cast<Eigen::Index>(n_);
        ComplexMatrix H = ComplexMatrix::Zero(N, N);
        for (const auto &term : terms_) {
            const double h0 = term.h.derivative(t, 0);
            const double h1 = term.h.derivative(t, 1);
            const double h2 = term.h.derivative(t, 2);
            const Complex f = term.f(z);
            std::vector<Complex> fa(n_);
            std::vector<Complex> fb(n_);
            for (std::size_t a = 0; a < n_; ++a) {
                fa[a] = term.fa[a].evaluate(z);
                fb[a] = term.fb[a].evaluate(z);
            }
            for (std::size_t a = 0; a < n_; ++a) {
                for (std::size_t b = 0; b < n_; ++b) {
                    const Complex za_bar = std::conj(z[a]);
                    const Complex zb = z[b];
                    H(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b))
                        += 4.0 * t * h2 * za_bar * zb * f + 2.0 * h1 * (za_bar * zb + (a == b ? rho : 0.0)) * f
                           + 2.0 * rho * h1 * (za_bar * fb[b] + zb * fa[a]) + h0 * term.fab[a * n_ + b].evaluate(z);
                }
            }
        }
        return H;
    }

    /// The solution as a 1 x n field carrying its analytic Hessian.
    WirtingerField field() const
    {
        auto self = std::make_shared<const DirichletSolution>(*this);
        return WirtingerField::opaque(
            1, n_, [self](const ComplexMatrix &z) { return (*self)(to_row_major(z)); },
            [self](const ComplexMatrix &z) { return self->hessian(to_row_major(z)); });
    }

private:
    struct Prepared {
        RadialProfile h;
        BidegreeHarmonic f;
        std::vector<Polynomial> fa;
        std::vector<Polynomial> fb;
        std::vector<Polynomial> fab;
    };

    static double norm2(const std::vector<Complex> &z)
    {
        double r = 0.0;
        for (const auto &x : z) {
            r += std::norm(x);
        }
        return r;
    }

    std::size_t n_;
    std::vector<Prepared> terms_;
};

inline DirichletSolution solve_tilde(std::vector<BidegreeHarmonic> fs, std::size_t n)
{
    return {std::move(fs), n};
}

/// Mean of a complex Monte Carlo estimate with its standard error
/// sqrt((var Re + var Im) / N).
struct MonteCarloEstimate {
    Complex mean;
    double std_error = 0.0;
    std::size_t samples = 0;
};

using BoundaryFunction = std::function<Complex(const ComplexMatrix &)>;

inline constexpr std::size_t poisson_chunk = 4096;

/// Poisson integral of phi at z by Monte Carlo over Haar-distributed Silov
/// points. Chunk c draws from seed stream (seed, c); chunks are combined in
/// order, so the estimate is independent of the worker count.
inline MonteCarloEstimate poisson_solve(const MatrixPoint &z, const BoundaryFunction &phi, std::size_t samples,
                                        std::uint64_t seed)
{
    if (samples == 0) {
        throw std::invalid_argument("poisson_solve needs at least one sample");
    }
    const std::size_t chunks = (samples + poisson_chunk - 1) / poisson_chunk;
    struct Partial {
        double n = 0.0;
        Complex mean;
        double m2 = 0.0;
    };
    std::vector<Partial> parts(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        const std::size_t count = std::min(poisson_chunk, samples - c * poisson_chunk);
        std::seed_seq seq{seed, static_cast<std::uint64_t>(c)};
        std::array<std::uint64_t, 1> stream{};
        seq.generate(stream.begin(), stream.end());
        Partial part;
        for (const auto &w : sample_silov(z.spec, stream[0], count)) {
            const Complex v = KernelPair::make(z, w).kernel() * phi(w.value);
            part.n += 1.0;
            const Complex delta = v - part.mean;
            part.mean += delta / part.n;
            part.m2 += std::real(std::conj(delta) * (v - part.mean));
        }
        parts[c] = part;
    });
    Partial total;
    for (const auto &p : parts) {
        const double n = total.n + p.n;
        const Complex delta = p.mean - total.mean;
        total.m2 += p.m2 + std::norm(delta) * total.n * p.n / n;
        total.mean += delta * (p.n / n);
        total.n = n;
    }
    MonteCarloEstimate out;
    out.mean = total.mean;
    out.samples = samples;
    out.std_error = total.n > 1.0 ? std::sqrt(total.m2 / (total.n - 1.0) / total.n) : 0.0;
    return out;
}

struct PluriharmonicityResult {
    bool pluriharmonic = false;
    double max_hessian_norm = 0.0;
};

/// Pluriharmonic iff the full complex Hessian (Frobenius norm) stays below tol
/// at every point. Exact for polynomial fields, else analytic or FD.
inline PluriharmonicityResult pluriharmonicity_test(const WirtingerField &u, const std::vector<MatrixPoint> &points,
                                                    double tol = 1e-8, FdOptions fd = {})
{
    PluriharmonicityResult r;
    for (const auto &p : points) {
        r.max_hessian_norm = std::max(r.max_hessian_norm, wirtinger_hessian(u, p.value, fd).norm());
    }
    r.pluriharmonic = r.max_hessian_norm < tol;
    return r;
}

} // namespace hua
