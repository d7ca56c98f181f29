#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "hua/core/complex_matrix.hpp"

namespace hua {

using ScalarFn = std::function<Complex(const ComplexMatrix &)>;

struct FdOptions {
    /// Step size; values <= 0 select default_step (plain) or
    /// richardson_step (extrapolated).
    double step = 0.0;
    /// One level of Richardson extrapolation (h and h/2).
    bool richardson = false;
};

inline double default_step(const ComplexMatrix &z)
{
    return 1e-4 * std::max(1.0, z.norm());
}

/// With the h^2 error removed, roundoff (eps / h^2) dominates at 1e-4, so the
/// extrapolated stencil starts from a larger step near eps^(1/6).
inline double richardson_step(const ComplexMatrix &z)
{
    return 2e-3 * std::max(1.0, z.norm());
}

inline double resolve_step(const FdOptions &opts, const ComplexMatrix &z)
{
    if (opts.step > 0.0) {
        return opts.step;
    }
    return opts.richardson ? richardson_step(z) : default_step(z);
}

/// Unit matrices E_{ja}, in row-major order of (j, a).
inline std::vector<ComplexMatrix> coordinate_directions(std::size_t rows, std::size_t cols)
{
    std::vector<ComplexMatrix> dirs;
    dirs.reserve(rows * cols);
    for (std::size_t j = 0; j < rows; ++j) {
        for (std::size_t a = 0; a < cols; ++a) {
            ComplexMatrix e = ComplexMatrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
            e(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(a)) = 1.0;
            dirs.push_back(std::move(e));
        }
    }
    return dirs;
}

namespace detail {

inline ComplexMatrix fd_hessian_once(const ScalarFn &f, const ComplexMatrix &z, const std::vector<ComplexMatrix> &dirs,
                                     double h)
{
    const std::size_t n = dirs.size();
    const std::size_t m = 2 * n;
    // Real direction r: dirs[r % n] scaled by 1 (x part) or i (y part).
    auto real_dir = [&](std::size_t r) -> ComplexMatrix {
        return r < n ? dirs[r] : ComplexMatrix(I_unit * dirs[r - n]);
    };
    std::vector<ComplexMatrix> rd;
    rd.reserve(m);
    for (std::size_t r = 0; r < m; ++r) {
        rd.push_back(real_dir(r));
    }
    const Complex f0 = f(z);
    Eigen::MatrixXcd real_h(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t r = 0; r < m; ++r) {
        const Complex fp = f(z + h * rd[r]);
        const Complex fm = f(z - h * rd[r]);
        real_h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r)) = (fp - 2.0 * f0 + fm) / (h * h);
        for (std::size_t s = r + 1; s < m; ++s) {
            const Complex fpp = f(z + h * (rd[r] + rd[s]));
            const Complex fpm = f(z + h * (rd[r] - rd[s]));
            const Complex fmp = f(z - h * (rd[r] - rd[s]));
            const Complex fmm = f(z - h * (rd[r] + rd[s]));
            const Complex v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            real_h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s)) = v;
            real_h(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(r)) = v;
        }
    }
    ComplexMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const auto xa = static_cast<Eigen::Index>(a);
            const auto ya = static_cast<Eigen::Index>(a + n);
            const auto xb = static_cast<Eigen::Index>(b);
            const auto yb = static_cast<Eigen::Index>(b + n);
            out(xa, xb) = 0.25 * (real_h(xa, xb) + real_h(ya, yb) + I_unit * (real_h(xa, yb) - real_h(ya, xb)));
        }
    }
    return out;
}

inline ComplexVector fd_gradient_once(const ScalarFn &f, const ComplexMatrix &z, const std::vector<ComplexMatrix> &dirs,
                                      double h)
{
    ComplexVector g(static_cast<Eigen::Index>(dirs.size()));
    for (std::size_t a = 0; a < dirs.size(); ++a) {
        const Complex dx = (f(z + h * dirs[a]) - f(z - h * dirs[a])) / (2.0 * h);
        const ComplexMatrix iy = I_unit * dirs[a];
        const Complex dy = (f(z + h * iy) - f(z - h * iy)) / (2.0 * h);
        g(static_cast<Eigen::Index>(a)) = 0.5 * (dx - I_unit * dy);
    }
    return g;
}

} // namespace detail

/// H[a][b] = d^2 f / dt_a d conj(t_b) for f(z + sum t_a dirs[a]), by central
/// differences in the real coordinates:
///   d d-bar = 1/4 (d_xx + d_yy) + i/4 (d_xy - d_yx).
inline ComplexMatrix fd_hessian(const ScalarFn &f, const ComplexMatrix &z, const std::vector<ComplexMatrix> &dirs,
                                FdOptions opts = {})
{
    const double h = resolve_step(opts, z);
    ComplexMatrix coarse = detail::fd_hessian_once(f, z, dirs, h);
    if (!opts.richardson) {
        return coarse;
    }
    ComplexMatrix fine = detail::fd_hessian_once(f, z, dirs, 0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

inline ComplexMatrix fd_hessian(const ScalarFn &f, const ComplexMatrix &z, FdOptions opts = {})
{
    return fd_hessian(f, z, coordinate_directions(static_cast<std::size_t>(z.rows()), static_cast<std::size_t>(z.cols())),
                      opts);
}

/// g[a] = d f / dt_a along dirs[a].
inline ComplexVector fd_gradient(const ScalarFn &f, const ComplexMatrix &z, const std::vector<ComplexMatrix> &dirs,
                                 FdOptions opts = {})
{
    const double h = resolve_step(opts, z);
    ComplexVector coarse = detail::fd_gradient_once(f, z, dirs, h);
    if (!opts.richardson) {
        return coarse;
    }
    ComplexVector fine = detail::fd_gradient_once(f, z, dirs, 0.5 * h);
    return (4.0 * fine - coarse) / 3.0;
}

inline ComplexVector fd_gradient(const ScalarFn &f, const ComplexMatrix &z, FdOptions opts = {})
{
    return fd_gradient(f, z,
                       coordinate_directions(static_cast<std::size_t>(z.rows()), static_cast<std::size_t>(z.cols())),
                       opts);
}

/// Constraint tying the entries of a square matrix variable.
enum class Symmetry { none, symmetric, antisymmetric };

/// How derivatives of fields on constrained (symmetric / antisymmetric)
/// matrices are indexed.
enum class Convention {
    /// d/dz_{ja} treats each independent entry as one coordinate, as in
    /// d W / d z_{ja} = -(E_ja + E_aj) w* for symmetric z.
    independent,
    /// d/dz_{ja} of u((z + z^t)/2) (resp. (z - z^t)/2) on the full matrix.
    extension,
};

/// Maps a gradient over all n^2 entries (row-major) to the chosen convention.
inline ComplexVector reduce_gradient(const ComplexVector &full, std::size_t n, Symmetry sym,
                                     Convention conv = Convention::independent)
{
    if (sym == Symmetry::none) {
        return full;
    }
    if (static_cast<std::size_t>(full.size()) != n * n) {
        throw ShapeError("reduce_gradient: gradient length does not match n*n");
    }
    const double sign = sym == Symmetry::symmetric ? 1.0 : -1.0;
    ComplexVector out(full.size());
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t a = 0; a < n; ++a) {
            const auto ja = static_cast<Eigen::Index>(j * n + a);
            const auto aj = static_cast<Eigen::Index>(a * n + j);
            Complex v = j == a ? (sym == Symmetry::symmetric ? full(ja) : Complex{}) : full(ja) + sign * full(aj);
            if (conv == Convention::extension) {
                v = j == a ? v : 0.5 * v;
            }
            out(ja) = v;
        }
    }
    return out;
}

/// Maps a complex Hessian over all n^2 entries to the chosen convention.
/// independent: sum over the tied index pairs (ja)<->(aj), (kb)<->(bk),
/// counting each distinct index once; extension: 1/4 of the four-term
/// (signed) sum, i.e. the Hessian of u((z +- z^t)/2).
inline ComplexMatrix reduce_hessian(const ComplexMatrix &full, std::size_t n, Symmetry sym,
                                    Convention conv = Convention::independent)
{
    if (sym == Symmetry::none) {
        return full;
    }
    if (static_cast<std::size_t>(full.rows()) != n * n || static_cast<std::size_t>(full.cols()) != n * n) {
        throw ShapeError("reduce_hessian: Hessian shape does not match n*n");
    }
    const double sign = sym == Symmetry::symmetric ? 1.0 : -1.0;
    const auto N = static_cast<Eigen::Index>(n * n);
    ComplexMatrix out(N, N);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t a = 0; a < n; ++a) {
            const auto ja = static_cast<Eigen::Index>(j * n + a);
            const auto aj = static_cast<Eigen::Index>(a * n + j);
            for (std::size_t k = 0; k < n; ++k) {
                for (std::size_t b = 0; b < n; ++b) {
                    const auto kb = static_cast<Eigen::Index>(k * n + b);
                    const auto bk = static_cast<Eigen::Index>(b * n + k);
                    const Complex four = full(ja, kb) + sign * full(aj, kb) + sign * full(ja, bk) + full(aj, bk);
                    Complex v;
                    if (conv == Convention::extension) {
                        v = 0.25 * four;
                    } else if (j == a && k == b) {
                        v = sym == Symmetry::symmetric ? full(ja, kb) : Complex{};
                    } else if (j == a) {
                        v = sym == Symmetry::symmetric ? full(ja, kb) + full(ja, bk) : Complex{};
                    } else if (k == b) {
                        v = sym == Symmetry::symmetric ? full(ja, kb) + full(aj, kb) : Complex{};
                    } else {
                        v = four;
                    }
                    out(ja, kb) = v;
                }
            }
        }
    }
    return out;
}

} // namespace hua
