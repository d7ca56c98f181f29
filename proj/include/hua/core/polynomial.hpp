#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hua/core/complex_matrix.hpp"

namespace hua {

/// Polynomial in N complex variables and their conjugates,
///   sum c * prod z_a^{e_a} * prod conj(z_a)^{f_a}.
/// Exponent keys have length 2N: holomorphic exponents first, then
/// anti-holomorphic ones. Matrix variables are flattened row-major.
class Polynomial {
public:
    using Exponent = std::vector<std::uint16_t>;
    using Terms = std::map<Exponent, Complex>;

    static constexpr double drop_threshold = 1e-15;

    Polynomial() = default;
    explicit Polynomial(std::size_t vars) : vars_(vars) {}

    static Polynomial constant(std::size_t vars, Complex c)
    {
        Polynomial p(vars);
        p.add_term(Exponent(2 * vars, 0), c);
        return p;
    }

    /// z_a
    static Polynomial variable(std::size_t vars, std::size_t a, Complex c = 1.0)
    {
        check_index(vars, a);
        Exponent e(2 * vars, 0);
        e[a] = 1;
        Polynomial p(vars);
        p.add_term(e, c);
        return p;
    }

    /// conj(z_a)
    static Polynomial conj_variable(std::size_t vars, std::size_t a, Complex c = 1.0)
    {
        check_index(vars, a);
        Exponent e(2 * vars, 0);
        e[vars + a] = 1;
        Polynomial p(vars);
        p.add_term(e, c);
        return p;
    }

    /// c * prod z^hol * prod conj(z)^anti
    static Polynomial monomial(std::size_t vars, Complex c, const std::vector<int> &hol, const std::vector<int> &anti)
    {
        if (hol.size() != vars || anti.size() != vars) {
            throw ShapeError("monomial: exponent vectors must have one entry per variable");
        }
        Exponent e(2 * vars, 0);
        for (std::size_t a = 0; a < vars; ++a) {
            if (hol[a] < 0 || anti[a] < 0) {
                throw std::invalid_argument("monomial: negative exponent");
            }
            e[a] = static_cast<std::uint16_t>(hol[a]);
            e[vars + a] = static_cast<std::uint16_t>(anti[a]);
        }
        Polynomial p(vars);
        p.add_term(e, c);
        return p;
    }

    std::size_t vars() const { return vars_; }
    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Exponent &e, Complex c)
    {
        if (e.size() != 2 * vars_) {
            throw ShapeError("add_term: exponent length mismatch");
        }
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
        }
        if (std::abs(it->second) < drop_threshold) {
            terms_.erase(it);
        }
    }

    Polynomial &operator+=(const Polynomial &o)
    {
        require_same(o);
        for (const auto &[e, c] : o.terms_) {
            add_term(e, c);
        }
        return *this;
    }

    Polynomial &operator-=(const Polynomial &o)
    {
        require_same(o);
        for (const auto &[e, c] : o.terms_) {
            add_term(e, -c);
        }
        return *this;
    }

    Polynomial &operator*=(Complex s)
    {
        Polynomial out(vars_);
        for (const auto &[e, c] : terms_) {
            out.add_term(e, c * s);
        }
        *this = std::move(out);
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, Complex s) { return a *= s; }
    friend Polynomial operator*(Complex s, Polynomial a) { return a *= s; }
    friend Polynomial operator-(Polynomial a) { return a *= -1.0; }

    friend Polynomial operator*(const Polynomial &a, const Polynomial &b)
    {
        a.require_same(b);
        Polynomial out(a.vars_);
        Exponent e(2 * a.vars_);
        for (const auto &[ea, ca] : a.terms_) {
            for (const auto &[eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < e.size(); ++i) {
                    e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
                }
                out.add_term(e, ca * cb);
            }
        }
        return out;
    }

    Polynomial pow(unsigned k) const
    {
        Polynomial out = constant(vars_, 1.0);
        for (unsigned i = 0; i < k; ++i) {
            out = out * *this;
        }
        return out;
    }

    /// Complex conjugate: swaps z and conj(z) exponents, conjugates coefficients.
    Polynomial conj() const
    {
        Polynomial out(vars_);
        for (const auto &[e, c] : terms_) {
            Exponent f(e.size());
            for (std::size_t a = 0; a < vars_; ++a) {
                f[a] = e[vars_ + a];
                f[vars_ + a] = e[a];
            }
            out.add_term(f, std::conj(c));
        }
        return out;
    }

    /// d/dz_a
    Polynomial d(std::size_t a) const { return differentiate(a); }

    /// d/d conj(z_a)
    Polynomial dbar(std::size_t a) const
    {
        check_index(vars_, a);
        return differentiate(vars_ + a);
    }

    std::size_t total_degree() const
    {
        std::size_t best = 0;
        for (const auto &[e, c] : terms_) {
            std::size_t d = 0;
            for (auto x : e) {
                d += x;
            }
            best = std::max(best, d);
        }
        return best;
    }

    /// True when every monomial has holomorphic degree p and anti-holomorphic degree q.
    bool is_bihomogeneous(int p, int q) const
    {
        for (const auto &[e, c] : terms_) {
            int hp = 0;
            int hq = 0;
            for (std::size_t a = 0; a < vars_; ++a) {
                hp += e[a];
                hq += e[vars_ + a];
            }
            if (hp != p || hq != q) {
                return false;
            }
        }
        return true;
    }

    Complex evaluate(const std::vector<Complex> &z) const
    {
        if (z.size() != vars_) {
            throw ShapeError("evaluate: expected " + std::to_string(vars_) + " variables, got "
                             + std::to_string(z.size()));
        }
        // Power tables up to the largest exponent in use.
        std::vector<std::vector<Complex>> hol(vars_);
        std::vector<std::vector<Complex>> anti(vars_);
        std::vector<std::uint16_t> max_e(2 * vars_, 0);
        for (const auto &[e, c] : terms_) {
            for (std::size_t i = 0; i < e.size(); ++i) {
                max_e[i] = std::max(max_e[i], e[i]);
            }
        }
        for (std::size_t a = 0; a < vars_; ++a) {
            hol[a] = powers(z[a], max_e[a]);
            anti[a] = powers(std::conj(z[a]), max_e[vars_ + a]);
        }
        Complex sum = 0.0;
        for (const auto &[e, c] : terms_) {
            Complex t = c;
            for (std::size_t a = 0; a < vars_; ++a) {
                t *= hol[a][e[a]] * anti[a][e[vars_ + a]];
            }
            sum += t;
        }
        return sum;
    }

    Complex evaluate(const ComplexMatrix &z) const { return evaluate(to_row_major(z)); }

    /// Substitutes z_a -> map[a](lambda) and conj(z_a) -> conj(map[a](lambda)).
    /// Each map[a] must be a polynomial in the new variables; holomorphy is the
    /// caller's concern (it is what makes the result a pullback).
    Polynomial compose(const std::vector<Polynomial> &map) const
    {
        if (map.size() != vars_) {
            throw ShapeError("compose: map has " + std::to_string(map.size()) + " components, expected "
                             + std::to_string(vars_));
        }
        if (map.empty()) {
            return *this;
        }
        const std::size_t out_vars = map.front().vars();
        std::vector<Polynomial> conj_map;
        conj_map.reserve(map.size());
        for (const auto &m : map) {
            if (m.vars() != out_vars) {
                throw ShapeError("compose: map components disagree on arity");
            }
            conj_map.push_back(m.conj());
        }
        std::vector<std::vector<Polynomial>> hol_pows(vars_);
        std::vector<std::vector<Polynomial>> anti_pows(vars_);
        Polynomial out(out_vars);
        for (const auto &[e, c] : terms_) {
            Polynomial t = constant(out_vars, c);
            for (std::size_t a = 0; a < vars_; ++a) {
                if (e[a] > 0) {
                    t = t * cached_power(hol_pows[a], map[a], e[a]);
                }
                if (e[vars_ + a] > 0) {
                    t = t * cached_power(anti_pows[a], conj_map[a], e[vars_ + a]);
                }
            }
            out += t;
        }
        return out;
    }

private:
    std::size_t vars_ = 0;
    Terms terms_;

    static void check_index(std::size_t vars, std::size_t a)
    {
        if (a >= vars) {
            throw std::out_of_range("variable index " + std::to_string(a) + " out of range for "
                                    + std::to_string(vars) + " variables");
        }
    }

    void require_same(const Polynomial &o) const
    {
        if (o.vars_ != vars_) {
            throw ShapeError("polynomials over different variable counts (" + std::to_string(vars_) + " vs "
                             + std::to_string(o.vars_) + ")");
        }
    }

    Polynomial differentiate(std::size_t slot) const
    {
        if (slot >= 2 * vars_) {
            throw std::out_of_range("derivative slot out of range");
        }
        Polynomial out(vars_);
        for (const auto &[e, c] : terms_) {
            if (e[slot] == 0) {
                continue;
            }
            Exponent f = e;
            f[slot] -= 1;
            out.add_term(f, c * static_cast<double>(e[slot]));
        }
        return out;
    }

    static std::vector<Complex> powers(Complex x, std::uint16_t k)
    {
        std::vector<Complex> p(static_cast<std::size_t>(k) + 1);
        p[0] = 1.0;
        for (std::size_t i = 1; i < p.size(); ++i) {
            p[i] = p[i - 1] * x;
        }
        return p;
    }

    static const Polynomial &cached_power(std::vector<Polynomial> &cache, const Polynomial &base, std::size_t k)
    {
        if (cache.empty()) {
            cache.push_back(constant(base.vars(), 1.0));
        }
        while (cache.size() <= k) {
            cache.push_back(cache.back() * base);
        }
        return cache[k];
    }
};

/// Largest coefficient modulus; 0 for the zero polynomial.
inline double max_coefficient(const Polynomial &p)
{
    double m = 0.0;
    for (const auto &[e, c] : p.terms()) {
        m = std::max(m, std::abs(c));
    }
    return m;
}

/// Exact complex Hessian H[a][b] = d^2 u / dz_a d conj(z_b).
inline ComplexMatrix polynomial_hessian(const Polynomial &u, const std::vector<Complex> &z)
{
    const auto n = static_cast<Eigen::Index>(u.vars());
    ComplexMatrix h(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const Polynomial ua = u.d(static_cast<std::size_t>(a));
        for (Eigen::Index b = 0; b < n; ++b) {
            h(a, b) = ua.dbar(static_cast<std::size_t>(b)).evaluate(z);
        }
    }
    return h;
}

/// Exact gradient g[a] = du/dz_a.
inline ComplexVector polynomial_gradient(const Polynomial &u, const std::vector<Complex> &z)
{
    const auto n = static_cast<Eigen::Index>(u.vars());
    ComplexVector g(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        g(a) = u.d(static_cast<std::size_t>(a)).evaluate(z);
    }
    return g;
}

/// Determinant of a square matrix of polynomials by cofactor expansion along
/// the first row. Intended for the small (n <= 4) matrices of this library.
inline Polynomial polynomial_determinant(const std::vector<std::vector<Polynomial>> &m)
{
    const std::size_t n = m.size();
    if (n == 0) {
        throw ShapeError("polynomial_determinant: empty matrix");
    }
    for (const auto &row : m) {
        if (row.size() != n) {
            throw ShapeError("polynomial_determinant: matrix is not square");
        }
    }
    const std::size_t vars = m[0][0].vars();
    if (n == 1) {
        return m[0][0];
    }
    Polynomial out(vars);
    for (std::size_t col = 0; col < n; ++col) {
        if (m[0][col].is_zero()) {
            continue;
        }
        std::vector<std::vector<Polynomial>> minor;
        minor.reserve(n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<Polynomial> row;
            row.reserve(n - 1);
            for (std::size_t c = 0; c < n; ++c) {
                if (c != col) {
                    row.push_back(m[r][c]);
                }
            }
            minor.push_back(std::move(row));
        }
        const Polynomial term = m[0][col] * polynomial_determinant(minor);
        if (col % 2 == 0) {
            out += term;
        } else {
            out -= term;
        }
    }
    return out;
}

} // namespace hua
