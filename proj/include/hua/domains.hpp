#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hua/core/complex_matrix.hpp"
#include "hua/core/wirtinger.hpp"

namespace hua {

/// Requested operation has no meaning for this domain family.
class UnsupportedError : public std::domain_error {
public:
    explicit UnsupportedError(const std::string &what) : std::domain_error(what) {}
};

/// Input point lies outside the required domain.
class OutsideDomainError : public std::domain_error {
public:
    explicit OutsideDomainError(const std::string &what) : std::domain_error(what) {}
};

enum class Family { I, II, III, IV };

/// One of the classical domains I(m,n), II(n), III(n), IV(n).
/// Points are rows() x cols() matrices; IV(n) points are 1 x n row vectors.
struct DomainSpec {
    Family family = Family::I;
    int m = 1;
    int n = 1;

    static DomainSpec type_I(int m, int n)
    {
        if (m < 1 || n < 1 || m > n) {
            throw std::invalid_argument("I(m,n) needs 1 <= m <= n");
        }
        return {Family::I, m, n};
    }
    static DomainSpec type_II(int n) { return square(Family::II, n); }
    static DomainSpec type_III(int n) { return square(Family::III, n); }
    static DomainSpec type_IV(int n) { return square(Family::IV, n); }

    std::size_t rows() const
    {
        return static_cast<std::size_t>(family == Family::I ? m : (family == Family::IV ? 1 : n));
    }
    std::size_t cols() const { return static_cast<std::size_t>(n); }
    std::size_t dimension() const { return rows() * cols(); }

    Symmetry symmetry() const
    {
        switch (family) {
        case Family::II:
            return Symmetry::symmetric;
        case Family::III:
            return Symmetry::antisymmetric;
        default:
            return Symmetry::none;
        }
    }

    std::string name() const
    {
        switch (family) {
        case Family::I:
            return "I(" + std::to_string(m) + "," + std::to_string(n) + ")";
        case Family::II:
            return "II(" + std::to_string(n) + ")";
        case Family::III:
            return "III(" + std::to_string(n) + ")";
        case Family::IV:
            return "IV(" + std::to_string(n) + ")";
        }
        return "?";
    }

    /// Parses "I:2,3", "II:2", "III:4", "IV:2".
    static DomainSpec parse(const std::string &text)
    {
        const auto colon = text.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("domain '" + text + "': expected FAMILY:ARGS");
        }
        const std::string fam = text.substr(0, colon);
        std::vector<int> args;
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                args.push_back(std::stoi(item, &used));
                if (used != item.size()) {
                    throw std::invalid_argument(item);
                }
            } catch (const std::exception &) {
                throw std::invalid_argument("domain '" + text + "': bad integer '" + item + "'");
            }
        }
        if (fam == "I" && args.size() == 2) {
            return type_I(args[0], args[1]);
        }
        if (args.size() != 1) {
            throw std::invalid_argument("domain '" + text + "': wrong argument count");
        }
        if (fam == "II") {
            return type_II(args[0]);
        }
        if (fam == "III") {
            return type_III(args[0]);
        }
        if (fam == "IV") {
            return type_IV(args[0]);
        }
        throw std::invalid_argument("domain '" + text + "': unknown family '" + fam + "'");
    }

    friend bool operator==(const DomainSpec &, const DomainSpec &) = default;

private:
    static DomainSpec square(Family f, int n)
    {
        if (n < 1) {
            throw std::invalid_argument("domain size must be positive");
        }
        return {f, n, n};
    }
};

struct Rational {
    long num = 0;
    long den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    friend bool operator==(const Rational &a, const Rational &b) { return a.num * b.den == b.num * a.den; }
};

inline Rational make_rational(long num, long den)
{
    const long g = std::gcd(num, den);
    return {num / g, den / g};
}

/// Exponent of the Poisson-Szego kernel.
inline Rational kappa(const DomainSpec &spec)
{
    switch (spec.family) {
    case Family::I:
        return make_rational(spec.n, 1);
    case Family::II:
        return make_rational(spec.n + 1, 2);
    case Family::III:
        return spec.n % 2 == 0 ? make_rational(spec.n - 1, 2) : make_rational(spec.n, 2);
    case Family::IV:
        break;
    }
    throw UnsupportedError("no Poisson-Szego exponent for " + spec.name());
}

/// A point of a domain's ambient space. Construction checks shape and the
/// (anti)symmetry constraint, not membership.
struct MatrixPoint {
    DomainSpec spec;
    ComplexMatrix value;

    MatrixPoint(DomainSpec s, ComplexMatrix v) : spec(s), value(std::move(v))
    {
        if (static_cast<std::size_t>(value.rows()) != spec.rows()
            || static_cast<std::size_t>(value.cols()) != spec.cols()) {
            throw ShapeError(spec.name() + " expects " + std::to_string(spec.rows()) + "x"
                             + std::to_string(spec.cols()) + ", got " + std::to_string(value.rows()) + "x"
                             + std::to_string(value.cols()));
        }
        const double tol = 1e-14 * std::max(1.0, max_abs(value));
        if (spec.family == Family::II && !is_symmetric(value, tol)) {
            throw std::invalid_argument(spec.name() + " point must be symmetric");
        }
        if (spec.family == Family::III && !is_antisymmetric(value, tol)) {
            throw std::invalid_argument(spec.name() + " point must be antisymmetric");
        }
    }
};

struct Membership {
    bool inside = false;
    /// Matrix families: smallest eigenvalue of I - zz*. IV: distance to the
    /// binding constraint, min(1 - 2|z|^2 + |s|^2, 1 - |s|^2) with s = sum z_j^2.
    double margin = 0.0;
};

inline Membership contains(const DomainSpec &spec, const ComplexMatrix &z)
{
    if (static_cast<std::size_t>(z.rows()) != spec.rows() || static_cast<std::size_t>(z.cols()) != spec.cols()) {
        throw ShapeError("contains: shape mismatch for " + spec.name());
    }
    if (spec.family == Family::IV) {
        const double norm2 = z.squaredNorm();
        const double s2 = std::norm((z * z.transpose())(0, 0));
        const double margin = std::min(1.0 - 2.0 * norm2 + s2, 1.0 - s2);
        return {margin > 0.0, margin};
    }
    const ComplexMatrix v = identity(spec.rows()) - z * z.adjoint();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(v, Eigen::EigenvaluesOnly);
    const double margin = es.eigenvalues().minCoeff();
    return {margin > 0.0, margin};
}

inline Membership contains(const MatrixPoint &p)
{
    return contains(p.spec, p.value);
}

namespace detail {

inline ComplexMatrix gaussian(std::mt19937_64 &rng, std::size_t rows, std::size_t cols)
{
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double re = g(rng);
            const double im = g(rng);
            m(r, c) = Complex(re, im);
        }
    }
    return m;
}

/// Haar unitary: QR of a complex Gaussian with the phases of R's diagonal
/// moved into Q.
inline ComplexMatrix haar_unitary(std::mt19937_64 &rng, std::size_t n)
{
    const ComplexMatrix g = gaussian(rng, n, n);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * identity(n);
    const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index k = 0; k < q.cols(); ++k) {
        const Complex d = r(k, k);
        const double a = std::abs(d);
        q.col(k) *= a > 0.0 ? d / a : Complex(1.0);
    }
    return q;
}

/// Block diagonal of [[0,1],[-1,0]] blocks; a trailing zero row/column when n is odd.
inline ComplexMatrix symplectic_block(std::size_t n)
{
    ComplexMatrix j = ComplexMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k + 1 < n; k += 2) {
        j(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k + 1)) = 1.0;
        j(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k)) = -1.0;
    }
    return j;
}

} // namespace detail

inline constexpr double default_margin_floor = 0.05;

/// Interior samples: a Gaussian draw (symmetrized for II, antisymmetrized for
/// III) rescaled to operator norm r with r^2 uniform in [0, 1 - floor].
/// IV(n) uses rejection sampling from the ball, keeping margin >= floor.
inline std::vector<MatrixPoint> sample_interior(const DomainSpec &spec, std::uint64_t seed, std::size_t count,
                                                double floor = default_margin_floor)
{
    if (floor <= 0.0 || floor >= 1.0) {
        throw std::invalid_argument("margin floor must lie in (0, 1)");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<MatrixPoint> out;
    out.reserve(count);
    while (out.size() < count) {
        ComplexMatrix g = detail::gaussian(rng, spec.rows(), spec.cols());
        if (spec.family == Family::II) {
            g = 0.5 * (g + g.transpose()).eval();
        } else if (spec.family == Family::III) {
            g = 0.5 * (g - g.transpose()).eval();
        }
        if (spec.family == Family::IV) {
            const double radius = std::pow(unit(rng), 1.0 / (2.0 * static_cast<double>(spec.n)));
            g *= radius / g.norm();
            if (contains(spec, g).margin >= floor) {
                out.emplace_back(spec, g);
            }
            continue;
        }
        const double norm = operator_norm(g);
        if (norm == 0.0) {
            continue;
        }
        const double r = std::sqrt(unit(rng) * (1.0 - floor));
        out.emplace_back(spec, ComplexMatrix(g * (r / norm)));
    }
    return out;
}

/// Samples of the Silov boundary: I(m,n) matrices with orthonormal rows,
/// II(n) symmetric unitaries U U^t, III(n even) antisymmetric unitaries U J U^t.
inline std::vector<MatrixPoint> sample_silov(const DomainSpec &spec, std::uint64_t seed, std::size_t count)
{
    if (spec.family == Family::IV) {
        throw UnsupportedError("Silov sampling is not implemented for " + spec.name());
    }
    if (spec.family == Family::III && spec.n % 2 != 0) {
        throw UnsupportedError("Silov sampling is not implemented for III(n) with n odd");
    }
    std::mt19937_64 rng(seed);
    std::vector<MatrixPoint> out;
    out.reserve(count);
    const auto n = static_cast<std::size_t>(spec.n);
    for (std::size_t i = 0; i < count; ++i) {
        const ComplexMatrix u = detail::haar_unitary(rng, n);
        switch (spec.family) {
        case Family::I:
            out.emplace_back(spec, ComplexMatrix(u.topRows(spec.m)));
            break;
        case Family::II: {
            ComplexMatrix w = u * u.transpose();
            w = 0.5 * (w + w.transpose()).eval();
            out.emplace_back(spec, w);
            break;
        }
        case Family::III: {
            ComplexMatrix w = u * detail::symplectic_block(n) * u.transpose();
            w = 0.5 * (w - w.transpose()).eval();
            out.emplace_back(spec, w);
            break;
        }
        case Family::IV:
            break;
        }
    }
    return out;
}

/// Rank-deficient antisymmetric U diag(J_2, 0) U^t in III(3): unit singular
/// values except one zero, so I - w*w != 0. A negative control for the
/// boundary-only vanishing of the kernel identities.
inline MatrixPoint pseudo_boundary_III3(std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const ComplexMatrix u = detail::haar_unitary(rng, 3);
    ComplexMatrix w = u * detail::symplectic_block(3) * u.transpose();
    w = 0.5 * (w - w.transpose()).eval();
    return {DomainSpec::type_III(3), w};
}

/// B_3 -> III(3): (z1, z2, z3) -> [[0, z1, z2], [-z1, 0, z3], [-z2, -z3, 0]].
inline MatrixPoint biholo_III3(const std::vector<Complex> &z)
{
    if (z.size() != 3) {
        throw ShapeError("biholo_III3 expects a point of C^3");
    }
    const double norm2 = std::norm(z[0]) + std::norm(z[1]) + std::norm(z[2]);
    if (!(norm2 < 1.0)) {
        throw OutsideDomainError("biholo_III3: |z| >= 1");
    }
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 1) = z[0];
    m(0, 2) = z[1];
    m(1, 2) = z[2];
    m(1, 0) = -z[0];
    m(2, 0) = -z[1];
    m(2, 1) = -z[2];
    return {DomainSpec::type_III(3), m};
}

/// Polydisc -> IV(2): (z1, z2) -> ((z1 + z2)/2, (z1 - z2)/(2i)).
inline MatrixPoint biholo_IV2(Complex z1, Complex z2)
{
    if (!(std::abs(z1) < 1.0 && std::abs(z2) < 1.0)) {
        throw OutsideDomainError("biholo_IV2: input outside the unit polydisc");
    }
    ComplexMatrix w(1, 2);
    w(0, 0) = 0.5 * (z1 + z2);
    w(0, 1) = (z1 - z2) / (2.0 * I_unit);
    return {DomainSpec::type_IV(2), w};
}

/// IV(2) -> polydisc: (w1, w2) -> (w1 + i w2, w1 - i w2).
inline std::pair<Complex, Complex> biholo_IV2_inverse(const ComplexMatrix &w)
{
    if (w.rows() != 1 || w.cols() != 2) {
        throw ShapeError("biholo_IV2_inverse expects a 1x2 point");
    }
    return {w(0, 0) + I_unit * w(0, 1), w(0, 0) - I_unit * w(0, 1)};
}

} // namespace hua
