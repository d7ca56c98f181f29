#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hua/core/parallel.hpp"
#include "hua/dirichlet.hpp"
#include "hua/domains.hpp"
#include "hua/embeddings.hpp"
#include "hua/hypergeom.hpp"
#include "hua/kernels.hpp"
#include "hua/operators.hpp"
#include "hua/report.hpp"

namespace hua {

/// Everything a campaign needs; unset optionals select the suite defaults.
struct CampaignConfig {
    std::string id;
    std::vector<DomainSpec> domains;
    std::optional<std::size_t> points;
    std::uint64_t seed = 1;
    /// Replaces every upper tolerance of the campaign when set.
    std::optional<double> tolerance;
    /// Monte Carlo sample count for Poisson checks.
    std::optional<std::size_t> samples;
    /// (p, q, n) triples for the singularity classifier.
    std::vector<std::array<int, 3>> profiles;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag)
{
    std::seed_seq seq{base, tag};
    std::array<std::uint64_t, 1> out{};
    seq.generate(out.begin(), out.end());
    return out[0];
}

namespace detail {

inline std::uint64_t domain_tag(const DomainSpec &d)
{
    return static_cast<std::uint64_t>(d.family) * 1000003ULL + static_cast<std::uint64_t>(d.m) * 1009ULL
           + static_cast<std::uint64_t>(d.n);
}

inline double tol(const CampaignConfig &c, double fallback)
{
    return c.tolerance.value_or(fallback);
}

inline std::vector<DomainSpec> domains_or(const CampaignConfig &c, std::vector<DomainSpec> fallback)
{
    return c.domains.empty() ? fallback : c.domains;
}

/// Real polynomial p + conj(p), with `terms` random monomials of total degree <= max_degree.
inline Polynomial random_real_field(std::mt19937_64 &rng, std::size_t vars, int max_degree, int terms)
{
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::uniform_int_distribution<std::size_t> var(0, vars - 1);
    std::uniform_int_distribution<int> side(0, 1);
    std::normal_distribution<double> g(0.0, 1.0);
    Polynomial p(vars);
    for (int t = 0; t < terms; ++t) {
        std::vector<int> hol(vars, 0);
        std::vector<int> anti(vars, 0);
        const int d = deg(rng);
        for (int i = 0; i < d; ++i) {
            (side(rng) == 0 ? hol : anti)[var(rng)] += 1;
        }
        const double re = g(rng);
        const double im = g(rng);
        p += Polynomial::monomial(vars, Complex(re, im), hol, anti);
    }
    return p + p.conj();
}

inline std::vector<Complex> ball_point(std::mt19937_64 &rng, std::size_t n, double radius)
{
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Complex> v(n);
    for (auto &x : v) {
        const double re = g(rng);
        const double im = g(rng);
        x = Complex(re, im);
    }
    const double r = radius * std::pow(u(rng), 1.0 / (2.0 * static_cast<double>(n)));
    v = normalized(v);
    for (auto &x : v) {
        x *= r;
    }
    return v;
}

inline std::vector<Complex> sphere_point(std::mt19937_64 &rng, std::size_t n)
{
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Complex> v(n);
    for (auto &x : v) {
        const double re = g(rng);
        const double im = g(rng);
        x = Complex(re, im);
    }
    return normalized(v);
}

/// Real polynomial in (z1, z2) harmonic in each variable separately.
inline Polynomial random_coordinatewise_harmonic(std::mt19937_64 &rng, int max_degree, int terms)
{
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::normal_distribution<double> g(0.0, 1.0);
    Polynomial v(2);
    for (int t = 0; t < terms; ++t) {
        const int a = deg(rng);
        const int b = deg(rng);
        const double re = g(rng);
        const double im = g(rng);
        const std::vector<int> zero{0, 0};
        const std::vector<int> hol = t % 2 == 0 ? std::vector<int>{a, b} : std::vector<int>{a, 0};
        const std::vector<int> anti = t % 2 == 0 ? zero : std::vector<int>{0, b};
        v += Polynomial::monomial(2, Complex(re, im), hol, anti);
    }
    return v + v.conj();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Kernel identity

inline std::vector<DomainSpec> default_kernel_domains()
{
    return {DomainSpec::type_I(2, 2), DomainSpec::type_I(2, 3), DomainSpec::type_II(2), DomainSpec::type_II(3),
            DomainSpec::type_III(4)};
}

inline std::vector<CheckRecord> kernel_identity_records(const DomainSpec &spec, std::size_t points, std::uint64_t seed,
                                                        const CampaignConfig &cfg)
{
    const std::uint64_t s = derive_seed(seed, detail::domain_tag(spec));
    const auto zs = sample_interior(spec, derive_seed(s, 1), points);
    const auto ws = sample_silov(spec, derive_seed(s, 2), points);
    const DeterminantPolynomials dp(spec);
    const bool closed_available = spec.family == Family::II || spec.family == Family::III;

    struct Slot {
        double fd = 0.0;
        double assembly = 0.0;
        double symbolic = 0.0;
        double c_rel = 0.0;
        double unitary = 0.0;
        double f_norm = 0.0;
    };
    std::vector<Slot> slots(points);
    parallel_for(points, [&](std::size_t i) {
        const KernelPair p = KernelPair::make(zs[i], ws[i]);
        Theorem22Options opts;
        opts.polynomials = &dp;
        const Theorem22Check c = check_theorem22(p, opts);
        Slot &o = slots[i];
        o.fd = c.fd.cwiseAbs().maxCoeff();
        o.assembly = c.direct_sum.cwiseAbs().maxCoeff();
        if (c.closed_sum) {
            o.assembly = std::max(o.assembly, c.closed_sum->cwiseAbs().maxCoeff());
        }
        o.symbolic = c.exact.cwiseAbs().maxCoeff();
        if (closed_available) {
            const ComplexVector closed = c_closed_form(p);
            const ComplexVector fd = c_finite_difference(p);
            o.c_rel = (closed - fd).cwiseAbs().maxCoeff() / std::max(1e-300, closed.cwiseAbs().maxCoeff());
        }
        if (spec.family == Family::III) {
            o.unitary = (identity(p.cols()) - p.w.adjoint() * p.w).norm();
            o.f_norm = lemma_F(p).norm();
        }
    });

    ResidualStats fd;
    ResidualStats assembly;
    ResidualStats symbolic;
    ResidualStats c_rel;
    ResidualStats unitary;
    ResidualStats f_norm;
    for (const auto &o : slots) {
        fd.add(o.fd);
        assembly.add(o.assembly);
        symbolic.add(o.symbolic);
        c_rel.add(o.c_rel);
        unitary.add(o.unitary);
        f_norm.add(o.f_norm);
    }
    const std::string d = spec.name();
    std::vector<CheckRecord> out;
    out.push_back(make_record(d + " kernel identity, finite differences",
                              "each component operator annihilates the Poisson-Szego kernel in z for w on the Silov "
                              "boundary (|Delta^{jk} P| / (kappa^2 P))",
                              fd, detail::tol(cfg, 1e-6)));
    out.push_back(make_record(d + " kernel identity, exact assembly",
                              "log-derivative assembly of Delta^{jk} P / (kappa^2 P) cancels term by term", assembly,
                              detail::tol(cfg, 1e-9)));
    out.push_back(make_record(d + " kernel identity, symbolic determinants",
                              "same identity with det V and det W differentiated as polynomials", symbolic,
                              detail::tol(cfg, 1e-8)));
    if (closed_available) {
        out.push_back(make_record(d + " closed form of d log det W / dz",
                                  "gradient of log det(I - z w*) matches its closed form (relative to FD)", c_rel,
                                  detail::tol(cfg, 1e-6)));
    }
    if (spec.family == Family::III && spec.n % 2 == 0) {
        out.push_back(make_record(d + " Silov samples are unitary", "w* w = I on the Silov boundary", unitary,
                                  detail::tol(cfg, 1e-12)));
        out.push_back(make_record(d + " F vanishes on the Silov boundary",
                                  "W(w*,z*)^{-1} (I - w* w) W(z*,w*)^{-1} = 0 when w* w = I", f_norm,
                                  detail::tol(cfg, 1e-10)));
    }
    return out;
}

inline VerificationReport kernel_campaign(const CampaignConfig &cfg)
{
    VerificationReport rep;
    rep.campaign = cfg.id;
    const std::size_t points = cfg.points.value_or(50);
    for (const auto &spec : detail::domains_or(cfg, default_kernel_domains())) {
        if (spec.family == Family::IV) {
            throw ConfigError("kernel identity is not available on " + spec.name());
        }
        for (auto &r : kernel_identity_records(spec, points, cfg.seed, cfg)) {
            rep.records.push_back(std::move(r));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Hypergeometric suite

inline std::vector<std::array<int, 3>> default_profiles()
{
    return {{1, 1, 3}, {2, 2, 5}, {1, 1, 2}, {1, 1, 4}, {1, 0, 3}, {0, 2, 4}, {3, 0, 2}};
}

/// Expected class: smooth when pq = 0, log-type((n+1)/2) for odd n,
/// half-power(n/2 + 1/2) for even n.
inline std::pair<SingularityKind, double> expected_singularity(int p, int q, int n)
{
    if (p * q == 0) {
        return {SingularityKind::smooth, 0.0};
    }
    if (n % 2 == 1) {
        return {SingularityKind::log_type, (n + 1) / 2.0};
    }
    return {SingularityKind::half_power, n / 2.0 + 0.5};
}

inline CheckRecord singularity_record(int p, int q, int n, const CampaignConfig &cfg)
{
    const SingularityClass s = classify_singularity(p, q, n);
    const auto [kind, exponent] = expected_singularity(p, q, n);
    ResidualStats st;
    st.add(s.relative_fit_residual);
    CheckRecord r = make_record("singularity of h for (p,q,n) = (" + std::to_string(p) + "," + std::to_string(q) + ","
                                    + std::to_string(n) + ")",
                                "the radial profile is smooth when pq = 0, else log-type for odd n and half-power for "
                                "even n at t = 1",
                                st, detail::tol(cfg, 0.05));
    const bool matches = s.kind == kind && s.exponent == exponent && !s.unstable;
    const bool coefficient_ok = kind == SingularityKind::smooth || std::abs(s.coefficient) > 1e-8;
    r.pass = r.pass && matches && coefficient_ok;
    r.details = {{"label", s.label()},
                 {"coefficient", s.coefficient},
                 {"max_fit_error", s.max_fit_error},
                 {"expected", SingularityClass{kind, exponent}.label()}};
    return r;
}

inline VerificationReport hypergeom_campaign(const CampaignConfig &cfg)
{
    VerificationReport rep;
    rep.campaign = cfg.id;
    std::mt19937_64 rng(derive_seed(cfg.seed, 31));
    const std::size_t triples = cfg.points.value_or(50);

    {
        std::uniform_real_distribution<double> par(0.1, 3.0);
        std::uniform_real_distribution<double> tt(0.01, 0.9);
        ResidualStats st;
        for (std::size_t i = 0; i < triples; ++i) {
            const double a = par(rng);
            const double b = par(rng);
            const double c = par(rng);
            const double t = tt(rng);
            const double ladder = gauss_2f1_derivative(a, b, c, t, 1);
            const double h = 3e-4;
            auto d = [&](double s) { return (gauss_2f1(a, b, c, t + s) - gauss_2f1(a, b, c, t - s)) / (2 * s); };
            const double fd = (4.0 * d(h / 2) - d(h)) / 3.0;
            st.add(std::abs(fd - ladder) / std::max(1.0, std::abs(ladder)));
        }
        rep.records.push_back(make_record("derivative ladder vs finite differences",
                                          "d/dt F(a,b;c;t) = (ab/c) F(a+1,b+1;c+1;t)", st, detail::tol(cfg, 1e-10)));
    }
    {
        std::vector<double> grid;
        for (int i = 0; i <= 99; ++i) {
            grid.push_back(i / 100.0);
        }
        ResidualStats st;
        for (int k = 0; k <= 3; ++k) {
            for (int p = 1; p <= 3; ++p) {
                for (int q = 1; q <= 3; ++q) {
                    for (const auto &row : lemma32_checks(k + (q + 1) / 2.0, k + (p + 1) / 2.0, 0.5, grid).rows) {
                        st.add(row.euler_gap);
                    }
                }
            }
        }
        rep.records.push_back(make_record("Euler transformation on t in [0, 0.99]",
                                          "(1-t)^s F(a,b;a+b-s;t) = F(b-s,a-s;a+b-s;t)", st, detail::tol(cfg, 1e-10)));
    }
    {
        const double t = 1.0 - std::ldexp(1.0, -14);
        ResidualStats st;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto &[a, b] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {1.5, 1.5}}) {
            const Lemma32Report r = lemma32_checks(a, b, 0.5, {t});
            st.add(std::abs(r.rows[0].log_ratio_derivative / r.log_limit - 1.0));
            rows.push_back({{"a", a}, {"b", b}, {"limit", r.log_limit}, {"estimate", r.rows[0].log_ratio_derivative},
                            {"plain_ratio", r.rows[0].log_ratio}});
        }
        CheckRecord rec = make_record("logarithmic limit at t = 1 - 2^-14",
                                      "F(a,b;a+b;t) / log(1/(1-t)) -> Gamma(a+b) / (Gamma(a) Gamma(b))", st,
                                      detail::tol(cfg, 0.01));
        rec.details = {{"rows", rows}};
        rep.records.push_back(rec);
    }
    {
        ResidualStats st;
        for (const auto &[p, q, n] : std::vector<std::array<int, 3>>{{1, 1, 2}, {1, 1, 3}, {2, 1, 3}, {2, 2, 5}}) {
            const RadialProfile h(p, q, n);
            for (int i = 1; i <= 9; ++i) {
                st.add(std::abs(h.ode_residual(i / 10.0)));
            }
        }
        rep.records.push_back(make_record("radial ODE residual",
                                          "h(t) = F(p/2, q/2; (p+q+n+1)/2; t) solves the radial equation", st,
                                          detail::tol(cfg, 1e-8)));
    }
    for (const auto &[p, q, n] : cfg.profiles.empty() ? default_profiles() : cfg.profiles) {
        rep.records.push_back(singularity_record(p, q, n, cfg));
    }
    return rep;
}

inline VerificationReport lemma33_campaign(const CampaignConfig &cfg)
{
    VerificationReport rep;
    rep.campaign = cfg.id;
    for (const auto &[p, q, n] : cfg.profiles.empty() ? default_profiles() : cfg.profiles) {
        rep.records.push_back(singularity_record(p, q, n, cfg));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Dirichlet problem and Poisson integrals

inline std::vector<DomainSpec> default_poisson_domains()
{
    return {DomainSpec::type_I(2, 2), DomainSpec::type_II(2), DomainSpec::type_III(4)};
}

/// Re(0.3 + w_00 + 2i w_01 + w_01^2), the real part of a holomorphic polynomial.
inline Complex pluriharmonic_boundary_data(const ComplexMatrix &w)
{
    const Complex g = Complex(0.3) + w(0, 0) + Complex(0.0, 2.0) * w(0, 1) + w(0, 1) * w(0, 1);
    return g.real();
}

inline std::vector<CheckRecord> poisson_records(const DomainSpec &spec, std::size_t points, std::size_t samples,
                                                std::uint64_t seed, double sigmas)
{
    const std::uint64_t s = derive_seed(seed, detail::domain_tag(spec) + 77);
    const auto zs = sample_interior(spec, derive_seed(s, 1), points, 0.5);
    ResidualStats one;
    ResidualStats plh;
    nlohmann::json witnesses = nlohmann::json::array();
    for (std::size_t i = 0; i < points; ++i) {
        const std::uint64_t mc = derive_seed(s, 100 + i);
        const MonteCarloEstimate a = poisson_solve(zs[i], [](const ComplexMatrix &) { return Complex(1.0); }, samples, mc);
        const MonteCarloEstimate b = poisson_solve(zs[i], pluriharmonic_boundary_data, samples, mc);
        one.add(std::abs(a.mean - 1.0) / a.std_error);
        const Complex exact = pluriharmonic_boundary_data(zs[i].value);
        plh.add(std::abs(b.mean - exact) / b.std_error);
        witnesses.push_back({{"constant", complex_json(a.mean)},
                             {"data", complex_json(b.mean)},
                             {"exact", complex_json(exact)},
                             {"std_error", b.std_error}});
    }
    const std::string d = spec.name();
    std::vector<CheckRecord> out;
    out.push_back(make_record(d + " Poisson integral of 1 (in standard errors)",
                              "the Poisson-Szego kernel has unit mass over the Silov boundary", one, sigmas));
    CheckRecord r = make_record(d + " Poisson integral reproduces pluriharmonic data (in standard errors)",
                                "the Poisson-Szego integral reproduces real parts of holomorphic polynomials", plh,
                                sigmas);
    r.details = {{"samples", samples}, {"points", witnesses}};
    out.push_back(std::move(r));
    return out;
}

inline VerificationReport dirichlet_campaign(const CampaignConfig &cfg)
{
    VerificationReport rep;
    rep.campaign = cfg.id;
    const std::size_t points = cfg.points.value_or(100);
    std::vector<DomainSpec> poisson_domains;
    std::size_t n = 3;
    for (const auto &d : cfg.domains) {
        if (d.family == Family::I && d.m == 1) {
            n = static_cast<std::size_t>(d.n);
        } else if (d.family == Family::IV) {
            throw ConfigError("no Poisson-Szego kernel on " + d.name());
        } else {
            poisson_domains.push_back(d);
        }
    }
    if (n < 2) {
        throw ConfigError("the boundary data z1 conj(z2) needs n >= 2");
    }
    if (cfg.domains.empty()) {
        poisson_domains = default_poisson_domains();
    }

    // f = z1 conj(z2) is harmonic of bidegree (1,1).
    const Polynomial f = Polynomial::variable(n, 0) * Polynomial::conj_variable(n, 1);
    const DirichletSolution u = solve_tilde({bidegree_harmonic(f, 1, 1)}, n);
    const WirtingerField field = u.field();
    const DomainSpec ball = DomainSpec::type_I(1, static_cast<int>(n));
    const auto zs = sample_interior(ball, derive_seed(cfg.seed, 41), points);
    std::vector<double> slot(points);
    parallel_for(points, [&](std::size_t i) {
        slot[i] = std::abs(apply(OperatorId::full(OperatorKind::TildeBall), field, zs[i]));
    });
    ResidualStats annihilate;
    for (double v : slot) {
        annihilate.add(v);
    }
    rep.records.push_back(make_record("B" + std::to_string(n) + " h(|z|^4) z1 conj(z2) is annihilated",
                                      "the ball operator with tilde weights annihilates h(|z|^4) f for bidegree "
                                      "harmonic f",
                                      annihilate, detail::tol(cfg, 1e-6)));

    std::mt19937_64 rng(derive_seed(cfg.seed, 42));
    ResidualStats boundary;
    const std::size_t bpts = 10 * points;
    for (std::size_t i = 0; i < bpts; ++i) {
        const auto x = detail::sphere_point(rng, n);
        boundary.add(std::abs(u(x) - f.evaluate(x)));
    }
    rep.records.push_back(make_record("B" + std::to_string(n) + " boundary trace",
                                      "the solution equals its data on the unit sphere", boundary,
                                      detail::tol(cfg, 1e-8)));

    const std::size_t samples = cfg.samples.value_or(20000);
    const std::size_t mc_points = cfg.points.value_or(10);
    for (const auto &spec : poisson_domains) {
        for (auto &r : poisson_records(spec, std::min<std::size_t>(mc_points, 10), samples, cfg.seed, 3.0)) {
            rep.records.push_back(std::move(r));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Embeddings

inline std::vector<CheckRecord> pullback_records(const DomainSpec &spec, std::size_t triples, std::uint64_t seed,
                                                 const CampaignConfig &cfg)
{
    std::mt19937_64 rng(derive_seed(seed, detail::domain_tag(spec) + 5));
    const std::size_t N = spec.dimension();
    std::string kind;
    std::vector<BallEmbedding> es;
    std::vector<Polynomial> fields;
    std::vector<std::vector<Complex>> lambdas;
    for (std::size_t t = 0; t < triples; ++t) {
        switch (spec.family) {
        case Family::I:
            es.push_back(BallEmbedding::type_I(detail::sphere_point(rng, spec.rows()), spec.n));
            break;
        case Family::II:
            es.push_back(BallEmbedding::type_II(detail::haar_unitary(rng, spec.cols())));
            break;
        case Family::III:
            if (t % 2 == 0) {
                es.push_back(BallEmbedding::type_III(spec.n));
            } else {
                es.push_back(BallEmbedding::type_III(spec.n, detail::haar_unitary(rng, spec.cols())));
            }
            break;
        case Family::IV:
            throw ConfigError("no ball embedding into " + spec.name());
        }
        fields.push_back(detail::random_real_field(rng, N, 4, 8));
        lambdas.push_back(detail::ball_point(rng, es.back().ball_dimension(), 0.95));
    }
    kind = to_string(es.front().kind());
    std::vector<double> slot(triples);
    std::vector<double> chain(triples);
    parallel_for(triples, [&](std::size_t t) {
        const WirtingerField u = WirtingerField::polynomial(spec.rows(), spec.cols(), fields[t]);
        const PullbackSides s = pullback_sides(es[t], u, lambdas[t]);
        const Complex r = es[t].kind() == EmbeddingKind::type_III ? s.domain_side - s.ball_side
                                                                  : s.ball_side - s.domain_side;
        slot[t] = std::abs(r) / std::max(1.0, std::abs(s.ball_side));
        if (es[t].kind() == EmbeddingKind::type_I) {
            chain[t] = typeI_chain_rule_residual(es[t], u, lambdas[t]);
        }
    });
    ResidualStats st;
    ResidualStats ch;
    for (std::size_t t = 0; t < triples; ++t) {
        st.add(slot[t]);
        ch.add(chain[t]);
    }
    std::vector<CheckRecord> out;
    out.push_back(make_record(kind + " pullback into " + spec.name(),
                              "the ball operator applied to u o z equals the component operators of the domain "
                              "applied to u, for every u (relative to max(1, |ball side|))",
                              st, detail::tol(cfg, 1e-9)));
    if (spec.family == Family::I) {
        out.push_back(make_record(kind + " chain rule into " + spec.name(),
                                  "d^2 (u o z) / dlambda_i dconj(lambda_j) = sum_kl u_{ki, lj} xi_k conj(xi_l)", ch,
                                  detail::tol(cfg, 1e-12)));
        ResidualStats norm;
        for (const auto &e : es) {
            norm.add(typeI_norm_identity_defect(e));
        }
        out.push_back(make_record(kind + " norm identity",
                                  "sum_p z_pi conj(z_pj) = lambda_i conj(lambda_j) as polynomials", norm,
                                  detail::tol(cfg, 1e-14)));
    }
    return out;
}

inline std::vector<DomainSpec> default_embedding_domains()
{
    return {DomainSpec::type_I(2, 3), DomainSpec::type_II(3), DomainSpec::type_III(4)};
}

inline std::vector<CheckRecord> polarization_records(std::size_t count, std::uint64_t seed, const CampaignConfig &cfg)
{
    std::mt19937_64 rng(derive_seed(seed, 51));
    std::uniform_int_distribution<int> dim(1, 5);
    ResidualStats st;
    for (std::size_t t = 0; t < count; ++t) {
        const auto n = static_cast<std::size_t>(dim(rng));
        const ComplexMatrix m = detail::gaussian(rng, n, n);
        st.add(max_abs(polarization_recover(form_from(m), n) - m));
    }
    return {make_record("polarization round trip",
                        "M is recovered from xi -> sum M_jk xi_j conj(xi_k) at e_k, (e_j + e_k)/sqrt 2, "
                        "(e_j + i e_k)/sqrt 2",
                        st, detail::tol(cfg, 1e-12))};
}

inline std::vector<CheckRecord> transport_records(std::size_t fields, std::uint64_t seed, const CampaignConfig &cfg)
{
    std::mt19937_64 rng(derive_seed(seed, 61));
    ResidualStats iv;
    ResidualStats iii;
    for (std::size_t f = 0; f < fields; ++f) {
        const WirtingerField u2 = WirtingerField::polynomial(1, 2, detail::random_real_field(rng, 2, 4, 8));
        const WirtingerField u3 = WirtingerField::polynomial(3, 3, detail::random_real_field(rng, 9, 4, 8));
        std::uniform_real_distribution<double> r(-0.65, 0.65);
        const double a = r(rng);
        const double b = r(rng);
        const double c = r(rng);
        const double d = r(rng);
        iv.add(hessian_transport_check(biholo_IV2_map(), u2, {Complex(a, b), Complex(c, d)}));
        iii.add(hessian_transport_check(biholo_III3_map(), u3, detail::ball_point(rng, 3, 0.95)));
    }
    const std::string anchor = "complex Hessian of u o phi equals phi' H_u(phi) phi'* for holomorphic phi";
    return {make_record("Hessian transport through the polydisc-to-IV(2) map", anchor, iv, detail::tol(cfg, 1e-9)),
            make_record("Hessian transport through the B3-to-III(3) map", anchor, iii, detail::tol(cfg, 1e-9))};
}

inline VerificationReport embeddings_campaign(const CampaignConfig &cfg)
{
    VerificationReport rep;
    rep.campaign = cfg.id;
    const std::size_t triples = cfg.points.value_or(50);
    for (const auto &spec : detail::domains_or(cfg, default_embedding_domains())) {
        for (auto &r : pullback_records(spec, triples, cfg.seed, cfg)) {
            rep.records.push_back(std::move(r));
        }
    }
    for (auto &r : polarization_records(100, cfg.seed, cfg)) {
        rep.records.push_back(std::move(r));
    }
    for (auto &r : transport_records(20, cfg.seed, cfg)) {
        rep.records.push_back(std::move(r));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// IV(2)

inline VerificationReport counterexample_campaign(const CampaignConfig &cfg)
{
    VerificationReport rep;
    rep.campaign = cfg.id;
    const std::size_t points = cfg.points.value_or(200);
    const DomainSpec spec = DomainSpec::type_IV(2);
    const auto zs = sample_interior(spec, derive_seed(cfg.seed, 71), points);
    const Polynomial p = Polynomial::variable(2, 0) * Polynomial::conj_variable(2, 0)
                         - Polynomial::variable(2, 1) * Polynomial::conj_variable(2, 1);
    const WirtingerField u = WirtingerField::polynomial(1, 2, p);
    ResidualStats delta4;
    for (const auto &z : zs) {
        delta4.add(std::abs(apply(OperatorId::full(OperatorKind::Delta4), u, z)));
    }
    rep.records.push_back(make_record("IV(2) Delta4 annihilates |z1|^2 - |z2|^2",
                                      "u = |z1|^2 - |z2|^2 is invariant harmonic on IV(2)", delta4,
                                      detail::tol(cfg, 1e-10)));
    const PluriharmonicityResult ph = pluriharmonicity_test(u, zs);
    ResidualStats hess;
    hess.add(ph.max_hessian_norm);
    CheckRecord r = make_record("IV(2) |z1|^2 - |z2|^2 is not pluriharmonic",
                                "an invariant harmonic function on IV(2) need not be pluriharmonic (Hessian norm)", hess,
                                1.0, Comparison::at_least);
    r.details = {{"pluriharmonic", ph.pluriharmonic}};
    rep.records.push_back(std::move(r));

    std::mt19937_64 rng(derive_seed(cfg.seed, 72));
    ResidualStats lap;
    ResidualStats mixed;
    for (int f = 0; f < 20; ++f) {
        const Polynomial v = detail::random_coordinatewise_harmonic(rng, 3, 6);
        for (const auto &z : zs) {
            const PolydiscPullbackCheck c = polydisc_pullback_check(v, to_row_major(z.value));
            lap.add(c.laplacian);
            mixed.add(c.mixed_real_part);
        }
    }
    rep.records.push_back(make_record("IV(2) pulled-back polydisc data is harmonic",
                                      "u(w) = v(z(w)) with v harmonic in each polydisc variable is harmonic in w", lap,
                                      detail::tol(cfg, 1e-10)));
    rep.records.push_back(make_record("IV(2) pulled-back polydisc data has 2 Re u_{1 2bar} = 0",
                                      "the same u satisfies 2 Re d^2 u / dw1 dconj(w2) = 0", mixed,
                                      detail::tol(cfg, 1e-10)));
    return rep;
}

// ---------------------------------------------------------------------------

inline const std::map<std::string, std::string> &campaign_descriptions()
{
    static const std::map<std::string, std::string> d{
        {"kernel", "kernel identity, closed forms and Silov vanishing"},
        {"theorem22-II2", "kernel identity on II(2)"},
        {"hypergeom", "hypergeometric identities, radial ODE and singularity classes"},
        {"hypergeom-lemma33", "singularity class of the radial profile"},
        {"dirichlet", "tilde-weight Dirichlet solution and Poisson integrals"},
        {"embeddings", "ball embeddings, polarization and Hessian transport"},
        {"counterexample-IV2", "invariant harmonic but not pluriharmonic on IV(2)"},
    };
    return d;
}

/// Runs a campaign by id. Failing checks are recorded; bad configuration throws ConfigError.
inline VerificationReport run_campaign(const CampaignConfig &cfg)
{
    if (cfg.points && *cfg.points == 0) {
        throw ConfigError("--points must be positive");
    }
    if (cfg.samples && *cfg.samples < 2) {
        throw ConfigError("--samples must be at least 2");
    }
    if (cfg.tolerance && !(*cfg.tolerance > 0.0)) {
        throw ConfigError("--tol must be positive");
    }
    for (const auto &[p, q, n] : cfg.profiles) {
        if (p < 0 || q < 0 || n < 1) {
            throw ConfigError("profile needs p, q >= 0 and n >= 1");
        }
    }
    if (cfg.id == "kernel") {
        return kernel_campaign(cfg);
    }
    if (cfg.id == "theorem22-II2") {
        if (!cfg.domains.empty()) {
            throw ConfigError("theorem22-II2 fixes its domain");
        }
        CampaignConfig c = cfg;
        c.domains = {DomainSpec::type_II(2)};
        return kernel_campaign(c);
    }
    if (cfg.id == "hypergeom") {
        return hypergeom_campaign(cfg);
    }
    if (cfg.id == "hypergeom-lemma33") {
        return lemma33_campaign(cfg);
    }
    if (cfg.id == "dirichlet") {
        return dirichlet_campaign(cfg);
    }
    if (cfg.id == "embeddings") {
        return embeddings_campaign(cfg);
    }
    if (cfg.id == "counterexample-IV2") {
        if (!cfg.domains.empty()) {
            throw ConfigError("counterexample-IV2 fixes its domain");
        }
        return counterexample_campaign(cfg);
    }
    throw ConfigError("unknown campaign '" + cfg.id + "'");
}

} // namespace hua
