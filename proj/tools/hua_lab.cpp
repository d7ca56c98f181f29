#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hua/campaigns.hpp"

namespace {

struct CommonFlags {
    std::vector<std::string> domains;
    std::optional<std::size_t> points;
    std::uint64_t seed = 1;
    std::optional<double> tol;
    std::optional<std::size_t> samples;
    std::vector<std::string> profiles;
    std::string out;
    std::string format = "text";
};

void add_common(CLI::App *cmd, CommonFlags &f, bool with_domain = true)
{
    if (with_domain) {
        cmd->add_option("--domain", f.domains, "Domain such as I:2,3, II:2, III:4, IV:2 (repeatable)");
    }
    cmd->add_option("--points", f.points, "Number of sample points (suite default when omitted)");
    cmd->add_option("--seed", f.seed, "Base seed")->capture_default_str();
    cmd->add_option("--tol", f.tol, "Replace every upper tolerance with this value");
    cmd->add_option("--samples", f.samples, "Monte Carlo samples per Poisson integral");
    cmd->add_option("--profile", f.profiles, "p,q,n triple for the singularity classifier (repeatable)");
    cmd->add_option("--out", f.out, "Write the report here instead of stdout");
    cmd->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
}

std::array<int, 3> parse_profile(const std::string &s)
{
    std::array<int, 3> v{};
    std::stringstream ss(s);
    std::string item;
    std::size_t i = 0;
    while (std::getline(ss, item, ',')) {
        if (i == 3) {
            throw hua::ConfigError("profile '" + s + "' needs exactly three integers");
        }
        try {
            std::size_t used = 0;
            v[i++] = std::stoi(item, &used);
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception &) {
            throw hua::ConfigError("profile '" + s + "': bad integer '" + item + "'");
        }
    }
    if (i != 3) {
        throw hua::ConfigError("profile '" + s + "' needs exactly three integers");
    }
    return v;
}

hua::CampaignConfig to_config(const std::string &id, const CommonFlags &f)
{
    hua::CampaignConfig c;
    c.id = id;
    for (const auto &d : f.domains) {
        try {
            c.domains.push_back(hua::DomainSpec::parse(d));
        } catch (const std::invalid_argument &e) {
            throw hua::ConfigError(e.what());
        }
    }
    c.points = f.points;
    c.seed = f.seed;
    c.tolerance = f.tol;
    c.samples = f.samples;
    for (const auto &p : f.profiles) {
        c.profiles.push_back(parse_profile(p));
    }
    return c;
}

std::string render(const hua::VerificationReport &rep, const std::string &format)
{
    return format == "json" ? rep.to_json().dump(2) + "\n" : rep.to_text();
}

int emit(const hua::VerificationReport &rep, const CommonFlags &f)
{
    const std::string body = render(rep, f.format);
    if (f.out.empty()) {
        std::cout << body;
    } else {
        std::ofstream os(f.out, std::ios::binary);
        if (!os) {
            throw hua::ConfigError("cannot write " + f.out);
        }
        os << body;
        std::cout << rep.campaign << ": " << (rep.pass() ? "PASS" : "FAIL") << " (" << rep.records.size()
                  << " checks) -> " << f.out << "\n";
    }
    return rep.pass() ? 0 : 1;
}

hua::VerificationReport load_report(const std::string &path)
{
    std::ifstream is(path);
    if (!is) {
        throw hua::ConfigError("cannot read " + path);
    }
    try {
        return hua::VerificationReport::from_json(nlohmann::json::parse(is));
    } catch (const std::exception &e) {
        throw hua::ConfigError(path + ": " + e.what());
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Numerical checks for invariant harmonic functions on classical domains"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string suite;
    std::string campaign;
    std::vector<std::string> inputs;

    CLI::App *verify = app.add_subcommand("verify", "Run one verification suite");
    verify->add_option("suite", suite, "kernel | hypergeom | dirichlet | embeddings")
        ->required()
        ->check(CLI::IsMember({"kernel", "hypergeom", "dirichlet", "embeddings"}));
    add_common(verify, flags);

    CLI::App *demo = app.add_subcommand("demo", "Run a demonstration campaign");
    std::string demo_name;
    demo->add_option("name", demo_name, "counterexample")->required()->check(CLI::IsMember({"counterexample"}));
    add_common(demo, flags, false);

    CLI::App *run = app.add_subcommand("run", "Run a named campaign (see 'list')");
    run->add_option("campaign", campaign, "Campaign id")->required();
    add_common(run, flags);

    CLI::App *list = app.add_subcommand("list", "List campaign ids");

    CLI::App *report = app.add_subcommand("report", "Work with saved JSON reports");
    CLI::App *merge = report->add_subcommand("merge", "Merge JSON reports into one");
    report->require_subcommand(1);
    merge->add_option("inputs", inputs, "Report files")->required()->check(CLI::ExistingFile);
    merge->add_option("--out", flags.out, "Write the merged report here instead of stdout");
    merge->add_option("--format", flags.format, "Report format")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*list) {
            for (const auto &[id, text] : hua::campaign_descriptions()) {
                std::cout << id << "\t" << text << "\n";
            }
            return 0;
        }
        if (*verify) {
            return emit(hua::run_campaign(to_config(suite, flags)), flags);
        }
        if (*demo) {
            return emit(hua::run_campaign(to_config("counterexample-IV2", flags)), flags);
        }
        if (*run) {
            return emit(hua::run_campaign(to_config(campaign, flags)), flags);
        }
        if (*merge) {
            std::vector<hua::VerificationReport> reps;
            for (const auto &p : inputs) {
                reps.push_back(load_report(p));
            }
            return emit(hua::merge_reports(reps), flags);
        }
    } catch (const hua::ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
