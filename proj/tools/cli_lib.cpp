#include "cli_lib.hpp"

#include "discovery/extensions.hpp"
#include "discovery/oracle.hpp"
#include "discovery/payoffs.hpp"
#include "discovery/regions.hpp"
#include "discovery/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace discovery::cli {

namespace {

using nlohmann::json;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw std::invalid_argument("scenario parse error: " + std::string(e.what()));
    }
    return doc;
}

PriorSpec parse_prior(const json& doc) {
    if (!doc.contains("prior")) throw std::invalid_argument("scenario lacks a prior section");
    const json& p = doc.at("prior");
    PriorSpec prior;
    prior.means = p.at("means").get<std::vector<double>>();
    prior.sds = p.at("sds").get<std::vector<double>>();
    prior.rho = p.at("rho").get<double>();
    if (!(prior.rho > 0.0) || !(prior.rho < 1.0)) {
        throw std::invalid_argument("rho must lie in (0,1)");
    }
    prior.validate();
    return prior;
}

Weights parse_weights(const json& doc) {
    if (!doc.contains("weights")) throw std::invalid_argument("scenario lacks weights");
    Weights w{doc.at("weights").get<std::vector<double>>()};
    w.validate();
    return w;
}

DiscoveryRule parse_rule(const std::string& text, std::size_t n) {
    auto project_of = [&](const std::string& s) {
        const long idx = std::strtol(s.c_str(), nullptr, 10);
        if (idx < 1 || static_cast<std::size_t>(idx) > n) {
            throw std::invalid_argument("rule project index out of range: " + text);
        }
        return static_cast<std::size_t>(idx - 1);
    };
    if (text == "none") return DiscoveryRule::none();
    if (text == "both") return DiscoveryRule::both();
    if (text.rfind("one:", 0) == 0) return DiscoveryRule::one(project_of(text.substr(4)));
    if (text.rfind("noisy:", 0) == 0) {
        const std::string rest = text.substr(6);
        const std::size_t colon = rest.find(':');
        if (colon == std::string::npos) {
            throw std::invalid_argument("noisy rule needs noisy:<project>:<tau>");
        }
        const double tau = std::strtod(rest.substr(colon + 1).c_str(), nullptr);
        if (!(tau > 0.0)) throw std::invalid_argument("noisy tau must be > 0");
        return DiscoveryRule::noisy(project_of(rest.substr(0, colon)), tau);
    }
    throw std::invalid_argument("unknown rule: " + text);
}

std::vector<DiscoveryRule> parse_rules(const json& doc, std::size_t n) {
    std::vector<DiscoveryRule> rules;
    if (!doc.contains("rules")) {
        rules = {DiscoveryRule::none()};
        for (std::size_t i = 0; i < n; ++i) rules.push_back(DiscoveryRule::one(i));
        if (n == 2) rules.push_back(DiscoveryRule::both());
        return rules;
    }
    for (const auto& entry : doc.at("rules")) {
        rules.push_back(parse_rule(entry.get<std::string>(), n));
    }
    if (rules.empty()) throw std::invalid_argument("rule list must be nonempty");
    return rules;
}

GridSpec parse_grid(const json& g) {
    GridSpec spec;
    spec.min = g.at("min").get<double>();
    spec.max = g.at("max").get<double>();
    spec.count = g.at("count").get<std::size_t>();
    if (spec.count < 1) throw std::invalid_argument("grid count must be >= 1");
    return spec;
}

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << body;
    if (!out) throw IoError("write failed: " + path);
}

void maybe_emit_gnuplot(const json& doc, const std::string& csv_path, bool flag,
                        const std::string& kind) {
    const bool enabled =
        flag || (doc.contains("output") && doc.at("output").value("gnuplot", false));
    if (!enabled || csv_path.empty()) return;
    std::ostringstream script;
    script << "# generated by " << kVersion << "\n";
    script << "set datafile separator ','\n";
    if (kind == "region") {
        script << "set xlabel 'mu'\nset ylabel 'c'\n";
        script << "plot '" << csv_path
               << "' using 1:($3 eq 'p1' ? $2 : 1/0) with dots title 'p1', \\\n"
               << "     '" << csv_path
               << "' using 1:($3 eq 'p2' ? $2 : 1/0) with dots title 'p2', \\\n"
               << "     '" << csv_path
               << "' using 1:($3 eq 'both' ? $2 : 1/0) with dots title 'both'\n";
    } else {
        script << "set logscale x\nset xlabel 'tau'\nset ylabel 'utility'\n";
        script << "plot '" << csv_path << "' using 1:2 with lines title 'noisy utility'\n";
    }
    write_file(csv_path + ".gnuplot", script.str());
}

int cmd_utility(const json& doc, std::ostream& out) {
    const PriorSpec prior = parse_prior(doc);
    const Weights weights = parse_weights(doc);
    const auto rules = parse_rules(doc, prior.n());
    const PayoffReport report = payoff_report(prior, weights, rules);

    out << "# " << kVersion << "\n";
    for (const auto& [rule, utility] : report.per_rule) {
        out << to_string(rule) << " " << num(utility) << "\n";
    }
    out << "best " << to_string(report.best_rule) << "\n";
    for (const MarginEntry& m : report.margins) {
        out << "margin " << to_string(m.a) << " " << to_string(m.b) << " " << num(m.diff)
            << "\n";
    }

    if (doc.contains("output") && doc.at("output").contains("json")) {
        json j;
        j["version"] = kVersion;
        for (const auto& [rule, utility] : report.per_rule) {
            j["utilities"][to_string(rule)] = utility;
        }
        j["best"] = to_string(report.best_rule);
        for (const MarginEntry& m : report.margins) {
            j["margins"].push_back(
                {{"a", to_string(m.a)}, {"b", to_string(m.b)}, {"diff", m.diff}});
        }
        write_file(doc.at("output").at("json").get<std::string>(), j.dump(2) + "\n");
    }
    return 0;
}

int cmd_region_map(const json& doc, std::ostream& out, bool gnuplot) {
    if (!doc.contains("region")) throw std::invalid_argument("scenario lacks a region section");
    const json& r = doc.at("region");
    RegionParams params;
    params.sigma1 = r.at("sigma1").get<double>();
    params.sigma2 = r.at("sigma2").get<double>();
    params.rho = r.at("rho").get<double>();
    params.w1 = r.at("w1").get<double>();
    if (!(params.rho > 0.0) || !(params.rho < 1.0)) {
        throw std::invalid_argument("rho must lie in (0,1)");
    }
    if (!(params.sigma1 > 0.0) || !(params.sigma2 > 0.0)) {
        throw std::invalid_argument("sigmas must be positive");
    }
    if (!(params.w1 > 0.0) || !(params.w1 < 1.0)) {
        throw std::invalid_argument("w1 must lie in (0,1)");
    }
    const GridSpec mu_spec = parse_grid(r.at("mu"));
    const GridSpec c_spec = parse_grid(r.at("c"));
    if (!(mu_spec.min > 0.0)) throw std::invalid_argument("mu grid must be positive");
    if (!(c_spec.min >= 0.0) || !(c_spec.max < 1.0)) {
        throw std::invalid_argument("c grid must lie in [0,1)");
    }

    std::vector<DiscoveryRule> rules = {DiscoveryRule::none(), DiscoveryRule::one(0),
                                        DiscoveryRule::one(1)};
    if (doc.contains("rules")) rules = parse_rules(doc, 2);

    const RegionMap map = region_map(params, mu_spec, c_spec, rules);
    const RegionSummary summary = summarize_region_map(map);

    std::ostringstream csv;
    write_region_csv(map, csv);
    std::string csv_path;
    if (doc.contains("output") && doc.at("output").contains("csv")) {
        csv_path = doc.at("output").at("csv").get<std::string>();
        write_file(csv_path, csv.str());
    } else {
        out << csv.str();
    }

    json j;
    j["version"] = kVersion;
    j["params"] = {{"sigma1", params.sigma1},
                   {"sigma2", params.sigma2},
                   {"rho", params.rho},
                   {"w1", params.w1}};
    j["grid"] = {{"mu_count", map.mu_grid.size()}, {"c_count", map.c_grid.size()}};
    for (const auto& [kind, count] : summary.cell_counts) {
        j["cells"][to_string(kind)] = count;
    }
    for (const auto& [kind, count] : summary.component_counts) {
        j["components"][to_string(kind)] = count;
    }
    for (const auto& b : summary.boundaries) {
        j["boundaries"].push_back({{"mu", b.mu},
                                   {"c", b.c},
                                   {"from", to_string(b.from)},
                                   {"to", to_string(b.to)}});
    }
    if (doc.contains("output") && doc.at("output").contains("json")) {
        write_file(doc.at("output").at("json").get<std::string>(), j.dump(2) + "\n");
    } else {
        out << j.dump(2) << "\n";
    }
    maybe_emit_gnuplot(doc, csv_path, gnuplot, "region");
    return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, std::ostream& out) {
    const auto results = run_suite(suite, seed);
    bool all_pass = true;
    for (const CriterionResult& res : results) {
        char line[512];
        std::snprintf(line, sizeof(line), "[%s] criterion %d %s (%.1fs): %s\n",
                      res.pass ? "PASS" : "FAIL", res.id, res.name.c_str(), res.seconds,
                      res.detail.c_str());
        out << line;
        all_pass = all_pass && res.pass;
    }
    return all_pass ? 0 : 1;
}

int cmd_sweep(const json& doc, std::ostream& out, bool full) {
    SweepSpec spec;
    if (doc.contains("sweep")) {
        const json& s = doc.at("sweep");
        if (s.contains("rho")) spec.rho = parse_grid(s.at("rho"));
        if (s.contains("w1")) spec.w1 = parse_grid(s.at("w1"));
        if (s.contains("mu_ratio")) spec.mu_ratio = parse_grid(s.at("mu_ratio"));
        if (s.contains("sigma_ratio")) spec.sigma_ratio = parse_grid(s.at("sigma_ratio"));
    }
    if (full) {
        spec.rho.count = spec.w1.count = spec.mu_ratio.count = spec.sigma_ratio.count = 1000;
        out << "# warning: full 1000-point sweep requested; expect a very long run\n";
    }
    const SweepResult sweep = single_crossing_scan(spec);

    std::ostringstream csv;
    csv << "rho,w1,mu_ratio,sign_changes\n";
    for (const SweepViolation& v : sweep.violations) {
        csv << num(v.rho) << "," << num(v.w1) << "," << num(v.mu_ratio) << ","
            << v.sign_changes << "\n";
    }
    if (doc.contains("output") && doc.at("output").contains("csv")) {
        write_file(doc.at("output").at("csv").get<std::string>(), csv.str());
    } else {
        out << csv.str();
    }
    out << "# scanned " << sweep.points_scanned << " points, " << sweep.crossings.size()
        << " crossings, " << sweep.violations.size() << " violations\n";
    return 0;
}

int cmd_sequential(const json& doc, std::ostream& out) {
    const PriorSpec prior = parse_prior(doc);
    const Weights weights = parse_weights(doc);
    const SequentialValue sv = sequential_value(prior, weights);
    out << "# " << kVersion << "\n";
    out << "value " << num(sv.value) << "\n";
    out << "first " << to_string(sv.policy.first) << "\n";
    out << "none " << num(sv.value_no_discovery) << "\n";
    out << "one:1 " << num(sv.value_one[0]) << "\n";
    out << "one:2 " << num(sv.value_one[1]) << "\n";
    out << "both-first " << num(sv.value_both_first) << "\n";
    for (const RealizationInterval& seg : sv.policy.continue_regions) {
        out << "continue [" << num(seg.lo) << ", " << num(seg.hi) << "]\n";
    }
    if (doc.contains("output") && doc.at("output").contains("json")) {
        json j;
        j["version"] = kVersion;
        j["value"] = sv.value;
        j["first"] = to_string(sv.policy.first);
        j["values"] = {{"none", sv.value_no_discovery},
                       {"one:1", sv.value_one[0]},
                       {"one:2", sv.value_one[1]},
                       {"both-first", sv.value_both_first}};
        for (const RealizationInterval& seg : sv.policy.continue_regions) {
            j["continue"].push_back({{"lo", seg.lo}, {"hi", seg.hi}});
        }
        write_file(doc.at("output").at("json").get<std::string>(), j.dump(2) + "\n");
    }
    return 0;
}

int cmd_noisy(const json& doc, std::ostream& out, bool gnuplot) {
    const PriorSpec prior = parse_prior(doc);
    const Weights weights = parse_weights(doc);
    if (!doc.contains("noisy")) throw std::invalid_argument("scenario lacks a noisy section");
    const json& nz = doc.at("noisy");
    const std::size_t project = nz.at("project").get<std::size_t>();
    if (project < 1 || project > prior.n()) {
        throw std::invalid_argument("noisy project index out of range");
    }
    const GridSpec tau_spec = parse_grid(nz.at("tau"));
    const bool log_scale = nz.value("scale", std::string("log")) == "log";
    if (!(tau_spec.min > 0.0)) throw std::invalid_argument("tau grid must be positive");

    std::ostringstream csv;
    csv << "tau,utility\n";
    for (std::size_t k = 0; k < tau_spec.count; ++k) {
        const double t = static_cast<double>(k) /
                         std::max<std::size_t>(1, tau_spec.count - 1);
        const double tau = log_scale
                               ? tau_spec.min * std::pow(tau_spec.max / tau_spec.min, t)
                               : tau_spec.min + (tau_spec.max - tau_spec.min) * t;
        csv << num(tau) << ","
            << num(utility_noisy(prior, weights, {project - 1, tau})) << "\n";
    }
    std::string csv_path;
    if (doc.contains("output") && doc.at("output").contains("csv")) {
        csv_path = doc.at("output").at("csv").get<std::string>();
        write_file(csv_path, csv.str());
    } else {
        out << csv.str();
    }
    out << "# exact " << num(utility_discover_one(prior, weights, project - 1)) << " none "
        << num(utility_no_discovery(prior, weights)) << "\n";
    maybe_emit_gnuplot(doc, csv_path, gnuplot, "noisy");
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{std::string(kVersion) +
                 " - expected payoffs, cutoff curves, and optimal-discovery regions "
                 "for correlated-project proposal games"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string suite = "all";
    std::uint64_t seed = 12345;
    bool gnuplot = false;
    bool full = false;

    CLI::App* utility = app.add_subcommand("utility", "per-rule expected utilities");
    utility->add_option("--scenario", scenario_path, "scenario JSON file")->required();

    CLI::App* region = app.add_subcommand("region-map", "optimal-rule map over (mu, c)");
    region->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    region->add_flag("--emit-gnuplot", gnuplot, "write a companion gnuplot script");

    CLI::App* verify = app.add_subcommand("verify", "run acceptance suites");
    verify->add_option("--suite", suite,
                       "closed-forms|cutoffs|regions|noisy|sequential|nproject|all");
    verify->add_option("--seed", seed, "oracle seed");

    CLI::App* sweep = app.add_subcommand("sweep", "single-crossing sweep over sigma1");
    sweep->add_option("--scenario", scenario_path, "scenario JSON file");
    sweep->add_flag("--full", full, "paper-scale 1000-point grids (very slow)");

    CLI::App* sequential = app.add_subcommand("sequential", "two-stage discovery value");
    sequential->add_option("--scenario", scenario_path, "scenario JSON file")->required();

    CLI::App* noisy = app.add_subcommand("noisy", "noisy-discovery utility over a tau grid");
    noisy->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    noisy->add_flag("--emit-gnuplot", gnuplot, "write a companion gnuplot script");

    std::vector<std::string> argv_copy(args.rbegin(), args.rend());
    try {
        app.parse(argv_copy);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        json doc;
        if (!scenario_path.empty()) doc = load_scenario(scenario_path);
        if (utility->parsed()) return cmd_utility(doc, out);
        if (region->parsed()) return cmd_region_map(doc, out, gnuplot);
        if (verify->parsed()) return cmd_verify(suite, seed, out);
        if (sweep->parsed()) return cmd_sweep(doc, out, full);
        if (sequential->parsed()) return cmd_sequential(doc, out);
        if (noisy->parsed()) return cmd_noisy(doc, out, gnuplot);
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "error: no subcommand\n";
    return 2;
}

} // namespace discovery::cli
