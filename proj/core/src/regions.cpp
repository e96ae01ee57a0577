#include "discovery/regions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace discovery {

std::string to_string(RegionLabelKind kind) {
    switch (kind) {
        case RegionLabelKind::NoDiscovery: return "none";
        case RegionLabelKind::DiscoverP1: return "p1";
        case RegionLabelKind::DiscoverP2: return "p2";
        case RegionLabelKind::DiscoverBoth: return "both";
    }
    return "?";
}

std::vector<double> GridSpec::points() const {
    if (count == 0) throw std::invalid_argument("grid count must be >= 1");
    std::vector<double> pts(count);
    if (count == 1) {
        pts[0] = min;
        return pts;
    }
    const double step = (max - min) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) pts[i] = min + step * static_cast<double>(i);
    return pts;
}

namespace {

RegionLabelKind label_of(const DiscoveryRule& rule) {
    switch (rule.kind) {
        case RuleKind::NoDiscovery: return RegionLabelKind::NoDiscovery;
        case RuleKind::One:
            return rule.project == 0 ? RegionLabelKind::DiscoverP1 : RegionLabelKind::DiscoverP2;
        case RuleKind::Both: return RegionLabelKind::DiscoverBoth;
        default: throw std::invalid_argument("classify supports one-shot exact rules");
    }
}

// Signed utility difference rule a minus rule b, stable in the limit regime.
SignedMargin pair_margin(double mu, double c, const RegionParams& p, const DiscoveryRule& a,
                         const DiscoveryRule& b) {
    auto is_one = [](const DiscoveryRule& r) { return r.kind == RuleKind::One; };
    auto is_none = [](const DiscoveryRule& r) { return r.kind == RuleKind::NoDiscovery; };

    if (is_one(a) && is_none(b)) {
        return margin_one_vs_none(mu, c, p.sigma1, p.sigma2, p.rho, p.w1,
                                  static_cast<int>(a.project) + 1);
    }
    if (is_none(a) && is_one(b)) {
        SignedMargin m = margin_one_vs_none(mu, c, p.sigma1, p.sigma2, p.rho, p.w1,
                                            static_cast<int>(b.project) + 1);
        m.sign = -m.sign;
        return m;
    }
    if (is_one(a) && is_one(b)) {
        SignedMargin m = margin_one1_vs_one2(mu, c, p.sigma1, p.sigma2, p.rho, p.w1);
        if (a.project == 1) m.sign = -m.sign;
        return m;
    }

    // Both-vs-anything: direct arithmetic (used on moderate-mu windows).
    PriorSpec prior{{-mu, c * mu}, {p.sigma1, p.sigma2}, p.rho};
    Weights w{{p.w1, 1.0 - p.w1}};
    auto value = [&](const DiscoveryRule& r) {
        switch (r.kind) {
            case RuleKind::NoDiscovery: return utility_no_discovery(prior, w);
            case RuleKind::One: return utility_discover_one(prior, w, r.project);
            case RuleKind::Both: return utility_discover_both(prior, w);
            default: throw std::invalid_argument("classify supports one-shot exact rules");
        }
    };
    const double diff = value(a) - value(b);
    SignedMargin m;
    m.sign = (diff > 0.0) ? 1 : (diff < 0.0 ? -1 : 0);
    m.abs = std::fabs(diff);
    return m;
}

} // namespace

RegionLabel classify(double mu, double c, const RegionParams& params,
                     const std::vector<DiscoveryRule>& rules) {
    if (!(mu > 0.0)) throw std::domain_error("classify requires mu > 0");
    if (!(c >= 0.0) || !(c < 1.0)) throw std::domain_error("classify requires c in [0, 1)");
    if (rules.empty()) throw std::invalid_argument("rule set must be nonempty");

    std::size_t best = 0;
    for (std::size_t k = 1; k < rules.size(); ++k) {
        const SignedMargin m = pair_margin(mu, c, params, rules[k], rules[best]);
        if (m.sign > 0 ||
            (m.sign == 0 && rule_order_key(rules[k]) < rule_order_key(rules[best]))) {
            best = k;
        }
    }

    RegionLabel label;
    label.kind = label_of(rules[best]);
    double runner_up = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rules.size(); ++k) {
        if (k == best) continue;
        const SignedMargin m = pair_margin(mu, c, params, rules[best], rules[k]);
        runner_up = std::min(runner_up, m.sign >= 0 ? m.abs : -m.abs);
    }
    label.margin = rules.size() > 1 ? std::max(runner_up, 0.0) : 0.0;
    return label;
}

RegionMap region_map(const RegionParams& params, const GridSpec& mu_spec,
                     const GridSpec& c_spec, const std::vector<DiscoveryRule>& rules) {
    RegionMap map;
    map.params = params;
    map.rules = rules;
    map.mu_grid = mu_spec.points();
    map.c_grid = c_spec.points();
    map.cells.reserve(map.mu_grid.size() * map.c_grid.size());
    for (double mu : map.mu_grid) {
        for (double c : map.c_grid) {
            map.cells.push_back(classify(mu, c, params, rules));
        }
    }
    return map;
}

int connected_components(const RegionMap& map, RegionLabelKind kind) {
    const std::size_t rows = map.mu_grid.size();
    const std::size_t cols = map.c_grid.size();
    std::vector<char> seen(rows * cols, 0);
    std::vector<std::size_t> stack;
    int components = 0;
    for (std::size_t start = 0; start < rows * cols; ++start) {
        if (seen[start] || map.cells[start].kind != kind) continue;
        ++components;
        stack.push_back(start);
        seen[start] = 1;
        while (!stack.empty()) {
            const std::size_t cell = stack.back();
            stack.pop_back();
            const std::size_t r = cell / cols, ccol = cell % cols;
            const std::size_t neighbors[4][2] = {
                {r > 0 ? r - 1 : r, ccol},
                {r + 1 < rows ? r + 1 : r, ccol},
                {r, ccol > 0 ? ccol - 1 : ccol},
                {r, ccol + 1 < cols ? ccol + 1 : ccol},
            };
            for (const auto& nb : neighbors) {
                const std::size_t idx = nb[0] * cols + nb[1];
                if (idx == cell || seen[idx] || map.cells[idx].kind != kind) continue;
                seen[idx] = 1;
                stack.push_back(idx);
            }
        }
    }
    return components;
}

SweepResult single_crossing_scan(const SweepSpec& spec) {
    SweepResult result;
    const double sigma2 = 1.0;
    const double mu2 = -1.0;

    for (double rho : spec.rho.points()) {
        for (double w1 : spec.w1.points()) {
            const Weights w{{w1, 1.0 - w1}};
            for (double mu_ratio : spec.mu_ratio.points()) {
                if (!(mu_ratio > 1.0)) {
                    throw std::domain_error("mu ratio grid must exceed 1 (mu1 < mu2 < 0)");
                }
                const double mu1 = mu_ratio * mu2;
                auto diff = [&](double sigma1) {
                    PriorSpec prior{{mu1, mu2}, {sigma1, sigma2}, rho};
                    return utility_discover_one(prior, w, 0) -
                           utility_discover_one(prior, w, 1);
                };

                const std::vector<double> sig_pts = spec.sigma_ratio.points();
                int changes = 0;
                double prev_sigma = sig_pts.front();
                double prev = diff(prev_sigma);
                ++result.points_scanned;
                for (std::size_t k = 1; k < sig_pts.size(); ++k) {
                    const double cur_sigma = sig_pts[k];
                    const double cur = diff(cur_sigma);
                    ++result.points_scanned;
                    if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) {
                        ++changes;
                        double lo = prev_sigma, hi = cur_sigma;
                        double flo = prev;
                        for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
                            const double mid = 0.5 * (lo + hi);
                            const double fm = diff(mid);
                            if ((flo < 0.0) == (fm < 0.0)) {
                                lo = mid;
                                flo = fm;
                            } else {
                                hi = mid;
                            }
                        }
                        result.crossings.push_back({rho, w1, mu_ratio, 0.5 * (lo + hi)});
                    }
                    if (cur != 0.0) {
                        prev = cur;
                        prev_sigma = cur_sigma;
                    }
                }
                if (changes > 1) {
                    result.violations.push_back({rho, w1, mu_ratio, changes});
                }
            }
        }
    }
    return result;
}

std::vector<MeasurePoint> dominance_measure_trace(const RegionParams& params,
                                                  const std::vector<double>& mu_grid,
                                                  std::size_t c_cells) {
    if (!(params.sigma1 < params.sigma2)) {
        throw std::domain_error("dominance_measure_trace requires sigma1 < sigma2");
    }
    const std::vector<DiscoveryRule> rules = {DiscoveryRule::none(), DiscoveryRule::one(0),
                                              DiscoveryRule::one(1)};
    const GridSpec c_spec{0.0, 1.0 - 1.0 / static_cast<double>(c_cells), c_cells};
    const std::vector<double> c_pts = c_spec.points();
    const double cell_width = 1.0 / static_cast<double>(c_cells);

    std::vector<MeasurePoint> trace;
    trace.reserve(mu_grid.size());
    for (double mu : mu_grid) {
        int count = 0;
        for (double c : c_pts) {
            if (classify(mu, c, params, rules).kind == RegionLabelKind::DiscoverP1) ++count;
        }
        trace.push_back({mu, cell_width * count});
    }
    return trace;
}

void write_region_csv(const RegionMap& map, std::ostream& os) {
    os << "mu,c,label,margin\n";
    char buf[128];
    for (std::size_t i = 0; i < map.mu_grid.size(); ++i) {
        for (std::size_t j = 0; j < map.c_grid.size(); ++j) {
            const RegionLabel& cell = map.at(i, j);
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%s,%.12g\n", map.mu_grid[i],
                          map.c_grid[j], to_string(cell.kind).c_str(), cell.margin);
            os << buf;
        }
    }
}

RegionSummary summarize_region_map(const RegionMap& map) {
    RegionSummary summary;
    const RegionLabelKind kinds[] = {RegionLabelKind::NoDiscovery, RegionLabelKind::DiscoverP1,
                                     RegionLabelKind::DiscoverP2, RegionLabelKind::DiscoverBoth};
    for (RegionLabelKind kind : kinds) {
        int cells = 0;
        for (const RegionLabel& cell : map.cells) {
            if (cell.kind == kind) ++cells;
        }
        summary.cell_counts.emplace_back(kind, cells);
        summary.component_counts.emplace_back(kind,
                                              cells > 0 ? connected_components(map, kind) : 0);
    }
    for (std::size_t i = 0; i < map.mu_grid.size(); ++i) {
        for (std::size_t j = 0; j + 1 < map.c_grid.size(); ++j) {
            const RegionLabel& a = map.at(i, j);
            const RegionLabel& b = map.at(i, j + 1);
            if (a.kind != b.kind) {
                summary.boundaries.push_back({map.mu_grid[i],
                                              0.5 * (map.c_grid[j] + map.c_grid[j + 1]), a.kind,
                                              b.kind});
            }
        }
    }
    return summary;
}

} // namespace discovery
