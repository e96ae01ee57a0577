#pragma once

#include "discovery/cutoffs.hpp"
#include "discovery/payoffs.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace discovery {

enum class RegionLabelKind { NoDiscovery, DiscoverP1, DiscoverP2, DiscoverBoth };

std::string to_string(RegionLabelKind kind);

struct RegionLabel {
    RegionLabelKind kind = RegionLabelKind::NoDiscovery;
    double margin = 0.0; // winner minus runner-up; 0 when below resolution
};

struct RegionParams {
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    double rho = 0.5;
    double w1 = 0.5;
};

struct GridSpec {
    double min = 0.0;
    double max = 1.0;
    std::size_t count = 1;

    std::vector<double> points() const;
};

struct RegionMap {
    std::vector<double> mu_grid;
    std::vector<double> c_grid;
    std::vector<RegionLabel> cells; // row-major, cells[i*c_grid.size()+j] at (mu_i, c_j)
    RegionParams params;
    std::vector<DiscoveryRule> rules;

    const RegionLabel& at(std::size_t mu_idx, std::size_t c_idx) const {
        return cells[mu_idx * c_grid.size() + c_idx];
    }
};

/// Optimal-rule label at one (mu, c) point, mu1 = -mu < 0 <= c*mu = mu2.
/// Single-rule comparisons run through the log-space margins, so limit-mu
/// panels classify correctly where plain Phi arithmetic underflows.
RegionLabel classify(double mu, double c, const RegionParams& params,
                     const std::vector<DiscoveryRule>& rules);

RegionMap region_map(const RegionParams& params, const GridSpec& mu_spec,
                     const GridSpec& c_spec, const std::vector<DiscoveryRule>& rules);

/// Number of 4-connected components carrying the given label.
int connected_components(const RegionMap& map, RegionLabelKind kind);

struct SweepSpec {
    GridSpec rho{0.05, 0.95, 20};
    GridSpec w1{0.5, 0.5, 1};
    GridSpec mu_ratio{1.1, 4.0, 20};    // mu1/mu2 > 1 (both means negative)
    GridSpec sigma_ratio{0.2, 5.0, 20}; // sigma1/sigma2 sweep axis
};

struct SweepCrossing {
    double rho = 0.0, w1 = 0.0, mu_ratio = 0.0;
    double sigma1 = 0.0; // crossing location (sigma2 normalized to 1)
};

struct SweepViolation {
    double rho = 0.0, w1 = 0.0, mu_ratio = 0.0;
    int sign_changes = 0;
};

struct SweepResult {
    std::vector<SweepCrossing> crossings;
    std::vector<SweepViolation> violations; // > 1 sign change of Pi^1 - Pi^2 in sigma1
    std::size_t points_scanned = 0;
};

/// Sweep sigma1 for every (rho, w1, mu1/mu2) grid point with sigma2 = 1 and
/// mu2 = -1 fixed, recording every sign change of the project-1 minus
/// project-2 discovery utility. Single crossing is the expected outcome;
/// anything with more than one sign change is a violation.
SweepResult single_crossing_scan(const SweepSpec& spec);

struct MeasurePoint {
    double mu = 0.0;
    double measure = 0.0; // Lebesgue measure in c of the DiscoverP1 dominance region
};

/// Per-mu measure of the region where discovering project 1 is the strict
/// argmax among {NoDiscovery, One(1), One(2)}, from a classified c-row
/// (cell width times count). Requires sigma1 < sigma2.
std::vector<MeasurePoint> dominance_measure_trace(const RegionParams& params,
                                                  const std::vector<double>& mu_grid,
                                                  std::size_t c_cells = 2000);

void write_region_csv(const RegionMap& map, std::ostream& os);

struct RegionSummary {
    std::vector<std::pair<RegionLabelKind, int>> cell_counts;
    std::vector<std::pair<RegionLabelKind, int>> component_counts;
    // (mu, c midpoint, label left of boundary, label right of boundary)
    struct Boundary {
        double mu, c;
        RegionLabelKind from, to;
    };
    std::vector<Boundary> boundaries;
};

RegionSummary summarize_region_map(const RegionMap& map);

} // namespace discovery
