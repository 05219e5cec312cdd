#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace rmcpd {

// A sequence of n individuals, each observed as ell repeated d-dimensional
// measurements. Values are stored individual-major, repetition-minor:
// node index i*ell + j holds measurement j of individual i (0-based).
struct PanelDataset {
    int n = 0;
    int ell = 0;
    int d = 0;
    std::vector<double> values;       // n * ell * d
    std::vector<std::string> labels;  // per-individual ids; empty or size n

    std::int64_t node_count() const { return static_cast<std::int64_t>(n) * ell; }
    int individual_of(std::int64_t node) const { return static_cast<int>(node / ell); }

    double& at(int i, int j, int k) { return values[(static_cast<std::size_t>(i) * ell + j) * d + k]; }
    double at(int i, int j, int k) const { return values[(static_cast<std::size_t>(i) * ell + j) * d + k]; }

    std::span<const double> measurement(std::int64_t node) const {
        return {values.data() + static_cast<std::size_t>(node) * d, static_cast<std::size_t>(d)};
    }

    // Dataset restricted to individuals [lo, hi], 1-based inclusive.
    PanelDataset slice(int lo, int hi) const;

    bool operator==(const PanelDataset&) const = default;

    // Throws config_error on shape violations or non-finite values.
    void validate() const;
};

// CSV layout: header row, columns individual_id, rep_index, then d numeric
// feature columns. Order of first appearance of individual_id defines the
// sequence order. Each individual must have exactly ell rows.
PanelDataset load_panel_csv(const std::filesystem::path& path, int n, int ell);
void write_panel_csv(const PanelDataset& ds, const std::filesystem::path& path);

enum class Family { gaussian, lognormal, gaussian_mixture };

Family family_from_string(const std::string& name);
std::string to_string(Family family);

// Two-segment synthetic panel generator. Segment k (1 before the change
// point, 2 after) draws, per individual i:
//   a_ki ~ N_d(beta_k, epsilon_k^2 I)
//   (theta_i1,...,theta_iell) ~ N(stack of a_ki, sigma^2 * C_k (x) I_d),
//       C_k = rho_k 11' + (1-rho_k) I   (ell x ell)
//   omega_i ~ U(nu_lo_k, nu_hi_k)
// and then per repetition j the observation from `family` with mean theta_ij
// and covariance omega_i^2 I_d (the mixture's second component shifts every
// coordinate by +2 and halves the variance).
struct GeneratorConfig {
    Family family = Family::gaussian;
    std::array<double, 2> rho{0.2, 0.2};
    std::array<std::vector<double>, 2> beta{};  // empty vector means zeros
    std::array<double, 2> epsilon{1.0, 1.0};
    std::array<double, 2> nu_lo{1.0, 1.0};
    std::array<double, 2> nu_hi{1.2, 1.2};
    double sigma = 1.0;
    int tau = 0;  // individuals 1..tau use segment 1; 0 or n means all segment 1
    std::uint64_t seed = 0;

    // Simulation-study parameter sets, settings 1..4 per family.
    static GeneratorConfig study_setting(Family family, int setting, int d, int tau, std::uint64_t seed);

    void validate(int n, int d) const;
};

// Deterministic in (config, n, ell, d). Each individual consumes its own
// counter-based RNG stream keyed by individual index; the per-individual
// draw order is: a (d normals), theta noise (ell*d normals, rep-major),
// omega (1 uniform), then per repetition [mixture coin when applicable]
// followed by d observation normals.
PanelDataset generate(const GeneratorConfig& config, int n, int ell, int d);

}  // namespace rmcpd
