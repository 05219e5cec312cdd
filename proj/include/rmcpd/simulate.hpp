#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "rmcpd/dataset.hpp"
#include "rmcpd/detect.hpp"

namespace rmcpd {

struct SimulateOptions {
    Family family = Family::gaussian;
    std::vector<int> settings{1, 2, 3, 4};
    int n = 100;
    int ell = 5;
    int d = 40;
    int tau = 50;
    int replicates = 100;
    int localization_halfwidth = 10;  // count tau_hat in [tau - w, tau + w]
    TestOptions test;
    std::uint64_t seed = 0;
    std::filesystem::path checkpoint;  // append-only per-replicate CSV; resumable
};

struct ReplicateOutcome {
    int setting = 0;
    int replicate = 0;
    std::uint64_t seed = 0;
    double p_m = 1;
    int tau_hat = 0;
    bool reject = false;
    bool localized = false;
};

struct SettingPower {
    int setting = 0;
    int replicates = 0;
    int rejections = 0;
    int localized = 0;  // rejections with tau_hat within the localization band
    std::vector<ReplicateOutcome> outcomes;
};

// Replicate r of setting s uses generator seed mix(base_seed, s, r), so runs
// are reproducible and resumable per replicate.
std::uint64_t replicate_seed(std::uint64_t base_seed, int setting, int replicate);

std::vector<SettingPower> run_power_study(const SimulateOptions& options,
                                          const std::function<void(const ReplicateOutcome&)>& on_replicate = {});

}  // namespace rmcpd
