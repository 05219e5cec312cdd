#include "rmcpd/simulate.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rmcpd/errors.hpp"
#include "rmcpd/rng.hpp"

namespace rmcpd {

std::uint64_t replicate_seed(std::uint64_t base_seed, int setting, int replicate) {
    return mix_seed(base_seed ^ (streams::simulation_replicate +
                                 (static_cast<std::uint64_t>(setting) << 20) +
                                 static_cast<std::uint64_t>(replicate)));
}

namespace {

struct CheckpointFile {
    std::map<std::pair<int, int>, ReplicateOutcome> done;  // (setting, replicate)
    std::ofstream out;

    explicit CheckpointFile(const std::filesystem::path& path) {
        if (path.empty()) return;
        if (std::filesystem::exists(path)) {
            std::ifstream in(path);
            std::string line;
            std::getline(in, line);  // header
            while (std::getline(in, line)) {
                if (line.empty()) continue;
                std::istringstream ss(line);
                std::string field;
                ReplicateOutcome o;
                std::getline(ss, field, ',');
                o.setting = std::stoi(field);
                std::getline(ss, field, ',');
                o.replicate = std::stoi(field);
                std::getline(ss, field, ',');
                o.seed = std::stoull(field);
                std::getline(ss, field, ',');
                o.p_m = std::stod(field);
                std::getline(ss, field, ',');
                o.tau_hat = std::stoi(field);
                std::getline(ss, field, ',');
                o.reject = field == "1";
                std::getline(ss, field, ',');
                o.localized = field == "1";
                done[{o.setting, o.replicate}] = o;
            }
            out.open(path, std::ios::app);
        } else {
            out.open(path);
            out << "setting,replicate,seed,p_m,tau_hat,reject,localized\n";
        }
        if (!out) throw data_error("cannot open checkpoint file: " + path.string());
    }

    void append(const ReplicateOutcome& o) {
        if (!out.is_open()) return;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", o.p_m);
        out << o.setting << ',' << o.replicate << ',' << o.seed << ',' << buf << ',' << o.tau_hat << ','
            << (o.reject ? 1 : 0) << ',' << (o.localized ? 1 : 0) << '\n';
        out.flush();
    }
};

}  // namespace

std::vector<SettingPower> run_power_study(const SimulateOptions& options,
                                          const std::function<void(const ReplicateOutcome&)>& on_replicate) {
    options.test.validate();
    if (options.replicates < 0) throw config_error("replicates must be >= 0");
    if (options.tau < 1 || options.tau >= options.n) throw config_error("tau must lie in 1..n-1");

    CheckpointFile checkpoint(options.checkpoint);
    std::vector<SettingPower> table;
    for (int setting : options.settings) {
        SettingPower sp;
        sp.setting = setting;
        sp.replicates = options.replicates;
        for (int r = 0; r < options.replicates; ++r) {
            ReplicateOutcome o;
            if (auto it = checkpoint.done.find({setting, r}); it != checkpoint.done.end()) {
                o = it->second;
            } else {
                const std::uint64_t seed = replicate_seed(options.seed, setting, r);
                const GeneratorConfig cfg =
                    GeneratorConfig::study_setting(options.family, setting, options.d, options.tau, seed);
                const PanelDataset ds = generate(cfg, options.n, options.ell, options.d);
                const DetectResult res = run_detect(ds, options.test);
                o.setting = setting;
                o.replicate = r;
                o.seed = seed;
                o.p_m = res.p_m;
                o.tau_hat = res.tau_hat;
                o.reject = res.reject;
                o.localized = o.reject && std::abs(res.tau_hat - options.tau) <= options.localization_halfwidth;
                checkpoint.append(o);
            }
            if (o.reject) {
                ++sp.rejections;
                if (o.localized) ++sp.localized;
            }
            sp.outcomes.push_back(o);
            if (on_replicate) on_replicate(o);
        }
        table.push_back(std::move(sp));
    }
    return table;
}

}  // namespace rmcpd
