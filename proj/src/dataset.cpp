#include "rmcpd/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "rmcpd/errors.hpp"
#include "rmcpd/rng.hpp"

namespace rmcpd {

void PanelDataset::validate() const {
    if (n < 2 || ell < 1 || d < 1)
        throw config_error("panel dataset requires n >= 2, ell >= 1, d >= 1 (got n=" + std::to_string(n) +
                           ", ell=" + std::to_string(ell) + ", d=" + std::to_string(d) + ")");
    if (values.size() != static_cast<std::size_t>(n) * ell * d)
        throw config_error("panel dataset value buffer has wrong size");
    if (!labels.empty() && labels.size() != static_cast<std::size_t>(n))
        throw config_error("panel dataset labels must be empty or one per individual");
    for (double v : values)
        if (!std::isfinite(v)) throw config_error("panel dataset contains a non-finite value");
}

PanelDataset PanelDataset::slice(int lo, int hi) const {
    if (lo < 1 || hi > n || lo > hi) throw config_error("invalid individual range for slice");
    PanelDataset out;
    out.n = hi - lo + 1;
    out.ell = ell;
    out.d = d;
    const std::size_t stride = static_cast<std::size_t>(ell) * d;
    out.values.assign(values.begin() + (lo - 1) * stride, values.begin() + static_cast<std::size_t>(hi) * stride);
    if (!labels.empty()) out.labels.assign(labels.begin() + (lo - 1), labels.begin() + hi);
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    for (auto& f : fields) {
        const auto b = f.find_first_not_of(" \t");
        const auto e = f.find_last_not_of(" \t");
        f = (b == std::string::npos) ? std::string{} : f.substr(b, e - b + 1);
    }
    return fields;
}

double parse_number(const std::string& field, std::size_t row, std::size_t col) {
    double value{};
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw data_error("non-numeric cell '" + field + "' at row " + std::to_string(row) + ", column " +
                         std::to_string(col));
    return value;
}

}  // namespace

PanelDataset load_panel_csv(const std::filesystem::path& path, int n, int ell) {
    if (n < 2 || ell < 1) throw config_error("load_panel_csv requires n >= 2 and ell >= 1");
    std::ifstream in(path);
    if (!in) throw data_error("cannot open input file: " + path.string());

    std::string line;
    if (!std::getline(in, line) || line.empty()) throw data_error("empty input file: " + path.string());
    const auto header = split_csv_line(line);
    if (header.size() < 3)
        throw data_error("header must contain individual_id, rep_index and at least one feature column");
    const int d = static_cast<int>(header.size()) - 2;

    PanelDataset ds;
    ds.n = n;
    ds.ell = ell;
    ds.d = d;
    ds.values.assign(static_cast<std::size_t>(n) * ell * d, 0.0);
    ds.labels.reserve(n);

    std::map<std::string, int> id_order;          // individual_id -> 0-based position
    std::vector<int> rows_seen(n, 0);
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw data_error("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(header.size()));
        const std::string& id = fields[0];
        auto [it, inserted] = id_order.try_emplace(id, static_cast<int>(id_order.size()));
        if (inserted) {
            if (it->second >= n)
                throw data_error("more than " + std::to_string(n) + " distinct individuals (first extra: '" + id + "')");
            ds.labels.push_back(id);
        }
        const int i = it->second;
        if (rows_seen[i] >= ell)
            throw data_error("individual '" + id + "' has more than " + std::to_string(ell) + " repetitions");
        const int j = rows_seen[i]++;
        for (int k = 0; k < d; ++k) ds.at(i, j, k) = parse_number(fields[2 + k], row, 3 + k);
    }

    if (static_cast<int>(id_order.size()) != n)
        throw data_error("found " + std::to_string(id_order.size()) + " individuals, expected " + std::to_string(n));
    for (const auto& [id, i] : id_order)
        if (rows_seen[i] != ell)
            throw data_error("individual '" + id + "' has " + std::to_string(rows_seen[i]) + " repetitions, expected " +
                             std::to_string(ell));
    ds.validate();
    return ds;
}

void write_panel_csv(const PanelDataset& ds, const std::filesystem::path& path) {
    ds.validate();
    std::ofstream out(path);
    if (!out) throw data_error("cannot open output file: " + path.string());
    out << "individual_id,rep_index";
    for (int k = 0; k < ds.d; ++k) out << ",x" << (k + 1);
    out << "\n";
    char buf[40];
    for (int i = 0; i < ds.n; ++i) {
        const std::string id = ds.labels.empty() ? std::to_string(i + 1) : ds.labels[i];
        for (int j = 0; j < ds.ell; ++j) {
            out << id << ',' << (j + 1);
            for (int k = 0; k < ds.d; ++k) {
                std::snprintf(buf, sizeof buf, "%.17g", ds.at(i, j, k));
                out << ',' << buf;
            }
            out << '\n';
        }
    }
    if (!out) throw data_error("failed writing " + path.string());
}

Family family_from_string(const std::string& name) {
    if (name == "gaussian") return Family::gaussian;
    if (name == "lognormal") return Family::lognormal;
    if (name == "gaussian_mixture" || name == "mixture") return Family::gaussian_mixture;
    throw config_error("unknown family '" + name + "'");
}

std::string to_string(Family family) {
    switch (family) {
        case Family::gaussian: return "gaussian";
        case Family::lognormal: return "lognormal";
        case Family::gaussian_mixture: return "gaussian_mixture";
    }
    return "?";
}

void GeneratorConfig::validate(int n, int d) const {
    for (int k = 0; k < 2; ++k) {
        if (rho[k] < 0.0 || rho[k] >= 1.0)
            throw config_error("rho must lie in [0, 1) so the within-individual correlation is positive definite");
        if (!beta[k].empty() && static_cast<int>(beta[k].size()) != d)
            throw config_error("beta vector has wrong dimension");
        if (epsilon[k] < 0.0) throw config_error("epsilon must be nonnegative");
        if (nu_lo[k] > nu_hi[k]) throw config_error("nu_lo must be <= nu_hi");
        if (nu_lo[k] < 0.0) throw config_error("nu must be nonnegative");
    }
    if (sigma < 0.0) throw config_error("sigma must be nonnegative");
    if (tau < 0 || tau > n) throw config_error("tau must lie in [0, n]");
}

GeneratorConfig GeneratorConfig::study_setting(Family family, int setting, int d, int tau, std::uint64_t seed) {
    GeneratorConfig c;
    c.family = family;
    c.tau = tau;
    c.seed = seed;
    c.sigma = 1.0;
    auto ones = [d](double v) { return std::vector<double>(d, v); };
    // Shared defaults: rho=(.2,.2), beta=(0,0), eps=(1,1), omega ~ U(1,1.2).
    c.beta = {ones(0.0), ones(0.0)};
    switch (setting) {
        case 1:  // null
            break;
        case 2:  // within-individual difference (correlation change)
            switch (family) {
                case Family::gaussian: c.rho = {0.1, 0.3}; break;
                case Family::lognormal: c.rho = {0.1, 0.6}; break;
                case Family::gaussian_mixture: c.rho = {0.1, 0.4}; break;
            }
            break;
        case 3:  // between-individual location shift
            switch (family) {
                case Family::gaussian: c.beta[1] = ones(0.3); break;
                case Family::lognormal: c.beta[1] = ones(0.4); break;
                case Family::gaussian_mixture: c.beta[1] = ones(0.45); break;
            }
            break;
        case 4:  // between-individual scale change
            switch (family) {
                case Family::gaussian:
                    c.epsilon = {1.0, 1.1};
                    c.nu_lo = {1.0, 1.1};
                    c.nu_hi = {1.1, 1.2};
                    break;
                case Family::lognormal:
                    c.epsilon = {1.0, 1.2};
                    c.nu_lo = {1.0, 1.1};
                    c.nu_hi = {1.2, 1.3};
                    break;
                case Family::gaussian_mixture:
                    c.epsilon = {1.0, 1.1};
                    c.nu_lo = {1.0, 1.1};
                    c.nu_hi = {1.2, 1.3};
                    break;
            }
            break;
        default:
            throw config_error("setting must be 1..4");
    }
    return c;
}

namespace {

// Lower Cholesky factor of rho*11' + (1-rho)*I, ell x ell.
std::vector<double> equicorrelation_cholesky(int ell, double rho) {
    std::vector<double> a(static_cast<std::size_t>(ell) * ell, 0.0);
    for (int i = 0; i < ell; ++i)
        for (int j = 0; j <= i; ++j) a[i * ell + j] = (i == j) ? 1.0 : rho;
    std::vector<double> L(static_cast<std::size_t>(ell) * ell, 0.0);
    for (int i = 0; i < ell; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i * ell + j];
            for (int k = 0; k < j; ++k) s -= L[i * ell + k] * L[j * ell + k];
            if (i == j) {
                if (s <= 0.0) throw config_error("within-individual correlation matrix is not positive definite");
                L[i * ell + j] = std::sqrt(s);
            } else {
                L[i * ell + j] = s / L[j * ell + j];
            }
        }
    }
    return L;
}

}  // namespace

PanelDataset generate(const GeneratorConfig& config, int n, int ell, int d) {
    if (n < 2 || ell < 1 || d < 1) throw config_error("generate requires n >= 2, ell >= 1, d >= 1");
    config.validate(n, d);

    const std::array<std::vector<double>, 2> chol = {equicorrelation_cholesky(ell, config.rho[0]),
                                                     equicorrelation_cholesky(ell, config.rho[1])};
    PanelDataset ds;
    ds.n = n;
    ds.ell = ell;
    ds.d = d;
    ds.values.assign(static_cast<std::size_t>(n) * ell * d, 0.0);

    std::vector<double> a(d), xi(static_cast<std::size_t>(ell) * d), theta(static_cast<std::size_t>(ell) * d);
    for (int i = 0; i < n; ++i) {
        const int k = (config.tau == 0 || i < config.tau) ? 0 : 1;
        Philox rng(config.seed, streams::generator_individual + static_cast<std::uint64_t>(i));

        for (int c = 0; c < d; ++c) {
            const double b = config.beta[k].empty() ? 0.0 : config.beta[k][c];
            a[c] = b + config.epsilon[k] * rng.normal();
        }
        for (auto& x : xi) x = rng.normal();
        const auto& L = chol[k];
        for (int j = 0; j < ell; ++j)
            for (int c = 0; c < d; ++c) {
                double s = 0.0;
                for (int r = 0; r <= j; ++r) s += L[j * ell + r] * xi[static_cast<std::size_t>(r) * d + c];
                theta[static_cast<std::size_t>(j) * d + c] = a[c] + config.sigma * s;
            }
        const double omega = rng.uniform(config.nu_lo[k], config.nu_hi[k]);

        for (int j = 0; j < ell; ++j) {
            double shift = 0.0, scale = omega;
            if (config.family == Family::gaussian_mixture) {
                const bool second = rng.next_double() >= 0.5;  // W ~ Bernoulli(0.5)
                if (second) {
                    shift = 2.0;
                    scale = omega * std::sqrt(0.5);
                }
            }
            for (int c = 0; c < d; ++c) {
                const double mean = theta[static_cast<std::size_t>(j) * d + c] + shift;
                const double z = mean + scale * rng.normal();
                ds.at(i, j, c) = (config.family == Family::lognormal) ? std::exp(z) : z;
            }
        }
    }
    ds.validate();
    return ds;
}

}  // namespace rmcpd
