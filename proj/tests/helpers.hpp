#pragma once

#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <string>

#include "rmcpd/dataset.hpp"
#include "rmcpd/graph.hpp"

namespace rmcpd::testing {

// Small Gaussian panel + k-MST graph, parameterized for the oracle corpus.
inline PanelDataset small_panel(int n, int ell, int d, std::uint64_t seed) {
    GeneratorConfig cfg;
    cfg.family = Family::gaussian;
    cfg.seed = seed;
    cfg.tau = 0;
    return generate(cfg, n, ell, d);
}

inline SimilarityGraph small_graph(int n, int ell, int k, std::uint64_t seed, int d = 3) {
    return build_similarity_graph(small_panel(n, ell, d, seed), k);
}

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& name) {
        path = std::filesystem::temp_directory_path() / ("rmcpd_test_" + name + "_" + std::to_string(::getpid()));
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove(path, ec);
    }
    void write(const std::string& text) const {
        std::ofstream out(path);
        out << text;
    }
};

}  // namespace rmcpd::testing
