#ifndef HOMOGLAB_CONFIG_HPP
#define HOMOGLAB_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "homoglab/stats.hpp"

namespace homoglab {

/// Config file syntax error with 1-based location.
struct ConfigParseError : std::runtime_error {
    int line;
    int col;
    ConfigParseError(int line_, int col_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ", col " +
                             std::to_string(col_) + ": " + msg),
          line(line_),
          col(col_) {}
};

/// Parsed experiment description (flat INI, dotted keys, # comments).
struct Config {
    std::string experiment;  // cell | sweep | fluct | oracle-check | planelike-gap

    FieldModel field;
    Vec nu{};
    std::vector<double> ts;
    HeightSpec height;
    double h = 0.5;
    Stencil stencil = Stencil::Axis;

    int phase_count = 2;
    int a = 0;
    int b = 1;

    int replicates = 2;
    std::uint64_t base_seed = 1;
    int p_max = 3;
    std::vector<double> cd_sweep{1, 2, 5, 10, 20, 50, 100};

    std::string out_dir = "out";

    ExperimentPlan plan() const;

    /// Canonical serialization of the computation-relevant blocks; keys
    /// sorted, values normalized.  Basis of the cache key.
    std::string canonical_blocks() const;
};

Config parse_config_text(const std::string& text);
Config parse_config_file(const std::string& path);

/// FNV-1a 64-bit, used for cache keys and manifest checksums.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::string hex64(std::uint64_t value);

}  // namespace homoglab

#endif
