#ifndef HOMOGLAB_RUNNER_HPP
#define HOMOGLAB_RUNNER_HPP

#include <string>
#include <vector>

#include "homoglab/config.hpp"
#include "homoglab/oracle.hpp"

namespace homoglab {

struct RunnerOptions {
    std::string out_override;  // empty: use config output.dir
    bool no_cache = false;
    int threads = 0;  // 0 = auto
    bool dump_labeling = false;
};

/// Executes the configured experiment, writing CSV/TSV outputs plus a
/// manifest with per-file checksums.  Returns 0 on success, 1 when the run
/// failed after producing partial outputs.
int run_experiment(const Config& cfg, const RunnerOptions& opts);

// --- formatting helpers shared with tests ---

std::string format_g17(double v);
std::string records_csv(std::span<const RunRecord> records);
std::string summaries_csv(std::span<const MomentSummary> summaries);

// gnuplot-ready TSV emitters; header row always present.
std::string variance_tsv(std::span<const MomentSummary> summaries, int dim);
std::string mean_tsv(std::span<const ConvergenceRow> rows);
std::string exceedance_tsv(std::span<const std::array<double, 5>> rows);
std::string gap_tsv(std::span<const std::array<double, 5>> rows);

}  // namespace homoglab

#endif
