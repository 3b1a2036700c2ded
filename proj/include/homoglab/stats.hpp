#ifndef HOMOGLAB_STATS_HPP
#define HOMOGLAB_STATS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "homoglab/process.hpp"

namespace homoglab {

enum class HeightRule { Full, Fixed, Log, Power };

/// Height schedules ell_t: full (ell = t), fixed(ell0), log(kappa)
/// (kappa * ceil(log2 t)) and power(alpha) (ceil(t^alpha)).  Results are
/// rounded to the grid and clamped into [h, t].
struct HeightSpec {
    HeightRule rule = HeightRule::Full;
    double param = 0.0;

    double ell_for(double t, double h) const;
    std::string name() const;
};

struct ExperimentPlan {
    FieldModel model;
    Vec nu{};
    PhaseSet phases = PhaseSet::two_phase();
    int a = 0;
    int b = 1;
    std::vector<double> ts;
    HeightSpec height;
    double h = 0.5;
    int replicates = 2;
    std::uint64_t base_seed = 1;
    int p_max = 3;
    Stencil stencil = Stencil::Axis;

    void validate() const;
};

/// One replicate: a sample of X_{t,ell_t}(omega).
struct RunRecord {
    std::uint64_t seed = 0;
    double t = 0.0;
    double ell = 0.0;
    double value = 0.0;
    double walltime_ms = 0.0;
};

/// Documented replicate-seed mixer: mix64(base ^ (index+1)*golden).
std::uint64_t replicate_seed(std::uint64_t base, int replicate);

/// Runs N * |ts| cell problems.  Records are bit-identical regardless of
/// execution order and thread count (walltime excepted) and come back
/// sorted by (t, seed).
std::vector<RunRecord> run_ensemble(const ExperimentPlan& plan, int threads = 0);

struct MomentSummary {
    double t = 0.0;
    double ell = 0.0;
    int n = 0;
    double mean = 0.0;
    double variance = 0.0;            // unbiased
    std::vector<double> central;      // m_2, m_4, ..., m_{2 p_max} about the mean
    double expmom = 1.0;              // empirical exp-moment at the given constant
};

/// Ensemble moments of records sharing one (t, ell).  Throws a
/// WrongArityError for fewer than two records.
MomentSummary moments(std::span<const RunRecord> records, int p_max, int dim,
                      double concentration_c);

/// Mean of exp((|x - mean| / sqrt(t^{1-d} ell))^{1/d} / C).
double exp_moment(std::span<const RunRecord> records, double mean, int dim, double C);

/// Empirical concentration functional over an ensemble at fixed (t, ell);
/// the sample mean centers the fluctuation.
double concentration_check(std::span<const RunRecord> records, double c_d, int dim);

struct ScalingFit {
    bool valid = false;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    std::vector<double> ratios;  // Var * t^{d-1} / ell per summary
};

/// Least squares of log Var against log t; skipped (valid = false) when any
/// variance vanishes or fewer than three points exist.
ScalingFit variance_scaling_fit(std::span<const MomentSummary> summaries, int dim);

struct ConvergenceRow {
    std::string rule;
    double t = 0.0;
    double ell = 0.0;
    int n = 0;
    double mean = 0.0;
    double ci_halfwidth = 0.0;   // 95% normal CI
    double diff_to_full = 0.0;   // |mean - mean_full(t)|, NaN without a full rule
};

/// Expectation-convergence experiment across height rules sharing the same
/// geometry and field model.
std::vector<ConvergenceRow> expectation_convergence(std::span<const ExperimentPlan> plans,
                                                    int threads = 0);

/// Two-sample Kolmogorov-Smirnov statistic sup |F1 - F2| (inputs copied and
/// sorted internally).
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// Rejection threshold c(alpha) * sqrt((n+m)/(n m)) with
/// c(alpha) = sqrt(-ln(alpha/2)/2).
double ks_threshold(std::size_t n, std::size_t m, double alpha);

/// Seeded bootstrap: returns the statistic over `resamples` resamples,
/// sorted ascending (quantiles give CIs).
std::vector<double> bootstrap_stat(std::span<const double> values,
                                   const std::function<double(std::span<const double>)>& stat,
                                   int resamples, std::uint64_t seed);

}  // namespace homoglab

#endif
