#include <cstdio>
#include <limits>
#include "homoglab/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "homoglab/parallel.hpp"

namespace homoglab {

double HeightSpec::ell_for(double t, double h) const {
    double ell = t;
    switch (rule) {
        case HeightRule::Full: ell = t; break;
        case HeightRule::Fixed: ell = param; break;
        case HeightRule::Log: ell = param * std::ceil(std::log2(std::max(t, 2.0))); break;
        case HeightRule::Power: ell = std::ceil(std::pow(t, param)); break;
    }
    // Round to the grid and clamp into [h, t].
    ell = std::llround(ell / h) * h;
    return std::min(std::max(ell, h), t);
}

std::string HeightSpec::name() const {
    char buf[48];
    switch (rule) {
        case HeightRule::Full: return "full";
        case HeightRule::Fixed: std::snprintf(buf, sizeof buf, "fixed(%g)", param); break;
        case HeightRule::Log: std::snprintf(buf, sizeof buf, "log(%g)", param); break;
        case HeightRule::Power: std::snprintf(buf, sizeof buf, "power(%g)", param); break;
    }
    return buf;
}

void ExperimentPlan::validate() const {
    model.validate();
    phases.validate();
    if (ts.empty()) throw ParameterError("plan needs a non-empty t schedule");
    if (replicates < 2) throw ParameterError("plan needs N >= 2 replicates");
    if (!(h > 0.0)) throw ParameterError("plan needs h > 0");
    if (p_max < 1) throw ParameterError("plan needs p_max >= 1");
    if (!is_unit(nu, model.dim)) throw ParameterError("plan direction must be unit length");
    for (double t : ts) {
        const double ell = height.ell_for(t, h);
        if (ell < 1.0 - 1e-9 || ell > t + 1e-9)
            throw ParameterError("height rule leaves the admissible band 1 <= ell <= t");
    }
}

std::uint64_t replicate_seed(std::uint64_t base, int replicate) {
    return rng::mix64(base ^ (static_cast<std::uint64_t>(replicate) + 1) * rng::kGolden);
}

std::vector<RunRecord> run_ensemble(const ExperimentPlan& plan, int threads) {
    plan.validate();
    const Direction dir = frame(plan.model.dim, plan.nu);
    const std::size_t total = plan.ts.size() * static_cast<std::size_t>(plan.replicates);
    std::vector<RunRecord> records(total);

    parallel_for(total, threads, [&](std::size_t k) {
        const std::size_t ti = k / plan.replicates;
        const int rep = static_cast<int>(k % plan.replicates);
        const double t = plan.ts[ti];
        const std::uint64_t seed = replicate_seed(plan.base_seed, rep);

        const auto t0 = std::chrono::steady_clock::now();
        CellProblemSpec spec;
        spec.rect.t = t;
        spec.rect.ell = plan.height.ell_for(t, plan.h);
        spec.rect.dir = dir;
        spec.phases = plan.phases;
        spec.a = plan.a;
        spec.b = plan.b;
        spec.field = instantiate(plan.model, seed);
        spec.h = plan.h;
        spec.stencil = plan.stencil;
        const ProcessValue pv = X(spec);
        const auto t1 = std::chrono::steady_clock::now();

        records[k] = RunRecord{seed, t, spec.rect.ell, pv.value,
                               std::chrono::duration<double, std::milli>(t1 - t0).count()};
    });

    std::sort(records.begin(), records.end(), [](const RunRecord& x, const RunRecord& y) {
        if (x.t != y.t) return x.t < y.t;
        return x.seed < y.seed;
    });
    return records;
}

MomentSummary moments(std::span<const RunRecord> records, int p_max, int dim,
                      double concentration_c) {
    if (records.size() < 2) throw WrongArityError("moments requires at least two records");
    const double t = records.front().t;
    const double ell = records.front().ell;
    for (const RunRecord& r : records)
        if (r.t != t || r.ell != ell)
            throw ParameterError("moments: records must share one (t, ell)");

    const double n = static_cast<double>(records.size());
    double mean = 0.0;
    for (const RunRecord& r : records) mean += r.value;
    mean /= n;

    MomentSummary s;
    s.t = t;
    s.ell = ell;
    s.n = static_cast<int>(records.size());
    s.mean = mean;
    s.central.assign(p_max, 0.0);
    double m2 = 0.0;
    for (const RunRecord& r : records) {
        const double d = r.value - mean;
        m2 += d * d;
        double dk = 1.0;
        for (int p = 1; p <= p_max; ++p) {
            dk *= d * d;
            s.central[p - 1] += dk;
        }
    }
    for (double& c : s.central) c /= n;
    s.variance = m2 / (n - 1.0);
    s.expmom = exp_moment(records, mean, dim, concentration_c);
    return s;
}

double exp_moment(std::span<const RunRecord> records, double mean, int dim, double C) {
    if (records.empty()) return 1.0;
    const double t = records.front().t;
    const double ell = records.front().ell;
    const double norm = std::sqrt(std::pow(t, 1 - dim) * ell);
    double acc = 0.0;
    for (const RunRecord& r : records)
        acc += std::exp(std::pow(std::fabs(r.value - mean) / norm, 1.0 / dim) / C);
    return acc / static_cast<double>(records.size());
}

double concentration_check(std::span<const RunRecord> records, double c_d, int dim) {
    if (records.empty()) return 1.0;
    double mean = 0.0;
    for (const RunRecord& r : records) mean += r.value;
    mean /= static_cast<double>(records.size());
    return exp_moment(records, mean, dim, c_d);
}

ScalingFit variance_scaling_fit(std::span<const MomentSummary> summaries, int dim) {
    ScalingFit fit;
    for (const MomentSummary& s : summaries)
        fit.ratios.push_back(s.variance * std::pow(s.t, dim - 1) / s.ell);
    if (summaries.size() < 3) return fit;
    for (const MomentSummary& s : summaries)
        if (!(s.variance > 0.0)) return fit;

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    const double n = static_cast<double>(summaries.size());
    for (const MomentSummary& s : summaries) {
        const double x = std::log(s.t);
        const double y = std::log(s.variance);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ybar = sy / n;
    for (const MomentSummary& s : summaries) {
        const double x = std::log(s.t);
        const double y = std::log(s.variance);
        const double yhat = fit.intercept + fit.slope * x;
        ss_res += (y - yhat) * (y - yhat);
        ss_tot += (y - ybar) * (y - ybar);
    }
    fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.valid = true;
    return fit;
}

std::vector<ConvergenceRow> expectation_convergence(std::span<const ExperimentPlan> plans,
                                                    int threads) {
    if (plans.empty()) return {};
    for (const ExperimentPlan& p : plans) {
        if (p.model.dim != plans.front().model.dim)
            throw ParameterError("expectation_convergence: dimensions differ");
        for (int j = 0; j < p.model.dim; ++j)
            if (p.nu[j] != plans.front().nu[j])
                throw ParameterError("expectation_convergence: directions differ");
    }

    std::vector<ConvergenceRow> rows;
    std::map<double, double> full_means;
    for (const ExperimentPlan& plan : plans) {
        const std::vector<RunRecord> recs = run_ensemble(plan, threads);
        for (double t : plan.ts) {
            std::vector<RunRecord> group;
            for (const RunRecord& r : recs)
                if (r.t == t) group.push_back(r);
            const MomentSummary s = moments(group, 1, plan.model.dim, 1.0);
            ConvergenceRow row;
            row.rule = plan.height.name();
            row.t = t;
            row.ell = s.ell;
            row.n = s.n;
            row.mean = s.mean;
            row.ci_halfwidth = 1.959963984540054 * std::sqrt(s.variance / s.n);
            row.diff_to_full = std::numeric_limits<double>::quiet_NaN();
            rows.push_back(row);
            if (plan.height.rule == HeightRule::Full) full_means[t] = s.mean;
        }
    }
    for (ConvergenceRow& row : rows) {
        auto it = full_means.find(row.t);
        if (it != full_means.end()) row.diff_to_full = std::fabs(row.mean - it->second);
    }
    return rows;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw ParameterError("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(i / na - j / nb));
    }
    return d;
}

double ks_threshold(std::size_t n, std::size_t m, double alpha) {
    const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
    return c * std::sqrt(static_cast<double>(n + m) /
                         (static_cast<double>(n) * static_cast<double>(m)));
}

std::vector<double> bootstrap_stat(std::span<const double> values,
                                   const std::function<double(std::span<const double>)>& stat,
                                   int resamples, std::uint64_t seed) {
    if (values.empty()) throw ParameterError("bootstrap_stat: empty sample");
    std::vector<double> out;
    out.reserve(resamples);
    std::vector<double> buf(values.size());
    for (int r = 0; r < resamples; ++r) {
        rng::Sequence seq{rng::combine(seed, static_cast<std::uint64_t>(r))};
        for (std::size_t i = 0; i < values.size(); ++i) {
            const std::size_t idx =
                static_cast<std::size_t>(seq.next() % values.size());
            buf[i] = values[idx];
        }
        out.push_back(stat(buf));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace homoglab
