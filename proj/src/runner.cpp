#include "homoglab/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "homoglab/parallel.hpp"

namespace fs = std::filesystem;

namespace homoglab {

namespace {

constexpr char kCacheMagic[16] = {'H', 'O', 'M', 'O', 'G', 'L', 'A', 'B',
                                  '-', 'R', 'E', 'C', 'v', '0', '1', '\0'};
constexpr std::uint32_t kCacheVersion = 1;
constexpr const char* kCodeVersion = "1.0.0";

struct CacheRow {
    double t, ell, value, walltime_ms;
};

// Per-seed record cache: 16-byte magic, u32 version, u32 row count, u64
// seed, then rows of four doubles.
bool load_cache(const fs::path& file, std::uint64_t seed, std::size_t expect_rows,
                std::vector<CacheRow>& rows) {
    std::ifstream in(file, std::ios::binary);
    if (!in) return false;
    char magic[16];
    std::uint32_t version = 0, count = 0;
    std::uint64_t stored_seed = 0;
    in.read(magic, sizeof magic);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&count), sizeof count);
    in.read(reinterpret_cast<char*>(&stored_seed), sizeof stored_seed);
    if (!in || std::memcmp(magic, kCacheMagic, sizeof magic) != 0 ||
        version != kCacheVersion || stored_seed != seed || count != expect_rows)
        return false;
    rows.resize(count);
    in.read(reinterpret_cast<char*>(rows.data()),
            static_cast<std::streamsize>(count * sizeof(CacheRow)));
    return static_cast<bool>(in);
}

void store_cache(const fs::path& file, std::uint64_t seed,
                 const std::vector<CacheRow>& rows) {
    fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    const auto version = kCacheVersion;
    const auto count = static_cast<std::uint32_t>(rows.size());
    out.write(kCacheMagic, sizeof kCacheMagic);
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&count), sizeof count);
    out.write(reinterpret_cast<const char*>(&seed), sizeof seed);
    out.write(reinterpret_cast<const char*>(rows.data()),
              static_cast<std::streamsize>(rows.size() * sizeof(CacheRow)));
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("failed to write " + path.string());
}

}  // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string records_csv(std::span<const RunRecord> records) {
    std::ostringstream os;
    os << "t,ell,seed,value,walltime_ms\n";
    for (const RunRecord& r : records)
        os << format_g17(r.t) << ',' << format_g17(r.ell) << ',' << r.seed << ','
           << format_g17(r.value) << ',' << format_g17(r.walltime_ms) << '\n';
    return os.str();
}

std::string summaries_csv(std::span<const MomentSummary> summaries) {
    std::ostringstream os;
    os << "t,ell,N,mean,var,m4,m6,expmom\n";
    for (const MomentSummary& s : summaries) {
        const double m4 = s.central.size() > 1 ? s.central[1] : 0.0;
        const double m6 = s.central.size() > 2 ? s.central[2] : 0.0;
        os << format_g17(s.t) << ',' << format_g17(s.ell) << ',' << s.n << ','
           << format_g17(s.mean) << ',' << format_g17(s.variance) << ',' << format_g17(m4)
           << ',' << format_g17(m6) << ',' << format_g17(s.expmom) << '\n';
    }
    return os.str();
}

std::string variance_tsv(std::span<const MomentSummary> summaries, int dim) {
    std::ostringstream os;
    os << "t\tell\tvar\tref_t1md_ell\n";
    for (const MomentSummary& s : summaries)
        os << format_g17(s.t) << '\t' << format_g17(s.ell) << '\t' << format_g17(s.variance)
           << '\t' << format_g17(std::pow(s.t, 1 - dim) * s.ell) << '\n';
    return os.str();
}

std::string mean_tsv(std::span<const ConvergenceRow> rows) {
    std::ostringstream os;
    os << "rule\tt\tell\tN\tmean\tci95\tdiff_to_full\n";
    for (const ConvergenceRow& r : rows)
        os << r.rule << '\t' << format_g17(r.t) << '\t' << format_g17(r.ell) << '\t' << r.n
           << '\t' << format_g17(r.mean) << '\t' << format_g17(r.ci_halfwidth) << '\t'
           << format_g17(r.diff_to_full) << '\n';
    return os.str();
}

std::string exceedance_tsv(std::span<const std::array<double, 5>> rows) {
    std::ostringstream os;
    os << "ell\ts\tempirical\tanalytic\tsigma\n";
    for (const auto& r : rows)
        os << format_g17(r[0]) << '\t' << format_g17(r[1]) << '\t' << format_g17(r[2]) << '\t'
           << format_g17(r[3]) << '\t' << format_g17(r[4]) << '\n';
    return os.str();
}

std::string gap_tsv(std::span<const std::array<double, 5>> rows) {
    std::ostringstream os;
    os << "t\tn\tgap_mean\tgap_median\tfrac_gt_0.02\n";
    for (const auto& r : rows)
        os << format_g17(r[0]) << '\t' << format_g17(r[1]) << '\t' << format_g17(r[2]) << '\t'
           << format_g17(r[3]) << '\t' << format_g17(r[4]) << '\n';
    return os.str();
}

namespace {

class Outputs {
  public:
    Outputs(fs::path dir, std::string config_hash)
        : dir_(std::move(dir)), config_hash_(std::move(config_hash)) {}

    void emit(const std::string& name, const std::string& content) {
        write_file(dir_ / name, content);
        checksums_[name] = hex64(fnv1a64(content.data(), content.size()));
    }

    void finish(const std::string& status) {
        nlohmann::json j;
        j["config_hash"] = config_hash_;
        j["code_version"] = kCodeVersion;
        j["status"] = status;
        nlohmann::json files = nlohmann::json::object();
        for (const auto& [name, sum] : checksums_) files[name] = sum;
        j["files"] = files;
        write_file(dir_ / "manifest.json", j.dump(2) + "\n");
    }

    const fs::path& dir() const { return dir_; }

  private:
    fs::path dir_;
    std::string config_hash_;
    std::map<std::string, std::string> checksums_;
};

// Runs one cell problem for a given (t, ell) on a fixed seed.
double cell_value(const Config& cfg, double t, double ell, std::uint64_t seed,
                  Labeling* labeling_out = nullptr, CutInstance* inst_out = nullptr) {
    CellProblemSpec spec;
    spec.rect.t = t;
    spec.rect.ell = ell;
    spec.rect.dir = frame(cfg.field.dim, cfg.nu);
    spec.phases = PhaseSet::scalar(cfg.phase_count);
    spec.a = cfg.a;
    spec.b = cfg.b;
    spec.field = instantiate(cfg.field, seed);
    spec.h = cfg.h;
    spec.stencil = cfg.stencil;
    spec.validate();
    const CutInstance inst = discretize(spec);
    const SolveResult sol = solve_auto(inst);
    if (labeling_out) *labeling_out = sol.labeling;
    if (inst_out) *inst_out = inst;
    return sol.value / std::pow(t, cfg.field.dim - 1);
}

// Ensemble with per-seed caching: every replicate computes (or loads) a
// row per t in the schedule.  Replicates that fail are dropped from the
// record set and reported through `errors`, so partial results still flush.
std::vector<RunRecord> ensemble_cached(const Config& cfg, const RunnerOptions& opts,
                                       const fs::path& out_dir,
                                       const std::string& config_hash,
                                       const std::vector<std::pair<double, double>>& schedule,
                                       std::vector<std::string>& errors) {
    const std::size_t reps = static_cast<std::size_t>(cfg.replicates);
    std::vector<std::vector<CacheRow>> per_seed(reps);
    std::vector<std::string> failq(reps);
    const fs::path cache_dir = out_dir / "cache" / config_hash;

    parallel_for(reps, opts.threads, [&](std::size_t rep) {
        const std::uint64_t seed = replicate_seed(cfg.base_seed, static_cast<int>(rep));
        const fs::path file = cache_dir / (std::to_string(seed) + ".rec");
        std::vector<CacheRow>& rows = per_seed[rep];
        if (!opts.no_cache && load_cache(file, seed, schedule.size(), rows)) return;
        rows.clear();
        try {
            for (const auto& [t, ell] : schedule) {
                const auto t0 = std::chrono::steady_clock::now();
                const double value = cell_value(cfg, t, ell, seed);
                const auto t1 = std::chrono::steady_clock::now();
                rows.push_back(CacheRow{
                    t, ell, value,
                    std::chrono::duration<double, std::milli>(t1 - t0).count()});
            }
        } catch (const std::exception& e) {
            rows.clear();
            failq[rep] = "seed " + std::to_string(seed) + ": " + e.what();
            return;
        }
        if (!opts.no_cache) store_cache(file, seed, rows);
    });

    std::vector<RunRecord> records;
    records.reserve(reps * schedule.size());
    for (std::size_t rep = 0; rep < reps; ++rep) {
        if (!failq[rep].empty()) {
            errors.push_back(failq[rep]);
            continue;
        }
        const std::uint64_t seed = replicate_seed(cfg.base_seed, static_cast<int>(rep));
        for (const CacheRow& row : per_seed[rep])
            records.push_back(RunRecord{seed, row.t, row.ell, row.value, row.walltime_ms});
    }
    std::sort(records.begin(), records.end(), [](const RunRecord& x, const RunRecord& y) {
        if (x.t != y.t) return x.t < y.t;
        return x.seed < y.seed;
    });
    return records;
}

std::vector<std::pair<double, double>> height_schedule(const Config& cfg) {
    std::vector<std::pair<double, double>> schedule;
    for (double t : cfg.ts) schedule.emplace_back(t, cfg.height.ell_for(t, cfg.h));
    return schedule;
}

std::vector<MomentSummary> summarize(const Config& cfg, std::span<const RunRecord> records) {
    std::vector<MomentSummary> summaries;
    for (double t : cfg.ts) {
        std::vector<RunRecord> group;
        for (const RunRecord& r : records)
            if (r.t == t) group.push_back(r);
        if (group.size() >= 2)
            summaries.push_back(moments(group, cfg.p_max, cfg.field.dim,
                                        cfg.cd_sweep.empty() ? 10.0 : cfg.cd_sweep.front()));
    }
    return summaries;
}

void run_cell(const Config& cfg, const RunnerOptions& opts, Outputs& out) {
    std::vector<RunRecord> records;
    for (const auto& [t, ell] : height_schedule(cfg)) {
        const auto t0 = std::chrono::steady_clock::now();
        Labeling lab;
        CutInstance inst;
        const double value = cell_value(cfg, t, ell, cfg.base_seed,
                                        opts.dump_labeling ? &lab : nullptr,
                                        opts.dump_labeling ? &inst : nullptr);
        const auto t1 = std::chrono::steady_clock::now();
        records.push_back(RunRecord{cfg.base_seed, t, ell, value,
                                    std::chrono::duration<double, std::milli>(t1 - t0).count()});
        if (opts.dump_labeling && cfg.field.dim == 2) {
            std::ostringstream os;
            write_pgm(inst, lab, os);
            out.emit("labeling_t" + format_g17(t) + ".pgm", os.str());
        }
    }
    out.emit("records.csv", records_csv(records));
}

void run_sweep_or_fluct(const Config& cfg, const RunnerOptions& opts, Outputs& out,
                        const std::string& config_hash, std::vector<std::string>& errors) {
    const auto schedule = height_schedule(cfg);
    const std::vector<RunRecord> records =
        ensemble_cached(cfg, opts, out.dir(), config_hash, schedule, errors);
    out.emit("records.csv", records_csv(records));
    const std::vector<MomentSummary> summaries = summarize(cfg, records);
    out.emit("summaries.csv", summaries_csv(summaries));

    if (cfg.experiment == "sweep") {
        std::vector<ConvergenceRow> rows;
        for (const MomentSummary& s : summaries) {
            ConvergenceRow row;
            row.rule = cfg.height.name();
            row.t = s.t;
            row.ell = s.ell;
            row.n = s.n;
            row.mean = s.mean;
            row.ci_halfwidth = 1.959963984540054 * std::sqrt(s.variance / s.n);
            row.diff_to_full = std::numeric_limits<double>::quiet_NaN();
            rows.push_back(row);
        }
        out.emit("mean_vs_t.tsv", mean_tsv(rows));
    } else {  // fluct
        out.emit("variance_vs_t.tsv", variance_tsv(summaries, cfg.field.dim));
        const ScalingFit fit = variance_scaling_fit(summaries, cfg.field.dim);
        std::ostringstream os;
        os << "slope,intercept,r2,valid\n";
        os << format_g17(fit.slope) << ',' << format_g17(fit.intercept) << ','
           << format_g17(fit.r2) << ',' << (fit.valid ? 1 : 0) << '\n';
        out.emit("scaling.csv", os.str());

        std::ostringstream oc;
        oc << "t,ell,C_d,expmom,pass\n";
        for (double t : cfg.ts) {
            std::vector<RunRecord> group;
            for (const RunRecord& r : records)
                if (r.t == t) group.push_back(r);
            if (group.size() < 2) continue;
            for (double cd : cfg.cd_sweep) {
                const double em = concentration_check(group, cd, cfg.field.dim);
                oc << format_g17(t) << ',' << format_g17(group.front().ell) << ','
                   << format_g17(cd) << ',' << format_g17(em) << ',' << (em <= 4.0 ? 1 : 0)
                   << '\n';
            }
        }
        out.emit("concentration.csv", oc.str());
    }
}

void run_oracle_check(const Config& cfg, const RunnerOptions& opts, Outputs& out,
                      const std::string& config_hash, std::vector<std::string>& errors) {
    if (cfg.field.kind != FieldKind::Stripe)
        throw ParameterError("oracle-check requires the stripe field");
    if (cfg.field.dim != 2) throw ParameterError("oracle-check is two-dimensional");
    if (cfg.height.rule != HeightRule::Fixed)
        throw ParameterError("oracle-check requires a fixed height rule (ell = 2*ell0)");
    const double ell = cfg.height.param;
    const int ell0 = static_cast<int>(std::llround(ell / 2.0));
    if (ell0 < 1 || std::fabs(2.0 * ell0 - ell) > 1e-9)
        throw ParameterError("oracle-check requires an even integer height");

    const auto schedule = height_schedule(cfg);
    const std::vector<RunRecord> records =
        ensemble_cached(cfg, opts, out.dir(), config_hash, schedule, errors);

    std::ostringstream os;
    os << "t,seed,Y,X,upper,ok\n";
    for (const RunRecord& r : records) {
        const StripeRealization sr{r.seed, cfg.field.lo, cfg.field.hi};
        const double y = stripe_Y(sr, ell0);
        const double upper = stripe_competitor_bound(sr, ell0, r.t) / r.t;  // normalized
        const bool ok = y <= r.value + 1e-9 && r.value <= upper + 1e-9;
        os << format_g17(r.t) << ',' << r.seed << ',' << format_g17(y) << ','
           << format_g17(r.value) << ',' << format_g17(upper) << ',' << (ok ? 1 : 0) << '\n';
    }
    out.emit("oracle.csv", os.str());

    // Exceedance fixture: empirical frequency over many seeds against the
    // closed form, at the canonical (ell, s) pairs.
    const int n_seeds = 100000;
    const std::array<std::pair<int, double>, 3> pairs{
        {{1, 1.5}, {4, 1.3}, {8, 1.1}}};
    std::vector<std::array<double, 5>> rows;
    for (const auto& [l, s] : pairs) {
        std::int64_t hits = 0;
        for (int k = 0; k < n_seeds; ++k) {
            const StripeRealization sr{replicate_seed(cfg.base_seed, k), cfg.field.lo,
                                       cfg.field.hi};
            if (stripe_Y(sr, l) > s) ++hits;
        }
        const double analytic = stripe_exceedance(l, s);
        const double emp = static_cast<double>(hits) / n_seeds;
        const double sigma = std::sqrt(analytic * (1 - analytic) / n_seeds);
        rows.push_back({static_cast<double>(l), s, emp, analytic, sigma});
    }
    out.emit("exceedance.tsv", exceedance_tsv(rows));
}

void run_planelike(const Config& cfg, const RunnerOptions& opts, Outputs& out,
                   const std::string& config_hash, std::vector<std::string>& errors) {
    if (cfg.height.rule != HeightRule::Fixed)
        throw ParameterError("planelike-gap requires a fixed height rule");

    // Schedule interleaves the clamped and full heights so both land in the
    // same per-seed cache rows.
    std::vector<std::pair<double, double>> schedule;
    for (double t : cfg.ts) {
        schedule.emplace_back(t, std::min(cfg.height.param, t));
        schedule.emplace_back(t, t);
    }
    const std::vector<RunRecord> records =
        ensemble_cached(cfg, opts, out.dir(), config_hash, schedule, errors);

    std::map<std::pair<double, std::uint64_t>, std::pair<double, double>> by_key;
    for (const RunRecord& r : records) {
        auto& slot = by_key[{r.t, r.seed}];
        if (r.ell == r.t && cfg.height.param < r.t)
            slot.second = r.value;
        else
            slot.first = r.value;
    }
    std::ostringstream os;
    os << "t,seed,x_fixed,x_full,gap\n";
    std::map<double, std::vector<double>> gaps;
    for (const auto& [key, vals] : by_key) {
        double x_fixed = vals.first;
        double x_full = vals.second;
        if (cfg.height.param >= key.first) x_full = x_fixed;  // degenerate t <= ell
        os << format_g17(key.first) << ',' << key.second << ',' << format_g17(x_fixed) << ','
           << format_g17(x_full) << ',' << format_g17(x_fixed - x_full) << '\n';
        gaps[key.first].push_back(x_fixed - x_full);
    }
    out.emit("gap.csv", os.str());

    std::vector<std::array<double, 5>> rows;
    for (auto& [t, gs] : gaps) {
        std::sort(gs.begin(), gs.end());
        const double n = static_cast<double>(gs.size());
        double mean = 0.0;
        std::size_t above = 0;
        for (double g : gs) {
            mean += g;
            if (g > 0.02) ++above;
        }
        mean /= n;
        const double median = gs[gs.size() / 2];
        rows.push_back({t, n, mean, median, above / n});
    }
    out.emit("planelike_gap.tsv", gap_tsv(rows));
}

}  // namespace

int run_experiment(const Config& cfg, const RunnerOptions& opts) {
    const fs::path out_dir = opts.out_override.empty() ? cfg.out_dir : opts.out_override;
    const std::string canonical = cfg.canonical_blocks();
    const std::string config_hash = hex64(fnv1a64(canonical.data(), canonical.size()));
    Outputs out(out_dir, config_hash);
    std::vector<std::string> errors;
    try {
        if (cfg.experiment == "cell") {
            run_cell(cfg, opts, out);
        } else if (cfg.experiment == "sweep" || cfg.experiment == "fluct") {
            run_sweep_or_fluct(cfg, opts, out, config_hash, errors);
        } else if (cfg.experiment == "oracle-check") {
            run_oracle_check(cfg, opts, out, config_hash, errors);
        } else if (cfg.experiment == "planelike-gap") {
            run_planelike(cfg, opts, out, config_hash, errors);
        } else {
            throw ParameterError("unknown experiment kind " + cfg.experiment);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        out.finish(std::string("error: ") + e.what());
        return 1;
    }
    if (!errors.empty()) {
        for (const std::string& msg : errors) std::cerr << "replicate failed: " << msg << "\n";
        out.finish("partial: " + std::to_string(errors.size()) + " replicates failed");
        return 1;
    }
    out.finish("ok");
    return 0;
}

}  // namespace homoglab
