#ifndef HOMOGLAB_PROCESS_HPP
#define HOMOGLAB_PROCESS_HPP

#include <limits>
#include <span>
#include <vector>

#include "homoglab/cell.hpp"
#include "homoglab/solver.hpp"

namespace homoglab {

/// Sentinel for the infinite-height process (height then equals the
/// interval's maximal side length).
inline constexpr double kEllInfinity = std::numeric_limits<double>::infinity();

/// The normalized quantity X_{t,ell}^{a,b,nu} = value / t^{d-1}.
struct ProcessValue {
    double value = 0.0;
    double t = 0.0;
    double ell = 0.0;
    bool exact = true;
    double quant_error_bound = 0.0;  // on the normalized value
};

/// Minimal normalized energy of the cell problem; exact solver for two
/// phases, expansion heuristic otherwise.
ProcessValue X(const CellProblemSpec& spec);

/// A (d-1)-dimensional half-open interval [p, q).
struct Interval {
    int dim = 2;  // ambient spatial dimension d
    std::array<double, 2> p{};
    std::array<double, 2> q{};

    double s_max() const;
    double measure() const;
    void validate() const;

    static Interval centered(int dim, double t);
};

struct MuValue {
    double value = 0.0;  // energy units
    double height = 0.0;
    double quant_error_bound = 0.0;
};

/// The interval process: minimal energy over the box spanned by I with
/// height min(ell, s_max(I)) and pure-jump boundary collar.
MuValue mu(const Interval& I, double ell, const Direction& dir, const PhaseSet& phases,
           int a, int b, const FieldInstance& field, double h,
           Stencil stencil = Stencil::Axis);

/// Outcome of a per-realization inequality check: lhs <= rhs + slack, where
/// slack covers the capacity quantization of both solves.
struct Witness {
    bool ok = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
};

/// X_{t,ell'} <= X_{t,ell} on the same realization, for ell' >= ell.
Witness check_monotone_ell(const CellProblemSpec& spec, double ell_prime);

/// X_{t',ell} <= X_{t,ell} + c*c_phi*(t'-t)/t' on the same realization.
Witness check_almost_monotone_t(const CellProblemSpec& spec, double t_prime);

/// mu(I) <= sum_i mu(I_i) for an exact partition of I.
Witness check_subadditive(const Interval& I, std::span<const Interval> parts, double ell,
                          const Direction& dir, const PhaseSet& phases, int a, int b,
                          const FieldInstance& field, double h);

struct PlanelikeRow {
    std::uint64_t seed = 0;
    double t = 0.0;
    double x_fixed = 0.0;  // X_{t, ell_fixed}
    double x_full = 0.0;   // X_{t, t}
    double gap = 0.0;      // x_fixed - x_full
};

/// Per seed and t: the height-clamped and full-height values and their gap.
std::vector<PlanelikeRow> planelike_gap(const FieldModel& model, double ell_fixed,
                                        std::span<const double> ts,
                                        std::span<const std::uint64_t> seeds, double h,
                                        int threads = 0);

}  // namespace homoglab

#endif
