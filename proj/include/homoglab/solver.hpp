#ifndef HOMOGLAB_SOLVER_HPP
#define HOMOGLAB_SOLVER_HPP

#include <iosfwd>

#include "homoglab/cell.hpp"

namespace homoglab {

/// Capacities are scaled to 64-bit integers by round(cost * 2^32); ties
/// break deterministically and the optimum is reproducible across
/// platforms.  The induced error on the minimal value is at most
/// num_facets * 2^-32 in energy units.
inline constexpr double kCapacityScale = 4294967296.0;  // 2^32

struct SolveResult {
    double value = 0.0;         // always energy(labeling, inst), recomputed
    Labeling labeling;
    bool exact = false;         // true: no labeling is lower (up to quantization)
    double quant_error_bound = 0.0;  // num_facets * 2^-32
    bool metric_warning = false;     // multiphase: triangle inequality violated
};

/// Exact two-phase minimum via max-flow duality (source = a-pins,
/// sink = b-pins).  Requires exactly two phases.
SolveResult solve_two_phase(const CutInstance& inst);

/// Ground-truth oracle: full enumeration over free cells.
/// Requires num_phases^num_free <= 2^24.
SolveResult solve_exhaustive(const CutInstance& inst);

/// Alpha-expansion local search for three or more phases.  The returned
/// value never increases across sweeps and is an upper bound on the global
/// minimum.
SolveResult solve_multiphase(const CutInstance& inst);

/// Dispatch: exact two-phase solver when |M| = 2, expansion otherwise.
SolveResult solve_auto(const CutInstance& inst);

/// NetPBM (P2) dump of a labeling for d = 2, one gray level per phase.
void write_pgm(const CutInstance& inst, const Labeling& labeling, std::ostream& os);

}  // namespace homoglab

#endif
