#include "homoglab/solver.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>

#include "homoglab/errors.hpp"
#include "homoglab/maxflow.hpp"

namespace homoglab {

namespace {

std::uint64_t quantize(double cost) {
    return static_cast<std::uint64_t>(std::llround(cost * kCapacityScale));
}

double quant_bound(const CutInstance& inst) {
    return static_cast<double>(inst.num_facets()) / kCapacityScale;
}

}  // namespace

SolveResult solve_two_phase(const CutInstance& inst) {
    if (inst.num_phases != 2)
        throw WrongArityError("solve_two_phase requires exactly two phases");

    // Compact node ids for free cells; pinned cells merge into the
    // terminals.
    std::vector<std::int32_t> node(inst.num_cells, -1);
    int nf = 0;
    for (int i = 0; i < inst.num_cells; ++i)
        if (inst.pin[i] < 0) node[i] = nf++;
    const int source = nf;
    const int sink = nf + 1;

    MaxFlow mf(nf + 2);
    std::vector<std::uint64_t> to_source(nf, 0), to_sink(nf, 0);
    const int a = inst.a, b = inst.b;
    const std::size_t m = inst.num_facets();
    for (std::size_t f = 0; f < m; ++f) {
        const int u = inst.facet_u[f];
        const int v = inst.facet_v[f];
        const std::uint64_t c = quantize(inst.facet_cost[f]);
        const std::int8_t pu = inst.pin[u];
        const std::int8_t pv = inst.pin[v];
        if (pu < 0 && pv < 0) {
            mf.add_edge(node[u], node[v], c, c);
        } else if (pu < 0) {
            (pv == a ? to_source : to_sink)[node[u]] += c;
        } else if (pv < 0) {
            (pu == a ? to_source : to_sink)[node[v]] += c;
        }
        // pin-pin facets contribute a constant; the final energy resum
        // picks them up.
    }
    for (int i = 0; i < nf; ++i) {
        if (to_source[i]) mf.add_edge(source, i, to_source[i], 0);
        if (to_sink[i]) mf.add_edge(i, sink, to_sink[i], 0);
    }
    mf.solve(source, sink);
    const auto& reaches_sink = mf.sink_side();

    SolveResult res;
    res.labeling.resize(inst.num_cells);
    for (int i = 0; i < inst.num_cells; ++i) {
        if (inst.pin[i] >= 0)
            res.labeling[i] = inst.pin[i];
        else
            res.labeling[i] = static_cast<std::int8_t>(reaches_sink[node[i]] ? b : a);
    }
    res.value = energy(res.labeling, inst);
    res.exact = true;
    res.quant_error_bound = quant_bound(inst);
    return res;
}

SolveResult solve_exhaustive(const CutInstance& inst) {
    std::vector<int> free_cells;
    for (int i = 0; i < inst.num_cells; ++i)
        if (inst.pin[i] < 0) free_cells.push_back(i);

    const double combos = std::pow(static_cast<double>(inst.num_phases),
                                   static_cast<double>(free_cells.size()));
    if (combos > static_cast<double>(1 << 24))
        throw SizeError("solve_exhaustive: instance too large to enumerate");

    Labeling lab(inst.num_cells);
    for (int i = 0; i < inst.num_cells; ++i) lab[i] = inst.pin[i] >= 0 ? inst.pin[i] : 0;

    const std::size_t m = inst.num_facets();
    auto energy_raw = [&](const Labeling& l) {
        double total = 0.0;
        for (std::size_t f = 0; f < m; ++f) {
            const std::int8_t lu = l[inst.facet_u[f]];
            const std::int8_t lv = l[inst.facet_v[f]];
            if (lu != lv)
                total += inst.facet_cost[f * inst.num_pairs + inst.phases.pair_index(lu, lv)];
        }
        return total;
    };

    Labeling best = lab;
    double best_e = energy_raw(lab);
    // Odometer over free-cell assignments.
    while (true) {
        std::size_t k = 0;
        for (; k < free_cells.size(); ++k) {
            std::int8_t& v = lab[free_cells[k]];
            if (++v < inst.num_phases) break;
            v = 0;
        }
        if (k == free_cells.size()) break;
        const double e = energy_raw(lab);
        if (e < best_e) {
            best_e = e;
            best = lab;
        }
    }

    SolveResult res;
    res.labeling = std::move(best);
    res.value = energy(res.labeling, inst);
    res.exact = true;
    res.quant_error_bound = 0.0;
    return res;
}

namespace {

// One alpha-expansion step: returns the optimal move labeling.
Labeling expansion_move(const CutInstance& inst, const Labeling& cur, int alpha) {
    std::vector<std::int32_t> node(inst.num_cells, -1);
    int nf = 0;
    for (int i = 0; i < inst.num_cells; ++i)
        if (inst.pin[i] < 0) node[i] = nf++;
    const int source = nf;
    const int sink = nf + 1;

    // Convention: source side = take alpha, sink side = keep current label.
    std::vector<std::uint64_t> to_source(nf, 0), to_sink(nf, 0);
    MaxFlow mf(nf + 2);

    auto pair_cost = [&](std::size_t f, int p, int q) -> double {
        if (p == q) return 0.0;
        return inst.facet_cost[f * inst.num_pairs + inst.phases.pair_index(p, q)];
    };

    const std::size_t m = inst.num_facets();
    for (std::size_t f = 0; f < m; ++f) {
        const int u = inst.facet_u[f];
        const int v = inst.facet_v[f];
        const bool fu = inst.pin[u] < 0;
        const bool fv = inst.pin[v] < 0;
        if (!fu && !fv) continue;
        if (fu && fv) {
            const double A = pair_cost(f, cur[u], cur[v]);   // keep, keep
            const double B = pair_cost(f, cur[u], alpha);    // keep, alpha
            const double C = pair_cost(f, alpha, cur[v]);    // alpha, keep
            // D = pair_cost(alpha, alpha) = 0
            // E = A + (C-A) yu + (0-C) yv + (B+C-A) (1-yu) yv
            double lambda = B + C - A;
            if (lambda < 0) lambda = 0;  // non-metric costs, clamped
            const double cu = C - A;
            if (cu >= 0)
                to_sink[node[u]] += quantize(cu);
            else
                to_source[node[u]] += quantize(-cu);
            to_source[node[v]] += quantize(C);  // -(0-C) on yv = 0 branch
            if (lambda > 0) mf.add_edge(node[v], node[u], quantize(lambda), 0);
        } else {
            const int fr = fu ? u : v;
            const int pinned = fu ? v : u;
            const double keep = pair_cost(f, cur[fr], inst.pin[pinned]);
            const double take = pair_cost(f, alpha, inst.pin[pinned]);
            // penalty (take - keep) when on the source side
            const double diff = take - keep;
            if (diff >= 0)
                to_sink[node[fr]] += quantize(diff);
            else
                to_source[node[fr]] += quantize(-diff);
        }
    }
    for (int i = 0; i < nf; ++i) {
        if (to_source[i]) mf.add_edge(source, i, to_source[i], 0);
        if (to_sink[i]) mf.add_edge(i, sink, to_sink[i], 0);
    }
    mf.solve(source, sink);
    const auto& reaches_sink = mf.sink_side();

    Labeling next = cur;
    for (int i = 0; i < inst.num_cells; ++i)
        if (inst.pin[i] < 0 && !reaches_sink[node[i]])
            next[i] = static_cast<std::int8_t>(alpha);
    return next;
}

}  // namespace

SolveResult solve_multiphase(const CutInstance& inst) {
    if (inst.num_phases < 3)
        throw WrongArityError("solve_multiphase requires at least three phases");

    SolveResult res;
    res.metric_warning = false;
    // Semi-metric check per facet (triangle inequality through any phase).
    const int mph = inst.num_phases;
    for (std::size_t f = 0; f < inst.num_facets() && !res.metric_warning; ++f) {
        for (int p = 0; p < mph && !res.metric_warning; ++p)
            for (int q = p + 1; q < mph && !res.metric_warning; ++q)
                for (int r = 0; r < mph; ++r) {
                    if (r == p || r == q) continue;
                    const double direct =
                        inst.facet_cost[f * inst.num_pairs + inst.phases.pair_index(p, q)];
                    const double via =
                        inst.facet_cost[f * inst.num_pairs + inst.phases.pair_index(p, r)] +
                        inst.facet_cost[f * inst.num_pairs + inst.phases.pair_index(r, q)];
                    if (direct > via + 1e-9) {
                        res.metric_warning = true;
                        break;
                    }
                }
    }

    Labeling cur = pure_jump_labeling(inst);
    double cur_e = energy(cur, inst);

    // Expansion sweeps in fixed phase order until no move improves.
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool moved = false;
        for (int alpha = 0; alpha < mph; ++alpha) {
            Labeling cand = expansion_move(inst, cur, alpha);
            const double e = energy(cand, inst);
            if (e < cur_e) {
                cur = std::move(cand);
                cur_e = e;
                moved = true;
            }
        }
        if (!moved) break;
    }

    res.labeling = std::move(cur);
    res.value = cur_e;
    res.exact = false;
    res.quant_error_bound = quant_bound(inst);
    return res;
}

SolveResult solve_auto(const CutInstance& inst) {
    return inst.num_phases == 2 ? solve_two_phase(inst) : solve_multiphase(inst);
}

void write_pgm(const CutInstance& inst, const Labeling& labeling, std::ostream& os) {
    if (inst.dim != 2) throw ParameterError("PGM dump is only available for d = 2");
    os << "P2\n" << inst.n[0] << ' ' << inst.n[1] << "\n255\n";
    for (int j = inst.n[1] - 1; j >= 0; --j) {
        for (int i = 0; i < inst.n[0]; ++i) {
            const int lab = labeling[inst.cell_index(i, j)];
            const int gray =
                inst.num_phases > 1 ? lab * 255 / (inst.num_phases - 1) : 0;
            os << gray << (i + 1 == inst.n[0] ? '\n' : ' ');
        }
    }
}

}  // namespace homoglab
