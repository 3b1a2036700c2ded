#include "homoglab/process.hpp"

#include <algorithm>
#include <cmath>

#include "homoglab/parallel.hpp"

namespace homoglab {

ProcessValue X(const CellProblemSpec& spec) {
    const CutInstance inst = discretize(spec);
    const SolveResult sol = solve_auto(inst);
    const double norm = std::pow(spec.rect.t, spec.rect.dir.dim - 1);
    ProcessValue pv;
    pv.value = sol.value / norm;
    pv.t = spec.rect.t;
    pv.ell = spec.rect.ell;
    pv.exact = sol.exact;
    pv.quant_error_bound = sol.quant_error_bound / norm;
    return pv;
}

double Interval::s_max() const {
    double s = 0.0;
    for (int j = 0; j < dim - 1; ++j) s = std::max(s, q[j] - p[j]);
    return s;
}

double Interval::measure() const {
    double v = 1.0;
    for (int j = 0; j < dim - 1; ++j) v *= q[j] - p[j];
    return v;
}

void Interval::validate() const {
    if (dim < 2 || dim > 3) throw ParameterError("Interval: dimension must be 2 or 3");
    for (int j = 0; j < dim - 1; ++j)
        if (!(p[j] < q[j])) throw ParameterError("Interval requires p < q per coordinate");
}

Interval Interval::centered(int dim, double t) {
    Interval I;
    I.dim = dim;
    for (int j = 0; j < dim - 1; ++j) {
        I.p[j] = -t / 2.0;
        I.q[j] = t / 2.0;
    }
    return I;
}

MuValue mu(const Interval& I, double ell, const Direction& dir, const PhaseSet& phases,
           int a, int b, const FieldInstance& field, double h, Stencil stencil) {
    I.validate();
    if (I.dim != dir.dim) throw ParameterError("mu: interval/direction dimension mismatch");
    if (!(ell > 0.0)) throw ParameterError("mu: height must be positive (or infinity)");

    BoxSpec box;
    box.dim = dir.dim;
    for (int j = 0; j < dir.dim - 1; ++j) {
        box.lo[j] = I.p[j];
        box.hi[j] = I.q[j];
    }
    box.height = std::isinf(ell) ? I.s_max() : std::min(ell, I.s_max());

    const CutInstance inst = discretize_box(dir, box, phases, a, b, field, h, stencil);
    const SolveResult sol = solve_auto(inst);
    MuValue mv;
    mv.value = sol.value;
    mv.height = box.height;
    mv.quant_error_bound = sol.quant_error_bound;
    return mv;
}

Witness check_monotone_ell(const CellProblemSpec& spec, double ell_prime) {
    if (ell_prime < spec.rect.ell)
        throw ParameterError("check_monotone_ell requires ell' >= ell");
    CellProblemSpec wider = spec;
    wider.rect.ell = ell_prime;
    const ProcessValue lo = X(spec);
    const ProcessValue hi = X(wider);
    Witness w;
    w.lhs = hi.value;  // X_{t,ell'}
    w.rhs = lo.value;  // X_{t,ell}
    w.slack = lo.quant_error_bound + hi.quant_error_bound;
    w.ok = w.lhs <= w.rhs + w.slack;
    return w;
}

Witness check_almost_monotone_t(const CellProblemSpec& spec, double t_prime) {
    if (t_prime < spec.rect.t)
        throw ParameterError("check_almost_monotone_t requires t' >= t");
    CellProblemSpec wider = spec;
    wider.rect.t = t_prime;
    const ProcessValue base = X(spec);
    const ProcessValue wide = X(wider);
    const FieldModel& m = spec.field.model();
    const double cc = m.c * m.anisotropy.bound(m.dim);
    Witness w;
    w.lhs = wide.value;
    w.rhs = base.value + cc * (t_prime - spec.rect.t) / t_prime;
    w.slack = base.quant_error_bound + wide.quant_error_bound;
    w.ok = w.lhs <= w.rhs + w.slack;
    return w;
}

Witness check_subadditive(const Interval& I, std::span<const Interval> parts, double ell,
                          const Direction& dir, const PhaseSet& phases, int a, int b,
                          const FieldInstance& field, double h) {
    I.validate();
    if (parts.empty()) throw ParameterError("check_subadditive: empty partition");
    double total = 0.0;
    for (const Interval& part : parts) {
        part.validate();
        for (int j = 0; j < I.dim - 1; ++j)
            if (part.p[j] < I.p[j] - 1e-12 || part.q[j] > I.q[j] + 1e-12)
                throw ParameterError("check_subadditive: part exceeds the interval");
        total += part.measure();
        for (const Interval& other : parts) {
            if (&other == &part) continue;
            bool overlap = true;
            for (int j = 0; j < I.dim - 1; ++j)
                if (part.q[j] <= other.p[j] + 1e-12 || other.q[j] <= part.p[j] + 1e-12)
                    overlap = false;
            if (overlap) throw ParameterError("check_subadditive: parts overlap");
        }
    }
    if (std::fabs(total - I.measure()) > 1e-9 * std::max(1.0, I.measure()))
        throw ParameterError("check_subadditive: parts do not cover the interval");

    const MuValue whole = mu(I, ell, dir, phases, a, b, field, h);
    double sum = 0.0;
    double slack = whole.quant_error_bound;
    for (const Interval& part : parts) {
        const MuValue mp = mu(part, ell, dir, phases, a, b, field, h);
        sum += mp.value;
        slack += mp.quant_error_bound;
    }
    Witness w;
    w.lhs = whole.value;
    w.rhs = sum;
    w.slack = slack;
    w.ok = w.lhs <= w.rhs + w.slack;
    return w;
}

std::vector<PlanelikeRow> planelike_gap(const FieldModel& model, double ell_fixed,
                                        std::span<const double> ts,
                                        std::span<const std::uint64_t> seeds, double h,
                                        int threads) {
    std::vector<PlanelikeRow> rows(ts.size() * seeds.size());
    const Direction dir = frame(model.dim, model.dim == 2 ? Vec{0, 1, 0} : Vec{0, 0, 1});
    parallel_for(rows.size(), threads, [&](std::size_t k) {
        const std::size_t si = k / ts.size();
        const std::size_t ti = k % ts.size();
        const double t = ts[ti];
        const FieldInstance field = instantiate(model, seeds[si]);

        CellProblemSpec spec;
        spec.rect.t = t;
        spec.rect.ell = std::min(ell_fixed, t);
        spec.rect.dir = dir;
        spec.field = field;
        spec.h = h;
        const ProcessValue fixed = X(spec);

        spec.rect.ell = t;
        const ProcessValue full = X(spec);

        rows[k] = PlanelikeRow{seeds[si], t, fixed.value, full.value,
                               fixed.value - full.value};
    });
    return rows;
}

}  // namespace homoglab
