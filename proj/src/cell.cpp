#include <cstdio>
#include "homoglab/cell.hpp"

#include <cassert>
#include <cmath>
#include <ostream>
#include <string>

namespace homoglab {

namespace {

int grid_count(double extent, double h, const char* what) {
    const double q = extent / h;
    const int m = static_cast<int>(std::llround(q));
    if (m < 1 || std::fabs(m * h - extent) > 1e-9 * std::max(1.0, std::fabs(extent)))
        throw ParameterError(std::string(what) + " is not a positive multiple of the grid spacing");
    return m;
}

// Cauchy-Crofton weights for the extended stencil in 2D: each of the four
// edge families receives an angular sector pi/4; weight = h^2*dphi/(2|e|).
constexpr double kPi = 3.14159265358979323846;

double ext2_axis_weight(double h) { return h * kPi / 8.0; }
double ext2_diag_weight(double h) { return h * kPi / (8.0 * std::sqrt(2.0)); }

// 3D extended weights (18-neighborhood).  Chosen to equalize the flat-
// interface bias at the three symmetry directions e3, (1,1,0)/sqrt(2) and
// (1,1,1)/sqrt(3); maximal bias ~5.5%.
double ext3_fd_coeff() { return 2.0 / (3.0 + std::sqrt(3.0) + 2.0 * std::sqrt(2.0) + std::sqrt(6.0)); }
double ext3_axis_weight(double h) { return (std::sqrt(3.0) - 1.0) * ext3_fd_coeff() * h * h; }
double ext3_diag_weight(double h) { return ext3_fd_coeff() * h * h; }

struct FacetBuilder {
    CutInstance& inst;
    const FieldInstance& field;
    std::vector<std::vector<double>> jumps;  // per pair index

    FacetBuilder(CutInstance& ci, const FieldInstance& f) : inst(ci), field(f) {
        jumps.resize(inst.num_pairs);
        const int m = inst.num_phases;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q)
                jumps[inst.phases.pair_index(p, q)] = inst.phases.jump(p, q);
    }

    void add(int u, int v, const Vec& mid_local, const Vec& normal_world, double area) {
        inst.facet_u.push_back(static_cast<std::int32_t>(u));
        inst.facet_v.push_back(static_cast<std::int32_t>(v));
        const Vec mid_world = inst.dir.to_world(mid_local);
        for (std::size_t k = 0; k < jumps.size(); ++k) {
            const double g = field.evaluate(mid_world, jumps[k], normal_world);
            inst.facet_cost.push_back(area * g);
        }
    }
};

Vec unit_combination(const Direction& dir, int ax0, int ax1, double s1) {
    Vec v{};
    for (int i = 0; i < dir.dim; ++i) v[i] = dir.col[ax0][i] + s1 * dir.col[ax1][i];
    const double n = norm2(v, dir.dim);
    for (int i = 0; i < dir.dim; ++i) v[i] /= n;
    return v;
}

}  // namespace

void CellProblemSpec::validate() const {
    rect.validate();
    phases.validate();
    if (a == b) throw ParameterError("boundary phases a and b must differ");
    if (a < 0 || b < 0 || a >= static_cast<int>(phases.size()) ||
        b >= static_cast<int>(phases.size()))
        throw ParameterError("boundary phase index out of range");
    if (!(h > 0.0)) throw ParameterError("grid spacing must be positive");
    if (field.model().dim != rect.dir.dim)
        throw ParameterError("field dimension does not match geometry");
    grid_count(rect.t, h, "t");
    grid_count(rect.ell, h, "ell");
}

int CutInstance::num_free() const {
    int f = 0;
    for (std::int8_t p : pin) f += (p < 0);
    return f;
}

Vec CutInstance::cell_center_local(int idx) const {
    Vec y{};
    int rem = idx;
    for (int j = 0; j < dim; ++j) {
        const int ij = rem % n[j];
        rem /= n[j];
        y[j] = origin[j] + (ij + 0.5) * h;
    }
    return y;
}

CutInstance discretize_box(const Direction& dir, const BoxSpec& box, const PhaseSet& phases,
                           int a, int b, const FieldInstance& field, double h,
                           Stencil stencil) {
    phases.validate();
    if (a == b) throw ParameterError("boundary phases a and b must differ");
    if (field.model().dim != dir.dim) throw ParameterError("field/geometry dimension mismatch");

    CutInstance inst;
    inst.dim = dir.dim;
    inst.dir = dir;
    inst.h = h;
    inst.phases = phases;
    inst.num_phases = static_cast<int>(phases.size());
    inst.num_pairs = static_cast<int>(phases.num_pairs());
    inst.a = a;
    inst.b = b;
    inst.height = box.height;

    const int d = dir.dim;
    double max_side = 0.0;
    for (int j = 0; j < d - 1; ++j) {
        const double extent = box.hi[j] - box.lo[j];
        inst.n[j] = grid_count(extent, h, "side extent");
        inst.origin[j] = box.lo[j];
        max_side = std::max(max_side, extent);
    }
    inst.n[d - 1] = grid_count(box.height, h, "height");
    inst.origin[d - 1] = -box.height / 2.0;
    inst.side = max_side;

    inst.num_cells = 1;
    for (int j = 0; j < d; ++j) inst.num_cells *= inst.n[j];

    // Collar pins: every boundary cell takes the pure-jump label at its
    // world center.
    inst.pin.assign(inst.num_cells, -1);
    const Vec x0{};
    for (int idx = 0; idx < inst.num_cells; ++idx) {
        int rem = idx;
        bool collar = false;
        for (int j = 0; j < d; ++j) {
            const int ij = rem % inst.n[j];
            rem /= inst.n[j];
            if (ij == 0 || ij == inst.n[j] - 1) collar = true;
        }
        if (collar) {
            const int side01 = pure_jump_side(inst.cell_center_world(idx), x0, dir.nu, d);
            inst.pin[idx] = static_cast<std::int8_t>(side01 ? b : a);
        }
    }

    FacetBuilder fb(inst, field);

    const double axis_area = (stencil == Stencil::Axis)
                                 ? std::pow(h, d - 1)
                                 : (d == 2 ? ext2_axis_weight(h) : ext3_axis_weight(h));

    // Axis families.
    int stride[3] = {1, inst.n[0], inst.n[0] * inst.n[1]};
    for (int ax = 0; ax < d; ++ax) {
        for (int i2 = 0; i2 < (d == 3 ? inst.n[2] : 1); ++i2)
            for (int i1 = 0; i1 < inst.n[1]; ++i1)
                for (int i0 = 0; i0 < inst.n[0]; ++i0) {
                    int ijk[3] = {i0, i1, i2};
                    if (ijk[ax] + 1 >= inst.n[ax]) continue;
                    const int u = inst.cell_index(i0, i1, i2);
                    const int v = u + stride[ax];
                    Vec mid = inst.cell_center_local(u);
                    mid[ax] += h / 2.0;
                    fb.add(u, v, mid, dir.col[ax], axis_area);
                }
    }

    if (stencil == Stencil::Extended) {
        const double diag_area = (d == 2) ? ext2_diag_weight(h) : ext3_diag_weight(h);
        // Diagonal families (e_i + s e_j), i < j, s = +-1.
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                for (int s = 0; s < 2; ++s) {
                    const double sj = s == 0 ? 1.0 : -1.0;
                    const Vec normal = unit_combination(dir, i, j, sj);
                    for (int i2 = 0; i2 < (d == 3 ? inst.n[2] : 1); ++i2)
                        for (int i1 = 0; i1 < inst.n[1]; ++i1)
                            for (int i0 = 0; i0 < inst.n[0]; ++i0) {
                                int ijk[3] = {i0, i1, i2};
                                if (ijk[i] + 1 >= inst.n[i]) continue;
                                if (sj > 0 ? (ijk[j] + 1 >= inst.n[j]) : (ijk[j] == 0))
                                    continue;
                                const int u = inst.cell_index(i0, i1, i2);
                                const int v = u + stride[i] + (sj > 0 ? stride[j] : -stride[j]);
                                Vec mid = inst.cell_center_local(u);
                                mid[i] += h / 2.0;
                                mid[j] += sj * h / 2.0;
                                fb.add(u, v, mid, normal, diag_area);
                            }
                }
    }
    return inst;
}

CutInstance discretize(const CellProblemSpec& spec) {
    spec.validate();
    BoxSpec box;
    box.dim = spec.rect.dir.dim;
    for (int j = 0; j < box.dim - 1; ++j) {
        box.lo[j] = -spec.rect.t / 2.0;
        box.hi[j] = spec.rect.t / 2.0;
    }
    box.height = spec.rect.ell;
    CutInstance inst = discretize_box(spec.rect.dir, box, spec.phases, spec.a, spec.b,
                                      spec.field, spec.h, spec.stencil);
    inst.side = spec.rect.t;
    return inst;
}

double energy(const Labeling& labeling, const CutInstance& inst) {
    if (labeling.size() != static_cast<std::size_t>(inst.num_cells))
        throw ContractViolation("energy: labeling size mismatch");
    for (int i = 0; i < inst.num_cells; ++i) {
        if (inst.pin[i] >= 0 && labeling[i] != inst.pin[i])
            throw ContractViolation("energy: labeling violates a pin");
        if (labeling[i] < 0 || labeling[i] >= inst.num_phases)
            throw ContractViolation("energy: phase index out of range");
    }
    double total = 0.0;
    const std::size_t nf = inst.num_facets();
    for (std::size_t f = 0; f < nf; ++f) {
        const std::int8_t lu = labeling[inst.facet_u[f]];
        const std::int8_t lv = labeling[inst.facet_v[f]];
        if (lu != lv)
            total += inst.facet_cost[f * inst.num_pairs + inst.phases.pair_index(lu, lv)];
    }
    return total;
}

Labeling pure_jump_labeling(const CutInstance& inst) {
    Labeling lab(inst.num_cells);
    const Vec x0{};
    for (int i = 0; i < inst.num_cells; ++i) {
        if (inst.pin[i] >= 0) {
            lab[i] = inst.pin[i];
        } else {
            const int s = pure_jump_side(inst.cell_center_world(i), x0, inst.dir.nu, inst.dim);
            lab[i] = static_cast<std::int8_t>(s ? inst.b : inst.a);
        }
    }
    return lab;
}

void dump_facets(const CutInstance& inst, std::ostream& os) {
    os << "# homoglab facet dump: u v cost_per_phase_pair...\n";
    os << "# cells=" << inst.num_cells << " facets=" << inst.num_facets()
       << " pairs=" << inst.num_pairs << "\n";
    char buf[64];
    for (std::size_t f = 0; f < inst.num_facets(); ++f) {
        os << inst.facet_u[f] << ' ' << inst.facet_v[f];
        for (int k = 0; k < inst.num_pairs; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", inst.facet_cost[f * inst.num_pairs + k]);
            os << ' ' << buf;
        }
        os << '\n';
    }
}

}  // namespace homoglab
