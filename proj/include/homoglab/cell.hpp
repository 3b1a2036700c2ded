#ifndef HOMOGLAB_CELL_HPP
#define HOMOGLAB_CELL_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "homoglab/fields.hpp"
#include "homoglab/geometry.hpp"

namespace homoglab {

/// Axis connects grid neighbors (4 in 2D, 6 in 3D).  Extended adds the
/// diagonal families with Cauchy-Crofton length weights so tilted flat
/// interfaces carry at most ~8% perimeter bias.
enum class Stencil { Axis, Extended };

/// Data of one minimization X_{t,ell}^{a,b,nu}.
struct CellProblemSpec {
    Hyperrect rect;
    PhaseSet phases = PhaseSet::two_phase();
    int a = 0;
    int b = 1;
    FieldInstance field;
    double h = 0.5;
    Stencil stencil = Stencil::Axis;

    void validate() const;
};

/// Axis-aligned box in the rotated frame: the first dim-1 coordinates span
/// [lo, hi), the last spans [-height/2, height/2] along nu.
struct BoxSpec {
    int dim = 2;
    std::array<double, 2> lo{};
    std::array<double, 2> hi{};
    double height = 0.0;
};

/// One phase index per grid cell.
using Labeling = std::vector<std::int8_t>;

/// Discretized energy: a facet-weighted grid with boundary pins.
/// The grid lives in the rotated frame, so the hyperrectangle is exactly
/// representable for every direction; facet normals are mapped back through
/// the frame for field evaluation.
struct CutInstance {
    int dim = 2;
    std::array<int, 3> n{1, 1, 1};  // grid dims, n[dim-1] along nu
    int num_cells = 0;
    int num_phases = 2;
    int num_pairs = 1;
    int a = 0;
    int b = 1;
    double h = 1.0;
    double side = 0.0;    // t (max side extent), echoed for normalization
    double height = 0.0;  // ell
    Direction dir;
    std::array<double, 3> origin{};  // local coordinate of the low corner

    std::vector<std::int32_t> facet_u;
    std::vector<std::int32_t> facet_v;
    std::vector<double> facet_cost;  // facet-major, num_pairs entries per facet
    std::vector<std::int8_t> pin;    // -1 free, else pinned phase index
    PhaseSet phases;

    std::size_t num_facets() const { return facet_u.size(); }
    int num_free() const;

    int cell_index(int i0, int i1, int i2 = 0) const {
        return i0 + n[0] * (i1 + n[1] * i2);
    }
    Vec cell_center_local(int idx) const;
    Vec cell_center_world(int idx) const { return dir.to_world(cell_center_local(idx)); }

    double cost(std::size_t facet, int p, int q) const {
        return facet_cost[facet * num_pairs + phases.pair_index(p, q)];
    }
};

/// Discretizes a general box; pins the one-cell boundary collar to the
/// pure-jump datum evaluated at cell centers (x0 = 0).
CutInstance discretize_box(const Direction& dir, const BoxSpec& box, const PhaseSet& phases,
                           int a, int b, const FieldInstance& field, double h,
                           Stencil stencil);

/// Discretizes R_{t,ell}^nu (the centered special case).
CutInstance discretize(const CellProblemSpec& spec);

/// Sum of facet costs across label changes.  Throws ContractViolation when
/// the labeling violates a pin or has the wrong size.
double energy(const Labeling& labeling, const CutInstance& inst);

/// The pure-jump labeling evaluated at cell centers (pins included).
Labeling pure_jump_labeling(const CutInstance& inst);

/// Plain-text facet dump, one facet per line: u v cost...
void dump_facets(const CutInstance& inst, std::ostream& os);

}  // namespace homoglab

#endif
