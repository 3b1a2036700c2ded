#ifndef HOMOGLAB_GEOMETRY_HPP
#define HOMOGLAB_GEOMETRY_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "homoglab/errors.hpp"

namespace homoglab {

// Points live in dimension d <= 3; unused components stay zero.
using Vec = std::array<double, 3>;

inline double dot(const Vec& a, const Vec& b, int dim) {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += a[j] * b[j];
    return s;
}

double norm2(const Vec& a, int dim);
bool is_unit(const Vec& nu, int dim, double tol = 1e-12);

/// A unit direction together with the orthogonal frame O mapping e_d to nu.
/// col[j] is the j-th column; col[0..d-2] span the hyperplane orthogonal
/// to nu, col[d-1] == nu.
struct Direction {
    int dim = 2;
    Vec nu{};
    std::array<Vec, 3> col{};

    Vec to_world(const Vec& local) const {
        Vec x{};
        for (int j = 0; j < dim; ++j)
            for (int i = 0; i < dim; ++i) x[i] += col[j][i] * local[j];
        return x;
    }
};

/// Builds the frame from the reflection through nu + e_d (the -identity
/// branch handles nu == -e_d).  Throws ContractViolation on non-unit input.
Direction frame(int dim, const Vec& nu);

/// Half-space indicator for the pure-jump datum: 1 (phase b side) when
/// <x - x0, nu> > 0, else 0 (phase a side, including the hyperplane).
int pure_jump_side(const Vec& x, const Vec& x0, const Vec& nu, int dim);

/// The finite phase space M in R^m together with pairwise jump vectors.
struct PhaseSet {
    std::vector<std::vector<double>> points;

    std::size_t size() const { return points.size(); }
    std::size_t num_pairs() const { return size() * (size() - 1) / 2; }

    // Index of the unordered pair {p,q}, p != q.
    std::size_t pair_index(int p, int q) const;
    std::vector<double> jump(int p, int q) const;  // points[q] - points[p]

    void validate() const;  // >= 2 distinct points

    static PhaseSet two_phase() { return PhaseSet{{{0.0}, {1.0}}}; }
    static PhaseSet scalar(int m);
};

/// The hyperrectangle R with side t, height ell along the direction.
struct Hyperrect {
    double t = 0.0;
    double ell = 0.0;
    Direction dir;

    void validate() const {
        if (!(ell > 0.0) || !(t > 0.0) || ell > t + 1e-12)
            throw ParameterError("Hyperrect requires 0 < ell <= t");
    }
};

}  // namespace homoglab

#endif
