#include "homoglab/geometry.hpp"

#include <cmath>
#include <string>

namespace homoglab {

double norm2(const Vec& a, int dim) {
    return std::sqrt(dot(a, a, dim));
}

bool is_unit(const Vec& nu, int dim, double tol) {
    return std::fabs(norm2(nu, dim) - 1.0) <= tol;
}

Direction frame(int dim, const Vec& nu) {
    if (dim < 2 || dim > 3) throw ParameterError("dimension must be 2 or 3");
    if (!is_unit(nu, dim)) throw ContractViolation("frame: nu must be a unit vector");

    Direction d;
    d.dim = dim;
    d.nu = nu;

    Vec w{};
    for (int i = 0; i < dim; ++i) w[i] = nu[i];
    w[dim - 1] += 1.0;
    const double wn2 = dot(w, w, dim);

    if (wn2 < 1e-14) {
        // nu == -e_d
        for (int j = 0; j < dim; ++j) {
            d.col[j] = Vec{};
            d.col[j][j] = -1.0;
        }
    } else {
        for (int j = 0; j < dim; ++j) {
            const double f = 2.0 * w[j] / wn2;
            d.col[j] = Vec{};
            for (int i = 0; i < dim; ++i) d.col[j][i] = f * w[i];
            d.col[j][j] -= 1.0;
        }
    }
    // The last column equals nu up to roundoff; pin it exactly.
    d.col[dim - 1] = nu;
    return d;
}

int pure_jump_side(const Vec& x, const Vec& x0, const Vec& nu, int dim) {
    Vec r{};
    for (int i = 0; i < dim; ++i) r[i] = x[i] - x0[i];
    return dot(r, nu, dim) > 0.0 ? 1 : 0;
}

std::size_t PhaseSet::pair_index(int p, int q) const {
    if (p == q) throw ContractViolation("pair_index: equal phases");
    if (p > q) std::swap(p, q);
    const std::size_t m = size();
    return static_cast<std::size_t>(p) * (2 * m - p - 1) / 2 + (q - p - 1);
}

std::vector<double> PhaseSet::jump(int p, int q) const {
    const auto& a = points.at(p);
    const auto& b = points.at(q);
    std::vector<double> z(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) z[i] = b[i] - a[i];
    return z;
}

void PhaseSet::validate() const {
    if (size() < 2) throw ParameterError("PhaseSet needs at least 2 phases");
    for (std::size_t i = 0; i < size(); ++i) {
        if (points[i].size() != points[0].size())
            throw ParameterError("PhaseSet points must share a dimension");
        for (std::size_t j = i + 1; j < size(); ++j) {
            bool equal = true;
            for (std::size_t k = 0; k < points[i].size(); ++k)
                if (points[i][k] != points[j][k]) { equal = false; break; }
            if (equal) throw ParameterError("PhaseSet points must be distinct");
        }
    }
}

PhaseSet PhaseSet::scalar(int m) {
    PhaseSet ps;
    for (int i = 0; i < m; ++i) ps.points.push_back({static_cast<double>(i)});
    return ps;
}

}  // namespace homoglab
