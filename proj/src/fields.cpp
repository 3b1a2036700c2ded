#include "homoglab/fields.hpp"

#include <cassert>
#include <cmath>

namespace homoglab {

double AnisotropyProfile::operator()(std::span<const double> /*zeta*/, const Vec& nu,
                                     int dim) const {
    switch (kind) {
        case AnisotropyKind::Isotropic:
            return 1.0;
        case AnisotropyKind::OneNorm: {
            double n1 = 0.0, n2 = 0.0;
            for (int i = 0; i < dim; ++i) {
                n1 += std::fabs(nu[i]);
                n2 += nu[i] * nu[i];
            }
            const double phi = n1 / std::sqrt(n2);
            const double cap = std::sqrt(static_cast<double>(dim));
            return std::min(std::max(phi, 1.0), cap);
        }
    }
    return 1.0;
}

double AnisotropyProfile::bound(int dim) const {
    return kind == AnisotropyKind::OneNorm ? std::sqrt(static_cast<double>(dim)) : 1.0;
}

void FieldModel::validate() const {
    if (dim < 2 || dim > 3) throw ParameterError("field dimension must be 2 or 3");
    if (!(c >= 1.0)) throw ParameterError("ellipticity bound c must be >= 1");
    switch (kind) {
        case FieldKind::Constant:
            if (!(constant_value >= 1.0 / c && constant_value <= c))
                throw ParameterError("constant value outside [1/c, c]");
            break;
        case FieldKind::Stripe:
            if (!(lo <= hi)) throw ParameterError("stripe weights need lo <= hi");
            if (!(lo >= 1.0 && hi <= 2.0))
                throw ParameterError("stripe weight law must satisfy [lo,hi] within [1,2]");
            if (hi > c) throw ParameterError("stripe weights exceed ellipticity bound c");
            break;
        case FieldKind::Checkerboard:
            if (!(lo <= hi)) throw ParameterError("checkerboard weights need lo <= hi");
            if (!(lo >= 1.0 / c && hi <= c))
                throw ParameterError("checkerboard weight law outside [1/c, c]");
            break;
        case FieldKind::PoissonInclusions:
            if (!(lambda > 0.0)) throw ParameterError("poisson intensity must be positive");
            if (lambda > 64.0) throw ParameterError("poisson intensity above supported range");
            if (!(radius > 0.0)) throw ParameterError("inclusion radius must be positive");
            if (!(background >= 1.0 / c && background <= c))
                throw ParameterError("background value outside [1/c, c]");
            if (!(inclusion >= 1.0 / c && inclusion <= c))
                throw ParameterError("inclusion value outside [1/c, c]");
            break;
    }
}

std::string FieldModel::kind_name() const {
    switch (kind) {
        case FieldKind::Constant: return "constant";
        case FieldKind::Stripe: return "stripe";
        case FieldKind::Checkerboard: return "checkerboard";
        case FieldKind::PoissonInclusions: return "poisson";
    }
    return "?";
}

double stripe_weight(std::uint64_t seed, std::int64_t slab, double lo, double hi) {
    return lo + (hi - lo) * rng::u01(rng::hash_cell1(seed, rng::kStreamStripe, slab));
}

FieldInstance::FieldInstance(FieldModel model, std::uint64_t seed)
    : model_(std::move(model)), seed_(seed) {
    model_.validate();
}

namespace {

std::int64_t upper_int(double x) { return static_cast<std::int64_t>(std::ceil(x)); }
std::int64_t lower_int(double x) { return static_cast<std::int64_t>(std::floor(x)); }

double poisson_scalar(const FieldModel& m, std::uint64_t seed, const Vec& x) {
    // Centers are realized per unit cube keyed by (seed, cube), so the
    // medium has finite range 2r + stencil diameter.
    const int reach = static_cast<int>(std::ceil(m.radius));
    std::int64_t base[3] = {0, 0, 0};
    for (int j = 0; j < m.dim; ++j) base[j] = lower_int(x[j]);
    const double r2 = m.radius * m.radius;

    std::int64_t cube[3] = {0, 0, 0};
    const int lo2 = (m.dim == 3) ? -reach : 0;
    const int hi2 = (m.dim == 3) ? reach : 0;
    for (int dz = lo2; dz <= hi2; ++dz) {
        for (int dy = -reach; dy <= reach; ++dy) {
            for (int dx = -reach; dx <= reach; ++dx) {
                cube[0] = base[0] + dx;
                cube[1] = base[1] + dy;
                cube[2] = base[2] + dz;
                rng::Sequence seq{rng::hash_cell(seed, rng::kStreamPoisson,
                                                 std::span<const std::int64_t>(cube, 3))};
                const int count = rng::poisson(seq, m.lambda);
                for (int k = 0; k < count; ++k) {
                    double d2 = 0.0;
                    for (int j = 0; j < m.dim; ++j) {
                        const double cj = static_cast<double>(cube[j]) + seq.next_u01();
                        const double dj = x[j] - cj;
                        d2 += dj * dj;
                    }
                    if (d2 <= r2) return m.inclusion;
                }
            }
        }
    }
    return m.background;
}

}  // namespace

double FieldInstance::scalar_at(const Vec& x) const {
    Vec p{};
    for (int j = 0; j < model_.dim; ++j) p[j] = x[j] + offset_[j];

    switch (model_.kind) {
        case FieldKind::Constant:
            return model_.constant_value;
        case FieldKind::Stripe:
            return stripe_weight(seed_, upper_int(p[model_.dim - 1]), model_.lo, model_.hi);
        case FieldKind::Checkerboard: {
            std::int64_t cell[3] = {0, 0, 0};
            for (int j = 0; j < model_.dim; ++j) cell[j] = lower_int(p[j]);
            const std::uint64_t h = rng::hash_cell(
                seed_, rng::kStreamChecker, std::span<const std::int64_t>(cell, 3));
            return model_.lo + (model_.hi - model_.lo) * rng::u01(h);
        }
        case FieldKind::PoissonInclusions:
            return poisson_scalar(model_, seed_, p);
    }
    return model_.constant_value;
}

double FieldInstance::evaluate(const Vec& x, std::span<const double> zeta,
                               const Vec& nu) const {
    if (!is_unit(nu, model_.dim))
        throw ContractViolation("evaluate: nu must be a unit vector");
    const double value = scalar_at(x) * model_.anisotropy(zeta, nu, model_.dim);
    assert(value >= 1.0 / (model_.c * model_.anisotropy.bound(model_.dim)) - 1e-12 &&
           value <= model_.c * model_.anisotropy.bound(model_.dim) + 1e-12);
    return value;
}

FieldInstance FieldInstance::shifted(const Vec& z) const {
    FieldInstance out = *this;
    for (int j = 0; j < model_.dim; ++j) out.offset_[j] = offset_[j] + z[j];
    return out;
}

}  // namespace homoglab
