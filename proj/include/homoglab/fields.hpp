#ifndef HOMOGLAB_FIELDS_HPP
#define HOMOGLAB_FIELDS_HPP

#include <cstdint>
#include <span>
#include <string>

#include "homoglab/geometry.hpp"
#include "homoglab/rng.hpp"

namespace homoglab {

enum class FieldKind { Constant, Stripe, Checkerboard, PoissonInclusions };
enum class AnisotropyKind { Isotropic, OneNorm };

/// Separable angular factor phi(zeta, nu).  Isotropic is phi == 1; OneNorm
/// is |nu|_1 / |nu|_2 clamped into [1, sqrt(d)].  Even in (zeta, nu) by
/// construction.
struct AnisotropyProfile {
    AnisotropyKind kind = AnisotropyKind::Isotropic;

    double operator()(std::span<const double> zeta, const Vec& nu, int dim) const;
    /// c_phi with 1/c_phi <= phi <= c_phi.
    double bound(int dim) const;
};

/// Parameters of a stationary random surface tension model.
struct FieldModel {
    FieldKind kind = FieldKind::Constant;
    int dim = 2;
    double c = 2.0;  // ellipticity bound on the scalar part, 1/c <= a(x) <= c

    double constant_value = 1.0;   // Constant
    double lo = 1.0, hi = 2.0;     // Stripe / Checkerboard weight law
    double lambda = 0.0;           // PoissonInclusions: intensity per unit volume
    double radius = 0.0;           //   inclusion radius
    double background = 1.0;       //   value outside inclusions
    double inclusion = 2.0;        //   value inside inclusions

    AnisotropyProfile anisotropy;

    void validate() const;  // throws ParameterError
    std::string kind_name() const;
};

/// Slab weight shared bit-for-bit with the stripe oracle.
double stripe_weight(std::uint64_t seed, std::int64_t slab, double lo, double hi);

/// One realization omega: a pure function of (model, seed, offset).
/// Immutable after construction; concurrent evaluation is safe.
class FieldInstance {
  public:
    FieldInstance() = default;
    FieldInstance(FieldModel model, std::uint64_t seed);

    /// Cost per unit (d-1)-area at x for jump zeta across normal nu.
    /// Requires |nu| = 1 within 1e-12.  Value lies in
    /// [1/(c*c_phi), c*c_phi] and satisfies g(x,zeta,nu) = g(x,-zeta,-nu).
    double evaluate(const Vec& x, std::span<const double> zeta, const Vec& nu) const;

    /// The scalar part a(x) alone.
    double scalar_at(const Vec& x) const;

    /// Realizes the shift group action: evaluate(shifted(z), x, .) equals
    /// evaluate(x + z, .) exactly.  Non-integer z breaks distributional
    /// stationarity for the lattice models; the evaluation itself is exact
    /// for any z.
    FieldInstance shifted(const Vec& z) const;

    const FieldModel& model() const { return model_; }
    std::uint64_t seed() const { return seed_; }
    const Vec& offset() const { return offset_; }

  private:
    FieldModel model_;
    std::uint64_t seed_ = 0;
    Vec offset_{};
};

/// instantiate(model, seed): validates the model and returns the
/// zero-offset realization.
inline FieldInstance instantiate(const FieldModel& model, std::uint64_t seed) {
    return FieldInstance(model, seed);
}

}  // namespace homoglab

#endif
