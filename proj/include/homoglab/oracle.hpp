#ifndef HOMOGLAB_ORACLE_HPP
#define HOMOGLAB_ORACLE_HPP

#include <cstdint>

#include "homoglab/fields.hpp"

namespace homoglab {

/// Closed-form ground truth for the stripe medium (d = 2).  Slab weights
/// are derived through the same code path as the stripe field, so oracle
/// and solver see bit-identical realizations.
struct StripeRealization {
    std::uint64_t seed = 0;
    double lo = 1.0;
    double hi = 2.0;

    double weight(std::int64_t slab) const { return stripe_weight(seed, slab, lo, hi); }
};

/// Y_ell: minimum slab weight over slabs -ell+1 .. ell.  Non-increasing in
/// ell.  Requires ell >= 1.
double stripe_Y(const StripeRealization& r, int ell);

/// P(Y_ell > s) = (2 - s)^(2 ell) for the canonical [1,2]-uniform law;
/// accepts s in [1, 2] (endpoints give 1 and 0).
double stripe_exceedance(int ell, double s);

/// Explicit competitor energy bound t*Y_ell + 4*ell; the numeric
/// t^{d-1} * X_{t,2 ell} never exceeds it.
double stripe_competitor_bound(const StripeRealization& r, int ell, double t);

/// The exact homogenized limit of the stripe medium in direction e_2.
constexpr double stripe_g_hom() { return 1.0; }

}  // namespace homoglab

#endif
