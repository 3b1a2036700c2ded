#include "homoglab/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "homoglab/errors.hpp"

namespace homoglab {

double stripe_Y(const StripeRealization& r, int ell) {
    if (ell < 1) throw ParameterError("stripe_Y requires ell >= 1");
    double y = r.weight(-ell + 1);
    for (std::int64_t i = -ell + 2; i <= ell; ++i) y = std::min(y, r.weight(i));
    return y;
}

double stripe_exceedance(int ell, double s) {
    if (ell < 1) throw ParameterError("stripe_exceedance requires ell >= 1");
    if (s < 1.0 || s > 2.0) throw ParameterError("stripe_exceedance requires s in [1, 2]");
    return std::pow(2.0 - s, 2.0 * ell);
}

double stripe_competitor_bound(const StripeRealization& r, int ell, double t) {
    return t * stripe_Y(r, ell) + 4.0 * ell;
}

}  // namespace homoglab
