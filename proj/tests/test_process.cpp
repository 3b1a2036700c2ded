#include <doctest.h>

#include <cmath>

#include "homoglab/oracle.hpp"
#include "homoglab/process.hpp"
#include "homoglab/rng.hpp"

using namespace homoglab;

namespace {

FieldModel constant_model(int dim, double v) {
    FieldModel m;
    m.kind = FieldKind::Constant;
    m.dim = dim;
    m.constant_value = v;
    m.c = 2.0;
    return m;
}

FieldModel stripe_model() {
    FieldModel m;
    m.kind = FieldKind::Stripe;
    m.dim = 2;
    m.c = 2.0;
    return m;
}

FieldModel checker_model(int dim = 2) {
    FieldModel m;
    m.kind = FieldKind::Checkerboard;
    m.dim = dim;
    m.c = 2.0;
    m.lo = 1.0;
    m.hi = 2.0;
    return m;
}

CellProblemSpec axis_spec(double t, double ell, double h, const FieldModel& fm,
                          std::uint64_t seed) {
    CellProblemSpec spec;
    spec.rect.t = t;
    spec.rect.ell = ell;
    spec.rect.dir = frame(fm.dim, fm.dim == 2 ? Vec{0, 1, 0} : Vec{0, 0, 1});
    spec.field = instantiate(fm, seed);
    spec.h = h;
    return spec;
}

}  // namespace

TEST_CASE("constant fields give X = v exactly, both dimensions") {
    for (int dim : {2, 3})
        for (double v : {1.0, 1.7}) {
            const ProcessValue pv = X(axis_spec(8, 4, 0.5, constant_model(dim, v), 3));
            CHECK(std::fabs(pv.value - v) <= 1e-9);
        }
}

TEST_CASE("X respects the uniform energy bound") {
    FieldModel fm = checker_model();
    fm.anisotropy.kind = AnisotropyKind::OneNorm;
    const double cap = fm.c * fm.anisotropy.bound(2);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        CellProblemSpec spec;
        spec.rect.t = 8;
        spec.rect.ell = 4;
        const double ang = 0.1 + 0.17 * seed;
        spec.rect.dir = frame(2, Vec{std::sin(ang), std::cos(ang), 0});
        spec.field = instantiate(fm, seed);
        spec.h = 0.5;
        const ProcessValue pv = X(spec);
        CHECK(pv.value >= 0.0);
        CHECK(pv.value <= cap + pv.quant_error_bound);
    }
}

TEST_CASE("the crossing lower bound holds for axis directions") {
    // every admissible labeling cuts at least one facet per grid column
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const ProcessValue pv = X(axis_spec(8, 4, 0.5, checker_model(), seed));
        const double cap = 2.0;  // c * c_phi with isotropic phi
        CHECK(pv.value >= 1.0 / cap - pv.quant_error_bound);
    }
}

TEST_CASE("stripe sandwich: Y <= X <= Y + 4 ell0 / t per realization") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
        for (int ell0 : {1, 2}) {
            const double t = 32;
            const ProcessValue pv = X(axis_spec(t, 2.0 * ell0, 0.5, stripe_model(), seed));
            const StripeRealization r{seed, 1.0, 2.0};
            const double y = stripe_Y(r, ell0);
            CHECK(pv.value >= y - pv.quant_error_bound);
            CHECK(pv.value <= y + 4.0 * ell0 / t + pv.quant_error_bound);
        }
}

TEST_CASE("mu on the centered interval reproduces X exactly") {
    for (std::uint64_t seed : {4ULL, 9ULL}) {
        const double t = 6, ell = 2, h = 0.5;
        const FieldInstance field = instantiate(checker_model(), seed);
        const Direction dir = frame(2, Vec{0, 1, 0});
        const MuValue m = mu(Interval::centered(2, t), ell, dir, PhaseSet::two_phase(), 0, 1,
                             field, h);
        const ProcessValue pv = X(axis_spec(t, ell, h, checker_model(), seed));
        CHECK(m.value / t == pv.value);  // bit-exact shared code path
        CHECK(m.height == ell);
    }
}

TEST_CASE("mu of a constant field is v times the interval measure") {
    const FieldInstance field = instantiate(constant_model(2, 1.5), 1);
    const Direction dir = frame(2, Vec{0, 1, 0});
    Interval I;
    I.dim = 2;
    I.p[0] = -3.0;
    I.q[0] = 1.0;
    const MuValue m = mu(I, 2.0, dir, PhaseSet::two_phase(), 0, 1, field, 0.5);
    CHECK(std::fabs(m.value - 1.5 * 4.0) <= m.quant_error_bound + 1e-12);
    // and the generic upper bound mu(I) <= c * |I|
    CHECK(m.value <= 2.0 * I.measure() + m.quant_error_bound);
}

TEST_CASE("mu with infinite height uses the maximal side length") {
    const FieldInstance field = instantiate(checker_model(), 12);
    const Direction dir = frame(2, Vec{0, 1, 0});
    Interval I;
    I.dim = 2;
    I.p[0] = 0.0;
    I.q[0] = 4.0;
    const MuValue m = mu(I, kEllInfinity, dir, PhaseSet::two_phase(), 0, 1, field, 0.5);
    CHECK(m.height == 4.0);
}

TEST_CASE("mu rejects misaligned intervals") {
    const FieldInstance field = instantiate(checker_model(), 12);
    const Direction dir = frame(2, Vec{0, 1, 0});
    Interval I;
    I.dim = 2;
    I.p[0] = 0.0;
    I.q[0] = 4.3;
    CHECK_THROWS_AS(mu(I, 2.0, dir, PhaseSet::two_phase(), 0, 1, field, 0.5),
                    ParameterError);
}

TEST_CASE("height monotonicity holds per realization") {
    // equal heights: trivial equality
    const CellProblemSpec spec0 = axis_spec(8, 4, 0.5, checker_model(), 5);
    const Witness eq = check_monotone_ell(spec0, 4);
    CHECK(eq.ok);
    CHECK(eq.lhs == eq.rhs);
    // constant field: equality for every pair of heights
    const Witness c = check_monotone_ell(axis_spec(8, 2, 0.5, constant_model(2, 1.3), 1), 6);
    CHECK(c.ok);
    CHECK(std::fabs(c.lhs - c.rhs) <= c.slack);
    // stripe: strict decrease happens and the inequality never fails
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const Witness w = check_monotone_ell(axis_spec(16, 2, 0.5, stripe_model(), seed), 4);
        CHECK(w.ok);
    }
}

TEST_CASE("t-monotonicity holds with the c*(t'-t)/t' allowance") {
    const Witness triv = check_almost_monotone_t(axis_spec(8, 4, 0.5, checker_model(), 2), 8);
    CHECK(triv.ok);
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const Witness w =
            check_almost_monotone_t(axis_spec(16, 4, 0.5, checker_model(), seed), 24);
        CHECK(w.ok);
    }
    const Witness c = check_almost_monotone_t(axis_spec(8, 4, 0.5, constant_model(2, 1.0), 1), 12);
    CHECK(c.ok);
    CHECK(c.rhs - c.lhs == doctest::Approx(2.0 * (12 - 8) / 12.0).epsilon(1e-9));
}

TEST_CASE("the interval process is subadditive over exact partitions") {
    const Direction dir = frame(2, Vec{0, 1, 0});
    const PhaseSet ph = PhaseSet::two_phase();
    // single part: equality
    {
        const FieldInstance field = instantiate(checker_model(), 3);
        Interval I = Interval::centered(2, 4);
        const Witness w = check_subadditive(I, std::vector<Interval>{I}, 2.0, dir, ph, 0, 1,
                                            field, 0.5);
        CHECK(w.ok);
        CHECK(w.lhs == w.rhs);
    }
    // a split into two half intervals, several seeds
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const FieldInstance field = instantiate(checker_model(), seed);
        Interval I;
        I.dim = 2;
        I.p[0] = 0.0;
        I.q[0] = 8.0;
        Interval L = I, R = I;
        L.q[0] = 4.0;
        R.p[0] = 4.0;
        const Witness w = check_subadditive(I, std::vector<Interval>{L, R}, 4.0, dir, ph, 0,
                                            1, field, 0.5);
        CHECK(w.ok);
    }
    // constant field: both sides equal v |I|
    {
        const FieldInstance field = instantiate(constant_model(2, 1.0), 1);
        Interval I;
        I.dim = 2;
        I.p[0] = 0.0;
        I.q[0] = 8.0;
        Interval L = I, R = I;
        L.q[0] = 4.0;
        R.p[0] = 4.0;
        const Witness w = check_subadditive(I, std::vector<Interval>{L, R}, 4.0, dir, ph, 0,
                                            1, field, 0.5);
        CHECK(w.ok);
        CHECK(std::fabs(w.lhs - w.rhs) <= w.slack);
    }
    // bad partitions are parameter errors
    {
        Interval I;
        I.dim = 2;
        I.p[0] = 0.0;
        I.q[0] = 8.0;
        Interval L = I;
        L.q[0] = 3.0;
        CHECK_THROWS_AS(check_subadditive(I, std::vector<Interval>{L}, 4.0, dir, ph, 0, 1,
                                          instantiate(checker_model(), 3), 0.5),
                        ParameterError);
    }
}

TEST_CASE("the interval process is stationary under integer window shifts") {
    // mu(I + z, field) = mu(I, shift(field, O_nu (z,0))) exactly
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        for (double ang : {0.0, 0.61}) {
            const Direction dir = frame(2, Vec{std::sin(ang), std::cos(ang), 0});
            const FieldInstance field = instantiate(checker_model(), seed);
            Interval I;
            I.dim = 2;
            I.p[0] = -2.0;
            I.q[0] = 2.0;
            const double z = 3.0;
            Interval Iz = I;
            Iz.p[0] += z;
            Iz.q[0] += z;
            const Vec znu = dir.to_world(Vec{z, 0, 0});
            const MuValue lhs = mu(Iz, 2.0, dir, PhaseSet::two_phase(), 0, 1, field, 0.5);
            const MuValue rhs =
                mu(I, 2.0, dir, PhaseSet::two_phase(), 0, 1, field.shifted(znu), 0.5);
            CHECK(lhs.value == rhs.value);
        }
    }
}

TEST_CASE("X is invariant under the (b,a,-nu) relabeling") {
    // rotated direction with isotropic costs: bit-exact
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        CellProblemSpec spec;
        spec.rect.t = 6;
        spec.rect.ell = 3;
        const double ang = 0.2 + 0.31 * seed;
        spec.rect.dir = frame(2, Vec{std::sin(ang), std::cos(ang), 0});
        spec.field = instantiate(checker_model(), seed);
        spec.h = 0.5;
        CellProblemSpec swapped = spec;
        swapped.a = 1;
        swapped.b = 0;
        swapped.rect.dir = frame(2, Vec{-std::sin(ang), -std::cos(ang), 0});
        CHECK(X(spec).value == X(swapped).value);
    }
    // axis direction in 3d
    CellProblemSpec spec = axis_spec(4, 2, 0.5, checker_model(3), 8);
    CellProblemSpec swapped = spec;
    swapped.a = 1;
    swapped.b = 0;
    swapped.rect.dir = frame(3, Vec{0, 0, -1});
    CHECK(X(spec).value == X(swapped).value);
}

TEST_CASE("planelike gap vanishes for constant fields and tracks the stripe oracle") {
    const std::vector<double> ts{16.0};
    const std::vector<std::uint64_t> seeds{1, 2, 3};
    const auto const_rows = planelike_gap(constant_model(2, 1.0), 4.0, ts, seeds, 0.5, 1);
    for (const auto& row : const_rows) CHECK(std::fabs(row.gap) <= 2e-9);

    const auto rows = planelike_gap(stripe_model(), 4.0, ts, seeds, 0.5, 1);
    for (const auto& row : rows) {
        const StripeRealization r{row.seed, 1.0, 2.0};
        const double y = stripe_Y(r, 2);  // ell_fixed = 2*ell0 with ell0 = 2
        CHECK(row.x_fixed >= y - 1e-9);
        CHECK(row.x_fixed <= y + 8.0 / row.t + 1e-9);
        CHECK(row.gap >= -1e-9);  // monotone coupling of heights
        CHECK(row.gap == row.x_fixed - row.x_full);
    }
}
