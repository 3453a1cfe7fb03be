#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "freelevy/calculus.hpp"
#include "freelevy/catalog.hpp"
#include "support.hpp"

using namespace freelevy;

namespace {

DistributionSpec law(const std::string& name, const Params& p = {}) { return catalog_get(name, p).spec; }

DistributionSpec triplet_only(const DistributionSpec& s) { return DistributionSpec(*s.triplet(), s.label()); }

cplx C(const DistributionSpec& s, cplx z, Route r = Route::Auto) { return eval_cumulant(s, z, r); }

ClassicalSpec classical(const std::string& name, const Params& p = {}) { return {*law(name, p).triplet(), name}; }

} // namespace

TEST_CASE("boxplus examples") {
    const auto d = boxplus(DistributionSpec::point_mass(1.5), DistributionSpec::point_mass(-4.0));
    REQUIRE(d.point_mass_location());
    CHECK(*d.point_mass_location() == -2.5);

    const auto w = law("semicircle", {{"eta", 0}, {"a", 1}});
    const auto w2 = boxplus(w, w);
    CHECK(test::sup_diff([&](cplx z) { return C(w2, z); }, [](cplx z) { return 2.0 * z * z; }) == 0.0);
    const auto g = density_grid(w2, -1.0, 1.0, 3);
    CHECK(std::abs(g.points[1].f - std::sqrt(2.0) / (2.0 * std::numbers::pi)) < 1e-6);

    const auto fp = law("free_poisson", {{"lambda", 1}});
    const auto t = *boxplus(fp, fp).triplet();
    CHECK(t.a == 0.0);
    CHECK(t.eta == 2.0 * fp.triplet()->eta);
    double mass = 0.0;
    for (const auto& a : t.nu.measure().atoms()) {
        CHECK(a.x == 1.0);
        mass += a.mass;
    }
    CHECK(mass == 2.0);
}

TEST_CASE("boxplus adds cumulants on both routes") {
    const auto a = law("free_gamma", {{"t", 1}, {"c", 1}}), b = law("mu_p", {{"p", 0.5}});
    const auto s = boxplus(a, b);
    CHECK(test::sup_diff([&](cplx z) { return C(s, z, Route::Closed); },
                         [&](cplx z) { return C(a, z, Route::Closed) + C(b, z, Route::Closed); }) == 0.0);
    CHECK(test::sup_diff([&](cplx z) { return C(s, z, Route::Triplet); },
                         [&](cplx z) { return C(a, z, Route::Closed) + C(b, z, Route::Closed); }) < 1e-8);
}

TEST_CASE("dilate examples") {
    const auto d = dilate(DistributionSpec::point_mass(1.0), -3.0);
    REQUIRE(d.point_mass_location());
    CHECK(*d.point_mass_location() == -3.0);

    const auto w4 = dilate(law("semicircle", {{"eta", 0}, {"a", 1}}), 2.0);
    CHECK(w4.triplet()->a == 4.0);
    CHECK(w4.triplet()->eta == 0.0);
    CHECK(test::sup_diff([&](cplx z) { return C(w4, z); }, [](cplx z) { return 4.0 * z * z; }) == 0.0);

    const auto fp = law("free_poisson", {{"lambda", 1}});
    const auto fp2 = dilate(fp, 2.0);
    const auto& t = *fp2.triplet();
    REQUIRE(t.nu.measure().atoms().size() == 1);
    CHECK(t.nu.measure().atoms()[0].x == 2.0);
    CHECK(t.nu.measure().atoms()[0].mass == 1.0);
    CHECK(t.eta == doctest::Approx(2.0 * fp.triplet()->eta - 2.0).epsilon(1e-14));
    CHECK(test::sup_diff([&](cplx z) { return C(triplet_only(fp2), z); }, [&](cplx z) { return C(fp, 2.0 * z); }) < 1e-9);

    CHECK_THROWS_AS(dilate(fp, 0.0), DomainError);
}

TEST_CASE("dilation law holds on the triplet route, including reflections") {
    for (const std::string name : {"free_gamma", "mu_p", "fuss_catalan", "free_poisson"}) {
        const auto s = law(name);
        for (double c : {3.0, 0.4, -1.0, -2.5}) {
            CAPTURE(name);
            CAPTURE(c);
            const auto d = triplet_only(dilate(s, c));
            // C(conj z) = conj C(z) keeps the reference argument in C- when c < 0
            const auto ref = [&](cplx z) { return c > 0 ? C(s, c * z, Route::Closed) : std::conj(C(s, c * std::conj(z), Route::Closed)); };
            CHECK(test::sup_diff([&](cplx z) { return C(d, z); }, ref) < 1e-9);
        }
    }
}

TEST_CASE("free_power and shift") {
    const auto g = law("free_gamma", {{"t", 1}, {"c", 1}});
    const auto g3 = free_power(g, 3.0);
    CHECK(test::sup_diff([&](cplx z) { return C(g3, z); }, [&](cplx z) { return C(law("free_gamma", {{"t", 3}, {"c", 1}}), z); }) < 1e-14);
    CHECK(free_power(g, 0.0).point_mass_location());
    CHECK_THROWS_AS(free_power(g, -1.0), DomainError);
    const auto s = shift(g, 2.0);
    CHECK(test::sup_diff([&](cplx z) { return C(s, z); }, [&](cplx z) { return C(g, z) + 2.0 * z; }) < 1e-15);
}

TEST_CASE("bercovici_pata examples") {
    const ClassicalSpec gauss{CharTriplet(1.0, LevyMeasure{}, 0.0), "gaussian"};
    const auto w = bercovici_pata(gauss);
    CHECK(test::sup_diff([&](cplx z) { return C(w, z); }, [](cplx z) { return z * z; }) == 0.0);
    const auto g = density_grid(w, -1.0, 1.0, 3);
    CHECK(std::abs(g.points[1].f - 1.0 / std::numbers::pi) < 1e-6);

    const auto d = bercovici_pata(classical_point_mass(2.5));
    CHECK(bitwise_equal(*d.triplet(), classical_point_mass(2.5).triplet));
    CHECK(test::sup_diff([&](cplx z) { return C(d, z); }, [](cplx z) { return 2.5 * z; }) < 1e-15);

    const ClassicalSpec poisson{CharTriplet(0.0, LevyMeasure(Measure::from_atoms({{1.0, 1.0}})), 1.0), "poisson"};
    const auto fp = bercovici_pata(poisson);
    CHECK(bitwise_equal(*fp.triplet(), poisson.triplet));
    CHECK(test::sup_diff([&](cplx z) { return C(fp, z); }, [](cplx z) { return z / (1.0 - z); }) < 1e-14);
    CHECK(fp.label().find("poisson") != std::string::npos);

    CHECK(bitwise_equal(bercovici_pata_inverse(fp).triplet, poisson.triplet));
    const DistributionSpec closed_only(*law("mu_p", {{"p", -0.5}}).closed(), "closed");
    CHECK_THROWS_AS(bercovici_pata_inverse(closed_only), UnsupportedRepresentation);
}

TEST_CASE("classical cumulant reads the same triplet through the classical formula") {
    const auto t = CharTriplet(0.0, LevyMeasure(Measure::from_atoms({{1.0, 1.0}})), 1.0);
    // classical Poisson(1): exp(e^{i theta} - 1)
    const double th = 0.7;
    CHECK(std::abs(eval_classical_cumulant(t, th) - (std::exp(cplx(0.0, th)) - 1.0)) < 1e-14);
}

TEST_CASE("property: Λ is a homomorphism and commutes with dilation and shifts") {
    const std::vector<ClassicalSpec> laws{classical("semicircle", {{"eta", 0.3}, {"a", 2}}), classical("free_gamma"),
                                          classical("mu_p"), classical("fuss_catalan"), classical("free_poisson"),
                                          classical_point_mass(-1.0)};
    for (const auto& a : laws)
        for (const auto& b : laws) {
            CAPTURE(a.label);
            CAPTURE(b.label);
            CHECK(bitwise_equal(*bercovici_pata(classical_convolution(a, b)).triplet(),
                                *boxplus(bercovici_pata(a), bercovici_pata(b)).triplet()));
        }
    for (const auto& a : laws)
        for (double c : {2.0, -1.0, 0.5, -3.0}) {
            CAPTURE(a.label);
            CAPTURE(c);
            CHECK(bitwise_equal(*bercovici_pata(classical_dilate(a, c)).triplet(), *dilate(bercovici_pata(a), c).triplet()));
            CHECK(bitwise_equal(*bercovici_pata(classical_shift(a, c)).triplet(), *shift(bercovici_pata(a), c).triplet()));
        }
}

TEST_CASE("property: free 2-stable scaling of the semicircle") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(0.05, 5.0);
    const auto w = law("semicircle", {{"eta", 0}, {"a", 1}});
    for (int i = 0; i < 50; ++i) {
        const double a = U(rng), b = U(rng);
        CAPTURE(a);
        CAPTURE(b);
        const auto lhs = boxplus(dilate(w, a), dilate(w, b));
        const auto rhs = dilate(w, std::hypot(a, b));
        for (cplx z : standard_test_grid()) {
            const cplx l = C(lhs, z), r = C(rhs, z);
            CHECK(std::abs(l - r) <= 8 * std::numeric_limits<double>::epsilon() * std::abs(r));
        }
    }
}
