#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "freelevy/catalog.hpp"
#include "freelevy/measures.hpp"
#include "freelevy/transforms.hpp"
#include "support.hpp"

using namespace freelevy;

namespace {

LevyMeasure atom(double x, double m) { return LevyMeasure(Measure::from_atoms({{x, m}})); }

cplx phi_via_triplet(const CharTriplet& t, cplx u) { return u * triplet_cumulant(t, Jet::constant(1.0 / u)).v; }

} // namespace

TEST_CASE("pair_from_triplet: gaussian part only") {
    const auto p = pair_from_triplet(CharTriplet(1.0, LevyMeasure{}, 0.0));
    CHECK(p.gamma == doctest::Approx(0.0));
    CHECK(p.sigma.total_mass() == doctest::Approx(1.0));
    CHECK(p.sigma.mass_at_zero() == doctest::Approx(1.0));
}

TEST_CASE("pair_from_triplet: unit atom at 1") {
    const auto p = pair_from_triplet(CharTriplet(0.0, atom(1.0, 1.0), 0.0));
    CHECK(p.gamma == doctest::Approx(-0.5));
    REQUIRE(p.sigma.measure().atoms().size() == 1);
    CHECK(p.sigma.measure().atoms()[0].x == 1.0);
    CHECK(p.sigma.measure().atoms()[0].mass == doctest::Approx(0.5));
}

TEST_CASE("pair_from_triplet: atom at 2 has gamma = +2/5, confirmed by matching phi") {
    const CharTriplet t(0.0, atom(2.0, 1.0), 0.0);
    const auto p = pair_from_triplet(t);
    CHECK(p.gamma == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(p.sigma.measure().atoms()[0].mass == doctest::Approx(0.8));
    for (cplx u : test::upper_grid()) {
        const cplx a = phi_via_triplet(t, u), b = phi_from_pair(p, u);
        CHECK(std::abs(a - b) <= 1e-12 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("triplet_from_pair examples") {
    SUBCASE("sigma = delta_0") {
        GeneratingPair p{0.0, FiniteMeasure(Measure::from_atoms({{0.0, 1.0}}))};
        const auto t = triplet_from_pair(p);
        CHECK(t.a == doctest::Approx(1.0));
        CHECK(t.nu.is_zero());
        CHECK(t.eta == doctest::Approx(0.0));
    }
    SUBCASE("round trip of the unit atom") {
        GeneratingPair p{-0.5, FiniteMeasure(Measure::from_atoms({{1.0, 0.5}}))};
        const auto t = triplet_from_pair(p);
        CHECK(t.a == doctest::Approx(0.0));
        CHECK(t.eta == doctest::Approx(0.0).epsilon(1e-14));
        REQUIRE(t.nu.measure().atoms().size() == 1);
        CHECK(t.nu.measure().atoms()[0].mass == doctest::Approx(1.0));
    }
    SUBCASE("pure drift") {
        GeneratingPair p{2.5, FiniteMeasure{}};
        const auto t = triplet_from_pair(p);
        CHECK(t.a == 0.0);
        CHECK(t.nu.is_zero());
        CHECK(t.eta == doctest::Approx(2.5));
    }
}

TEST_CASE("catalog triplets: phi from the triplet and from the pair agree, round trip is the identity") {
    const std::vector<std::pair<std::string, Params>> laws{{"semicircle", {{"eta", 0.5}, {"a", 2}}},
                                                           {"free_gamma", {{"t", 1}, {"c", 1}}},
                                                           {"free_gamma", {{"t", 2}, {"c", 0.5}}},
                                                           {"mu_p", {{"p", 0.5}}},
                                                           {"fuss_catalan", {{"p", 1.5}}},
                                                           {"free_poisson", {{"lambda", 2}}}};
    for (const auto& [name, prm] : laws) {
        CAPTURE(name);
        const CharTriplet t = *catalog_get(name, prm).spec.triplet();
        const auto p = pair_from_triplet(t);
        for (cplx u : test::upper_grid()) {
            const cplx a = phi_via_triplet(t, u), b = phi_from_pair(p, u);
            CHECK(std::abs(a - b) <= 1e-7);
        }
        const auto back = triplet_from_pair(p);
        CHECK(back.a == doctest::Approx(t.a).epsilon(1e-9));
        CHECK(std::abs(back.eta - t.eta) <= 1e-9);
        for (double x : {-0.9, -0.3, 0.2, 0.7, 1.5, 3.0})
            CHECK(std::abs(back.nu.density(x) - t.nu.density(x)) <= 1e-9 * (1.0 + t.nu.density(x)));
    }
}

TEST_CASE("log_moment_check") {
    SUBCASE("compact support") {
        const auto nu = catalog_get("free_gamma", {{"t", 1}, {"c", 1}}).spec.triplet()->nu;
        CHECK(log_moment_check(nu).finite);
    }
    SUBCASE("x^-2 on x > 1") {
        const LevyMeasure nu(Measure::from_density(power_density({{1.0, -2.0, 0.0}}, 1.0, INFINITY)));
        const auto v = log_moment_check(nu);
        CHECK(v.finite);
    }
    SUBCASE("1/(x log^2 x) on x > e") {
        const LevyMeasure nu(Measure::from_density(power_density({{1.0, -1.0, -2.0}}, std::numbers::e, INFINITY)));
        const auto v = log_moment_check(nu);
        CHECK_FALSE(v.finite);
        CHECK_FALSE(v.diagnostic.empty());
    }
}

TEST_CASE("eval_classical_cumulant examples") {
    CHECK(std::abs(eval_classical_cumulant(CharTriplet(1.0, LevyMeasure{}, 0.0), 1.0) - cplx(-0.5)) < 1e-15);
    CHECK(std::abs(eval_classical_cumulant(CharTriplet(0.0, LevyMeasure{}, 3.0), 0.7) - cplx(0.0, 2.1)) < 1e-15);
    const cplx v = eval_classical_cumulant(CharTriplet(0.0, atom(1.0, 1.0), 1.0), std::numbers::pi);
    CHECK(std::abs(v - cplx(-2.0)) < 1e-14);
}

TEST_CASE("Levy measure validation") {
    CHECK_THROWS_AS(LevyMeasure(Measure::from_atoms({{0.0, 1.0}})), DomainError);
    // x^-4 near 0 is not x^2-integrable
    CHECK_THROWS_AS(LevyMeasure(Measure::from_density(power_density({{1.0, -4.0, 0.0}}, 0.0, 1.0))), DomainError);
    CHECK_THROWS_AS(CharTriplet(-1.0, LevyMeasure{}, 0.0), DomainError);
}

TEST_CASE("property: phi maps C+ into the closed lower half-plane for random atomic triplets") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> loc(-4.0, 4.0), mass(0.01, 2.0), drift(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Atom> atoms;
        for (int k = 0; k < 4; ++k) {
            double x = loc(rng);
            if (std::abs(x) < 0.05) x = 0.5;
            atoms.push_back({x, mass(rng)});
        }
        const CharTriplet t(mass(rng), LevyMeasure(Measure::from_atoms(atoms)), drift(rng));
        for (cplx u : test::upper_grid()) CHECK(phi_via_triplet(t, u).imag() <= 1e-9);
    }
}
