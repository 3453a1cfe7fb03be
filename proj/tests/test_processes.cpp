#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "freelevy/catalog.hpp"
#include "freelevy/processes.hpp"
#include "support.hpp"

using namespace freelevy;

namespace {

DistributionSpec law(const std::string& name, const Params& p = {}) { return catalog_get(name, p).spec; }

DistributionSpec triplet_only(const DistributionSpec& s) { return DistributionSpec(*s.triplet(), s.label()); }

cplx C(const DistributionSpec& s, cplx z) { return eval_cumulant(s, z); }

double dist(const DistributionSpec& a, const std::function<cplx(cplx)>& b) {
    return cumulant_sup_distance([&](cplx z) { return C(a, z); }, b);
}

// sup |a - b| / (1 + |b|): round-off scales with the cumulant's magnitude
double rel_dist(const DistributionSpec& a, const std::function<cplx(cplx)>& b) {
    double m = 0.0;
    for (cplx z : standard_test_grid()) m = std::max(m, std::abs(C(a, z) - b(z)) / (1.0 + std::abs(b(z))));
    return m;
}

const DistributionSpec& gamma11() {
    static const auto g = law("free_gamma", {{"t", 1}, {"c", 1}});
    return g;
}

const DistributionSpec& w01() {
    static const auto w = law("semicircle", {{"eta", 0}, {"a", 1}});
    return w;
}

cplx gamma_c(cplx z) { return (1.0 - std::sqrt(1.0 - 4.0 * z)) / 2.0; }

constexpr double eps = std::numeric_limits<double>::epsilon();

} // namespace

TEST_CASE("standard test grid") {
    const auto g = standard_test_grid();
    CHECK(g.size() == 25);
    for (cplx z : g) CHECK(z.imag() < 0.0);
    CHECK(g.front() == cplx(-1.0, -1.0));
}

TEST_CASE("sd_test examples") {
    for (auto m : {SdMethod::LevyDensityMonotonicity, SdMethod::AnalyticHalfplane}) {
        CAPTURE(to_string(m));
        CHECK(sd_test(law("free_gamma", {{"t", 2}, {"c", 0.5}}), m).is_sd);
        CHECK(sd_test(law("mu_p", {{"p", 0.5}}), m).is_sd);
        CHECK_FALSE(sd_test(law("free_poisson"), m).is_sd);
    }
    const auto a = sd_test(law("free_poisson"), SdMethod::LevyDensityMonotonicity);
    CHECK(a.reason.find("no density") != std::string::npos);
    const auto b = sd_test(law("free_poisson"), SdMethod::AnalyticHalfplane);
    bool positive = false;
    for (const auto& s : b.diagnostics) positive = positive || s.value > 0.0;
    CHECK(positive);
    CHECK_THROWS_AS(sd_test(DistributionSpec(*law("mu_p").closed(), "closed"), SdMethod::LevyDensityMonotonicity),
                    UnsupportedRepresentation);
    CHECK(sd_check(DistributionSpec(*law("mu_p").closed(), "closed")).method == SdMethod::AnalyticHalfplane);
}

TEST_CASE("sd_factor examples") {
    const double c = 0.6;
    CHECK(rel_dist(sd_factor(w01(), c), [&](cplx z) { return (1.0 - c * c) * z * z; }) <= 4 * eps);
    const auto r = sd_factor(gamma11(), 0.5);
    CHECK(dist(r, [](cplx z) { return (std::sqrt(1.0 - 2.0 * z) - std::sqrt(1.0 - 4.0 * z)) / 2.0; }) < 1e-15);
    double prev = INFINITY;
    for (double cc : {0.9, 0.99, 0.999, 0.9999}) {
        const double d = dist(sd_factor(gamma11(), cc), [](cplx) { return cplx(0.0); });
        CHECK(d < prev);
        prev = d;
    }
    CHECK(prev < 1e-3);
    CHECK_THROWS_AS(sd_factor(law("free_poisson"), 0.5), RejectionError);
    CHECK_THROWS_AS(sd_factor(w01(), 1.0), DomainError);
}

TEST_CASE("sd_factor reconstructs the law") {
    for (const auto& s : {gamma11(), law("mu_p", {{"p", 0.3}}), law("fuss_catalan", {{"p", 1.7}})})
        for (double c : {0.1, 0.5, 0.9}) {
            const auto back = boxplus(dilate(s, c), sd_factor(s, c));
            CHECK(dist(back, [&](cplx z) { return C(s, z); }) < 1e-14);
        }
}

TEST_CASE("SelfSimilarProcess rejects bad inputs") {
    CHECK_THROWS_AS(SelfSimilarProcess(law("free_poisson"), 1.0), RejectionError);
    CHECK_THROWS_AS(SelfSimilarProcess(w01(), 0.0), DomainError);
}

TEST_CASE("marginal examples") {
    const SelfSimilarProcess pg(gamma11(), 0.7);
    CHECK(dist(marginal(pg, 1.0), gamma_c) == 0.0);
    const double t = 2.5, tH = std::pow(t, 0.7);
    CHECK(dist(marginal(pg, t), [&](cplx z) { return gamma_c(tH * z); }) < 1e-15);
    CHECK(marginal(pg, 0.0).point_mass_location() == std::optional<double>(0.0));
    const SelfSimilarProcess pw(w01(), 0.5);
    CHECK(dist(marginal(pw, 4.0), [](cplx z) { return 4.0 * z * z; }) < 1e-14);
    CHECK_THROWS_AS(marginal(pw, -1.0), DomainError);
}

TEST_CASE("increment examples") {
    const SelfSimilarProcess pw(w01(), 0.5);
    CHECK(dist(increment(pw, 1.0, 4.0), [](cplx z) { return 3.0 * z * z; }) < 1e-14);
    const SelfSimilarProcess pg(gamma11(), 1.3);
    CHECK(dist(increment(pg, 0.0, 2.0), [&](cplx z) { return C(marginal(pg, 2.0), z); }) == 0.0);
    CHECK(dist(increment(pg, 1.5, 1.5), [](cplx) { return cplx(0.0); }) == 0.0);
    CHECK_THROWS_AS(increment(pg, 2.0, 1.0), DomainError);
}

TEST_CASE("linear_combination_cumulant examples") {
    const SelfSimilarProcess p(gamma11(), 0.8);
    for (cplx z : standard_test_grid()) {
        CHECK(std::abs(linear_combination_cumulant(p, {2.0}, {1.7}, z) - p.marginal_cumulant(1.7, 2.0 * z)) < 1e-15);
        // -(X_t - X_s); C evaluated on -z, with -z in C+ mapped back by conjugation
        const cplx got = linear_combination_cumulant(p, {1.0, -1.0}, {0.5, 2.0}, std::conj(z));
        const cplx want = std::conj(p.increment_cumulant(0.5, 2.0, -z));
        CHECK(std::abs(got - want) < 1e-15);
    }
    CHECK_THROWS_AS(linear_combination_cumulant(p, {1.0, 1.0}, {2.0, 1.0}, cplx(-1.0, -1.0)), DomainError);
}

TEST_CASE("property: selfsimilarity of linear combinations") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(0.1, 3.0), V(-2.0, 2.0);
    for (const auto& base : {gamma11(), w01(), law("mu_p", {{"p", 0.5}})}) {
        const SelfSimilarProcess p(base, 0.6);
        for (int i = 0; i < 20; ++i) {
            const double a = U(rng);
            std::vector<double> c{V(rng), V(rng), V(rng)}, t{U(rng)};
            t.push_back(t.back() + U(rng));
            t.push_back(t.back() + U(rng));
            std::vector<double> at;
            for (double x : t) at.push_back(a * x);
            const cplx z(-0.3, -0.4);
            const cplx lhs = linear_combination_cumulant(p, c, at, z);
            const cplx rhs = linear_combination_cumulant(p, c, t, std::pow(a, 0.6) * z);
            CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
        }
    }
}

TEST_CASE("property: increment cocycle and marginal scaling") {
    const SelfSimilarProcess p(law("fuss_catalan", {{"p", 1.5}}), 1.2);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 4.0);
    for (int i = 0; i < 30; ++i) {
        double s = U(rng), r = U(rng), t = U(rng);
        if (s > r) std::swap(s, r);
        if (r > t) std::swap(r, t);
        if (s > r) std::swap(s, r);
        const auto lhs = boxplus(increment(p, s, r), increment(p, r, t));
        // increments are differences of marginal cumulants, so the error is relative to C(t^H z)
        double scale = 0.0;
        for (cplx z : standard_test_grid()) scale = std::max(scale, std::abs(p.marginal_cumulant(t, z)));
        CHECK(dist(lhs, [&](cplx z) { return C(increment(p, s, t), z); }) <= 64 * eps * (1.0 + scale));
        const double a = 0.5 + U(rng);
        CHECK(rel_dist(marginal(p, a * t), [&](cplx z) { return C(marginal(p, t), std::pow(a, 1.2) * z); }) <= 64 * eps);
    }
}

TEST_CASE("Riemann sums: constant integrand gives the marginal at every level") {
    const SelfSimilarProcess p(gamma11(), 0.9);
    const auto law1 = stochastic_integral_law(p, [](double) { return 1.0; }, 0.0, 3.0);
    CHECK(law1.depth <= 3);
    for (double d : law1.trace) CHECK(d < 1e-14);
    CHECK(dist(law1.spec, [&](cplx z) { return C(marginal(p, 3.0), z); }) < 1e-14);
    CHECK_THROWS_AS(stochastic_integral_law(p, [](double) { return 1.0; }, 2.0, 1.0), DomainError);
}

TEST_CASE("Riemann sums: u^-H on [1, e^t] give t times the BDLP") {
    for (double H : {0.5, 1.0}) {
        CAPTURE(H);
        const SelfSimilarProcess p(gamma11(), H);
        const auto z = bdlp_of_process(p);
        const double t = 0.5;
        const auto law = stochastic_integral_law(p, [H](double u) { return std::pow(u, -H); }, 1.0, std::exp(t));
        CHECK(law.depth <= 20);
        CHECK(dist(law.spec, [&](cplx w) { return t * C(z.one_dim_marginal, w); }) < 1e-4);
    }
}

TEST_CASE("property: BDLP increments are stationary") {
    const SelfSimilarProcess p(law("mu_p", {{"p", 0.5}}), 0.75);
    const auto f = [](double u) { return std::pow(u, -0.75); };
    for (auto [s, t] : {std::pair{0.2, 0.7}, std::pair{0.5, 1.0}, std::pair{1.0, 1.3}}) {
        const auto a = stochastic_integral_law(p, f, std::exp(s), std::exp(t));
        const auto b = stochastic_integral_law(p, f, 1.0, std::exp(t - s));
        CHECK(cumulant_sup_distance([&](cplx z) { return C(a.spec, z); }, [&](cplx z) { return C(b.spec, z); }) < 1e-5);
    }
}

TEST_CASE("levy_integral_cumulant examples") {
    const auto zg = bdlp(gamma11());
    for (cplx z : standard_test_grid()) {
        CHECK(std::abs(levy_integral_cumulant(zg, [](double s) { return std::exp(-s); }, 0.0, INFINITY, z) - gamma_c(z)) < 1e-6);
        CHECK(std::abs(levy_integral_cumulant(zg, [](double) { return 1.0; }, 0.0, 2.5, z) - 2.5 * C(zg.one_dim_marginal, z)) < 1e-10);
    }
    const double eta = 0.7, a = 1.3;
    const FreeLevyProcessSpec zw{law("semicircle", {{"eta", eta}, {"a", 2 * a}}), "w"};
    for (cplx z : standard_test_grid())
        CHECK(std::abs(levy_integral_cumulant(zw, [](double s) { return std::exp(-s); }, 0.0, INFINITY, z) - (eta * z + a * z * z)) < 1e-8);
}

TEST_CASE("Lévy marginal linearity") {
    const auto zg = bdlp(law("mu_p", {{"p", 0.4}}));
    const auto l = stochastic_integral_law(zg, [](double) { return 1.0; }, 0.0, 1.7);
    CHECK(dist(l.spec, [&](cplx z) { return 1.7 * C(zg.one_dim_marginal, z); }) < 1e-10);
}

TEST_CASE("reconstruction through e^{-tH} against the process BDLP") {
    const double H = 2.0;
    const SelfSimilarProcess p(gamma11(), H);
    const auto z = bdlp_of_process(p);
    const auto l = stochastic_integral_law(z, [H](double t) { return std::exp(-t * H); }, 0.0, 40.0 / H);
    CHECK(dist(l.spec, gamma_c) < 1e-4);
}

TEST_CASE("bdlp examples") {
    const double eta = -0.4, a = 0.8;
    const auto zw = bdlp(law("semicircle", {{"eta", eta}, {"a", a}}));
    CHECK(dist(zw.one_dim_marginal, [&](cplx z) { return eta * z + 2 * a * z * z; }) < 1e-14);
    CHECK(zw.tag.find("background driving free Lévy process") != std::string::npos);

    const auto zg = bdlp(gamma11());
    CHECK(std::abs(C(zg.one_dim_marginal, cplx(-0.1)) - (-0.1 / std::sqrt(1.4))) < 1e-12);
    CHECK(C(zg.one_dim_marginal, cplx(-0.1)).real() == doctest::Approx(-0.0845154).epsilon(1e-6));

    const double p = 0.5;
    CHECK(dist(bdlp(law("mu_p", {{"p", p}})).one_dim_marginal, [&](cplx z) { return p * z * std::pow(1.0 - z, p - 1.0); }) < 1e-12);
    const double q = 1.5;
    CHECK(dist(bdlp(law("fuss_catalan", {{"p", q}})).one_dim_marginal,
               [&](cplx z) { return q * z + q * z * std::pow(z + 1.0, q - 1.0); }) < 1e-12);

    CHECK_THROWS_AS(bdlp(law("free_poisson")), RejectionError);
}

TEST_CASE("bdlp rejects an infinite log-moment") {
    DensityComponent d;
    d.lo = 0.0;
    d.hi = INFINITY;
    d.density = [](double x) { return 1.0 / (x * std::pow(std::log(x + std::numbers::e), 2)); };
    const DistributionSpec s(CharTriplet(0.0, LevyMeasure(Measure::from_density(d)), 0.0), "heavy");
    CHECK(sd_test(s, SdMethod::LevyDensityMonotonicity).is_sd);
    CHECK_THROWS_AS(bdlp(s), RejectionError);
}

TEST_CASE("property: the two BDLP routes agree") {
    for (const auto& s : {gamma11(), law("free_gamma", {{"t", 2}, {"c", 0.5}}), law("mu_p", {{"p", 0.3}}),
                          law("mu_p", {{"p", 0.8}}), law("fuss_catalan", {{"p", 1.2}}), law("semicircle", {{"a", 2}})}) {
        CAPTURE(s.label());
        const auto d = bdlp(s, BdlpRoute::Derivative), t = bdlp(s, BdlpRoute::Triplet);
        CHECK(cumulant_sup_distance([&](cplx z) { return C(d.one_dim_marginal, z); },
                                    [&](cplx z) { return C(t.one_dim_marginal, z); }) < 1e-6);
    }
}

TEST_CASE("bdlp_levy_density examples") {
    const auto t = bdlp_levy_density(gamma11());
    for (double x : {0.1, 1.0, 2.0, 3.5})
        CHECK(t.nu.density(x) == doctest::Approx(1.0 / (std::numbers::pi * x * std::sqrt(x * (4 - x)))).epsilon(1e-7));
    const double p = 0.5;
    const auto tm = bdlp_levy_density(law("mu_p", {{"p", p}}));
    const auto em = catalog_get("mu_p", {{"p", p}});
    for (double x : {0.1, 0.5, 0.9}) CHECK(tm.nu.density(x) == doctest::Approx(em.bdlp_levy_density(x)).epsilon(1e-7));
    const auto ef = catalog_get("fuss_catalan", {{"p", 1.5}});
    const auto tf = bdlp_levy_density(ef.spec);
    for (double x : {-0.9, -0.5, -0.1}) CHECK(tf.nu.density(x) == doctest::Approx(ef.bdlp_levy_density(x)).epsilon(1e-7));
}

TEST_CASE("bdlp_levy_density reproduces the BDLP cumulant") {
    for (const auto& s : {gamma11(), law("mu_p", {{"p", 0.5}}), law("fuss_catalan", {{"p", 1.5}})}) {
        CAPTURE(s.label());
        const DistributionSpec z(bdlp_levy_density(s), "Z1");
        CHECK(dist(z, [&](cplx w) { return C(bdlp(s).one_dim_marginal, w); }) < 1e-6);
    }
}

TEST_CASE("integrand families") {
    CHECK(IntegrandFamily::constant(2.0)(5.0) == 2.0);
    CHECK(IntegrandFamily::power(-0.5)(4.0) == 0.5);
    CHECK(IntegrandFamily::exponential(-1.0)(0.0) == 1.0);
    CHECK_FALSE(IntegrandFamily::power(2.0).describe().empty());
}
