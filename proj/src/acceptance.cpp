#include "freelevy/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

#include "freelevy/calculus.hpp"
#include "freelevy/catalog.hpp"
#include "freelevy/csv.hpp"
#include "freelevy/processes.hpp"
#include "freelevy/rmt.hpp"

namespace freelevy {

namespace {

constexpr double pi = std::numbers::pi;

struct Case {
    std::string name;
    Params params;
};

std::string label(const Case& c) {
    std::string s = c.name + "(";
    bool first = true;
    for (const auto& [k, v] : c.params) {
        s += (first ? "" : ",") + k + "=" + num(v);
        first = false;
    }
    return s + ")";
}

DistributionSpec triplet_only(const CatalogEntry& e) {
    return DistributionSpec(*e.spec.triplet(), e.name + " via triplet");
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// --- 1 -----------------------------------------------------------------------

CriterionResult free_gamma_pipeline() {
    CriterionResult r{1, "free gamma pipeline", false, {}, 0.0};
    const auto spec = triplet_only(catalog_get("free_gamma", {{"t", 1}, {"c", 1}}));
    const auto grid = density_grid(spec, 0.0, 6.0, 601);
    double f1 = std::numeric_limits<double>::quiet_NaN();
    for (const auto& p : grid.points)
        if (std::abs(p.x - 1.0) < 1e-12) f1 = p.f;
    const auto edges = locate_support(spec, grid);
    const double lo = 3.0 - 2.0 * std::sqrt(2.0), hi = 3.0 + 2.0 * std::sqrt(2.0);
    const double ef = std::abs(f1 - 1.0 / pi), elo = std::abs(edges.lo - lo), ehi = std::abs(edges.hi - hi);
    r.pass = ef <= 1e-5 && elo <= 1e-3 && ehi <= 1e-3;
    r.detail = "|f(1)-1/pi|=" + num(ef) + " |lo-(3-2sqrt2)|=" + num(elo) + " |hi-(3+2sqrt2)|=" + num(ehi);
    return r;
}

// --- 2 -----------------------------------------------------------------------

CriterionResult bdlp_formula() {
    CriterionResult r{2, "BDLP formula z C'(z)", false, {}, 0.0};
    const std::vector<Case> cases{{"semicircle", {{"eta", 0}, {"a", 1}}},
                                  {"free_gamma", {{"t", 1}, {"c", 1}}},
                                  {"free_gamma", {{"t", 2}, {"c", 0.5}}},
                                  {"mu_p", {{"p", 0.5}}},
                                  {"fuss_catalan", {{"p", 1.5}}}};
    const auto grid = standard_test_grid();
    double worst = 0.0;
    std::ostringstream os;
    for (const auto& c : cases) {
        const auto e = catalog_get(c.name, c.params);
        auto closed = [&](cplx z) { return e.bdlp->cumulant(Jet::constant(z)).v; };
        // the raw identity, derivative by dual numbers
        auto raw = [&](cplx z) { return z * eval_cumulant_jet(e.spec, Jet::variable(z), Route::Closed).d; };
        // library bdlp on the closed form and on the triplet alone
        const auto zc = bdlp(e.spec, BdlpRoute::Derivative).one_dim_marginal;
        const auto zt = bdlp(triplet_only(e), BdlpRoute::Derivative).one_dim_marginal;
        const double d = std::max({cumulant_sup_distance(raw, closed, grid),
                                   cumulant_sup_distance([&](cplx z) { return eval_cumulant(zc, z); }, closed, grid),
                                   cumulant_sup_distance([&](cplx z) { return eval_cumulant(zt, z); }, closed, grid)});
        worst = std::max(worst, d);
        os << label(c) << ":" << num(d) << " ";
    }
    r.pass = worst <= 1e-6;
    r.detail = "sup " + os.str();
    return r;
}

// --- 3 -----------------------------------------------------------------------

CriterionResult bdlp_triplet_formula() {
    CriterionResult r{3, "BDLP triplet formula", false, {}, 0.0};
    const std::vector<Case> cases{
        {"free_gamma", {{"t", 1}, {"c", 1}}}, {"mu_p", {{"p", 0.5}}}, {"fuss_catalan", {{"p", 1.5}}}};
    const auto grid = standard_test_grid();
    double worst = 0.0;
    std::ostringstream os;
    for (const auto& c : cases) {
        const auto e = catalog_get(c.name, c.params);
        const double d = cumulant_sup_distance(
            [&](cplx z) { return bdlp_triplet_cumulant(*e.spec.triplet(), Jet::constant(z)).v; },
            [&](cplx z) { return e.bdlp->cumulant(Jet::constant(z)).v; }, grid);
        worst = std::max(worst, d);
        os << label(c) << ":" << num(d) << " ";
    }
    r.pass = worst <= 1e-6;
    r.detail = "sup " + os.str();
    return r;
}

// --- 4 -----------------------------------------------------------------------

CriterionResult bdlp_levy_measure() {
    CriterionResult r{4, "BDLP Levy measure of free gamma", false, {}, 0.0};
    const auto e = catalog_get("free_gamma", {{"t", 1}, {"c", 1}});
    const CharTriplet tz = bdlp_levy_density(triplet_only(e));
    double rel = 0.0;
    for (int i = 0; i <= 390; ++i) {
        const double x = 0.05 + 0.01 * i;
        const double want = 1.0 / (pi * x * std::sqrt(x * (4.0 - x)));
        rel = std::max(rel, std::abs(tz.nu.density(x) - want) / want);
    }
    const double dc = cumulant_sup_distance([&](cplx z) { return triplet_cumulant(tz, Jet::constant(z)).v; },
                                            [](cplx z) { return z / std::sqrt(1.0 - 4.0 * z); });
    r.pass = rel <= 1e-4 && dc <= 1e-6;
    r.detail = "max rel density err=" + num(rel) + " cumulant sup=" + num(dc);
    return r;
}

// --- 5 -----------------------------------------------------------------------

CriterionResult reconstruction() {
    CriterionResult r{5, "reconstruction from the BDLP", false, {}, 0.0};
    const auto e = catalog_get("free_gamma", {{"t", 1}, {"c", 1}});
    const auto grid = standard_test_grid();
    double worst = 0.0;
    std::ostringstream os;
    for (double H : {0.5, 1.0, 2.0}) {
        const SelfSimilarProcess p(e.spec, H);
        const auto z = bdlp_of_process(p);
        auto f = [H](double t) { return std::exp(-t * H); };
        const double d = cumulant_sup_distance(
            [&](cplx w) { return levy_integral_cumulant(z, f, 0.0, 40.0 / H, w); },
            [&](cplx w) { return eval_cumulant(e.spec, w); }, grid);
        worst = std::max(worst, d);
        os << "H=" << num(H) << ":" << num(d) << " ";
    }
    r.pass = worst <= 1e-4;
    r.detail = "sup " + os.str();
    return r;
}

// --- 6 -----------------------------------------------------------------------

CriterionResult riemann_integral() {
    CriterionResult r{6, "Riemann-sum stochastic integral", false, {}, 0.0};
    const auto e = catalog_get("free_gamma", {{"t", 1}, {"c", 1}});
    const auto grid = standard_test_grid();
    double worst = 0.0;
    bool converged = true;
    std::ostringstream os;
    for (double H : {0.5, 1.0, 2.0}) {
        const SelfSimilarProcess p(e.spec, H);
        IntegralLaw law{DistributionSpec::point_mass(0.0), 0, {}, 0.0};
        try {
            law = stochastic_integral_law(p, [H](double u) { return std::pow(u, -H); }, 1.0, std::numbers::e);
        } catch (const ConvergenceError& ex) {
            converged = false;
            os << "H=" << num(H) << ": " << ex.what() << " ";
            continue;
        }
        // at H = 1 the process-level BDLP is bdlp(base) itself
        const auto z = H == 1.0 ? bdlp(e.spec) : bdlp_of_process(p);
        const double d = cumulant_sup_distance([&](cplx w) { return eval_cumulant(law.spec, w); },
                                               [&](cplx w) { return eval_cumulant(z.one_dim_marginal, w); }, grid);
        converged = converged && law.depth <= 20;
        worst = std::max(worst, d);
        os << "H=" << num(H) << ":depth " << law.depth << " sup " << num(d) << " ";
    }
    r.pass = converged && worst <= 1e-4;
    r.detail = os.str();
    return r;
}

// --- 7 -----------------------------------------------------------------------

CriterionResult telescoping() {
    CriterionResult r{7, "telescoping selfsimilarity", false, {}, 0.0};
    const auto base = catalog_get("free_gamma", {{"t", 1}, {"c", 1}}).spec;
    const auto grid = standard_test_grid();
    std::mt19937_64 rng(20240607);
    std::uniform_real_distribution<double> coeff(-2.0, 2.0), time(0.05, 3.0), scale(0.2, 3.0);
    std::uniform_int_distribution<int> len(1, 6), pick(0, static_cast<int>(grid.size()) - 1), hpick(0, 2);
    const double hs[] = {0.5, 1.0, 1.5};
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const SelfSimilarProcess p(base, hs[hpick(rng)]);
        const int n = len(rng);
        std::vector<double> c(n), t(n);
        for (auto& v : c) v = coeff(rng);
        for (auto& v : t) v = time(rng);
        std::sort(t.begin(), t.end());
        const double a = scale(rng);
        const cplx z = grid[static_cast<std::size_t>(pick(rng))];
        std::vector<double> at(t);
        for (auto& v : at) v *= a;
        const cplx lhs = linear_combination_cumulant(p, c, at, z);
        const cplx rhs = linear_combination_cumulant(p, c, t, std::pow(a, p.H()) * z);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    r.pass = worst <= 1e-10;
    r.detail = "50 tuples, max |diff|=" + num(worst);
    return r;
}

// --- 8 -----------------------------------------------------------------------

CriterionResult lambda_algebra() {
    CriterionResult r{8, "Bercovici-Pata algebra", false, {}, 0.0};
    const std::vector<Case> laws{{"semicircle", {{"eta", 0}, {"a", 1}}}, {"semicircle", {{"eta", 1}, {"a", 2}}},
                                 {"free_gamma", {{"t", 1}, {"c", 1}}},   {"free_gamma", {{"t", 2}, {"c", 0.5}}},
                                 {"mu_p", {{"p", 0.5}}},                 {"fuss_catalan", {{"p", 1.5}}},
                                 {"free_poisson", {{"lambda", 1}}},      {"free_poisson", {{"lambda", 2}}}};
    std::vector<ClassicalSpec> mu;
    for (const auto& c : laws) mu.push_back(bercovici_pata_inverse(catalog_get(c.name, c.params).spec));
    const std::size_t m = mu.size();
    int total = 0, ok = 0;
    std::string failed;
    auto check = [&](bool eq, const std::string& what) {
        ++total;
        if (eq) ++ok;
        else failed += " " + what;
    };
    // homomorphism
    for (std::size_t i = 0; i < m; ++i) {
        const auto& a = mu[i];
        const auto& b = mu[(i + 1) % m];
        check(bitwise_equal(*bercovici_pata(classical_convolution(a, b)).triplet(),
                            *boxplus(bercovici_pata(a), bercovici_pata(b)).triplet()),
              "hom" + std::to_string(i));
    }
    // dilation
    const double cs[] = {2.0, -1.0, 0.5, -3.0, 1.7, -0.25};
    for (int i = 0; i < 6; ++i) {
        const auto& a = mu[static_cast<std::size_t>(i + 2) % m];
        check(bitwise_equal(*bercovici_pata(classical_dilate(a, cs[i])).triplet(),
                            *dilate(bercovici_pata(a), cs[i]).triplet()),
              "dil" + std::to_string(i));
    }
    // point masses are fixed
    for (double c : {0.0, 1.5, -2.0})
        check(bitwise_equal(*bercovici_pata(classical_point_mass(c)).triplet(),
                            *DistributionSpec::point_mass(c).triplet()),
              "delta" + num(c));
    // shifts commute
    const double ss[] = {0.75, -1.25, 3.0};
    for (int i = 0; i < 3; ++i) {
        const auto& a = mu[static_cast<std::size_t>(2 * i + 1)];
        check(bitwise_equal(*bercovici_pata(classical_shift(a, ss[i])).triplet(),
                            *shift(bercovici_pata(a), ss[i]).triplet()),
              "shift" + std::to_string(i));
    }
    r.pass = ok == total;
    r.detail = std::to_string(ok) + "/" + std::to_string(total) + " bitwise equal" + (failed.empty() ? "" : "; failed:" + failed);
    return r;
}

// --- 9 -----------------------------------------------------------------------

CriterionResult two_stable() {
    CriterionResult r{9, "free 2-stable scaling", false, {}, 0.0};
    const auto w = catalog_get("semicircle", {{"eta", 0}, {"a", 1}}).spec;
    const std::pair<double, double> ab[] = {{1, 1},     {3, 4},    {0.5, 2},  {-1, 2},    {2.5, -0.3},
                                            {-0.7, -1.1}, {10, 0.1}, {1e-3, 1}, {1.3, 1.3}, {7, -24}};
    const auto grid = standard_test_grid();
    double worst = 0.0;
    for (const auto& [a, b] : ab) {
        const auto lhs = boxplus(dilate(w, a), dilate(w, b));
        const auto rhs = dilate(w, std::hypot(a, b));
        for (cplx z : grid) {
            const cplx u = eval_cumulant(lhs, z), v = eval_cumulant(rhs, z);
            worst = std::max(worst, std::abs(u - v) / std::abs(v));
        }
    }
    const double ulps = worst / std::numeric_limits<double>::epsilon();
    r.pass = ulps <= 16.0;
    r.detail = "max relative diff=" + num(worst) + " (" + num(ulps) + " eps)";
    return r;
}

// --- 10 ----------------------------------------------------------------------

CriterionResult sd_verdicts() {
    CriterionResult r{10, "SD verdicts", false, {}, 0.0};
    struct Expect {
        Case c;
        int want;  // 1 SD, 0 not SD, -1 only agreement required
    };
    const std::vector<Expect> cases{{{"free_gamma", {{"t", 1}, {"c", 1}}}, 1},
                                    {{"free_gamma", {{"t", 2}, {"c", 0.5}}}, 1},
                                    {{"free_gamma", {{"t", 0.5}, {"c", 2}}}, 1},
                                    {{"mu_p", {{"p", 0.25}}}, 1},
                                    {{"mu_p", {{"p", 0.5}}}, 1},
                                    {{"mu_p", {{"p", 0.75}}}, 1},
                                    {{"free_poisson", {{"lambda", 1}}}, 0},
                                    {{"free_poisson", {{"lambda", 2}}}, 0},
                                    {{"free_poisson", {{"lambda", 0.5}}}, 0},
                                    {{"semicircle", {{"eta", 0}, {"a", 1}}}, -1},
                                    {{"fuss_catalan", {{"p", 1.5}}}, -1},
                                    {{"delta", {{"c", 1}}}, -1}};
    int ok = 0;
    std::string failed;
    for (const auto& ex : cases) {
        const auto e = catalog_get(ex.c.name, ex.c.params);
        const bool a = sd_test(e.spec, SdMethod::LevyDensityMonotonicity).is_sd;
        const bool b = sd_test(e.spec, SdMethod::AnalyticHalfplane).is_sd;
        const bool good = a == b && (ex.want < 0 || a == (ex.want == 1));
        if (good) ++ok;
        else failed += " " + label(ex.c) + "[A=" + (a ? "sd" : "not") + ",B=" + (b ? "sd" : "not") + "]";
    }
    r.pass = ok == static_cast<int>(cases.size());
    r.detail = std::to_string(ok) + "/" + std::to_string(cases.size()) + " as expected" +
               (failed.empty() ? "" : "; failed:" + failed);
    return r;
}

// --- 11 ----------------------------------------------------------------------

CriterionResult rmt_validation(int n, int seeds) {
    CriterionResult r{11, "random-matrix validation", false, {}, 0.0};
    const auto gue = MatrixModel::gaussian_hermitian();
    const auto wis = MatrixModel::wishart(1.0);
    const auto sum = MatrixModel::free_sum(gue, gue);
    const auto g1 = density_grid(catalog_get("semicircle", {{"eta", 0}, {"a", 1}}).spec, -3.0, 3.0, 1201);
    const auto g2 = density_grid(catalog_get("semicircle", {{"eta", 0}, {"a", 2}}).spec, -4.0, 4.0, 1601);
    const auto gmp = density_grid(catalog_get("free_poisson", {{"lambda", 1}}).spec, -0.5, 4.5, 2001);
    std::vector<double> k_gue, k_wis, k_sum, k_ctl;
    for (int s = 1; s <= seeds; ++s) {
        const auto seed = static_cast<std::uint64_t>(s);
        const auto a = sample_spectrum(gue, n, seed);
        k_gue.push_back(ks_distance(a, g1));
        k_ctl.push_back(ks_distance(a, g2));
        k_wis.push_back(ks_distance(sample_spectrum(wis, n, seed), gmp));
        k_sum.push_back(ks_distance(sample_spectrum(sum, n, seed), g2));
    }
    const double mg = median(k_gue), mw = median(k_wis), ms = median(k_sum), mc = median(k_ctl);
    r.pass = mg < 0.05 && mw < 0.05 && ms < 0.05 && mc > 0.15;
    r.detail = "median KS gue=" + num(mg) + " wishart=" + num(mw) + " free_sum=" + num(ms) +
               " control=" + num(mc) + " (n=" + std::to_string(n) + ", " + std::to_string(seeds) + " seeds)";
    return r;
}

// --- 12 ----------------------------------------------------------------------

CriterionResult normalization() {
    CriterionResult r{12, "density normalization", false, {}, 0.0};
    const std::vector<Case> cases{{"semicircle", {{"eta", 0}, {"a", 1}}}, {"semicircle", {{"eta", 1}, {"a", 2}}},
                                  {"free_gamma", {{"t", 1}, {"c", 1}}},   {"free_gamma", {{"t", 2}, {"c", 0.5}}},
                                  {"mu_p", {{"p", 0.25}}},                {"mu_p", {{"p", 0.5}}},
                                  {"mu_p", {{"p", 0.75}}},                {"fuss_catalan", {{"p", 1.5}}},
                                  {"free_poisson", {{"lambda", 1}}},      {"free_poisson", {{"lambda", 2}}}};
    double worst = 0.0;
    std::ostringstream os;
    for (const auto& c : cases) {
        const auto e = catalog_get(c.name, c.params);
        double lo = 0.0, hi = 0.0;
        if (e.support) {
            std::tie(lo, hi) = *e.support;
        } else {
            // no closed-form edges: locate them on a coarse grid over the hint
            const auto [a, b] = *e.spec.support_hint();
            const auto edges = locate_support(e.spec, density_grid(e.spec, a, b, 401));
            lo = edges.lo;
            hi = edges.hi;
        }
        const double pad = 0.1 * (hi - lo);
        const auto g = density_grid(e.spec, lo - pad, hi + pad, 2001);
        const double err = std::abs(trapezoid_mass(g) - 1.0);
        worst = std::max(worst, err);
        os << label(c) << ":" << num(err) << " ";
    }
    r.pass = worst <= 1e-3;
    r.detail = "|mass-1| " + os.str();
    return r;
}

} // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result) {
    const std::vector<std::function<CriterionResult()>> all{
        free_gamma_pipeline, bdlp_formula, bdlp_triplet_formula, bdlp_levy_measure, reconstruction, riemann_integral,
        telescoping,         lambda_algebra, two_stable,         sd_verdicts,
        [&] { return rmt_validation(opt.rmt_n, opt.rmt_seeds); }, normalization};
    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!opt.only.empty() && !opt.only.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = all[i]();
        } catch (const std::exception& e) {
            r = {id, "criterion " + std::to_string(id), false, std::string("error: ") + e.what()};
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_criterion(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass ? "PASS" : "FAIL") << "  " << (r.id < 10 ? " " : "") << r.id << "  " << r.title << "  " << r.detail;
    return os.str();
}

} // namespace freelevy
