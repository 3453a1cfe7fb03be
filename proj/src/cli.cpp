#include "freelevy/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "freelevy/acceptance.hpp"
#include "freelevy/calculus.hpp"
#include "freelevy/catalog.hpp"
#include "freelevy/csv.hpp"
#include "freelevy/errors.hpp"
#include "freelevy/processes.hpp"
#include "freelevy/rmt.hpp"
#include "freelevy/serialization.hpp"

namespace freelevy {

namespace {

const char* const kFooter = R"(CSV columns (comma separated, '.' decimal point, '\n' line endings):
  density            x,f
  cumulant           re_z,im_z,re_C,im_C
  bdlp --emit-levy   x,density
  rmt eigenvalues    value   (after a '# model=... n=... seed=...' line)
Exit codes: 0 ok, 1 config, 2 domain/rejection, 3 convergence, 4 verify failures.)";

// --- parsing helpers --------------------------------------------------------------------

double to_double(const std::string& raw, const std::string& what) {
    std::string s = raw;
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const char* b = s.data();
    if (!s.empty() && *b == '+') ++b;
    const auto r = std::from_chars(b, s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size() || s.empty())
        throw ConfigError("cannot read " + what + " '" + raw + "' as a number");
    return v;
}

std::pair<double, double> to_range(const std::string& s, const std::string& what) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ConfigError(what + " must look like lo:hi, got '" + s + "'");
    const double lo = to_double(s.substr(0, colon), what), hi = to_double(s.substr(colon + 1), what);
    if (!(lo < hi)) throw ConfigError(what + " needs lo < hi, got '" + s + "'");
    return {lo, hi};
}

std::string read_text(const std::string& arg) {
    if (arg.empty() || arg[0] != '@') return arg;
    std::ifstream in(arg.substr(1));
    if (!in) throw ConfigError("cannot open '" + arg.substr(1) + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const std::string& arg) { return parse_json(read_text(arg)); }

void require_positive(double v, const std::string& what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(what + " must be positive and finite");
}

// --- spec input ---------------------------------------------------------------------------

struct SpecInput {
    std::string catalog, params, spec, triplet;

    void add_to(CLI::App* app, const std::string& prefix = "") {
        app->add_option("--" + prefix + "catalog", catalog, "catalog law (" + names() + ")");
        app->add_option("--" + prefix + "params", params, "catalog parameters, k=v,k=v");
        app->add_option("--" + prefix + "spec", spec, "spec JSON, inline or @file");
        app->add_option("--" + prefix + "triplet", triplet, "triplet JSON {a, eta, nu}, inline or @file");
    }

    static std::string names() {
        std::string s;
        for (const auto& n : catalog_names()) s += (s.empty() ? "" : ", ") + n;
        return s;
    }

    int count() const { return !catalog.empty() + !spec.empty() + !triplet.empty(); }

    DistributionSpec load(const std::string& what = "input") const {
        if (count() != 1)
            throw ConfigError("exactly one " + what + " source is needed: --catalog, --spec or --triplet");
        if (!params.empty() && catalog.empty()) throw ConfigError("--params only applies to --catalog");
        if (!catalog.empty()) return catalog_get(catalog, parse_params(params)).spec;
        if (!spec.empty()) return spec_from_json(read_json(spec));
        return DistributionSpec(triplet_from_json(read_json(triplet)), "triplet");
    }

    std::optional<CatalogEntry> entry() const {
        if (catalog.empty()) return std::nullopt;
        return catalog_get(catalog, parse_params(params));
    }
};

// --- output ---------------------------------------------------------------------------

struct Sink {
    std::ostream* os;
    std::unique_ptr<std::ofstream> file;

    Sink(const std::string& path, std::ostream& fallback) : os(&fallback) {
        if (path.empty() || path == "-") return;
        file = std::make_unique<std::ofstream>(path);
        if (!*file) throw ConfigError("cannot write '" + path + "'");
        os = file.get();
    }
    std::ostream& operator*() { return *os; }
};

void write_density_csv(std::ostream& os, const DensityGrid& g) {
    os << "x,f\n";
    for (const auto& p : g.points) os << num(p.x) << ',' << num(p.f) << '\n';
}

json density_json(const DensityGrid& g) {
    json xs = json::array(), fs = json::array();
    for (const auto& p : g.points) {
        xs.push_back(p.x);
        fs.push_back(p.f);
    }
    return json{{"x", xs}, {"f", fs}, {"mass", g.mass}, {"support", {g.support_lo, g.support_hi}}, {"gaps", g.gaps}};
}

json cumulant_json(const DistributionSpec& s, const std::vector<cplx>& grid) {
    json rows = json::array();
    for (cplx z : grid) {
        const cplx c = eval_cumulant(s, z);
        rows.push_back({z.real(), z.imag(), c.real(), c.imag()});
    }
    return rows;
}

void emit_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

struct DensityRequest {
    std::string range;
    int n = 601;
    std::string out;

    void add_to(CLI::App* app) {
        app->add_option("--density", range, "also emit a density grid over lo:hi");
        app->add_option("--density-n", n, "grid points")->check(CLI::Range(2, 10000000));
        app->add_option("--density-out", out, "density CSV path (default: embedded in the JSON)");
    }

    void apply(const DistributionSpec& s, json& j, const DensityOptions& opt) const {
        if (range.empty()) return;
        const auto [lo, hi] = to_range(range, "--density");
        const auto g = density_grid(s, lo, hi, n, opt);
        if (out.empty()) {
            j["density"] = density_json(g);
        } else {
            std::ofstream f(out);
            if (!f) throw ConfigError("cannot write '" + out + "'");
            write_density_csv(f, g);
            j["density_csv"] = out;
        }
    }
};

struct SolverFlags {
    double tol = SolverOptions{}.tolerance;
    int max_iter = SolverOptions{}.max_iterations;
    std::string route = "auto";

    void add_to(CLI::App* app) {
        app->add_option("--solver-tol", tol, "relative residual tolerance of the F^{-1} solve")->capture_default_str();
        app->add_option("--max-iter", max_iter, "iteration cap of the F^{-1} solve")->capture_default_str();
        app->add_option("--route", route, "cumulant route: auto, closed, triplet")->capture_default_str();
    }

    Route parsed_route() const {
        if (route == "auto") return Route::Auto;
        if (route == "closed") return Route::Closed;
        if (route == "triplet") return Route::Triplet;
        throw ConfigError("--route must be auto, closed or triplet");
    }

    DensityOptions density() const {
        require_positive(tol, "--solver-tol");
        if (max_iter < 1) throw ConfigError("--max-iter must be >= 1");
        DensityOptions o;
        o.solver.tolerance = tol;
        o.solver.max_iterations = max_iter;
        o.solver.route = parsed_route();
        return o;
    }
};

json spec_json_with_grid(const DistributionSpec& s) {
    json j = spec_to_json(s);
    j["cumulant_on_grid"] = cumulant_json(s, standard_test_grid());
    return j;
}

// --- error reporting --------------------------------------------------------------------

int report(std::ostream& err, int code, const std::string& type, const std::string& message,
           const std::vector<double>& trace = {}) {
    json j{{"error", {{"type", type}, {"exit_code", code}, {"message", message}}}};
    if (!trace.empty()) j["error"]["trace"] = trace;
    err << j.dump() << '\n';
    return code;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Free infinite divisibility toolkit: transforms, densities, free convolution, "
                 "selfsimilar processes and their background driving free Lévy processes."};
    app.footer(kFooter);
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("-o,--out", out_path, "output path (default stdout)");

    int code = 0;
    auto sink = [&] { return Sink(out_path, out); };

    // density
    auto* c_density = app.add_subcommand("density", "density grid by Stieltjes inversion (CSV x,f)");
    SpecInput in_density;
    in_density.add_to(c_density);
    std::string range = "-5:5", format = "csv";
    int n_points = 601;
    SolverFlags solver;
    c_density->add_option("--range", range, "x range lo:hi")->capture_default_str();
    c_density->add_option("--n", n_points, "grid points")->capture_default_str()->check(CLI::Range(2, 10000000));
    c_density->add_option("--format", format, "csv or json")->capture_default_str();
    solver.add_to(c_density);
    c_density->callback([&] {
        const auto s = in_density.load();
        const auto [lo, hi] = to_range(range, "--range");
        const auto g = density_grid(s, lo, hi, n_points, solver.density());
        Sink o = sink();
        if (format == "csv") write_density_csv(*o, g);
        else if (format == "json") emit_json(*o, density_json(g));
        else throw ConfigError("--format must be csv or json");
    });

    // cumulant
    auto* c_cumulant = app.add_subcommand("cumulant", "free cumulant transform on a lower half-plane grid");
    SpecInput in_cumulant;
    in_cumulant.add_to(c_cumulant);
    std::string re_range, im_range;
    int n_re = 5, n_im = 5;
    std::string route = "auto";
    c_cumulant->add_option("--re", re_range, "Re z range lo:hi (default: the standard 25-point grid)");
    c_cumulant->add_option("--im", im_range, "Im z range lo:hi, with hi < 0");
    c_cumulant->add_option("--n-re", n_re, "points along Re z")->capture_default_str()->check(CLI::Range(1, 100000));
    c_cumulant->add_option("--n-im", n_im, "points along Im z")->capture_default_str()->check(CLI::Range(1, 100000));
    c_cumulant->add_option("--route", route, "auto, closed or triplet")->capture_default_str();
    c_cumulant->callback([&] {
        const auto s = in_cumulant.load();
        SolverFlags f;
        f.route = route;
        const Route r = f.parsed_route();
        std::vector<cplx> grid;
        if (re_range.empty() != im_range.empty()) throw ConfigError("--re and --im go together");
        if (re_range.empty()) {
            grid = standard_test_grid();
        } else {
            const auto [rlo, rhi] = to_range(re_range, "--re");
            const auto [ilo, ihi] = to_range(im_range, "--im");
            if (!(ihi < 0.0)) throw ConfigError("--im must lie in the lower half-plane");
            auto at = [](double lo, double hi, int n, int i) { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); };
            for (int i = 0; i < n_re; ++i)
                for (int k = 0; k < n_im; ++k) grid.emplace_back(at(rlo, rhi, n_re, i), at(ilo, ihi, n_im, k));
        }
        Sink o = sink();
        *o << "re_z,im_z,re_C,im_C\n";
        for (cplx z : grid) {
            const cplx c = eval_cumulant(s, z, r);
            *o << num(z.real()) << ',' << num(z.imag()) << ',' << num(c.real()) << ',' << num(c.imag()) << '\n';
        }
    });

    // convolve
    auto* c_convolve = app.add_subcommand("convolve", "free additive convolution of two laws (spec JSON)");
    SpecInput in_a, in_b;
    in_a.add_to(c_convolve);
    in_b.add_to(c_convolve, "other-");
    DensityRequest dens_convolve;
    SolverFlags solver_convolve;
    dens_convolve.add_to(c_convolve);
    solver_convolve.add_to(c_convolve);
    c_convolve->callback([&] {
        const auto s = boxplus(in_a.load("first input"), in_b.load("second input (--other-*)"));
        json j = spec_json_with_grid(s);
        dens_convolve.apply(s, j, solver_convolve.density());
        Sink o = sink();
        emit_json(*o, j);
    });

    // dilate
    auto* c_dilate = app.add_subcommand("dilate", "dilation D_c of a law (spec JSON)");
    SpecInput in_dilate;
    in_dilate.add_to(c_dilate);
    double factor = 1.0;
    DensityRequest dens_dilate;
    SolverFlags solver_dilate;
    c_dilate->add_option("--c", factor, "dilation factor (nonzero)")->required();
    dens_dilate.add_to(c_dilate);
    solver_dilate.add_to(c_dilate);
    c_dilate->callback([&] {
        const auto s = dilate(in_dilate.load(), factor);
        json j = spec_json_with_grid(s);
        dens_dilate.apply(s, j, solver_dilate.density());
        Sink o = sink();
        emit_json(*o, j);
    });

    // bp
    auto* c_bp = app.add_subcommand("bp", "Bercovici-Pata map on triplet JSON (--inverse for the way back)");
    SpecInput in_bp;
    in_bp.add_to(c_bp);
    bool inverse = false;
    c_bp->add_flag("--inverse", inverse, "map a free law back to its classical triplet");
    c_bp->callback([&] {
        Sink o = sink();
        if (inverse) {
            const auto c = bercovici_pata_inverse(in_bp.load());
            emit_json(*o, json{{"label", c.label}, {"classical_triplet", triplet_to_json(c.triplet)},
                               {"generating_pair", pair_to_json(pair_from_triplet(c.triplet))}});
        } else {
            const auto s = in_bp.load();
            if (!s.triplet()) throw UnsupportedRepresentation("the input carries no triplet");
            emit_json(*o, spec_json_with_grid(bercovici_pata({*s.triplet(), s.label()})));
        }
    });

    // sd-test
    auto* c_sd = app.add_subcommand("sd-test", "free selfdecomposability verdict (JSON with diagnostics)");
    SpecInput in_sd;
    in_sd.add_to(c_sd);
    std::string method = "auto";
    c_sd->add_option("--method", method, "auto, levy (Lévy density monotonicity) or analytic (half-plane test)")->capture_default_str();
    c_sd->callback([&] {
        const auto s = in_sd.load();
        SdVerdict v;
        if (method == "auto") v = sd_check(s);
        else if (method == "levy") v = sd_test(s, SdMethod::LevyDensityMonotonicity);
        else if (method == "analytic") v = sd_test(s, SdMethod::AnalyticHalfplane);
        else throw ConfigError("--method must be auto, levy or analytic");
        json diag = json::array();
        for (const auto& d : v.diagnostics) diag.push_back({{"x", d.x}, {"y", d.y}, {"value", d.value}, {"ok", d.ok}});
        Sink o = sink();
        emit_json(*o, json{{"label", s.label()},
                           {"is_sd", v.is_sd},
                           {"method", to_string(v.method)},
                           {"reason", v.reason},
                           {"diagnostics", diag}});
    });

    // bdlp
    auto* c_bdlp = app.add_subcommand("bdlp", "background driving free Lévy process (spec JSON)");
    SpecInput in_bdlp;
    in_bdlp.add_to(c_bdlp);
    std::string bdlp_route = "auto", levy_range, levy_out = "-";
    int levy_n = 391;
    double hurst = 1.0;
    bool emit_levy = false;
    c_bdlp->add_option("--route", bdlp_route, "auto, derivative or triplet")->capture_default_str();
    c_bdlp->add_option("--H", hurst, "selfsimilarity exponent of the process (1: the law's own BDLP)")->capture_default_str();
    c_bdlp->add_flag("--emit-levy", emit_levy, "also emit the Lévy density of Z_1 as CSV x,density");
    c_bdlp->add_option("--levy-range", levy_range, "x range of the Lévy CSV (default: inside the support of nu)");
    c_bdlp->add_option("--levy-n", levy_n, "Lévy CSV points")->capture_default_str()->check(CLI::Range(2, 10000000));
    c_bdlp->add_option("--levy-out", levy_out, "Lévy CSV path; '-' appends it to the output after the JSON")->capture_default_str();
    c_bdlp->callback([&] {
        const auto s = in_bdlp.load();
        require_positive(hurst, "--H");
        BdlpRoute r = BdlpRoute::Auto;
        if (bdlp_route == "derivative") r = BdlpRoute::Derivative;
        else if (bdlp_route == "triplet") r = BdlpRoute::Triplet;
        else if (bdlp_route != "auto") throw ConfigError("--route must be auto, derivative or triplet");
        FreeLevyProcessSpec z = bdlp(s, r);
        if (hurst != 1.0) z = bdlp_of_process(SelfSimilarProcess(s, hurst));
        json j = spec_to_json(z.one_dim_marginal);
        j["process"] = z.tag;
        j["H"] = hurst;
        // a catalog law with a known BDLP reports its closed form, checked against the computation
        if (const auto e = in_bdlp.entry(); e && e->bdlp && hurst == 1.0) {
            j["cumulant"] = e->bdlp->tag;
            j["closed_form_sup_distance"] = cumulant_sup_distance(
                [&](cplx w) { return eval_cumulant(z.one_dim_marginal, w); },
                [&](cplx w) { return e->bdlp->cumulant(Jet::constant(w)).v; });
        }
        j["cumulant_on_grid"] = cumulant_json(z.one_dim_marginal, standard_test_grid());
        std::optional<CharTriplet> tz;
        if (emit_levy) {
            tz = bdlp_levy_density(s);
            if (hurst != 1.0) *tz = power_triplet(*tz, hurst);
            j["triplet"] = triplet_to_json(*tz);
        }
        Sink o = sink();
        emit_json(*o, j);
        if (!tz) return;
        double lo = 0.0, hi = 0.0;
        if (!levy_range.empty()) {
            std::tie(lo, hi) = to_range(levy_range, "--levy-range");
        } else {
            if (!tz->nu.has_density()) throw DomainError("the BDLP Lévy measure has no density part");
            std::tie(lo, hi) = tz->nu.measure().support_hull();
            if (!std::isfinite(lo) || !std::isfinite(hi)) throw ConfigError("unbounded Lévy support: pass --levy-range");
            const double pad = 1e-3 * (hi - lo);
            lo += pad;
            hi -= pad;
        }
        Sink lo_sink(levy_out == "-" ? "" : levy_out, *o);
        *lo_sink << "x,density\n";
        for (int i = 0; i < levy_n; ++i) {
            const double x = lo + (hi - lo) * i / (levy_n - 1);
            *lo_sink << num(x) << ',' << num(tz->nu.density(x)) << '\n';
        }
    });

    // marginal / increment
    auto* c_marginal = app.add_subcommand("marginal", "marginal law of the H-selfsimilar process at time t");
    SpecInput in_marginal;
    in_marginal.add_to(c_marginal);
    double h_m = 1.0, t_m = 1.0;
    DensityRequest dens_marginal;
    SolverFlags solver_marginal;
    c_marginal->add_option("--H", h_m, "selfsimilarity exponent")->required();
    c_marginal->add_option("--t", t_m, "time")->required();
    dens_marginal.add_to(c_marginal);
    solver_marginal.add_to(c_marginal);
    c_marginal->callback([&] {
        require_positive(h_m, "--H");
        const SelfSimilarProcess p(in_marginal.load(), h_m);
        const auto s = marginal(p, t_m);
        json j = spec_json_with_grid(s);
        dens_marginal.apply(s, j, solver_marginal.density());
        Sink o = sink();
        emit_json(*o, j);
    });

    auto* c_increment = app.add_subcommand("increment", "law of Y_t - Y_s for the H-selfsimilar process");
    SpecInput in_increment;
    in_increment.add_to(c_increment);
    double h_i = 1.0, s_i = 0.0, t_i = 1.0;
    DensityRequest dens_increment;
    SolverFlags solver_increment;
    c_increment->add_option("--H", h_i, "selfsimilarity exponent")->required();
    c_increment->add_option("--s", s_i, "start time")->required();
    c_increment->add_option("--t", t_i, "end time")->required();
    dens_increment.add_to(c_increment);
    solver_increment.add_to(c_increment);
    c_increment->callback([&] {
        require_positive(h_i, "--H");
        const SelfSimilarProcess p(in_increment.load(), h_i);
        const auto s = increment(p, s_i, t_i);
        json j = spec_json_with_grid(s);
        dens_increment.apply(s, j, solver_increment.density());
        Sink o = sink();
        emit_json(*o, j);
    });

    // integrate
    auto* c_integrate = app.add_subcommand("integrate", "law of the stochastic integral of f over [A, B]");
    SpecInput in_integrate;
    in_integrate.add_to(c_integrate);
    std::string process = "selfsimilar", family = "const", interval = "0:1";
    double theta = 1.0, h_int = 1.0;
    IntegralOptions iopt;
    c_integrate->add_option("--process", process,
                            "selfsimilar (input = base law, needs --H) or levy (input = law at time 1)")->capture_default_str();
    c_integrate->add_option("--H", h_int, "selfsimilarity exponent")->capture_default_str();
    c_integrate->add_option("--f", family, "integrand family: const, power (u^theta), exp (e^(theta u))")->capture_default_str();
    c_integrate->add_option("--theta", theta, "family parameter")->capture_default_str();
    c_integrate->add_option("--interval", interval, "A:B; B may be inf for the levy process")->capture_default_str();
    c_integrate->add_option("--tol", iopt.tol, "sup-norm tolerance between successive refinements")->capture_default_str();
    c_integrate->add_option("--max-depth", iopt.max_depth, "dyadic depth cap")->capture_default_str();
    c_integrate->callback([&] {
        const auto s = in_integrate.load();
        require_positive(iopt.tol, "--tol");
        IntegrandFamily f;
        if (family == "const") f = IntegrandFamily::constant(theta);
        else if (family == "power") f = IntegrandFamily::power(theta);
        else if (family == "exp") f = IntegrandFamily::exponential(theta);
        else throw ConfigError("--f must be const, power or exp");
        const auto [a, b] = to_range(interval, "--interval");
        IntegralLaw law{DistributionSpec::point_mass(0.0), 0, {}, 0.0};
        if (process == "selfsimilar") {
            require_positive(h_int, "--H");
            law = stochastic_integral_law(SelfSimilarProcess(s, h_int), f, a, b, iopt);
        } else if (process == "levy") {
            law = stochastic_integral_law(FreeLevyProcessSpec{s, "free Lévy process with law " + s.label() + " at 1"},
                                          f, a, b, iopt);
        } else {
            throw ConfigError("--process must be selfsimilar or levy");
        }
        json j = spec_json_with_grid(law.spec);
        j["integrand"] = f.describe();
        j["depth"] = law.depth;
        j["trace"] = law.trace;
        if (law.horizon > 0.0) j["horizon"] = law.horizon;
        Sink o = sink();
        emit_json(*o, j);
    });

    // rmt
    auto* c_rmt = app.add_subcommand("rmt", "random-matrix spectra and KS distance to the limit law");
    std::string model = "gaussian_hermitian", seeds = "1", eigen_prefix, against;
    int n_matrix = 1000, grid_n = 2001;
    c_rmt->add_option("--model", model, "gaussian_hermitian, wishart(lambda), free_sum(A,B)")->capture_default_str();
    c_rmt->add_option("--n", n_matrix, "matrix size")->capture_default_str()->check(CLI::Range(2, 100000));
    c_rmt->add_option("--seeds", seeds, "seed list, e.g. 1,2,3 or 1-10")->capture_default_str();
    c_rmt->add_option("--eigen-prefix", eigen_prefix, "write eigenvalues to <prefix><seed>.csv");
    c_rmt->add_option("--against", against, "spec JSON of the reference law (default: the model's limit)");
    c_rmt->add_option("--grid-n", grid_n, "reference density grid points")->capture_default_str()->check(CLI::Range(2, 10000000));
    c_rmt->callback([&] {
        const auto m = MatrixModel::parse(model);
        std::vector<std::uint64_t> list;
        std::stringstream ss(seeds);
        for (std::string item; std::getline(ss, item, ',');) {
            const auto dash = item.find('-', 1);
            const double a = to_double(item.substr(0, dash), "seed");
            const double b = dash == std::string::npos ? a : to_double(item.substr(dash + 1), "seed");
            if (a < 0 || b < a || a != std::floor(a) || b != std::floor(b) || b - a > 100000)
                throw ConfigError("bad seed item '" + item + "'");
            for (double v = a; v <= b; ++v) list.push_back(static_cast<std::uint64_t>(v));
        }
        if (list.empty()) throw ConfigError("--seeds is empty");
        const DistributionSpec ref = against.empty() ? m.limit_law() : spec_from_json(read_json(against));
        std::vector<SpectrumSample> samples;
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (auto seed : list) {
            samples.push_back(sample_spectrum(m, n_matrix, seed));
            lo = std::min(lo, samples.back().eigenvalues.front());
            hi = std::max(hi, samples.back().eigenvalues.back());
        }
        const double pad = 0.1 * (hi - lo);
        const auto grid = density_grid(ref, lo - pad, hi + pad, grid_n);
        json per = json::array();
        std::vector<double> ks;
        for (const auto& smp : samples) {
            ks.push_back(ks_distance(smp, grid));
            per.push_back({{"seed", smp.seed}, {"ks", ks.back()}});
            if (!eigen_prefix.empty()) {
                const std::string path = eigen_prefix + std::to_string(smp.seed) + ".csv";
                std::ofstream f(path);
                if (!f) throw ConfigError("cannot write '" + path + "'");
                write_spectrum_csv(f, smp);
            }
        }
        std::sort(ks.begin(), ks.end());
        const std::size_t k = ks.size();
        const double med = k % 2 ? ks[k / 2] : 0.5 * (ks[k / 2 - 1] + ks[k / 2]);
        Sink o = sink();
        emit_json(*o, json{{"model", m.name()},
                           {"n", n_matrix},
                           {"reference", ref.label()},
                           {"grid", {lo - pad, hi + pad, grid_n}},
                           {"per_seed", per},
                           {"median_ks", med}});
    });

    // verify
    auto* c_verify = app.add_subcommand("verify", "run the acceptance suite and print a pass/fail table");
    AcceptanceOptions aopt;
    std::vector<int> only;
    c_verify->add_option("--only", only, "criterion ids to run")->delimiter(',');
    c_verify->add_option("--rmt-n", aopt.rmt_n, "matrix size for the random-matrix criterion")->capture_default_str();
    c_verify->add_option("--rmt-seeds", aopt.rmt_seeds, "seeds for the random-matrix criterion")->capture_default_str();
    c_verify->callback([&] {
        aopt.only.insert(only.begin(), only.end());
        Sink o = sink();
        int failed = 0, total = 0;
        run_acceptance(aopt, [&](const CriterionResult& r) {
            *o << format_criterion(r) << '\n';
            o.os->flush();
            ++total;
            if (!r.pass) ++failed;
        });
        *o << (total - failed) << '/' << total << " criteria passed\n";
        if (failed) code = 4;
    });

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(std::move(rev));
    } catch (const CLI::Success& e) {
        // --help and friends
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        return report(err, 1, "ConfigError", e.what());
    } catch (const ConfigError& e) {
        return report(err, 1, "ConfigError", e.what());
    } catch (const json::exception& e) {
        return report(err, 1, "ConfigError", e.what());
    } catch (const RejectionError& e) {
        return report(err, 2, "RejectionError", e.what());
    } catch (const UnsupportedRepresentation& e) {
        return report(err, 2, "UnsupportedRepresentation", e.what());
    } catch (const DomainError& e) {
        return report(err, 2, "DomainError", e.what());
    } catch (const ConvergenceError& e) {
        return report(err, 3, "ConvergenceError", e.what(), e.trace());
    } catch (const Error& e) {
        return report(err, 2, "Error", e.what());
    }
    return code;
}

} // namespace freelevy
