#include "freelevy/catalog.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace freelevy {

namespace {

constexpr double kPi = std::numbers::pi;

Params with_defaults(const std::string& name, const Params& given) {
    Params out;
    const auto schema = catalog_schema(name);
    for (const auto& s : schema) out[s.name] = s.default_value;
    for (const auto& [k, v] : given) {
        bool known = false;
        for (const auto& s : schema) known = known || s.name == k;
        if (!known) throw ConfigError("catalog entry '" + name + "' has no parameter '" + k + "'");
        out[k] = v;
    }
    return out;
}

std::string label_of(const std::string& name, const Params& p) {
    std::ostringstream os;
    os << name << "(";
    bool first = true;
    for (const auto& [k, v] : p) {
        os << (first ? "" : ",") << k << "=" << v;
        first = false;
    }
    os << ")";
    return os.str();
}

void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

// ∫_{[-1,1]} x nu(dx): the drift that absorbs the compensator when the
// closed form carries no xz·1_[-1,1] term.
double compensator_drift(const LevyMeasure& nu) {
    return nu.integrate([](double x) { return std::abs(x) <= 1.0 ? x : 0.0; });
}

// --- named Lévy densities ---------------------------------------------------------

DensityComponent free_gamma_levy(double t, double c) {
    DensityComponent d;
    d.lo = 0.0;
    d.hi = 4.0 * c;
    d.density = [t, c](double x) { return t * std::sqrt(4.0 * c - x) / (2.0 * kPi * x * std::sqrt(x)); };
    d.descriptor = json{{"kind", "density"}, {"name", "free_gamma"}, {"params", {{"t", t}, {"c", c}}}};
    return d;
}

DensityComponent mu_p_levy(double p) {
    DensityComponent d;
    d.lo = 0.0;
    d.hi = 1.0;
    const double s = std::sin(p * kPi) / kPi;
    d.density = [s, p](double x) { return s * std::pow(1.0 - x, p) * std::pow(x, -1.0 - p); };
    d.descriptor = json{{"kind", "density"}, {"name", "mu_p"}, {"params", {{"p", p}}}};
    return d;
}

DensityComponent fuss_catalan_levy(double p) {
    DensityComponent d;
    d.lo = -1.0;
    d.hi = 0.0;
    const double s = -std::sin(p * kPi) / kPi;
    d.density = [s, p](double x) { return s * std::pow(1.0 + x, p) * std::pow(-x, -1.0 - p); };
    d.descriptor = json{{"kind", "density"}, {"name", "fuss_catalan"}, {"params", {{"p", p}}}};
    return d;
}

// --- entries ---------------------------------------------------------------------

CatalogEntry semicircle(const Params& p) {
    const double eta = p.at("eta"), a = p.at("a");
    require(a >= 0.0 && std::isfinite(eta), "semicircle needs a >= 0");
    ClosedForm cf{[eta, a](const Jet& z) { return z * eta + z * z * a; },
                  [eta, a](cplx z) { return eta + 2.0 * a * z; }, "eta*z + a*z^2"};
    DistributionSpec spec(std::move(cf), CharTriplet(a, LevyMeasure{}, eta), label_of("semicircle", p));
    CatalogEntry e{"semicircle", p, spec, {}, {}, {}, {}, {}, true};
    if (a > 0.0) {
        const double r = 2.0 * std::sqrt(a);
        e.spec = e.spec.with_support_hint(eta - r, eta + r);
        e.support = std::make_pair(eta - r, eta + r);
        e.closed_density = [eta, a, r](double x) {
            const double y = x - eta;
            return std::abs(y) < r ? std::sqrt((r - y) * (r + y)) / (2.0 * kPi * a) : 0.0;
        };
        e.closed_cauchy = [eta, a, r](cplx w) {
            const cplx y = w - eta;
            return (y - std::sqrt(y - r) * std::sqrt(y + r)) / (2.0 * a);
        };
    }
    e.bdlp = ClosedForm{[eta, a](const Jet& z) { return z * eta + z * z * (2.0 * a); },
                        [eta, a](cplx z) { return eta + 4.0 * a * z; }, "eta*z + 2a*z^2"};
    e.bdlp_levy_density = [](double) { return 0.0; };
    return e;
}

CatalogEntry free_gamma(const Params& p) {
    const double t = p.at("t"), c = p.at("c");
    require(t >= 0.0 && c > 0.0, "free_gamma needs t >= 0 and c > 0");
    ClosedForm cf{[t, c](const Jet& z) { return t * (1.0 - sqrt(1.0 - 4.0 * c * z)) / 2.0; },
                  [t, c](cplx z) { return t * c / std::sqrt(1.0 - 4.0 * c * z); }, "t*(1-sqrt(1-4c*z))/2"};
    if (t == 0.0) {
        return CatalogEntry{"free_gamma", p, DistributionSpec::point_mass(0.0).with_label(label_of("free_gamma", p)),
                            {}, {}, {}, {}, {}, true};
    }
    LevyMeasure nu(Measure::from_density(free_gamma_levy(t, c)));
    const double eta = compensator_drift(nu);
    const double sq = 2.0 * std::sqrt(t + 1.0);
    const double lo = c * (t + 2.0 - sq), hi = c * (t + 2.0 + sq);
    DistributionSpec spec(std::move(cf), CharTriplet(0.0, nu, eta), label_of("free_gamma", p));
    CatalogEntry e{"free_gamma", p, spec.with_support_hint(lo, hi), {}, std::make_pair(lo, hi), {}, {}, {}, true};
    e.closed_density = [t, lo, hi](double x) {
        if (!(x > lo && x < hi)) return 0.0;
        return t / (2.0 * kPi * x * x) * std::sqrt((x - lo) * (hi - x));
    };
    // Solving (1+t)/G² - (z(t+2) - t²c)/G + z² = 0 on the branch G ~ 1/z.
    e.closed_cauchy = [t, c, lo, hi](cplx z) {
        return (z * (t + 2.0) - t * t * c - t * std::sqrt(z - lo) * std::sqrt(z - hi)) / (2.0 * z * z);
    };
    e.bdlp = ClosedForm{[t, c](const Jet& z) { return z * (t * c) / sqrt(1.0 - 4.0 * c * z); },
                        [t, c](cplx z) {
                            const cplx s = std::sqrt(1.0 - 4.0 * c * z);
                            return t * c / s + 2.0 * t * c * c * z / (s * s * s);
                        },
                        t == 1.0 && c == 1.0 ? "z/sqrt(1-4z)" : "t*c*z/sqrt(1-4c*z)"};
    e.bdlp_levy_density = [t, c](double x) {
        if (!(x > 0.0 && x < 4.0 * c)) return 0.0;
        return t * c / (kPi * x * std::sqrt(x * (4.0 * c - x)));
    };
    return e;
}

CatalogEntry mu_p(const Params& prm) {
    const double p = prm.at("p");
    require(p > -1.0 && p < 1.0, "mu_p needs -1 < p < 1");
    ClosedForm cf{[p](const Jet& z) { return 1.0 - pow(1.0 - z, p); },
                  [p](cplx z) { return p * std::pow(1.0 - z, p - 1.0); }, "1-(1-z)^p"};
    const std::string label = label_of("mu_p", prm);
    if (p == 0.0) return CatalogEntry{"mu_p", prm, DistributionSpec::point_mass(0.0).with_label(label), {}, {}, {}, {}, {}, true};
    if (p < 0.0) {
        // Exposed for cumulant evaluation only; no Lévy measure is attached
        // and selfdecomposability is not asserted.
        return CatalogEntry{"mu_p", prm, DistributionSpec(std::move(cf), label), {}, {}, {}, {}, {}, false};
    }
    LevyMeasure nu(Measure::from_density(mu_p_levy(p)));
    DistributionSpec spec(std::move(cf), CharTriplet(0.0, nu, compensator_drift(nu)), label);
    CatalogEntry e{"mu_p", prm, spec.with_support_hint(0.0, 2.0), {}, {}, {}, {}, {}, true};
    e.bdlp = ClosedForm{[p](const Jet& z) { return z * p * pow(1.0 - z, p - 1.0); },
                        [p](cplx z) {
                            return p * std::pow(1.0 - z, p - 1.0) - p * (p - 1.0) * z * std::pow(1.0 - z, p - 2.0);
                        },
                        "p*z*(1-z)^(p-1)"};
    const double s = p * std::sin((1.0 - p) * kPi) / kPi;
    e.bdlp_levy_density = [s, p](double x) {
        if (!(x > 0.0 && x < 1.0)) return 0.0;
        return s / (std::pow(x, 1.0 + p) * std::pow(1.0 - x, 1.0 - p));
    };
    return e;
}

CatalogEntry fuss_catalan(const Params& prm) {
    const double p = prm.at("p");
    require(p > 1.0 && p < 2.0, "fuss_catalan needs 1 < p < 2");
    ClosedForm cf{[p](const Jet& z) { return z * p + pow(z + 1.0, p) - 1.0; },
                  [p](cplx z) { return p + p * std::pow(z + 1.0, p - 1.0); }, "p*z+(z+1)^p-1"};
    LevyMeasure nu(Measure::from_density(fuss_catalan_levy(p)));
    // nu sits inside [-1,0], so eta is the mean C'(0) = 2p
    DistributionSpec spec(std::move(cf), CharTriplet(0.0, nu, 2.0 * p), label_of("fuss_catalan", prm));
    CatalogEntry e{"fuss_catalan", prm, spec.with_support_hint(0.0, 8.0), {}, {}, {}, {}, {}, true};
    e.bdlp = ClosedForm{[p](const Jet& z) { return z * p + z * p * pow(z + 1.0, p - 1.0); },
                        [p](cplx z) {
                            return p + p * std::pow(z + 1.0, p - 1.0) + p * (p - 1.0) * z * std::pow(z + 1.0, p - 2.0);
                        },
                        "p*z+p*z*(z+1)^(p-1)"};
    // k(x) = |x| ell(x) differentiated on (-1, 0)
    const double s = -p * std::sin(p * kPi) / kPi;
    e.bdlp_levy_density = [s, p](double x) {
        if (!(x > -1.0 && x < 0.0)) return 0.0;
        return s * std::pow(1.0 + x, p - 1.0) * std::pow(-x, -1.0 - p);
    };
    return e;
}

CatalogEntry free_poisson(const Params& prm) {
    const double lam = prm.at("lambda");
    require(lam > 0.0, "free_poisson needs lambda > 0");
    ClosedForm cf{[lam](const Jet& z) { return z * lam / (1.0 - z); },
                  [lam](cplx z) { return lam / ((1.0 - z) * (1.0 - z)); }, "lambda*z/(1-z)"};
    LevyMeasure nu(Measure::from_atoms({{1.0, lam}}));
    const double r = std::sqrt(lam);
    const double lo = (1.0 - r) * (1.0 - r), hi = (1.0 + r) * (1.0 + r);
    DistributionSpec spec(std::move(cf), CharTriplet(0.0, nu, lam), label_of("free_poisson", prm));
    CatalogEntry e{"free_poisson", prm, spec.with_support_hint(lo, hi), {}, std::make_pair(lo, hi), {}, {}, {}, false};
    e.closed_density = [lo, hi](double x) {
        if (!(x > lo && x < hi)) return 0.0;
        return std::sqrt((x - lo) * (hi - x)) / (2.0 * kPi * x);
    };
    e.closed_cauchy = [lam, lo, hi](cplx z) {
        return (z + 1.0 - lam - std::sqrt(z - lo) * std::sqrt(z - hi)) / (2.0 * z);
    };
    return e;
}

CatalogEntry delta(const Params& prm) {
    const double c = prm.at("c");
    require(std::isfinite(c), "delta needs a finite location");
    CatalogEntry e{"delta", prm, DistributionSpec::point_mass(c).with_label(label_of("delta", prm)), {}, {}, {}, {}, {}, true};
    e.closed_cauchy = [c](cplx w) { return 1.0 / (w - c); };
    e.bdlp = ClosedForm{[c](const Jet& z) { return z * c; }, [c](cplx) { return cplx(c); }, "c*z"};
    return e;
}

} // namespace

std::vector<std::string> catalog_names() {
    return {"semicircle", "free_gamma", "mu_p", "fuss_catalan", "free_poisson", "delta"};
}

std::vector<ParamSchema> catalog_schema(const std::string& name) {
    if (name == "semicircle") return {{"eta", 0.0, "real"}, {"a", 1.0, ">= 0"}};
    if (name == "free_gamma") return {{"t", 1.0, ">= 0"}, {"c", 1.0, "> 0"}};
    if (name == "mu_p") return {{"p", 0.5, "(-1, 1); selfdecomposable for 0 < p < 1"}};
    if (name == "fuss_catalan") return {{"p", 1.5, "(1, 2)"}};
    if (name == "free_poisson") return {{"lambda", 1.0, "> 0"}};
    if (name == "delta") return {{"c", 0.0, "real"}};
    throw ConfigError("unknown catalog entry '" + name + "'");
}

CatalogEntry catalog_get(const std::string& name, const Params& params) {
    const Params p = with_defaults(name, params);
    CatalogEntry e = [&] {
        if (name == "semicircle") return semicircle(p);
        if (name == "free_gamma") return free_gamma(p);
        if (name == "mu_p") return mu_p(p);
        if (name == "fuss_catalan") return fuss_catalan(p);
        if (name == "free_poisson") return free_poisson(p);
        return delta(p);
    }();
    e.params = p;
    return e;
}

DensityComponent catalog_levy_density(const std::string& name, const Params& params) {
    if (name == "free_gamma") {
        const Params p = with_defaults(name, params);
        require(p.at("t") > 0.0 && p.at("c") > 0.0, "free_gamma density needs t > 0, c > 0");
        return free_gamma_levy(p.at("t"), p.at("c"));
    }
    if (name == "mu_p") {
        const Params p = with_defaults(name, params);
        require(p.at("p") > 0.0 && p.at("p") < 1.0, "mu_p density needs 0 < p < 1");
        return mu_p_levy(p.at("p"));
    }
    if (name == "fuss_catalan") {
        const Params p = with_defaults(name, params);
        require(p.at("p") > 1.0 && p.at("p") < 2.0, "fuss_catalan density needs 1 < p < 2");
        return fuss_catalan_levy(p.at("p"));
    }
    throw ConfigError("no named Lévy density '" + name + "'");
}

Params parse_params(const std::string& text) {
    Params out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("parameter '" + item + "' is not of the form key=value");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(val, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != val.size() || val.empty()) throw ConfigError("parameter '" + key + "' has non-numeric value '" + val + "'");
        out[key] = v;
    }
    return out;
}

} // namespace freelevy
