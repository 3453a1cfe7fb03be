#include "freelevy/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

namespace freelevy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

json endpoint_json(double x) {
    if (std::isinf(x)) return x > 0 ? json("inf") : json("-inf");
    return x;
}

// Non-negativity probe over each elementary interval. The tolerance is
// relative to the sum of absolute component values so that signed
// differences (used for selfdecomposability factors) tolerate rounding.
void check_nonnegative(const Measure& m) {
    const auto bp = m.breakpoints();
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        double p = bp[i], q = bp[i + 1];
        if (std::isinf(p)) p = std::min(q, 0.0) - 1e6;
        if (std::isinf(q)) q = std::max(p, 0.0) + 1e6;
        constexpr int kProbes = 64;
        for (int j = 1; j < kProbes; ++j) {
            const double x = p + (q - p) * j / kProbes;
            double sum = 0.0, abs_sum = 0.0;
            for (const auto& c : m.components()) {
                if (!c.contains(x)) continue;
                const double v = c.density(x);
                if (!std::isfinite(v)) throw DomainError("Lévy density is not finite at x = " + std::to_string(x));
                sum += v;
                abs_sum += std::abs(v);
            }
            if (sum < -1e-9 * abs_sum - 1e-300)
                throw DomainError("measure density is negative at x = " + std::to_string(x));
        }
    }
    for (const Atom& a : m.atoms())
        if (!(a.mass > 0.0) || !std::isfinite(a.x))
            throw DomainError("atoms must have positive mass and finite location");
}

} // namespace

const QuadratureConfig& default_quadrature() {
    static const QuadratureConfig cfg{};
    return cfg;
}

// --- Measure ---------------------------------------------------------------

Measure::Measure(std::vector<DensityComponent> components, std::vector<Atom> atoms)
    : components_(std::move(components)), atoms_(std::move(atoms)) {
    for (const auto& c : components_) {
        if (!(c.lo < c.hi)) throw DomainError("density component needs lo < hi");
        if (!c.density) throw DomainError("density component has no callable");
    }
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
}

Measure Measure::from_atoms(std::vector<Atom> atoms) { return Measure({}, std::move(atoms)); }

Measure Measure::from_density(DensityComponent c) {
    std::vector<DensityComponent> v;
    v.push_back(std::move(c));
    return Measure(std::move(v), {});
}

double Measure::density(double x) const {
    double s = 0.0;
    for (const auto& c : components_)
        if (c.contains(x)) s += c.density(x);
    return s;
}

std::pair<double, double> Measure::support_hull() const {
    double lo = kInf, hi = -kInf;
    for (const auto& c : components_) {
        lo = std::min(lo, c.lo);
        hi = std::max(hi, c.hi);
    }
    for (const auto& a : atoms_) {
        lo = std::min(lo, a.x);
        hi = std::max(hi, a.x);
    }
    if (lo > hi) return {0.0, 0.0};
    return {lo, hi};
}

std::vector<double> Measure::breakpoints() const {
    std::vector<double> bp{-1.0, 0.0, 1.0};
    for (const auto& c : components_) {
        bp.push_back(c.lo);
        bp.push_back(c.hi);
        for (double s : c.singular_points) bp.push_back(s);
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    return bp;
}

Measure Measure::operator+(const Measure& other) const {
    auto comps = components_;
    comps.insert(comps.end(), other.components_.begin(), other.components_.end());
    auto ats = atoms_;
    for (const Atom& a : other.atoms_) {
        auto it = std::find_if(ats.begin(), ats.end(), [&](const Atom& b) { return b.x == a.x; });
        if (it != ats.end())
            it->mass += a.mass;
        else
            ats.push_back(a);
    }
    return Measure(std::move(comps), std::move(ats));
}

Measure Measure::scaled(double t) const {
    if (t == 1.0) return *this;
    if (t == 0.0) return Measure{};
    std::vector<DensityComponent> comps;
    for (const auto& c : components_) {
        DensityComponent d = c;
        d.density = [f = c.density, t](double x) { return t * f(x); };
        d.descriptor = json{{"kind", "scale"}, {"factor", t}, {"base", c.descriptor}};
        comps.push_back(std::move(d));
    }
    std::vector<Atom> ats;
    for (const Atom& a : atoms_) ats.push_back({a.x, t * a.mass});
    // atoms with negative mass only arise transiently in signed differences
    Measure m;
    m.components_ = std::move(comps);
    m.atoms_ = std::move(ats);
    return m;
}

Measure Measure::dilated(double c) const {
    if (c == 0.0) throw DomainError("dilation factor must be non-zero");
    if (c == 1.0) return *this;
    std::vector<DensityComponent> comps;
    const double inv = 1.0 / c;
    const double jac = 1.0 / std::abs(c);
    for (const auto& comp : components_) {
        DensityComponent d;
        d.density = [f = comp.density, inv, jac](double y) { return jac * f(y * inv); };
        const double a = comp.lo * c, b = comp.hi * c;
        d.lo = std::min(a, b);
        d.hi = std::max(a, b);
        for (double s : comp.singular_points) d.singular_points.push_back(s * c);
        d.descriptor = json{{"kind", "dilate"}, {"c", c}, {"base", comp.descriptor}};
        comps.push_back(std::move(d));
    }
    std::vector<Atom> ats;
    for (const Atom& a : atoms_) ats.push_back({c * a.x, a.mass});
    return Measure(std::move(comps), std::move(ats));
}

Measure Measure::weighted(std::function<double(double)> w, const std::string& tag) const {
    std::vector<DensityComponent> comps;
    for (const auto& c : components_) {
        DensityComponent d = c;
        d.density = [f = c.density, w](double x) { return w(x) * f(x); };
        d.descriptor = json{{"kind", "weighted"}, {"weight", tag}, {"base", c.descriptor}};
        comps.push_back(std::move(d));
    }
    std::vector<Atom> ats;
    for (const Atom& a : atoms_) {
        const double m = w(a.x) * a.mass;
        if (m != 0.0) ats.push_back({a.x, m});
    }
    return Measure(std::move(comps), std::move(ats));
}

json Measure::to_json() const {
    json atoms = json::array();
    for (const Atom& a : atoms_) atoms.push_back({a.x, a.mass});
    if (components_.empty()) return json{{"kind", "atoms"}, {"atoms", atoms}};
    json parts = json::array();
    for (const auto& c : components_) parts.push_back(c.descriptor);
    if (!atoms_.empty()) parts.push_back(json{{"kind", "atoms"}, {"atoms", atoms}});
    if (parts.size() == 1) return parts.front();
    return json{{"kind", "sum"}, {"parts", parts}};
}

// --- LevyMeasure / FiniteMeasure --------------------------------------------

LevyMeasure::LevyMeasure(Measure m) : m_(std::move(m)) {
    for (const Atom& a : m_.atoms())
        if (a.x == 0.0) throw DomainError("a Lévy measure cannot charge {0}");
    check_nonnegative(m_);
    // validity only needs finiteness to 1e-6; slowly decaying tails (1/(x log^2 x))
    // would never meet the tolerance used for transform values
    QuadratureConfig cfg = default_quadrature();
    cfg.accept_abs = 1e-6;
    try {
        x2_mass_ = m_.integrate([](double x) { return std::min(x * x, 1.0); }, cfg);
    } catch (const ConvergenceError& e) {
        throw DomainError(std::string("∫(x²∧1) nu(dx) does not converge: ") + e.what());
    }
    if (!std::isfinite(x2_mass_)) throw DomainError("∫(x²∧1) nu(dx) is not finite");
}

FiniteMeasure::FiniteMeasure(Measure m) : m_(std::move(m)) {
    check_nonnegative(m_);
    mass_ = m_.integrate([](double) { return 1.0; });
    if (!std::isfinite(mass_)) throw DomainError("sigma must be a finite measure");
}

double FiniteMeasure::mass_at_zero() const {
    for (const Atom& a : m_.atoms())
        if (a.x == 0.0) return a.mass;
    return 0.0;
}

CharTriplet::CharTriplet(double a_, LevyMeasure nu_, double eta_)
    : a(a_), nu(std::move(nu_)), eta(eta_) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("semicircular part a must be finite and >= 0");
    if (!std::isfinite(eta)) throw DomainError("drift eta must be finite");
}

// --- pair <-> triplet ---------------------------------------------------------

double drift_correction(const LevyMeasure& nu) {
    return nu.integrate([](double x) {
        const double ind = std::abs(x) <= 1.0 ? 1.0 : 0.0;
        return x * (ind - 1.0 / (1.0 + x * x));
    });
}

GeneratingPair pair_from_triplet(const CharTriplet& t) {
    Measure sigma = t.nu.measure().weighted([](double x) { return x * x / (1.0 + x * x); }, "x2/(1+x2)");
    if (t.a > 0.0) sigma = sigma + Measure::from_atoms({{0.0, t.a}});
    return GeneratingPair{t.eta - drift_correction(t.nu), FiniteMeasure(std::move(sigma))};
}

CharTriplet triplet_from_pair(const GeneratingPair& p) {
    const Measure& s = p.sigma.measure();
    std::vector<Atom> off_zero;
    double a = 0.0;
    for (const Atom& at : s.atoms()) {
        if (at.x == 0.0)
            a += at.mass;
        else
            off_zero.push_back(at);
    }
    Measure rest(s.components(), off_zero);
    LevyMeasure nu(rest.weighted([](double x) { return (1.0 + x * x) / (x * x); }, "(1+x2)/x2"));
    return CharTriplet(a, nu, p.gamma + drift_correction(nu));
}

cplx phi_from_pair(const GeneratingPair& p, cplx z) {
    if (!(z.imag() > 0.0)) throw DomainError("phi_from_pair needs z in the upper half-plane");
    const cplx integral = p.sigma.measure().integrate([z](double x) -> cplx { return (1.0 + x * z) / (z - x); });
    return p.gamma + integral;
}

// --- log moment ---------------------------------------------------------------

LogMomentVerdict log_moment_check(const LevyMeasure& nu) {
    LogMomentVerdict v;
    const auto [lo, hi] = nu.measure().support_hull();
    auto tail = [&](double r0, double r1) {
        // contribution of r0 < |x| <= r1
        double s = 0.0;
        for (const Atom& a : nu.measure().atoms())
            if (std::abs(a.x) > r0 && std::abs(a.x) <= r1) s += std::log1p(std::abs(a.x)) * a.mass;
        for (const auto& c : nu.measure().components()) {
            auto piece = [&](double p, double q) {
                p = std::max(p, c.lo);
                q = std::min(q, c.hi);
                if (!(p < q)) return 0.0;
                auto r = quad::tanh_sinh([&](double x) { return std::log1p(std::abs(x)) * c.density(x); }, p, q,
                                         default_quadrature().options);
                return r.value;
            };
            s += piece(r0, r1) + piece(-r1, -r0);
        }
        return s;
    };
    if (std::isfinite(lo) && std::isfinite(hi)) {
        v.value = tail(1.0, std::max({std::abs(lo), std::abs(hi), 1.0}));
        v.diagnostic = "compact support";
        return v;
    }
    constexpr int kMaxDoublings = 1000;
    double total = 0.0;
    double prev_increment = 0.0;
    double r = 1.0;
    for (int k = 0; k < kMaxDoublings; ++k) {
        const double inc = tail(r, 2.0 * r);
        total += inc;
        r *= 2.0;
        v.doublings = k + 1;
        if (k >= 8 && total > 0.0 && inc <= 1e-6 * total) {
            v.value = total;
            v.diagnostic = "tail converged after " + std::to_string(k + 1) + " doublings";
            return v;
        }
        if (inc == 0.0 && total == 0.0 && k >= 8) {
            v.value = 0.0;
            v.diagnostic = "no mass outside [-1,1]";
            return v;
        }
        if (k + 1 < kMaxDoublings) prev_increment = inc;
    }
    const double last_ratio = prev_increment > 0.0 ? tail(r / 2.0, r) / prev_increment : 1.0;
    v.finite = false;
    v.value = total;
    // increments that are still shrinking geometrically might converge
    // beyond the refinement horizon
    v.low_confidence = last_ratio < 0.9;
    v.diagnostic = "tail did not settle after " + std::to_string(kMaxDoublings) +
                   " doublings; last increment ratio " + std::to_string(last_ratio);
    return v;
}

// --- classical exponent ---------------------------------------------------------

cplx eval_classical_cumulant(const CharTriplet& t, double theta) {
    const cplx i(0.0, 1.0);
    const cplx integral = t.nu.integrate([theta](double x) -> cplx {
        const double y = theta * x;
        const double s = std::sin(0.5 * y);
        const double re = -2.0 * s * s;
        double im;
        if (std::abs(x) <= 1.0) {
            im = std::abs(y) < 1e-3 ? -y * y * y / 6.0 + y * y * y * y * y / 120.0 : std::sin(y) - y;
        } else {
            im = std::sin(y);
        }
        return {re, im};
    });
    return i * t.eta * theta - 0.5 * t.a * theta * theta + integral;
}

// --- inline densities --------------------------------------------------------

DensityComponent power_density(std::vector<PowerTerm> terms, double lo, double hi) {
    if (!(lo < hi)) throw DomainError("power density needs lo < hi");
    if (lo < 0.0 && hi > 0.0) throw DomainError("power density support must not straddle 0");
    DensityComponent c;
    json jt = json::array();
    for (const auto& t : terms) jt.push_back({{"coeff", t.coeff}, {"power", t.power}, {"log_power", t.log_power}});
    c.density = [terms = std::move(terms)](double x) {
        const double ax = std::abs(x);
        double s = 0.0;
        for (const auto& t : terms) {
            double v = t.coeff * std::pow(ax, t.power);
            if (t.log_power != 0.0) v *= std::pow(std::log(ax), t.log_power);
            s += v;
        }
        return s;
    };
    c.lo = lo;
    c.hi = hi;
    c.descriptor = json{{"kind", "density"}, {"terms", jt}, {"support", {endpoint_json(lo), endpoint_json(hi)}}};
    return c;
}

DensityComponent grid_density(std::vector<double> xs, std::vector<double> fs) {
    if (xs.size() < 2 || xs.size() != fs.size()) throw DomainError("grid density needs >= 2 matching samples");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw DomainError("grid abscissae must increase strictly");
    for (double f : fs)
        if (!(f >= 0.0)) throw DomainError("grid density values must be >= 0");
    if (xs.front() < 0.0 && xs.back() > 0.0) throw DomainError("grid density must not straddle 0");
    DensityComponent c;
    c.lo = xs.front();
    c.hi = xs.back();
    c.descriptor = json{{"kind", "grid"}, {"x", xs}, {"density", fs}};
    c.density = [xs = std::move(xs), fs = std::move(fs)](double x) {
        auto it = std::upper_bound(xs.begin(), xs.end(), x);
        if (it == xs.begin()) return fs.front();
        if (it == xs.end()) return fs.back();
        const std::size_t j = static_cast<std::size_t>(it - xs.begin());
        const double w = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
        return (1.0 - w) * fs[j - 1] + w * fs[j];
    };
    return c;
}

bool bitwise_equal(const Measure& a, const Measure& b) {
    if (a.atoms().size() != b.atoms().size()) return false;
    for (std::size_t i = 0; i < a.atoms().size(); ++i)
        if (a.atoms()[i].x != b.atoms()[i].x || a.atoms()[i].mass != b.atoms()[i].mass) return false;
    return a.to_json() == b.to_json();
}

bool bitwise_equal(const CharTriplet& a, const CharTriplet& b) {
    return a.a == b.a && a.eta == b.eta && bitwise_equal(a.nu.measure(), b.nu.measure());
}

} // namespace freelevy
