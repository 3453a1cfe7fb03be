#include "freelevy/processes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace freelevy {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (n - 1));
    xs.front() = lo;
    xs.back() = hi;
    return xs;
}

// Ridders' extrapolated central difference.
double ridders(const std::function<double(double)>& f, double x, double h, double& err) {
    constexpr int kTab = 10;
    constexpr double kCon = 1.4, kCon2 = kCon * kCon, kSafe = 2.0;
    std::array<std::array<double, kTab>, kTab> a{};
    auto diff = [&](double step) {
        const double xp = x + step, xm = x - step;
        return (f(xp) - f(xm)) / (xp - xm);
    };
    a[0][0] = diff(h);
    err = std::numeric_limits<double>::max();
    double ans = a[0][0];
    for (int i = 1; i < kTab; ++i) {
        h /= kCon;
        a[0][i] = diff(h);
        double fac = kCon2;
        for (int j = 1; j <= i; ++j) {
            a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
            fac *= kCon2;
            const double e = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
            if (e <= err) {
                err = e;
                ans = a[j][i];
            }
        }
        if (std::abs(a[i][i] - a[i - 1][i - 1]) >= kSafe * err) break;
    }
    return ans;
}

void check_c(double c) {
    if (!(c > 0.0 && c < 1.0)) throw DomainError("selfdecomposability factor needs 0 < c < 1, got " + fmt(c));
}

CharTriplet sd_factor_triplet(const CharTriplet& t, double c) {
    const CharTriplet dc = dilate_triplet(t, c);
    LevyMeasure nu;
    if (!t.nu.is_zero()) nu = LevyMeasure(t.nu.measure() + dc.nu.measure().scaled(-1.0));
    return CharTriplet(t.a * (1.0 - c * c), nu, t.eta - dc.eta);
}

double scale_of(const Measure& m) {
    const auto [lo, hi] = m.support_hull();
    double s = 0.0;
    if (std::isfinite(lo)) s = std::max(s, std::abs(lo));
    if (std::isfinite(hi)) s = std::max(s, std::abs(hi));
    return s > 0.0 ? s : 1.0;
}

} // namespace

std::vector<cplx> standard_test_grid() {
    std::vector<cplx> g;
    for (int k = 0; k <= 4; ++k)
        for (int m = 1; m <= 5; ++m) g.push_back(-std::ldexp(1.0, -k) * cplx(1.0, m));
    return g;
}

double cumulant_sup_distance(const std::function<cplx(cplx)>& c1, const std::function<cplx(cplx)>& c2,
                             const std::vector<cplx>& grid) {
    double d = 0.0;
    for (cplx z : grid) d = std::max(d, std::abs(c1(z) - c2(z)));
    return d;
}

// --- selfdecomposability ------------------------------------------------------------

std::string to_string(SdMethod m) {
    return m == SdMethod::LevyDensityMonotonicity ? "levy_density_monotonicity" : "analytic_halfplane";
}

SdVerdict sd_test(const DistributionSpec& d, SdMethod method) {
    SdVerdict v;
    v.method = method;
    if (d.point_mass_location()) {
        v.is_sd = true;
        v.reason = "point mass";
        return v;
    }
    if (method == SdMethod::LevyDensityMonotonicity) {
        if (!d.triplet())
            throw UnsupportedRepresentation("Lévy-density test needs a triplet for '" + d.label() + "'");
        const LevyMeasure& nu = d.triplet()->nu;
        if (nu.is_zero()) {
            v.is_sd = true;
            v.reason = "no Lévy measure";
            return v;
        }
        if (nu.has_atoms()) {
            v.is_sd = false;
            v.reason = "no density";
            for (const Atom& a : nu.measure().atoms()) v.diagnostics.push_back({a.x, 0.0, a.mass, false});
            return v;
        }
        constexpr int kPoints = 512;
        constexpr double kSlack = 1e-9;
        const auto [lo, hi] = nu.measure().support_hull();
        const double scale = scale_of(nu.measure());
        v.is_sd = true;
        // side = +1 walks outward along (0,∞), -1 along (-∞,0)
        for (double side : {1.0, -1.0}) {
            const double far = side > 0 ? hi : -lo;
            if (!(far > 0.0)) continue;
            const double xmax = std::min(far, 1e6 * scale);
            std::vector<double> r = log_grid(1e-9 * scale, xmax, kPoints);
            for (const auto& c : nu.measure().components()) {
                double p = side > 0 ? c.lo : -c.hi, q = side > 0 ? c.hi : -c.lo;
                p = std::max(p, 1e-9 * scale);
                q = std::min(q, xmax);
                if (p < q) {
                    auto extra = log_grid(p, q, kPoints);
                    r.insert(r.end(), extra.begin(), extra.end());
                }
            }
            std::sort(r.begin(), r.end());
            r.erase(std::unique(r.begin(), r.end()), r.end());
            double prev = std::numeric_limits<double>::infinity();
            for (double ax : r) {
                const double x = side * ax;
                const double k = nu.k(x);
                if (!std::isfinite(k))
                    throw ConvergenceError("k is not finite at x = " + fmt(x) + "; monotonicity is indeterminate");
                const bool ok = k <= prev + kSlack;
                v.diagnostics.push_back({x, 0.0, k, ok});
                if (!ok && v.is_sd) {
                    v.is_sd = false;
                    v.reason = "k increases away from 0 near x = " + fmt(x);
                }
                prev = k;
            }
        }
        if (v.is_sd) v.reason = "k non-increasing in |x|";
        return v;
    }

    // method B
    double R = 2.0;
    if (auto h = d.support_hint()) R = std::max(R, 1.5 * std::max(std::abs(h->first), std::abs(h->second)));
    constexpr int kRe = 41;
    const std::array<double, 6> ims{0.01, 0.03, 0.1, 0.3, 1.0, 3.0};
    v.is_sd = true;
    for (double im : ims) {
        for (int i = 0; i < kRe; ++i) {
            const cplx u(-R + 2.0 * R * i / (kRe - 1), im);
            const cplx dc = eval_cumulant_derivative(d, 1.0 / u);
            const bool ok = dc.imag() <= 1e-9 * (1.0 + std::abs(dc));
            v.diagnostics.push_back({u.real(), u.imag(), dc.imag(), ok});
            if (!ok && v.is_sd) {
                v.is_sd = false;
                v.reason = "Im C'(1/u) > 0 at u = " + fmt(u.real()) + (u.imag() < 0 ? "" : "+") + fmt(u.imag()) + "i";
            }
        }
    }
    if (v.is_sd) v.reason = "Im C'(1/u) <= 0 on the grid";
    return v;
}

SdVerdict sd_check(const DistributionSpec& d) {
    return sd_test(d, d.triplet() ? SdMethod::LevyDensityMonotonicity : SdMethod::AnalyticHalfplane);
}

DistributionSpec sd_factor(const DistributionSpec& d, double c) {
    check_c(c);
    const SdVerdict v = sd_check(d);
    if (!v.is_sd) throw RejectionError("'" + d.label() + "' is not freely selfdecomposable: " + v.reason);
    const std::string label = "rho_" + fmt(c) + "(" + d.label() + ")";
    if (d.point_mass_location()) return DistributionSpec::point_mass(*d.point_mass_location() * (1.0 - c)).with_label(label);
    ClosedForm cf;
    cf.cumulant = [d, c](const Jet& z) { return eval_cumulant_jet(d, z) - eval_cumulant_jet(d, z * c); };
    if (d.closed() && d.closed()->derivative) {
        auto f = d.closed()->derivative;
        cf.derivative = [f, c](cplx z) { return f(z) - c * f(c * z); };
    }
    cf.tag = "C(z) - C(" + fmt(c) + "z)";
    if (d.triplet()) return DistributionSpec(std::move(cf), sd_factor_triplet(*d.triplet(), c), label);
    return DistributionSpec(std::move(cf), label);
}

// --- processes ----------------------------------------------------------------------

SelfSimilarProcess::SelfSimilarProcess(DistributionSpec base, double H) : base_(std::move(base)), H_(H) {
    if (!(H > 0.0) || !std::isfinite(H)) throw DomainError("selfsimilarity index H must be > 0");
    const SdVerdict v = sd_check(base_);
    if (!v.is_sd) throw RejectionError("'" + base_.label() + "' is not freely selfdecomposable: " + v.reason);
}

cplx SelfSimilarProcess::marginal_cumulant(double t, cplx z) const {
    if (t == 0.0) return 0.0;
    return eval_cumulant_extended(base_, std::pow(t, H_) * z);
}

cplx SelfSimilarProcess::increment_cumulant(double s, double t, cplx z) const {
    return marginal_cumulant(t, z) - marginal_cumulant(s, z);
}

DistributionSpec marginal(const SelfSimilarProcess& p, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("marginal needs t >= 0");
    if (t == 0.0) return DistributionSpec::point_mass(0.0);
    if (t == 1.0) return p.base();
    return dilate(p.base(), std::pow(t, p.H())).with_label("mu_" + fmt(t) + "[" + p.base().label() + ", H=" + fmt(p.H()) + "]");
}

DistributionSpec increment(const SelfSimilarProcess& p, double s, double t) {
    if (!(s >= 0.0) || !(s <= t) || !std::isfinite(t))
        throw DomainError("increment needs 0 <= s <= t, got s = " + fmt(s) + ", t = " + fmt(t));
    if (s == t) return DistributionSpec::point_mass(0.0);
    if (s == 0.0) return marginal(p, t);
    const DistributionSpec& base = p.base();
    const double th = std::pow(t, p.H()), sh = std::pow(s, p.H());
    const std::string label = "mu_{" + fmt(s) + "," + fmt(t) + "}[" + base.label() + ", H=" + fmt(p.H()) + "]";
    if (base.point_mass_location()) return DistributionSpec::point_mass(*base.point_mass_location() * (th - sh)).with_label(label);
    ClosedForm cf;
    cf.cumulant = [base, th, sh](const Jet& z) {
        return eval_cumulant_extended_jet(base, z * th) - eval_cumulant_extended_jet(base, z * sh);
    };
    cf.tag = "C(" + fmt(th) + "z) - C(" + fmt(sh) + "z)";
    if (base.triplet()) {
        CharTriplet tr = dilate_triplet(sd_factor_triplet(*base.triplet(), std::pow(s / t, p.H())), th);
        return DistributionSpec(std::move(cf), std::move(tr), label);
    }
    return DistributionSpec(std::move(cf), label);
}

cplx linear_combination_cumulant(const SelfSimilarProcess& p, const std::vector<double>& coeffs,
                                 const std::vector<double>& times, cplx z) {
    if (coeffs.empty() || coeffs.size() != times.size())
        throw DomainError("linear combination needs matching, non-empty coefficient and time lists");
    if (!(times.front() >= 0.0)) throw DomainError("times must be >= 0");
    for (std::size_t j = 1; j < times.size(); ++j)
        if (!(times[j] > times[j - 1])) throw DomainError("times must be strictly increasing");
    // X_{t_j} = sum_{i <= j} (X_{t_i} - X_{t_{i-1}}), so the i-th increment
    // carries the suffix sum of the coefficients
    cplx total = 0.0;
    double suffix = 0.0;
    for (std::size_t i = times.size(); i-- > 0;) {
        suffix += coeffs[i];
        if (suffix == 0.0) continue;
        const double lo = i == 0 ? 0.0 : times[i - 1];
        total += p.increment_cumulant(lo, times[i], suffix * z);
    }
    return total;
}

// --- stochastic integrals ----------------------------------------------------------

double IntegrandFamily::operator()(double u) const {
    switch (kind) {
    case Kind::Const: return theta;
    case Kind::Power: return std::pow(u, theta);
    case Kind::Exp: return std::exp(theta * u);
    }
    return 0.0;
}

std::string IntegrandFamily::describe() const {
    switch (kind) {
    case Kind::Const: return "const(" + fmt(theta) + ")";
    case Kind::Power: return "power(" + fmt(theta) + ")";
    case Kind::Exp: return "exp(" + fmt(theta) + ")";
    }
    return "?";
}

IntegralLaw stochastic_integral_law(const SelfSimilarProcess& p, const std::function<double(double)>& f, double A,
                                    double B, const IntegralOptions& opt) {
    if (!(A >= 0.0) || !(A < B) || !std::isfinite(B)) throw DomainError("Riemann-sum integral needs 0 <= A < B < ∞");
    if (opt.grid.empty()) throw DomainError("integral needs a non-empty test grid");

    struct Cell {
        double lo, hi, tag;
    };
    auto partition = [&](int depth) {
        const std::size_t n = std::size_t{1} << depth;
        std::vector<Cell> cells(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double lo = A + (B - A) * static_cast<double>(j) / static_cast<double>(n);
            const double hi = j + 1 == n ? B : A + (B - A) * static_cast<double>(j + 1) / static_cast<double>(n);
            cells[j] = {lo, hi, f(0.5 * (lo + hi))};
        }
        return cells;
    };
    auto sums = [&](const std::vector<Cell>& cells) {
        std::vector<cplx> out;
        out.reserve(opt.grid.size());
        for (cplx z : opt.grid) {
            cplx s = 0.0;
            for (const Cell& c : cells)
                if (c.tag != 0.0) s += p.increment_cumulant(c.lo, c.hi, c.tag * z);
            out.push_back(s);
        }
        return out;
    };

    IntegralLaw law{DistributionSpec::point_mass(0.0), 0, {}, 0.0};
    // at least one comparison between levels, even when max_depth <= min_depth
    int depth = std::max(0, std::min(opt.min_depth, opt.max_depth - 1));
    std::vector<Cell> cells = partition(depth);
    std::vector<cplx> prev = sums(cells);
    bool converged = false;
    while (depth < opt.max_depth) {
        ++depth;
        std::vector<Cell> next = partition(depth);
        std::vector<cplx> cur = sums(next);
        double diff = 0.0;
        for (std::size_t i = 0; i < cur.size(); ++i) diff = std::max(diff, std::abs(cur[i] - prev[i]));
        if (!std::isfinite(diff)) throw ConvergenceError("Riemann sums are not finite", law.trace);
        law.trace.push_back(diff);
        cells = std::move(next);
        prev = std::move(cur);
        if (diff < opt.tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("Riemann sums did not converge by dyadic depth " + fmt(opt.max_depth), law.trace);
    law.depth = depth;

    const DistributionSpec base = p.base();
    const double H = p.H();
    ClosedForm cf;
    cf.cumulant = [base, H, cells](const Jet& z) {
        Jet s{};
        for (const Cell& c : cells) {
            if (c.tag == 0.0) continue;
            const Jet w = z * c.tag;
            s += eval_cumulant_extended_jet(base, w * std::pow(c.hi, H));
            if (c.lo > 0.0) s -= eval_cumulant_extended_jet(base, w * std::pow(c.lo, H));
        }
        return s;
    };
    cf.tag = "Riemann sum, 2^" + fmt(depth) + " cells";
    law.spec = DistributionSpec(std::move(cf), "∫_" + fmt(A) + "^" + fmt(B) + " f dX[" + base.label() + ", H=" + fmt(H) + "]");
    return law;
}

namespace {

quad::Options levy_options(double tol) { return {std::max(tol * 1e-2, 1e-15), 1e-13, 14}; }

template <class T>
T levy_integral_finite(const FreeLevyProcessSpec& lp, const std::function<double(double)>& f, double A, double B,
                       const T& z, double tol) {
    auto integrand = [&](double t) -> T {
        const double ft = f(t);
        if (ft == 0.0) return T{};
        if constexpr (std::is_same_v<T, Jet>)
            return eval_cumulant_extended_jet(lp.one_dim_marginal, z * ft);
        else
            return eval_cumulant_extended(lp.one_dim_marginal, z * ft);
    };
    auto r = quad::integrate(integrand, A, B, levy_options(tol));
    if (!r.converged && !(r.error <= tol))
        throw ConvergenceError("Lévy-process integral did not converge on [" + fmt(A) + ", " + fmt(B) + "]", {r.error});
    return r.value;
}

// Horizon R with |∫_R^{2R}| < tol/10, doubling from max(2A, 1).
double levy_horizon(const FreeLevyProcessSpec& lp, const std::function<double(double)>& f, double A, cplx z,
                    double tol) {
    double R = std::max(2.0 * A, 1.0);
    std::vector<double> trace;
    for (int k = 0; k < 60; ++k) {
        const cplx tail = levy_integral_finite<cplx>(lp, f, R, 2.0 * R, z, tol);
        trace.push_back(std::abs(tail));
        if (std::abs(tail) < tol / 10.0) return 2.0 * R;
        R *= 2.0;
    }
    throw ConvergenceError("infinite-horizon Lévy integral: the tail does not decay", trace);
}

} // namespace

cplx levy_integral_cumulant(const FreeLevyProcessSpec& lp, const std::function<double(double)>& f, double A,
                            double B, cplx z, double tol) {
    if (!(A >= 0.0) || !(A < B)) throw DomainError("Lévy integral needs 0 <= A < B");
    if (std::isinf(B)) B = levy_horizon(lp, f, A, z, tol);
    return levy_integral_finite<cplx>(lp, f, A, B, z, tol);
}

IntegralLaw stochastic_integral_law(const FreeLevyProcessSpec& lp, const std::function<double(double)>& f, double A,
                                    double B, const IntegralOptions& opt) {
    if (!(A >= 0.0) || !(A < B)) throw DomainError("Lévy integral needs 0 <= A < B");
    IntegralLaw law{DistributionSpec::point_mass(0.0), 0, {}, 0.0};
    if (std::isinf(B)) {
        double R = 0.0;
        for (cplx z : opt.grid) R = std::max(R, levy_horizon(lp, f, A, z, opt.tol));
        B = R;
    }
    law.horizon = B;
    const double tol = opt.tol;
    ClosedForm cf;
    cf.cumulant = [lp, f, A, B, tol](const Jet& z) { return levy_integral_finite<Jet>(lp, f, A, B, z, tol); };
    cf.tag = "∫ C_Z1(f(t) z) dt";
    law.spec = DistributionSpec(std::move(cf), "∫_" + fmt(A) + "^" + fmt(B) + " f dZ[" + lp.one_dim_marginal.label() + "]");
    return law;
}

// --- BDLP -------------------------------------------------------------------------------

Jet bdlp_triplet_cumulant(const CharTriplet& t, const Jet& z) {
    Jet c = z * t.eta + z * z * (2.0 * t.a);
    if (t.nu.is_zero()) return c;
    // x/(1-zx)² - x on [-1,1] is x² z (2 - zx)/(1-zx)²
    const Jet integral = t.nu.integrate([&z](double x) -> Jet {
        const Jet y = z * x;
        const Jet den = (1.0 - y) * (1.0 - y);
        return std::abs(x) <= 1.0 ? x * y * (2.0 - y) / den : x / den;
    });
    return c + z * integral;
}

FreeLevyProcessSpec bdlp(const DistributionSpec& d, BdlpRoute route) {
    const SdVerdict v = sd_check(d);
    if (!v.is_sd) throw RejectionError("'" + d.label() + "' is not freely selfdecomposable: " + v.reason);
    if (d.triplet() && !d.triplet()->nu.is_zero()) {
        const LogMomentVerdict lm = log_moment_check(d.triplet()->nu);
        if (!lm.finite) throw RejectionError("log-moment of the Lévy measure is infinite: " + lm.diagnostic);
    }
    const std::string label = "bdlp(" + d.label() + ")";
    const std::string tag = "background driving free Lévy process of " + d.label();
    if (d.point_mass_location()) return {DistributionSpec::point_mass(*d.point_mass_location()).with_label(label), tag};

    if (route == BdlpRoute::Auto) route = d.closed() ? BdlpRoute::Derivative : BdlpRoute::Triplet;
    ClosedForm cf;
    if (route == BdlpRoute::Derivative) {
        cf.cumulant = [d](const Jet& z) {
            const Jet j = eval_cumulant_jet(d, Jet::variable(z.v));
            Jet out{z.v * j.d, 0.0};
            if (z.d != cplx(0.0)) {
                // (z C')' = C' + z C''; C'' by a central difference of C'
                const double h = 1e-4 * (1.0 + std::abs(z.v));
                const cplx c2 = (eval_cumulant_derivative(d, z.v + h) -
                                 eval_cumulant_derivative(d, z.v - h)) / (2.0 * h);
                out.d = (j.d + z.v * c2) * z.d;
            }
            return out;
        };
        cf.tag = "z*C'(z)";
    } else {
        if (!d.triplet()) throw UnsupportedRepresentation("triplet route needs a triplet for '" + d.label() + "'");
        const CharTriplet t = *d.triplet();
        cf.cumulant = [t](const Jet& z) { return bdlp_triplet_cumulant(t, z); };
        cf.tag = "eta z + 2a z^2 + z∫(x/(1-zx)^2 - x 1[-1,1](x)) nu(dx)";
    }
    if (d.triplet() && d.triplet()->nu.is_zero()) {
        const CharTriplet& t = *d.triplet();
        return {DistributionSpec(std::move(cf), CharTriplet(2.0 * t.a, LevyMeasure{}, t.eta), label), tag};
    }
    return {DistributionSpec(std::move(cf), label), tag};
}

FreeLevyProcessSpec bdlp_of_process(const SelfSimilarProcess& p) {
    FreeLevyProcessSpec z = bdlp(p.base());
    if (p.H() == 1.0) return z;
    return {free_power(z.one_dim_marginal, p.H()).with_label("bdlp(" + p.base().label() + ", H=" + fmt(p.H()) + ")"),
            z.tag + ", H = " + fmt(p.H())};
}

CharTriplet bdlp_levy_density(const DistributionSpec& d) {
    if (!d.triplet()) throw UnsupportedRepresentation("BDLP Lévy density needs a triplet for '" + d.label() + "'");
    const CharTriplet& tx = *d.triplet();
    const SdVerdict v = sd_test(d, SdMethod::LevyDensityMonotonicity);
    if (!v.is_sd) throw RejectionError("'" + d.label() + "' is not freely selfdecomposable: " + v.reason);
    if (tx.nu.is_zero()) return CharTriplet(2.0 * tx.a, LevyMeasure{}, tx.eta);

    const LevyMeasure nu = tx.nu;
    const double scale = scale_of(nu.measure());
    auto k = [nu](double x) { return nu.k(x); };
    const double k_right = k(std::nextafter(1.0, 2.0));
    const double k_left = k(std::nextafter(-1.0, -2.0));

    // only the structural breakpoints: k is smooth across the compensator cut at +-1
    std::vector<double> bp{0.0};
    for (const auto& c : nu.measure().components()) {
        bp.push_back(c.lo);
        bp.push_back(c.hi);
        bp.insert(bp.end(), c.singular_points.begin(), c.singular_points.end());
    }
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    double kmax = 0.0;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        if (std::isinf(bp[i]) || std::isinf(bp[i + 1])) continue;
        kmax = std::max(kmax, k(0.5 * (bp[i] + bp[i + 1])));
    }

    std::vector<DensityComponent> comps;
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double p = bp[i], q = bp[i + 1];
        const double mid = std::isinf(p) ? q - 1.0 : std::isinf(q) ? p + 1.0 : 0.5 * (p + q);
        if (nu.density(mid) == 0.0) continue;
        const double sign = mid > 0.0 ? -1.0 : 1.0;
        const double width = std::isinf(p) || std::isinf(q) ? scale : q - p;
        DensityComponent c;
        c.lo = p;
        c.hi = q;
        c.density = [k, p, q, sign, width](double x) {
            const double d_lo = x - p, d_hi = q - x;
            const double dist = std::min(d_lo, d_hi);
            if (!(dist > 0.0)) return 0.0;
            double dk = 0.0;
            if (dist < 1e-7 * width) {
                // k ~ C d^alpha next to the endpoint; fit alpha from d and 2d
                const bool upper = d_hi <= d_lo;
                const double x2 = upper ? x - dist : x + dist;
                const double d2 = upper ? q - x2 : x2 - p;
                const double k1 = k(x), k2 = k(x2);
                if (!(k1 > 0.0 && k2 > 0.0) || !std::isfinite(k1) || !std::isfinite(k2)) return 0.0;
                const double alpha = std::log(k2 / k1) / std::log(d2 / dist);
                dk = (upper ? -alpha : alpha) * k1 / dist;
            } else {
                const double h = 0.1 * std::min(width, dist);
                double err = 0.0;
                dk = ridders(k, x, h, err);
                if (dist > 1e-3 * width && err > 1e-2 * std::abs(dk) + 1e-12)
                    throw ConvergenceError("numerical derivative of k failed at x = " + fmt(x), {err});
            }
            if (!std::isfinite(dk)) return 0.0;
            return std::max(0.0, sign * dk);
        };
        c.descriptor = json{{"kind", "bdlp_density"}, {"interval", {p, q}}, {"of", nu.measure().to_json()}};
        comps.push_back(std::move(c));
    }
    // downward jumps of k (outward from 0) become atoms
    for (double b : bp) {
        if (b == 0.0 || std::isinf(b)) continue;
        const double inner = std::nextafter(b, 0.0);
        const double outer = std::nextafter(b, b > 0 ? std::numeric_limits<double>::infinity()
                                                      : -std::numeric_limits<double>::infinity());
        const double jump = k(inner) - k(outer);
        if (jump > 1e-6 * kmax) atoms.push_back({b, jump});
    }
    LevyMeasure nu_z(Measure(std::move(comps), std::move(atoms)));
    return CharTriplet(2.0 * tx.a, nu_z, tx.eta - k_right + k_left);
}

} // namespace freelevy
