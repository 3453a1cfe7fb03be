#include "freelevy/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "freelevy/parallel.hpp"

namespace freelevy {

// --- DistributionSpec ---------------------------------------------------------

DistributionSpec::DistributionSpec(ClosedForm closed, std::string label)
    : closed_(std::move(closed)), label_(std::move(label)) {
    if (!closed_->cumulant) throw UnsupportedRepresentation("closed form without a cumulant callable");
}

DistributionSpec::DistributionSpec(CharTriplet triplet, std::string label)
    : triplet_(std::move(triplet)), label_(std::move(label)) {
    if (triplet_->a == 0.0 && triplet_->nu.is_zero()) point_mass_ = triplet_->eta;
}

DistributionSpec::DistributionSpec(ClosedForm closed, CharTriplet triplet, std::string label)
    : closed_(std::move(closed)), triplet_(std::move(triplet)), label_(std::move(label)) {
    if (!closed_->cumulant) throw UnsupportedRepresentation("closed form without a cumulant callable");
    if (triplet_->a == 0.0 && triplet_->nu.is_zero()) point_mass_ = triplet_->eta;
}

DistributionSpec DistributionSpec::point_mass(double c) {
    ClosedForm cf{[c](const Jet& z) { return z * c; }, [c](cplx) { return cplx(c); }, "c*z"};
    std::ostringstream os;
    os << "delta(" << c << ")";
    return DistributionSpec(std::move(cf), CharTriplet(0.0, LevyMeasure{}, c), os.str());
}

DistributionSpec DistributionSpec::with_label(std::string label) const {
    DistributionSpec s = *this;
    s.label_ = std::move(label);
    return s;
}

DistributionSpec DistributionSpec::with_support_hint(double lo, double hi) const {
    DistributionSpec s = *this;
    s.support_hint_ = std::make_pair(lo, hi);
    return s;
}

DistributionSpec DistributionSpec::with_point_mass(double c) const {
    DistributionSpec s = *this;
    s.point_mass_ = c;
    return s;
}

// --- cumulant evaluation ---------------------------------------------------------

Jet triplet_cumulant(const CharTriplet& t, const Jet& z, const QuadratureConfig& cfg) {
    Jet c = z * t.eta + z * z * t.a;
    if (t.nu.is_zero()) return c;
    // (xz)²/(1-xz) on [-1,1] and xz/(1-xz) outside: the compensated integrand
    // without cancellation near x = 0
    const Jet integral = t.nu.integrate(
        [&z](double x) -> Jet {
            const Jet y = z * x;
            const Jet den = 1.0 - y;
            return std::abs(x) <= 1.0 ? y * y / den : y / den;
        },
        cfg);
    return c + integral;
}

namespace {

void check_lower(cplx z) {
    if (z.imag() > 0.0 || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        std::ostringstream os;
        os << "free cumulant transform needs Im z <= 0, got " << z;
        throw DomainError(os.str());
    }
}

} // namespace

Jet eval_cumulant_jet(const DistributionSpec& spec, const Jet& z, Route route) {
    check_lower(z.v);
    if (route == Route::Auto && spec.point_mass_location()) return z * *spec.point_mass_location();
    const bool use_closed = route == Route::Closed || (route == Route::Auto && spec.closed());
    if (use_closed) {
        if (!spec.closed()) throw UnsupportedRepresentation("spec '" + spec.label() + "' has no closed form");
        return spec.closed()->cumulant(z);
    }
    if (!spec.triplet()) throw UnsupportedRepresentation("spec '" + spec.label() + "' has no triplet");
    return triplet_cumulant(*spec.triplet(), z);
}

cplx eval_cumulant(const DistributionSpec& spec, cplx z, Route route) {
    return eval_cumulant_jet(spec, Jet::constant(z), route).v;
}

cplx eval_cumulant_derivative(const DistributionSpec& spec, cplx z, Route route) {
    return eval_cumulant_jet(spec, Jet::variable(z), route).d;
}

Jet eval_cumulant_extended_jet(const DistributionSpec& spec, const Jet& z, Route route) {
    if (z.v.imag() > 0.0) return conj(eval_cumulant_jet(spec, conj(z), route));
    return eval_cumulant_jet(spec, z, route);
}

cplx eval_cumulant_extended(const DistributionSpec& spec, cplx z, Route route) {
    return eval_cumulant_extended_jet(spec, Jet::constant(z), route).v;
}

cplx voiculescu(const DistributionSpec& spec, cplx u, Route route) {
    if (!(u.imag() > 0.0)) throw DomainError("Voiculescu transform needs u in the upper half-plane");
    return u * eval_cumulant(spec, 1.0 / u, route);
}

// --- F-inverse solver ---------------------------------------------------------------

namespace {

struct PhiEval {
    cplx phi;
    cplx dphi;
};

// phi(u) = u C(1/u);  phi'(u) = C(1/u) - C'(1/u)/u
PhiEval phi_with_derivative(const DistributionSpec& spec, cplx u, Route route) {
    const cplx inv = 1.0 / u;
    const Jet c = eval_cumulant_jet(spec, Jet::variable(inv), route);
    return {u * c.v, c.v - c.d * inv};
}

} // namespace

namespace {

// Newton from u0 (fixed-point fallback). True on convergence; otherwise
// res.u and res.residual hold the last iterate.
bool solve_from(const DistributionSpec& spec, cplx w, cplx u0, const SolverOptions& opt, SolveResult& res) {
    const double scale = 1.0 + std::abs(w);
    // If the quadrature cannot resolve phi at u (u hugging the support of nu)
    // move u up; the root has Im u >= Im w, so this only costs iterations.
    auto lifted = [&](cplx& u) {
        const cplx u0 = u;
        for (int lift = 0;; ++lift) {
            try {
                return phi_with_derivative(spec, u, opt.route);
            } catch (const ConvergenceError&) {
                if (lift == 30) throw;
                u = cplx(u0.real(), u0.imag() + std::ldexp(0.01 * scale, lift));
            }
        }
    };
    cplx u = u0;
    PhiEval pe = lifted(u);
    cplx r = u + pe.phi - w;
    for (int it = 0; it < opt.max_iterations; ++it) {
        res.iterations = it;
        if (std::abs(r) <= opt.tolerance * scale) {
            res.u = u;
            res.residual = std::abs(r) / scale;
            return true;
        }
        bool accepted = false;
        const cplx jac = 1.0 + pe.dphi;
        // Newton with step halving; near a branch point of F^{-1} (support edges)
        // full steps overshoot and the fixed-point map barely contracts
        const cplx step = std::abs(jac) > 0.0 ? r / jac : cplx(0.0);
        for (int half = 0; half < 12 && !accepted && std::abs(jac) > 0.0; ++half) {
            const cplx un = u - std::ldexp(1.0, -half) * step;
            if (!(un.imag() > 0.0) || !std::isfinite(un.real()) || !std::isfinite(un.imag())) continue;
            try {
                const PhiEval pn = phi_with_derivative(spec, un, opt.route);
                const cplx rn = un + pn.phi - w;
                if (std::abs(rn) < std::abs(r)) {
                    u = un;
                    pe = pn;
                    r = rn;
                    ++res.newton_steps;
                    accepted = true;
                }
            } catch (const ConvergenceError&) {
                // try a shorter step, then the fixed-point step
            }
        }
        if (!accepted) {
            // w - phi(u) has Im >= Im w > 0 whenever phi maps C+ into C- ∪ R
            u = w - pe.phi;
            pe = lifted(u);
            r = u + pe.phi - w;
            ++res.fixed_point_steps;
        }
    }
    res.u = u;
    res.residual = std::abs(r) / scale;
    res.iterations = opt.max_iterations;
    return res.residual <= opt.tolerance;
}

} // namespace

SolveResult f_inverse_solve(const DistributionSpec& spec, cplx w, const SolverOptions& opt) {
    if (!(w.imag() > 0.0)) {
        std::ostringstream os;
        os << "F-inverse solve needs w in the upper half-plane, got " << w;
        throw DomainError(os.str());
    }
    SolveResult res;
    if (opt.route == Route::Auto && spec.point_mass_location()) {
        res.u = w - *spec.point_mass_location();
        return res;
    }
    if (solve_from(spec, w, w, opt, res)) return res;

    // Continuation in Im w: near support edges the direct iteration can drift
    // into the wrong basin, so approach w from high above, warm-starting each
    // level with the previous root.
    const double top = std::max(w.imag(), 1.0 + std::abs(w));
    std::vector<double> heights{top};
    while (heights.back() > 4.0 * w.imag()) heights.push_back(heights.back() / 4.0);
    heights.push_back(w.imag());
    SolveResult step;
    cplx u = cplx(w.real(), top);
    SolveResult sum = res;
    bool ok = true;
    for (double y : heights) {
        step = {};
        ok = solve_from(spec, cplx(w.real(), y), u, opt, step);
        sum.iterations += step.iterations;
        sum.newton_steps += step.newton_steps;
        sum.fixed_point_steps += step.fixed_point_steps;
        u = step.u;
        if (!ok) break;
    }
    if (ok) {
        sum.u = step.u;
        sum.residual = step.residual;
        return sum;
    }
    std::ostringstream os;
    os << "F-inverse solve for '" << spec.label() << "' at w = " << w << " did not converge after "
       << opt.max_iterations << " iterations (direct and by continuation); last iterate " << res.u << ", residual "
       << res.residual;
    throw SolverError(os.str(), res.u, res.residual);
}

cplx cauchy_transform(const DistributionSpec& spec, cplx w, const SolverOptions& opt) {
    return 1.0 / f_inverse_solve(spec, w, opt).u;
}

// --- Stieltjes inversion ---------------------------------------------------------

namespace {

// Richardson table for a geometric ladder eps_0 > eps_1 > ... with constant
// ratio q = eps_0/eps_1, assuming an expansion in integer powers of eps.
double richardson(const std::vector<double>& ladder, std::vector<double> values) {
    if (values.size() == 1) return values.front();
    const double q = ladder[0] / ladder[1];
    double factor = 1.0;
    for (std::size_t level = 1; level < values.size(); ++level) {
        factor *= q;
        for (std::size_t j = 0; j + level < values.size(); ++j)
            values[j] = (factor * values[j + 1] - values[j]) / (factor - 1.0);
    }
    return values.front();
}

void check_ladder(const std::vector<double>& ladder) {
    if (ladder.empty()) throw DomainError("ε-ladder must not be empty");
    for (double e : ladder)
        if (!(e > 0.0)) throw DomainError("ε-ladder entries must be positive");
    if (ladder.size() > 1) {
        const double q = ladder[0] / ladder[1];
        if (!(q > 1.0)) throw DomainError("ε-ladder must decrease");
        for (std::size_t i = 1; i + 1 < ladder.size(); ++i)
            if (std::abs(ladder[i] / ladder[i + 1] - q) > 1e-9 * q)
                throw DomainError("ε-ladder must be geometric");
    }
}

} // namespace

double density_at(const DistributionSpec& spec, double x, const DensityOptions& opt) {
    check_ladder(opt.ladder);
    if (spec.point_mass_location()) return 0.0;
    std::vector<double> vals;
    vals.reserve(opt.ladder.size());
    for (double eps : opt.ladder) {
        const cplx g = cauchy_transform(spec, {x, eps}, opt.solver);
        vals.push_back(-g.imag() / std::numbers::pi);
    }
    const double f = richardson(opt.ladder, std::move(vals));
    return f < opt.clamp ? 0.0 : f;
}

double trapezoid_mass(const DensityGrid& g) {
    double m = 0.0;
    for (std::size_t i = 1; i < g.points.size(); ++i)
        m += 0.5 * (g.points[i].f + g.points[i - 1].f) * (g.points[i].x - g.points[i - 1].x);
    return m;
}

DensityGrid density_grid(const DistributionSpec& spec, double x_lo, double x_hi, int n_points,
                         const DensityOptions& opt) {
    if (!(x_lo < x_hi)) throw DomainError("density_grid needs x_lo < x_hi");
    if (n_points < 2) throw DomainError("density_grid needs at least 2 points");
    check_ladder(opt.ladder);

    const std::size_t n = static_cast<std::size_t>(n_points);
    std::vector<double> xs(n), fs(n, 0.0);
    std::vector<char> failed(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = i + 1 == n ? x_hi : x_lo + (x_hi - x_lo) * static_cast<double>(i) / static_cast<double>(n - 1);

    parallel_for(n, [&](std::size_t i) {
        try {
            fs[i] = density_at(spec, xs[i], opt);
        } catch (const ConvergenceError&) {
            failed[i] = 1;
        }
    });

    DensityGrid g;
    for (std::size_t i = 0; i < n; ++i) {
        if (failed[i])
            g.gaps.push_back(xs[i]);
        else
            g.points.push_back({xs[i], fs[i]});
    }
    if (static_cast<double>(g.gaps.size()) > opt.max_gap_fraction * static_cast<double>(n)) {
        std::ostringstream os;
        os << "density_grid for '" << spec.label() << "': " << g.gaps.size() << " of " << n
           << " points failed to solve";
        throw ConvergenceError(os.str(), g.gaps);
    }
    g.mass = trapezoid_mass(g);
    g.support_lo = x_hi;
    g.support_hi = x_lo;
    for (const auto& p : g.points) {
        if (p.f > 0.0) {
            g.support_lo = std::min(g.support_lo, p.x);
            g.support_hi = std::max(g.support_hi, p.x);
        }
    }
    if (g.support_lo > g.support_hi) g.support_lo = g.support_hi = 0.5 * (x_lo + x_hi);
    return g;
}

SupportEdges locate_support(const DistributionSpec& spec, const DensityGrid& grid, double threshold) {
    if (grid.points.size() < 2) throw DomainError("locate_support needs a grid with >= 2 points");
    DensityOptions fine;
    fine.ladder = {1e-7, 5e-8, 2.5e-8};
    auto inside = [&](double x) { return density_at(spec, x, fine) > threshold; };

    const auto& pts = grid.points;
    const double h = pts[1].x - pts[0].x;
    std::size_t first = pts.size(), last = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].f > 0.0) {
            first = std::min(first, i);
            last = i;
        }
    }
    if (first == pts.size()) throw DomainError("grid carries no positive density");

    // bracket [outside, inside] around an edge and bisect
    auto bisect = [&](double out, double in) {
        for (int k = 0; k < 60 && std::abs(in - out) > 1e-12 * (1.0 + std::abs(in)); ++k) {
            const double mid = 0.5 * (out + in);
            (inside(mid) ? in : out) = mid;
        }
        return 0.5 * (out + in);
    };
    auto edge = [&](double x0, double dir) {
        // walk outward until outside, inward until inside
        double in = x0;
        int guard = 0;
        while (!inside(in) && guard++ < 64) in -= dir * h;
        double out = in + dir * h;
        guard = 0;
        while (inside(out) && guard++ < 64) out += dir * h;
        return bisect(out, in);
    };
    return {edge(pts[first].x, -1.0), edge(pts[last].x, +1.0)};
}

} // namespace freelevy
