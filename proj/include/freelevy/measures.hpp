#pragma once

// Lévy measures, free characteristic triplets (a, nu, eta), free generating
// pairs (gamma, sigma) and the classical Lévy–Khintchine exponent that
// interprets the same triplet data.

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "freelevy/errors.hpp"
#include "freelevy/jet.hpp"
#include "freelevy/quadrature.hpp"

namespace freelevy {

using json = nlohmann::json;

/// Quadrature settings shared by every measure integral.
struct QuadratureConfig {
    quad::Options options{1e-14, 1e-13, 12};
    /// A non-converged rule is still accepted if its error estimate is below this.
    double accept_abs = 1e-10;
};

const QuadratureConfig& default_quadrature();

/// A density piece ell(x) supported on the open interval (lo, hi). Either end
/// may be infinite. `singular_points` lists interior points where ell is not
/// smooth; they become quadrature breakpoints.
struct DensityComponent {
    std::function<double(double)> density;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> singular_points;
    json descriptor;

    bool contains(double x) const { return x > lo && x < hi; }
};

struct Atom {
    double x = 0.0;
    double mass = 0.0;
};

/// A (possibly zero) measure on the real line built from density pieces and
/// atoms. Immutable; transformations return new measures.
class Measure {
public:
    Measure() = default;
    Measure(std::vector<DensityComponent> components, std::vector<Atom> atoms);

    static Measure from_atoms(std::vector<Atom> atoms);
    static Measure from_density(DensityComponent c);

    const std::vector<DensityComponent>& components() const noexcept { return components_; }
    const std::vector<Atom>& atoms() const noexcept { return atoms_; }

    bool is_zero() const noexcept { return components_.empty() && atoms_.empty(); }
    bool has_density() const noexcept { return !components_.empty(); }
    bool has_atoms() const noexcept { return !atoms_.empty(); }

    /// Total density at x: sum over the components whose open support holds x.
    double density(double x) const;
    /// Smallest closed interval containing the support (may be infinite).
    std::pair<double, double> support_hull() const;
    /// Sorted, de-duplicated integration breakpoints: component endpoints,
    /// singular points, 0 and ±1.
    std::vector<double> breakpoints() const;

    Measure operator+(const Measure& other) const;
    /// t·m for t >= 0 (negative t only for internal signed differences).
    Measure scaled(double t) const;
    /// Image under x -> c·x (c != 0); D_c on measures.
    Measure dilated(double c) const;
    /// Density and atom masses multiplied pointwise by w(x).
    Measure weighted(std::function<double(double)> w, const std::string& tag) const;

    /// ∫ g dm over the whole line. g may return double, cplx or Jet.
    template <class G>
    auto integrate(G&& g, const QuadratureConfig& cfg = default_quadrature()) const
        -> std::decay_t<decltype(g(1.0))> {
        return integrate_split(std::forward<G>(g), {}, cfg);
    }
    /// Same, with extra breakpoints where g itself jumps.
    template <class G>
    auto integrate_split(G&& g, const std::vector<double>& extra,
                         const QuadratureConfig& cfg = default_quadrature()) const
        -> std::decay_t<decltype(g(1.0))>;

    json to_json() const;

private:
    std::vector<DensityComponent> components_;
    std::vector<Atom> atoms_;
};

/// Lévy measure: no atom at 0 and ∫(x²∧1) dnu < ∞, checked at construction.
class LevyMeasure {
public:
    LevyMeasure() = default;
    explicit LevyMeasure(Measure m);

    const Measure& measure() const noexcept { return m_; }
    double x2_mass() const noexcept { return x2_mass_; }

    bool is_zero() const noexcept { return m_.is_zero(); }
    bool has_density() const noexcept { return m_.has_density(); }
    bool has_atoms() const noexcept { return m_.has_atoms(); }
    double density(double x) const { return m_.density(x); }
    /// k(x) = |x|·ell(x).
    double k(double x) const { return std::abs(x) * m_.density(x); }

    LevyMeasure operator+(const LevyMeasure& o) const { return LevyMeasure(m_ + o.m_); }
    LevyMeasure scaled(double t) const { return LevyMeasure(m_.scaled(t)); }
    LevyMeasure dilated(double c) const { return LevyMeasure(m_.dilated(c)); }

    template <class G>
    auto integrate(G&& g, const QuadratureConfig& cfg = default_quadrature()) const {
        return m_.integrate(std::forward<G>(g), cfg);
    }
    template <class G>
    auto integrate_split(G&& g, const std::vector<double>& extra,
                         const QuadratureConfig& cfg = default_quadrature()) const {
        return m_.integrate_split(std::forward<G>(g), extra, cfg);
    }

private:
    Measure m_;
    double x2_mass_ = 0.0;
};

/// Finite measure; atoms at 0 allowed.
class FiniteMeasure {
public:
    FiniteMeasure() = default;
    explicit FiniteMeasure(Measure m);

    const Measure& measure() const noexcept { return m_; }
    double total_mass() const noexcept { return mass_; }
    /// Mass of the atom at the origin.
    double mass_at_zero() const;

private:
    Measure m_;
    double mass_ = 0.0;
};

/// Free characteristic triplet (a, nu, eta).
struct CharTriplet {
    double a = 0.0;
    LevyMeasure nu;
    double eta = 0.0;

    CharTriplet() = default;
    CharTriplet(double a_, LevyMeasure nu_, double eta_);
};

/// Free generating pair (gamma, sigma).
struct GeneratingPair {
    double gamma = 0.0;
    FiniteMeasure sigma;
};

/// ∫ x (1_{[-1,1]}(x) - 1/(1+x²)) nu(dx): the gap eta - gamma.
double drift_correction(const LevyMeasure& nu);

GeneratingPair pair_from_triplet(const CharTriplet& t);
CharTriplet triplet_from_pair(const GeneratingPair& p);

/// Voiculescu transform from the generating pair:
/// phi(z) = gamma + ∫ (1 + x z)/(z - x) sigma(dx), z in C+.
cplx phi_from_pair(const GeneratingPair& p, cplx z);

struct LogMomentVerdict {
    bool finite = true;
    bool low_confidence = false;
    double value = 0.0;  // partial tail integral at the last refinement
    int doublings = 0;
    std::string diagnostic;
};

/// Decides ∫_{|x|>1} log(1+|x|) nu(dx) < ∞ by doubling the truncation radius.
LogMomentVerdict log_moment_check(const LevyMeasure& nu);

/// Classical Lévy–Khintchine exponent log mu^(theta) for the same triplet.
cplx eval_classical_cumulant(const CharTriplet& t, double theta);

/// ell(x) = sum_i coeff_i |x|^power_i (log|x|)^log_power_i on (lo, hi).
struct PowerTerm {
    double coeff = 1.0;
    double power = 0.0;
    double log_power = 0.0;
};
DensityComponent power_density(std::vector<PowerTerm> terms, double lo, double hi);

/// Piecewise-linear interpolant through tabulated (x, ell) values.
DensityComponent grid_density(std::vector<double> xs, std::vector<double> fs);

bool bitwise_equal(const Measure& a, const Measure& b);
bool bitwise_equal(const CharTriplet& a, const CharTriplet& b);

// ---------------------------------------------------------------------------

template <class G>
auto Measure::integrate_split(G&& g, const std::vector<double>& extra, const QuadratureConfig& cfg) const
    -> std::decay_t<decltype(g(1.0))> {
    using T = std::decay_t<decltype(g(1.0))>;
    T total{};
    for (const Atom& at : atoms_) total = total + g(at.x) * at.mass;
    if (components_.empty()) return total;

    std::vector<double> bp = breakpoints();
    if (!extra.empty()) {
        bp.insert(bp.end(), extra.begin(), extra.end());
        std::sort(bp.begin(), bp.end());
        bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
    }
    std::vector<const DensityComponent*> active;
    for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
        const double p = bp[i];
        const double q = bp[i + 1];
        active.clear();
        for (const auto& c : components_)
            if (c.lo <= p && q <= c.hi) active.push_back(&c);
        if (active.empty()) continue;
        auto integrand = [&](double x) -> T {
            double ell = 0.0;
            for (const auto* c : active) ell += c->density(x);
            // nodes that crowd a singular endpoint can overflow ell; their weight is nil
            if (ell == 0.0 || !std::isfinite(ell)) return T{};
            return g(x) * ell;
        };
        auto r = quad::integrate(integrand, p, q, cfg.options);
        if (!r.converged && !(r.error <= cfg.accept_abs)) {
            std::ostringstream os;
            os << "Lévy-measure quadrature did not converge on (" << p << ", " << q << "), error estimate "
               << r.error;
            throw ConvergenceError(os.str(),
                                   {r.error});
        }
        total = total + r.value;
    }
    return total;
}

} // namespace freelevy
