#pragma once

// Complex-analytic engine for freely infinitely divisible laws: free cumulant
// transform C on the lower half-plane, the Voiculescu transform
// phi(u) = u C(1/u), the inverse of F = 1/G, the Cauchy transform G and
// density recovery by Stieltjes inversion.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "freelevy/jet.hpp"
#include "freelevy/measures.hpp"

namespace freelevy {

/// Closed-form free cumulant transform. `cumulant` is written once over jets
/// so that evaluating at Jet::variable(z) returns C(z) and C'(z); `derivative`
/// is an optional hand-derived C' used to cross-check the jet route.
struct ClosedForm {
    std::function<Jet(const Jet&)> cumulant;
    std::function<cplx(cplx)> derivative;
    std::string tag;
};

/// A freely infinitely divisible law, carried as a closed-form cumulant, a
/// free characteristic triplet, or both.
class DistributionSpec {
public:
    DistributionSpec(ClosedForm closed, std::string label);
    DistributionSpec(CharTriplet triplet, std::string label);
    DistributionSpec(ClosedForm closed, CharTriplet triplet, std::string label);

    /// δ_c; short-circuits every solver.
    static DistributionSpec point_mass(double c);

    const std::optional<ClosedForm>& closed() const noexcept { return closed_; }
    const std::optional<CharTriplet>& triplet() const noexcept { return triplet_; }
    const std::string& label() const noexcept { return label_; }

    /// Location c if this law is δ_c.
    std::optional<double> point_mass_location() const noexcept { return point_mass_; }

    /// Interval expected to contain the support (used to size test grids).
    std::optional<std::pair<double, double>> support_hint() const noexcept { return support_hint_; }

    DistributionSpec with_label(std::string label) const;
    DistributionSpec with_support_hint(double lo, double hi) const;
    DistributionSpec with_point_mass(double c) const;

private:
    std::optional<ClosedForm> closed_;
    std::optional<CharTriplet> triplet_;
    std::string label_;
    std::optional<double> point_mass_;
    std::optional<std::pair<double, double>> support_hint_;
};

/// Which representation eval_cumulant should use.
enum class Route { Auto, Closed, Triplet };

/// Free Lévy–Khintchine integral for a triplet, evaluated on a jet:
/// eta z + a z² + ∫ (1/(1-xz) - 1 - xz 1_[-1,1](x)) nu(dx).
Jet triplet_cumulant(const CharTriplet& t, const Jet& z, const QuadratureConfig& cfg = default_quadrature());

Jet eval_cumulant_jet(const DistributionSpec& spec, const Jet& z, Route route = Route::Auto);
/// C(z) for z in the closed lower half-plane (Im z <= 0).
cplx eval_cumulant(const DistributionSpec& spec, cplx z, Route route = Route::Auto);
/// C'(z) through jet propagation.
cplx eval_cumulant_derivative(const DistributionSpec& spec, cplx z, Route route = Route::Auto);

/// C continued to the upper half-plane by Schwarz reflection,
/// C(z) = conj(C(conj z)); laws are real so this is the analytic extension
/// across the real axis away from the support of 1/nu.
Jet eval_cumulant_extended_jet(const DistributionSpec& spec, const Jet& z, Route route = Route::Auto);
cplx eval_cumulant_extended(const DistributionSpec& spec, cplx z, Route route = Route::Auto);

/// phi(u) = u C(1/u) for u in C+.
cplx voiculescu(const DistributionSpec& spec, cplx u, Route route = Route::Auto);

struct SolverOptions {
    int max_iterations = 200;
    double tolerance = 1e-12;  // on |u + phi(u) - w| / (1 + |w|)
    Route route = Route::Auto;
};

struct SolveResult {
    cplx u;
    double residual = 0.0;
    int iterations = 0;
    int newton_steps = 0;
    int fixed_point_steps = 0;
};

/// Solves u + phi(u) = w for u in C+ (so u = F(w) = 1/G(w)). Damped
/// fixed point u <- w - phi(u) with Newton acceleration; a Newton step that
/// leaves C+ or increases the residual is replaced by the fixed-point step.
SolveResult f_inverse_solve(const DistributionSpec& spec, cplx w, const SolverOptions& opt = {});

/// G(w) = 1/u with u from f_inverse_solve.
cplx cauchy_transform(const DistributionSpec& spec, cplx w, const SolverOptions& opt = {});

struct DensityPoint {
    double x = 0.0;
    double f = 0.0;
};

struct DensityGrid {
    std::vector<DensityPoint> points;
    double support_lo = 0.0;
    double support_hi = 0.0;
    double mass = 0.0;
    std::vector<double> gaps;  // abscissae where the solver failed
};

struct DensityOptions {
    /// Geometric ε-ladder for x + iε; Richardson eliminates the leading
    /// powers of ε across the rungs.
    std::vector<double> ladder{1e-2, 5e-3, 2.5e-3};
    double clamp = 1e-12;
    double max_gap_fraction = 0.05;
    SolverOptions solver{};
};

/// -(1/π) Im G(x + iε) extrapolated to ε = 0 along the ladder.
double density_at(const DistributionSpec& spec, double x, const DensityOptions& opt = {});

DensityGrid density_grid(const DistributionSpec& spec, double x_lo, double x_hi, int n_points,
                         const DensityOptions& opt = {});

/// Trapezoid integral of the grid.
double trapezoid_mass(const DensityGrid& g);

struct SupportEdges {
    double lo = 0.0;
    double hi = 0.0;
};

/// Refines the outermost support edges seen on `grid` by bisection on the
/// threshold crossing of a fine-ladder density.
SupportEdges locate_support(const DistributionSpec& spec, const DensityGrid& grid, double threshold = 1e-6);

} // namespace freelevy
