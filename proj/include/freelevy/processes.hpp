#pragma once

// Selfsimilar free additive processes over freely selfdecomposable laws,
// free Lévy processes, stochastic integrals against both, and extraction of
// the background driving free Lévy process (BDLP).

#include <functional>
#include <string>
#include <vector>

#include "freelevy/calculus.hpp"
#include "freelevy/measures.hpp"
#include "freelevy/transforms.hpp"

namespace freelevy {

/// z = -2^{-k}(1 + i m), k = 0..4, m = 1..5.
std::vector<cplx> standard_test_grid();

/// sup over the grid of |C1(z) - C2(z)|.
double cumulant_sup_distance(const std::function<cplx(cplx)>& c1, const std::function<cplx(cplx)>& c2,
                             const std::vector<cplx>& grid = standard_test_grid());

// --- selfdecomposability ------------------------------------------------------------

enum class SdMethod { LevyDensityMonotonicity, AnalyticHalfplane };

std::string to_string(SdMethod m);

struct SdSample {
    double x = 0.0;      // abscissa (method A) or Re u (method B)
    double y = 0.0;      // 0 (method A) or Im u (method B)
    double value = 0.0;  // k(x) (method A) or Im C'(1/u) (method B)
    bool ok = true;
};

struct SdVerdict {
    bool is_sd = false;
    SdMethod method = SdMethod::LevyDensityMonotonicity;
    std::string reason;
    std::vector<SdSample> diagnostics;
};

/// Method A: nu = k(x)/|x| dx with k non-increasing on (0,∞) and
/// non-decreasing on (-∞,0), checked on log-spaced grids.
/// Method B: the Voiculescu transform of the candidate BDLP, C'(1/u), must
/// have Im <= 0 on a C+ grid.
SdVerdict sd_test(const DistributionSpec& d, SdMethod method);

/// Runs method A when a triplet is attached and method B otherwise.
SdVerdict sd_check(const DistributionSpec& d);

/// rho_c with C(z) - C(cz), 0 < c < 1. RejectionError if d is not SD.
DistributionSpec sd_factor(const DistributionSpec& d, double c);

// --- processes ----------------------------------------------------------------------

class SelfSimilarProcess {
public:
    /// Rejects non-SD bases and H <= 0.
    SelfSimilarProcess(DistributionSpec base, double H);

    const DistributionSpec& base() const noexcept { return base_; }
    double H() const noexcept { return H_; }

    /// C_{mu_t}(z) = C(t^H z), any z off the real support of the cut.
    cplx marginal_cumulant(double t, cplx z) const;
    /// C_{mu_t}(z) - C_{mu_s}(z).
    cplx increment_cumulant(double s, double t, cplx z) const;

private:
    DistributionSpec base_;
    double H_;
};

DistributionSpec marginal(const SelfSimilarProcess& p, double t);
DistributionSpec increment(const SelfSimilarProcess& p, double s, double t);

/// C of sum_j c_j X_{t_j} through the telescoping sum over increments.
cplx linear_combination_cumulant(const SelfSimilarProcess& p, const std::vector<double>& coeffs,
                                 const std::vector<double>& times, cplx z);

struct FreeLevyProcessSpec {
    DistributionSpec one_dim_marginal;
    std::string tag;

    /// Law of Z_t, C = t C_{Z_1}.
    DistributionSpec marginal(double t) const { return free_power(one_dim_marginal, t); }
};

// --- stochastic integrals ----------------------------------------------------------

/// Deterministic integrands: const c, power u^theta, exp e^{theta u}.
struct IntegrandFamily {
    enum class Kind { Const, Power, Exp };
    Kind kind = Kind::Const;
    double theta = 1.0;

    double operator()(double u) const;
    std::string describe() const;

    static IntegrandFamily constant(double c) { return {Kind::Const, c}; }
    static IntegrandFamily power(double theta) { return {Kind::Power, theta}; }
    static IntegrandFamily exponential(double theta) { return {Kind::Exp, theta}; }
};

struct IntegralOptions {
    double tol = 1e-6;
    int max_depth = 20;
    int min_depth = 2;
    std::vector<cplx> grid = standard_test_grid();
};

struct IntegralLaw {
    DistributionSpec spec;
    int depth = 0;                   // dyadic depth reached (Riemann sums)
    std::vector<double> trace;       // sup differences between successive levels
    double horizon = 0.0;            // truncation point for infinite intervals
};

/// Law of ∫_A^B f dX by midpoint Riemann sums over dyadic partitions,
/// refined until successive cumulant grids differ by < tol.
IntegralLaw stochastic_integral_law(const SelfSimilarProcess& p, const std::function<double(double)>& f, double A,
                                    double B, const IntegralOptions& opt = {});

/// ∫_A^B C_{Z_1}(f(t) z) dt; B may be +∞, in which case the horizon is
/// doubled until the tail drops below tol/10.
cplx levy_integral_cumulant(const FreeLevyProcessSpec& lp, const std::function<double(double)>& f, double A,
                            double B, cplx z, double tol = 1e-10);

/// Law of ∫_A^B f dZ as a spec whose cumulant is levy_integral_cumulant.
IntegralLaw stochastic_integral_law(const FreeLevyProcessSpec& lp, const std::function<double(double)>& f, double A,
                                    double B, const IntegralOptions& opt = {});

// --- BDLP -------------------------------------------------------------------------------

enum class BdlpRoute { Auto, Derivative, Triplet };

/// C_{Z_1}(z) = z C'(z) (derivative route) or
/// eta z + 2a z² + z ∫(x/(1-zx)² - x 1_[-1,1](x)) nu(dx) (triplet route).
/// Rejects non-SD laws and Lévy measures with infinite log-moment.
FreeLevyProcessSpec bdlp(const DistributionSpec& d, BdlpRoute route = BdlpRoute::Auto);

/// The triplet-route integral alone.
Jet bdlp_triplet_cumulant(const CharTriplet& t, const Jet& z);

/// BDLP of the H-selfsimilar process over p.base(): Z_t = ∫_1^{e^t} u^{-H} dX_u,
/// with C_{Z_1} = H z C'(z).
FreeLevyProcessSpec bdlp_of_process(const SelfSimilarProcess& p);

/// Triplet of Z_1 from nu_X = k(x)/|x| dx: density -k' on (0,∞) and k' on
/// (-∞,0), atoms at downward jumps of k, a_Z = 2 a_X and
/// eta_Z = eta_X - k(1+) + k(-1-).
CharTriplet bdlp_levy_density(const DistributionSpec& d);

} // namespace freelevy
