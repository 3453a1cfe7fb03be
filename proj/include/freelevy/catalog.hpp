#pragma once

// Closed-form library of freely infinitely divisible laws:
//   semicircle    w(eta, a)        C = eta z + a z²
//   free_gamma    gamma(t, c)      C = t (1 - sqrt(1 - 4 c z)) / 2
//   mu_p          mu(p)            C = 1 - (1 - z)^p,        -1 < p < 1
//   fuss_catalan  mu(p, p)         C = p z + (z + 1)^p - 1,   1 < p < 2
//   free_poisson  Marchenko–Pastur with rate lambda, jump size 1
//   delta         point mass at c
// All fractional powers use the principal branch; on the lower half-plane
// their arguments (1 - 4cz, 1 - z, z + 1) stay off the negative real axis.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freelevy/measures.hpp"
#include "freelevy/transforms.hpp"

namespace freelevy {

using Params = std::map<std::string, double>;

struct ParamSchema {
    std::string name;
    double default_value;
    std::string range;  // human-readable constraint
};

struct CatalogEntry {
    std::string name;
    Params params;
    DistributionSpec spec;
    /// Closed density and the closed interval carrying it.
    std::function<double(double)> closed_density;
    std::optional<std::pair<double, double>> support;
    /// Closed Cauchy transform on C+.
    std::function<cplx(cplx)> closed_cauchy;
    /// Closed cumulant of the background driving free Lévy process (z C'(z)).
    std::optional<ClosedForm> bdlp;
    /// Closed Lévy density of the BDLP's Lévy measure.
    std::function<double(double)> bdlp_levy_density;
    /// Whether free selfdecomposability is asserted for these parameters.
    bool selfdecomposable = false;
};

std::vector<std::string> catalog_names();
std::vector<ParamSchema> catalog_schema(const std::string& name);

/// Builds an entry; unknown names raise ConfigError, out-of-range parameters DomainError.
CatalogEntry catalog_get(const std::string& name, const Params& params = {});

/// Named Lévy densities usable from the triplet JSON schema
/// ("free_gamma", "mu_p", "fuss_catalan").
DensityComponent catalog_levy_density(const std::string& name, const Params& params);

/// Parses "t=1,c=0.5" into a parameter map.
Params parse_params(const std::string& text);

} // namespace freelevy
