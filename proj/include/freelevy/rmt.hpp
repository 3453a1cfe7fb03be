#pragma once

// Random-matrix Monte Carlo: seeded ensembles whose spectra converge to
// catalog laws, and the Kolmogorov–Smirnov distance to a density grid.

#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "freelevy/transforms.hpp"

namespace freelevy {

/// gaussian_hermitian: entries of variance 1/n, limit w(0,1).
/// wishart: (1/n) X X* with X of size n x round(lambda n), limit free Poisson(lambda).
/// free_sum: diag(spec A) + U diag(spec B) U* with Haar U.
struct MatrixModel {
    enum class Kind { GaussianHermitian, Wishart, FreeSum };
    Kind kind = Kind::GaussianHermitian;
    double lambda = 1.0;
    std::shared_ptr<const MatrixModel> a, b;

    static MatrixModel gaussian_hermitian();
    static MatrixModel wishart(double lambda);
    static MatrixModel free_sum(MatrixModel a, MatrixModel b);

    /// "gaussian_hermitian", "wishart(1)", "free_sum(gaussian_hermitian,gaussian_hermitian)".
    std::string name() const;
    /// Inverse of name(); "wishart" alone means lambda = 1.
    static MatrixModel parse(const std::string& text);

    /// The law the spectrum converges to.
    DistributionSpec limit_law() const;
};

struct SpectrumSample {
    std::vector<double> eigenvalues;  // ascending
    int n = 0;
    std::string model;
    std::uint64_t seed = 0;
};

/// Counter-based standard normals keyed by (model, n, seed, stream).
class CounterRng {
public:
    CounterRng(const std::string& model, int n, std::uint64_t seed, std::uint64_t stream = 0);
    double normal();
    double uniform();

private:
    std::uint64_t next();
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

SpectrumSample sample_spectrum(const MatrixModel& model, int n, std::uint64_t seed);

/// sup |F_empirical - F_grid|, F_grid the exact CDF of the piecewise-linear
/// density through the grid points, normalised by the grid mass.
double ks_distance(const SpectrumSample& sample, const DensityGrid& grid);

/// Inverse-CDF draws from a grid (Glivenko–Cantelli self-check).
SpectrumSample sample_from_grid(const DensityGrid& grid, int n, std::uint64_t seed);

/// CSV: "# model=... n=... seed=..." then "value" and one eigenvalue per line.
void write_spectrum_csv(std::ostream& os, const SpectrumSample& s);

} // namespace freelevy
