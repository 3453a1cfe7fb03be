#include "freelevy/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/Dense>

#include "freelevy/calculus.hpp"
#include "freelevy/catalog.hpp"
#include "freelevy/csv.hpp"

namespace freelevy {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("Hermitian eigensolver failed");
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end());
    return ev;
}

Eigen::MatrixXcd ginibre(CounterRng& rng, int rows, int cols) {
    Eigen::MatrixXcd g(rows, cols);
    const double s = std::sqrt(0.5);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) g(i, j) = cplx(s * rng.normal(), s * rng.normal());
    return g;
}

} // namespace

// --- models ---------------------------------------------------------------------------

MatrixModel MatrixModel::gaussian_hermitian() { return {}; }

MatrixModel MatrixModel::wishart(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("wishart needs lambda > 0");
    MatrixModel m;
    m.kind = Kind::Wishart;
    m.lambda = lambda;
    return m;
}

MatrixModel MatrixModel::free_sum(MatrixModel a, MatrixModel b) {
    MatrixModel m;
    m.kind = Kind::FreeSum;
    m.a = std::make_shared<const MatrixModel>(std::move(a));
    m.b = std::make_shared<const MatrixModel>(std::move(b));
    return m;
}

std::string MatrixModel::name() const {
    switch (kind) {
    case Kind::GaussianHermitian: return "gaussian_hermitian";
    case Kind::Wishart: return "wishart(" + num(lambda) + ")";
    case Kind::FreeSum: return "free_sum(" + a->name() + "," + b->name() + ")";
    }
    return "?";
}

MatrixModel MatrixModel::parse(const std::string& raw) {
    const std::string text = trim(raw);
    if (text == "gaussian_hermitian" || text == "gue") return gaussian_hermitian();
    if (text == "wishart") return wishart(1.0);
    auto inner = [&](const std::string& head) -> std::optional<std::string> {
        if (text.rfind(head + "(", 0) != 0 || text.back() != ')') return std::nullopt;
        return text.substr(head.size() + 1, text.size() - head.size() - 2);
    };
    if (auto arg = inner("wishart")) {
        try {
            std::size_t used = 0;
            const double l = std::stod(*arg, &used);
            if (used == trim(*arg).size()) return wishart(l);
        } catch (const std::exception&) {
        }
        throw ConfigError("bad wishart parameter '" + *arg + "'");
    }
    if (auto arg = inner("free_sum")) {
        // split at the top-level comma
        int depth = 0;
        for (std::size_t i = 0; i < arg->size(); ++i) {
            const char c = (*arg)[i];
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (c == ',' && depth == 0) return free_sum(parse(arg->substr(0, i)), parse(arg->substr(i + 1)));
        }
        throw ConfigError("free_sum needs two comma-separated models");
    }
    throw ConfigError("unknown matrix model '" + text + "'");
}

DistributionSpec MatrixModel::limit_law() const {
    switch (kind) {
    case Kind::GaussianHermitian: return catalog_get("semicircle", {{"eta", 0.0}, {"a", 1.0}}).spec;
    case Kind::Wishart: return catalog_get("free_poisson", {{"lambda", lambda}}).spec;
    case Kind::FreeSum: return boxplus(a->limit_law(), b->limit_law());
    }
    throw ConfigError("unknown matrix model");
}

// --- RNG ----------------------------------------------------------------------------------

CounterRng::CounterRng(const std::string& model, int n, std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix(splitmix(splitmix(fnv1a(model)) ^ static_cast<std::uint64_t>(n)) ^ seed) ^ splitmix(stream)) {}

std::uint64_t CounterRng::next() { return splitmix(key_ ^ splitmix(counter_++)); }

double CounterRng::uniform() {
    // 53 random bits in (0, 1)
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
}

// --- sampling ------------------------------------------------------------------------------

SpectrumSample sample_spectrum(const MatrixModel& model, int n, std::uint64_t seed) {
    if (n < 2) throw DomainError("matrix size must be >= 2");
    SpectrumSample s;
    s.n = n;
    s.model = model.name();
    s.seed = seed;
    CounterRng rng(s.model, n, seed);
    switch (model.kind) {
    case MatrixModel::Kind::GaussianHermitian: {
        Eigen::MatrixXcd h(n, n);
        const double sd_diag = std::sqrt(1.0 / n), sd_off = std::sqrt(0.5 / n);
        for (int j = 0; j < n; ++j) {
            h(j, j) = sd_diag * rng.normal();
            for (int i = j + 1; i < n; ++i) {
                const cplx v(sd_off * rng.normal(), sd_off * rng.normal());
                h(i, j) = v;
                h(j, i) = std::conj(v);
            }
        }
        s.eigenvalues = hermitian_eigenvalues(h);
        break;
    }
    case MatrixModel::Kind::Wishart: {
        const int m = std::max(1, static_cast<int>(std::lround(model.lambda * n)));
        const Eigen::MatrixXcd x = ginibre(rng, n, m);
        Eigen::MatrixXcd w = (x * x.adjoint()) / static_cast<double>(n);
        s.eigenvalues = hermitian_eigenvalues(w);
        break;
    }
    case MatrixModel::Kind::FreeSum: {
        const auto ea = sample_spectrum(*model.a, n, splitmix(seed ^ 0xa)).eigenvalues;
        const auto eb = sample_spectrum(*model.b, n, splitmix(seed ^ 0xb)).eigenvalues;
        // Haar unitary: QR of a Ginibre matrix with the phases of diag(R) removed
        const Eigen::MatrixXcd g = ginibre(rng, n, n);
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
        Eigen::MatrixXcd u = qr.householderQ();
        const Eigen::MatrixXcd& r = qr.matrixQR();
        for (int j = 0; j < n; ++j) {
            const cplx d = r(j, j);
            const double ad = std::abs(d);
            if (ad > 0.0) u.col(j) *= d / ad;
        }
        Eigen::VectorXd vb = Eigen::Map<const Eigen::VectorXd>(eb.data(), n);
        Eigen::MatrixXcd m = u * vb.asDiagonal() * u.adjoint();
        for (int i = 0; i < n; ++i) m(i, i) += ea[static_cast<std::size_t>(i)];
        // symmetrise against rounding before the Hermitian solve
        m = 0.5 * (m + m.adjoint()).eval();
        s.eigenvalues = hermitian_eigenvalues(m);
        break;
    }
    }
    return s;
}

// --- KS distance ---------------------------------------------------------------------------

namespace {

struct GridCdf {
    std::vector<double> x, f, F;
    double mass = 0.0;

    explicit GridCdf(const DensityGrid& g) {
        for (const auto& p : g.points) {
            x.push_back(p.x);
            f.push_back(p.f);
        }
        F.assign(x.size(), 0.0);
        for (std::size_t i = 1; i < x.size(); ++i) F[i] = F[i - 1] + 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
        mass = F.back();
        if (!(mass > 0.0)) throw DomainError("density grid carries no mass");
    }

    double operator()(double v) const {
        if (v <= x.front()) return 0.0;
        if (v >= x.back()) return 1.0;
        const std::size_t j = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), v) - x.begin()) - 1;
        const double h = x[j + 1] - x[j], d = v - x[j];
        return (F[j] + f[j] * d + (f[j + 1] - f[j]) * d * d / (2.0 * h)) / mass;
    }
};

} // namespace

double ks_distance(const SpectrumSample& sample, const DensityGrid& grid) {
    if (grid.points.size() < 2) throw DomainError("KS distance needs a grid with >= 2 points");
    if (sample.eigenvalues.empty()) throw DomainError("KS distance needs a non-empty sample");
    const GridCdf cdf(grid);
    const double lo = cdf.x.front(), hi = cdf.x.back();
    if (sample.eigenvalues.front() < lo || sample.eigenvalues.back() > hi)
        throw DomainError("insufficient grid coverage: sample spans [" + num(sample.eigenvalues.front()) + ", " +
                          num(sample.eigenvalues.back()) + "], grid [" + num(lo) + ", " + num(hi) + "]");
    const double n = static_cast<double>(sample.eigenvalues.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.eigenvalues.size(); ++i) {
        const double F = cdf(sample.eigenvalues[i]);
        d = std::max({d, std::abs(F - static_cast<double>(i) / n), std::abs(F - static_cast<double>(i + 1) / n)});
    }
    return d;
}

SpectrumSample sample_from_grid(const DensityGrid& grid, int n, std::uint64_t seed) {
    if (n < 1) throw DomainError("sample size must be >= 1");
    const GridCdf cdf(grid);
    CounterRng rng("grid", n, seed);
    SpectrumSample s;
    s.n = n;
    s.model = "grid";
    s.seed = seed;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        double a = cdf.x.front(), b = cdf.x.back();
        for (int k = 0; k < 100 && b - a > 1e-14 * (1.0 + std::abs(a)); ++k) {
            const double m = 0.5 * (a + b);
            (cdf(m) < u ? a : b) = m;
        }
        s.eigenvalues.push_back(0.5 * (a + b));
    }
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
    return s;
}

void write_spectrum_csv(std::ostream& os, const SpectrumSample& s) {
    os << "# model=" << s.model << " n=" << s.n << " seed=" << s.seed << '\n';
    os << "value\n";
    for (double v : s.eigenvalues) os << num(v) << '\n';
}

} // namespace freelevy
