#include "freelevy/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace freelevy {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

bool indicator(double x) { return std::abs(x) <= 1.0; }

} // namespace

CharTriplet add_triplets(const CharTriplet& t1, const CharTriplet& t2) {
    return CharTriplet(t1.a + t2.a, t1.nu + t2.nu, t1.eta + t2.eta);
}

CharTriplet dilate_triplet(const CharTriplet& t, double c) {
    if (c == 0.0 || !std::isfinite(c)) throw DomainError("dilation factor must be finite and nonzero");
    double eta = c * t.eta;
    if (!t.nu.is_zero() && std::abs(c) != 1.0) {
        const double inv = 1.0 / std::abs(c);
        const double corr = t.nu.integrate_split(
            [c](double x) {
                const double d = static_cast<double>(indicator(c * x)) - static_cast<double>(indicator(x));
                return d == 0.0 ? 0.0 : c * x * d;
            },
            {-inv, inv});
        eta += corr;
    }
    return CharTriplet(c * c * t.a, t.nu.is_zero() ? LevyMeasure{} : t.nu.dilated(c), eta);
}

CharTriplet shift_triplet(const CharTriplet& t, double c) { return CharTriplet(t.a, t.nu, t.eta + c); }

CharTriplet power_triplet(const CharTriplet& t, double s) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("power must be finite and >= 0");
    if (s == 0.0) return CharTriplet(0.0, LevyMeasure{}, 0.0);
    return CharTriplet(s * t.a, t.nu.is_zero() ? LevyMeasure{} : t.nu.scaled(s), s * t.eta);
}

DistributionSpec boxplus(const DistributionSpec& d1, const DistributionSpec& d2) {
    const std::string label = d1.label() + " ⊞ " + d2.label();
    std::optional<DistributionSpec> out;
    if (d1.point_mass_location() && d2.point_mass_location()) {
        out = DistributionSpec::point_mass(*d1.point_mass_location() + *d2.point_mass_location()).with_label(label);
    } else {
        ClosedForm cf;
        cf.cumulant = [d1, d2](const Jet& z) { return eval_cumulant_jet(d1, z) + eval_cumulant_jet(d2, z); };
        if (d1.closed() && d2.closed() && d1.closed()->derivative && d2.closed()->derivative) {
            auto f1 = d1.closed()->derivative, f2 = d2.closed()->derivative;
            cf.derivative = [f1, f2](cplx z) { return f1(z) + f2(z); };
        }
        cf.tag = "(" + (d1.closed() ? d1.closed()->tag : d1.label()) + ") + (" +
                 (d2.closed() ? d2.closed()->tag : d2.label()) + ")";
        if (d1.triplet() && d2.triplet())
            out = DistributionSpec(std::move(cf), add_triplets(*d1.triplet(), *d2.triplet()), label);
        else
            out = DistributionSpec(std::move(cf), label);
    }
    if (d1.support_hint() && d2.support_hint())
        out = out->with_support_hint(d1.support_hint()->first + d2.support_hint()->first,
                                     d1.support_hint()->second + d2.support_hint()->second);
    return *out;
}

DistributionSpec dilate(const DistributionSpec& d, double c) {
    if (c == 0.0 || !std::isfinite(c)) throw DomainError("dilation factor must be finite and nonzero");
    const std::string label = "D_" + fmt(c) + "(" + d.label() + ")";
    std::optional<DistributionSpec> out;
    if (d.point_mass_location()) {
        out = DistributionSpec::point_mass(c * *d.point_mass_location()).with_label(label);
    } else {
        ClosedForm cf;
        // C(cz); for c < 0 the argument crosses to C+ and is reflected back
        cf.cumulant = [d, c](const Jet& z) { return eval_cumulant_extended_jet(d, z * c); };
        if (d.closed() && d.closed()->derivative && c > 0.0) {
            auto f = d.closed()->derivative;
            cf.derivative = [f, c](cplx z) { return c * f(c * z); };
        }
        cf.tag = "C(" + fmt(c) + "z) of " + (d.closed() ? d.closed()->tag : d.label());
        if (d.triplet())
            out = DistributionSpec(std::move(cf), dilate_triplet(*d.triplet(), c), label);
        else
            out = DistributionSpec(std::move(cf), label);
    }
    if (d.support_hint()) {
        const double a = c * d.support_hint()->first, b = c * d.support_hint()->second;
        out = out->with_support_hint(std::min(a, b), std::max(a, b));
    }
    return *out;
}

DistributionSpec shift(const DistributionSpec& d, double c) { return boxplus(d, DistributionSpec::point_mass(c)); }

DistributionSpec free_power(const DistributionSpec& d, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("free power must be finite and >= 0");
    const std::string label = "(" + d.label() + ")^⊞" + fmt(t);
    if (t == 0.0) return DistributionSpec::point_mass(0.0).with_label(label);
    if (t == 1.0) return d;
    if (d.point_mass_location()) return DistributionSpec::point_mass(t * *d.point_mass_location()).with_label(label);
    ClosedForm cf;
    cf.cumulant = [d, t](const Jet& z) { return eval_cumulant_jet(d, z) * t; };
    if (d.closed() && d.closed()->derivative) {
        auto f = d.closed()->derivative;
        cf.derivative = [f, t](cplx z) { return t * f(z); };
    }
    cf.tag = fmt(t) + "*(" + (d.closed() ? d.closed()->tag : d.label()) + ")";
    if (d.triplet()) return DistributionSpec(std::move(cf), power_triplet(*d.triplet(), t), label);
    return DistributionSpec(std::move(cf), label);
}

ClassicalSpec classical_convolution(const ClassicalSpec& c1, const ClassicalSpec& c2) {
    return {add_triplets(c1.triplet, c2.triplet), c1.label + " * " + c2.label};
}

ClassicalSpec classical_dilate(const ClassicalSpec& c, double factor) {
    return {dilate_triplet(c.triplet, factor), "D_" + fmt(factor) + "(" + c.label + ")"};
}

ClassicalSpec classical_shift(const ClassicalSpec& c, double s) {
    return {shift_triplet(c.triplet, s), c.label + " * delta(" + fmt(s) + ")"};
}

ClassicalSpec classical_point_mass(double c) {
    return {CharTriplet(0.0, LevyMeasure{}, c), "delta(" + fmt(c) + ")"};
}

DistributionSpec bercovici_pata(const ClassicalSpec& c) {
    return DistributionSpec(c.triplet, "Λ(" + c.label + ")");
}

ClassicalSpec bercovici_pata_inverse(const DistributionSpec& d) {
    if (!d.triplet())
        throw UnsupportedRepresentation("Λ^{-1} needs a triplet; '" + d.label() + "' carries only a closed form");
    return {*d.triplet(), "Λ^{-1}(" + d.label() + ")"};
}

} // namespace freelevy
