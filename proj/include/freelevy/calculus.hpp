#pragma once

// Free additive convolution, dilation, free powers and the Bercovici–Pata
// bijection, carried out on cumulants and on triplets.

#include <string>

#include "freelevy/measures.hpp"
#include "freelevy/transforms.hpp"

namespace freelevy {

/// A classically infinitely divisible law, stored by its (classical) triplet.
struct ClassicalSpec {
    CharTriplet triplet;
    std::string label;
};

// Triplet-level arithmetic; shared by the free and classical sides.
CharTriplet add_triplets(const CharTriplet& t1, const CharTriplet& t2);
/// (a, nu, eta) of D_c mu: a c², nu∘(·/c), c eta + c∫x(1_[-1,1](cx) - 1_[-1,1](x)) nu(dx).
CharTriplet dilate_triplet(const CharTriplet& t, double c);
CharTriplet shift_triplet(const CharTriplet& t, double c);
/// (t a, t nu, t eta), the triplet of mu^{⊞t} (or mu^{*t}).
CharTriplet power_triplet(const CharTriplet& t, double s);

DistributionSpec boxplus(const DistributionSpec& d1, const DistributionSpec& d2);
/// D_c for c != 0; negative c reflects the law.
DistributionSpec dilate(const DistributionSpec& d, double c);
/// mu ⊞ delta_c.
DistributionSpec shift(const DistributionSpec& d, double c);
/// mu^{⊞t}, t >= 0: C -> t C.
DistributionSpec free_power(const DistributionSpec& d, double t);

ClassicalSpec classical_convolution(const ClassicalSpec& c1, const ClassicalSpec& c2);
ClassicalSpec classical_dilate(const ClassicalSpec& c, double factor);
ClassicalSpec classical_shift(const ClassicalSpec& c, double shift);
ClassicalSpec classical_point_mass(double c);

/// Λ: same triplet, read through the free Lévy–Khintchine formula.
DistributionSpec bercovici_pata(const ClassicalSpec& c);
/// Λ^{-1}; needs an attached triplet.
ClassicalSpec bercovici_pata_inverse(const DistributionSpec& d);

} // namespace freelevy
