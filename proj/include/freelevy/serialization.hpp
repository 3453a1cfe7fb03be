#pragma once

// JSON forms of measures, triplets and specs.
//
// Measure:  {"kind":"atoms","atoms":[[x,m],...]}
//           {"kind":"density","name":"free_gamma","params":{"t":1,"c":1}}
//           {"kind":"density","terms":[{"coeff":c,"power":p,"log_power":q}],"support":[lo,hi]}
//           {"kind":"grid","x":[...],"density":[...]}
//           {"kind":"scale","factor":t,"base":...}, {"kind":"dilate","c":c,"base":...}
//           {"kind":"sum","parts":[...]}
// Triplet:  {"a":number,"eta":number,"nu":measure}   (nu optional)
// Spec:     a triplet, or {"catalog":"free_gamma","params":{...}}

#include <string>

#include "freelevy/catalog.hpp"
#include "freelevy/measures.hpp"
#include "freelevy/transforms.hpp"

namespace freelevy {

Measure measure_from_json(const json& j);
json triplet_to_json(const CharTriplet& t);
CharTriplet triplet_from_json(const json& j);
json pair_to_json(const GeneratingPair& p);

DistributionSpec spec_from_json(const json& j);
/// Label, closed-form tag and (if attached) triplet.
json spec_to_json(const DistributionSpec& s);

/// Parses JSON text; syntax errors become ConfigError.
json parse_json(const std::string& text);

} // namespace freelevy
