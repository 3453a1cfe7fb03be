#include "freelevy/serialization.hpp"

#include <cmath>
#include <limits>

namespace freelevy {

namespace {

double number(const json& j, const std::string& what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw ConfigError("'" + what + "' must be a number");
}

const json& field(const json& j, const std::string& key) {
    if (!j.is_object() || !j.contains(key)) throw ConfigError("missing field '" + key + "'");
    return j.at(key);
}

Params params_from(const json& j) {
    Params p;
    if (j.is_null()) return p;
    if (!j.is_object()) throw ConfigError("'params' must be an object");
    for (const auto& [k, v] : j.items()) p[k] = number(v, k);
    return p;
}

} // namespace

Measure measure_from_json(const json& j) {
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "atoms") {
        std::vector<Atom> atoms;
        for (const auto& a : field(j, "atoms")) {
            if (!a.is_array() || a.size() != 2) throw ConfigError("atoms are [x, mass] pairs");
            atoms.push_back({number(a[0], "x"), number(a[1], "mass")});
        }
        return Measure::from_atoms(std::move(atoms));
    }
    if (kind == "density") {
        if (j.contains("name")) {
            return Measure::from_density(
                catalog_levy_density(j.at("name").get<std::string>(), params_from(j.value("params", json()))));
        }
        std::vector<PowerTerm> terms;
        for (const auto& t : field(j, "terms"))
            terms.push_back({number(t.value("coeff", json(1.0)), "coeff"), number(t.value("power", json(0.0)), "power"),
                             number(t.value("log_power", json(0.0)), "log_power")});
        const json& sup = field(j, "support");
        if (!sup.is_array() || sup.size() != 2) throw ConfigError("support is [lo, hi]");
        return Measure::from_density(power_density(std::move(terms), number(sup[0], "lo"), number(sup[1], "hi")));
    }
    if (kind == "grid") {
        std::vector<double> xs, fs;
        for (const auto& v : field(j, "x")) xs.push_back(number(v, "x"));
        for (const auto& v : field(j, "density")) fs.push_back(number(v, "density"));
        return Measure::from_density(grid_density(std::move(xs), std::move(fs)));
    }
    if (kind == "scale") return measure_from_json(field(j, "base")).scaled(number(field(j, "factor"), "factor"));
    if (kind == "dilate") return measure_from_json(field(j, "base")).dilated(number(field(j, "c"), "c"));
    if (kind == "sum") {
        Measure m;
        for (const auto& part : field(j, "parts")) m = m + measure_from_json(part);
        return m;
    }
    throw ConfigError("measure kind '" + kind + "' cannot be read back");
}

json triplet_to_json(const CharTriplet& t) {
    json j{{"a", t.a}, {"eta", t.eta}};
    j["nu"] = t.nu.is_zero() ? json{{"kind", "atoms"}, {"atoms", json::array()}} : t.nu.measure().to_json();
    return j;
}

CharTriplet triplet_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("a triplet is a JSON object");
    const double a = number(j.value("a", json(0.0)), "a");
    const double eta = number(j.value("eta", json(0.0)), "eta");
    LevyMeasure nu;
    if (j.contains("nu") && !j.at("nu").is_null()) {
        Measure m = measure_from_json(j.at("nu"));
        if (!m.is_zero()) nu = LevyMeasure(std::move(m));
    }
    return CharTriplet(a, std::move(nu), eta);
}

json pair_to_json(const GeneratingPair& p) {
    return json{{"gamma", p.gamma}, {"sigma", p.sigma.measure().to_json()}};
}

DistributionSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("a spec is a JSON object");
    if (j.contains("catalog"))
        return catalog_get(j.at("catalog").get<std::string>(), params_from(j.value("params", json()))).spec;
    return DistributionSpec(triplet_from_json(j), j.value("label", std::string("triplet")));
}

json spec_to_json(const DistributionSpec& s) {
    json j{{"label", s.label()}};
    if (s.closed()) j["cumulant"] = s.closed()->tag;
    if (s.triplet()) j["triplet"] = triplet_to_json(*s.triplet());
    if (auto c = s.point_mass_location()) j["point_mass"] = *c;
    return j;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
}

} // namespace freelevy
