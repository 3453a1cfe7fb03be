#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "freelevy/cli.hpp"
#include "freelevy/serialization.hpp"

using namespace freelevy;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> read_csv(const std::string& text, std::string* header = nullptr) {
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        std::vector<double> row;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

json error_of(const Run& r) {
    const auto j = json::parse(r.err);
    REQUIRE(j.contains("error"));
    CHECK(j["error"]["exit_code"] == r.code);
    return j["error"];
}

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "freelevy_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

constexpr double pi = std::numbers::pi;

} // namespace

TEST_CASE("density example") {
    const auto r = run({"density", "--catalog", "free_gamma", "--params", "t=1,c=1", "--range", "0:6", "--n", "601"});
    REQUIRE(r.code == 0);
    std::string header;
    const auto rows = read_csv(r.out, &header);
    CHECK(header == "x,f");
    REQUIRE(rows.size() == 601);
    std::size_t best = 0;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (std::abs(rows[i][0] - 1.0) < std::abs(rows[best][0] - 1.0)) best = i;
    CHECK(rows[best][1] == doctest::Approx(0.318310).epsilon(1e-6));
    CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("density as JSON and to a file") {
    const auto r = run({"density", "--catalog", "semicircle", "--range", "-3:3", "--n", "7", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["x"].size() == 7);
    CHECK(j["f"][3].get<double>() == doctest::Approx(1.0 / pi).epsilon(1e-6));

    const auto path = scratch("density.csv");
    const auto f = run({"-o", path.string(), "density", "--catalog", "semicircle", "--range", "-3:3", "--n", "7"});
    REQUIRE(f.code == 0);
    CHECK(f.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(read_csv(ss.str()).size() == 7);
}

TEST_CASE("bdlp example") {
    const auto r = run({"bdlp", "--catalog", "free_gamma", "--params", "t=1,c=1", "--emit-levy"});
    REQUIRE(r.code == 0);
    const auto split = r.out.find("\nx,density\n");
    REQUIRE(split != std::string::npos);
    const auto j = json::parse(r.out.substr(0, split));
    CHECK(j["cumulant"] == "z/sqrt(1-4z)");
    CHECK(j["closed_form_sup_distance"].get<double>() < 1e-12);
    const auto rows = read_csv(r.out.substr(split + 1));
    CHECK(rows.size() == 391);
    for (const auto& row : rows) {
        const double x = row[0];
        CHECK(row[1] == doctest::Approx(1.0 / (pi * x * std::sqrt(x * (4 - x)))).epsilon(1e-6));
    }
}

TEST_CASE("bdlp Lévy CSV to a file and the process variant") {
    const auto path = scratch("levy.csv");
    const auto r = run({"bdlp", "--catalog", "mu_p", "--params", "p=0.5", "--emit-levy", "--levy-out", path.string(),
                        "--levy-range", "0.1:0.9", "--levy-n", "9"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["cumulant"] == "p*z*(1-z)^(p-1)");
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(read_csv(ss.str()).size() == 9);

    const auto h = run({"bdlp", "--catalog", "semicircle", "--H", "0.5"});
    REQUIRE(h.code == 0);
    const auto grid = json::parse(h.out)["cumulant_on_grid"];
    for (const auto& row : grid) {
        const cplx z(row[0].get<double>(), row[1].get<double>());
        const cplx c(row[2].get<double>(), row[3].get<double>());
        CHECK(std::abs(c - 0.5 * 2.0 * z * z) < 1e-12);
    }
}

TEST_CASE("sd-test example") {
    const auto r = run({"sd-test", "--triplet", R"({"a":0,"eta":1,"nu":{"kind":"atoms","atoms":[[1,1]]}})"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["is_sd"] == false);
    CHECK(j["diagnostics"].is_array());
    const auto g = run({"sd-test", "--catalog", "free_gamma", "--method", "analytic"});
    REQUIRE(g.code == 0);
    CHECK(json::parse(g.out)["is_sd"] == true);
}

TEST_CASE("cumulant CSV") {
    std::string header;
    const auto r = run({"cumulant", "--catalog", "semicircle", "--params", "eta=1,a=0"});
    REQUIRE(r.code == 0);
    const auto rows = read_csv(r.out, &header);
    CHECK(header == "re_z,im_z,re_C,im_C");
    CHECK(rows.size() == 25);
    for (const auto& row : rows) {
        CHECK(row[2] == row[0]);
        CHECK(row[3] == row[1]);
    }
    const auto g = run({"cumulant", "--catalog", "delta", "--re", "-1:1", "--im", "-2:-1", "--n-re", "3", "--n-im", "2"});
    REQUIRE(g.code == 0);
    CHECK(read_csv(g.out).size() == 6);
}

TEST_CASE("convolve, dilate, marginal and increment") {
    const auto c = run({"convolve", "--catalog", "semicircle", "--other-catalog", "semicircle", "--density", "-1:1",
                        "--density-n", "3"});
    REQUIRE(c.code == 0);
    const auto j = json::parse(c.out);
    CHECK(j["density"]["f"][1].get<double>() == doctest::Approx(std::sqrt(2.0) / (2 * pi)).epsilon(1e-6));

    const auto d = run({"dilate", "--catalog", "semicircle", "--c", "2"});
    REQUIRE(d.code == 0);
    CHECK(json::parse(d.out)["triplet"]["a"] == 4.0);

    const auto m = run({"marginal", "--catalog", "semicircle", "--H", "0.5", "--t", "4"});
    REQUIRE(m.code == 0);
    CHECK(json::parse(m.out)["triplet"]["a"].get<double>() == doctest::Approx(4.0));

    const auto i = run({"increment", "--catalog", "semicircle", "--H", "0.5", "--s", "1", "--t", "4"});
    REQUIRE(i.code == 0);
    for (const auto& row : json::parse(i.out)["cumulant_on_grid"]) {
        const cplx z(row[0].get<double>(), row[1].get<double>());
        CHECK(std::abs(cplx(row[2].get<double>(), row[3].get<double>()) - 3.0 * z * z) < 1e-12);
    }
}

TEST_CASE("bp round trip") {
    const std::string t = R"({"a":0,"eta":1,"nu":{"kind":"atoms","atoms":[[1,1]]}})";
    const auto f = run({"bp", "--triplet", t});
    REQUIRE(f.code == 0);
    const auto j = json::parse(f.out);
    CHECK(j["triplet"]["eta"] == 1.0);
    const auto b = run({"bp", "--inverse", "--spec", j["triplet"].dump()});
    REQUIRE(b.code == 0);
    CHECK(json::parse(b.out)["classical_triplet"]["eta"] == 1.0);
    const auto u = run({"bp", "--inverse", "--catalog", "mu_p", "--params", "p=-0.5"});
    CHECK(u.code == 2);
    CHECK(error_of(u)["type"] == "UnsupportedRepresentation");
}

TEST_CASE("integrate") {
    const auto r = run({"integrate", "--process", "levy", "--catalog", "semicircle", "--params", "eta=0.5,a=2", "--f", "exp",
                        "--theta", "-1", "--interval", "0:inf"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    for (const auto& row : j["cumulant_on_grid"]) {
        const cplx z(row[0].get<double>(), row[1].get<double>());
        CHECK(std::abs(cplx(row[2].get<double>(), row[3].get<double>()) - (0.5 * z + z * z)) < 1e-8);
    }
    const auto s = run({"integrate", "--catalog", "free_gamma", "--H", "0.5", "--f", "const", "--interval", "0:2"});
    REQUIRE(s.code == 0);
    CHECK(json::parse(s.out)["depth"].get<int>() >= 2);
    CHECK(run({"integrate", "--catalog", "free_gamma", "--f", "sin"}).code == 1);
}

TEST_CASE("rmt report and eigenvalue dumps") {
    const auto prefix = scratch("eig_").string();
    const auto r = run({"rmt", "--model", "wishart(1)", "--n", "80", "--seeds", "3-4", "--eigen-prefix", prefix});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["per_seed"].size() == 2);
    CHECK(j["median_ks"].get<double>() < 0.2);
    std::ifstream in(prefix + "4.csv");
    std::string first;
    std::getline(in, first);
    CHECK(first == "# model=wishart(1) n=80 seed=4");
    CHECK(run({"rmt", "--seeds", "5-2"}).code == 1);
}

TEST_CASE("verify") {
    const auto r = run({"verify", "--only", "7,9"});
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS") == 0);
    CHECK(r.out.find("2/2 criteria passed") != std::string::npos);
    CHECK(run({"verify", "--only", "7,9"}).out == r.out);
}

TEST_CASE("exit codes and error JSON") {
    const auto h = run({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("re_z,im_z,re_C,im_C") != std::string::npos);

    auto e = run({"density", "--catalog", "nope"});
    CHECK(e.code == 1);
    CHECK(error_of(e)["type"] == "ConfigError");

    e = run({"density", "--catalog", "semicircle", "--triplet", R"({"a":1})"});
    CHECK(e.code == 1);
    e = run({"density"});
    CHECK(e.code == 1);
    e = run({"density", "--catalog", "semicircle", "--bogus"});
    CHECK(e.code == 1);
    error_of(e);
    e = run({"density", "--spec", "{not json"});
    CHECK(e.code == 1);
    e = run({"density", "--spec", "@/nonexistent/file.json"});
    CHECK(e.code == 1);

    e = run({"bdlp", "--catalog", "free_poisson"});
    CHECK(e.code == 2);
    CHECK(error_of(e)["type"] == "RejectionError");
    e = run({"dilate", "--catalog", "semicircle", "--c", "0"});
    CHECK(e.code == 2);
    e = run({"density", "--catalog", "free_gamma", "--params", "c=-1"});
    CHECK(e.code == 2);
    CHECK(error_of(e)["type"] == "DomainError");

    e = run({"density", "--catalog", "free_gamma", "--range", "0.5:5", "--n", "20", "--max-iter", "1"});
    CHECK(e.code == 3);
    CHECK(error_of(e)["type"] == "ConvergenceError");
    e = run({"integrate", "--catalog", "free_gamma", "--f", "power", "--theta", "-1", "--interval", "1:2", "--max-depth", "2",
             "--tol", "1e-15"});
    CHECK(e.code == 3);
    CHECK(error_of(e).contains("trace"));
}

TEST_CASE("serialization round trip") {
    const std::vector<std::string> texts{
        R"({"a":0.5,"eta":-1,"nu":{"kind":"atoms","atoms":[[1,2],[-0.5,0.25]]}})",
        R"({"a":0,"eta":0.2,"nu":{"kind":"density","name":"free_gamma","params":{"t":1,"c":1}}})",
        R"({"a":0,"eta":0,"nu":{"kind":"sum","parts":[{"kind":"atoms","atoms":[[2,1]]},{"kind":"scale","factor":2,"base":{"kind":"density","name":"mu_p","params":{"p":0.5}}}]}})",
        R"({"a":1,"eta":0,"nu":{"kind":"density","terms":[{"coeff":1,"power":-1.5,"log_power":0}],"support":[0,1]}})",
    };
    for (const auto& t : texts) {
        CAPTURE(t);
        const auto a = triplet_from_json(parse_json(t));
        const auto b = triplet_from_json(triplet_to_json(a));
        CHECK(bitwise_equal(a, b));
    }
    const auto s = spec_from_json(parse_json(R"({"catalog":"free_gamma","params":{"t":2}})"));
    CHECK(s.closed());
    CHECK(s.triplet());
    CHECK_THROWS_AS(parse_json("[1,"), ConfigError);
    CHECK_THROWS_AS(measure_from_json(parse_json(R"({"kind":"weird"})")), ConfigError);
}
