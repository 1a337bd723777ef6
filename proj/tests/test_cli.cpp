#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "kleinjac/cli.hpp"
#include "support/curves.hpp"

using namespace kleinjac;

namespace {

std::string write_temp_divisor(const std::string& name, const Json& j) {
    std::string path = std::string("cli_test_") + name + ".json";
    std::ofstream out(path);
    out << j.dump(2);
    return path;
}

} // namespace

TEST_CASE("analyze command") {
    JobConfig job;
    job.curve_coeffs = testsupport::g1_coeffs();
    job.command = "analyze";
    job.format = "json";
    JobResult r = run_job(job);
    REQUIRE(r.exit_code == 0);
    CHECK(r.payload["curve"]["genus"] == 1);
    CHECK(r.payload["curve"]["branch_points"].size() == 4);
    CHECK(r.payload["homology"]["sigma_fixes_gamma_block"] == true);
    // intersection matrix is the standard form
    auto m = r.payload["homology"]["intersection_matrix"];
    CHECK(m[0][1] == -1);
    CHECK(m[1][0] == 1);
}

TEST_CASE("invalid curve exits with code 2") {
    JobConfig job;
    job.curve_coeffs = {"1", "0", "1"};
    job.command = "analyze";
    JobResult r = run_job(job);
    CHECK(r.exit_code == 2);
    CHECK(r.payload["error"]["kind"] == "OrientableCover");
}

TEST_CASE("periods command carries the quality data") {
    JobConfig job;
    job.curve_coeffs = testsupport::g1_coeffs();
    job.command = "periods";
    job.format = "json";
    JobResult r = run_job(job);
    REQUIRE(r.exit_code == 0);
    CHECK(r.payload["quality"]["im_tau_positive_definite"] == true);
    CHECK(r.payload["sigma_invariance_residual"].get<double>() < 1e-8);
    double im_tau = r.payload["tau"][0][0][1].get<double>();
    CHECK(im_tau > 0.0);
    // tolerance overrides propagate into the report
    JobConfig loose = job;
    loose.tol_lattice = 1e-4;
    JobResult r2 = run_job(loose);
    CHECK(r2.payload["tolerances"]["lattice"].get<double>() == 1e-4);
}

TEST_CASE("deterministic output bytes") {
    JobConfig job;
    job.curve_coeffs = testsupport::g1_coeffs();
    job.command = "periods";
    job.format = "json";
    job.seed = 42;
    JobResult a = run_job(job);
    JobResult b = run_job(job);
    CHECK(a.rendered == b.rendered);
    // and text/json carry the same numbers (spot check tau)
    JobConfig text = job;
    text.format = "text";
    JobResult t = run_job(text);
    CHECK(t.rendered.find(a.payload["tau"][0][0].dump()) != std::string::npos);
}

TEST_CASE("abel-jacobi command on a principal divisor") {
    Json div = Json::array();
    div.push_back(Json{{"x", Json::array({3.0, 0.0})}, {"sheet", 1}, {"mult", 1}});
    div.push_back(Json{{"x", Json::array({3.0, 0.0})}, {"sheet", -1}, {"mult", 1}});
    div.push_back(Json{{"x", "inf+"}, {"mult", -1}});
    div.push_back(Json{{"x", "inf-"}, {"mult", -1}});
    std::string path = write_temp_divisor("principal", div);

    JobConfig job;
    job.curve_coeffs = testsupport::g1_coeffs();
    job.command = "aj";
    job.divisor_path = path;
    job.format = "json";
    JobResult r = run_job(job);
    std::remove(path.c_str());
    REQUIRE(r.exit_code == 0);
    CHECK(r.payload["principal"]["verdict"] == true);
    CHECK(r.payload["sigma1_fixed"]["verdict"] == true);
    CHECK(r.payload["point"]["value"].size() == 1);
}

TEST_CASE("degree precondition exits with code 3") {
    Json div = Json::array();
    div.push_back(Json{{"x", Json::array({0.5, 0.5})}, {"sheet", 1}, {"mult", 1}});
    std::string path = write_temp_divisor("degree1", div);
    JobConfig job;
    job.curve_coeffs = testsupport::g1_coeffs();
    job.command = "aj";
    job.divisor_path = path;
    JobResult r = run_job(job);
    std::remove(path.c_str());
    CHECK(r.exit_code == 3);
    CHECK(r.payload["error"]["kind"] == "DegreeNonzero");
}

TEST_CASE("fixed points command and the genus bound") {
    JobConfig job;
    job.curve_coeffs = testsupport::g1_coeffs();
    job.command = "fixed-points";
    job.format = "json";
    JobResult r = run_job(job);
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.payload["component_count"].get<int>() >= 1);
    // the origin is always a representative
    bool origin = false;
    for (const auto& rep : r.payload["component_representatives"]) {
        double re = rep["value"][0][0].get<double>();
        double im = rep["value"][0][1].get<double>();
        if (std::abs(re) < 1e-9 && std::abs(im) < 1e-9) origin = true;
        CHECK(rep["fixedness_residual"].get<double>() < 1e-8);
    }
    CHECK(origin);

    JobConfig big = job;
    big.curve_coeffs = testsupport::g4_coeffs();
    JobResult rb = run_job(big);
    CHECK(rb.exit_code == 4);
    CHECK(rb.payload["error"]["kind"] == "GenusTooLarge");
}

TEST_CASE("harmonic command validates coefficients") {
    JobConfig job;
    job.curve_coeffs = testsupport::g1_coeffs();
    job.command = "harmonic";
    job.format = "json";
    job.harmonic_coeffs = {"1.0,0.0"};
    JobResult r = run_job(job);
    REQUIRE(r.exit_code == 0);
    CHECK(r.payload["real_dimension"] == 1);
    CHECK(r.payload["roundtrip_error"].get<double>() == 0.0);

    JobConfig bad = job;
    bad.harmonic_coeffs = {"0.0,1.0"};
    JobResult rb = run_job(bad);
    CHECK(rb.exit_code == 3);
    CHECK(rb.payload["error"]["kind"] == "NotSigmaInvariant");
}

TEST_CASE("principal command on the quotient") {
    Json div = Json::array();
    div.push_back(Json{{"x", Json::array({3.0, 0.0})}, {"sheet", 1}, {"mult", 2}});
    div.push_back(Json{{"x", "inf+"}, {"mult", -2}});
    std::string path = write_temp_divisor("quotient", div);
    JobConfig job;
    job.curve_coeffs = testsupport::g1_coeffs();
    job.command = "principal";
    job.divisor_path = path;
    job.quotient = true;
    job.format = "json";
    JobResult r = run_job(job);
    std::remove(path.c_str());
    REQUIRE(r.exit_code == 0);
    CHECK(r.payload["principal"]["verdict"] == true);
}

TEST_CASE("unparsable harmonic coefficients exit with code 3") {
    JobConfig job;
    job.curve_coeffs = testsupport::g1_coeffs();
    job.command = "harmonic";
    job.harmonic_coeffs = {"nope"};
    JobResult r = run_job(job);
    CHECK(r.exit_code == 3);
    CHECK(r.payload["error"]["kind"] == "BadInput");
}

TEST_CASE("unknown command exits with code 3") {
    JobConfig job;
    job.curve_coeffs = testsupport::g1_coeffs();
    job.command = "frobnicate";
    JobResult r = run_job(job);
    CHECK(r.exit_code == 3);
}

TEST_CASE("csv output flattens the json leaves") {
    JobConfig job;
    job.curve_coeffs = testsupport::g1_coeffs();
    job.command = "analyze";
    job.format = "csv";
    JobResult r = run_job(job);
    REQUIRE(r.exit_code == 0);
    CHECK(r.rendered.rfind("key,value\n", 0) == 0);
    CHECK(r.rendered.find("curve.genus,1") != std::string::npos);
}
