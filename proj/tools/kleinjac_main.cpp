#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kleinjac/cli.hpp"

namespace {

std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == ';') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jacobian computations on imaginary hyperelliptic curves and their "
                 "nonorientable quotients"};

    std::string curve_spec;
    std::string command = "analyze";
    std::string divisor_path;
    std::string format = "text";
    std::vector<std::string> harmonic_coeffs;
    bool quotient = false;
    double tol_quad = -1.0, tol_lattice = -1.0;
    std::uint64_t seed = 0;

    app.add_option("--curve", curve_spec,
                   "coefficients of p, lowest degree first, rationals like -4/1 (comma or "
                   "space separated)")
        ->required();
    app.add_option("--command", command,
                   "analyze | periods | aj | principal | fixed-points | harmonic");
    app.add_option("--divisor", divisor_path, "path to a divisor JSON file");
    app.add_option("--format", format, "json | csv | text");
    app.add_flag("--quotient", quotient,
                 "principal: interpret the divisor on the quotient surface");
    app.add_option("--coeffs", harmonic_coeffs,
                   "harmonic: complex coefficients re,im against the adapted basis");
    app.add_option("--tol-quad", tol_quad, "relative quadrature tolerance");
    app.add_option("--tol-lattice", tol_lattice, "lattice-distance threshold");
    app.add_option("--seed", seed, "seed for deterministic routing jitter");

    CLI11_PARSE(app, argc, argv);

    kleinjac::JobConfig job;
    job.curve_coeffs = split_tokens(curve_spec);
    job.command = command;
    job.divisor_path = divisor_path;
    job.format = format;
    job.quotient = quotient;
    job.harmonic_coeffs = harmonic_coeffs;
    if (tol_quad > 0.0) job.tol_quad = tol_quad;
    if (tol_lattice > 0.0) job.tol_lattice = tol_lattice;
    job.seed = seed;

    kleinjac::JobResult result = kleinjac::run_job(job);
    std::cout << result.rendered;
    return result.exit_code;
}
