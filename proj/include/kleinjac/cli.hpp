#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kleinjac/principality.hpp"
#include "kleinjac/serialize.hpp"

namespace kleinjac {

// One run of the command-line pipeline. Everything the commands need is
// carried here so runs are reproducible from the flag set alone.
struct JobConfig {
    std::vector<std::string> curve_coeffs;  // rational strings, lowest degree first
    std::string command = "analyze";        // analyze|periods|aj|principal|fixed-points|harmonic
    std::string divisor_path;
    std::string format = "text";            // json|csv|text
    bool quotient = false;                  // principal: interpret the divisor downstairs
    std::vector<std::string> harmonic_coeffs;  // "re,im" entries for the harmonic command
    std::optional<double> tol_quad;
    std::optional<double> tol_lattice;
    std::uint64_t seed = 0;
};

struct JobResult {
    int exit_code = 0;
    Json payload;
    std::string rendered;
};

namespace detail {

inline int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::OddDegree:
        case ErrorKind::DegreeTooSmall:
        case ErrorKind::RealBranchPoint:
        case ErrorKind::OrientableCover:
        case ErrorKind::RepeatedRoot:
            return 2;
        case ErrorKind::DegreeNonzero:
        case ErrorKind::BranchValue:
        case ErrorKind::BadInput:
        case ErrorKind::NotSigmaInvariant:
            return 3;
        case ErrorKind::GenusTooLarge:
            return 4;
        default:
            return 1;
    }
}

struct Pipeline {
    CurveDescriptor curve;
    HomologyBasis basis;
    SigmaHomologyAction action;
    bool adapted_identity = false;
};

inline Pipeline run_homology(const JobConfig& job, const Config& config) {
    Pipeline p;
    p.curve = validate_curve_strings(job.curve_coeffs, config.tol);
    HomologyBasis raw = canonical_homology_basis(p.curve, config);
    SigmaHomologyAction raw_action = sigma_homology_matrix(p.curve, raw, config.tol);
    auto adapted = adapt_basis_to_sigma(p.curve, raw, raw_action, config.tol);
    p.adapted_identity = adapted.first.cycles.size() == raw.cycles.size() &&
                         adapted.second.matrix == raw_action.matrix;
    p.basis = std::move(adapted.first);
    p.action = std::move(adapted.second);
    return p;
}

inline Json curve_report(const CurveDescriptor& curve) {
    Json j;
    Json coeffs = Json::array();
    for (const auto& c : curve.coeffs) {
        std::ostringstream os;
        os << c;
        coeffs.push_back(os.str());
    }
    j["coefficients"] = coeffs;
    j["degree"] = curve.degree();
    j["genus"] = curve.genus;
    Json branch = Json::array();
    for (const auto& b : curve.branch_points) branch.push_back(json_complex(b));
    j["branch_points"] = branch;
    j["validity"] = Json{{"even_degree", curve.validity.even_degree},
                         {"no_real_roots", curve.validity.no_real_roots},
                         {"negative_leading", curve.validity.negative_leading},
                         {"squarefree", curve.validity.squarefree}};
    return j;
}

inline Json homology_report(const Pipeline& p) {
    Json j;
    j["intersection_matrix"] = json_imat(p.basis.intersection);
    j["sigma_action"] = json_imat(p.action.matrix);
    int g = p.basis.genus();
    bool fixes = true;
    for (int k = 0; k < g; ++k)
        for (int i = 0; i < 2 * g; ++i)
            if (p.action.matrix(i, k) != (i == k ? 1 : 0)) fixes = false;
    j["sigma_fixes_gamma_block"] = fixes;
    j["adaptation_was_identity"] = p.adapted_identity;
    return j;
}

inline Json tolerance_report(const Tolerances& tol) {
    return Json{{"quad_rel", tol.quad_rel},
                {"lattice", tol.lattice},
                {"sigma_invariance", tol.sigma_invariance},
                {"tau_symmetry", tol.tau_symmetry},
                {"gamma_block", tol.gamma_block}};
}

inline Json quality_report(const QualityReport& q) {
    return Json{{"gamma_block_defect", q.gamma_block_defect},
                {"tau_symmetry_defect", q.tau_symmetry_defect},
                {"min_im_tau_eigenvalue", q.min_im_tau_eigenvalue},
                {"im_tau_positive_definite", q.im_tau_positive_definite},
                {"gamma_condition", q.gamma_condition}};
}

inline std::string render_text(const Json& j, int indent = 0) {
    std::ostringstream out;
    std::string pad(static_cast<std::size_t>(indent), ' ');
    for (const auto& [k, v] : j.items()) {
        if (v.is_object()) {
            out << pad << k << ":\n" << render_text(v, indent + 2);
        } else {
            out << pad << k << ": " << v.dump() << "\n";
        }
    }
    return out.str();
}

} // namespace detail

inline JobResult run_job(const JobConfig& job) {
    Config config;
    config.seed = job.seed;
    if (job.tol_quad) config.tol.quad_rel = *job.tol_quad;
    if (job.tol_lattice) config.tol.lattice = *job.tol_lattice;
    const Tolerances& tol = config.tol;

    JobResult result;
    Json& out = result.payload;
    out["command"] = job.command;
    out["seed"] = job.seed;
    out["tolerances"] = detail::tolerance_report(tol);

    try {
        if (job.command == "analyze") {
            detail::Pipeline p = detail::run_homology(job, config);
            out["curve"] = detail::curve_report(p.curve);
            out["homology"] = detail::homology_report(p);
        } else if (job.command == "periods") {
            detail::Pipeline p = detail::run_homology(job, config);
            PeriodData periods = period_matrix(p.curve, p.basis, tol);
            out["curve"] = detail::curve_report(p.curve);
            out["homology"] = detail::homology_report(p);
            out["full_periods"] = json_matrix(periods.full);
            out["normalization"] = json_matrix(periods.normalization);
            out["tau"] = json_matrix(periods.tau);
            out["quality"] = detail::quality_report(periods.quality);
            out["sigma_invariance_residual"] =
                sigma_invariance_residual(p.curve, p.basis, periods, tol);
        } else if (job.command == "aj" || job.command == "principal") {
            if (job.divisor_path.empty())
                fail(ErrorKind::BadInput, "command needs --divisor <file>");
            detail::Pipeline p = detail::run_homology(job, config);
            PeriodData periods = period_matrix(p.curve, p.basis, tol);
            Lattice lat = lattice_from_periods(periods, tol);
            SurfacePoint base = default_basepoint(p.curve, tol);
            Divisor d = divisor_from_file(p.curve, job.divisor_path, tol);
            out["curve"] = detail::curve_report(p.curve);
            if (job.command == "principal" && job.quotient) {
                QuotientDivisor q;
                for (const auto& [pt, n] : d.terms) quotient_add(q, p.curve, pt, n, tol);
                out["divisor"] = json_divisor(pullback(p.curve, q, tol));
                out["divisor_degree"] = degree(q);
                PrincipalityResult pr = is_principal_Y(p.curve, periods, lat, q, base, tol);
                out["principal"] = Json{{"verdict", pr.principal},
                                        {"residual", pr.residual},
                                        {"threshold", tol.lattice},
                                        {"reason", pr.reason}};
            } else {
                out["divisor"] = json_divisor(d);
                out["divisor_degree"] = degree(d);
                if (job.command == "aj") {
                    JacobianPoint z = abel_jacobi(p.curve, periods, lat, d, base, tol);
                    out["point"] = json_jacobian_point(z);
                    FixednessResult fr = is_sigma1_fixed(lat, z, tol);
                    out["sigma1_fixed"] = Json{{"verdict", fr.fixed},
                                               {"residual", fr.residual},
                                               {"threshold", tol.lattice}};
                    out["principal"] = Json{{"verdict", z.value.norm() < tol.lattice},
                                            {"residual", z.value.norm()},
                                            {"threshold", tol.lattice}};
                } else {
                    PrincipalityResult pr = is_principal_X(p.curve, periods, lat, d, base, tol);
                    out["principal"] = Json{{"verdict", pr.principal},
                                            {"residual", pr.residual},
                                            {"threshold", tol.lattice},
                                            {"reason", pr.reason}};
                }
            }
        } else if (job.command == "fixed-points") {
            detail::Pipeline p = detail::run_homology(job, config);
            PeriodData periods = period_matrix(p.curve, p.basis, tol);
            Lattice lat = lattice_from_periods(periods, tol);
            std::vector<JacobianPoint> reps = fixed_component_representatives(lat, tol);
            out["curve"] = detail::curve_report(p.curve);
            Json arr = Json::array();
            for (const auto& r : reps) {
                Json e = json_jacobian_point(r);
                e["fixedness_residual"] = is_sigma1_fixed(lat, r, tol).residual;
                arr.push_back(e);
            }
            out["component_representatives"] = arr;
            out["component_count"] = reps.size();
        } else if (job.command == "harmonic") {
            detail::Pipeline p = detail::run_homology(job, config);
            PeriodData periods = period_matrix(p.curve, p.basis, tol);
            out["curve"] = detail::curve_report(p.curve);
            out["real_dimension"] = p.curve.genus;
            out["sigma_invariance_residual"] =
                sigma_invariance_residual(p.curve, p.basis, periods, tol);
            if (!job.harmonic_coeffs.empty()) {
                if (static_cast<int>(job.harmonic_coeffs.size()) != p.curve.genus)
                    fail(ErrorKind::BadInput, "expected one coefficient per form");
                Eigen::VectorXcd coeffs(p.curve.genus);
                for (int i = 0; i < p.curve.genus; ++i) {
                    const std::string& s = job.harmonic_coeffs[static_cast<std::size_t>(i)];
                    try {
                        auto comma = s.find(',');
                        double re = std::stod(s.substr(0, comma));
                        double im =
                            comma == std::string::npos ? 0.0 : std::stod(s.substr(comma + 1));
                        coeffs(i) = Complex(re, im);
                    } catch (const std::exception&) {
                        fail(ErrorKind::BadInput, "cannot parse coefficient \"" + s + "\"");
                    }
                }
                HarmonicFormY eta = eta_from_omega(coeffs, tol);
                Json ec = Json::array();
                for (int i = 0; i < eta.coeffs.size(); ++i) ec.push_back(eta.coeffs(i));
                out["eta_coefficients"] = ec;
                Eigen::VectorXcd round = omega_from_eta(eta);
                out["roundtrip_error"] = (round - coeffs.real().cast<Complex>()).norm();
            }
        } else {
            fail(ErrorKind::BadInput, "unknown command \"" + job.command + "\"");
        }
    } catch (const Error& e) {
        result.exit_code = detail::exit_code_for(e.kind());
        out["error"] = Json{{"kind", error_kind_name(e.kind())}, {"message", e.what()}};
    } catch (const std::exception& e) {
        result.exit_code = 1;
        out["error"] = Json{{"kind", "Internal"}, {"message", e.what()}};
    }

    if (job.format == "json") {
        result.rendered = out.dump(2) + "\n";
    } else if (job.format == "csv") {
        result.rendered = to_csv(out);
    } else {
        result.rendered = detail::render_text(out);
    }
    return result;
}

} // namespace kleinjac
