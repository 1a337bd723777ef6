#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "kleinjac/divisor.hpp"
#include "kleinjac/jacobian.hpp"

namespace kleinjac {

using Json = nlohmann::ordered_json;

inline Json json_complex(const Complex& z) { return Json::array({z.real(), z.imag()}); }

inline Json json_matrix(const Eigen::MatrixXcd& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(json_complex(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

inline Json json_imat(const IMat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows; ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j).convert_to<long long>());
        rows.push_back(row);
    }
    return rows;
}

inline Json json_vector(const Eigen::VectorXcd& v) {
    Json out = Json::array();
    for (int i = 0; i < v.size(); ++i) out.push_back(json_complex(v(i)));
    return out;
}

inline Json json_point(const SurfacePoint& pt) {
    Json j;
    if (!pt.finite()) {
        j["x"] = pt.at == SurfacePoint::At::InfPlus ? "inf+" : "inf-";
    } else {
        j["x"] = json_complex(pt.x);
    }
    j["sheet"] = pt.sheet;
    return j;
}

inline Json json_divisor(const Divisor& d) {
    auto terms = d.terms;
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        auto key = [](const SurfacePoint& p) {
            double tag = p.at == SurfacePoint::At::Finite ? 0.0
                         : p.at == SurfacePoint::At::InfPlus ? 1.0
                                                             : 2.0;
            return std::make_tuple(tag, p.finite() ? p.x.real() : 0.0,
                                   p.finite() ? p.x.imag() : 0.0, p.sheet);
        };
        return key(a.first) < key(b.first);
    });
    Json out = Json::array();
    for (const auto& [pt, n] : terms) {
        Json t = json_point(pt);
        t["mult"] = n;
        out.push_back(t);
    }
    return out;
}

inline Json json_jacobian_point(const JacobianPoint& z) {
    Json j;
    j["value"] = json_vector(z.value);
    j["residual"] = z.reduction_residual;
    return j;
}

inline Divisor divisor_from_json(const CurveDescriptor& curve, const Json& j,
                                 const Tolerances& tol = Tolerances{}) {
    if (!j.is_array()) fail(ErrorKind::BadInput, "divisor file must contain an array of terms");
    Divisor d;
    for (const auto& t : j) {
        if (!t.contains("x") || !t.contains("mult"))
            fail(ErrorKind::BadInput, "divisor term needs fields x and mult");
        long long mult = t.at("mult").get<long long>();
        const auto& x = t.at("x");
        if (x.is_string()) {
            std::string s = x.get<std::string>();
            if (s == "inf+") divisor_add(d, curve, SurfacePoint::infinity(+1), mult, tol);
            else if (s == "inf-") divisor_add(d, curve, SurfacePoint::infinity(-1), mult, tol);
            else fail(ErrorKind::BadInput, "unknown point symbol \"" + s + "\"");
        } else {
            if (!x.is_array() || x.size() != 2)
                fail(ErrorKind::BadInput, "finite x must be a [re, im] pair");
            int sheet = t.value("sheet", 1);
            Complex xc(x[0].get<double>(), x[1].get<double>());
            divisor_add(d, curve, make_point(curve, xc, sheet, tol), mult, tol);
        }
    }
    return d;
}

inline Divisor divisor_from_file(const CurveDescriptor& curve, const std::string& path,
                                 const Tolerances& tol = Tolerances{}) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::BadInput, "cannot open divisor file " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(ErrorKind::BadInput, std::string("divisor file parse error: ") + e.what());
    }
    return divisor_from_json(curve, j, tol);
}

namespace detail {

inline void flatten_json(const Json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items())
            flatten_json(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array()) {
        std::size_t i = 0;
        for (const auto& v : j) {
            flatten_json(v, prefix + "[" + std::to_string(i) + "]", out);
            ++i;
        }
    } else {
        out << prefix << "," << j.dump() << "\n";
    }
}

} // namespace detail

inline std::string to_csv(const Json& j) {
    std::ostringstream out;
    out << "key,value\n";
    detail::flatten_json(j, "", out);
    return out.str();
}

} // namespace kleinjac
