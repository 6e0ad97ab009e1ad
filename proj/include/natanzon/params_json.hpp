#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "natanzon/params.hpp"

namespace natanzon {

struct ParamsParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline double require_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw ParamsParseError(std::string("missing key \"") + key + "\"");
    const auto& v = j.at(key);
    if (!v.is_number()) throw ParamsParseError(std::string("key \"") + key + "\" must be a number");
    return v.get<double>();
}

inline bool close_rel(double x, double y, double rtol) {
    return std::fabs(x - y) <= rtol * std::max({1.0, std::fabs(x), std::fabs(y)});
}

}  // namespace detail

inline nlohmann::json params_to_json(const NatanzonParams& p) {
    nlohmann::json j;
    j["a"] = p.a;
    j["c0"] = p.c0;
    j["c1"] = p.c1;
    j["f"] = p.f;
    j["h0"] = p.h0;
    j["h1"] = p.h1;
    if (p.preset) {
        j["preset"] = (p.preset->kind == PresetKind::pt2) ? "pt2" : "rm";
        j["A"] = p.preset->A;
        j["B"] = p.preset->B;
        j["alpha"] = p.preset->alpha;
    }
    return j;
}

// Accepts the six coefficients {"a","c0","c1","f","h0","h1"}, optionally
// accompanied by {"preset":"pt2"|"rm","A":...,"B":...,"alpha":...}.  When the
// preset block is present the coefficients are regenerated from the labels
// and must agree with the explicit values to relative 1e-12, otherwise the
// input is rejected as inconsistent.
inline NatanzonParams params_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParamsParseError("parameter document must be a JSON object");
    NatanzonParams p;
    p.a = detail::require_number(j, "a");
    p.c0 = detail::require_number(j, "c0");
    p.c1 = detail::require_number(j, "c1");
    p.f = detail::require_number(j, "f");
    p.h0 = detail::require_number(j, "h0");
    p.h1 = detail::require_number(j, "h1");

    if (j.contains("preset")) {
        const auto& pv = j.at("preset");
        if (!pv.is_string()) throw ParamsParseError("key \"preset\" must be \"pt2\" or \"rm\"");
        const std::string kind = pv.get<std::string>();
        const double A = detail::require_number(j, "A");
        const double B = detail::require_number(j, "B");
        const double alpha = detail::require_number(j, "alpha");
        NatanzonParams regen;
        if (kind == "pt2") {
            regen = preset_pt2(A, B, alpha);
        } else if (kind == "rm") {
            regen = preset_rm(A, B, alpha);
        } else {
            throw ParamsParseError("unknown preset \"" + kind + "\" (expected \"pt2\" or \"rm\")");
        }
        const double rtol = 1e-12;
        bool consistent = detail::close_rel(p.a, regen.a, rtol) &&
                          detail::close_rel(p.c0, regen.c0, rtol) &&
                          detail::close_rel(p.c1, regen.c1, rtol);
        if (consistent) {
            // The labeled family is closed under rigid shifts
            // (f, h0, h1) += eps (a, c0, c1), which move the potential by the
            // constant eps; satellite closures use exactly that freedom.  So
            // the coefficients must match the constructor's anchoring up to
            // one common eps, not exactly.
            const double df = p.f - regen.f, dh0 = p.h0 - regen.h0, dh1 = p.h1 - regen.h1;
            double eps = 0.0;
            const double aa = std::fabs(p.a), ac0 = std::fabs(p.c0), ac1 = std::fabs(p.c1);
            if (aa >= ac0 && aa >= ac1 && aa > 0.0)
                eps = df / p.a;
            else if (ac0 >= ac1 && ac0 > 0.0)
                eps = dh0 / p.c0;
            else if (ac1 > 0.0)
                eps = dh1 / p.c1;
            const auto shift_ok = [&](double d, double geom, double anchor) {
                return std::fabs(d - eps * geom) <=
                       1e-9 * (1.0 + std::fabs(anchor) + std::fabs(eps));
            };
            consistent = shift_ok(df, p.a, regen.f) && shift_ok(dh0, p.c0, regen.h0) &&
                         shift_ok(dh1, p.c1, regen.h1);
        }
        if (!consistent)
            throw ParamsParseError("preset labels disagree with the explicit coefficients");
        p.preset = regen.preset;
    }
    return p;
}

inline NatanzonParams params_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParamsParseError(std::string("invalid JSON: ") + e.what());
    }
    return params_from_json(j);
}

}  // namespace natanzon
