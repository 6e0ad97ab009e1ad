#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "natanzon/io.hpp"
#include "natanzon/ladder.hpp"
#include "natanzon/params.hpp"
#include "natanzon/params_json.hpp"
#include "natanzon/spectrum.hpp"
#include "natanzon/susy.hpp"
#include "natanzon/verify.hpp"
#include "natanzon/wavefunction.hpp"
#include "natanzon/zmap.hpp"

namespace {

using namespace natanzon;

struct Common {
    std::string preset;
    double A = std::nan(""), B = std::nan(""), alpha = std::nan("");
    std::string params_file;
    int grid_n = 0;  // 0: NATANZON_GRID_N or built-in default
    int samples = 1001;
    std::string format = "csv";
    std::string out;
};

void add_param_source(CLI::App* sub, Common& c) {
    sub->add_option("--preset", c.preset, "Parameter family: pt2 or rm")
        ->check(CLI::IsMember({"pt2", "rm"}));
    sub->add_option("--A,-A", c.A, "Family label A (with --preset)");
    sub->add_option("--B,-B", c.B, "Family label B (with --preset)");
    sub->add_option("--alpha", c.alpha, "Family scale alpha (with --preset)");
    sub->add_option("--params", c.params_file, "JSON parameter file (alternative to --preset)");
    sub->add_option("--grid-n", c.grid_n,
                    "Coordinate-table size (overrides the NATANZON_GRID_N environment variable)");
    sub->add_option("--out", c.out, "Write the output to this file instead of stdout");
}

void add_format(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "Output format: csv (default) or json")
        ->check(CLI::IsMember({"csv", "json"}));
}

void add_samples(CLI::App* sub, Common& c) {
    sub->add_option("--samples", c.samples, "Number of curve sample points (default 1001)")
        ->check(CLI::Range(16, 10000000));
}

NatanzonParams resolve_params(const Common& c) {
    const bool has_preset = !c.preset.empty();
    const bool has_file = !c.params_file.empty();
    if (has_preset == has_file)
        throw ParamsParseError("exactly one parameter source is required: --preset or --params");
    if (has_file) {
        std::ifstream in(c.params_file);
        if (!in) throw ParamsParseError("cannot open parameter file: " + c.params_file);
        std::ostringstream buf;
        buf << in.rdbuf();
        return params_from_json_text(buf.str());
    }
    if (std::isnan(c.A) || std::isnan(c.B) || std::isnan(c.alpha))
        throw ParamsParseError("--preset requires all of --A, --B, --alpha");
    return c.preset == "pt2" ? preset_pt2(c.A, c.B, c.alpha) : preset_rm(c.A, c.B, c.alpha);
}

std::shared_ptr<const ZMap> make_map(const NatanzonParams& p, const Common& c) {
    return c.grid_n > 0 ? std::make_shared<const ZMap>(p, c.grid_n)
                        : std::make_shared<const ZMap>(p);
}

void emit(const std::string& text, const Common& c) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(c.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + c.out);
    out << text;
}

nlohmann::json level_to_json(const Level& lev) {
    return {{"nu", lev.nu},   {"E", lev.E}, {"alpha", lev.alpha}, {"beta", lev.beta},
            {"delta", lev.delta}, {"p", lev.p}, {"q", lev.q},         {"m", lev.m}};
}

int cmd_spectrum(const Common& c) {
    const NatanzonParams p = resolve_params(c);
    const auto levels = enumerate_levels(p);
    std::ostringstream os;
    if (c.format == "csv") {
        csv_header(os, {"nu", "E", "alpha", "beta", "delta", "p", "q", "m"});
        for (const Level& lev : levels) {
            os << lev.nu << ',';
            csv_row(os, {lev.E, lev.alpha, lev.beta, lev.delta, lev.p, lev.q, lev.m});
        }
    } else {
        nlohmann::json j = nlohmann::json::array();
        for (const Level& lev : levels) j.push_back(level_to_json(lev));
        os << j.dump(2) << '\n';
    }
    emit(os.str(), c);
    return 0;
}

int cmd_wavefunction(const Common& c, int nu) {
    const NatanzonParams p = resolve_params(c);
    auto map = make_map(p, c);
    const BoundState st = build_state(map, p, nu);
    const double lo = map->r_lo(), hi = map->r_hi();
    std::ostringstream os;
    nlohmann::json arr = nlohmann::json::array();
    if (c.format == "csv") csv_header(os, {"r", "phi", "dphi_dr"});
    for (int i = 0; i < c.samples; ++i) {
        const double r = lo + (hi - lo) * static_cast<double>(i) / (c.samples - 1);
        const PhiEval e = eval_state(st, r);
        if (c.format == "csv") {
            csv_row(os, {r, e.value, e.d1});
        } else {
            arr.push_back({{"r", r}, {"phi", e.value}, {"dphi_dr", e.d1}});
        }
    }
    if (c.format == "json") os << arr.dump(2) << '\n';
    emit(os.str(), c);
    return 0;
}

int cmd_zmap(const Common& c) {
    const NatanzonParams p = resolve_params(c);
    auto map = make_map(p, c);
    const double lo = map->r_lo(), hi = map->r_hi();
    std::ostringstream os;
    nlohmann::json arr = nlohmann::json::array();
    if (c.format == "csv") csv_header(os, {"r", "z", "dz_dr"});
    for (int i = 0; i < c.samples; ++i) {
        const double r = lo + (hi - lo) * static_cast<double>(i) / (c.samples - 1);
        const double z = map->z_of_r(r);
        const double w = dzdr(p, z);
        if (c.format == "csv") {
            csv_row(os, {r, z, w});
        } else {
            arr.push_back({{"r", r}, {"z", z}, {"dz_dr", w}});
        }
    }
    if (c.format == "json") os << arr.dump(2) << '\n';
    emit(os.str(), c);
    return 0;
}

SatelliteClosure parse_closure(const std::string& text) {
    if (text == "isospectral") return SatelliteClosure::isospectral();
    if (text == "ground-zero") return SatelliteClosure::ground_zero();
    if (text.rfind("h1s=", 0) == 0) {
        std::size_t used = 0;
        const double v = std::stod(text.substr(4), &used);
        if (used != text.size() - 4) throw std::invalid_argument("malformed closure value: " + text);
        return SatelliteClosure::fix_h1s(v);
    }
    throw std::invalid_argument("unknown closure: " + text +
                                " (expected isospectral, ground-zero, or h1s=<value>)");
}

const char* closure_name(const SatelliteClosure& cl) {
    switch (cl.kind) {
        case SatelliteClosure::Kind::isospectral: return "isospectral";
        case SatelliteClosure::Kind::ground_zero: return "ground-zero";
        default: return "h1s";
    }
}

nlohmann::json step_to_json(const SatelliteStep& s) {
    nlohmann::json j;
    j["direction"] = (s.direction == LadderDirection::raising) ? "up" : "down";
    j["closure"] = closure_name(s.closure);
    if (s.closure.kind == SatelliteClosure::Kind::fix_h1s) j["h1s_value"] = s.closure.h1s_value;
    j["source"] = {{"nu", s.source.nu}, {"E", s.source.E}};
    j["target_nu"] = s.target_nu;
    j["E_target"] = s.E_target;
    j["coefficient"] = s.coefficient;
    j["alpha1"] = s.alpha1;
    j["beta1"] = s.beta1;
    j["delta1"] = s.delta1;
    j["params"] = params_to_json(s.result);
    if (s.labels) {
        nlohmann::json lbl;
        lbl["family"] = (s.labels->kind == PresetKind::pt2) ? "pt2" : "rm";
        lbl["A_S"] = s.labels->A_S;
        lbl["B_S"] = s.labels->B_S;
        if (s.labels->B_S_quotient) {
            lbl["B_S_quotient"] = *s.labels->B_S_quotient;
            lbl["quotient_agrees"] = s.labels->quotient_agrees;
        }
        j["labels"] = lbl;
    }
    return j;
}

int cmd_satellite(const Common& c, const std::string& direction, const std::string& closure_text,
                  int start_nu, int steps) {
    if (c.format == "csv")
        throw std::invalid_argument("satellite emits structured results; use --format json");
    const NatanzonParams p = resolve_params(c);
    const LadderDirection dir =
        (direction == "up") ? LadderDirection::raising : LadderDirection::lowering;
    const SatelliteClosure closure = parse_closure(closure_text);
    const SatelliteChain chain = satellite_chain(p, start_nu, steps, dir, closure);
    nlohmann::json j;
    j["steps"] = nlohmann::json::array();
    for (const SatelliteStep& s : chain.steps) j["steps"].push_back(step_to_json(s));
    j["termination"] = chain.termination_reason.empty() ? "completed" : chain.termination_reason;
    std::ostringstream os;
    os << j.dump(2) << '\n';
    emit(os.str(), c);
    return 0;
}

int cmd_compare_susy(const Common& c) {
    const NatanzonParams p = resolve_params(c);
    auto map = make_map(p, c);
    const auto lev0 = solve_level(p, 0);
    if (!lev0) throw std::runtime_error("compare-susy: no ground level found");
    const SatelliteStep step =
        satellite_params(p, *lev0, LadderDirection::raising, SatelliteClosure::isospectral());
    const SatelliteSusyComparison cmp = compare_satellite_vs_susy(p, *map, step);
    std::ostringstream os;
    if (c.format == "json") {
        nlohmann::json j;
        j["sup_norm_diff"] = cmp.sup_norm_diff;
        j["distinct"] = cmp.distinct;
        j["verdict"] = cmp.distinct ? "distinct" : "coincides";
        os << j.dump(2) << '\n';
    } else {
        const auto sat0 = solve_level(step.result, 0);
        const auto src1 = solve_level(p, 1);
        if (!sat0 || !src1)
            throw std::runtime_error("compare-susy: need the satellite ground and source first "
                                     "excited levels to align the curves");
        const BoundState ground = build_state(map, p, 0);
        const double lo = map->r_lo(), hi = map->r_hi();
        csv_header(os, {"r", "V_satellite", "V_partner", "diff"});
        for (int i = 1; i + 1 < c.samples; ++i) {
            const double r = lo + (hi - lo) * static_cast<double>(i) / (c.samples - 1);
            const double vs = potential_z(step.result, map->z_of_r(r)) - sat0->E;
            const double vp = partner_potential_value(ground, r) - src1->E;
            csv_row(os, {r, vs, vp, vs - vp});
        }
    }
    emit(os.str(), c);
    return 0;
}

int cmd_verify(const Common& c) {
    const NatanzonParams p = resolve_params(c);
    const VerifyReport rep = run_verify(p, c.grid_n);
    std::ostringstream os;
    if (c.format == "json") {
        nlohmann::json j;
        j["rows"] = nlohmann::json::array();
        for (const VerifyRow& row : rep.rows) {
            j["rows"].push_back({{"name", row.name},
                                 {"value", row.value},
                                 {"threshold", row.threshold},
                                 {"pass", row.pass}});
        }
        j["all_pass"] = rep.all_pass;
        os << j.dump(2) << '\n';
    } else {
        for (const VerifyRow& row : rep.rows) {
            os << (row.pass ? "PASS" : "FAIL") << "  " << row.name << "  value=" << fmt_g(row.value)
               << (row.larger_is_pass ? "  must exceed " : "  threshold=") << fmt_g(row.threshold)
               << '\n';
        }
        os << (rep.all_pass ? "ALL CHECKS PASSED" : "CHECKS FAILED") << '\n';
    }
    emit(os.str(), c);
    return rep.all_pass ? 0 : 1;
}

int run(int argc, char** argv) {
    CLI::App app{"Bound states, ladder maps, and cross-checks for a six-parameter family of "
                 "exactly solvable potentials"};
    app.require_subcommand(1);

    Common c_spect, c_wf, c_zmap, c_sat, c_cmp, c_ver;
    int wf_nu = 0, sat_nu = 0, sat_steps = 1;
    std::string sat_dir, sat_closure = "isospectral";

    CLI::App* sp = app.add_subcommand("spectrum", "Solve and list all bound levels");
    add_param_source(sp, c_spect);
    add_format(sp, c_spect);
    sp->footer("Example:\n  natanzon spectrum --preset pt2 --A 4.5 --B 1.5 --alpha 1");

    CLI::App* wf = app.add_subcommand("wavefunction", "Tabulate a normalized bound state");
    add_param_source(wf, c_wf);
    add_format(wf, c_wf);
    add_samples(wf, c_wf);
    wf->add_option("--nu", wf_nu, "Level index (default 0)")->check(CLI::NonNegativeNumber);
    wf->footer("Example:\n  natanzon wavefunction --preset pt2 --A 4.5 --B 1.5 --alpha 1 --nu 1");

    CLI::App* zm = app.add_subcommand("zmap", "Tabulate the coordinate change z(r)");
    add_param_source(zm, c_zmap);
    add_format(zm, c_zmap);
    add_samples(zm, c_zmap);
    zm->footer("Example:\n  natanzon zmap --preset rm --A 3 --B 2 --alpha 1 --samples 201");

    CLI::App* st = app.add_subcommand(
        "satellite", "Map a level to its companion potential along the ladder (JSON)");
    add_param_source(st, c_sat);
    st->add_option("--format", c_sat.format, "Output format (json only for this subcommand)")
        ->check(CLI::IsMember({"csv", "json"}));
    c_sat.format = "json";
    st->add_option("--direction", sat_dir, "Ladder direction: up or down")
        ->required()
        ->check(CLI::IsMember({"up", "down"}));
    st->add_option("--closure", sat_closure,
                   "Energy closure: isospectral (default), ground-zero, or h1s=<value>");
    st->add_option("--nu", sat_nu, "Source level index (default 0)")->check(CLI::NonNegativeNumber);
    st->add_option("--steps", sat_steps, "Number of chained steps (default 1)");
    st->footer("Example:\n  natanzon satellite --preset pt2 --A 4.5 --B 1.5 --alpha 1 "
               "--direction up --closure isospectral");

    CLI::App* cm = app.add_subcommand(
        "compare-susy", "Satellite potential vs supersymmetric partner, both grounds at zero");
    add_param_source(cm, c_cmp);
    add_format(cm, c_cmp);
    add_samples(cm, c_cmp);
    cm->footer("Example:\n  natanzon compare-susy --preset rm --A 3 --B 2 --alpha 1 --format json");

    CLI::App* ve = app.add_subcommand("verify", "Residual and cross-check battery (pass/fail)");
    add_param_source(ve, c_ver);
    add_format(ve, c_ver);
    ve->footer("Example:\n  natanzon verify --preset rm --A 3 --B 2 --alpha 1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sp->parsed()) return cmd_spectrum(c_spect);
        if (wf->parsed()) return cmd_wavefunction(c_wf, wf_nu);
        if (zm->parsed()) return cmd_zmap(c_zmap);
        if (st->parsed()) return cmd_satellite(c_sat, sat_dir, sat_closure, sat_nu, sat_steps);
        if (cm->parsed()) return cmd_compare_susy(c_cmp);
        if (ve->parsed()) return cmd_verify(c_ver);
    } catch (const ParamsParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
