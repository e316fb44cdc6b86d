// srflow: verification, obstruction runs, reduction and Poincare sections
// for left-invariant rank-2 sub-Riemannian geodesic flows on Carnot groups.
//
// Exit codes: 0 success / nonexistence verdict, 1 inconclusive,
// 2 verification failure, 3 unknown system, 4 precondition violation,
// 5 numeric failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "srflow/carnot.hpp"
#include "srflow/dynamics.hpp"
#include "srflow/errors.hpp"
#include "srflow/integrals.hpp"
#include "srflow/obstruct.hpp"
#include "srflow/reduce.hpp"
#include "srflow/version.hpp"

namespace {

constexpr int EXIT_OK = 0;
constexpr int EXIT_INCONCLUSIVE = 1;
constexpr int EXIT_VERIFY_FAILED = 2;
constexpr int EXIT_UNKNOWN_SYSTEM = 3;
constexpr int EXIT_PRECONDITION = 4;
constexpr int EXIT_NUMERIC = 5;
constexpr int EXIT_INTERNAL = 70;

using srflow::Rational;
using srflow::carnot::SRSystem;

/// Parses "name" or "gen6:a,b" into a catalog system; nullopt if unknown.
std::optional<SRSystem> resolve_catalog(const std::string& spec) {
    std::string name = spec;
    std::optional<Rational> a, b;
    auto colon = spec.find(':');
    if (colon != std::string::npos) {
        name = spec.substr(0, colon);
        std::string params = spec.substr(colon + 1);
        auto comma = params.find(',');
        if (comma == std::string::npos)
            throw srflow::input_error("expected '<name>:a,b' parameter syntax");
        a = Rational::parse(params.substr(0, comma));
        b = Rational::parse(params.substr(comma + 1));
    }
    auto names = srflow::carnot::catalog_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) return std::nullopt;
    return srflow::carnot::catalog_lookup(name, a, b);
}

struct CheckLog {
    int failures = 0;
    void check(const std::string& what, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "  ok   " : "  FAIL ") << what;
        if (!ok && !detail.empty()) std::cout << " — " << detail;
        std::cout << "\n";
        if (!ok) ++failures;
    }
};

int cmd_verify(const std::string& target) {
    namespace fs = std::filesystem;
    CheckLog log;
    std::optional<SRSystem> sys;
    bool from_file = false;
    if (auto cat = resolve_catalog(target)) {
        sys = std::move(cat);
    } else if (fs::exists(target)) {
        from_file = true;
        auto file = srflow::carnot::load_algebra_file(target);
        sys = srflow::carnot::system_from_file(file, fs::path(target).stem().string());
    } else {
        std::cerr << "unknown system or file: " << target << "\n";
        return EXIT_UNKNOWN_SYSTEM;
    }

    std::cout << "verify " << sys->name << " (D=" << sys->algebra.dim << ")\n";
    auto val = srflow::carnot::validate_algebra(sys->algebra);
    for (const auto& c : val.checks) log.check("algebra: " + c.name, c.passed, c.detail);

    auto gv = srflow::carnot::growth_vector(sys->algebra);
    std::ostringstream gs;
    for (std::size_t i = 0; i < gv.size(); ++i) gs << (i ? "," : "(") << gv[i];
    gs << ")";
    log.check("growth vector " + gs.str(),
              !gv.empty() && gv.back() == sys->algebra.dim);

    if (sys->realization) {
        auto rr = srflow::carnot::verify_realization(*sys);
        log.check(std::string("realization brackets") +
                      (rr.closure_used ? " (closure-completed)" : "") +
                      (rr.passed ? " eps=" + std::to_string(rr.eps) : ""),
                  rr.passed, rr.detail);
    }

    if (!from_file) {
        const std::string base = sys->name.substr(0, sys->name.find(':'));
        auto sets = (base == "gen6")
                        ? std::vector<srflow::integrals::IntegralSet>{
                              srflow::integrals::noether_family(*sys)}
                        : srflow::integrals::integral_sets_for(base);
        for (auto& set : sets) {
            const auto& H = set.members[0].second;
            for (std::size_t i = 1; i < set.members.size(); ++i)
                log.check(set.system + ": {H," + set.members[i].first + "} = 0",
                          srflow::integrals::check_commute(H, set.members[i].second));
            log.check(set.system + ": family involutive",
                      srflow::integrals::all_involutive(srflow::integrals::check_involutive(set)));
            for (const auto& id : set.identities)
                log.check(set.system + ": identity " + id.name,
                          srflow::integrals::check_identity(id.lhs, id.rhs));
            for (const auto& ex : set.extras)
                log.check(set.system + ": {H," + ex.name + "} = 0",
                          srflow::integrals::check_commute(H, ex.value));
            auto pts = srflow::integrals::sample_points(sys->algebra.dim, 5);
            int rank = srflow::integrals::jacobian_rank_at(set, pts);
            log.check(set.system + ": jacobian rank " + std::to_string(rank) + " = " +
                          std::to_string(set.claimed_independent),
                      rank == set.claimed_independent);
        }
    }

    if (log.failures) {
        std::cout << log.failures << " check(s) failed\n";
        return EXIT_VERIFY_FAILED;
    }
    std::cout << "all checks passed\n";
    return EXIT_OK;
}

int cmd_obstruct(const std::string& name, int degree, std::optional<int> prolong,
                 std::optional<std::uint64_t> mod_p, bool auto_primes, bool exact,
                 const std::string& out_path, bool allow_long) {
    auto sys = resolve_catalog(name);
    if (!sys) {
        std::cerr << "unknown system: " << name << "\n";
        return EXIT_UNKNOWN_SYSTEM;
    }
    if (!sys->obstruct_ready) {
        std::cerr << "system '" << sys->name
                  << "' is not obstruct-ready: its Hamiltonian involves base variables "
                     "beyond x1, x2, so the ansatz coefficients would not reduce to two "
                     "variables\n";
        return EXIT_PRECONDITION;
    }
    if (sys->algebra.dim >= 6 && degree >= 5 && !allow_long) {
        std::cerr << "degree " << degree << " on a " << sys->algebra.dim
                  << "D system is a long run; pass --allow-long to proceed\n";
        return EXIT_PRECONDITION;
    }

    srflow::obstruct::DecideOptions opts;
    if (mod_p) {
        opts.mode = srflow::obstruct::Mode::mod_p;
        opts.p = *mod_p;
    } else if (auto_primes) {
        opts.mode = srflow::obstruct::Mode::auto_primes;
    } else if (exact) {
        opts.mode = srflow::obstruct::Mode::exact;
    } else {
        opts.mode = degree >= 5 ? srflow::obstruct::Mode::auto_primes
                                : srflow::obstruct::Mode::exact;
    }
    opts.k_override = prolong;

    auto rep = srflow::obstruct::decide(*sys, degree, opts);
    const std::string json = srflow::obstruct::report_to_json(rep);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << json << "\n";
    }
    std::cout << json << "\n";
    return rep.no_final_integral ? EXIT_OK : EXIT_INCONCLUSIVE;
}

std::map<int, Rational> parse_constants(const std::string& text) {
    std::map<int, Rational> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos || item.size() < 4 || item[0] != 'c')
            throw srflow::input_error("expected constants as c3=1/2,c5=-1,...");
        int idx = std::stoi(item.substr(1, eq - 1));
        out.emplace(idx, Rational::parse(item.substr(eq + 1)));
    }
    return out;
}

int cmd_reduce(const std::string& name, const std::string& constants,
               const std::string& json_path) {
    auto sys = resolve_catalog(name);
    if (!sys) {
        std::cerr << "unknown system: " << name << "\n";
        return EXIT_UNKNOWN_SYSTEM;
    }
    auto rs = srflow::reduce::reduce_system(*sys, parse_constants(constants));
    std::cout << rs.to_text() << "\n";
    if (!json_path.empty()) {
        nlohmann::ordered_json j;
        j["system"] = sys->name;
        j["kind"] = srflow::reduce::kind_name(rs.kind);
        j["exact"] = rs.exact;
        if (rs.kind == srflow::reduce::QKind::Q1 || rs.kind == srflow::reduce::QKind::Q2) {
            j["a"] = rs.exact ? rs.a.str() : std::to_string(rs.a_d);
            j["b"] = rs.exact ? rs.b.str() : std::to_string(rs.b_d);
        }
        if (rs.kind == srflow::reduce::QKind::Q2 || rs.kind == srflow::reduce::QKind::Constant)
            j["c"] = rs.exact ? rs.c.str() : std::to_string(rs.c_d);
        if (rs.kind == srflow::reduce::QKind::Degenerate)
            j["reason"] = rs.degenerate_reason;
        j["map"] = rs.map.describe();
        j["tool_version"] = srflow::version_string();
        std::ofstream out(json_path);
        out << j.dump(2) << "\n";
    }
    return EXIT_OK;
}

srflow::dyn::QField parse_qfield(const std::string& text, std::string& kind_name) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw srflow::input_error("expected --Q kind:params, e.g. Q1:10,-0.1");
    const std::string kind = text.substr(0, colon);
    kind_name = kind;
    std::vector<double> vals;
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
    if (kind == "Q1" && vals.size() == 2) return srflow::dyn::QField::q1(vals[0], vals[1]);
    if (kind == "Q2" && vals.size() == 3)
        return srflow::dyn::QField::q2(vals[0], vals[1], vals[2]);
    if ((kind == "const" || kind == "constant") && vals.size() == 1)
        return srflow::dyn::QField::constant(vals[0]);
    throw srflow::input_error("bad --Q spec '" + text + "'");
}

srflow::dyn::State parse_ic(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
    if (vals.size() != 3) throw srflow::input_error("expected --ic x,y,z");
    return {0.0, vals[0], vals[1], vals[2]};
}

srflow::dyn::SectionSpec parse_surface(const std::string& text, long long count) {
    // format: c=v:+ or c=v:-
    srflow::dyn::SectionSpec spec;
    spec.count = count;
    if (text.size() < 3) throw srflow::input_error("expected --surface like z=0:+");
    switch (text[0]) {
        case 'x': spec.coordinate = srflow::dyn::SectionSpec::Coord::x; break;
        case 'y': spec.coordinate = srflow::dyn::SectionSpec::Coord::y; break;
        case 'z': spec.coordinate = srflow::dyn::SectionSpec::Coord::z; break;
        default: throw srflow::input_error("surface coordinate must be x, y or z");
    }
    if (text[1] != '=') throw srflow::input_error("expected --surface like z=0:+");
    auto colon = text.find(':');
    spec.level = std::stod(text.substr(2, colon - 2));
    spec.direction = +1;
    if (colon != std::string::npos) {
        const std::string dir = text.substr(colon + 1);
        if (dir == "-") spec.direction = -1;
        else if (dir != "+") throw srflow::input_error("surface direction must be + or -");
    }
    return spec;
}

void write_meta(const std::string& out_path, const nlohmann::ordered_json& extra) {
    if (out_path.empty()) return;
    nlohmann::ordered_json j = extra;
    j["tool_version"] = srflow::version_string();
    std::ofstream meta(out_path + ".meta.json");
    meta << j.dump(2) << "\n";
}

int cmd_integrate(const std::string& q_spec, const std::string& ic_spec, double tmax,
                  const std::string& out_path, const std::string& svg_path,
                  const srflow::dyn::IntegratorConfig& cfg) {
    std::string kind;
    auto q = parse_qfield(q_spec, kind);
    auto ic = parse_ic(ic_spec);
    const auto t0 = std::chrono::steady_clock::now();
    auto traj = srflow::dyn::integrate(q, ic, tmax, cfg);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!out_path.empty()) {
        std::ofstream out(out_path);
        srflow::dyn::write_trajectory_csv(out, traj);
    } else {
        srflow::dyn::write_trajectory_csv(std::cout, traj);
    }
    if (!svg_path.empty()) {
        // scatter of the trajectory in the (x, y) plane
        srflow::dyn::SectionResult as_points{traj.states, traj.complete, traj.flag};
        std::ofstream svg(svg_path);
        srflow::dyn::write_section_svg(svg, as_points, {});
    }
    const int status = traj.complete ? EXIT_OK : EXIT_NUMERIC;
    nlohmann::ordered_json meta;
    meta["command"] = "integrate";
    meta["Q"] = q_spec;
    meta["ic"] = ic_spec;
    meta["tmax"] = tmax;
    meta["rel_tol"] = cfg.rel_tol;
    meta["abs_tol"] = cfg.abs_tol;
    meta["h_max"] = cfg.h_max;
    meta["states"] = traj.states.size();
    meta["complete"] = traj.complete;
    meta["flag"] = traj.flag;
    meta["elapsed_s"] = elapsed;
    meta["exit_status"] = status;
    write_meta(out_path, meta);
    if (!traj.complete) std::cerr << "integration incomplete: " << traj.flag << "\n";
    return status;
}

int cmd_section(const std::string& q_spec, const std::string& ic_spec,
                const std::string& surface, long long count, const std::string& out_path,
                const std::string& svg_path, const srflow::dyn::IntegratorConfig& cfg) {
    std::string kind;
    auto q = parse_qfield(q_spec, kind);
    auto ic = parse_ic(ic_spec);
    auto spec = parse_surface(surface, count);
    const auto t0 = std::chrono::steady_clock::now();
    auto sec = srflow::dyn::poincare_section(q, ic, spec, cfg);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!out_path.empty()) {
        std::ofstream out(out_path);
        srflow::dyn::write_section_csv(out, sec, spec);
    } else {
        srflow::dyn::write_section_csv(std::cout, sec, spec);
    }
    if (!svg_path.empty()) {
        std::ofstream svg(svg_path);
        srflow::dyn::write_section_svg(svg, sec, spec);
    }
    const int status = sec.complete ? EXIT_OK : EXIT_NUMERIC;
    nlohmann::ordered_json meta;
    meta["command"] = "section";
    meta["Q"] = q_spec;
    meta["ic"] = ic_spec;
    meta["surface"] = surface;
    meta["requested"] = count;
    meta["emitted"] = sec.points.size();
    meta["rel_tol"] = cfg.rel_tol;
    meta["abs_tol"] = cfg.abs_tol;
    meta["h_max"] = cfg.h_max;
    meta["complete"] = sec.complete;
    meta["flag"] = sec.flag;
    meta["elapsed_s"] = elapsed;
    meta["exit_status"] = status;
    write_meta(out_path, meta);
    if (!sec.complete) std::cerr << "section incomplete: " << sec.flag << "\n";
    return status;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sub-Riemannian geodesic-flow toolbox"};
    app.require_subcommand(1);
    app.set_version_flag("--version", srflow::version_string());

    // verify
    std::string verify_target;
    auto* verify = app.add_subcommand("verify", "validate a system and its claimed integrals");
    verify->add_option("system", verify_target, "catalog name or algebra file")->required();

    // obstruct
    std::string ob_name, ob_out;
    int ob_degree = 0;
    std::optional<int> ob_prolong;
    std::optional<std::uint64_t> ob_mod;
    bool ob_auto = false, ob_exact = false, ob_allow_long = false;
    auto* obstruct = app.add_subcommand("obstruct", "decide existence of a final integral");
    obstruct->add_option("system", ob_name)->required();
    obstruct->add_option("-d,--degree", ob_degree, "ansatz degree")->required();
    obstruct->add_option("--prolong", ob_prolong, "prolongation order (default d+1)");
    obstruct->add_option("--mod", ob_mod, "compute the rank modulo this prime");
    obstruct->add_flag("--auto-primes", ob_auto, "random increasing prime sequence");
    obstruct->add_flag("--exact", ob_exact, "exact rank over the rationals");
    obstruct->add_option("--out", ob_out, "write the JSON report here");
    obstruct->add_flag("--allow-long", ob_allow_long, "permit multi-hour runs");

    // reduce
    std::string red_name, red_constants, red_json;
    auto* reduce = app.add_subcommand("reduce", "reduce to the 3-component system");
    reduce->add_option("system", red_name)->required();
    reduce->add_option("--c", red_constants, "Noether constants, e.g. c5=-1/10,c6=20");
    reduce->add_option("--json", red_json, "write a JSON description here");

    // shared dynamics options
    srflow::dyn::IntegratorConfig cfg;
    std::string dq, dic = "0,0,0", dout, dsvg;
    double tmax = 0.0;

    auto add_dyn_opts = [&](CLI::App* c) {
        c->add_option("--Q", dq, "reduced field, kind:params (Q1:a,b | Q2:a,b,c | const:c)")
            ->required();
        c->add_option("--ic", dic, "initial point x,y,z");
        c->add_option("--out", dout, "CSV output path (stdout if omitted)");
        c->add_option("--svg", dsvg, "SVG scatter output path");
        c->add_option("--rel-tol", cfg.rel_tol);
        c->add_option("--abs-tol", cfg.abs_tol);
        c->add_option("--hmax", cfg.h_max);
        c->add_option("--max-steps", cfg.max_steps);
    };

    auto* integrate = app.add_subcommand("integrate", "integrate the reduced flow");
    add_dyn_opts(integrate);
    integrate->add_option("--tmax", tmax, "integration end time")->required();

    std::string surface = "z=0:+";
    long long count = 1000;
    auto* section = app.add_subcommand("section", "Poincare surface of section");
    add_dyn_opts(section);
    section->add_option("--surface", surface, "surface, e.g. z=0:+ or x=0:+");
    section->add_option("--count", count, "number of section points");

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return cmd_verify(verify_target);
        if (obstruct->parsed())
            return cmd_obstruct(ob_name, ob_degree, ob_prolong, ob_mod, ob_auto, ob_exact,
                                ob_out, ob_allow_long);
        if (reduce->parsed()) return cmd_reduce(red_name, red_constants, red_json);
        if (integrate->parsed()) return cmd_integrate(dq, dic, tmax, dout, dsvg, cfg);
        if (section->parsed()) return cmd_section(dq, dic, surface, count, dout, dsvg, cfg);
    } catch (const srflow::precondition_error& e) {
        std::cerr << "precondition: " << e.what() << "\n";
        return EXIT_PRECONDITION;
    } catch (const srflow::numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return EXIT_NUMERIC;
    } catch (const srflow::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return EXIT_PRECONDITION;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_INTERNAL;
    }
    return EXIT_OK;
}
