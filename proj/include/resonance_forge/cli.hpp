#pragma once

// Command-line front end. run() parses argv, dispatches a subcommand and maps
// errors to exit codes: 0 success, 1 bad input, 2 a verification failed.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "acceptance.hpp"
#include "evolve.hpp"
#include "resonant.hpp"
#include "telescope.hpp"

namespace rf::cli {

struct Flags {
    std::string model = "kg";
    int delta = 2;
    std::string key;
    long m_max = 20;
    int trunc = 16;
    double eps = 0.05;
    double periods = 10;
    double dt = 0;
    unsigned seed = 7;
    bool json = false;
    std::string out;
    unsigned threads = 1;
    bool exact = false;
    std::string config;
    // subcommand specific
    int j_min = 0;
    std::vector<double> scaling;
    int record_every = 64;
    std::vector<int> only;
    int samples = 200;
};

// Plain key=value lines; '#' starts a comment. Keys are flag names without
// the leading dashes.
inline std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t\r"));
            s.erase(s.find_last_not_of(" \t\r") + 1);
            return s;
        };
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key=value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

namespace detail {

template <class T>
T parse_as(const std::string& key, const std::string& v) {
    T out{};
    if (!CLI::detail::lexical_conversion<T, T>({v}, out)) throw ValidationError("config: bad value for " + key + ": " + v);
    return out;
}

inline void apply_config(Flags& f, const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) {
        if (k == "model") f.model = v;
        else if (k == "delta") f.delta = parse_as<int>(k, v);
        else if (k == "key") f.key = v;
        else if (k == "m-max") f.m_max = parse_as<long>(k, v);
        else if (k == "trunc") f.trunc = parse_as<int>(k, v);
        else if (k == "eps") f.eps = parse_as<double>(k, v);
        else if (k == "periods") f.periods = parse_as<double>(k, v);
        else if (k == "dt") f.dt = parse_as<double>(k, v);
        else if (k == "seed") f.seed = parse_as<unsigned>(k, v);
        else if (k == "threads") f.threads = parse_as<unsigned>(k, v);
        else if (k == "json") f.json = parse_as<bool>(k, v);
        else if (k == "exact") f.exact = parse_as<bool>(k, v);
        else if (k == "out") f.out = v;
        else throw ValidationError("config: unknown key " + k);
    }
}

// --config has to be known before CLI11 binds the rest, so that flags given
// on the command line win.
inline std::string find_config(const std::vector<std::string>& args) {
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return {};
}

inline ModelConfig model_config(const Flags& f) { return ModelConfig::make(parse_model(f.model), f.delta); }

inline nlohmann::json exact_json(const ExactScalar& s) {
    nlohmann::json j;
    to_json(j, s);
    return j;
}

inline std::string fmt17(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

}  // namespace detail

struct Output {
    std::string text;
    int code = 0;
};

inline Output cmd_coeff(const Flags& f) {
    ModelConfig cfg = detail::model_config(f);
    if (f.key.empty()) throw ValidationError("--key is required");
    CoeffKey key = parse_key(f.key);
    nlohmann::json j;
    j["schema_version"] = 1;
    j["model"] = f.model;
    j["delta"] = f.delta;
    j["key"] = {key.i, key.j, key.k, key.m};
    j["class"] = resonance_name(resonance_class(cfg, key));
    std::optional<ExactScalar> ex;
    if (f.exact) {
        ex = coeff_exact(cfg, key);
        j["exact"] = detail::exact_json(*ex);
        j["approx"] = to_float(*ex);
    } else {
        j["approx"] = coeff_quad(cfg, key);
    }
    if (f.json) return {j.dump() + "\n"};
    std::ostringstream os;
    os << "C[" << key.str() << "] " << cfg.name() << " (" << j["class"].get<std::string>() << ")\n";
    if (ex) os << "  exact  " << ex->str() << "\n";
    os << "  approx " << detail::fmt17(j["approx"].get<double>()) << "\n";
    return {os.str()};
}

inline Output cmd_table(const Flags& f) {
    ModelConfig cfg = detail::model_config(f);
    if (f.m_max < 0 || f.m_max > kMaxQuadIndex) throw ValidationError("--m-max out of range for a table");
    CoeffTable t = build_table(cfg, static_cast<int>(f.m_max), f.exact ? ExactPolicy::All : ExactPolicy::DiagonalOnly, f.threads);
    if (f.json) return {table_to_json(t).dump() + "\n"};
    return {table_to_csv(t)};
}

inline Output cmd_diag(const Flags& f) {
    ModelConfig cfg = detail::model_config(f);
    if (f.m_max < 0) throw ValidationError("--m-max must be nonnegative");
    nlohmann::json j;
    j["schema_version"] = 1;
    j["model"] = f.model;
    j["delta"] = f.delta;
    j["values"] = nlohmann::json::array();
    std::ostringstream os;
    os << "m,exact,approx\n";
    for (long m = 0; m <= f.m_max; ++m) {
        ExactScalar c = diag_closed(cfg, m);
        j["values"].push_back({{"m", m}, {"exact", detail::exact_json(c)}, {"approx", to_float(c)}});
        os << m << ',' << c.str() << ',' << detail::fmt17(to_float(c)) << '\n';
    }
    if (cfg.model == Model::WM) j["c_infinity"] = detail::exact_json(c_infinity(cfg.delta));
    if (f.json) return {j.dump() + "\n"};
    return {os.str()};
}

inline Output cmd_derive(const Flags& f) {
    ModelConfig cfg = detail::model_config(f);
    HyperTerm t = term_for_diag(cfg);
    ZeilbergerOptions opt;
    opt.j_min = f.j_min;
    TelescopeResult res = zeilberger(t, 4, 2, opt);
    CertificateReport rep = verify_certificate(t, res, f.seed);
    nlohmann::json j = telescope_to_json(res);
    j["model"] = f.model;
    j["delta"] = f.delta;
    j["certificate_verified"] = rep.identity_holds;
    if (f.json) return {j.dump() + "\n"};
    std::ostringstream os;
    os << "order " << res.order << " recurrence for sum_k F(m,k), " << cfg.name() << "\n";
    for (size_t i = 0; i < res.alphas.size(); ++i) os << "  alpha" << i << "(m) = " << res.alphas[i].str("m") << "\n";
    os << "certificate " << (rep.identity_holds ? "verified" : "FAILED") << ", boundary "
       << (res.boundary_zero ? "identically zero" : "nonzero") << "\n";
    return {os.str(), rep.identity_holds ? 0 : 2};
}

inline Output cmd_verify(const Flags& f) {
    ModelConfig cfg = detail::model_config(f);
    RecurrenceReport r = recurrence_verify(cfg, f.m_max);
    nlohmann::json j = {{"schema_version", 1}, {"model", f.model}, {"delta", f.delta}, {"m_checked", r.m_checked}, {"holds", true}};
    if (f.json) return {j.dump() + "\n"};
    return {"recurrence holds exactly for m = 1.." + std::to_string(r.m_checked) + ", " + cfg.name() + "\n"};
}

inline Output cmd_stability(const Flags& f) {
    ModelConfig cfg = detail::model_config(f);
    GapReport r = stability_classify(cfg, f.m_max);
    if (f.json) return {gap_report_to_json(r).dump() + "\n"};
    std::ostringstream os;
    os << cfg.name() << ": " << (r.coercive ? "coercive" : "not coercive") << ", existence " << (r.existence_ok ? "ok" : "fails")
       << ", gaps " << (r.increasing ? "increasing" : "not increasing") << "\n";
    if (r.c_perp) os << "c_perp = " << r.c_perp->str() << " = " << detail::fmt17(to_float(*r.c_perp)) << "\n";
    for (size_t m = 0; m < std::min<size_t>(r.gaps.size(), 5); ++m) os << "  gap(" << m + 1 << ") = " << r.gaps[m].str() << "\n";
    return {os.str()};
}

inline Output cmd_resonant(const Flags& f) {
    ModelConfig cfg = detail::model_config(f);
    if (f.trunc < cfg.delta_star() + 1) throw ValidationError("--trunc must exceed " + std::to_string(cfg.delta_star()));
    CoeffTable table = build_table(cfg, f.trunc, ExactPolicy::DiagonalOnly, f.threads);
    nlohmann::json j;
    j["schema_version"] = 1;
    j["model"] = f.model;
    j["delta"] = f.delta;
    j["trunc"] = f.trunc;
    j["kappa0"] = detail::exact_json(kappa0(cfg));
    j["M_residual"] = M_residual(cfg, table, f.trunc);
    j["gradient_residual"] = gradient_residual(cfg, table, static_cast<size_t>(f.trunc) + 1);
    TimeAverage ta = time_average_f(cfg, table, one_mode_state(cfg, static_cast<size_t>(f.trunc) + 1));
    j["time_average_xi"] = ta.closed;
    bool gap_positive = gap(cfg, 1).sign() > 0;
    if (gap_positive) {
        CoercivityReport c = coercivity_check(cfg, f.trunc + 1, f.samples, f.seed);
        j["coercivity"] = {{"c_tilde", c.c_tilde}, {"min_ratio", c.min_ratio}, {"samples", c.samples}};
    } else {
        j["coercivity"] = nullptr;
    }
    if (f.json) return {j.dump() + "\n"};
    std::ostringstream os;
    os << cfg.name() << ", modes 0.." << f.trunc << "\n"
       << "  kappa0             " << kappa0(cfg).str() << "\n"
       << "  M residual         " << j["M_residual"].get<double>() << "\n"
       << "  gradient residual  " << j["gradient_residual"].get<double>() << "\n"
       << "  <f>(xi)            " << detail::fmt17(ta.closed) << "\n";
    if (gap_positive)
        os << "  coercivity c~      " << j["coercivity"]["c_tilde"].get<double>() << "\n";
    else
        os << "  coercivity         none (gap(1) <= 0)\n";
    return {os.str()};
}

inline Output cmd_evolve(const Flags& f) {
    EvolveConfig ec;
    ec.cfg = detail::model_config(f);
    ec.eps = f.eps;
    ec.trunc = f.trunc;
    ec.dt = f.dt;
    ec.periods = f.periods;
    ec.record_every = f.record_every;
    ec.validate();
    for (double e : f.scaling)
        if (!(e > 0)) throw ValidationError("--scaling values must be positive");
    Trajectory tr = integrate_one_mode(ec);
    std::optional<ScalingStudy> st;
    if (f.scaling.size() >= 2) st = eps_scaling(ec, f.scaling);
    nlohmann::json sum = trajectory_summary(ec, tr, st ? &*st : nullptr);
    // --out gets the trajectory; the summary goes to stdout
    if (!f.out.empty()) {
        std::ofstream o(f.out);
        if (!o) throw ValidationError("cannot write " + f.out);
        o << trajectory_to_csv(tr);
    }
    if (f.json || !f.out.empty()) return {sum.dump() + "\n"};
    return {trajectory_to_csv(tr)};
}

inline Output cmd_selftest(const Flags& f) {
    std::vector<CriterionResult> rs = run_acceptance(f.threads, f.only);
    bool all = true;
    std::ostringstream os;
    for (const auto& r : rs) {
        os << format_result(r) << "\n";
        all = all && r.pass;
    }
    os << (all ? "all criteria pass" : "some criteria FAIL") << "\n";
    if (f.json) return {results_to_json(rs).dump() + "\n", all ? 0 : 2};
    return {os.str(), all ? 0 : 2};
}

// Failed checks exit 2, everything else the user can fix exits 1.
inline int exit_code_for(const std::exception& e) { return dynamic_cast<const VerificationError*>(&e) ? 2 : 1; }

inline void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--model", f.model, "kg or wm")->check(CLI::IsMember({"kg", "wm"}));
    sub->add_option("--delta", f.delta, "integer delta");
    sub->add_option("--seed", f.seed, "random seed");
    sub->add_option("--threads", f.threads, "worker cap")->check(CLI::Range(1u, 256u));
    sub->add_flag("--json", f.json, "machine-readable output");
    sub->add_option("--out", f.out, "write output to FILE");
    sub->add_option("--config", f.config, "key=value file; flags override it");
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Flags f;
    bool json_errors = std::find(args.begin(), args.end(), "--json") != args.end();
    auto fail = [&](int code, const std::string& type, const std::string& msg) {
        if (json_errors)
            err << nlohmann::json({{"error", type}, {"message", msg}, {"exit_code", code}}).dump() << "\n";
        else
            err << "error: " << msg << "\n";
        return code;
    };
    try {
        if (std::string cfg = detail::find_config(args); !cfg.empty()) detail::apply_config(f, read_config(cfg));
    } catch (const Error& e) {
        return fail(1, "ValidationError", e.what());
    }

    CLI::App app{"Exact coefficients, recurrences and resonant dynamics for cubic wave equations on anti-de Sitter."};
    app.name("resonance-forge");
    app.require_subcommand(1);

    auto* coeff = app.add_subcommand("coeff", "one interaction coefficient");
    add_common(coeff, f);
    coeff->add_option("--key", f.key, "i,j,k,m");
    coeff->add_flag("--exact", f.exact, "closed form as q * pi^(h/2) * sqrt(r)");

    auto* table = app.add_subcommand("table", "all coefficients with indices <= m-max (CSV, or JSON with --json)");
    add_common(table, f);
    table->add_option("--m-max", f.m_max, "largest index");
    table->add_flag("--exact", f.exact, "exact values for every entry");

    auto* diag = app.add_subcommand("diag", "C_00mm for m = 0..m-max");
    add_common(diag, f);
    diag->add_option("--m-max", f.m_max, "largest m");

    auto* rec = app.add_subcommand("recurrence", "recurrences for the diagonal sequence");
    rec->require_subcommand(1);
    auto* derive = rec->add_subcommand("derive", "creative telescoping of the diagonal sum");
    add_common(derive, f);
    derive->add_option("--order", f.j_min, "smallest order to try")->check(CLI::Range(0, 4));
    auto* verify = rec->add_subcommand("verify", "check the recurrence exactly on m = 1..m-max");
    add_common(verify, f);
    verify->add_option("--m-max", f.m_max, "last m checked");

    auto* stab = app.add_subcommand("stability", "gap sequence and coercivity");
    add_common(stab, f);
    stab->add_option("--m-max", f.m_max, "gaps 1..m-max");

    auto* res = app.add_subcommand("resonant", "identities of the truncated resonant system at the 1-mode point");
    add_common(res, f);
    res->add_option("--trunc", f.trunc, "largest mode");
    res->add_option("--samples", f.samples, "coercivity samples")->check(CLI::Range(1, 1000000));

    auto* evo = app.add_subcommand("evolve", "integrate from 1-mode data (CSV; --json or --out for the summary)");
    add_common(evo, f);
    evo->add_option("--trunc", f.trunc, "largest mode");
    evo->add_option("--eps", f.eps, "amplitude");
    evo->add_option("--periods", f.periods, "linear periods (2 pi each)");
    evo->add_option("--dt", f.dt, "time step; default 2 pi / (64 w_N)");
    evo->add_option("--record-every", f.record_every, "steps between samples");
    evo->add_option("--scaling", f.scaling, "eps values for a log-log scaling fit");

    auto* self = app.add_subcommand("selftest", "run the acceptance suite");
    add_common(self, f);
    self->add_option("--only", f.only, "criterion ids")->check(CLI::Range(1, 10));

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;
        return fail(1, "ParseError", e.what());
    }
    try {
        Output o;
        if (coeff->parsed()) o = cmd_coeff(f);
        else if (table->parsed()) o = cmd_table(f);
        else if (diag->parsed()) o = cmd_diag(f);
        else if (derive->parsed()) o = cmd_derive(f);
        else if (verify->parsed()) o = cmd_verify(f);
        else if (stab->parsed()) o = cmd_stability(f);
        else if (res->parsed()) o = cmd_resonant(f);
        else if (evo->parsed()) o = cmd_evolve(f);
        else if (self->parsed()) o = cmd_selftest(f);
        bool to_file = !f.out.empty() && !evo->parsed();
        if (to_file) {
            std::ofstream file(f.out);
            if (!file) return fail(1, "ValidationError", "cannot write " + f.out);
            file << o.text;
        } else {
            out << o.text;
        }
        return o.code;
    } catch (const std::exception& e) {
        return fail(exit_code_for(e), dynamic_cast<const VerificationError*>(&e) ? "VerificationError" : "ValidationError", e.what());
    }
}

inline int run(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, out, err);
}

}  // namespace rf::cli
