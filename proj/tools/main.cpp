#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "oscillab/oscillab.hpp"

using namespace oscillab;
using namespace oscillab::cli;

namespace {

enum class Kind { Number, Integer, Text, Flag };

struct OptionDef {
    const char* key;
    Kind kind;
    const char* help;
};

struct CommandDef {
    const char* name;
    const char* help;
    CommandFn fn;
    std::vector<OptionDef> options;
};

const std::vector<OptionDef> kCommon{
    {"rel_tol", Kind::Number, "quadrature panel tolerance"},
    {"panels_per_period", Kind::Integer, "panels per 2 pi of phase"},
    {"max_shells", Kind::Integer, "shell cap"},
    {"tail_epsilon", Kind::Number, "truncated mass near the origin"},
    {"max_nodes", Kind::Integer, "node budget"},
    {"out", Kind::Text, "CSV output file (default stdout)"},
    {"json", Kind::Text, "JSON report file"},
    {"svg", Kind::Text, "SVG plot file"},
};

const std::vector<CommandDef>& commands() {
    static const std::vector<CommandDef> defs{
        {"list-phases", "catalog of phase variants", cmd_list_phases, {}},
        {"compute-m", "oscillatory integral m(lambda)", cmd_compute_m,
         {{"phase", Kind::Text, "phase spec"},
          {"lambda", Kind::Number, "frequency"},
          {"n", Kind::Integer, "plateau ladder index (exact frequency Q_n)"},
          {"method", Kind::Text, "direct | substituted | both"},
          {"tol", Kind::Number, "agreement tolerance for --method both"}}},
        {"verify-growth", "fit |m| or -Re m against an envelope", cmd_verify_growth,
         {{"phase", Kind::Text, "phase spec"},
          {"envelope", Kind::Text, "envelope spec"},
          {"lambda_ladder", Kind::Text, "start,factor,count"},
          {"lambdas", Kind::Text, "explicit frequencies a,b,c"},
          {"plateau_n_max", Kind::Integer, "use exact plateau frequencies Q_1..Q_n"},
          {"plateau_n_min", Kind::Integer, "first plateau index"},
          {"full_cap", Kind::Number, "oscillation cap for full plateau quadrature"},
          {"mode", Kind::Text, "abs | negre"},
          {"band", Kind::Number, "max/min ratio limit"},
          {"threads", Kind::Integer, "worker threads"},
          {"hierarchy", Kind::Flag, "evaluate the envelope hierarchy instead"},
          {"lambda", Kind::Number, "frequency for --hierarchy"}}},
        {"verify-plateau", "growth window on the plateau ladder", cmd_verify_plateau,
         {{"k", Kind::Integer, "iterated-log depth"},
          {"j0", Kind::Integer, "ladder offset (default minimal)"},
          {"n_max", Kind::Integer, "largest ladder index"},
          {"full_cap", Kind::Number, "oscillation cap for full quadrature"},
          {"tol", Kind::Number, "bound tolerance"},
          {"threads", Kind::Integer, "worker threads"}}},
        {"verify-flatbound", "flat-point bounds against |phi|", cmd_verify_flatbound,
         {{"phase", Kind::Text, "phase spec"},
          {"family", Kind::Text, "weight family"},
          {"grid", Kind::Text, "t grid lo,hi,count"},
          {"member_grid", Kind::Text, "membership grid lo,hi,count"},
          {"n_lo", Kind::Integer, "first derivative order"},
          {"n_hi", Kind::Integer, "last derivative order"},
          {"expect", Kind::Text, "none | bang | taylor_legendre"},
          {"min_run", Kind::Integer, "required winning run"},
          {"tol", Kind::Number, "relative domination slack"},
          {"chain_samples", Kind::Integer, "chain recursion cross-checks"}}},
        {"verify-derivatives", "derivative identities and bounds", cmd_verify_derivatives,
         {{"check", Kind::Text, "membership | triangle | bell | two-path | gk | aq | ek | g | flat-point"},
          {"phase", Kind::Text, "phase spec"},
          {"family", Kind::Text, "weight family"},
          {"grid", Kind::Text, "grid lo,hi,count"},
          {"n_lo", Kind::Integer, "first order"},
          {"n_hi", Kind::Integer, "last order"},
          {"n_max", Kind::Integer, "largest order"},
          {"m_max", Kind::Integer, "largest difference order"},
          {"expect", Kind::Text, "stable | diverge"},
          {"growth_from", Kind::Integer, "order the divergence is measured from"},
          {"growth_factor", Kind::Number, "required K growth for diverge"},
          {"points", Kind::Text, "evaluation points a,b,c"},
          {"tol", Kind::Number, "relative tolerance"},
          {"beta", Kind::Number, "exponent beta"},
          {"alpha", Kind::Number, "exponent alpha"},
          {"k", Kind::Integer, "depth"},
          {"k_lo", Kind::Integer, "first depth"},
          {"k_hi", Kind::Integer, "last depth"},
          {"k_max", Kind::Number, "largest depth, or K limit for membership"},
          {"r_max", Kind::Integer, "largest derivative order"}}},
        {"carleman", "weight-sequence quantities", cmd_carleman,
         {{"family", Kind::Text, "weight family"},
          {"op", Kind::Text, "tail | inverse-tail | quasianalytic | legendre | bang-level | taylor-legendre | shellsum"},
          {"N", Kind::Integer, "tail start"},
          {"r", Kind::Number, "tail level"},
          {"y", Kind::Number, "Legendre argument"},
          {"brute", Kind::Integer, "brute-force Legendre cross-check up to n"},
          {"K", Kind::Number, "class constant"},
          {"x", Kind::Number, "point"},
          {"t", Kind::Number, "point"},
          {"lambda", Kind::Number, "frequency"},
          {"c", Kind::Number, "shell constant"}}},
        {"vdc-check", "shell-wise van der Corput envelope", cmd_vdc_check,
         {{"phase", Kind::Text, "phase spec"},
          {"fit_lambda", Kind::Number, "frequency the constant is fitted at"},
          {"lambdas", Kind::Text, "check frequencies a,b,c"},
          {"j_lo", Kind::Integer, "first shell"},
          {"j_hi", Kind::Integer, "last shell"},
          {"safety", Kind::Number, "constant safety factor"},
          {"c_max", Kind::Number, "largest acceptable constant"}}},
        {"poly-sweep", "random polynomial phases by degree", cmd_poly_sweep,
         {{"d_min", Kind::Integer, "smallest degree"},
          {"d_max", Kind::Integer, "largest degree"},
          {"trials", Kind::Integer, "random polynomials per degree"},
          {"scale", Kind::Number, "coefficient range and frequency"},
          {"seed", Kind::Integer, "RNG seed"},
          {"ratio_max", Kind::Number, "largest acceptable max/log d"}}},
    };
    return defs;
}

const CommandDef* find_command(const std::string& name) {
    for (const auto& c : commands())
        if (name == c.name) return &c;
    return nullptr;
}

std::string flag_name(const char* key) {
    std::string s = key;
    for (auto& ch : s)
        if (ch == '_') ch = '-';
    return "--" + s;
}

const OptionDef* find_option(const CommandDef& cmd, const std::string& key) {
    for (const auto& o : cmd.options)
        if (key == o.key) return &o;
    for (const auto& o : kCommon)
        if (key == o.key) return &o;
    return nullptr;
}

// Converts a value to the declared kind; strings from the command line are parsed.
ojson coerce(const OptionDef& def, const ojson& v) {
    auto bad = [&] { return ConfigError(std::string("option ") + def.key + ": wrong type"); };
    switch (def.kind) {
        case Kind::Flag:
            if (!v.is_boolean()) throw bad();
            return v;
        case Kind::Text:
            if (v.is_string() || v.is_array() || v.is_object()) return v;
            if (v.is_number()) return v.dump();
            throw bad();
        case Kind::Number:
            if (v.is_number()) return v.get<double>();
            if (v.is_string()) {
                try {
                    std::size_t pos = 0;
                    double d = std::stod(v.get<std::string>(), &pos);
                    if (pos == v.get<std::string>().size()) return d;
                } catch (const std::exception&) {
                }
            }
            throw bad();
        case Kind::Integer:
            if (v.is_number_integer()) return v.get<long long>();
            if (v.is_number_float() && v.get<double>() == std::floor(v.get<double>()) && std::abs(v.get<double>()) < 9e18)
                return static_cast<long long>(v.get<double>());
            if (v.is_string()) {
                try {
                    std::size_t pos = 0;
                    long long d = std::stoll(v.get<std::string>(), &pos);
                    if (pos == v.get<std::string>().size()) return d;
                } catch (const std::exception&) {
                }
            }
            throw bad();
    }
    throw bad();
}

// Flattens a config document: quadrature.* and output.{csv,json,svg} map
// onto the common options.
ojson flatten_config(const ojson& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    ojson out = ojson::object();
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (it.key() == "quadrature") {
            if (!it.value().is_object()) throw ConfigError("quadrature must be an object");
            for (auto q = it.value().begin(); q != it.value().end(); ++q) out[q.key()] = q.value();
        } else if (it.key() == "output") {
            if (!it.value().is_object()) throw ConfigError("output must be an object");
            for (auto q = it.value().begin(); q != it.value().end(); ++q) {
                if (q.key() == "csv")
                    out["out"] = q.value();
                else if (q.key() == "json" || q.key() == "svg")
                    out[q.key()] = q.value();
                else
                    throw ConfigError("unknown output key: " + q.key());
            }
        } else if (it.key() != "$schema") {
            out[it.key()] = it.value();
        }
    }
    return out;
}

void diagnostic(const std::string& level, const std::string& kind, const std::string& message) {
    ojson d{{"level", level}, {"kind", kind}, {"message", message}};
    std::cerr << d.dump() << "\n";
}

bool is_input_error(const Error& e) {
    static const char* kinds[] = {"ConfigError", "DomainError", "InvalidJ0", "MismatchError", "OutOfRange",
                                  "NotFiniteType"};
    for (const char* k : kinds)
        if (e.kind() == k) return true;
    return false;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + path);
    f << content;
    if (!f) throw ConfigError("cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"oscillab: oscillatory integrals with flat phases"};
    app.require_subcommand(0, 1);
    app.fallthrough();
    std::string config_path;
    app.add_option("--config", config_path, "JSON run configuration; its values override flags");

    std::map<std::string, std::map<std::string, std::string>> texts;
    std::map<std::string, std::map<std::string, bool>> flags;
    std::map<std::string, CLI::App*> subs;
    for (const auto& cmd : commands()) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        subs[cmd.name] = sub;
        std::vector<OptionDef> all = cmd.options;
        all.insert(all.end(), kCommon.begin(), kCommon.end());
        for (const auto& o : all) {
            if (o.kind == Kind::Flag)
                sub->add_flag(flag_name(o.key), flags[cmd.name][o.key], o.help);
            else
                sub->add_option(flag_name(o.key), texts[cmd.name][o.key], o.help);
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        diagnostic("error", "ConfigError", e.what());
        return 2;
    }

    std::string name;
    for (const auto& [n, sub] : subs)
        if (sub->parsed()) name = n;

    try {
        ojson cfg = ojson::object();
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw ConfigError("cannot open config " + config_path);
            try {
                cfg = flatten_config(ojson::parse(f));
            } catch (const ojson::parse_error& e) {
                throw ConfigError(std::string("config is not valid JSON: ") + e.what());
            }
            if (cfg.contains("command")) {
                if (!cfg["command"].is_string()) throw ConfigError("command must be a string");
                std::string c = cfg["command"].get<std::string>();
                if (!name.empty() && name != c)
                    throw ConfigError("config command " + c + " conflicts with subcommand " + name);
                name = c;
                cfg.erase("command");
            }
        }
        if (name.empty()) throw ConfigError("no subcommand given (see --help)");
        const CommandDef* cmd = find_command(name);
        if (!cmd) throw ConfigError("unknown command: " + name);

        Options opt;
        CLI::App* sub = subs.at(name);
        for (const auto& [key, val] : texts[name])
            if (sub->count(flag_name(key.c_str())) > 0) opt.values[key] = coerce(*find_option(*cmd, key), val);
        for (const auto& [key, val] : flags[name])
            if (val) opt.values[key] = true;
        for (auto it = cfg.begin(); it != cfg.end(); ++it) {
            const OptionDef* def = find_option(*cmd, it.key());
            if (!def) throw ConfigError("unknown option for " + name + ": " + it.key());
            opt.values[it.key()] = coerce(*def, it.value());
        }

        std::ostringstream csv;
        std::string svg_path = opt.text("svg", "");
        std::function<void(const std::string&)> svg;
        if (!svg_path.empty()) svg = [&](const std::string& s) { write_file(svg_path, s); };
        CommandContext ctx{opt, csv, svg};
        Verdict v = cmd->fn(ctx);

        std::string out = opt.text("out", "");
        if (out.empty())
            std::cout << csv.str() << std::flush;
        else
            write_file(out, csv.str());
        ojson report{{"command", name}, {"verdict", v.pass ? "PASS" : "FAIL"}, {"options", opt.values},
                     {"details", v.details}};
        std::string json_path = opt.text("json", "");
        if (!json_path.empty()) write_file(json_path, report.dump(2) + "\n");
        std::cerr << ojson{{"level", "info"}, {"command", name}, {"verdict", v.pass ? "PASS" : "FAIL"}}.dump() << "\n";
        return v.pass ? 0 : 1;
    } catch (const Error& e) {
        diagnostic("error", e.kind(), e.what());
        return is_input_error(e) ? 2 : 1;
    } catch (const ojson::exception& e) {
        diagnostic("error", "ConfigError", e.what());
        return 2;
    } catch (const std::exception& e) {
        diagnostic("error", "InternalError", e.what());
        return 1;
    }
}
