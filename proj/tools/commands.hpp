#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "support.hpp"
#include "oscillab/quadrature.hpp"

namespace oscillab::cli {

// Merged flags and config-file values, keyed by option name.
class Options {
public:
    ojson values = ojson::object();

    bool has(const std::string& key) const { return values.contains(key); }
    const ojson& raw(const std::string& key) const;
    double number(const std::string& key, double def) const;
    long long integer(const std::string& key, long long def) const;
    std::string text(const std::string& key, const std::string& def) const;
    bool flag(const std::string& key) const;
    QuadratureConfig quadrature() const;
};

struct Verdict {
    bool pass = true;
    ojson details = ojson::object();
};

// One subcommand: writes CSV to csv, an optional SVG through svg, and
// returns the verdict. Configuration problems throw ConfigError.
struct CommandContext {
    const Options& opt;
    std::ostream& csv;
    std::function<void(const std::string&)> svg;  // empty when no SVG was requested
};

using CommandFn = Verdict (*)(const CommandContext&);

Verdict cmd_list_phases(const CommandContext& c);
Verdict cmd_compute_m(const CommandContext& c);
Verdict cmd_verify_growth(const CommandContext& c);
Verdict cmd_verify_plateau(const CommandContext& c);
Verdict cmd_verify_flatbound(const CommandContext& c);
Verdict cmd_verify_derivatives(const CommandContext& c);
Verdict cmd_carleman(const CommandContext& c);
Verdict cmd_vdc_check(const CommandContext& c);
Verdict cmd_poly_sweep(const CommandContext& c);

}  // namespace oscillab::cli
