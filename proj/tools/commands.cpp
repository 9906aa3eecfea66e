#include "commands.hpp"

#include <algorithm>
#include <cmath>

#include "oscillab/oscillab.hpp"

namespace oscillab::cli {

const ojson& Options::raw(const std::string& key) const {
    if (!values.contains(key)) throw ConfigError("missing required option: " + key);
    return values.at(key);
}

double Options::number(const std::string& key, double def) const {
    return has(key) ? values.at(key).get<double>() : def;
}

long long Options::integer(const std::string& key, long long def) const {
    return has(key) ? values.at(key).get<long long>() : def;
}

std::string Options::text(const std::string& key, const std::string& def) const {
    if (!has(key)) return def;
    const auto& v = values.at(key);
    return v.is_string() ? v.get<std::string>() : v.dump();
}

bool Options::flag(const std::string& key) const { return has(key) && values.at(key).get<bool>(); }

QuadratureConfig Options::quadrature() const {
    QuadratureConfig q;
    q.rel_tol = number("rel_tol", q.rel_tol);
    q.panels_per_period = static_cast<int>(integer("panels_per_period", q.panels_per_period));
    q.max_shells = static_cast<int>(integer("max_shells", q.max_shells));
    q.tail_epsilon = number("tail_epsilon", q.tail_epsilon);
    q.max_nodes = integer("max_nodes", q.max_nodes);
    try {
        q.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    return q;
}

namespace {

PhaseSpec phase_of(const Options& o, const std::string& def = "") {
    std::string t = o.text("phase", def);
    if (t.empty()) throw ConfigError("missing required option: phase");
    return parse_phase(t);
}

CarlemanFamily family_of(const Options& o, const std::string& def = "") {
    std::string t = o.text("family", def);
    if (t.empty()) throw ConfigError("missing required option: family");
    return parse_family(t);
}

std::vector<double> grid_of(const Options& o, const std::string& key, const std::string& def) {
    return grid_from(o.has(key) ? o.raw(key) : ojson(def));
}

std::string yes(bool b) { return b ? "true" : "false"; }

std::string level_str(const BangLevel& l) {
    if (l.infinite) return "inf";
    if (l.index.exact) return std::to_string(*l.index.exact);
    return "exp(" + num(l.index.log_n) + ")";
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

// ---------------------------------------------------------------- list-phases

Verdict cmd_list_phases(const CommandContext& c) {
    CsvWriter w(c.csv);
    w.header({"short_form", "variant", "name", "flat_at_0", "one_sided", "domain_radius", "json"});
    for (const char* s : {"power:alpha=1", "plateau:k=2,j0=1", "gevrey:s=2", "iterexp:k=2,s=2",
                          "logpower:alpha=2", "intermediate:k=2,alpha=1", "poly:c=0;0;0;1"}) {
        PhaseSpec p = parse_phase(s);
        ojson j = ojson::parse(phase_to_json(p));
        w.row({s, j["variant"].get<std::string>(), p.name(), yes(p.flat()), yes(p.one_sided()),
               num(p.domain_radius()), j.dump()});
    }
    return {};
}

// ---------------------------------------------------------------- compute-m

Verdict cmd_compute_m(const CommandContext& c) {
    const auto& o = c.opt;
    PhaseSpec spec = phase_of(o);
    QuadratureConfig q = o.quadrature();
    std::string method = o.text("method", "direct");
    if (method != "direct" && method != "substituted" && method != "both")
        throw ConfigError("method must be direct, substituted or both");
    CsvWriter w(c.csv);
    w.header({"phase", "lambda", "lambda_exact", "method", "value", "re", "im", "abs", "est_error",
              "nodes_used", "shells_used", "strategy", "truncation_bound"});
    auto emit = [&](const std::string& lam, const std::string& exact, const std::string& m,
                    const QuadratureReport& r) {
        w.row({spec.name(), lam, exact, m, complex_str(r.value), num(r.value.real()), num(r.value.imag()),
               num(std::abs(r.value)), num(r.est_error), std::to_string(r.nodes_used),
               std::to_string(r.shells_used), r.strategy, num(r.truncation_bound)});
    };
    Verdict v;
    if (o.has("n")) {
        const PlateauTable* tab = spec.plateau_table();
        if (!tab) throw ConfigError("--n selects the exact ladder frequency and needs a plateau phase");
        int n = static_cast<int>(o.integer("n", 0));
        OddProductLadder L = build_ladder(tab->k, tab->j0, std::max(n, 1));
        QuadratureReport r = compute_m_direct(spec, L, n, q);
        emit(num(to_double_big(L.Q_at(n))), to_decimal(L.Q_at(n)), "direct-exact", r);
        v.details["value"] = complex_str(r.value);
        return v;
    }
    double lam = o.number("lambda", std::nan(""));
    if (std::isnan(lam)) throw ConfigError("missing required option: lambda");
    QuadratureReport d, s;
    if (method != "substituted") {
        d = compute_m_direct(spec, lam, q);
        emit(num(lam), "", "direct", d);
    }
    if (method != "direct") {
        SubstitutionWeight wt = matched_weight(spec);
        s = compute_m_substituted(wt, weight_prefactor(wt), lam, q);
        emit(num(lam), "", "substituted", s);
    }
    if (method == "both") {
        QuadratureReport diff;
        diff.value = d.value - s.value;
        diff.est_error = d.est_error + s.est_error;
        diff.strategy = "difference";
        emit(num(lam), "", "difference", diff);
        double tol = o.number("tol", 1e-5);
        v.pass = std::abs(diff.value) <= tol;
        v.details["abs_difference"] = std::abs(diff.value);
        v.details["tol"] = tol;
    }
    return v;
}

// ---------------------------------------------------------------- verify-growth

namespace {

Verdict envelope_hierarchy(const CommandContext& c) {
    double lam = c.opt.number("lambda", 1e8);
    const std::vector<Envelope> order{Envelope::constant(),    Envelope::iter_log(3),
                                      Envelope::loglog(),      Envelope::log_pow(0.5),
                                      Envelope::log_over_iter_log(2), Envelope::log()};
    CsvWriter w(c.csv);
    w.header({"envelope", "lambda", "value", "strictly_above_previous"});
    Verdict v;
    double prev = -INFINITY;
    for (const auto& e : order) {
        double val = envelope_eval(e, lam);
        bool up = val > prev;
        v.pass = v.pass && up;
        w.row({e.name(), num(lam), num(val), yes(up)});
        prev = val;
    }
    return v;
}

}  // namespace

Verdict cmd_verify_growth(const CommandContext& c) {
    const auto& o = c.opt;
    if (o.flag("hierarchy")) return envelope_hierarchy(c);
    PhaseSpec spec = phase_of(o);
    Envelope env = parse_envelope(o.text("envelope", "log"));
    std::string mode = o.text("mode", "abs");
    if (mode != "abs" && mode != "negre") throw ConfigError("mode must be abs or negre");
    QuadratureConfig q = o.quadrature();
    int threads = static_cast<int>(o.integer("threads", 1));
    double band = o.number("band", 6.0);

    struct Point {
        GrowthSample s;
        std::string source;
    };
    std::vector<Point> pts;
    if (o.has("plateau_n_max")) {
        const PlateauTable* tab = spec.plateau_table();
        if (!tab) throw ConfigError("plateau_n_max needs a plateau phase");
        int N = static_cast<int>(o.integer("plateau_n_max", 0));
        int N0 = static_cast<int>(o.integer("plateau_n_min", 1));
        if (N0 < 1 || N < N0) throw ConfigError("need 1 <= plateau_n_min <= plateau_n_max");
        OddProductLadder L = build_ladder(tab->k, tab->j0, N);
        double cap = o.number("full_cap", 1e6);
        pts = parallel_map<Point>(static_cast<std::size_t>(N - N0 + 1), threads, [&](std::size_t i) {
            int n = static_cast<int>(i) + N0;
            GrowthSeries one;
            BigInt total = 0;
            for (int j = 1; j <= n; ++j) total += L.Q_at(n) / L.Q_at(j);
            Point p;
            if (to_double_big(total) <= cap) {
                QuadratureReport r = compute_m_direct(spec, L, n, q);
                one.add(L.Q_at(n), r.value, r.est_error);
                p.source = "full";
            } else {
                one.add(L.Q_at(n), cplx(-certified_nonneg_realpart(spec, L, n), 0.0), 0.0);
                p.source = "certified";
            }
            p.s = one.samples.front();
            return p;
        });
    } else {
        std::vector<double> lams;
        if (o.has("lambdas"))
            lams = list_from(o.raw("lambdas"));
        else
            lams = ladder_from(o.has("lambda_ladder") ? o.raw("lambda_ladder") : ojson("1e3,10,7"));
        pts = parallel_map<Point>(lams.size(), threads, [&](std::size_t i) {
            QuadratureReport r = compute_m_direct(spec, lams[i], q);
            GrowthSeries one;
            one.add(lams[i], r.value, r.est_error);
            return Point{one.samples.front(), "full"};
        });
    }
    GrowthSeries series;
    series.class_tag = spec.name();
    for (const auto& p : pts) series.samples.push_back(p.s);
    if (mode == "abs")
        for (const auto& p : pts)
            if (p.source == "certified")
                throw ConfigError("certified samples carry only -Re m; use mode negre");
    GrowthVerdict g = fit_growth(series, env, mode == "abs" ? FitMode::Abs : FitMode::NegRe, band);

    CsvWriter w(c.csv);
    w.header({"index", "lambda", "lambda_exact", "re", "im", "abs", "neg_re", "est_error", "source",
              "envelope", "ratio"});
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& s = pts[i].s;
        w.row({std::to_string(i), num(s.lambda), s.lambda_exact.value_or(""), num(s.m.real()), num(s.m.imag()),
               num(std::abs(s.m)), num(-s.m.real()), num(s.est_error), pts[i].source, num(g.envelope[i]),
               num(g.ratios[i])});
    }
    if (c.svg) {
        SvgSeries meas{mode == "abs" ? "|m|" : "-Re m", "#1f77b4", {}, {}, true};
        SvgSeries fit{env.name() + " x " + num(median(g.ratios)), "#d62728", {}, {}, false};
        double scale = median(g.ratios);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            meas.x.push_back(pts[i].s.lambda);
            meas.y.push_back(mode == "abs" ? std::abs(pts[i].s.m) : -pts[i].s.m.real());
            fit.x.push_back(pts[i].s.lambda);
            fit.y.push_back(scale * g.envelope[i]);
        }
        c.svg(svg_loglog(spec.name() + " vs " + env.name(), "lambda", mode == "abs" ? "|m(lambda)|" : "-Re m(lambda)",
                         {meas, fit}));
    }
    Verdict v;
    v.pass = g.pass;
    v.details = ojson{{"envelope", env.name()}, {"mode", mode},       {"band", g.band},
                      {"band_limit", band},     {"min_ratio", g.min_ratio}, {"max_ratio", g.max_ratio},
                      {"elasticity", g.elasticity}, {"monotone", g.monotone}};
    int certified = static_cast<int>(std::count_if(pts.begin(), pts.end(), [](const Point& p) { return p.source == "certified"; }));
    v.details["samples"] = ojson{{"full", static_cast<int>(pts.size()) - certified}, {"certified", certified}};
    return v;
}

// ---------------------------------------------------------------- verify-plateau

Verdict cmd_verify_plateau(const CommandContext& c) {
    const auto& o = c.opt;
    int k = static_cast<int>(o.integer("k", 2));
    int j0 = static_cast<int>(o.integer("j0", -1));
    if (j0 < 0) j0 = minimal_j0(k);
    int n_max = static_cast<int>(o.integer("n_max", 12));
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
    GrowthWindowConfig cfg;
    cfg.quad = o.quadrature();
    cfg.tol = o.number("tol", 1e-4);
    cfg.oscillation_cap = o.number("full_cap", 1e6);
    int threads = static_cast<int>(o.integer("threads", 1));
    OddProductLadder L = build_ladder(k, j0, n_max);
    PhaseSpec spec = PhaseSpec::plateau(k, j0);

    auto reports = parallel_map<GrowthWindowReport>(static_cast<std::size_t>(n_max), threads, [&](std::size_t i) {
        return verify_growth_window(L, spec, static_cast<int>(i) + 1, cfg);
    });
    Verdict v;
    CsvWriter w(c.csv);
    w.header({"n", "Q_n", "parity", "lower", "measured_neg_re", "abs_m", "certified", "upper", "mode", "pass"});
    for (const auto& r : reports) {
        bool parity = verify_plateau_parity(L, r.n);
        bool full = r.mode == "full";
        w.row({std::to_string(r.n), r.Q_n, yes(parity), num(r.lower), full ? num(r.neg_re) : "certified",
               full ? num(r.abs_m) : "", num(r.certified), num(r.upper), r.mode, yes(r.pass && parity)});
        v.pass = v.pass && r.pass && parity;
    }
    ojson ratio = ojson::object();
    if (n_max >= 5) {
        RatioReport rl = ratio_law(L, 5, n_max);
        ratio = ojson{{"n_lo", 5}, {"n_hi", n_max}, {"lo", rl.lo}, {"hi", rl.hi}, {"pass", rl.pass}};
        v.pass = v.pass && rl.pass;
    }
    SmoothnessReport sm = smoothness_proxy(k, j0);
    ojson rows = ojson::array();
    for (const auto& r : sm.rows)
        rows.push_back(ojson{{"m", r.m}, {"log_peak", r.log_peak}, {"argpeak", r.argpeak},
                             {"turnover", r.turnover}, {"decays", r.decays}});
    v.pass = v.pass && sm.pass;
    v.details = ojson{{"k", k}, {"j0", j0}, {"n_max", n_max}, {"ratio_law", ratio},
                      {"smoothness", ojson{{"j_max", sm.j_max}, {"j_check", sm.j_check}, {"rows", rows}, {"pass", sm.pass}}}};
    return v;
}

// ---------------------------------------------------------------- verify-flatbound

Verdict cmd_verify_flatbound(const CommandContext& c) {
    const auto& o = c.opt;
    PhaseSpec spec = phase_of(o, "gevrey:s=2");
    CarlemanFamily M = family_of(o, "gevrey:s=2");
    auto grid = grid_of(o, "grid", "0.02,0.5,256");
    auto mgrid = grid_of(o, "member_grid", "0.005,1,400");
    int n_lo = static_cast<int>(o.integer("n_lo", 0)), n_hi = static_cast<int>(o.integer("n_hi", 12));
    std::string expect = o.text("expect", "none");
    if (expect != "none" && expect != "bang" && expect != "taylor_legendre")
        throw ConfigError("expect must be none, bang or taylor_legendre");
    int min_run = static_cast<int>(o.integer("min_run", 10));
    double tol = o.number("tol", 1e-9);

    MembershipReport mem = verify_membership(spec, M, n_lo, n_hi, mgrid);
    const double K = mem.K_hat;
    Verdict v;
    std::string failure;
    CompareTable table;
    bool dominated = true;
    try {
        table = compare_methods(M, K, mem.stable, spec, grid, tol);
    } catch (const ClassMismatch& e) {
        dominated = false;
        failure = e.what();
    } catch (const DomainError& e) {
        if (mem.stable) throw;
        dominated = false;
        failure = e.what();
    }
    if (!dominated) {
        table = rank_bounds(M, K, grid);
        for (auto& r : table.rows) r.actual = log_abs_phi(spec, r.t);
    }
    CsvWriter w(c.csv);
    w.header({"t", "actual", "bang", "taylor_legendre", "winner", "bang_level", "actual_ln", "bang_ln",
              "taylor_legendre_ln", "dominated"});
    for (const auto& r : table.rows) {
        BangLevel lvl = bang_level(M, K, r.t);
        bool dom = less_equal(r.actual, r.bang) && less_equal(r.actual, r.tl);
        w.row({num(r.t), format_logmag(r.actual), format_logmag(r.bang), format_logmag(r.tl), r.winner,
               level_str(lvl), num(r.actual.lv), num(r.bang.lv), num(r.tl.lv), yes(dom)});
    }
    v.pass = mem.stable && dominated;
    ojson ordering = nullptr;
    if (expect != "none") {
        double t_star = 0.0;
        int run = ordering_prefix(table, expect, t_star);
        ordering = ojson{{"expect", expect}, {"run", run}, {"min_run", min_run}, {"t_star", t_star}};
        v.pass = v.pass && run >= min_run;
    }
    ojson chain = ojson::array();
    int samples = static_cast<int>(o.integer("chain_samples", 0));
    if (samples > 0) {
        auto logA = bang_sequence(M, K, 4000);
        for (int i = 0; i < samples; ++i) {
            double x = grid[static_cast<std::size_t>(i) * (grid.size() - 1) / std::max(samples - 1, 1)];
            BangLevel lvl = bang_level(M, K, x);
            if (lvl.infinite || !lvl.index.exact) continue;
            int ell = static_cast<int>(*lvl.index.exact);
            ChainResult cr = bang_chain_oracle(logA, x, ell);
            double packaged = logA[0] - ell * std::log(2.0);
            bool ok = cr.log_bound <= packaged + 1e-9 * std::max(1.0, std::abs(packaged));
            v.pass = v.pass && ok;
            chain.push_back(ojson{{"x", x}, {"ell", ell}, {"n", cr.n}, {"log_chain_bound", cr.log_bound},
                                  {"log_claim", cr.log_claim}, {"log_packaged", packaged}, {"ok", ok}});
        }
        if (static_cast<int>(chain.size()) < samples) v.pass = false;
    }
    v.details = ojson{{"K", K},
                      {"membership_stable", mem.stable},
                      {"membership_n", ojson::array({n_lo, n_hi})},
                      {"A0", table.A0},
                      {"dominated", dominated},
                      {"failure", failure},
                      {"ordering", ordering},
                      {"chain", chain}};
    return v;
}

// ---------------------------------------------------------------- verify-derivatives

Verdict cmd_verify_derivatives(const CommandContext& c) {
    const auto& o = c.opt;
    std::string check = o.text("check", "membership");
    CsvWriter w(c.csv);
    Verdict v;
    if (check == "membership") {
        PhaseSpec spec = phase_of(o);
        CarlemanFamily M = family_of(o);
        int n_lo = static_cast<int>(o.integer("n_lo", 0)), n_hi = static_cast<int>(o.integer("n_hi", 12));
        auto grid = grid_of(o, "grid", "0.005,1,400");
        std::string expect = o.text("expect", "stable");
        MembershipReport rep = verify_membership(spec, M, n_lo, n_hi, grid);
        w.header({"n", "sup_log", "argsup", "logM", "K_hat"});
        for (const auto& r : rep.rows)
            w.row({std::to_string(r.n), num(r.sup_log), num(r.argsup), num(r.logM), num(r.K_hat)});
        v.details = ojson{{"K_hat", rep.K_hat}, {"stable", rep.stable}, {"skipped_points", rep.skipped_points},
                          {"imprecise_values", rep.imprecise_values}};
        if (expect == "stable") {
            double k_max = o.number("k_max", 10.0);
            v.pass = rep.stable && rep.K_hat <= k_max;
        } else if (expect == "diverge") {
            int from = static_cast<int>(o.integer("growth_from", 6));
            double factor = o.number("growth_factor", 2.0);
            double a = 0.0, b = 0.0;
            for (const auto& r : rep.rows) {
                if (r.n == from) a = r.K_hat;
                if (r.n == n_hi) b = r.K_hat;
            }
            if (!(a > 0.0)) throw ConfigError("growth_from must lie inside the n range");
            v.details["growth"] = b / a;
            v.pass = b / a >= factor;
        } else {
            throw ConfigError("expect must be stable or diverge");
        }
    } else if (check == "triangle") {
        int n_max = static_cast<int>(o.integer("n_max", 40));
        LogDerivTriangle T = build_triangle(n_max);
        w.header({"n", "abs_row_sum", "n_factorial", "ok"});
        BigInt fact = 1;
        for (int n = 1; n <= n_max; ++n) {
            fact *= n;
            BigInt s = T.abs_row_sum(n);
            bool ok = s <= fact;
            v.pass = v.pass && ok;
            w.row({std::to_string(n), to_decimal(s), to_decimal(fact), yes(ok)});
        }
    } else if (check == "bell") {
        int k_max = static_cast<int>(o.integer("k_max", 20));
        auto B = bell_numbers(k_max);
        w.header({"k", "bell", "k_pow_k", "ok"});
        for (int k = 0; k <= k_max; ++k) {
            BigInt kk = boost::multiprecision::pow(BigInt(k), static_cast<unsigned>(k));
            bool ok = B[static_cast<std::size_t>(k)] <= kk;
            v.pass = v.pass && ok;
            w.row({std::to_string(k), to_decimal(B[static_cast<std::size_t>(k)]), to_decimal(kk), yes(ok)});
        }
    } else if (check == "two-path") {
        PhaseSpec spec = phase_of(o, "logpower:alpha=2");
        int n_max = static_cast<int>(o.integer("n_max", 8));
        auto pts = o.has("points") ? list_from(o.raw("points")) : std::vector<double>{0.1, 0.2, 0.3};
        double tol = o.number("tol", 1e-6);
        w.header({"t", "n", "triangle", "contour", "rel_error", "ok"});
        double worst = 0.0;
        for (double t : pts)
            for (int n = 1; n <= n_max; ++n) {
                TwoPathResult r = two_path_derivative(spec, t, n);
                bool ok = r.rel_error <= tol;
                worst = std::max(worst, r.rel_error);
                v.pass = v.pass && ok;
                w.row({num(t), std::to_string(n), num(r.triangle), num(r.contour), num(r.rel_error), yes(ok)});
            }
        v.details["max_rel_error"] = worst;
    } else if (check == "gk") {
        double beta = o.number("beta", 1.5);
        auto grid = grid_of(o, "grid", "1,30,40");
        GkReport r = gk_bound_check(beta, static_cast<int>(o.integer("k_lo", 1)),
                                    static_cast<int>(o.integer("k_hi", 10)), grid);
        w.header({"k", "C0", "worst_u"});
        for (const auto& row : r.rows) w.row({std::to_string(row.k), num(row.C0), num(row.worst_u)});
        v.pass = r.pass;
        v.details["C0"] = r.C0;
    } else if (check == "aq") {
        auto grid = grid_of(o, "grid", "10,1e6,40");
        AqReport r = AQ_check(static_cast<int>(o.integer("k", 2)), o.number("alpha", 1.0), grid);
        w.header({"u", "Qprime", "identity", "rel_error", "correction"});
        for (const auto& row : r.rows)
            w.row({num(row.u), num(row.Qprime), num(row.identity), num(row.rel_error), num(row.correction)});
        v.pass = r.pass;
    } else if (check == "ek") {
        auto grid = grid_of(o, "grid", "1,2,16");
        EkReport r = ek_bound_check(static_cast<int>(o.integer("k_max", 3)), static_cast<int>(o.integer("r_max", 12)), grid);
        w.header({"k", "r", "x", "ratio", "bound"});
        for (const auto& row : r.rows)
            w.row({std::to_string(row.k), std::to_string(row.r), num(row.x), num(row.ratio), num(row.bound)});
        v.pass = r.pass;
        v.details["fitted_A"] = r.fitted_A;
    } else if (check == "g") {
        auto grid = grid_of(o, "grid", "3,1e4,40");
        GReport r = g_bound_check(static_cast<int>(o.integer("k", 2)), o.number("alpha", 1.0),
                                  static_cast<int>(o.integer("r_max", 8)), grid);
        w.header({"r", "C", "worst_u"});
        for (const auto& row : r.rows) w.row({std::to_string(row.r), num(row.C), num(row.worst_u)});
        v.pass = r.pass;
    } else if (check == "flat-point") {
        PhaseSpec spec = phase_of(o, "gevrey:s=2");
        auto rows = flat_point_differences(spec, static_cast<int>(o.integer("m_max", 6)));
        w.header({"m", "level", "log_h", "log_ratio", "vanishing"});
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.log_h.size(); ++i)
                w.row({std::to_string(r.m), std::to_string(i), num(r.log_h[i]), num(r.log_ratio[i]), yes(r.vanishing)});
            v.pass = v.pass && r.vanishing;
        }
    } else {
        throw ConfigError("unknown check: " + check);
    }
    v.details["check"] = check;
    return v;
}

// ---------------------------------------------------------------- carleman

Verdict cmd_carleman(const CommandContext& c) {
    const auto& o = c.opt;
    CarlemanFamily M = family_of(o);
    std::string op = o.text("op", "tail");
    CsvWriter w(c.csv);
    w.header({"family", "op", "input", "value", "detail"});
    Verdict v;
    auto need = [&](const char* key) {
        if (!o.has(key)) throw ConfigError(std::string("op ") + op + " needs --" + key);
        return o.number(key, 0.0);
    };
    if (op == "tail") {
        auto N = static_cast<std::int64_t>(o.integer("N", 1));
        TailValue t = tail(M, N);
        w.row({M.name(), op, "N=" + std::to_string(N), t.diverges ? "inf" : num(t.value), "err=" + num(t.err)});
    } else if (op == "inverse-tail") {
        double r = need("r");
        TailIndex idx = inverse_tail_index(M, r);
        w.row({M.name(), op, "r=" + num(r), idx.exact ? std::to_string(*idx.exact) : "exp(" + num(idx.log_n) + ")",
               "log_n=" + num(idx.log_n)});
    } else if (op == "quasianalytic") {
        Tristate q = quasianalytic(M);
        w.row({M.name(), op, "", q == Tristate::True ? "true" : q == Tristate::False ? "false" : "unknown", ""});
    } else if (op == "legendre") {
        double y = need("y");
        LegendreResult r = legendre(M, y);
        std::string arg;
        for (auto n : r.argmax) arg += (arg.empty() ? "" : ";") + std::to_string(n);
        if (r.asymptotic) arg = "exp(" + num(r.log_argmax) + ")";
        w.row({M.name(), op, "y=" + num(y), r.asymptotic ? "exp(" + num(r.log_value) + ")" : num(r.value),
               "argmax=" + arg});
        long long brute = o.integer("brute", 0);
        if (brute > 0) {
            if (r.asymptotic) throw ConfigError("brute force needs a maximizer below the brute bound");
            double best = -INFINITY;
            std::vector<std::int64_t> at;
            for (std::int64_t n = 1; n <= brute; ++n) {
                double f = static_cast<double>(n) * y - M.phi(n);
                if (at.empty() || f > best + 1e-12 * std::max(1.0, std::abs(best))) {
                    best = f;
                    at = {n};
                } else if (std::abs(f - best) <= 1e-12 * std::max(1.0, std::abs(best))) {
                    at.push_back(n);
                }
            }
            std::string barg;
            for (auto n : at) barg += (barg.empty() ? "" : ";") + std::to_string(n);
            bool ok = std::abs(best - r.value) <= 1e-12 * std::max(1.0, std::abs(best)) && at == r.argmax;
            v.pass = ok;
            w.row({M.name(), "legendre-brute", "y=" + num(y) + ";n<=" + std::to_string(brute), num(best),
                   "argmax=" + barg});
        }
    } else if (op == "bang-level") {
        double K = need("K"), x = need("x");
        w.row({M.name(), op, "K=" + num(K) + ";x=" + num(x), level_str(bang_level(M, K, x)), ""});
    } else if (op == "taylor-legendre") {
        double K = need("K"), t = need("t");
        LogMag b = taylor_legendre_bound_log(M, K, t);
        w.row({M.name(), op, "K=" + num(K) + ";t=" + num(t), format_logmag(b), "ln=" + num(b.lv)});
    } else if (op == "shellsum") {
        double lam = need("lambda");
        w.row({M.name(), op, "lambda=" + num(lam), num(shellsum_upper(M, lam, o.number("c", 1.0))), ""});
    } else {
        throw ConfigError("unknown op: " + op);
    }
    return v;
}

// ---------------------------------------------------------------- vdc-check

Verdict cmd_vdc_check(const CommandContext& c) {
    const auto& o = c.opt;
    PhaseSpec spec = phase_of(o, "poly:c=0;0;0;1");
    auto lams = o.has("lambdas") ? list_from(o.raw("lambdas")) : std::vector<double>{1e5, 1e6};
    VdcCheck r = vdc_check(spec, o.number("fit_lambda", 1e4), lams, static_cast<int>(o.integer("j_lo", 0)),
                           static_cast<int>(o.integer("j_hi", 20)), o.number("safety", 2.0), o.number("c_max", 10.0),
                           o.quadrature());
    CsvWriter w(c.csv);
    w.header({"lambda", "j", "t_j", "Lambda", "abs_J", "est_error", "envelope", "ratio", "ok"});
    for (const auto& row : r.rows)
        w.row({num(row.lambda), std::to_string(row.shell.j), num(row.shell.t_j), num(row.shell.Lambda),
               num(row.shell.abs_J), num(row.shell.est_error), num(row.envelope), num(row.ratio),
               yes(row.ratio <= r.C)});
    Verdict v;
    v.pass = r.pass;
    v.details = ojson{{"k", r.k}, {"fit_lambda", r.fit_lambda}, {"max_fit_ratio", r.max_fit_ratio}, {"C", r.C}};
    return v;
}

// ---------------------------------------------------------------- poly-sweep

Verdict cmd_poly_sweep(const CommandContext& c) {
    const auto& o = c.opt;
    int d_lo = static_cast<int>(o.integer("d_min", 1)), d_hi = static_cast<int>(o.integer("d_max", 40));
    int trials = static_cast<int>(o.integer("trials", 200));
    double scale = o.number("scale", 100.0);
    auto seed = static_cast<std::uint64_t>(o.integer("seed", 1));
    double ratio_max = o.number("ratio_max", 20.0);
    SweepTable t = polynomial_sweep(d_lo, d_hi, trials, scale, seed, o.quadrature());
    CsvWriter w(c.csv);
    w.header({"d", "max_random", "extreme", "max_abs", "log_d", "ratio", "cap", "ok"});
    Verdict v;
    for (const auto& r : t.rows) {
        double logd = std::log(static_cast<double>(r.d));
        double cap = 3.0 * logd + 10.0;
        bool ok = r.max_abs <= cap && r.ratio <= ratio_max;
        v.pass = v.pass && ok;
        w.row({std::to_string(r.d), num(r.max_random), num(r.extreme), num(r.max_abs), num(logd), num(r.ratio),
               num(cap), yes(ok)});
    }
    v.details = ojson{{"seed", seed}, {"trials", trials}, {"scale", scale}, {"max_ratio", t.max_ratio}};
    return v;
}

}  // namespace oscillab::cli
