#include "trirank/cli.hpp"

#include "trirank/canonical_json.hpp"
#include "trirank/errors.hpp"
#include "trirank/estimators.hpp"
#include "trirank/pgroup.hpp"
#include "trirank/plinalg.hpp"
#include "trirank/rng.hpp"
#include "trirank/row_sampler.hpp"
#include "trirank/selftest.hpp"
#include "trirank/simulate.hpp"
#include "trirank/theory.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <boost/algorithm/string.hpp>
#include <fmt/format.h>

namespace trirank {

namespace {

constexpr std::int64_t kMaxPmfRows = 100000;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), fmt::format("cannot open '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), fmt::format("cannot write '{}'", path));
    f << text;
    require(static_cast<bool>(f), fmt::format("error while writing '{}'", path));
}

std::string json_line(const Json& j) { return to_canonical(j) + "\n"; }

// --config FILE holds key=value lines named like the flags. They are
// appended as flags unless the command line already sets the same flag.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            require(i + 1 < args.size(), "--config needs a file name");
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].starts_with("--config=")) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return args;

    std::set<std::string> given;
    for (const auto& a : args) {
        if (a.starts_with("-")) given.insert(a.substr(0, a.find('=')));
    }
    std::istringstream in(read_file(path));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        boost::algorithm::trim(line);
        if (line.empty() || line.starts_with("#")) continue;
        const auto eq = line.find('=');
        require(eq != std::string::npos, fmt::format("{}:{}: expected key=value", path, lineno));
        std::string key = boost::algorithm::trim_copy(line.substr(0, eq));
        std::string value = boost::algorithm::trim_copy(line.substr(eq + 1));
        require(!key.empty(), fmt::format("{}:{}: empty key", path, lineno));
        // the only short flags are the upper-case ones (-E, -G)
        const bool short_flag = key.size() == 1 && std::isupper(static_cast<unsigned char>(key[0]));
        const std::string flag = (short_flag ? "-" : "--") + key;
        if (given.contains(flag)) continue;
        args.push_back(flag);
        args.push_back(value);
    }
    return args;
}

std::vector<Partition> parse_lambdas(const std::string& text) {
    std::vector<std::string> pieces;
    boost::algorithm::split(pieces, text, boost::algorithm::is_any_of(";"));
    std::vector<Partition> out;
    for (const auto& piece : pieces) out.push_back(Partition::parse(piece));
    return out;
}

/// α if the law is symmetric mod p (equal mass on the nonzero residues).
std::optional<double> symmetric_alpha(const EntryDist& dist) {
    if (dist.is_uniform()) return 1.0 / static_cast<double>(dist.p());
    std::vector<double> mass(dist.p(), 0.0);
    for (auto [r, q] : dist.reduced(1).support()) mass[r] += q;
    for (u64 r = 2; r < dist.p(); ++r) {
        if (std::fabs(mass[r] - mass[1]) > 1e-12) return std::nullopt;
    }
    return mass[0];
}

Json estimate_json(const EstimateResult& r) {
    Json diag = Json::object();
    for (const auto& [k, v] : r.diagnostics) diag[k] = v;
    return {{"estimate", r.estimate}, {"stderr", r.std_error}, {"trials", r.trials},
            {"n", r.n},               {"seed", r.seed},         {"diagnostics", diag}};
}

struct Common {
    std::string out;
    std::string format = "json";
    std::size_t workers = 0;
};

void add_common(CLI::App* cmd, Common& c, bool csv) {
    cmd->add_option("--out", c.out, "Output file (default: standard output)");
    if (csv) cmd->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

struct PmfArgs {
    Common common{.out = "", .format = "csv"};
    u64 p = 0;
    double chi = 0;
    std::int64_t xmin = 0;
    std::int64_t xmax = 0;
};

int cmd_theory_pmf(const PmfArgs& a, std::ostream& out) {
    require(a.xmin <= a.xmax, fmt::format("xmin = {} exceeds xmax = {}", a.xmin, a.xmax));
    require(a.xmax - a.xmin < kMaxPmfRows, "range too long");
    require(is_prime(a.p), fmt::format("p = {} is not prime", a.p));
    Json rows = Json::array();
    std::string csv = "x,pmf,cumulative\n";
    double cumulative = 0;
    for (std::int64_t x = a.xmin; x <= a.xmax; ++x) {
        const double v = pmf_L1(a.p, a.chi, x);
        cumulative += v;
        rows.push_back({{"x", x}, {"pmf", v}, {"cumulative", cumulative}});
        csv += fmt::format("{},{:.17g},{:.17g}\n", x, v, cumulative);
    }
    const Json config = {{"command", "theory-pmf"}, {"p", a.p}, {"chi", a.chi}, {"xmin", a.xmin}, {"xmax", a.xmax}};
    if (a.common.format == "csv") {
        csv += fmt::format("sum,{:.17g},\n", cumulative);
        csv += "# config " + to_canonical(config) + "\n";
        write_output(csv, a.common.out, out);
    } else {
        write_output(json_line({{"config", config}, {"rows", rows}, {"sum", cumulative}}), a.common.out, out);
    }
    return kExitOk;
}

struct Chi0Args {
    Common common;
    u64 p = 0;
    std::optional<double> alpha;
    std::optional<std::string> dist;
    std::size_t n = 1000;
    u64 trials = 0;
    std::optional<u64> seed;
    std::string method = "conditioned";
};

int cmd_chi0(const Chi0Args& a, std::ostream& out) {
    require(a.alpha.has_value() != a.dist.has_value(), "give exactly one of --alpha and --dist");
    require(is_prime(a.p), fmt::format("p = {} is not prime", a.p));
    const Chi0Method method = a.method == "plain" ? Chi0Method::plain : Chi0Method::conditioned;
    Json config = {{"command", "chi0"}, {"p", a.p}, {"n", a.n}, {"trials", a.trials}, {"method", a.method}};
    Json result = Json::object();

    auto estimate_at = [&](const EntryDist& law, std::size_t n) {
        require(a.seed.has_value(), "--seed is required for the estimator");
        return estimate_chi0(law, n, a.trials, *a.seed, method, a.common.workers);
    };

    if (a.alpha) {
        config["alpha"] = *a.alpha;
        SeriesDiagnostics diag;
        const double closed = chi0_symmetric(a.p, *a.alpha, &diag);
        result["closed_form"] = closed;
        result["closed_form_terms"] = diag.terms;
        result["closed_form_tail_bound"] = diag.tail_bound;
        if (a.trials > 0) {
            const EstimateResult e = estimate_at(EntryDist::symmetric(a.p, *a.alpha), a.n);
            result["estimate"] = estimate_json(e);
            result["z_score"] = e.std_error > 0 ? (e.estimate - closed) / e.std_error : 0.0;
            result["within_3_stderr"] = std::fabs(e.estimate - closed) <= 3 * e.std_error + 1e-12;
        }
    } else {
        const EntryDist law = EntryDist::parse(*a.dist, a.p, 1);
        config["dist"] = law.describe();
        require(a.trials >= 2, "--trials (at least 2) is required with --dist");
        Json table = Json::array();
        for (std::size_t mult : {1, 2, 4}) {
            const EstimateResult e = estimate_at(law, a.n * mult);
            if (mult == 1) result["estimate"] = estimate_json(e);
            table.push_back({{"n", e.n}, {"estimate", e.estimate}, {"stderr", e.std_error}});
        }
        result["convergence"] = table;
    }
    if (a.seed) config["seed"] = *a.seed;
    result["config"] = config;
    write_output(json_line(result), a.common.out, out);
    return kExitOk;
}

struct SimulateArgs {
    Common common;
    u64 p = 0;
    int d = 1;
    std::size_t n = 0;
    u64 trials = 0;
    std::string dist = "uniform";
    u64 seed = 0;
    std::string zeta = "auto";
    int precision = 0;
    double budget = 1e12;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    require(is_prime(a.p), fmt::format("p = {} is not prime", a.p));
    require(a.d >= 1, "d must be positive");
    ExperimentConfig cfg;
    cfg.p = a.p;
    cfg.d = a.d;
    cfg.n = a.n;
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.precision = a.precision > 0 ? a.precision : default_precision(a.p, a.d);
    require(a.d + 1 <= cfg.precision, fmt::format("d = {} needs precision E >= {}", a.d, a.d + 1));
    cfg.dist = EntryDist::parse(a.dist, a.p, cfg.precision);
    if (a.zeta != "auto") {
        double z = 0;
        try {
            std::size_t used = 0;
            z = std::stod(a.zeta, &used);
            require(used == a.zeta.size(), "");
        } catch (const std::exception&) {
            throw ValidationError(fmt::format("--zeta must be 'auto' or a number, got '{}'", a.zeta));
        }
        cfg.zeta = z;
    }
    cfg.workers = a.common.workers;
    cfg.budget = a.budget;
    const FluctuationHistogram h = run_experiment(cfg);
    write_output(json_line(histogram_to_json(h)), a.common.out, out);
    return kExitOk;
}

struct CompareArgs {
    Common common;
    std::string hist;
    std::optional<double> chi0;
    std::optional<double> alpha;
    std::optional<std::string> lambdas;
    std::optional<u64> seed;
};

int cmd_compare(const CompareArgs& a, std::ostream& out) {
    require(a.chi0.has_value() != a.alpha.has_value(), "give exactly one of --chi0 and --alpha");
    const FluctuationHistogram h = histogram_from_json(parse_json(read_file(a.hist)));
    const double chi0 = a.chi0 ? *a.chi0 : chi0_symmetric(h.p, *a.alpha);
    const TheoryParams params = make_theory_params(h.p, h.d, h.zeta, chi0);
    const std::string lambda_text = a.lambdas ? *a.lambdas : (h.d == 1 ? "1;2" : "1;1,1");
    const std::vector<Partition> lambdas = parse_lambdas(lambda_text);
    const u64 seed = a.seed ? *a.seed : h.seed;

    FitReport report;
    if (h.d == 1) {
        report = compare_to_theory(h, params);
    } else {
        report.params = params;
    }
    report.moments = compare_moments(h, params, lambdas, seed);

    Json config = {{"command", "compare"}, {"hist", a.hist}, {"lambdas", lambda_text}, {"seed", seed}};
    config["chi0_source"] = a.chi0 ? "explicit" : "alpha";
    if (a.alpha) config["alpha"] = *a.alpha;
    Json hist_echo = histogram_to_json(h);
    hist_echo.erase("counts");
    config["histogram"] = hist_echo;

    if (a.common.format == "csv") {
        write_output(report_to_csv(report) + "# config " + to_canonical(config) + "\n", a.common.out, out);
    } else {
        Json j = report_to_json(report);
        j["config"] = config;
        write_output(json_line(j), a.common.out, out);
    }
    return kExitOk;
}

struct MomentsArgs {
    Common common;
    u64 p = 0;
    std::string group;
    std::size_t n = 0;
    u64 trials = 0;
    std::optional<std::string> dist;
    std::optional<double> alpha;
    u64 seed = 0;
    int precision = 0;
    double budget = 1e12;
    std::size_t chi0_n = 1000;
    u64 chi0_trials = 20000;
};

int cmd_moments(const MomentsArgs& a, std::ostream& out) {
    require(is_prime(a.p), fmt::format("p = {} is not prime", a.p));
    require(!(a.dist && a.alpha), "give at most one of --dist and --alpha");
    const Partition g = Partition::parse(a.group);
    const int precision = a.precision > 0 ? a.precision : std::max(1, g.largest());
    require(g.largest() <= precision, fmt::format("G has exponent p^{} above the precision E = {}", g.largest(), precision));
    const EntryDist law = a.alpha ? EntryDist::symmetric(a.p, *a.alpha) : EntryDist::parse(a.dist.value_or("uniform"), a.p, precision);
    const int ell = g.size();

    Json config = {{"command", "moments"}, {"p", a.p}, {"G", g.parts()}, {"n", a.n}, {"trials", a.trials},
                   {"seed", a.seed},       {"E", precision}, {"dist", law.describe()}};
    if (a.alpha) config["alpha"] = *a.alpha;

    const EstimateResult e = estimate_hom_moment(law, g, a.n, a.trials, a.seed, a.common.workers, a.budget);
    const BigInt mc = maximal_chain_count(g, a.p);

    Json result = {{"config", config}, {"empirical", estimate_json(e)}, {"mc", mc.str()}, {"ell", ell}};
    double chi0 = 0;
    if (const auto alpha = symmetric_alpha(law)) {
        chi0 = chi0_symmetric(a.p, *alpha);
        result["chi0_source"] = "closed_form";
    } else {
        const EstimateResult c = estimate_chi0(law.reduced(1), a.chi0_n, a.chi0_trials, derive_stream_seed(a.seed, 0xc410), Chi0Method::conditioned, a.common.workers);
        result["chi0_estimate"] = estimate_json(c);
        result["chi0_source"] = "estimate";
        chi0 = c.estimate;
    }
    result["chi0"] = chi0;
    result["theory"] = static_cast<double>(std::pow(static_cast<long double>(chi0), ell) /
                                           std::tgamma(static_cast<long double>(ell) + 1) * mc.convert_to<long double>());
    write_output(json_line(result), a.common.out, out);
    return kExitOk;
}

struct McArgs {
    Common common{.out = "", .format = "text"};
    u64 p = 0;
    std::string partition;
};

int cmd_mc(const McArgs& a, std::ostream& out) {
    require(is_prime(a.p), fmt::format("p = {} is not prime", a.p));
    const Partition l = Partition::parse(a.partition);
    const BigInt mc = maximal_chain_count(l, a.p);
    if (a.common.format == "json") {
        write_output(json_line({{"config", {{"command", "mc"}, {"p", a.p}, {"partition", l.parts()}}}, {"mc", mc.str()}}),
                     a.common.out, out);
    } else {
        write_output(mc.str() + "\n", a.common.out, out);
    }
    return kExitOk;
}

struct DumpArgs {
    Common common;
    u64 p = 0;
    int precision = 1;
    std::size_t n = 0;
    std::string dist = "uniform";
    u64 seed = 0;
};

int cmd_matrix_dump(const DumpArgs& a, std::ostream& out) {
    require(is_prime(a.p), fmt::format("p = {} is not prime", a.p));
    require(a.n >= 1 && a.n <= 4096, "matrix-dump takes 1 <= n <= 4096");
    const EntryDist law = EntryDist::parse(a.dist, a.p, a.precision);
    Rng rng = make_stream(a.seed, 0);
    std::ostringstream text;
    write_matrix(text, sample_matrix(law, a.n, rng));
    write_output(text.str(), a.common.out, out);
    return kExitOk;
}

struct ValuationsArgs {
    Common common;
    std::string in;
    int d = 0;
};

int cmd_valuations(const ValuationsArgs& a, std::ostream& out) {
    std::istringstream in(read_file(a.in));
    const TriMatrix m = read_matrix(in);
    const CokernelType ct = invariant_valuations(m);
    Json vals = Json::array();
    for (int v : ct.valuations) {
        if (v == CokernelType::kInfinite) {
            vals.push_back(nullptr);
        } else {
            vals.push_back(v);
        }
    }
    Json result = {{"config", {{"command", "valuations"}, {"in", a.in}}},
                   {"p", m.modulus().p()},
                   {"E", ct.precision},
                   {"n", ct.n},
                   {"valuations", vals},
                   {"corank_mod_p", ct.n - ct.count_below(1)}};
    if (a.d > 0) {
        require(a.d <= ct.precision, fmt::format("d = {} exceeds the precision E = {}", a.d, ct.precision));
        result["rank_profile"] = rank_profile(ct, a.d);
    }
    write_output(json_line(result), a.common.out, out);
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Random lower triangular matrices: cokernel statistics and their limit law", "trirank"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::size_t workers = 0;
    auto add_workers = [&](CLI::App* cmd) {
        cmd->add_option("--workers", workers, "Worker threads (0: TRIRANK_WORKERS or all cores)");
    };

    PmfArgs pmf;
    auto* c_pmf = app.add_subcommand("theory-pmf", "Table of the one-dimensional limit pmf");
    c_pmf->add_option("--p", pmf.p)->required();
    c_pmf->add_option("--chi", pmf.chi)->required();
    c_pmf->add_option("--xmin", pmf.xmin)->required();
    c_pmf->add_option("--xmax", pmf.xmax)->required();
    add_common(c_pmf, pmf.common, true);

    Chi0Args chi0;
    auto* c_chi0 = app.add_subcommand("chi0", "Closed form and Monte Carlo estimate of chi0");
    c_chi0->add_option("--p", chi0.p)->required();
    c_chi0->add_option("--alpha", chi0.alpha, "P(xi = 0 mod p) for the symmetric law");
    c_chi0->add_option("--dist", chi0.dist, "Law mod p: 'r:w,...', 'symmetric:alpha=A' or 'uniform'");
    c_chi0->add_option("--n", chi0.n)->capture_default_str();
    c_chi0->add_option("--trials", chi0.trials, "Monte Carlo trials (0 skips the estimate with --alpha)");
    c_chi0->add_option("--seed", chi0.seed);
    c_chi0->add_option("--method", chi0.method)->check(CLI::IsMember({"conditioned", "plain"}))->capture_default_str();
    add_common(c_chi0, chi0.common, false);
    add_workers(c_chi0);

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Histogram of centered rank fluctuations");
    c_sim->add_option("--p", sim.p)->required();
    c_sim->add_option("--d", sim.d)->capture_default_str();
    c_sim->add_option("--n", sim.n)->required();
    c_sim->add_option("--trials", sim.trials)->required();
    c_sim->add_option("--dist", sim.dist)->capture_default_str();
    c_sim->add_option("--seed", sim.seed)->required();
    c_sim->add_option("--zeta", sim.zeta, "'auto' (fractional part of -log_p n) or a value in [0, 1)")->capture_default_str();
    c_sim->add_option("-E,--precision", sim.precision, "Working precision p^E (default d + 8)");
    c_sim->add_option("--budget", sim.budget)->capture_default_str();
    add_common(c_sim, sim.common, false);
    add_workers(c_sim);

    CompareArgs cmp;
    auto* c_cmp = app.add_subcommand("compare", "Goodness of fit of a histogram against the limit law");
    c_cmp->add_option("--hist", cmp.hist)->required();
    c_cmp->add_option("--chi0", cmp.chi0);
    c_cmp->add_option("--alpha", cmp.alpha);
    c_cmp->add_option("--lambdas", cmp.lambdas, "Partitions separated by ';', e.g. \"2,1;1,1\"");
    c_cmp->add_option("--seed", cmp.seed, "Bootstrap seed (default: the histogram's seed)");
    add_common(c_cmp, cmp.common, true);

    MomentsArgs mom;
    auto* c_mom = app.add_subcommand("moments", "Rescaled Hom moments E|Hom(cok, G)| / n^|G|");
    c_mom->add_option("--p", mom.p)->required();
    c_mom->add_option("-G,--group", mom.group, "Type of G, e.g. \"1,1\"; empty for the trivial group")->required();
    c_mom->add_option("--n", mom.n)->required();
    c_mom->add_option("--trials", mom.trials)->required();
    c_mom->add_option("--dist", mom.dist);
    c_mom->add_option("--alpha", mom.alpha);
    c_mom->add_option("--seed", mom.seed)->required();
    c_mom->add_option("-E,--precision", mom.precision);
    c_mom->add_option("--budget", mom.budget)->capture_default_str();
    c_mom->add_option("--chi0-n", mom.chi0_n)->capture_default_str();
    c_mom->add_option("--chi0-trials", mom.chi0_trials)->capture_default_str();
    add_common(c_mom, mom.common, false);
    add_workers(c_mom);

    McArgs mc;
    auto* c_mc = app.add_subcommand("mc", "Number of maximal subgroup chains of a finite abelian p-group");
    c_mc->add_option("--p", mc.p)->required();
    c_mc->add_option("--partition", mc.partition, "Type of the group itself")->required();
    c_mc->add_option("--out", mc.common.out);
    c_mc->add_option("--format", mc.common.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();

    SelftestOptions st;
    auto* c_st = app.add_subcommand("selftest", "Check the fast paths against brute-force oracles");
    c_st->add_option("--seed", st.seed)->capture_default_str();

    DumpArgs dump;
    auto* c_dump = app.add_subcommand("matrix-dump", "Write one sampled matrix as text");
    c_dump->add_option("--p", dump.p)->required();
    c_dump->add_option("-E,--precision", dump.precision)->capture_default_str();
    c_dump->add_option("--n", dump.n)->required();
    c_dump->add_option("--dist", dump.dist)->capture_default_str();
    c_dump->add_option("--seed", dump.seed)->required();
    add_common(c_dump, dump.common, false);

    ValuationsArgs val;
    auto* c_val = app.add_subcommand("valuations", "Smith valuations of a matrix written by matrix-dump");
    c_val->add_option("--in", val.in)->required();
    c_val->add_option("--d", val.d, "Also report rank(p^{i-1} cok) for i <= d");
    add_common(c_val, val.common, false);

    try {
        std::vector<std::string> args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    chi0.common.workers = sim.common.workers = mom.common.workers = workers;
    try {
        if (c_pmf->parsed()) return cmd_theory_pmf(pmf, out);
        if (c_chi0->parsed()) return cmd_chi0(chi0, out);
        if (c_sim->parsed()) return cmd_simulate(sim, out);
        if (c_cmp->parsed()) return cmd_compare(cmp, out);
        if (c_mom->parsed()) return cmd_moments(mom, out);
        if (c_mc->parsed()) return cmd_mc(mc, out);
        if (c_st->parsed()) return run_selftest(out, st) == 0 ? kExitOk : kExitFailure;
        if (c_dump->parsed()) return cmd_matrix_dump(dump, out);
        if (c_val->parsed()) return cmd_valuations(val, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}

} // namespace trirank
