#include "cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <tuple>
#include <ostream>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "freeholo/domain.hpp"
#include "freeholo/errors.hpp"
#include "freeholo/expand.hpp"
#include "freeholo/json_io.hpp"
#include "freeholo/ncharness.hpp"
#include "freeholo/polyparse.hpp"
#include "freeholo/realization.hpp"

namespace freeholo::cli {

namespace {

struct RunConfig {
    std::string subcommand;
    std::string delta_path;
    std::string colligation_path;
    std::string point_path;
    std::string output_path;
    std::string expr;
    std::optional<std::uint64_t> seed;
    std::size_t trials = 200;
    double tol = 1e-8;
    std::size_t threads = 1;
    double shrink = 0.5;
    double cond_cap = 50.0;
    std::size_t degree = 8;
    std::size_t nodes = 0;
    bool balanced_certified = false;
    std::optional<std::size_t> neumann;
    std::size_t n = 3;
    std::size_t count = 1;
    int nvars = 0;
    std::vector<std::string> suites;
    bool plot_data = false;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("freeholo", sink);
    logger->set_pattern("[%l] %v");
    logger->set_level(spdlog::level::warn);
    if (const char* env = std::getenv("FREEHOLO_LOG")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to "off"; keep the default in that case.
        if (level != spdlog::level::off || std::string(env) == "off") logger->set_level(level);
    }
    return logger;
}

PolyMatrix load_delta(const RunConfig& cfg) {
    if (cfg.delta_path.empty()) throw FixtureError("--delta is required");
    return parse_delta(read_json_file(cfg.delta_path));
}

RealizedFunction load_realized(const RunConfig& cfg, const PolyMatrix& delta) {
    if (cfg.colligation_path.empty()) throw FixtureError("--colligation is required");
    Colligation v = colligation_from_json(read_json_file(cfg.colligation_path));
    if (v.rows() != delta.rows() || v.cols() != delta.cols()) {
        throw FixtureError("colligation shape (I, J) does not match delta");
    }
    return RealizedFunction(std::move(v), delta);
}

MatrixTuple load_point(const RunConfig& cfg, const PolyMatrix& delta) {
    if (cfg.point_path.empty()) throw FixtureError("--point is required");
    MatrixTuple x = tuple_from_json(read_json_file(cfg.point_path));
    if (static_cast<int>(x.size()) != delta.nvars()) throw FixtureError("point has the wrong number of variables");
    return x;
}

std::uint64_t require_seed(const RunConfig& cfg) {
    if (!cfg.seed) throw FixtureError("--seed is required for " + cfg.subcommand);
    return *cfg.seed;
}

/// CSV rows "series,index,value" for --plot-data.
struct PlotData {
    std::vector<std::tuple<std::string, std::size_t, double>> rows;

    void add(const std::string& series, std::size_t index, double value) { rows.emplace_back(series, index, value); }
};

json cmd_eval(const RunConfig& cfg, spdlog::logger& log, PlotData& plot) {
    const PolyMatrix delta = load_delta(cfg);
    const RealizedFunction f = load_realized(cfg, delta);
    const MatrixTuple x = load_point(cfg, delta);
    const Membership m = is_member(delta, x);
    log.info("||delta(x)|| = {}", m.norm);
    if (!m.member) {
        throw DomainError("point lies outside the domain: ||delta(x)|| = " + std::to_string(m.norm), m.norm);
    }
    const CMatrix value = eval_exact(f, x);
    json out{{"value", matrix_to_json(value)},
             {"norm", opnorm(value)},
             {"membership", {{"member", m.member}, {"delta_norm", m.norm}}},
             {"isometric", f.isometric()}};
    if (cfg.neumann) {
        out["neumann"] = neumann_to_json(eval_neumann(f, x, *cfg.neumann));
        if (cfg.plot_data && *cfg.neumann > 0) {
            for (const auto& r : neumann_sweep(f, x, *cfg.neumann)) {
                plot.add("neumann_error", r.terms_used, opnorm(r.value - value));
                plot.add("neumann_tail_bound", r.terms_used, r.tail_bound);
            }
        }
    }
    return out;
}

json cmd_expand(const RunConfig& cfg, spdlog::logger& log, PlotData& plot) {
    const PolyMatrix delta = load_delta(cfg);
    const RealizedFunction f = load_realized(cfg, delta);
    SeriesExpansion s = symbolic_expand(f, cfg.degree);
    json extra;
    if (!cfg.point_path.empty()) {
        const MatrixTuple x = load_point(cfg, delta);
        bool exact = false;
        const auto r_adm = admissible_radius(delta, x, &exact);
        if (!r_adm) throw DomainError("no admissible radius above 1 at the given point", delta_norm(delta, x));
        const double r = 0.5 * (1.0 + *r_adm);
        const std::size_t samples = cfg.nodes ? cfg.nodes : default_dft_nodes(cfg.degree);
        const CauchyReport c = cauchy_certificate(as_map(f), delta, x, r, samples, cfg.degree, cfg.tol);
        log.info("Cauchy certificate at r = {}: M = {}, pass = {}", r, c.bound, c.pass);
        if (c.pass) s.growth = GrowthCertificate{c.bound, c.radius};
        for (std::size_t k = 0; k < c.component_norms.size(); ++k) {
            plot.add("component_norm", k, c.component_norms[k]);
            plot.add("component_bound", k, c.component_bounds[k]);
        }
        extra = json{{"radius", c.radius},
                     {"bound", c.bound},
                     {"component_norms", c.component_norms},
                     {"component_bounds", c.component_bounds},
                     {"pass", c.pass}};
    }
    json out = series_to_json(s);
    if (!extra.is_null()) out["cauchy"] = extra;
    return out;
}

std::vector<std::string> default_suites(bool realized) {
    std::vector<std::string> s{"intertwining", "direct_sums", "projection_lemma", "ssoc", "algebra_membership"};
    if (realized) s.push_back("series_equivalence");
    return s;
}

json cmd_proptest(const RunConfig& cfg, spdlog::logger& log, std::vector<PropertyReport>& reports) {
    const std::uint64_t seed = require_seed(cfg);
    const PolyMatrix delta = load_delta(cfg);
    std::optional<RealizedFunction> realized;
    Evaluator f = [&] {
        if (!cfg.colligation_path.empty()) {
            realized.emplace(load_realized(cfg, delta));
            return realized_evaluator(*realized);
        }
        if (cfg.expr.empty()) throw FixtureError("proptest needs --colligation or --expr");
        return polynomial_evaluator(parse_poly(cfg.expr, delta.nvars()), delta);
    }();

    HarnessOptions opts;
    opts.shrink = cfg.shrink;
    opts.cond_cap = cfg.cond_cap;
    opts.tol = cfg.tol;
    opts.threads = cfg.threads;

    const auto suites = cfg.suites.empty() ? default_suites(realized.has_value()) : cfg.suites;
    for (const auto& suite : suites) {
        log.info("running suite {}", suite);
        if (suite == "intertwining") {
            reports.push_back(check_intertwining(f, cfg.trials, seed, opts));
        } else if (suite == "direct_sums") {
            reports.push_back(check_direct_sums(f, cfg.trials, seed, opts));
        } else if (suite == "projection_lemma") {
            reports.push_back(check_projection_lemma(f, cfg.trials, seed, opts));
        } else if (suite == "ssoc") {
            // Entries decay along the diagonal so truncations converge strongly.
            Rng rng(seed);
            SamplerOptions so;
            so.shrink = cfg.shrink;
            so.decay = 0.5;
            const std::size_t n = 32;
            const MatrixTuple x = sample_point(delta, n, rng, so);
            const CMatrix v = CMatrix::Identity(static_cast<Eigen::Index>(n), 2);
            reports.push_back(check_ssoc(f, x, v, {4, 8, 12, 16, 20, 24, 28, 32}, std::max(cfg.tol, 1e-6)));
        } else if (suite == "algebra_membership") {
            Rng rng(seed);
            SamplerOptions so;
            so.shrink = cfg.shrink;
            const MatrixTuple x = sample_point(delta, 3, rng, so);
            reports.push_back(check_algebra_membership(f, x, {0, 1, 2, 3, 4}, cfg.tol));
        } else if (suite == "series_equivalence") {
            if (!realized) throw FixtureError("series_equivalence needs --colligation");
            reports.push_back(check_series_equivalence(*realized, cfg.trials, seed, cfg.balanced_certified, opts));
        } else {
            throw FixtureError("unknown suite '" + suite + "'");
        }
        log.info("suite {} verdict {}", suite, to_string(reports.back().verdict));
    }

    json arr = json::array();
    bool all_pass = true;
    for (const auto& r : reports) {
        arr.push_back(report_to_json(r));
        all_pass = all_pass && r.passed();
    }
    return json{{"evaluator", f.name}, {"seed", seed}, {"reports", std::move(arr)}, {"pass", all_pass}};
}

json cmd_parse(const RunConfig& cfg) {
    if (cfg.expr.empty()) throw FixtureError("--expr is required");
    const int d = cfg.nvars > 0 ? cfg.nvars : std::max(1, scan_max_variable(cfg.expr));
    const FreePoly p = parse_poly(cfg.expr, d);
    return json{{"canonical", print_poly(p)}, {"poly", poly_to_json(p)}};
}

json cmd_sample(const RunConfig& cfg) {
    const std::uint64_t seed = require_seed(cfg);
    const PolyMatrix delta = load_delta(cfg);
    Rng rng(seed);
    SamplerOptions so;
    so.shrink = cfg.shrink;
    json points = json::array();
    for (std::size_t k = 0; k < cfg.count; ++k) {
        MatrixTuple x = sample_point(delta, cfg.n, rng, so);
        json p = tuple_to_json(x);
        p["delta_norm"] = delta_norm(delta, x);
        points.push_back(std::move(p));
    }
    return json{{"seed", seed}, {"points", std::move(points)}};
}

void write_plot_data(const std::string& path, const PlotData& plot) {
    std::ofstream csv(path);
    if (!csv) throw FixtureError("cannot write '" + path + "'");
    csv << "series,index,value\n";
    csv.precision(17);
    for (const auto& [series, index, value] : plot.rows) csv << series << ',' << index << ',' << value << '\n';
}

void add_shared(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--delta", cfg.delta_path, "delta fixture (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--colligation", cfg.colligation_path, "colligation fixture (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--trials", cfg.trials, "trials per suite")->check(CLI::PositiveNumber);
    sub->add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--output", cfg.output_path, "write JSON here instead of standard output");
    sub->add_option("--threads", cfg.threads, "worker cap")->check(CLI::PositiveNumber);
    sub->add_option("--shrink", cfg.shrink, "target ||delta(x)|| for samples")->check(CLI::Range(1e-12, 1.0 - 1e-12));
    sub->add_option("--cond-cap", cfg.cond_cap, "condition cap for similarities")->check(CLI::Range(1.0 + 1e-12, 1e12));
    sub->add_option("--degree", cfg.degree, "series truncation degree K");
    sub->add_option("--nodes", cfg.nodes, "DFT nodes N");
    sub->add_flag("--balanced-certified", cfg.balanced_certified, "the domain is known to be balanced");
    sub->add_flag("--plot-data", cfg.plot_data, "write curves to <output>.plot.csv");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    auto log = make_logger(err);
    RunConfig cfg;
    CLI::App app{"freeholo: free non-commutative function toolkit"};
    app.require_subcommand(1);

    auto* eval = app.add_subcommand("eval", "evaluate a realized function at a point");
    add_shared(eval, cfg);
    eval->add_option("--point", cfg.point_path, "point fixture (JSON tuple)")->check(CLI::ExistingFile);
    eval->add_option("--neumann", cfg.neumann, "also report the m-term Neumann sum");

    auto* expand = app.add_subcommand("expand", "homogeneous components of a realized function");
    add_shared(expand, cfg);
    expand->add_option("--point", cfg.point_path, "attach a Cauchy certificate at this point")
        ->check(CLI::ExistingFile);

    auto* proptest = app.add_subcommand("proptest", "run property suites");
    add_shared(proptest, cfg);
    proptest->add_option("--expr", cfg.expr, "test a free polynomial instead of a colligation");
    proptest->add_option("--suite", cfg.suites, "restrict to these suites");

    auto* parse = app.add_subcommand("parse", "print a polynomial canonically");
    add_shared(parse, cfg);
    parse->add_option("--expr", cfg.expr, "polynomial text")->required();
    parse->add_option("--vars", cfg.nvars, "number of variables (default: largest index used)");

    auto* sample = app.add_subcommand("sample", "draw domain points");
    add_shared(sample, cfg);
    sample->add_option("--n", cfg.n, "matrix size")->check(CLI::PositiveNumber);
    sample->add_option("--count", cfg.count, "number of points")->check(CLI::PositiveNumber);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kUsage;
    }
    for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();

    std::vector<PropertyReport> reports;
    PlotData plot;
    json result;
    int code = kOk;
    try {
        if (cfg.subcommand == "eval") {
            result = cmd_eval(cfg, *log, plot);
        } else if (cfg.subcommand == "expand") {
            result = cmd_expand(cfg, *log, plot);
        } else if (cfg.subcommand == "proptest") {
            result = cmd_proptest(cfg, *log, reports);
            if (!result["pass"].get<bool>()) code = kPropertyFailure;
        } else if (cfg.subcommand == "parse") {
            result = cmd_parse(cfg);
        } else {
            result = cmd_sample(cfg);
        }
    } catch (const ParseError& e) {
        log->error("{}", e.what());
        return kUsage;
    } catch (const FixtureError& e) {
        log->error("{}", e.what());
        return kUsage;
    } catch (const DimensionError& e) {
        log->error("{}", e.what());
        return kUsage;
    } catch (const DomainError& e) {
        log->error("{}", e.what());
        return kDomain;
    } catch (const SamplingError& e) {
        log->error("{}", e.what());
        return kDomain;
    } catch (const Error& e) {
        log->error("{}", e.what());
        return kNumerical;
    }

    const std::string text = result.dump(2) + "\n";
    if (cfg.output_path.empty()) {
        out << text;
    } else {
        std::ofstream file(cfg.output_path, std::ios::binary);
        if (!file) {
            log->error("cannot write '{}'", cfg.output_path);
            return kUsage;
        }
        file << text;
    }
    if (cfg.plot_data) {
        if (cfg.output_path.empty()) {
            log->error("--plot-data needs --output");
            return kUsage;
        }
        try {
            for (const auto& r : reports) {
                for (std::size_t k = 0; k < r.profile.size(); ++k) plot.add(r.suite, k, r.profile[k]);
            }
            write_plot_data(cfg.output_path + ".plot.csv", plot);
        } catch (const FixtureError& e) {
            log->error("{}", e.what());
            return kUsage;
        }
    }
    return code;
}

}  // namespace freeholo::cli
