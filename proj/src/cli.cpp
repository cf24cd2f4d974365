#include "volterra/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>

#include "volterra/algebra.hpp"
#include "volterra/errors.hpp"
#include "volterra/evaluation.hpp"
#include "volterra/expr.hpp"
#include "volterra/io.hpp"
#include "volterra/morphism.hpp"
#include "volterra/tfd.hpp"

namespace volterra {

using nlohmann::json;

namespace {

struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json truncations_json(const std::vector<Truncation>& t) {
    json arr = json::array();
    for (const auto& x : t) arr.push_back({{"order", x.order}, {"reason", x.reason}});
    return arr;
}

SampledSignal gaussian_window(int L, double sigma) {
    SampledSignal h(static_cast<std::size_t>(L), 0.0);
    for (int t = 0; t < L; ++t) {
        const double u = signed_rep(t, L);
        h[static_cast<std::size_t>(t)] = std::exp(-0.5 * u * u / (sigma * sigma));
    }
    return h;
}

void write_grid_outputs(const TFDGrid& g, const std::string& csv, const std::string& pgm, std::ostream& out) {
    if (csv.empty() || csv == "-")
        write_grid_csv(g, out);
    else
        write_grid_csv(g, csv);
    if (!pgm.empty()) write_pgm(g, pgm);
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete-time Volterra series toolkit", "volt"};
    app.require_subcommand(1);
    std::function<void()> action;

    // eval
    std::string series_path, signal_path, out_path, domain = "time";
    auto* eval = app.add_subcommand("eval", "Evaluate a series on a signal");
    eval->add_option("--series", series_path, "Series file (.vk)")->required();
    eval->add_option("--signal", signal_path, "Signal CSV")->required();
    eval->add_option("--out", out_path, "Output CSV (default: standard output)");
    eval->add_option("--domain", domain, "time or freq")->check(CLI::IsMember({"time", "freq"}));
    eval->callback([&] {
        action = [&] {
            const VolterraSeries s = read_series(series_path);
            const SampledSignal x = read_signal_csv(signal_path);
            const SampledSignal y = domain == "time" ? eval_time(s, x) : eval_freq(s, dft(x));
            if (out_path.empty())
                write_signal_csv(y, out);
            else
                write_signal_csv(y, out_path);
        };
    });

    // compose
    std::string expr_text;
    std::vector<std::string> binds;
    int cap = kDefaultOrderCap;
    auto* comp = app.add_subcommand("compose", "Build a series from an interconnection expression");
    comp->add_option("--expr", expr_text, "Expression, e.g. \"(C <| B) <| A\"")->required();
    comp->add_option("--bind", binds, "NAME=file.vk (repeatable)");
    comp->add_option("--out", out_path, "Output series file")->required();
    comp->add_option("--cap", cap, "Order cap")->check(CLI::PositiveNumber);
    comp->callback([&] {
        action = [&] {
            Bindings table;
            for (const auto& b : binds) {
                const auto eq = b.find('=');
                if (eq == std::string::npos || eq == 0) throw CLI::ValidationError("--bind", "expected NAME=path, got '" + b + "'");
                table[b.substr(0, eq)] = read_series(b.substr(eq + 1));
            }
            AlgebraOptions opts;
            opts.order_cap = cap;
            const AlgebraResult r = build(*parse(expr_text), table, opts);
            write_series(r.series, out_path);
            json report{{"written", out_path}, {"memory", r.series.memory()}, {"truncations", truncations_json(r.truncations)}};
            report["orders"] = json::array();
            for (const auto& t : r.series.terms()) report["orders"].push_back(t.kernel.order);
            for (const auto& t : r.truncations) err << "warning: dropped order " << t.order << ": " << t.reason << '\n';
            out << report.dump() << '\n';
        };
    });

    // morph
    std::string morph_path, target_path;
    bool naturality = false, apply = false;
    int trials = 20;
    std::uint64_t seed = 1;
    double tolerance = 1e-9;
    auto* morph = app.add_subcommand("morph", "Apply or check a morphism between series");
    morph->add_option("--morphism", morph_path, "Morphism file (.vm)")->required();
    morph->add_option("--source", series_path, "Source series (.vk)")->required();
    morph->add_option("--target", target_path, "Target series (.vk)")->required();
    auto* nat_flag = morph->add_flag("--check-naturality", naturality, "Run the naturality check");
    auto* apply_flag = morph->add_flag("--apply", apply, "Apply the component to a signal");
    nat_flag->excludes(apply_flag);
    morph->add_option("--trials", trials, "Random trials for the naturality check")->check(CLI::PositiveNumber);
    morph->add_option("--seed", seed, "Random seed");
    morph->add_option("--tolerance", tolerance, "Pass threshold for the naturality residual");
    morph->add_option("--signal", signal_path, "Signal CSV for --apply");
    morph->add_option("--out", out_path, "Output spectrum CSV for --apply");
    morph->callback([&] {
        if (!naturality && !apply) throw CLI::RequiredError("--check-naturality or --apply");
        if (apply && signal_path.empty()) throw CLI::RequiredError("--signal");
        action = [&] {
            const Morphism m = read_morphism(morph_path);
            const VolterraSeries V = read_series(series_path);
            const VolterraSeries W = read_series(target_path);
            const ValidationReport rep = validate(m, V, W);
            if (!rep.ok()) {
                for (const auto& v : rep.violations) err << "violation: " << v << '\n';
                out << json{{"valid", false}, {"violations", rep.violations}}.dump() << '\n';
                throw CheckFailed("morphism failed validation");
            }
            if (naturality) {
                const double residual = check_naturality(m, V, W, trials, seed);
                const bool ok = residual <= tolerance;
                out << json{{"valid", true}, {"trials", trials}, {"max_residual", residual}, {"passed", ok}}.dump() << '\n';
                if (!ok) throw CheckFailed("naturality residual above tolerance");
            } else {
                const Spectrum y = apply_component(m, V, W, dft(read_signal_csv(signal_path)));
                if (out_path.empty())
                    write_signal_csv(y, out);
                else
                    write_signal_csv(y, out_path);
            }
        };
    });

    // tfd
    std::string method = "wvd", pgm_path, param = "wvd";
    bool make_analytic = false;
    int k = 6, lag_step = 2;
    double lambda3 = 0.75, sigma = 6.0;
    auto* tfd = app.add_subcommand("tfd", "Time-frequency distribution of a signal");
    tfd->add_option("--in", signal_path, "Signal CSV")->required();
    tfd->add_option("--method", method, "wvd, cohen, pwvd or howvd")->check(CLI::IsMember({"wvd", "cohen", "pwvd", "howvd"}));
    tfd->add_option("--out", out_path, "Grid CSV (default: standard output)");
    tfd->add_option("--pgm", pgm_path, "Heatmap output (binary PGM)");
    tfd->add_flag("--analytic", make_analytic, "Replace the input by the analytic signal of its real part");
    tfd->add_option("--kernel", param, "Cohen parameter function: wvd, rihaczek or spectrogram")
        ->check(CLI::IsMember({"wvd", "rihaczek", "spectrogram"}));
    tfd->add_option("--window-sigma", sigma, "Gaussian window width for the spectrogram kernel")->check(CLI::PositiveNumber);
    tfd->add_option("--k", k, "Order for pwvd (2, 4, 6) or howvd (2..4)");
    tfd->add_option("--lambda3", lambda3, "Free lambda for the k=6 family");
    tfd->add_option("--lag-step", lag_step, "Lag lattice step")->check(CLI::PositiveNumber);
    tfd->callback([&] {
        action = [&] {
            SampledSignal x = read_signal_csv(signal_path);
            if (make_analytic) x = analytic_signal(x);
            TFDGrid g;
            if (method == "wvd") {
                g = wvd(x);
            } else if (method == "cohen") {
                const int L = static_cast<int>(x.size());
                const ParameterFunction phi = param == "wvd"        ? wvd_parameter(L)
                                              : param == "rihaczek" ? rihaczek_parameter(L)
                                                                    : spectrogram_parameter(gaussian_window(L, sigma));
                g = cohen(x, phi);
            } else if (method == "pwvd") {
                g = pwvd(x, pwvd_lambdas(k, lambda3), lag_step);
            } else {
                const HigherOrderGrid h = howvd(x, k, lag_step);
                std::size_t cols = 1;
                for (int r = 0; r < k - 1; ++r) cols *= static_cast<std::size_t>(h.freq_bins);
                g = TFDGrid(h.length, static_cast<int>(cols), 1.0 / h.length);
                g.values = h.values;
            }
            write_grid_outputs(g, out_path, pgm_path, out);
        };
    });

    // lambdas
    int p = 5;
    auto* lam = app.add_subcommand("lambdas", "Lag scalings for the polynomial WVD");
    lam->add_option("--k", k, "Order (2, 4 or 6)")->required();
    lam->add_option("--lambda3", lambda3, "Free parameter of the k=6 family (> 1/2)");
    lam->add_option("--p", p, "Highest odd moment to check")->check(CLI::PositiveNumber);
    lam->callback([&] {
        action = [&] {
            const LambdaSet ls = pwvd_lambdas(k, lambda3);
            const LambdaReport rep = check_lambda_constraints(ls, p);
            out << json{{"k", ls.k},
                        {"lambdas", ls.lambdas},
                        {"antisymmetry_residual", rep.antisymmetry_residual},
                        {"half_sum_residual", rep.half_sum_residual},
                        {"paired_odd_residuals", rep.paired_odd_residuals},
                        {"one_sided_odd_moments", rep.one_sided_odd_moments},
                        {"passed", rep.passed()},
                        {"concentrates", rep.concentrates()}}
                       .dump()
                << '\n';
        };
    });

    // info
    auto* info = app.add_subcommand("info", "Describe a series file");
    info->add_option("--series", series_path, "Series file (.vk)")->required();
    info->callback([&] {
        action = [&] {
            const VolterraSeries s = read_series(series_path);
            json terms = json::array();
            for (const auto& t : s.terms())
                terms.push_back({{"index", t.index}, {"order", t.kernel.order}, {"max_abs", max_abs(t.kernel)},
                                 {"asymmetry", asymmetry(t.kernel)}});
            out << json{{"memory", s.memory()}, {"max_order", s.max_order()}, {"canonical", s.is_canonical()}, {"terms", terms}}
                       .dump()
                << '\n';
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }
    try {
        action();
        return 0;
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace volterra
