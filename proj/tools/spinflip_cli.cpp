// spinflip: lifetimes of trapped atoms above conducting films.
//
//   spinflip lifetime --config run.cfg
//   spinflip sweep    --config sweep.cfg --format json --out table.json
//   spinflip fig2     --config bg.cfg
//   spinflip fig3     --variant thin
//   spinflip overlay  --config bg.cfg --data data/experiment_points.csv
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical non-convergence,
// 4 data-file error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "spinflip/spinflip.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;
constexpr int exit_data = 4;

struct Options {
    std::string config_path;
    std::string format = "csv";
    std::string out_path;
    std::string data_path;
    std::string variant = "both";
    double tol = 0.0;
    unsigned threads = 0;
};

std::string read_file(const std::string& path, bool data_file) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        if (data_file) throw spinflip::DataError(0, "cannot open '" + path + "'");
        throw spinflip::ConfigError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw spinflip::ConfigError("cannot write '" + path + "'");
    out << text;
}

spinflip::RunContext load_context(const Options& opt, std::string_view defaults) {
    const std::string text = opt.config_path.empty() ? std::string() : read_file(opt.config_path, false);
    auto ctx = spinflip::parse_config(text, defaults);
    if (opt.tol > 0.0) ctx.green.rel_tol = opt.tol;
    return ctx;
}

spinflip::TableFormat table_format(const Options& opt) {
    return opt.format == "json" ? spinflip::TableFormat::json : spinflip::TableFormat::csv;
}

int finish(const spinflip::ResultTable& table, const Options& opt, const std::string& path) {
    write_output(path, spinflip::emit_table(table, table_format(opt)));
    for (const auto& r : table.rows) {
        if (r.failed()) {
            std::cerr << "warning: point " << r.swept_value << " failed: " << *r.error << '\n';
            return exit_numerical;
        }
    }
    return 0;
}

std::string suffixed(const std::string& path, const std::string& tag) {
    if (path.empty()) return path;
    const auto dot = path.find_last_of('.');
    const auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + "_" + tag;
    return path.substr(0, dot) + "_" + tag + path.substr(dot);
}

int run_fig3(const Options& opt) {
    int status = 0;
    bool first = true;
    for (const std::string variant : {"thick", "thin"}) {
        if (opt.variant != "both" && opt.variant != variant) continue;
        auto ctx = load_context(opt, spinflip::fig3_preset);
        if (variant == "thick") ctx.point.h = spinflip::infinite_thickness;
        else ctx.point.h = 1e-6;
        const auto table = spinflip::run_sweep(ctx, opt.threads);
        if (opt.out_path.empty() && !first) std::cout << '\n';
        const std::string path = opt.variant == "both" ? suffixed(opt.out_path, variant) : opt.out_path;
        status = std::max(status, finish(table, opt, path));
        first = false;
    }
    return status;
}

int dispatch(const CLI::App& app, const Options& opt) {
    if (app.got_subcommand("lifetime")) {
        const auto ctx = load_context(opt, {});
        return finish(spinflip::run_point(ctx), opt, opt.out_path);
    }
    if (app.got_subcommand("sweep")) {
        const auto ctx = load_context(opt, {});
        if (!ctx.sweep) throw spinflip::MissingKeyError("sweep");
        return finish(spinflip::run_sweep(ctx, opt.threads), opt, opt.out_path);
    }
    if (app.got_subcommand("fig2")) {
        const auto ctx = load_context(opt, spinflip::fig2_preset);
        if (!ctx.background_given) throw spinflip::MissingKeyError("background_rate");
        return finish(spinflip::run_sweep(ctx, opt.threads), opt, opt.out_path);
    }
    if (app.got_subcommand("fig3")) return run_fig3(opt);
    if (app.got_subcommand("overlay")) {
        const auto ctx = load_context(opt, spinflip::fig2_preset);
        if (!ctx.background_given) throw spinflip::MissingKeyError("background_rate");
        const auto points = spinflip::load_experiment_points(read_file(opt.data_path, true));
        const auto rows = spinflip::overlay(ctx, points);
        write_output(opt.out_path, spinflip::emit_overlay_csv(rows));
        for (const auto& r : rows)
            if (r.error) return exit_numerical;
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-flip lifetimes of trapped atoms above planar conducting films"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&opt](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("--config", opt.config_path, "key = value configuration file");
        if (config_required) c->required();
        sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", opt.out_path, "output path (default stdout)");
        sub->add_option("--tol", opt.tol, "relative quadrature tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--threads", opt.threads, "worker threads for sweeps (0 = all cores)");
    };
    add_common(app.add_subcommand("lifetime", "single-point flip and loss lifetimes"), true);
    add_common(app.add_subcommand("sweep", "generic parameter sweep"), true);
    add_common(app.add_subcommand("fig2", "lifetime vs atom-surface distance, thin Cu-like film"), true);
    auto* fig3 = app.add_subcommand("fig3", "lifetime vs skin depth at d = 50 um");
    add_common(fig3, false);
    fig3->add_option("--variant", opt.variant, "thick, thin (h = 1 um) or both")
        ->check(CLI::IsMember({"thick", "thin", "both"}));
    auto* ov = app.add_subcommand("overlay", "model loss lifetime against measured points");
    add_common(ov, true);
    ov->add_option("--data", opt.data_path, "CSV with d_um,tau_s[,err_s]")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        return dispatch(app, opt);
    } catch (const spinflip::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return exit_data;
    } catch (const spinflip::AccuracyError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const spinflip::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const spinflip::LookupError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const spinflip::DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
