// Command-line driver: single solves, convergence tables, figure data, kernel checks.

#include "nonlocal/harness.hpp"
#include "nonlocal/kernel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace nonlocal;

namespace {

struct CommonFlags {
    std::vector<std::string> cases;
    std::optional<int> N;
    std::optional<double> lambda;
    std::optional<double> p;
    std::string scale = "desk";
    std::optional<double> rel_tol;
    std::optional<double> abs_tol;
    std::optional<int> inner_points;
    std::string normalization;
    bool toeplitz = false;
    std::string out = "out";
    int threads = 0;
    std::string config;
};

std::string utc_now()
{
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

/// File values first, then explicit flags on top.
RunConfig resolve_config(const CommonFlags& fl, json* file_json)
{
    RunConfig cfg;
    if (!fl.config.empty()) {
        std::ifstream in(fl.config);
        if (!in) {
            throw std::runtime_error("cannot open config file " + fl.config);
        }
        *file_json = json::parse(in, nullptr, true, true);
        cfg = run_config_from_json(*file_json, cfg);
    }
    if (!fl.cases.empty()) {
        cfg.problem = case_from_string(fl.cases.front());
    }
    if (fl.N) {
        cfg.N = *fl.N;
    }
    if (fl.lambda) {
        cfg.lambda = *fl.lambda;
    }
    if (fl.p) {
        cfg.p = *fl.p;
    }
    if (fl.rel_tol) {
        cfg.quad.outer_rel_tol = *fl.rel_tol;
    }
    if (fl.abs_tol) {
        cfg.quad.outer_abs_tol = *fl.abs_tol;
    }
    if (fl.inner_points) {
        cfg.quad.inner_points = *fl.inner_points;
    }
    if (!fl.normalization.empty()) {
        cfg.normalization = normalization_from_string(fl.normalization);
    }
    if (fl.toeplitz) {
        cfg.toeplitz_cache = true;
    }
    cfg.validate();
    return cfg;
}

std::vector<Case> resolve_cases(const CommonFlags& fl, std::vector<Case> fallback)
{
    if (fl.cases.empty()) {
        return fallback;
    }
    std::vector<Case> out;
    for (const auto& name : fl.cases) {
        out.push_back(case_from_string(name));
    }
    return out;
}

void write_outputs(const fs::path& dir, const std::string& command, const CommonFlags& fl, json extra,
                   const std::function<void(std::ostream&)>& body, double seconds)
{
    fs::create_directories(dir);
    {
        std::ofstream csv(dir / "results.csv", std::ios::binary);
        body(csv);
    }
    json manifest = std::move(extra);
    manifest["command"] = command;
    manifest["scale"] = fl.scale;
    manifest["tool_version"] = std::string(kToolVersion);
    manifest["finished_utc"] = utc_now();
    manifest["wall_time_seconds"] = seconds;
#ifdef _OPENMP
    manifest["threads"] = omp_get_max_threads();
#else
    manifest["threads"] = 1;
#endif
    std::ofstream(dir / "manifest.json") << manifest.dump(2) << '\n';
}

void add_common(CLI::App* sub, CommonFlags& fl)
{
    sub->add_option("--case", fl.cases, "data set(s): Ia, Ib, IIa, IIb");
    sub->add_option("--N", fl.N, "number of elements in (-1, 1)");
    sub->add_option("--lambda", fl.lambda, "interaction radius");
    sub->add_option("--p", fl.p, "exterior coarsening exponent");
    sub->add_option("--scale", fl.scale, "preset size: desk or paper")->check(CLI::IsMember({"desk", "paper"}));
    sub->add_option("--quad-rel-tol", fl.rel_tol, "relative tolerance of the outer adaptive rule");
    sub->add_option("--quad-abs-tol", fl.abs_tol, "absolute tolerance of the outer adaptive rule");
    sub->add_option("--inner-points", fl.inner_points, "Gauss points per inner subinterval");
    sub->add_option("--normalization", fl.normalization, "kernel constant: classical or as-printed");
    sub->add_flag("--toeplitz", fl.toeplitz, "reuse one stencil row on uniform meshes");
    sub->add_option("--out", fl.out, "output directory");
    sub->add_option("--threads", fl.threads, "OpenMP threads (0 = runtime default)");
    sub->add_option("--config", fl.config, "JSON run configuration; flags override its values");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite element solver for the 1-D truncated fractional nonlocal diffusion problem"};
    app.require_subcommand(1);
    CommonFlags fl;

    auto* solve_cmd = app.add_subcommand("solve", "assemble and solve one configuration");
    bool dump_mesh = false;
    bool dump_matrix = false;
    solve_cmd->add_flag("--dump-mesh", dump_mesh, "also write mesh.csv");
    solve_cmd->add_flag("--dump-matrix", dump_matrix, "also write matrix.csv");

    auto* h_cmd = app.add_subcommand("table-h", "grid-size convergence against a fine-grid surrogate");
    auto* coarse_cmd = app.add_subcommand("table-coarsening", "node counts and coarsening differences");
    bool no_delta = false;
    coarse_cmd->add_flag("--no-delta", no_delta, "skip the solves, report node counts only");
    auto* lambda_cmd = app.add_subcommand("table-lambda", "interaction-radius convergence against a surrogate");
    auto* combined_cmd = app.add_subcommand("table-combined", "joint h and lambda refinement against the analytic solution");
    auto* figure_cmd = app.add_subcommand("figure", "curve data for figures 1..5");
    int figure_id = 1;
    figure_cmd->add_option("id", figure_id, "figure number")->required()->check(CLI::Range(1, 5));
    auto* kernel_cmd = app.add_subcommand("check-kernel", "sample the kernel conditions");
    int samples = 10000;
    double kernel_s = 0.75;
    int kernel_n = 1;
    kernel_cmd->add_option("--samples", samples, "number of random point pairs");
    kernel_cmd->add_option("--s", kernel_s, "fractional order (overridden by --case)");
    kernel_cmd->add_option("--n", kernel_n, "dimension");

    for (auto* sub : {solve_cmd, h_cmd, coarse_cmd, lambda_cmd, combined_cmd, figure_cmd, kernel_cmd}) {
        add_common(sub, fl);
    }

    CLI11_PARSE(app, argc, argv);

    try {
#ifdef _OPENMP
        if (fl.threads > 0) {
            omp_set_num_threads(fl.threads);
        }
#endif
        json file_json;
        const RunConfig cfg = resolve_config(fl, &file_json);
        const Scale scale = scale_from_string(fl.scale);
        const fs::path out_dir(fl.out);
        const auto t0 = std::chrono::steady_clock::now();
        auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
        const bool has_N = fl.N || file_json.contains("N");
        const bool has_lambda = fl.lambda || file_json.contains("lambda");
        const bool has_p = fl.p || file_json.contains("p");

        auto finish_report = [&](const std::string& name, const ConvergenceReport& report) {
            write_outputs(out_dir, name, fl, {{"report", report.manifest}},
                          [&](std::ostream& os) { write_report_csv(report, os); }, elapsed());
            write_report_csv(report, std::cout);
        };

        if (solve_cmd->parsed()) {
            const SolveResult res = run_solve(cfg);
            const std::string hash = config_hash(cfg);
            write_outputs(out_dir, "solve", fl, {{"config", to_json(cfg)}, {"config_hash", hash},
                                                 {"nodes", res.system.mesh->num_nodes()}},
                          [&](std::ostream& os) { write_solution_csv(res.u, os, hash); }, elapsed());
            if (dump_mesh) {
                std::ofstream mesh_out(out_dir / "mesh.csv");
                write_mesh_csv(*res.system.mesh, mesh_out);
            }
            if (dump_matrix) {
                std::ofstream matrix_out(out_dir / "matrix.csv");
                write_matrix_csv(res.system.A, matrix_out);
            }
            std::cout << "u(0) = " << res.u(0.0) << "  (" << res.system.mesh->num_nodes() << " nodes, "
                      << elapsed() << " s)\n";
        } else if (h_cmd->parsed()) {
            TableHOptions opt = TableHOptions::preset(scale);
            opt.cases = resolve_cases(fl, opt.cases);
            if (has_lambda) {
                opt.lambda = cfg.lambda;
            }
            if (has_p) {
                opt.p = cfg.p;
            }
            opt.quad = cfg.quad;
            opt.normalization = cfg.normalization;
            finish_report("table-h", run_table_h(opt));
        } else if (coarse_cmd->parsed()) {
            TableCoarseningOptions opt;
            if (has_N) {
                opt.N = cfg.N;
            }
            if (has_lambda) {
                opt.lambdas = {cfg.lambda};
            }
            if (has_p) {
                opt.p_values = {cfg.p};
            }
            opt.problem = resolve_cases(fl, {opt.problem}).front();
            opt.compute_difference = !no_delta;
            opt.quad = cfg.quad;
            opt.normalization = cfg.normalization;
            finish_report("table-coarsening", run_table_coarsening(opt));
        } else if (lambda_cmd->parsed()) {
            TableLambdaOptions opt = TableLambdaOptions::preset(scale);
            opt.cases = resolve_cases(fl, opt.cases);
            if (has_N) {
                opt.N = cfg.N;
            }
            if (has_p) {
                opt.p = cfg.p;
            }
            opt.quad = cfg.quad;
            opt.normalization = cfg.normalization;
            finish_report("table-lambda", run_table_lambda(opt));
        } else if (combined_cmd->parsed()) {
            TableCombinedOptions opt = TableCombinedOptions::preset(scale);
            opt.cases = resolve_cases(fl, opt.cases);
            opt.quad = cfg.quad;
            opt.normalization = cfg.normalization;
            finish_report("table-combined", run_combined(opt));
        } else if (figure_cmd->parsed()) {
            FigureOptions opt{figure_id, scale, cfg.quad, cfg.normalization};
            json meta;
            write_outputs(out_dir, "figure", fl, {},
                          [&](std::ostream& os) { meta = emit_figure_data(opt, os); }, elapsed());
            // Attach curve metadata once the data exists.
            std::ifstream in(out_dir / "manifest.json");
            json manifest = json::parse(in);
            manifest["figure"] = meta;
            manifest["wall_time_seconds"] = elapsed();
            std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << '\n';
            std::cout << "wrote " << (out_dir / "results.csv").string() << '\n';
        } else if (kernel_cmd->parsed()) {
            const double s = fl.cases.empty() ? kernel_s : case_order(cfg.problem).value();
            const KernelSpec spec(kernel_n, FractionalOrder(s), has_lambda ? cfg.lambda : 1.0, cfg.normalization);
            const ConvergenceReport report = run_check_kernel(spec, samples);
            finish_report("check-kernel", report);
            return report.rows.front().back() == Cell{std::string("true")} ? 0 : 1;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
