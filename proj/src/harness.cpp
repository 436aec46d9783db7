#include "nonlocal/harness.hpp"

#include "nonlocal/analytic.hpp"
#include "nonlocal/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace nonlocal {

using nlohmann::json;

// ---------------------------------------------------------------------------------
// Cases, scales, configs

std::string to_string(Case c)
{
    switch (c) {
    case Case::Ia: return "Ia";
    case Case::Ib: return "Ib";
    case Case::IIa: return "IIa";
    case Case::IIb: return "IIb";
    }
    throw std::invalid_argument("unknown case");
}

Case case_from_string(std::string_view name)
{
    for (Case c : {Case::Ia, Case::Ib, Case::IIa, Case::IIb}) {
        if (name == to_string(c)) {
            return c;
        }
    }
    throw std::invalid_argument("unknown case '" + std::string(name) + "' (expected Ia, Ib, IIa or IIb)");
}

std::string to_string(Scale s)
{
    return s == Scale::Desk ? "desk" : "paper";
}

Scale scale_from_string(std::string_view name)
{
    if (name == "desk") {
        return Scale::Desk;
    }
    if (name == "paper") {
        return Scale::Paper;
    }
    throw std::invalid_argument("unknown scale '" + std::string(name) + "' (expected desk or paper)");
}

FractionalOrder case_order(Case c)
{
    return FractionalOrder(c == Case::Ia || c == Case::IIa ? 0.75 : 0.40);
}

bool case_has_constant_source(Case c)
{
    return c == Case::Ia || c == Case::Ib;
}

SourceFunction case_source(Case c)
{
    if (case_has_constant_source(c)) {
        return [](double) { return 1.0; };
    }
    return [](double x) { return x; };
}

void RunConfig::validate() const
{
    if (N < 2) {
        throw DomainError("RunConfig: N must be at least 2");
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw DomainError("RunConfig: lambda must be positive and finite");
    }
    if (!(p >= 0.0) || !std::isfinite(p)) {
        throw DomainError("RunConfig: p must be finite and non-negative");
    }
    quad.validate();
    if (surrogate) {
        surrogate->validate();
    }
}

KernelSpec RunConfig::kernel() const
{
    return KernelSpec(1, case_order(problem), lambda, normalization);
}

json to_json(const RunConfig& cfg)
{
    json j;
    j["case"] = to_string(cfg.problem);
    j["N"] = cfg.N;
    j["lambda"] = cfg.lambda;
    j["p"] = cfg.p;
    j["quad"] = {{"inner_points", cfg.quad.inner_points},
                 {"outer_rel_tol", cfg.quad.outer_rel_tol},
                 {"outer_abs_tol", cfg.quad.outer_abs_tol},
                 {"max_subdivisions", cfg.quad.max_subdivisions}};
    j["normalization"] = to_string(cfg.normalization);
    j["toeplitz_cache"] = cfg.toeplitz_cache;
    j["surrogate"] = cfg.surrogate ? to_json(*cfg.surrogate) : json(nullptr);
    return j;
}

RunConfig run_config_from_json(const json& j, const RunConfig& base)
{
    if (!j.is_object()) {
        throw std::invalid_argument("run configuration must be an object");
    }
    RunConfig cfg = base;
    if (j.contains("case")) {
        cfg.problem = case_from_string(j.at("case").get<std::string>());
    }
    if (j.contains("N")) {
        cfg.N = j.at("N").get<int>();
    }
    if (j.contains("lambda")) {
        cfg.lambda = j.at("lambda").get<double>();
    }
    if (j.contains("p")) {
        cfg.p = j.at("p").get<double>();
    }
    if (j.contains("quad")) {
        const json& q = j.at("quad");
        cfg.quad.inner_points = q.value("inner_points", cfg.quad.inner_points);
        cfg.quad.outer_rel_tol = q.value("outer_rel_tol", cfg.quad.outer_rel_tol);
        cfg.quad.outer_abs_tol = q.value("outer_abs_tol", cfg.quad.outer_abs_tol);
        cfg.quad.max_subdivisions = q.value("max_subdivisions", cfg.quad.max_subdivisions);
    }
    if (j.contains("normalization")) {
        cfg.normalization = normalization_from_string(j.at("normalization").get<std::string>());
    }
    if (j.contains("toeplitz_cache")) {
        cfg.toeplitz_cache = j.at("toeplitz_cache").get<bool>();
    }
    if (j.contains("surrogate")) {
        const json& sj = j.at("surrogate");
        if (sj.is_null()) {
            cfg.surrogate.reset();
        } else {
            RunConfig inner_base = cfg;
            inner_base.surrogate.reset();
            cfg.surrogate = std::make_shared<const RunConfig>(run_config_from_json(sj, inner_base));
        }
    }
    cfg.validate();
    return cfg;
}

std::string config_hash(const RunConfig& cfg)
{
    const std::string text = to_json(cfg).dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------------
// Solves

SolveResult run_solve(const RunConfig& cfg)
{
    return run_solve(cfg, case_source(cfg.problem));
}

SolveResult run_solve(const RunConfig& cfg, const SourceFunction& f)
{
    cfg.validate();
    auto mesh = make_mesh(cfg.N, cfg.lambda, cfg.p);
    NonlocalSystem system = assemble_system(mesh, cfg.kernel(), f, cfg.quad, AssemblyOptions{cfg.toeplitz_cache});
    FEFunction u = solve(system);
    return SolveResult{std::move(system), std::move(u)};
}

namespace {

std::vector<double> sample_points(const Mesh1D& mesh, int first_node, int last_node)
{
    std::vector<double> xs;
    for (int k = first_node; k < last_node; ++k) {
        const double a = mesh.node(k);
        const double h = mesh.element_length(k);
        xs.push_back(a);
        for (int q = 1; q <= 4; ++q) {
            xs.push_back(a + h * q / 5.0);
        }
    }
    xs.push_back(mesh.node(last_node));
    return xs;
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

/// Factored stiffness matrix for one (N, lambda, p, s), reused for several loads.
class Operator {
public:
    Operator(int N, double lambda, double p, FractionalOrder s, Normalization norm, const QuadConfig& quad)
        : mesh_(make_mesh(N, lambda, p)), spec_(1, s, lambda, norm), quad_(quad),
          A_(assemble_stiffness(*mesh_, spec_, quad_)), chol_(A_)
    {
    }

    [[nodiscard]] const std::shared_ptr<const Mesh1D>& mesh() const { return mesh_; }

    [[nodiscard]] FEFunction solve(const SourceFunction& f) const
    {
        const Eigen::VectorXd b = assemble_load(*mesh_, f, quad_);
        const Eigen::VectorXd u = chol_.solve(b);
        return FEFunction::from_free_dofs(mesh_, std::span<const double>(u.data(), static_cast<std::size_t>(u.size())));
    }

    [[nodiscard]] NonlocalSystem system(const SourceFunction& f) const
    {
        return NonlocalSystem{A_, assemble_load(*mesh_, f, quad_), mesh_, spec_};
    }

private:
    std::shared_ptr<const Mesh1D> mesh_;
    KernelSpec spec_;
    QuadConfig quad_;
    Eigen::MatrixXd A_;
    CholeskySolver chol_;
};

/// Operators keyed by (N, lambda, p, s); assembly happens once per key.
class OperatorCache {
public:
    OperatorCache(Normalization norm, QuadConfig quad) : norm_(norm), quad_(quad) {}

    const Operator& get(int N, double lambda, double p, FractionalOrder s)
    {
        const auto key = std::make_tuple(N, lambda, p, s.value());
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            it = cache_.emplace(key, std::make_unique<Operator>(N, lambda, p, s, norm_, quad_)).first;
        }
        return *it->second;
    }

    void clear() { cache_.clear(); }

private:
    Normalization norm_;
    QuadConfig quad_;
    std::map<std::tuple<int, double, double, double>, std::unique_ptr<Operator>> cache_;
};

RunConfig make_config(Case c, int N, double lambda, double p, const QuadConfig& quad, Normalization norm,
                      std::shared_ptr<const RunConfig> surrogate = {})
{
    RunConfig cfg;
    cfg.problem = c;
    cfg.N = N;
    cfg.lambda = lambda;
    cfg.p = p;
    cfg.quad = quad;
    cfg.normalization = norm;
    cfg.surrogate = std::move(surrogate);
    return cfg;
}

Cell opt_cell(const std::optional<double>& v)
{
    return v ? Cell{*v} : Cell{};
}

Cell published_cell(double v)
{
    return v > 0.0 ? Cell{v} : Cell{};
}

json quad_json(const QuadConfig& q)
{
    return {{"inner_points", q.inner_points},
            {"outer_rel_tol", q.outer_rel_tol},
            {"outer_abs_tol", q.outer_abs_tol},
            {"max_subdivisions", q.max_subdivisions}};
}

void register_config(ConvergenceReport& report, const RunConfig& cfg, const std::string& hash)
{
    report.manifest["configs"][hash] = to_json(cfg);
}

std::string cases_label(const std::vector<Case>& cases)
{
    std::string out;
    for (Case c : cases) {
        out += (out.empty() ? "" : ",") + to_string(c);
    }
    return out;
}

/// Analytic solution of the fractional Poisson problem for a case.
std::function<double(double)> analytic_solution(Case c)
{
    const FractionalOrder s = case_order(c);
    if (case_has_constant_source(c)) {
        return [s](double x) { return exact_u_const_f(x, 1, s); };
    }
    auto cfg = std::make_shared<const GreensConfig>(calibrated_greens_config(1, s));
    return [cfg](double x) { return exact_u_via_green(x, [](double y) { return y; }, *cfg); };
}

double published_h_error(Case c, int N)
{
    static const std::map<std::pair<Case, int>, double> table{
        {{Case::Ia, 16}, 6.92e-2}, {{Case::Ia, 32}, 4.74e-2}, {{Case::Ia, 64}, 3.17e-2}, {{Case::Ia, 128}, 2.11e-2},
        {{Case::Ib, 16}, 6.23e-2}, {{Case::Ib, 32}, 4.53e-2}, {{Case::Ib, 64}, 3.08e-2}, {{Case::Ib, 128}, 2.08e-2},
    };
    const auto it = table.find({c, N});
    return it == table.end() ? 0.0 : it->second;
}

/// Published (energy, L2) differences to the large-lambda surrogate, lambda = 2^3 .. 2^7.
std::pair<double, double> published_lambda_error(Case c, double lambda)
{
    static const std::map<Case, std::array<std::pair<double, double>, 5>> table{
        {Case::Ia, {{{1.11e-2, 1.12e-2}, {3.90e-3, 3.92e-3}, {1.37e-3, 1.38e-3}, {4.83e-4, 4.87e-4}, {1.69e-4, 1.70e-4}}}},
        {Case::IIa, {{{3.37e-3, 3.47e-3}, {1.19e-3, 1.22e-3}, {4.19e-4, 4.32e-4}, {1.48e-4, 1.52e-4}, {5.16e-5, 5.32e-5}}}},
        {Case::Ib, {{{1.41e-1, 1.42e-1}, {7.58e-2, 7.64e-2}, {4.16e-2, 4.19e-2}, {2.29e-2, 2.30e-2}, {1.24e-2, 1.25e-2}}}},
        {Case::IIb, {{{6.11e-2, 6.27e-2}, {3.40e-2, 3.49e-2}, {1.91e-2, 1.95e-2}, {1.07e-2, 1.09e-2}, {6.00e-3, 6.06e-3}}}},
    };
    const double k = std::log2(lambda) - 3.0;
    if (k < 0.0 || k > 4.0 || k != std::round(k)) {
        return {0.0, 0.0};
    }
    return table.at(c)[static_cast<std::size_t>(k)];
}

double published_combined_error(Case c, int N, double lambda)
{
    static const std::map<std::tuple<Case, int, double>, double> table{
        {{Case::Ia, 32, 8.0}, 2.82e-2},   {{Case::Ia, 64, 16.0}, 2.00e-3},  {{Case::Ia, 128, 32.0}, 1.41e-2},
        {{Case::Ia, 256, 64.0}, 9.97e-3}, {{Case::Ia, 512, 128.0}, 7.05e-3}, {{Case::Ib, 32, 8.0}, 4.47e-2},
        {{Case::Ib, 64, 16.0}, 2.98e-2},  {{Case::Ib, 128, 32.0}, 2.03e-2}, {{Case::Ib, 256, 64.0}, 1.40e-2},
        {{Case::Ib, 512, 128.0}, 9.76e-3},
    };
    const auto it = table.find({c, N, lambda});
    return it == table.end() ? 0.0 : it->second;
}

} // namespace

void write_solution_csv(const FEFunction& u, std::ostream& out, std::string_view hash)
{
    const Mesh1D& m = u.mesh();
    out << (hash.empty() ? "x,u\n" : "x,u,config_hash\n");
    for (double x : sample_points(m, 0, m.num_nodes() - 1)) {
        out << format_double(x) << ',' << format_double(u(x));
        if (!hash.empty()) {
            out << ',' << hash;
        }
        out << '\n';
    }
}

void write_report_csv(const ConvergenceReport& report, std::ostream& out)
{
    for (std::size_t k = 0; k < report.columns.size(); ++k) {
        out << (k ? "," : "") << csv_escape(report.columns[k]);
    }
    out << '\n';
    for (const auto& row : report.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) {
                out << ',';
            }
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, long long>) {
                        out << v;
                    } else if constexpr (std::is_same_v<T, double>) {
                        out << format_double(v);
                    } else if constexpr (std::is_same_v<T, std::string>) {
                        out << csv_escape(v);
                    }
                },
                row[k]);
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------------
// Presets

TableHOptions TableHOptions::preset(Scale scale)
{
    TableHOptions opt;
    if (scale == Scale::Paper) {
        opt.surrogate_N = 4096;
    }
    return opt;
}

TableLambdaOptions TableLambdaOptions::preset(Scale scale)
{
    TableLambdaOptions opt;
    if (scale == Scale::Paper) {
        opt.N = 1024;
        opt.lambdas = {8, 16, 32, 64, 128};
        opt.surrogate_lambda = 2048;
    }
    return opt;
}

TableCombinedOptions TableCombinedOptions::preset(Scale scale)
{
    TableCombinedOptions opt;
    if (scale == Scale::Paper) {
        opt.cells.push_back({256, 64, 0.5});
        opt.cells.push_back({512, 128, 0.6});
    }
    return opt;
}

// ---------------------------------------------------------------------------------
// Tables

ConvergenceReport run_table_h(const TableHOptions& opt)
{
    ConvergenceReport report;
    report.table = "table-h";
    report.columns = {"case", "h", "N", "lambda", "p", "l2_error", "rate_l2", "published_l2", "config_hash"};
    report.manifest["options"] = {{"cases", cases_label(opt.cases)},
                                  {"N_values", opt.N_values},
                                  {"lambda", opt.lambda},
                                  {"p", opt.p},
                                  {"surrogate_N", opt.surrogate_N},
                                  {"quad", quad_json(opt.quad)},
                                  {"normalization", to_string(opt.normalization)}};
    report.manifest["error_definition"] = "L2(-1,1) difference to the fine-grid surrogate at the same lambda";

    OperatorCache cache(opt.normalization, opt.quad);
    for (Case c : opt.cases) {
        const FractionalOrder s = case_order(c);
        const SourceFunction f = case_source(c);
        const FEFunction u_ref = cache.get(opt.surrogate_N, opt.lambda, opt.p, s).solve(f);
        auto sur = std::make_shared<const RunConfig>(
            make_config(c, opt.surrogate_N, opt.lambda, opt.p, opt.quad, opt.normalization));

        auto& series = report.series[c];
        std::vector<RunConfig> configs;
        for (int N : opt.N_values) {
            const FEFunction u = cache.get(N, opt.lambda, opt.p, s).solve(f);
            series.push_back(ErrorRecord{2.0 / N, l2_difference(u, u_ref), {}, {}, {}});
            configs.push_back(make_config(c, N, opt.lambda, opt.p, opt.quad, opt.normalization, sur));
        }
        attach_rates(series);
        for (std::size_t k = 0; k < series.size(); ++k) {
            const auto& rec = series[k];
            const std::string hash = config_hash(configs[k]);
            register_config(report, configs[k], hash);
            report.rows.push_back({to_string(c), rec.param, static_cast<long long>(configs[k].N), opt.lambda, opt.p,
                                   rec.l2_error, opt_cell(rec.rate_l2),
                                   published_cell(published_h_error(c, configs[k].N)), hash});
        }
    }
    return report;
}

ConvergenceReport run_table_lambda(const TableLambdaOptions& opt)
{
    ConvergenceReport report;
    report.table = "table-lambda";
    report.columns = {"case",     "lambda",      "N",     "p",       "energy_error",     "rate_energy",
                      "l2_error", "rate_l2",     "delta_A", "reference_p", "published_energy", "published_l2",
                      "config_hash"};
    report.manifest["options"] = {{"cases", cases_label(opt.cases)},
                                  {"N", opt.N},
                                  {"lambdas", opt.lambdas},
                                  {"p", opt.p},
                                  {"surrogate_lambda", opt.surrogate_lambda},
                                  {"surrogate_p", opt.surrogate_p},
                                  {"uniform_reference_limit", opt.uniform_reference_limit},
                                  {"check_factor", opt.check_factor},
                                  {"quad", quad_json(opt.quad)},
                                  {"normalization", to_string(opt.normalization)}};
    report.manifest["energy_norm"] = "evaluated with the stiffness matrix of the surrogate (largest lambda)";
    report.manifest["delta_A"] = "L2(-1,1) difference between the solution at p and a reference exterior grid "
                                 "(uniform, or p/2 when the uniform grid is too large)";

    // Cases sharing s share every stiffness matrix.
    std::map<double, std::vector<Case>> groups;
    for (Case c : opt.cases) {
        groups[case_order(c).value()].push_back(c);
    }

    OperatorCache cache(opt.normalization, opt.quad);
    std::map<Case, std::vector<std::vector<Cell>>> rows_by_case;
    json checks = json::array();

    for (const auto& [s_value, cases] : groups) {
        const FractionalOrder s(s_value);
        const Operator& sur = cache.get(opt.N, opt.surrogate_lambda, opt.surrogate_p, s);
        std::map<Case, FEFunction> u_sur;
        std::map<Case, NonlocalSystem> sur_system;
        for (Case c : cases) {
            u_sur.emplace(c, sur.solve(case_source(c)));
            sur_system.emplace(c, sur.system(case_source(c)));
        }

        double p = opt.p;
        for (int attempt = 0;; ++attempt) {
            std::map<Case, std::vector<ErrorRecord>> series;
            std::map<Case, std::vector<double>> deltas;
            std::vector<double> ref_ps;
            for (double lambda : opt.lambdas) {
                const double exterior_uniform = std::ceil(lambda * opt.N / 2.0);
                const double p_ref = exterior_uniform <= opt.uniform_reference_limit ? 0.0 : 0.5 * p;
                ref_ps.push_back(p_ref);
                const Operator& op = cache.get(opt.N, lambda, p, s);
                const Operator& ref = cache.get(opt.N, lambda, p_ref, s);
                for (Case c : cases) {
                    const SourceFunction f = case_source(c);
                    const FEFunction u = op.solve(f);
                    const FEFunction e = u_sur.at(c) - u.transfer_to(sur.mesh());
                    series[c].push_back(
                        ErrorRecord{lambda, l2_difference(u_sur.at(c), u), energy_error(e, sur_system.at(c)), {}, {}});
                    deltas[c].push_back(p_ref == p ? 0.0 : l2_difference(u, ref.solve(f)));
                }
            }

            bool ok = true;
            json check = {{"s", s_value}, {"p", p}, {"attempt", attempt}};
            for (Case c : cases) {
                double min_err = std::numeric_limits<double>::infinity();
                for (const auto& r : series[c]) {
                    min_err = std::min({min_err, r.l2_error, r.energy_error.value_or(min_err)});
                }
                const double max_delta = *std::max_element(deltas[c].begin(), deltas[c].end());
                const bool case_ok = max_delta <= opt.check_factor * min_err;
                ok = ok && case_ok;
                check["cases"][to_string(c)] = {{"max_delta_A", max_delta}, {"min_error", min_err}, {"ok", case_ok}};
            }
            check["passed"] = ok;
            checks.push_back(check);

            if (!ok && attempt < opt.max_escalations) {
                p *= 0.5;
                continue;
            }

            for (Case c : cases) {
                auto& sc = series[c];
                attach_rates(sc);
                auto sur_cfg = std::make_shared<const RunConfig>(
                    make_config(c, opt.N, opt.surrogate_lambda, opt.surrogate_p, opt.quad, opt.normalization));
                for (std::size_t k = 0; k < sc.size(); ++k) {
                    const auto& rec = sc[k];
                    const RunConfig cfg = make_config(c, opt.N, rec.param, p, opt.quad, opt.normalization, sur_cfg);
                    const std::string hash = config_hash(cfg);
                    register_config(report, cfg, hash);
                    const auto [pub_energy, pub_l2] = published_lambda_error(c, rec.param);
                    rows_by_case[c].push_back({to_string(c), rec.param, static_cast<long long>(opt.N), p,
                                               opt_cell(rec.energy_error), opt_cell(rec.rate_energy), rec.l2_error,
                                               opt_cell(rec.rate_l2), deltas[c][k], ref_ps[k],
                                               published_cell(pub_energy), published_cell(pub_l2), hash});
                }
                report.series[c] = sc;
            }
            break;
        }
        cache.clear();
    }

    for (Case c : opt.cases) {
        for (auto& row : rows_by_case[c]) {
            report.rows.push_back(std::move(row));
        }
    }
    report.manifest["coarsening_check"] = checks;
    return report;
}

int published_node_count(double lambda, double p)
{
    static const std::map<std::pair<double, double>, int> table{
        {{4.0, 1.0}, 337},  {{4.0, 0.5}, 447},  {{4.0, 0.25}, 531},  {{4.0, 0.125}, 583},  {{4.0, 0.0}, 641},
        {{8.0, 1.0}, 413},  {{8.0, 0.5}, 643},  {{8.0, 0.25}, 847},  {{8.0, 0.125}, 985},  {{8.0, 0.0}, 1153},
    };
    const auto it = table.find({lambda, p});
    return it == table.end() ? 0 : it->second;
}

ConvergenceReport run_table_coarsening(const TableCoarseningOptions& opt)
{
    ConvergenceReport report;
    report.table = "table-coarsening";
    report.columns = {"N", "lambda", "p", "nodes", "published_nodes", "delta_A", "config_hash"};
    report.manifest["options"] = {{"N", opt.N},
                                  {"lambdas", opt.lambdas},
                                  {"p_values", opt.p_values},
                                  {"case", to_string(opt.problem)},
                                  {"compute_difference", opt.compute_difference},
                                  {"quad", quad_json(opt.quad)},
                                  {"normalization", to_string(opt.normalization)}};
    report.manifest["published_nodes"] =
        "published counts exist for N = 128 only; the column printed as lambda = 2^4 holds the lambda = 2^3 "
        "counts (the surrounding text names lambda = 2^2, 2^3), so lambda = 16 has no published value";
    report.manifest["delta_A"] = "L2(-1,1) difference to the uniform exterior grid (p = 0)";

    const FractionalOrder s = case_order(opt.problem);
    const SourceFunction f = case_source(opt.problem);
    for (double lambda : opt.lambdas) {
        std::optional<FEFunction> u_uniform;
        if (opt.compute_difference) {
            u_uniform = Operator(opt.N, lambda, 0.0, s, opt.normalization, opt.quad).solve(f);
        }
        for (double p : opt.p_values) {
            const auto mesh = make_mesh(opt.N, lambda, p);
            Cell delta;
            if (u_uniform) {
                delta = p == 0.0 ? 0.0
                                 : l2_difference(Operator(opt.N, lambda, p, s, opt.normalization, opt.quad).solve(f),
                                                 *u_uniform);
            }
            const RunConfig cfg = make_config(opt.problem, opt.N, lambda, p, opt.quad, opt.normalization);
            const std::string hash = config_hash(cfg);
            register_config(report, cfg, hash);
            const int published = opt.N == 128 ? published_node_count(lambda, p) : 0;
            report.rows.push_back({static_cast<long long>(opt.N), lambda, p, static_cast<long long>(mesh->num_nodes()),
                                   published ? Cell{static_cast<long long>(published)} : Cell{}, delta, hash});
        }
    }
    return report;
}

ConvergenceReport run_combined(const TableCombinedOptions& opt)
{
    ConvergenceReport report;
    report.table = "table-combined";
    report.columns = {"case", "h", "lambda", "N", "p", "l2_error", "rate_l2", "published_l2", "note", "config_hash"};
    json cells = json::array();
    for (const auto& c : opt.cells) {
        cells.push_back({{"N", c.N}, {"lambda", c.lambda}, {"p", c.p}});
    }
    report.manifest["options"] = {{"cases", cases_label(opt.cases)},
                                  {"cells", cells},
                                  {"quad", quad_json(opt.quad)},
                                  {"normalization", to_string(opt.normalization)}};
    report.manifest["error_definition"] =
        "L2(-1,1) difference to the analytic fractional Laplacian solution (closed form for f = 1, "
        "calibrated Green's function for f = x)";

    OperatorCache cache(opt.normalization, opt.quad);
    for (Case c : opt.cases) {
        const FractionalOrder s = case_order(c);
        const SourceFunction f = case_source(c);
        const auto u_exact = analytic_solution(c);
        auto& series = report.series[c];
        for (const auto& cell : opt.cells) {
            const FEFunction u = cache.get(cell.N, cell.lambda, cell.p, s).solve(f);
            series.push_back(ErrorRecord{2.0 / cell.N, l2_error_omega(u, u_exact), {}, {}, {}});
        }
        attach_rates(series);
        for (std::size_t k = 0; k < series.size(); ++k) {
            const auto& cell = opt.cells[k];
            const RunConfig cfg = make_config(c, cell.N, cell.lambda, cell.p, opt.quad, opt.normalization);
            const std::string hash = config_hash(cfg);
            register_config(report, cfg, hash);
            const double published = published_combined_error(c, cell.N, cell.lambda);
            std::string note;
            if (c == Case::Ia && cell.N == 64 && cell.lambda == 16.0) {
                note = "published 2.00e-03 is inconsistent with its neighbours and the rate 0.50; 2.00e-02 fits";
            }
            report.rows.push_back({to_string(c), series[k].param, cell.lambda, static_cast<long long>(cell.N), cell.p,
                                   series[k].l2_error, opt_cell(series[k].rate_l2), published_cell(published), note,
                                   hash});
        }
        cache.clear();
    }
    return report;
}

// ---------------------------------------------------------------------------------
// Figures and kernel check

namespace {

void emit_curve(std::ostream& out, const std::string& name, const std::vector<double>& xs,
                const std::function<double(double)>& f)
{
    for (double x : xs) {
        out << csv_escape(name) << ',' << format_double(x) << ',' << format_double(f(x)) << '\n';
    }
}

std::string lambda_label(double lambda)
{
    std::ostringstream os;
    os << lambda;
    return os.str();
}

void emit_solution_curves(std::ostream& out, json& meta, const std::vector<Case>& cases,
                          const std::vector<CombinedCell>& cells, const FigureOptions& opt)
{
    OperatorCache cache(opt.normalization, opt.quad);
    std::vector<double> grid;
    for (int k = 0; k <= 400; ++k) {
        grid.push_back(-1.0 + k / 200.0);
    }
    for (Case c : cases) {
        emit_curve(out, to_string(c) + " analytic", grid, analytic_solution(c));
        for (const auto& cell : cells) {
            const FEFunction u = cache.get(cell.N, cell.lambda, cell.p, case_order(c)).solve(case_source(c));
            const std::string name =
                to_string(c) + " N=" + std::to_string(cell.N) + " lambda=" + lambda_label(cell.lambda);
            const Mesh1D& m = u.mesh();
            emit_curve(out, name, sample_points(m, m.left_boundary_node(), m.right_boundary_node()), u);
            meta["curves"].push_back({{"name", name}, {"N", cell.N}, {"lambda", cell.lambda}, {"p", cell.p}});
        }
    }
}

std::vector<CombinedCell> cartesian(const std::vector<int>& Ns, const std::vector<double>& lambdas, double p)
{
    std::vector<CombinedCell> cells;
    for (int N : Ns) {
        for (double lambda : lambdas) {
            cells.push_back({N, lambda, p});
        }
    }
    return cells;
}

} // namespace

json emit_figure_data(const FigureOptions& opt, std::ostream& out)
{
    json meta = {{"figure", opt.id}, {"scale", to_string(opt.scale)}, {"normalization", to_string(opt.normalization)},
                 {"quad", quad_json(opt.quad)}};
    meta["curves"] = json::array();
    const bool paper = opt.scale == Scale::Paper;
    out << "curve,x,value\n";
    switch (opt.id) {
    case 1: {
        std::vector<double> grid;
        for (int k = 0; k <= 400; ++k) {
            grid.push_back(-1.0 + k / 200.0);
        }
        for (Case c : {Case::Ia, Case::Ib, Case::IIa, Case::IIb}) {
            emit_curve(out, to_string(c), grid, analytic_solution(c));
            meta["curves"].push_back({{"name", to_string(c)}});
        }
        break;
    }
    case 2:
        for (double p : {0.5, 1.0, 1.5}) {
            const auto mesh = make_mesh(16, 8.0, p);
            std::ostringstream name;
            name << "p=" << p;
            for (int k = 0; k < mesh->num_nodes(); ++k) {
                out << name.str() << ',' << format_double(mesh->node(k)) << ',' << k << '\n';
            }
            meta["curves"].push_back({{"name", name.str()}, {"N", 16}, {"lambda", 8.0}, {"p", p},
                                      {"nodes", mesh->num_nodes()}});
        }
        meta["value"] = "node index";
        break;
    case 3:
        emit_solution_curves(out, meta, {Case::Ia, Case::IIa},
                             paper ? cartesian({128, 256, 512}, {8, 32, 128}, 1.0)
                                   : cartesian({32, 128}, {2, 8, 32}, 1.0),
                             opt);
        break;
    case 4:
        emit_solution_curves(out, meta, {Case::Ib, Case::IIb},
                             paper ? cartesian({128, 256, 512}, {512, 1024, 2048}, 1.25)
                                   : cartesian({64, 128, 256}, {128, 256, 512}, 1.25),
                             opt);
        break;
    case 5:
        emit_solution_curves(out, meta, {Case::Ib, Case::IIb}, TableCombinedOptions::preset(opt.scale).cells, opt);
        break;
    default:
        throw std::invalid_argument("unknown figure id " + std::to_string(opt.id) + " (expected 1..5)");
    }
    return meta;
}

ConvergenceReport run_check_kernel(const KernelSpec& spec, int samples)
{
    const KernelCheckReport r = check_kernel_conditions(spec, samples);
    ConvergenceReport report;
    report.table = "check-kernel";
    report.columns = {"n",
                      "s",
                      "lambda",
                      "normalization",
                      "samples",
                      "nonnegative_on_ball",
                      "positive_on_half_ball",
                      "vanishes_outside_ball",
                      "power_bounds",
                      "worst_lower_margin",
                      "worst_upper_margin",
                      "passed"};
    auto flag = [](bool b) { return Cell{std::string(b ? "true" : "false")}; };
    report.rows.push_back({static_cast<long long>(spec.n()), spec.s().value(), spec.lambda(),
                           to_string(spec.normalization()), static_cast<long long>(r.samples),
                           flag(r.nonnegative_on_ball), flag(r.positive_on_half_ball), flag(r.vanishes_outside_ball),
                           flag(r.power_bounds), r.worst_lower_margin, r.worst_upper_margin, flag(r.passed())});
    report.manifest["kernel"] = {{"n", spec.n()}, {"s", spec.s().value()}, {"lambda", spec.lambda()}, {"c", spec.c()}};
    return report;
}

} // namespace nonlocal
