#pragma once

#include "nonlocal/assembly.hpp"
#include "nonlocal/kernel.hpp"
#include "nonlocal/metrics.hpp"

#include <json.hpp>

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace nonlocal {

inline constexpr std::string_view kToolVersion = "0.3.0";

/// Data sets: f = 1 (I) or f = x (II), with s = 0.75 (a) or s = 0.40 (b).
enum class Case { Ia, Ib, IIa, IIb };
enum class Scale { Desk, Paper };

std::string to_string(Case c);
Case case_from_string(std::string_view name);
std::string to_string(Scale s);
Scale scale_from_string(std::string_view name);

FractionalOrder case_order(Case c);
SourceFunction case_source(Case c);
bool case_has_constant_source(Case c);

struct RunConfig {
    Case problem = Case::Ia;
    int N = 64;
    double lambda = 1.0;
    double p = 0.5;
    QuadConfig quad{};
    Normalization normalization = Normalization::Classical;
    bool toeplitz_cache = false;
    std::shared_ptr<const RunConfig> surrogate;

    void validate() const;
    [[nodiscard]] KernelSpec kernel() const;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Reads the keys present in j on top of base; nested "surrogate" objects recurse.
RunConfig run_config_from_json(const nlohmann::json& j, const RunConfig& base = {});
/// 64-bit FNV-1a of the compact JSON form, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

struct SolveResult {
    NonlocalSystem system;
    FEFunction u;
};

SolveResult run_solve(const RunConfig& cfg);
SolveResult run_solve(const RunConfig& cfg, const SourceFunction& f);

/// (x, u) at every node plus 4 interior points per element, header "x,u". A non-empty
/// hash adds a config_hash column.
void write_solution_csv(const FEFunction& u, std::ostream& out, std::string_view hash = {});

using Cell = std::variant<std::monostate, long long, double, std::string>;

struct ConvergenceReport {
    std::string table;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::map<Case, std::vector<ErrorRecord>> series;
    nlohmann::json manifest = nlohmann::json::object();
};

/// Header row, then one line per row; doubles at 17 significant digits.
void write_report_csv(const ConvergenceReport& report, std::ostream& out);

struct TableHOptions {
    std::vector<Case> cases{Case::Ia, Case::Ib};
    std::vector<int> N_values{16, 32, 64, 128};
    double lambda = 0.1;
    double p = 0.0;
    int surrogate_N = 1024;
    QuadConfig quad{};
    Normalization normalization = Normalization::Classical;

    static TableHOptions preset(Scale scale);
};

struct TableLambdaOptions {
    std::vector<Case> cases{Case::Ia, Case::IIa, Case::Ib, Case::IIb};
    int N = 256;
    std::vector<double> lambdas{8, 16, 32, 64};
    double p = 0.5;
    double surrogate_lambda = 512;
    double surrogate_p = 1.25;
    /// Reference for the coarsening check is the uniform exterior up to this many
    /// exterior nodes per side, otherwise p / 2.
    int uniform_reference_limit = 4096;
    /// Coarsening differences must stay below this fraction of the smallest error.
    double check_factor = 0.1;
    int max_escalations = 4;
    QuadConfig quad{};
    Normalization normalization = Normalization::Classical;

    static TableLambdaOptions preset(Scale scale);
};

struct TableCoarseningOptions {
    int N = 128;
    std::vector<double> lambdas{4, 8, 16};
    std::vector<double> p_values{1.0, 0.5, 0.25, 0.125, 0.0};
    Case problem = Case::Ia;
    bool compute_difference = true;
    QuadConfig quad{};
    Normalization normalization = Normalization::Classical;
};

struct CombinedCell {
    int N;
    double lambda;
    double p;
};

struct TableCombinedOptions {
    std::vector<Case> cases{Case::Ia, Case::Ib};
    std::vector<CombinedCell> cells{{32, 8, 0.5}, {64, 16, 0.5}, {128, 32, 0.5}};
    QuadConfig quad{};
    Normalization normalization = Normalization::Classical;

    static TableCombinedOptions preset(Scale scale);
};

ConvergenceReport run_table_h(const TableHOptions& opt);
ConvergenceReport run_table_lambda(const TableLambdaOptions& opt);
ConvergenceReport run_table_coarsening(const TableCoarseningOptions& opt);
ConvergenceReport run_combined(const TableCombinedOptions& opt);

/// Published node counts for N = 128 (lambda = 4 and lambda = 8), 0 when unknown.
int published_node_count(double lambda, double p);

struct FigureOptions {
    int id = 1;
    Scale scale = Scale::Desk;
    QuadConfig quad{};
    Normalization normalization = Normalization::Classical;
};

/// Long-format curves "curve,x,value" for figure id 1..5. Returns manifest data.
nlohmann::json emit_figure_data(const FigureOptions& opt, std::ostream& out);

/// Kernel condition report as a one-row table.
ConvergenceReport run_check_kernel(const KernelSpec& spec, int samples);

} // namespace nonlocal
