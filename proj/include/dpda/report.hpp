#pragma once

#include "dpda/experiments.hpp"

#include <iosfwd>
#include <json.hpp>

namespace dpda {

using nlohmann::json;

inline constexpr const char* kMetricsHeader = "k,comms,objective,subopt,infeas_sum,cons_viol,d_ctilde,bound_value";

// Columns of kMetricsHeader, reals as %.12e.
void write_metrics_csv(std::ostream& os, const RunReport& rep);
void save_metrics_csv(const std::string& path, const RunReport& rep);
// Restores the CSV columns only.
std::vector<IterationMetrics> read_metrics_csv(std::istream& is);
std::vector<IterationMetrics> load_metrics_csv(const std::string& path);

// Whitespace separated reals; one block per line.
void write_blocks(std::ostream& os, const Blocks& x);
Blocks read_blocks(std::istream& is);
Blocks load_blocks(const std::string& path);
void save_blocks(const std::string& path, const Blocks& x);

json to_json(const Vec& v);
Vec vec_from_json(const json& j);
json to_json(const Blocks& x);
Blocks blocks_from_json(const json& j);
json to_json(const IterationMetrics& m);
json to_json(const Certificate& c);
Certificate certificate_from_json(const json& j);

// Rows, final iterates and diagnostics plus the caller's config echo.
json run_summary(const RunReport& rep, const json& config, std::uint64_t seed,
                 const std::optional<Certificate>& cert = std::nullopt);
json solution_to_json(const CentralSolution& sol);
CentralSolution solution_from_json(const json& j);
json suite_summary(const SuiteResult& res);

void write_boundaries_csv(std::ostream& os, const std::vector<BoundaryRow>& rows);

json load_json(const std::string& path);
void save_json(const std::string& path, const json& j);

}  // namespace dpda
