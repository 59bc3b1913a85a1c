#pragma once

#include <json.hpp>
#include <string>
#include <utility>
#include <vector>

#include "forge/corrugation.hpp"
#include "forge/curvature.hpp"
#include "forge/design_search.hpp"
#include "forge/freeness.hpp"
#include "forge/frequency_spec.hpp"

namespace forge {

nlohmann::json spec_to_json(const FrequencySpec& spec);
FrequencySpec spec_from_json(const nlohmann::json& j);

void save_spec(const std::string& path, const FrequencySpec& spec);
FrequencySpec load_spec(const std::string& path);

nlohmann::json curvature_report_to_json(const CurvatureReport& rep);
nlohmann::json petrunin_report_to_json(const PetruninReport& rep);
nlohmann::json osculating_report_to_json(const OsculatingReport& rep);
nlohmann::json thresholds_to_json(const DimensionThresholds& t);
nlohmann::json search_result_to_json(const DesignSearchResult& res);

/// CSV row per table entry, fixed column order:
/// n,N,K,product,delta_hat,seed with 12 significant digits.
std::string delta_table_to_csv(const std::vector<DeltaTableRow>& rows);
std::string search_result_to_csv(const DesignSearchResult& res, int big_n);

struct CascadePlan {
  CascadeStart start;
  std::vector<CorrugationStep> steps;
};

/// {"start": {...}, "steps": [{"eps": f, "q": int, "index": int}, ...]}
/// where start is {"clifford": {"N": int, "n": int}} or
/// {"n": int, "radii": [f, ...], "phases": [f, ...] (optional)} or
/// {"spec": {...}, "extra": [{"r": f, "phi": f}, ...]}.
CascadePlan cascade_plan_from_json(const nlohmann::json& j,
                                   std::uint64_t phase_seed);
CascadePlan load_cascade_plan(const std::string& path, std::uint64_t phase_seed);

std::string format_g12(double v);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace forge
