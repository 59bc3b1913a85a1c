#include "forge/serialization.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace forge {

using nlohmann::json;

namespace {
json require(const json& j, const char* field) {
  if (!j.contains(field)) {
    throw std::runtime_error(std::string("missing field '") + field + "'");
  }
  return j.at(field);
}
}  // namespace

nlohmann::json spec_to_json(const FrequencySpec& spec) {
  json j;
  j["n"] = spec.intrinsic_dim();
  json modes = json::array();
  for (const Mode& m : spec.modes()) {
    json mode;
    mode["w"] = std::vector<int>(m.w.data(), m.w.data() + m.w.size());
    mode["r"] = m.r;
    mode["phi"] = m.phi;
    modes.push_back(mode);
  }
  j["modes"] = modes;
  return j;
}

FrequencySpec spec_from_json(const nlohmann::json& j) {
  const int n = require(j, "n").get<int>();
  std::vector<Mode> modes;
  for (const json& mode : require(j, "modes")) {
    Mode m;
    const std::vector<int> w = require(mode, "w").get<std::vector<int>>();
    m.w = Eigen::Map<const Eigen::VectorXi>(w.data(),
                                            static_cast<Eigen::Index>(w.size()));
    m.r = require(mode, "r").get<double>();
    m.phi = mode.contains("phi") ? mode.at("phi").get<double>() : 0.0;
    modes.push_back(std::move(m));
  }
  return FrequencySpec(n, std::move(modes));
}

void save_spec(const std::string& path, const FrequencySpec& spec) {
  write_text_file(path, spec_to_json(spec).dump(2) + "\n");
}

FrequencySpec load_spec(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw std::runtime_error("failed to parse " + path + ": " + e.what());
  }
  try {
    return spec_from_json(j);
  } catch (const std::exception& e) {
    throw std::runtime_error("invalid spec in " + path + ": " + e.what());
  }
}

nlohmann::json curvature_report_to_json(const CurvatureReport& rep) {
  json j;
  j["curv"] = rep.curv;
  j["argmax"] = std::vector<double>(rep.argmax.data(),
                                    rep.argmax.data() + rep.argmax.size());
  j["method"] = rep.method;
  j["gap"] = rep.gap;
  return j;
}

nlohmann::json petrunin_report_to_json(const PetruninReport& rep) {
  json j;
  j["product"] = rep.product;
  j["bound"] = rep.bound;
  j["pass"] = rep.pass;
  j["radius"] = rep.radius;
  j["curvature"] = curvature_report_to_json(rep.curvature);
  return j;
}

nlohmann::json osculating_report_to_json(const OsculatingReport& rep) {
  json j;
  j["required_rank"] = rep.required_rank;
  j["min_rank"] = rep.min_rank;
  j["free"] = rep.free;
  j["ranks"] = rep.ranks;
  j["margin"] = rep.margin;
  return j;
}

nlohmann::json thresholds_to_json(const DimensionThresholds& t) {
  json j;
  j["m"] = t.m;
  j["n"] = t.n;
  j["generic_m_free_ambient"] = t.generic_m_free_ambient;
  j["doubled_ambient_even"] = t.doubled_ambient_even;
  j["half_dim_min"] = t.half_dim_min;
  j["free_isometric_torus_dim"] = t.free_isometric_torus_dim;
  j["ii_isometric_torus_dim"] = t.ii_isometric_torus_dim;
  j["whitney_route_dim"] = t.whitney_route_dim;
  return j;
}

nlohmann::json search_result_to_json(const DesignSearchResult& res) {
  json j;
  j["feasible"] = res.feasible;
  j["n"] = res.n;
  json freqs = json::array();
  for (const Eigen::VectorXi& w : res.frequencies)
    freqs.push_back(std::vector<int>(w.data(), w.data() + w.size()));
  j["frequencies"] = freqs;
  j["weights"] = std::vector<double>(res.weights.data(),
                                     res.weights.data() + res.weights.size());
  j["radius"] = res.radius;
  j["product"] = res.product;
  j["delta_hat"] = res.delta_hat;
  j["isotropy_defect"] = res.isotropy_defect;
  j["curvature"] = curvature_report_to_json(res.curvature);
  j["isometry_residual"] = res.isometry_residual;
  j["isotropy_constrained"] = res.isotropy_constrained;
  j["seed"] = res.seed;
  j["iterations"] = res.iterations;
  if (!res.note.empty()) j["note"] = res.note;
  return j;
}

std::string format_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string delta_table_to_csv(const std::vector<DeltaTableRow>& rows) {
  std::ostringstream out;
  out << "n,N,K,product,delta_hat,seed\n";
  for (const DeltaTableRow& r : rows) {
    out << r.n << ',' << r.big_n << ',' << r.k << ',' << format_g12(r.product)
        << ',' << format_g12(r.delta_hat) << ',' << r.seed << '\n';
  }
  return out.str();
}

std::string search_result_to_csv(const DesignSearchResult& res, int big_n) {
  std::ostringstream out;
  out << "n,N,K,product,delta_hat,seed\n";
  out << res.n << ',' << big_n << ',' << res.frequencies.size() << ','
      << format_g12(res.product) << ',' << format_g12(res.delta_hat) << ','
      << res.seed << '\n';
  return out.str();
}

CascadePlan cascade_plan_from_json(const nlohmann::json& j,
                                   std::uint64_t phase_seed) {
  CascadePlan plan;
  const json start = require(j, "start");
  if (start.contains("clifford")) {
    const json c = start.at("clifford");
    plan.start = CascadeStart::clifford(require(c, "N").get<int>(),
                                        require(c, "n").get<int>(), phase_seed);
  } else if (start.contains("radii")) {
    const int n = require(start, "n").get<int>();
    const std::vector<double> radii =
        require(start, "radii").get<std::vector<double>>();
    if (start.contains("phases")) {
      plan.start = CascadeStart::split_torus(
          n, radii, start.at("phases").get<std::vector<double>>());
    } else {
      plan.start = CascadeStart::split_torus_seeded(n, radii, phase_seed);
    }
  } else if (start.contains("spec")) {
    plan.start.spec =
        std::make_shared<FrequencySpec>(spec_from_json(start.at("spec")));
    if (start.contains("extra")) {
      for (const json& e : start.at("extra")) {
        Mode m;
        m.r = require(e, "r").get<double>();
        m.phi = e.contains("phi") ? e.at("phi").get<double>() : 0.0;
        plan.start.extra.push_back(std::move(m));
      }
    }
  } else {
    throw std::runtime_error(
        "cascade start must contain 'clifford', 'radii' or 'spec'");
  }
  for (const json& s : require(j, "steps")) {
    CorrugationStep step;
    step.eps = require(s, "eps").get<double>();
    step.q = require(s, "q").get<int>();
    step.index = require(s, "index").get<int>();
    plan.steps.push_back(step);
  }
  return plan;
}

CascadePlan load_cascade_plan(const std::string& path,
                              std::uint64_t phase_seed) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw std::runtime_error("failed to parse " + path + ": " + e.what());
  }
  try {
    return cascade_plan_from_json(j, phase_seed);
  } catch (const std::exception& e) {
    throw std::runtime_error("invalid cascade plan in " + path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace forge
