#include "forge/cli.hpp"

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "forge/corrugation.hpp"
#include "forge/curvature.hpp"
#include "forge/design_search.hpp"
#include "forge/freeness.hpp"
#include "forge/parallel.hpp"
#include "forge/serialization.hpp"

namespace forge::cli {

namespace {
using nlohmann::json;

void emit(const RunConfig& config, const std::string& text) {
  if (config.out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(config.out_path, text);
  }
}

std::vector<int> parse_range(const std::string& range) {
  std::vector<int> values;
  const auto dots = range.find("..");
  if (dots == std::string::npos) {
    values.push_back(std::stoi(range));
    return values;
  }
  const int lo = std::stoi(range.substr(0, dots));
  const int hi = std::stoi(range.substr(dots + 2));
  if (hi < lo) throw std::runtime_error("empty range " + range);
  for (int v = lo; v <= hi; ++v) values.push_back(v);
  return values;
}

CurvOptions curv_options(const RunConfig& config) {
  CurvOptions opts;
  opts.grid_res = config.grid_res;
  opts.multistart = config.starts;
  opts.seed = config.seed;
  return opts;
}

int cmd_verify(const RunConfig& config) {
  const FrequencySpec spec = load_spec(config.spec_path);
  const IsometryReport iso = spec.is_isometric(config.tol);
  const CurvatureReport rep = curv(spec, curv_options(config));

  json j;
  j["isometric"] = iso.isometric;
  j["defect"] = iso.defect;
  j["radius"] = spec.enclosing_radius();
  j["curv"] = rep.curv;
  j["product"] = rep.curv * spec.enclosing_radius();
  j["curvature"] = curvature_report_to_json(rep);

  bool failed = false;
  if (iso.isometric) {
    const PetruninReport pet = petrunin_product_check(spec, curv_options(config));
    j["petrunin"] = petrunin_report_to_json(pet);
    failed = !pet.pass;
  } else {
    j["petrunin"] = "skipped (not isometric)";
  }
  emit(config, j.dump(2) + "\n");
  return failed ? 2 : 0;
}

int cmd_curv(const RunConfig& config) {
  const FrequencySpec spec = load_spec(config.spec_path);
  const CurvatureReport rep = curv(spec, curv_options(config));
  emit(config, curvature_report_to_json(rep).dump(2) + "\n");
  return 0;
}

int cmd_free(const RunConfig& config) {
  const FrequencySpec spec = load_spec(config.spec_path);
  if (config.m > spec.intrinsic_dim())
    throw std::invalid_argument("--m exceeds the intrinsic dimension");
  json j;
  if (config.m > 0 && config.m < spec.intrinsic_dim()) {
    const MFreeReport rep = is_m_free(spec, config.m, config.trials, 25,
                                      config.tol, config.seed);
    j["m"] = rep.m;
    j["pass"] = rep.pass;
    j["directions_tested"] = rep.directions_tested;
    json subs = json::array();
    for (const auto& r : rep.reports) subs.push_back(osculating_report_to_json(r));
    j["restrictions"] = subs;
    j["thresholds"] = thresholds_to_json(
        dimension_thresholds(config.m, spec.intrinsic_dim()));
  } else {
    const OsculatingReport rep =
        is_free(spec, config.trials, config.tol, config.seed);
    j = osculating_report_to_json(rep);
    j["thresholds"] = thresholds_to_json(
        dimension_thresholds(spec.intrinsic_dim(), spec.intrinsic_dim()));
  }
  emit(config, j.dump(2) + "\n");
  return 0;
}

DesignSearchProblem make_problem(const RunConfig& config, int k_max) {
  DesignSearchProblem problem;
  problem.n = config.n;
  problem.k_max = k_max;
  problem.pool = config.sign_pool ? PoolPolicy::sign_vectors
                                  : PoolPolicy::norm_bounded;
  problem.norm_bound = config.pool_bound;
  problem.seed = config.seed;
  problem.budget = config.budget;
  return problem;
}

int cmd_search(const RunConfig& config) {
  const int k_max = config.big_n > 0 ? config.big_n : config.n;
  const DesignSearchProblem problem = make_problem(config, k_max);
  const DesignSearchResult res =
      config.exhaustive ? exhaustive_search(problem) : search(problem);
  if (config.format == "csv" || config.out_path.ends_with(".csv")) {
    emit(config, search_result_to_csv(res, k_max));
  } else {
    emit(config, search_result_to_json(res).dump(2) + "\n");
  }
  if (!config.spec_out_path.empty() && res.feasible)
    save_spec(config.spec_out_path, make_design_spec(res, config.seed));
  return 0;  // an infeasible search is a result, not an error
}

int cmd_table(const RunConfig& config) {
  const std::vector<int> n_values = parse_range(config.big_n_range);
  const DesignSearchProblem base = make_problem(config, config.n);
  const std::vector<DeltaTableRow> rows = delta_table(base, n_values);
  if (config.format == "json") {
    json j = json::array();
    for (const auto& r : rows) {
      json row;
      row["n"] = r.n;
      row["N"] = r.big_n;
      row["K"] = r.k;
      row["product"] = r.product;
      row["delta_hat"] = r.delta_hat;
      row["seed"] = r.seed;
      j.push_back(row);
    }
    emit(config, j.dump(2) + "\n");
  } else {
    emit(config, delta_table_to_csv(rows));
  }
  return 0;
}

int cmd_cascade(const RunConfig& config) {
  const CascadePlan plan = load_cascade_plan(config.plan_path, config.seed);
  const CascadeImmersion casc = cascade(plan.start, plan.steps);

  const FlatnessReport flat =
      certify_flat(casc, config.samples, 1e-6, config.seed);
  const OsculatingReport osc =
      is_free(casc, config.trials, config.tol, config.seed);
  const SampledCurvature sampled =
      curv_sampled(casc, std::min(config.trials, 50), config.seed,
                   CurvOptions::fast());

  json j;
  j["n"] = casc.intrinsic_dim();
  j["ambient_dim"] = casc.ambient_dim();
  const Eigen::VectorXd lengths = casc.achieved_lengths();
  j["achieved_lengths"] =
      std::vector<double>(lengths.data(), lengths.data() + lengths.size());
  const Metric g = casc.induced_metric();
  json metric = json::array();
  for (int r = 0; r < g.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < g.cols(); ++c) row.push_back(g(r, c));
    metric.push_back(row);
  }
  j["induced_metric"] = metric;
  j["flat"] = {{"flat", flat.flat},
               {"deviation", flat.deviation},
               {"samples", flat.samples}};
  j["osc2"] = osculating_report_to_json(osc);
  j["curv_sampled"] = sampled.curv;
  json steps = json::array();
  for (std::size_t p = 0; p < casc.steps().size(); ++p) {
    json s;
    s["eps"] = casc.steps()[p].eps;
    s["q"] = casc.steps()[p].q;
    s["index"] = casc.steps()[p].index;
    s["amplitude"] = casc.curves()[p].amplitude();
    s["closure_residual"] = casc.curves()[p].closure_residual();
    steps.push_back(s);
  }
  j["steps"] = steps;
  emit(config, j.dump(2) + "\n");
  return 0;
}

int cmd_clifford(const RunConfig& config) {
  const CliffordSubtorusResult res =
      clifford_subtorus(config.big_n, config.n, config.budget, config.seed);
  json j;
  j["N"] = config.big_n;
  j["n"] = config.n;
  j["found"] = res.spec.has_value();
  j["note"] = res.note;
  if (res.spec) {
    const CurvatureReport rep = curv(*res.spec, curv_options(config));
    j["curv"] = rep.curv;
    j["radius"] = res.spec->enclosing_radius();
    j["product"] = rep.curv * res.spec->enclosing_radius();
    j["spec"] = spec_to_json(*res.spec);
  }
  emit(config, j.dump(2) + "\n");
  if (res.spec && !config.spec_out_path.empty())
    save_spec(config.spec_out_path, *res.spec);
  return 0;
}
}  // namespace

int dispatch(const RunConfig& config) {
  if (config.command == "verify") return cmd_verify(config);
  if (config.command == "curv") return cmd_curv(config);
  if (config.command == "free") return cmd_free(config);
  if (config.command == "search") return cmd_search(config);
  if (config.command == "table") return cmd_table(config);
  if (config.command == "cascade") return cmd_cascade(config);
  if (config.command == "clifford") return cmd_clifford(config);
  std::cerr << "error: unknown command '" << config.command << "'\n";
  return 1;
}

int run(const std::vector<std::string>& args) {
  par::init_from_env();

  CLI::App app{"flat-torus immersion toolkit"};
  app.require_subcommand(1);
  RunConfig config;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", config.out_path, "output file (stdout if omitted)");
    sub->add_option("--tol", config.tol, "tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", config.seed, "random seed");
    sub->add_option("--res", config.grid_res, "grid oracle resolution");
    sub->add_option("--starts", config.starts, "multistart count");
  };

  CLI::App* verify = app.add_subcommand("verify", "check a spec file");
  verify->add_option("--spec", config.spec_path, "spec JSON")->required();
  add_common(verify);

  CLI::App* curv_cmd = app.add_subcommand("curv", "curvature report for a spec");
  curv_cmd->add_option("--spec", config.spec_path, "spec JSON")->required();
  add_common(curv_cmd);

  CLI::App* free_cmd = app.add_subcommand("free", "osculating rank report");
  free_cmd->add_option("--spec", config.spec_path, "spec JSON")->required();
  free_cmd->add_option("--m", config.m, "submanifold dimension for m-freeness");
  free_cmd->add_option("--trials", config.trials, "sample points / directions");
  add_common(free_cmd);

  CLI::App* search_cmd = app.add_subcommand("search", "minimum-product design search");
  search_cmd->add_option("--n", config.n, "intrinsic dimension")->required();
  search_cmd->add_option("--N", config.big_n, "ambient half-dimension (max modes)");
  search_cmd->add_option("--budget", config.budget, "annealing moves per chain");
  search_cmd->add_option("--pool-bound", config.pool_bound, "max ||w||^2 in the pool");
  search_cmd->add_flag("--sign-pool", config.sign_pool, "restrict pool to sign vectors");
  search_cmd->add_flag("--exhaustive", config.exhaustive, "enumerate instead of annealing");
  search_cmd->add_option("--format", config.format, "json or csv");
  search_cmd->add_option("--spec-out", config.spec_out_path, "also write the design spec");
  search_cmd->add_option("--out", config.out_path, "output file");
  search_cmd->add_option("--seed", config.seed, "random seed")->required();
  search_cmd->add_option("--tol", config.tol, "tolerance");

  CLI::App* table_cmd = app.add_subcommand("table", "delta table over a range of N");
  table_cmd->add_option("--n", config.n, "intrinsic dimension")->required();
  table_cmd->add_option("--N", config.big_n_range, "range of N, e.g. 2..24")->required();
  table_cmd->add_option("--budget", config.budget, "annealing moves per chain");
  table_cmd->add_option("--pool-bound", config.pool_bound, "max ||w||^2 in the pool");
  table_cmd->add_option("--format", config.format, "json or csv (default csv)");
  table_cmd->add_option("--out", config.out_path, "output file");
  table_cmd->add_option("--seed", config.seed, "random seed")->required();

  CLI::App* cascade_cmd = app.add_subcommand("cascade", "run a bending plan");
  cascade_cmd->add_option("--plan", config.plan_path, "plan JSON")->required();
  cascade_cmd->add_option("--samples", config.samples, "flatness sample count");
  cascade_cmd->add_option("--trials", config.trials, "osculating sample points");
  add_common(cascade_cmd);

  CLI::App* clifford_cmd = app.add_subcommand("clifford", "invariant subtorus construction");
  clifford_cmd->add_option("--N", config.big_n, "Clifford torus half-dimension")->required();
  clifford_cmd->add_option("--n", config.n, "subtorus dimension")->required();
  clifford_cmd->add_option("--budget", config.budget, "search trials");
  clifford_cmd->add_option("--spec-out", config.spec_out_path, "write the spec here");
  add_common(clifford_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  for (CLI::App* sub : app.get_subcommands()) config.command = sub->get_name();

  try {
    return dispatch(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace forge::cli
