#include "forge/design_search.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "forge/linprog.hpp"
#include "forge/parallel.hpp"
#include "forge/rng.hpp"

namespace forge {

namespace {
constexpr double kInfeasibleValue = 1e9;

bool lex_less(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

bool multiset_less(const std::vector<Eigen::VectorXi>& a,
                   const std::vector<Eigen::VectorXi>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (lex_less(a[i], b[i])) return true;
    if (lex_less(b[i], a[i])) return false;
  }
  return false;
}

std::vector<Eigen::VectorXi> sorted_freqs(const std::vector<Eigen::VectorXi>& v) {
  std::vector<Eigen::VectorXi> out = v;
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

Eigen::VectorXi canonical_sign(Eigen::VectorXi w) {
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] != 0) {
      if (w[i] < 0) w = -w;
      break;
    }
  }
  return w;
}

struct Score {
  bool feasible = false;
  double value = kInfeasibleValue;
  double product = kInfeasibleValue;
  Eigen::VectorXd weights;
  bool isotropy = false;
  double residual = 0.0;
};

double product_for_weights(const std::vector<Eigen::VectorXi>& freqs,
                           const Eigen::VectorXd& weights, int n,
                           const CurvOptions& opts,
                           CurvatureReport* report = nullptr) {
  QuarticForm q(n);
  double total = 0.0;
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    if (weights[static_cast<Eigen::Index>(k)] <= 0.0) continue;
    q.add_rank_one(freqs[k].cast<double>(), weights[static_cast<Eigen::Index>(k)]);
    total += weights[static_cast<Eigen::Index>(k)];
  }
  const CurvatureReport rep = max_on_sphere(q, Metric::Identity(n, n), opts);
  if (report) *report = rep;
  return rep.curv * std::sqrt(total);
}

Score score_subset(const std::vector<Eigen::VectorXi>& freqs, int n,
                   const DesignSearchProblem& problem) {
  Score s;
  const WeightSolution iso = solve_weights(freqs, n, false);
  if (iso.status != WeightStatus::ok) return s;
  s.feasible = true;
  s.weights = iso.weights;
  s.residual = iso.residual;
  s.product = product_for_weights(freqs, iso.weights, n, problem.scoring);

  const WeightSolution four = solve_weights(freqs, n, true);
  if (four.status == WeightStatus::ok) {
    const double alt =
        product_for_weights(freqs, four.weights, n, problem.scoring);
    if (alt < s.product) {
      s.product = alt;
      s.weights = four.weights;
      s.isotropy = true;
      s.residual = four.residual;
    }
  }

  if (problem.objective == SearchObjective::min_isotropy) {
    QuarticForm q(n);
    for (std::size_t k = 0; k < freqs.size(); ++k)
      if (s.weights[static_cast<Eigen::Index>(k)] > 0.0)
        q.add_rank_one(freqs[k].cast<double>(),
                       s.weights[static_cast<Eigen::Index>(k)]);
    s.value = isotropy_defect(q, problem.scoring);
  } else {
    s.value = s.product;
  }
  return s;
}

struct ChainResult {
  Score best;
  std::vector<int> subset;
  long long moves = 0;
};

std::vector<Eigen::VectorXi> select(const std::vector<Eigen::VectorXi>& pool,
                                    const std::vector<int>& idx) {
  std::vector<Eigen::VectorXi> out;
  out.reserve(idx.size());
  for (int i : idx) out.push_back(pool[static_cast<std::size_t>(i)]);
  return out;
}

ChainResult run_chain(const DesignSearchProblem& problem,
                      const std::vector<Eigen::VectorXi>& pool,
                      const std::vector<std::vector<int>>& neighbors,
                      int chain_id) {
  Rng rng = Rng(problem.seed).fork(static_cast<std::uint64_t>(chain_id));
  const int pool_size = static_cast<int>(pool.size());
  const int k = std::min(problem.k_max, pool_size);

  std::vector<int> subset;
  if (chain_id == 0) {
    // deterministic warm start: largest-norm candidates first
    std::vector<int> order(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const int na = pool[static_cast<std::size_t>(a)].squaredNorm();
      const int nb = pool[static_cast<std::size_t>(b)].squaredNorm();
      if (na != nb) return na > nb;
      return a < b;
    });
    subset.assign(order.begin(), order.begin() + k);
  } else {
    std::vector<int> all(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) all[i] = static_cast<int>(i);
    for (int i = 0; i < k; ++i) {
      const int j = static_cast<int>(rng.uniform_int(i, pool_size - 1));
      std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
    }
    subset.assign(all.begin(), all.begin() + k);
  }
  std::sort(subset.begin(), subset.end());

  std::map<std::vector<int>, Score> cache;
  auto score_of = [&](const std::vector<int>& s) -> const Score& {
    auto it = cache.find(s);
    if (it == cache.end())
      it = cache.emplace(s, score_subset(select(pool, s), problem.n, problem)).first;
    return it->second;
  };

  Score cur = score_of(subset);
  ChainResult result{cur, subset, 0};
  if (k >= pool_size) return result;  // the whole pool: nothing to swap
  double temp = problem.t0;
  int stagnation = 0;

  for (int move = 0; move < problem.budget; ++move) {
    ++result.moves;
    std::vector<int> cand = subset;
    const int pos = static_cast<int>(rng.uniform_int(0, k - 1));
    const int old = cand[static_cast<std::size_t>(pos)];
    std::vector<int> options;
    for (int nb : neighbors[static_cast<std::size_t>(old)])
      if (!std::binary_search(subset.begin(), subset.end(), nb))
        options.push_back(nb);
    int repl;
    if (!options.empty()) {
      repl = options[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<long long>(options.size()) - 1))];
    } else {
      do {
        repl = static_cast<int>(rng.uniform_int(0, pool_size - 1));
      } while (std::binary_search(subset.begin(), subset.end(), repl));
    }
    cand[static_cast<std::size_t>(pos)] = repl;
    std::sort(cand.begin(), cand.end());

    const Score& cs = score_of(cand);
    const double delta = cs.value - cur.value;
    if (delta <= 0.0 || rng.uniform() < std::exp(-delta / temp)) {
      subset = cand;
      cur = cs;
    }
    temp *= problem.cooling;

    if (cur.value < result.best.value - 1e-15) {
      result.best = cur;
      result.subset = subset;
      stagnation = 0;
    } else if (++stagnation >= problem.stagnation_limit) {
      subset = result.subset;
      cur = result.best;
      temp = problem.t0;
      stagnation = 0;
    }
  }
  return result;
}

DesignSearchResult finalize(const DesignSearchProblem& problem,
                            const std::vector<Eigen::VectorXi>& pool,
                            const Score& best, const std::vector<int>& subset,
                            long long iterations) {
  DesignSearchResult out;
  out.n = problem.n;
  out.seed = problem.seed;
  out.iterations = iterations;
  if (!best.feasible) {
    out.note = "no feasible candidate found within budget";
    return out;
  }

  const std::vector<Eigen::VectorXi> freqs = select(pool, subset);
  // keep the support only, re-sorted for reproducible reports
  std::vector<std::pair<Eigen::VectorXi, double>> support;
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const double w = best.weights[static_cast<Eigen::Index>(k)];
    if (w > 1e-12) support.emplace_back(freqs[k], w);
  }
  std::sort(support.begin(), support.end(),
            [](const auto& a, const auto& b) { return lex_less(a.first, b.first); });

  out.feasible = true;
  out.isotropy_constrained = best.isotropy;
  out.frequencies.reserve(support.size());
  out.weights.resize(static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) {
    out.frequencies.push_back(support[k].first);
    out.weights[static_cast<Eigen::Index>(k)] = support[k].second;
  }
  out.radius = std::sqrt(out.weights.sum());
  out.product = product_for_weights(out.frequencies, out.weights, problem.n,
                                    problem.final_report, &out.curvature);
  out.delta_hat = out.product - petrunin_bound(problem.n);

  Metric g = Metric::Zero(problem.n, problem.n);
  for (std::size_t k = 0; k < out.frequencies.size(); ++k) {
    const Eigen::VectorXd w = out.frequencies[k].cast<double>();
    g += out.weights[static_cast<Eigen::Index>(k)] * (w * w.transpose());
  }
  out.isometry_residual =
      (g - Metric::Identity(problem.n, problem.n)).cwiseAbs().maxCoeff();

  QuarticForm q(problem.n);
  for (std::size_t k = 0; k < out.frequencies.size(); ++k)
    q.add_rank_one(out.frequencies[k].cast<double>(),
                   out.weights[static_cast<Eigen::Index>(k)]);
  out.isotropy_defect = isotropy_defect(q, problem.scoring);
  return out;
}
}  // namespace

WeightSolution solve_weights(const std::vector<Eigen::VectorXi>& frequencies,
                             int n, bool fourth_moment_isotropy) {
  if (static_cast<int>(frequencies.size()) < n)
    throw std::invalid_argument("need at least n candidate vectors");
  const int kf = static_cast<int>(frequencies.size());
  const int second_rows = n * (n + 1) / 2;

  QuarticForm pattern(n);
  const QuarticForm norm4 = QuarticForm::norm4(n);
  const int quartic_rows =
      fourth_moment_isotropy ? pattern.coefficient_count() : 0;
  const int rows = second_rows + quartic_rows;
  const int cols = kf + (fourth_moment_isotropy ? 1 : 0);

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
  int r = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      for (int k = 0; k < kf; ++k)
        a(r, k) = static_cast<double>(frequencies[static_cast<std::size_t>(k)][i]) *
                  frequencies[static_cast<std::size_t>(k)][j];
      b[r] = (i == j) ? 1.0 : 0.0;
      ++r;
    }
  if (fourth_moment_isotropy) {
    for (int e = 0; e < pattern.coefficient_count(); ++e) {
      const auto& t = pattern.entries()[static_cast<std::size_t>(e)];
      for (int k = 0; k < kf; ++k) {
        const Eigen::VectorXi& w = frequencies[static_cast<std::size_t>(k)];
        a(r, k) = static_cast<double>(w[t[0]]) * w[t[1]] * w[t[2]] * w[t[3]];
      }
      a(r, kf) = -norm4.values()[static_cast<std::size_t>(e)];
      b[r] = 0.0;
      ++r;
    }
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols);
  cost.head(kf).setOnes();

  const lp::Result res = lp::solve(a, b, cost);
  WeightSolution out;
  switch (res.status) {
    case lp::Status::optimal:
      out.status = WeightStatus::ok;
      out.weights = res.x.head(kf);
      out.total = out.weights.sum();
      out.residual = res.residual;
      break;
    case lp::Status::infeasible:
      out.status = WeightStatus::infeasible;
      break;
    default:
      out.status = WeightStatus::failure;
      break;
  }
  return out;
}

std::vector<Eigen::VectorXi> build_pool(const DesignSearchProblem& problem) {
  const int n = problem.n;
  std::vector<Eigen::VectorXi> pool;
  const int bound = problem.pool == PoolPolicy::sign_vectors
                        ? 1
                        : static_cast<int>(std::floor(
                              std::sqrt(static_cast<double>(problem.norm_bound))));
  const long long limit =
      problem.pool == PoolPolicy::sign_vectors ? n : problem.norm_bound;

  Eigen::VectorXi w = Eigen::VectorXi::Constant(n, -bound);
  while (true) {
    const long long norm2 = w.cast<long long>().squaredNorm();
    if (norm2 >= 1 && norm2 <= limit) {
      const Eigen::VectorXi canon = canonical_sign(w);
      if (canon == w) pool.push_back(w);
    }
    int pos = n - 1;
    while (pos >= 0 && w[pos] == bound) {
      w[pos] = -bound;
      --pos;
    }
    if (pos < 0) break;
    ++w[pos];
  }
  std::sort(pool.begin(), pool.end(), lex_less);
  return pool;
}

FrequencySpec make_design_spec(const DesignSearchResult& result,
                               std::uint64_t phase_seed) {
  if (!result.feasible)
    throw std::invalid_argument("cannot build a spec from an infeasible result");
  std::vector<Mode> modes;
  for (std::size_t k = 0; k < result.frequencies.size(); ++k) {
    Mode m;
    m.w = result.frequencies[k];
    m.r = std::sqrt(result.weights[static_cast<Eigen::Index>(k)]);
    modes.push_back(std::move(m));
  }
  return FrequencySpec::with_generic_phases(result.n, std::move(modes),
                                            phase_seed);
}

DesignSearchResult search(const DesignSearchProblem& problem) {
  if (problem.budget < 1) throw std::invalid_argument("budget must be >= 1");
  const std::vector<Eigen::VectorXi> pool = build_pool(problem);
  if (static_cast<int>(pool.size()) < problem.n)
    throw std::invalid_argument("candidate pool has fewer than n vectors");

  // nearest candidates by L1 distance, at least 8 per entry
  std::vector<std::vector<int>> neighbors(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    std::vector<std::pair<int, int>> by_dist;
    for (std::size_t j = 0; j < pool.size(); ++j) {
      if (i == j) continue;
      const int dist = (pool[i] - pool[j]).cwiseAbs().sum();
      by_dist.emplace_back(dist, static_cast<int>(j));
    }
    std::sort(by_dist.begin(), by_dist.end());
    const std::size_t keep = std::min<std::size_t>(by_dist.size(), 8);
    std::size_t take = keep;
    while (take < by_dist.size() && by_dist[take].first == by_dist[keep - 1].first)
      ++take;  // include the whole tier of the last kept distance
    for (std::size_t t = 0; t < take; ++t) neighbors[i].push_back(by_dist[t].second);
  }

  const int chains = std::max(1, problem.chains);
  std::vector<ChainResult> results(static_cast<std::size_t>(chains));
  par::for_each_index(
      static_cast<std::size_t>(chains),
      [&](std::size_t c) {
        results[c] = run_chain(problem, pool, neighbors, static_cast<int>(c));
      },
      par::Exec::parallel);

  long long total_moves = 0;
  int winner = 0;
  for (int c = 0; c < chains; ++c) {
    total_moves += results[static_cast<std::size_t>(c)].moves;
    if (c == 0) continue;
    const auto& cand = results[static_cast<std::size_t>(c)];
    const auto& best = results[static_cast<std::size_t>(winner)];
    if (cand.best.value < best.best.value - 1e-12) {
      winner = c;
    } else if (std::abs(cand.best.value - best.best.value) <= 1e-12) {
      if (multiset_less(sorted_freqs(select(pool, cand.subset)),
                        sorted_freqs(select(pool, best.subset))))
        winner = c;
    }
  }
  const auto& w = results[static_cast<std::size_t>(winner)];
  return finalize(problem, pool, w.best, w.subset, total_moves);
}

DesignSearchResult exhaustive_search(const DesignSearchProblem& problem) {
  const std::vector<Eigen::VectorXi> pool = build_pool(problem);
  const int pool_size = static_cast<int>(pool.size());
  const int k_hi = std::min(problem.k_max, pool_size);

  double combos = 0.0;
  for (int k = problem.n; k <= k_hi; ++k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c *= static_cast<double>(pool_size - i) / (i + 1);
    combos += c;
  }
  if (combos > 2e6)
    throw std::invalid_argument("pool too large for exhaustive enumeration");

  Score best;
  std::vector<int> best_subset;
  long long count = 0;
  for (int k = std::max(1, problem.n); k <= k_hi; ++k) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      ++count;
      const Score s = score_subset(select(pool, idx), problem.n, problem);
      if (s.feasible &&
          (s.value < best.value - 1e-12 ||
           (std::abs(s.value - best.value) <= 1e-12 &&
            multiset_less(sorted_freqs(select(pool, idx)),
                          sorted_freqs(select(pool, best_subset)))))) {
        best = s;
        best_subset = idx;
      }
      int pos = k - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == pool_size - k + pos)
        --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int p = pos + 1; p < k; ++p)
        idx[static_cast<std::size_t>(p)] = idx[static_cast<std::size_t>(p - 1)] + 1;
    }
  }
  return finalize(problem, pool, best, best_subset, count);
}

std::vector<DeltaTableRow> delta_table(const DesignSearchProblem& base,
                                       const std::vector<int>& n_values) {
  std::vector<DeltaTableRow> rows;
  DesignSearchResult carried;
  bool have = false;
  for (int big_n : n_values) {
    if (big_n < base.n) throw std::invalid_argument("each N must be >= n");
    DesignSearchProblem problem = base;
    problem.k_max = big_n;
    DesignSearchResult res = search(problem);
    if (have && carried.feasible &&
        (!res.feasible || carried.product < res.product))
      res = carried;  // a design feasible at smaller N stays feasible
    carried = res;
    have = true;
    DeltaTableRow row;
    row.n = base.n;
    row.big_n = big_n;
    row.k = static_cast<int>(res.frequencies.size());
    row.product = res.product;
    row.delta_hat = res.delta_hat;
    row.seed = base.seed;
    rows.push_back(row);
  }
  return rows;
}

namespace {
Eigen::MatrixXi sylvester_hadamard(int order) {
  Eigen::MatrixXi h(1, 1);
  h(0, 0) = 1;
  while (h.rows() < order) {
    Eigen::MatrixXi next(2 * h.rows(), 2 * h.cols());
    next << h, h, h, -h;
    h = next;
  }
  return h;
}

bool rows_all_nonzero(const Eigen::MatrixXi& a) {
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    if (a.row(r).isZero()) return false;
  return true;
}

FrequencySpec spec_from_rows(const Eigen::MatrixXi& a, int big_n,
                             std::uint64_t seed) {
  std::vector<Mode> modes;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Mode m;
    m.w = a.row(r).transpose();
    m.r = 1.0 / std::sqrt(static_cast<double>(big_n));
    modes.push_back(std::move(m));
  }
  return FrequencySpec::with_generic_phases(static_cast<int>(a.cols()),
                                            std::move(modes), seed);
}
}  // namespace

CliffordSubtorusResult clifford_subtorus(int big_n, int n, int budget,
                                         std::uint64_t seed) {
  if (n < 1 || big_n < n) throw std::invalid_argument("need 1 <= n <= N");
  CliffordSubtorusResult out;

  if (n == 1) {
    out.a = Eigen::MatrixXi::Ones(big_n, 1);
    out.spec = spec_from_rows(out.a, big_n, seed);
    out.note = "all-ones column";
    return out;
  }

  // stack of Sylvester blocks whose orders are powers of two >= n
  int m0 = 1;
  while (m0 < n) m0 *= 2;
  if (big_n % m0 == 0) {
    Eigen::MatrixXi a(big_n, n);
    int row = 0;
    int remaining = big_n;
    while (remaining > 0) {
      int block = m0;
      while (2 * block <= remaining) block *= 2;
      const Eigen::MatrixXi h = sylvester_hadamard(block);
      a.block(row, 0, block, n) = h.leftCols(n);
      row += block;
      remaining -= block;
    }
    if (rows_all_nonzero(a)) {
      out.a = a;
      out.spec = spec_from_rows(a, big_n, seed);
      out.note = "hadamard block construction";
      return out;
    }
  }

  // randomized column search at desk scale
  if (big_n <= 12) {
    std::vector<Eigen::VectorXi> candidates;
    const int bound = static_cast<int>(std::floor(std::sqrt(static_cast<double>(big_n))));
    Eigen::VectorXi v = Eigen::VectorXi::Constant(big_n, -bound);
    while (true) {
      if (v.cast<long long>().squaredNorm() == big_n) candidates.push_back(v);
      int pos = big_n - 1;
      while (pos >= 0 && v[pos] == bound) {
        v[pos] = -bound;
        --pos;
      }
      if (pos < 0) break;
      ++v[pos];
    }
    Rng rng(seed);
    for (int trial = 0; trial < budget; ++trial) {
      Eigen::MatrixXi a(big_n, n);
      bool ok = true;
      std::vector<int> chosen;
      for (int c = 0; c < n && ok; ++c) {
        const int pick = static_cast<int>(
            rng.uniform_int(0, static_cast<long long>(candidates.size()) - 1));
        for (int prev : chosen)
          if (candidates[static_cast<std::size_t>(pick)].dot(
                  candidates[static_cast<std::size_t>(prev)]) != 0) {
            ok = false;
            break;
          }
        if (ok) {
          chosen.push_back(pick);
          a.col(c) = candidates[static_cast<std::size_t>(pick)];
        }
      }
      if (ok && rows_all_nonzero(a)) {
        out.a = a;
        out.spec = spec_from_rows(a, big_n, seed);
        out.note = "randomized column search";
        return out;
      }
    }
  }

  if (n == big_n) {
    // full torus: identity frequencies with radii 1/sqrt(N). Isometric only
    // up to homothety, but the scale-invariant product curv * R is sqrt(N)
    // exactly, and the form exists for every N.
    std::vector<Mode> modes;
    for (int k = 0; k < n; ++k) {
      Mode m;
      m.w = Eigen::VectorXi::Unit(n, k);
      m.r = 1.0 / std::sqrt(static_cast<double>(big_n));
      modes.push_back(std::move(m));
    }
    out.a = Eigen::MatrixXi::Identity(big_n, n);
    out.spec = FrequencySpec::with_generic_phases(n, std::move(modes), seed);
    out.note = "full torus, scaled identity parametrization";
    return out;
  }

  std::ostringstream note;
  note << "no integer matrix with A^T A = " << big_n << " I_" << n
       << " and nonzero rows found within budget";
  if (big_n % 2 == 1)
    note << " (odd N typically admits none for n >= 2: parity obstruction)";
  out.note = note.str();
  return out;
}

}  // namespace forge
