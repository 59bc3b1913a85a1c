#include "forge/quartic_form.hpp"

#include <algorithm>
#include <stdexcept>

#include "forge/frequency_spec.hpp"

namespace forge {

namespace {
double tuple_multiplicity(const std::array<int, 4>& e) {
  // 4! / (product of factorials of repetition counts)
  int counts[4] = {1, 0, 0, 0};
  int distinct = 0;
  for (int p = 1; p < 4; ++p) {
    if (e[p] == e[p - 1]) {
      ++counts[distinct];
    } else {
      ++distinct;
      counts[distinct] = 1;
    }
  }
  auto fact = [](int m) { return m <= 1 ? 1 : (m == 2 ? 2 : (m == 3 ? 6 : 24)); };
  int denom = 1;
  for (int d = 0; d <= distinct; ++d) denom *= fact(counts[d]);
  return 24.0 / denom;
}
}  // namespace

QuarticForm::QuarticForm(int n) : n_(n) {
  if (n <= 0) throw std::invalid_argument("form dimension must be positive");
  lookup_.assign(static_cast<std::size_t>(n) * n * n * n, -1);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      for (int k = j; k < n; ++k)
        for (int l = k; l < n; ++l) {
          entries_.push_back({i, j, k, l});
          mult_.push_back(tuple_multiplicity(entries_.back()));
        }
  coef_.assign(entries_.size(), 0.0);
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const auto& t = entries_[e];
    int perm[4] = {t[0], t[1], t[2], t[3]};
    std::sort(perm, perm + 4);
    do {
      const std::size_t flat =
          ((static_cast<std::size_t>(perm[0]) * n + perm[1]) * n + perm[2]) * n +
          perm[3];
      lookup_[flat] = static_cast<int>(e);
    } while (std::next_permutation(perm, perm + 4));
  }
}

int QuarticForm::index_of(int i, int j, int k, int l) const {
  const std::size_t flat =
      ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  return lookup_[flat];
}

double QuarticForm::coefficient(int i, int j, int k, int l) const {
  return coef_[static_cast<std::size_t>(index_of(i, j, k, l))];
}

void QuarticForm::set_coefficient(int i, int j, int k, int l, double v) {
  coef_[static_cast<std::size_t>(index_of(i, j, k, l))] = v;
}

void QuarticForm::add_rank_one(const Eigen::VectorXd& w, double weight) {
  if (w.size() != n_) throw std::invalid_argument("direction dimension mismatch");
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const auto& t = entries_[e];
    coef_[e] += weight * w[t[0]] * w[t[1]] * w[t[2]] * w[t[3]];
  }
}

double QuarticForm::operator()(const Eigen::VectorXd& u) const {
  return eval_raw(u.data());
}

double QuarticForm::eval_raw(const double* u) const {
  double sum = 0.0;
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const auto& t = entries_[e];
    sum += mult_[e] * coef_[e] * u[t[0]] * u[t[1]] * u[t[2]] * u[t[3]];
  }
  return sum;
}

Eigen::VectorXd QuarticForm::gradient(const Eigen::VectorXd& u) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n_);
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const auto& t = entries_[e];
    const double a = mult_[e] * coef_[e];
    if (a == 0.0) continue;
    const double u0 = u[t[0]], u1 = u[t[1]], u2 = u[t[2]], u3 = u[t[3]];
    g[t[0]] += a * u1 * u2 * u3;
    g[t[1]] += a * u0 * u2 * u3;
    g[t[2]] += a * u0 * u1 * u3;
    g[t[3]] += a * u0 * u1 * u2;
  }
  return g;
}

QuarticForm QuarticForm::transform(const Eigen::MatrixXd& b) const {
  if (b.rows() != n_ || b.cols() != n_)
    throw std::invalid_argument("transform shape mismatch");
  const int n = n_;
  // dense n^4 tensor, contracted one slot at a time
  std::vector<double> t0(static_cast<std::size_t>(n) * n * n * n, 0.0);
  auto at = [n](std::vector<double>& v, int i, int j, int k, int l) -> double& {
    return v[((static_cast<std::size_t>(i) * n + j) * n + k) * n + l];
  };
  for (std::size_t e = 0; e < entries_.size(); ++e) {
    const auto& tpl = entries_[e];
    int perm[4] = {tpl[0], tpl[1], tpl[2], tpl[3]};
    std::sort(perm, perm + 4);
    do {
      at(t0, perm[0], perm[1], perm[2], perm[3]) = coef_[e];
    } while (std::next_permutation(perm, perm + 4));
  }
  std::vector<double> cur = std::move(t0);
  for (int slot = 0; slot < 4; ++slot) {
    std::vector<double> next(static_cast<std::size_t>(n) * n * n * n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            const double v = at(cur, i, j, k, l);
            if (v == 0.0) continue;
            // contract the first slot against B, rotating slots so that
            // after four rounds every slot has been transformed once
            for (int a = 0; a < n; ++a) next[((static_cast<std::size_t>(j) * n + k) * n + l) * n + a] += v * b(i, a);
          }
    cur = std::move(next);
  }
  QuarticForm out(n);
  for (std::size_t e = 0; e < out.entries_.size(); ++e) {
    const auto& tpl = out.entries_[e];
    out.coef_[e] = at(cur, tpl[0], tpl[1], tpl[2], tpl[3]);
  }
  return out;
}

QuarticForm& QuarticForm::operator*=(double s) {
  for (double& c : coef_) c *= s;
  return *this;
}

QuarticForm QuarticForm::operator-(const QuarticForm& other) const {
  if (other.n_ != n_) throw std::invalid_argument("form dimension mismatch");
  QuarticForm out = *this;
  for (std::size_t e = 0; e < coef_.size(); ++e) out.coef_[e] -= other.coef_[e];
  return out;
}

QuarticForm QuarticForm::norm4(int n) {
  QuarticForm q(n);
  for (int i = 0; i < n; ++i) q.set_coefficient(i, i, i, i, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) q.set_coefficient(i, i, j, j, 1.0 / 3.0);
  return q;
}

QuarticForm QuarticForm::from_spec(const FrequencySpec& spec) {
  QuarticForm q(spec.intrinsic_dim());
  for (const Mode& m : spec.modes())
    q.add_rank_one(m.w.cast<double>(), m.r * m.r);
  return q;
}

QuarticForm QuarticForm::from_jet(const Jet2& jet) {
  const int n = static_cast<int>(jet.d1.cols());
  const int M = static_cast<int>(jet.value.size());
  QuarticForm q(n);
  for (std::size_t e = 0; e < q.entries_.size(); ++e) {
    const auto& t = q.entries_[e];
    const int i = t[0], j = t[1], k = t[2], l = t[3];
    double pair_ij_kl = 0.0, pair_ik_jl = 0.0, pair_il_jk = 0.0;
    for (int m = 0; m < M; ++m) {
      const Eigen::MatrixXd& h = jet.d2[static_cast<std::size_t>(m)];
      pair_ij_kl += h(i, j) * h(k, l);
      pair_ik_jl += h(i, k) * h(j, l);
      pair_il_jk += h(i, l) * h(j, k);
    }
    q.coef_[e] = (pair_ij_kl + pair_ik_jl + pair_il_jk) / 3.0;
  }
  return q;
}

double QuarticForm::pairing(const QuarticForm& p, const QuarticForm& q) {
  if (p.n_ != q.n_) throw std::invalid_argument("form dimension mismatch");
  double sum = 0.0;
  for (std::size_t e = 0; e < p.coef_.size(); ++e)
    sum += p.mult_[e] * p.coef_[e] * q.coef_[e];
  return sum;
}

}  // namespace forge
