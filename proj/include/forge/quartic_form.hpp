#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "forge/immersion.hpp"

namespace forge {

class FrequencySpec;

/// Symmetric 4-linear form on R^n, stored as the canonical array of
/// coefficients S_{ijkl} over multi-indices i <= j <= k <= l with
/// Q(u) = sum over all index tuples of S_{ijkl} u_i u_j u_k u_l.
class QuarticForm {
 public:
  explicit QuarticForm(int n);

  int dim() const { return n_; }
  int coefficient_count() const { return static_cast<int>(entries_.size()); }

  double coefficient(int i, int j, int k, int l) const;
  void set_coefficient(int i, int j, int k, int l, double v);
  void add_rank_one(const Eigen::VectorXd& w, double weight);

  const std::vector<std::array<int, 4>>& entries() const { return entries_; }
  const std::vector<double>& values() const { return coef_; }
  const std::vector<double>& multiplicities() const { return mult_; }

  double operator()(const Eigen::VectorXd& u) const;
  /// Allocation-free evaluation over a raw coordinate array of length dim().
  double eval_raw(const double* u) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& u) const;

  /// Coefficients of v -> Q(B v).
  QuarticForm transform(const Eigen::MatrixXd& b) const;

  QuarticForm& operator*=(double s);
  QuarticForm operator-(const QuarticForm& other) const;

  /// ||u||^4 as a symmetric form.
  static QuarticForm norm4(int n);

  /// Psi of a trigonometric immersion: Q(u) = sum_k r_k^2 <w_k, u>^4.
  static QuarticForm from_spec(const FrequencySpec& spec);

  /// Per-point squared Hessian norm of a general immersion:
  /// Q(u) = || sum_ij u_i u_j d2f_ij ||^2, symmetrized.
  static QuarticForm from_jet(const Jet2& jet);

  /// Apolar-style pairing consistent with evaluation: for Q = sum_s x_s l_s^4
  /// this equals sum_s x_s P(l_s).
  static double pairing(const QuarticForm& p, const QuarticForm& q);

 private:
  int index_of(int i, int j, int k, int l) const;

  int n_;
  std::vector<std::array<int, 4>> entries_;
  std::vector<double> mult_;
  std::vector<double> coef_;
  std::vector<int> lookup_;  // dense n^4 table into entries_
};

}  // namespace forge
