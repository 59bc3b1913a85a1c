#pragma once

#include <Eigen/Dense>
#include <memory>
#include <stdexcept>
#include <vector>

namespace forge {

using Metric = Eigen::MatrixXd;

/// Exact order-2 jet of a map R^n -> R^M at a point.
struct Jet2 {
  Eigen::VectorXd value;               // M
  Eigen::MatrixXd d1;                  // M x n, column i = df/dt_i
  std::vector<Eigen::MatrixXd> d2;     // M entries, each n x n symmetric

  Eigen::MatrixXd metric() const { return d1.transpose() * d1; }

  // Hessian contracted with a direction: sum_ij u_i u_j d2f/dt_i dt_j.
  Eigen::VectorXd hessian_dir(const Eigen::VectorXd& u) const {
    Eigen::VectorXd out(value.size());
    for (Eigen::Index m = 0; m < value.size(); ++m)
      out[m] = u.dot(d2[static_cast<std::size_t>(m)] * u);
    return out;
  }
};

/// A smooth immersion of the torus R^n / 2*pi*Z^n into R^M with closed-form
/// jets. Implementations are immutable; evaluation is safe from any thread.
class Immersion {
 public:
  virtual ~Immersion() = default;

  virtual int intrinsic_dim() const = 0;
  virtual int ambient_dim() const = 0;
  virtual Jet2 jet2(const Eigen::VectorXd& t) const = 0;

  virtual Eigen::VectorXd value(const Eigen::VectorXd& t) const {
    return jet2(t).value;
  }

  Eigen::MatrixXd metric_at(const Eigen::VectorXd& t) const {
    return jet2(t).metric();
  }

 protected:
  void check_point(const Eigen::VectorXd& t) const {
    if (t.size() != intrinsic_dim())
      throw std::invalid_argument("point dimension does not match immersion");
  }
};

using ImmersionPtr = std::shared_ptr<const Immersion>;

/// Precomposition with an affine change of variables t -> C*t + t0. Carries
/// non-unit lattices: the composite is periodic with respect to whatever
/// lattice C^{-1} maps onto 2*pi*Z^n of the base.
class LinearReparam final : public Immersion {
 public:
  LinearReparam(ImmersionPtr base, Eigen::MatrixXd change, Eigen::VectorXd offset)
      : base_(std::move(base)), change_(std::move(change)), offset_(std::move(offset)) {
    if (!base_) throw std::invalid_argument("null base immersion");
    if (change_.rows() != base_->intrinsic_dim() || offset_.size() != change_.rows())
      throw std::invalid_argument("reparametrization shape mismatch");
  }

  int intrinsic_dim() const override { return static_cast<int>(change_.cols()); }
  int ambient_dim() const override { return base_->ambient_dim(); }

  Jet2 jet2(const Eigen::VectorXd& t) const override {
    check_point(t);
    const Jet2 base = base_->jet2(change_ * t + offset_);
    Jet2 out;
    out.value = base.value;
    out.d1 = base.d1 * change_;
    out.d2.reserve(static_cast<std::size_t>(ambient_dim()));
    for (const auto& h : base.d2) out.d2.push_back(change_.transpose() * h * change_);
    return out;
  }

 private:
  ImmersionPtr base_;
  Eigen::MatrixXd change_;
  Eigen::VectorXd offset_;
};

}  // namespace forge
