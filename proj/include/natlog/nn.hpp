#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "natlog/rng.hpp"

namespace natlog {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline Vec tanh_activation(const Vec& x) { return x.array().tanh(); }

// f(x) = max(x, 0) + 0.01 min(x, 0)
inline Vec leaky_rectifier(const Vec& x) {
  return x.cwiseMax(0.0) + 0.01 * x.cwiseMin(0.0);
}

// tanh' expressed through the activation value.
inline Vec tanh_derivative(const Vec& activation) {
  return (1.0 - activation.array().square()).matrix();
}

inline Vec leaky_rectifier_derivative(const Vec& pre_activation) {
  return pre_activation.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.01; });
}

struct SoftmaxResult {
  Vec probabilities;
  double loss = 0.0;
};

// Max-subtracted softmax with the negative log likelihood of the gold label.
inline SoftmaxResult softmax_nll(const Vec& logits, int gold) {
  if (gold < 0 || gold >= logits.size())
    throw std::out_of_range("gold label index out of range");
  const double peak = logits.maxCoeff();
  Vec shifted = (logits.array() - peak).exp();
  const double total = shifted.sum();
  SoftmaxResult result;
  result.probabilities = shifted / total;
  result.loss = -(logits[gold] - peak - std::log(total));
  return result;
}

struct AdaDeltaHyper {
  double rho = 0.95;
  double epsilon = 1e-6;
};

// One elementwise update:
//   Eg2  <- rho Eg2 + (1-rho) g^2
//   dx    = -sqrt(Edx2 + eps) / sqrt(Eg2 + eps) * g
//   Edx2 <- rho Edx2 + (1-rho) dx^2
//   p    <- p + dx
inline void adadelta_step(double* param, const double* grad, double* grad_sq,
                          double* update_sq, std::ptrdiff_t n,
                          const AdaDeltaHyper& hyper) {
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double g = grad[i];
    grad_sq[i] = hyper.rho * grad_sq[i] + (1.0 - hyper.rho) * g * g;
    const double dx = -std::sqrt(update_sq[i] + hyper.epsilon) /
                      std::sqrt(grad_sq[i] + hyper.epsilon) * g;
    update_sq[i] = hyper.rho * update_sq[i] + (1.0 - hyper.rho) * dx * dx;
    param[i] += dx;
  }
}

inline void adadelta_step(Mat& param, const Mat& grad, Mat& grad_sq,
                          Mat& update_sq, const AdaDeltaHyper& hyper) {
  if (param.rows() != grad.rows() || param.cols() != grad.cols())
    throw std::invalid_argument("gradient shape does not match parameter");
  adadelta_step(param.data(), grad.data(), grad_sq.data(), update_sq.data(),
                param.size(), hyper);
}

// I.i.d. uniform draws in [lo, hi), filled in storage order.
inline Mat init_uniform(Eigen::Index rows, Eigen::Index cols, double lo,
                        double hi, Rng& rng) {
  if (!(lo < hi)) throw std::invalid_argument("empty initialization range");
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.real_in(lo, hi);
  return m;
}

inline Vec init_uniform(Eigen::Index n, double lo, double hi, Rng& rng) {
  Mat m = init_uniform(n, 1, lo, hi, rng);
  return m.col(0);
}

// A named view over one parameter block's flat storage; models expose their
// parameters as a list of these so the optimizer, the checkpoint format and
// the gradient checker need no per-architecture code.
struct ParamView {
  std::string name;
  double* data = nullptr;
  std::ptrdiff_t size = 0;
};

// Central finite differences against the analytic gradient, coordinate by
// coordinate. Views and gradients must be listed in the same order.
inline double grad_check_max_error(const std::vector<ParamView>& params,
                                   const std::vector<ParamView>& analytic,
                                   const std::function<double()>& loss,
                                   double step = 1e-5) {
  if (params.size() != analytic.size())
    throw std::invalid_argument("parameter/gradient view mismatch");
  double worst = 0.0;
  for (std::size_t v = 0; v < params.size(); ++v) {
    if (params[v].size != analytic[v].size)
      throw std::invalid_argument("parameter/gradient view mismatch: " +
                                  params[v].name);
    for (std::ptrdiff_t i = 0; i < params[v].size; ++i) {
      double& x = params[v].data[i];
      const double saved = x;
      x = saved + step;
      const double up = loss();
      x = saved - step;
      const double down = loss();
      x = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double exact = analytic[v].data[i];
      const double scale =
          std::max({std::abs(numeric), std::abs(exact), 1e-8});
      worst = std::max(worst, std::abs(numeric - exact) / scale);
    }
  }
  return worst;
}

}  // namespace natlog
