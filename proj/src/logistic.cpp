#include <cmath>

#include "chd/error.hpp"
#include "chd/models.hpp"

namespace chd {
namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

}  // namespace

double LogisticModel::score(std::span<const double> x) const {
  double z = bias;
  for (std::size_t j = 0; j < x.size(); ++j) z += weights(static_cast<Eigen::Index>(j)) * x[j];
  return sigmoid(z);
}

namespace logistic {

double loss(const Matrix& x, std::span<const int> y, const Vector& w, double b, double lambda) {
  const double n = static_cast<double>(x.rows());
  const Vector z = (x * w).array() + b;
  double nll = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i)
    nll += softplus(z(i)) - static_cast<double>(y[static_cast<std::size_t>(i)]) * z(i);
  return nll / n + lambda / (2.0 * n) * w.squaredNorm();
}

void gradient(const Matrix& x, std::span<const int> y, const Vector& w, double b, double lambda,
              Vector& grad_w, double& grad_b) {
  const double n = static_cast<double>(x.rows());
  Vector residual = (x * w).array() + b;
  for (Eigen::Index i = 0; i < residual.size(); ++i)
    residual(i) = sigmoid(residual(i)) - static_cast<double>(y[static_cast<std::size_t>(i)]);
  grad_w = (x.transpose() * residual) / n + (lambda / n) * w;
  grad_b = residual.sum() / n;
}

LogisticModel train(const Matrix& x, std::span<const int> y, const Options& options,
                    std::vector<double>* loss_trace) {
  if (static_cast<std::size_t>(x.rows()) != y.size())
    throw Error(Errc::LengthMismatch, "labels vs rows");
  LogisticModel m;
  m.weights = Vector::Zero(x.cols());
  double step = options.step;
  double current = loss(x, y, m.weights, m.bias, options.lambda);
  Vector gw;
  double gb = 0.0;
  gradient(x, y, m.weights, m.bias, options.lambda, gw, gb);

  while (m.iterations < options.max_iterations) {
    const double gnorm = std::max(gw.cwiseAbs().maxCoeff(), std::abs(gb));
    if (gnorm < options.tolerance) {
      m.converged = true;
      break;
    }
    ++m.iterations;
    const Vector w_next = m.weights - step * gw;
    const double b_next = m.bias - step * gb;
    const double next = loss(x, y, w_next, b_next, options.lambda);
    if (next <= current) {
      m.weights = w_next;
      m.bias = b_next;
      current = next;
      if (loss_trace) loss_trace->push_back(current);
      gradient(x, y, m.weights, m.bias, options.lambda, gw, gb);
    } else {
      step *= 0.5;
    }
  }
  if (!m.converged) {
    const double gnorm = std::max(gw.cwiseAbs().maxCoeff(), std::abs(gb));
    m.converged = gnorm < options.tolerance;
  }
  return m;
}

}  // namespace logistic
}  // namespace chd
