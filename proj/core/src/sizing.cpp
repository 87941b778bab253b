#include "wmsketch/sizing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wmsketch::sizing {

namespace {

void validate(const TheoryParams& p) {
  if (!(p.epsilon > 0.0 && p.epsilon <= 1.0)) throw std::invalid_argument("epsilon must be in (0, 1]");
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw std::invalid_argument("delta must be in (0, 1)");
  if (p.dim < 1) throw std::invalid_argument("dim must be at least 1");
  if (!(p.beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(p.gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(p.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(p.c1 > 0.0) || !(p.c2 > 0.0)) throw std::invalid_argument("constants must be positive");
}

SketchSize round_size(double k_real, double s_real) {
  uint32_t s = static_cast<uint32_t>(std::max(1.0, std::ceil(s_real)));
  uint64_t k = static_cast<uint64_t>(std::ceil(k_real / s)) * s;
  if (k == 0) k = s;
  return {k, s};
}

}  // namespace

double theoretical_k_real(const TheoryParams& p) {
  validate(p);
  double l = std::log(static_cast<double>(p.dim) / p.delta);
  double reg = p.beta * p.beta * std::pow(p.gamma, 4) / (p.lambda * p.lambda);
  return (p.c1 / std::pow(p.epsilon, 4)) * l * l * l * std::max(1.0, reg);
}

double theoretical_s_real(const TheoryParams& p) {
  validate(p);
  double l = std::log(static_cast<double>(p.dim) / p.delta);
  double reg = p.beta * p.gamma * p.gamma / p.lambda;
  return (p.c2 / (p.epsilon * p.epsilon)) * l * l * std::max(1.0, reg);
}

SketchSize theoretical_size(const TheoryParams& p) {
  return round_size(theoretical_k_real(p), theoretical_s_real(p));
}

SketchSize simplified_size(double epsilon, double delta, uint64_t dim, double lambda) {
  TheoryParams p;
  p.epsilon = epsilon;
  p.delta = delta;
  p.dim = dim;
  p.lambda = lambda;
  validate(p);
  double l = std::log(static_cast<double>(dim) / delta);
  double k_real = l * l * l / (std::pow(epsilon, 4) * lambda * lambda);
  double s_real = l * l / (epsilon * epsilon * lambda);
  return round_size(k_real, s_real);
}

}  // namespace wmsketch::sizing
