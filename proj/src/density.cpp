#include "topmg/density.hpp"

#include <cmath>
#include <string>

#include "topmg/errors.hpp"

namespace topmg {

void MaterialModel::validate() const {
  if (phase_moduli.empty()) {
    throw ConfigError("material needs at least one phase modulus");
  }
  for (std::size_t i = 0; i < phase_moduli.size(); ++i) {
    if (!(phase_moduli[i] > 0.0)) {
      throw ConfigError("phase modulus " + std::to_string(i + 1) +
                        " must be positive (void is a small positive number)");
    }
  }
  if (!(poisson_ratio > 0.0 && poisson_ratio < 0.5)) {
    throw ConfigError("poisson_ratio must lie in (0, 0.5), got " +
                      std::to_string(poisson_ratio));
  }
  if (!(penalty >= 1.0)) {
    throw ConfigError("penalty exponent must be >= 1, got " + std::to_string(penalty));
  }
}

DensityField::DensityField(int nx, int ny, int num_phases, double floor_eps)
    : nx_(nx), ny_(ny), num_phases_(num_phases), floor_eps_(floor_eps),
      values_(static_cast<std::size_t>(nx) * ny * num_phases, 0.0) {}

DensityField DensityField::uniform(int nx, int ny, const std::vector<double>& fractions,
                                   double floor_eps) {
  DensityField d(nx, ny, static_cast<int>(fractions.size()), floor_eps);
  for (int e = 0; e < d.element_count(); ++e) {
    for (int i = 0; i < d.num_phases_; ++i) {
      d.at(e, i) = fractions[static_cast<std::size_t>(i)];
    }
  }
  return d;
}

double DensityField::phase_mean(int phase) const {
  double s = 0.0;
  for (int e = 0; e < element_count(); ++e) s += at(e, phase);
  return s / element_count();
}

double DensityField::partition_defect() const {
  double worst = 0.0;
  for (int e = 0; e < element_count(); ++e) {
    double s = 0.0;
    for (int i = 0; i < num_phases_; ++i) s += at(e, i);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

double DensityField::max_change(const DensityField& a, const DensityField& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.values_.size(); ++i) {
    worst = std::max(worst, std::abs(a.values_[i] - b.values_[i]));
  }
  return worst;
}

double effective_modulus(const DensityField& density, int element,
                         const MaterialModel& mat) {
  const double p = mat.penalty;
  double e = 0.0;
  for (int i = 0; i < density.num_phases(); ++i) {
    e += std::pow(density.at(element, i), p) * mat.phase_moduli[static_cast<std::size_t>(i)];
  }
  return e;
}

std::vector<double> effective_moduli(const DensityField& density,
                                     const MaterialModel& mat) {
  std::vector<double> e(static_cast<std::size_t>(density.element_count()));
  for (int i = 0; i < density.element_count(); ++i) {
    e[static_cast<std::size_t>(i)] = effective_modulus(density, i, mat);
  }
  return e;
}

}  // namespace topmg
