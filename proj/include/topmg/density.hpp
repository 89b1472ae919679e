#pragma once

#include <vector>

namespace topmg {

/// Candidate phase set: n materials plus a void surrogate as the last entry.
/// Moduli are listed stiffest-first; the void modulus is small but positive.
struct MaterialModel {
  std::vector<double> phase_moduli;
  double poisson_ratio = 0.3;
  double penalty = 3.0;

  int num_phases() const { return static_cast<int>(phase_moduli.size()); }
  void validate() const;  // throws ConfigError
};

/// Per-element phase fractions on the finest grid. Fractions live in
/// [floor_eps, 1] and sum to 1 per element.
class DensityField {
 public:
  DensityField() = default;
  DensityField(int nx, int ny, int num_phases, double floor_eps = 1e-3);

  static DensityField uniform(int nx, int ny, const std::vector<double>& fractions,
                              double floor_eps = 1e-3);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int num_phases() const { return num_phases_; }
  int element_count() const { return nx_ * ny_; }
  double floor_eps() const { return floor_eps_; }

  double at(int element, int phase) const {
    return values_[static_cast<std::size_t>(element) * num_phases_ + phase];
  }
  double& at(int element, int phase) {
    return values_[static_cast<std::size_t>(element) * num_phases_ + phase];
  }

  double phase_mean(int phase) const;
  // max over elements of |sum_i alpha_i - 1|
  double partition_defect() const;
  // max |a - b| over all elements and phases
  static double max_change(const DensityField& a, const DensityField& b);

  const std::vector<double>& values() const { return values_; }

 private:
  int nx_ = 0;
  int ny_ = 0;
  int num_phases_ = 0;
  double floor_eps_ = 1e-3;
  std::vector<double> values_;  // element-major: values[e*num_phases + phase]
};

/// SIMP interpolation E(alpha) = sum_i alpha_i^p E_i over all phases of one
/// element.
double effective_modulus(const DensityField& density, int element,
                         const MaterialModel& mat);

/// Per-element effective moduli for the whole field.
std::vector<double> effective_moduli(const DensityField& density,
                                     const MaterialModel& mat);

}  // namespace topmg
