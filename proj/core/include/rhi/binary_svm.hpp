#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace rhi {

enum class KernelType { kLinear, kRbf };

std::string to_string(KernelType k);
KernelType parse_kernel(const std::string& s);

struct SvmParams {
  KernelType kernel = KernelType::kLinear;
  double C = 1.0;
  double gamma = 0.0;         // RBF width; 0 means 1 / feature_length
  double tolerance = 1e-6;    // projected-gradient gap at which training stops
  int max_epochs = 100;
  std::uint64_t seed = 1;
  bool balance_classes = true;

  friend bool operator==(const SvmParams&, const SvmParams&) = default;
};

// Two-class max-margin separator trained in the dual. The bias is learned as
// the weight of a constant feature 1, so decision(x) = w.x + b (linear) or
// sum_i c_i (K(s_i, x) + 1) (RBF).
class BinarySvm {
 public:
  double decision(std::span<const double> x) const;

  KernelType kernel() const { return kernel_; }
  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }
  std::size_t support_count() const { return coefficients_.size(); }
  int epochs() const { return epochs_; }
  bool converged() const { return converged_; }

  void write(std::ostream& os) const;
  static BinarySvm read(std::istream& is);

  static BinarySvm linear(std::vector<double> weights, double bias);

  friend bool operator==(const BinarySvm&, const BinarySvm&) = default;

 private:
  friend BinarySvm train_binary_svm(std::span<const std::span<const double>>, std::span<const int>,
                                    std::span<const double>, const SvmParams&);

  KernelType kernel_ = KernelType::kLinear;
  double gamma_ = 0.0;
  std::vector<double> weights_;
  double bias_ = 0.0;
  std::vector<std::vector<double>> support_;
  std::vector<double> coefficients_;  // alpha_i * y_i
  int epochs_ = 0;
  bool converged_ = false;
};

// rows: training vectors; labels: +1 / -1; upper_bounds: per-sample box
// constraint (C times any class weight).
BinarySvm train_binary_svm(std::span<const std::span<const double>> rows, std::span<const int> labels,
                           std::span<const double> upper_bounds, const SvmParams& params);

// Largest sample count the RBF trainer accepts (it holds the full Gram matrix).
inline constexpr std::size_t kMaxRbfSamples = 6000;

}  // namespace rhi
