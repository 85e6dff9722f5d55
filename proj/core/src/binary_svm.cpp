#include "rhi/binary_svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "rhi/error.hpp"
#include "rhi/text_io.hpp"

namespace rhi {

std::string to_string(KernelType k) { return k == KernelType::kLinear ? "linear" : "rbf"; }

KernelType parse_kernel(const std::string& s) {
  if (s == "linear") return KernelType::kLinear;
  if (s == "rbf") return KernelType::kRbf;
  ThrowData("unknown kernel '" + s + "' (expected linear or rbf)");
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double rbf(std::span<const double> a, std::span<const double> b, double gamma) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

void shuffle_prefix(std::vector<std::size_t>& index, std::size_t n, std::mt19937_64& rng) {
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(index[i - 1], index[j]);
  }
}

// Hinge-loss dual coordinate descent with shrinking for the linear kernel.
void train_linear(std::vector<double>& w, double& b,
                  std::span<const std::span<const double>> rows, std::span<const int> y,
                  std::span<const double> upper, const SvmParams& params, int& epochs, bool& converged) {
  const std::size_t n = rows.size();
  const std::size_t dim = rows.front().size();
  w.assign(dim, 0.0);
  b = 0.0;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> qd(n);
  for (std::size_t i = 0; i < n; ++i) qd[i] = dot(rows[i], rows[i]) + 1.0;
  std::vector<std::size_t> index(n);
  std::iota(index.begin(), index.end(), 0);
  std::mt19937_64 rng(params.seed);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  double pg_max_old = kInf;
  double pg_min_old = -kInf;
  std::size_t active = n;
  epochs = 0;
  converged = false;
  while (epochs < params.max_epochs) {
    double pg_max_new = -kInf;
    double pg_min_new = kInf;
    shuffle_prefix(index, active, rng);
    for (std::size_t s = 0; s < active; ++s) {
      const std::size_t i = index[s];
      const double yi = y[i];
      const double g = yi * (dot(w, rows[i]) + b) - 1.0;
      const double c = upper[i];
      double pg = 0.0;
      if (alpha[i] == 0.0) {
        if (g > pg_max_old) {
          --active;
          std::swap(index[s], index[active]);
          --s;
          continue;
        }
        if (g < 0.0) pg = g;
      } else if (alpha[i] == c) {
        if (g < pg_min_old) {
          --active;
          std::swap(index[s], index[active]);
          --s;
          continue;
        }
        if (g > 0.0) pg = g;
      } else {
        pg = g;
      }
      pg_max_new = std::max(pg_max_new, pg);
      pg_min_new = std::min(pg_min_new, pg);
      if (std::abs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::min(std::max(alpha[i] - g / qd[i], 0.0), c);
        const double delta = (alpha[i] - old) * yi;
        const auto xi = rows[i];
        for (std::size_t k = 0; k < dim; ++k) w[k] += delta * xi[k];
        b += delta;
      }
    }
    ++epochs;
    if (pg_max_new - pg_min_new <= params.tolerance) {
      if (active == n) {
        converged = true;
        break;
      }
      active = n;
      pg_max_old = kInf;
      pg_min_old = -kInf;
      continue;
    }
    pg_max_old = pg_max_new <= 0.0 ? kInf : pg_max_new;
    pg_min_old = pg_min_new >= 0.0 ? -kInf : pg_min_new;
  }
}

}  // namespace

BinarySvm BinarySvm::linear(std::vector<double> weights, double bias) {
  BinarySvm m;
  m.kernel_ = KernelType::kLinear;
  m.weights_ = std::move(weights);
  m.bias_ = bias;
  m.converged_ = true;
  return m;
}

double BinarySvm::decision(std::span<const double> x) const {
  if (kernel_ == KernelType::kLinear) {
    if (x.size() != weights_.size()) ThrowInvalid("decision: feature length mismatch");
    return dot(weights_, x) + bias_;
  }
  double s = 0.0;
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (x.size() != support_[i].size()) ThrowInvalid("decision: feature length mismatch");
    s += coefficients_[i] * (rbf(support_[i], x, gamma_) + 1.0);
  }
  return s;
}

BinarySvm train_binary_svm(std::span<const std::span<const double>> rows, std::span<const int> labels,
                           std::span<const double> upper_bounds, const SvmParams& params) {
  const std::size_t n = rows.size();
  if (n == 0) ThrowInvalid("train_binary_svm: no samples");
  if (labels.size() != n || upper_bounds.size() != n) ThrowInvalid("train_binary_svm: size mismatch");
  const std::size_t dim = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != dim) ThrowInvalid("train_binary_svm: ragged feature rows");
  }
  for (int l : labels) {
    if (l != 1 && l != -1) ThrowInvalid("train_binary_svm: labels must be +1 or -1");
  }
  if (!(params.tolerance > 0.0) || params.max_epochs < 1) ThrowInvalid("train_binary_svm: bad stopping rule");

  BinarySvm model;
  model.kernel_ = params.kernel;
  if (params.kernel == KernelType::kLinear) {
    train_linear(model.weights_, model.bias_, rows, labels, upper_bounds, params, model.epochs_,
                 model.converged_);
    return model;
  }

  if (n > kMaxRbfSamples) {
    ThrowInvalid("train_binary_svm: RBF training supports at most " + std::to_string(kMaxRbfSamples) +
                 " samples");
  }
  model.gamma_ = params.gamma > 0.0 ? params.gamma : 1.0 / static_cast<double>(std::max<std::size_t>(dim, 1));
  // Q_ij = y_i y_j (K_ij + 1), kept in full.
  std::vector<float> q(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i * n + i] = 2.0f;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = labels[i] * labels[j] * (rbf(rows[i], rows[j], model.gamma_) + 1.0);
      q[i * n + j] = q[j * n + i] = static_cast<float>(v);
    }
  }
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);
  std::vector<std::size_t> index(n);
  std::iota(index.begin(), index.end(), 0);
  std::mt19937_64 rng(params.seed);
  model.epochs_ = 0;
  while (model.epochs_ < params.max_epochs) {
    double pg_max = -std::numeric_limits<double>::infinity();
    double pg_min = std::numeric_limits<double>::infinity();
    shuffle_prefix(index, n, rng);
    for (std::size_t i : index) {
      const double g = grad[i];
      const double c = upper_bounds[i];
      double pg = g;
      if (alpha[i] == 0.0) pg = std::min(g, 0.0);
      else if (alpha[i] == c) pg = std::max(g, 0.0);
      pg_max = std::max(pg_max, pg);
      pg_min = std::min(pg_min, pg);
      if (std::abs(pg) > 1e-12) {
        const double old = alpha[i];
        alpha[i] = std::min(std::max(alpha[i] - g / q[i * n + i], 0.0), c);
        const double delta = alpha[i] - old;
        const float* qi = &q[i * n];
        for (std::size_t j = 0; j < n; ++j) grad[j] += delta * qi[j];
      }
    }
    ++model.epochs_;
    if (pg_max - pg_min <= params.tolerance) {
      model.converged_ = true;
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > 0.0) {
      model.support_.emplace_back(rows[i].begin(), rows[i].end());
      model.coefficients_.push_back(alpha[i] * labels[i]);
    }
  }
  return model;
}

void BinarySvm::write(std::ostream& os) const {
  os << "svm " << to_string(kernel_) << ' ' << epochs_ << ' ' << (converged_ ? 1 : 0) << '\n';
  if (kernel_ == KernelType::kLinear) {
    os << "w " << weights_.size() << ' ';
    text::write_doubles(os, weights_);
    os << "\nb " << text::format_double(bias_) << '\n';
  } else {
    os << "gamma " << text::format_double(gamma_) << "\nsv " << support_.size() << ' '
       << (support_.empty() ? 0 : support_.front().size()) << '\n';
    for (std::size_t i = 0; i < support_.size(); ++i) {
      os << text::format_double(coefficients_[i]) << ' ';
      text::write_doubles(os, support_[i]);
      os << '\n';
    }
  }
}

BinarySvm BinarySvm::read(std::istream& is) {
  BinarySvm m;
  text::expect_keyword(is, "svm");
  m.kernel_ = parse_kernel(text::expect_token(is, "kernel"));
  m.epochs_ = static_cast<int>(text::read_int(is, "epochs"));
  m.converged_ = text::read_int(is, "converged flag") != 0;
  if (m.kernel_ == KernelType::kLinear) {
    text::expect_keyword(is, "w");
    const auto dim = text::read_int(is, "weight count");
    if (dim < 0) ThrowData("negative weight count");
    m.weights_ = text::read_doubles(is, static_cast<std::size_t>(dim), "weights");
    text::expect_keyword(is, "b");
    m.bias_ = text::read_double(is, "bias");
  } else {
    text::expect_keyword(is, "gamma");
    m.gamma_ = text::read_double(is, "gamma");
    text::expect_keyword(is, "sv");
    const auto count = text::read_int(is, "support count");
    const auto dim = text::read_int(is, "support dimension");
    if (count < 0 || dim < 0) ThrowData("negative support vector shape");
    for (long long i = 0; i < count; ++i) {
      m.coefficients_.push_back(text::read_double(is, "coefficient"));
      m.support_.push_back(text::read_doubles(is, static_cast<std::size_t>(dim), "support vector"));
    }
  }
  return m;
}

}  // namespace rhi
