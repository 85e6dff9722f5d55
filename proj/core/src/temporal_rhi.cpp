#include "rhi/temporal_rhi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "rhi/error.hpp"

namespace rhi {

std::vector<double> GaussianFilterBank::combined_taps() const {
  if (taps.empty()) return {};
  std::vector<double> sum(taps.front().size(), 0.0);
  for (const auto& t : taps) {
    for (std::size_t f = 0; f < t.size(); ++f) sum[f] += t[f];
  }
  return sum;
}

std::size_t RhiDescriptor::feature_length() const {
  return matrix.size() + (mean_block ? mean_block->size() : 0);
}

std::vector<double> RhiDescriptor::flatten() const {
  std::vector<double> out;
  out.reserve(feature_length());
  append_to(out);
  return out;
}

void RhiDescriptor::append_to(std::vector<double>& out) const {
  auto m = matrix.values();
  out.insert(out.end(), m.begin(), m.end());
  if (mean_block) {
    auto b = mean_block->values();
    out.insert(out.end(), b.begin(), b.end());
  }
}

DifferenceTensor difference_tensor(std::span<const RelationMatrix> window) {
  if (window.size() < 2) ThrowInvalid("difference_tensor: window needs at least 2 frames");
  const RelationMatrix& first = window.front();
  DifferenceTensor tensor;
  tensor.window_start = first.timestamp;
  tensor.window_length = static_cast<int>(window.size());
  tensor.slices.reserve(window.size() - 1);
  for (std::size_t f = 1; f < window.size(); ++f) {
    const RelationMatrix& r = window[f];
    if (!r.values.same_shape(first.values)) ThrowInvalid("difference_tensor: inconsistent matrix sizes");
    if (r.row_source != first.row_source || r.col_source != first.col_source) {
      ThrowInvalid("difference_tensor: window mixes candidate pairs");
    }
    if (r.timestamp != first.timestamp + static_cast<std::int64_t>(f)) {
      ThrowInvalid("difference_tensor: timestamps are not consecutive");
    }
    tensor.slices.push_back(r.values - first.values);
  }
  return tensor;
}

GaussianFilterBank build_filter_bank(int window_length, const std::array<double, kFilterCount>& sigmas) {
  if (window_length < 2) ThrowInvalid("build_filter_bank: window length must be >= 2");
  GaussianFilterBank bank;
  bank.sigmas = sigmas;
  bank.window_length = window_length;
  const double centre = (window_length - 1) / 2.0;
  for (double s2 : sigmas) {
    if (!(s2 > 0.0 && s2 < 1.0)) ThrowInvalid("build_filter_bank: each variance must lie in (0, 1)");
    std::vector<double> taps(static_cast<std::size_t>(window_length - 1));
    for (std::size_t f = 0; f < taps.size(); ++f) {
      const double d = static_cast<double>(f) - centre;
      taps[f] = std::exp(-(d * d) / (2.0 * s2));
    }
    bank.taps.push_back(std::move(taps));
  }
  return bank;
}

Matrix assemble_rhi(const DifferenceTensor& tensor, const GaussianFilterBank& bank) {
  if (tensor.slices.empty()) ThrowInvalid("assemble_rhi: empty tensor");
  for (const auto& t : bank.taps) {
    if (t.size() != tensor.slices.size()) ThrowInvalid("assemble_rhi: tap count does not match slice count");
  }
  Matrix out(tensor.slices.front().rows(), tensor.slices.front().cols());
  for (const auto& taps : bank.taps) {
    for (std::size_t f = 0; f < taps.size(); ++f) out.add_scaled(tensor.slices[f], taps[f]);
  }
  return out;
}

Matrix mean_configuration(std::span<const RelationMatrix> window, std::span<const int> subset) {
  if (subset.empty()) ThrowInvalid("mean_configuration: empty joint subset");
  if (window.empty()) ThrowInvalid("mean_configuration: empty window");
  const auto m = static_cast<int>(window.front().values.rows());
  for (int idx : subset) {
    if (idx < 0 || idx >= m) ThrowInvalid("mean_configuration: joint index out of range");
  }
  const std::size_t k = subset.size();
  Matrix out(k, k);
  for (const RelationMatrix& r : window) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) out(i, j) += r.values(subset[i], subset[j]);
    }
  }
  out *= 1.0 / static_cast<double>(window.size());
  return out;
}

std::vector<int> choose_joint_subset(int joint_count, int size, std::uint64_t seed) {
  if (size < 1 || size > joint_count) ThrowInvalid("choose_joint_subset: invalid subset size");
  std::vector<int> all(static_cast<std::size_t>(joint_count));
  std::iota(all.begin(), all.end(), 0);
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates with plain modulo so the draw does not depend on the
  // standard library's distribution implementation.
  for (int i = 0; i < size; ++i) {
    const auto span = static_cast<std::uint64_t>(joint_count - i);
    const auto j = i + static_cast<int>(rng() % span);
    std::swap(all[i], all[j]);
  }
  all.resize(static_cast<std::size_t>(size));
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<RelationMatrix> relation_sequence(const Segment& segment, const CandidatePair& pair,
                                              const RhiConfig& config) {
  const PersonTrack& a = segment.track(pair.first());
  const PersonTrack& b = segment.track(pair.second());
  const auto frames = static_cast<std::size_t>(segment.length());
  std::vector<RelationMatrix> seq;
  seq.reserve(frames);
  if (config.kind == RelationKind::kJoints) {
    if (a.joints.size() != frames || b.joints.size() != frames) {
      ThrowData("segment " + segment.id + ": incomplete joints for pair " + pair.to_string());
    }
    for (std::size_t f = 0; f < frames; ++f) seq.push_back(joint_relation_matrix(a.joints[f], b.joints[f]));
  } else {
    if (config.pattern == nullptr) ThrowInvalid("depth RHI requires a pixel pair pattern");
    if (a.depth.size() != frames || b.depth.size() != frames) {
      ThrowData("segment " + segment.id + ": no depth data for pair " + pair.to_string());
    }
    for (std::size_t f = 0; f < frames; ++f) {
      const auto t = segment.start + static_cast<std::int64_t>(f);
      const DepthPatchGrid ga = build_depth_grid(a.depth[f], *config.pattern, config.depth_grid, t, pair.first());
      if (pair.is_self()) {
        seq.push_back(depth_relation_matrix(ga, ga));
      } else {
        const DepthPatchGrid gb =
            build_depth_grid(b.depth[f], *config.pattern, config.depth_grid, t, pair.second());
        seq.push_back(depth_relation_matrix(ga, gb));
      }
    }
  }
  return seq;
}

std::vector<RhiDescriptor> extract_rhi_stream(const Segment& segment, const CandidatePair& pair,
                                              const RhiConfig& config) {
  const int window = config.window;
  if (window < 2) ThrowInvalid("extract_rhi_stream: window length must be >= 2");
  const std::int64_t frames = segment.length();
  if (frames < window) ThrowData("segment shorter than window");
  if (config.kind == RelationKind::kJoints && config.mean_subset.empty()) {
    ThrowInvalid("extract_rhi_stream: joint RHI needs a mean-configuration subset");
  }
  std::vector<RhiDescriptor> out;
  if (frames == window) return out;

  const std::vector<RelationMatrix> seq = relation_sequence(segment, pair, config);
  const GaussianFilterBank bank = build_filter_bank(window, config.sigmas);
  const std::vector<double> taps = bank.combined_taps();
  const std::size_t rows = seq.front().values.rows();
  const std::size_t cols = seq.front().values.cols();
  const std::size_t cells = rows * cols;

  out.reserve(static_cast<std::size_t>(frames - window));
  for (std::int64_t t = 0; t < frames - window; ++t) {
    std::span<const RelationMatrix> win(seq.data() + t, static_cast<std::size_t>(window));
    RhiDescriptor d;
    d.pair = pair;
    d.window_start = segment.start + t;
    // Equivalent to assemble_rhi(difference_tensor(win), bank) with the three
    // filters folded into one tap vector; the unit tests hold both paths equal.
    d.matrix = Matrix(rows, cols);
    auto outv = d.matrix.values();
    auto base = win[0].values.values();
    for (std::size_t f = 1; f < win.size(); ++f) {
      const double w = taps[f - 1];
      auto cur = win[f].values.values();
      for (std::size_t i = 0; i < cells; ++i) outv[i] += w * (cur[i] - base[i]);
    }
    if (config.kind == RelationKind::kJoints) d.mean_block = mean_configuration(win, config.mean_subset);
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace rhi
