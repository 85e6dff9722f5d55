#include "rhi/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "rhi/error.hpp"
#include "rhi/text_io.hpp"

namespace rhi {

namespace {

constexpr const char* kConfigTag = "rhi-config";
constexpr int kConfigVersion = 1;

std::string u64(std::uint64_t v) { return std::to_string(v); }

std::uint64_t parse_u64(const std::string& s) {
  const long long v = text::parse_int(s);
  if (v < 0) ThrowData("expected a non-negative integer, got '" + s + "'");
  return static_cast<std::uint64_t>(v);
}

int parse_small(const std::string& s) { return static_cast<int>(text::parse_int(s)); }

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  ThrowData("expected true or false, got '" + s + "'");
}

struct Field {
  std::string key;
  std::function<std::string(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, const std::string&)> set;
};

const std::vector<Field>& fields() {
  using C = PipelineConfig;
  static const std::vector<Field> kFields = {
      {"descriptor", [](const C& c) { return to_string(c.descriptor); },
       [](C& c, const std::string& v) { c.descriptor = parse_descriptor_kind(v); }},
      {"window", [](const C& c) { return std::to_string(c.window); },
       [](C& c, const std::string& v) { c.window = parse_small(v); }},
      {"sigma2_0", [](const C& c) { return text::format_double(c.sigmas[0]); },
       [](C& c, const std::string& v) { c.sigmas[0] = text::parse_double(v); }},
      {"sigma2_1", [](const C& c) { return text::format_double(c.sigmas[1]); },
       [](C& c, const std::string& v) { c.sigmas[1] = text::parse_double(v); }},
      {"sigma2_2", [](const C& c) { return text::format_double(c.sigmas[2]); },
       [](C& c, const std::string& v) { c.sigmas[2] = text::parse_double(v); }},
      {"grid_rows", [](const C& c) { return std::to_string(c.grid_rows); },
       [](C& c, const std::string& v) { c.grid_rows = parse_small(v); }},
      {"grid_cols", [](const C& c) { return std::to_string(c.grid_cols); },
       [](C& c, const std::string& v) { c.grid_cols = parse_small(v); }},
      {"pixel_pairs", [](const C& c) { return std::to_string(c.pixel_pairs); },
       [](C& c, const std::string& v) { c.pixel_pairs = parse_small(v); }},
      {"epsilon", [](const C& c) { return text::format_double(c.epsilon); },
       [](C& c, const std::string& v) { c.epsilon = text::parse_double(v); }},
      {"pattern_sigma2", [](const C& c) { return text::format_double(c.pattern_sigma2); },
       [](C& c, const std::string& v) { c.pattern_sigma2 = text::parse_double(v); }},
      {"pattern_seed", [](const C& c) { return u64(c.pattern_seed); },
       [](C& c, const std::string& v) { c.pattern_seed = parse_u64(v); }},
      {"subset_size", [](const C& c) { return std::to_string(c.subset_size); },
       [](C& c, const std::string& v) { c.subset_size = parse_small(v); }},
      {"subset_seed", [](const C& c) { return u64(c.subset_seed); },
       [](C& c, const std::string& v) { c.subset_seed = parse_u64(v); }},
      {"kernel", [](const C& c) { return to_string(c.svm.kernel); },
       [](C& c, const std::string& v) { c.svm.kernel = parse_kernel(v); }},
      {"C", [](const C& c) { return text::format_double(c.svm.C); },
       [](C& c, const std::string& v) { c.svm.C = text::parse_double(v); }},
      {"gamma", [](const C& c) { return text::format_double(c.svm.gamma); },
       [](C& c, const std::string& v) { c.svm.gamma = text::parse_double(v); }},
      {"tolerance", [](const C& c) { return text::format_double(c.svm.tolerance); },
       [](C& c, const std::string& v) { c.svm.tolerance = text::parse_double(v); }},
      {"max_epochs", [](const C& c) { return std::to_string(c.svm.max_epochs); },
       [](C& c, const std::string& v) { c.svm.max_epochs = parse_small(v); }},
      {"svm_seed", [](const C& c) { return u64(c.svm.seed); },
       [](C& c, const std::string& v) { c.svm.seed = parse_u64(v); }},
      {"balance_classes", [](const C& c) { return std::string(c.svm.balance_classes ? "true" : "false"); },
       [](C& c, const std::string& v) { c.svm.balance_classes = parse_bool(v); }},
      {"train_stride", [](const C& c) { return std::to_string(c.train_stride); },
       [](C& c, const std::string& v) { c.train_stride = parse_small(v); }},
      {"seed", [](const C& c) { return u64(c.seed); },
       [](C& c, const std::string& v) { c.seed = parse_u64(v); }},
      {"groups", [](const C& c) { return std::to_string(c.groups); },
       [](C& c, const std::string& v) { c.groups = parse_small(v); }},
      {"sequences", [](const C& c) { return std::to_string(c.sequences); },
       [](C& c, const std::string& v) { c.sequences = parse_small(v); }},
      {"noise", [](const C& c) { return text::format_double(c.noise); },
       [](C& c, const std::string& v) { c.noise = text::parse_double(v); }},
      {"bootstrap", [](const C& c) { return std::to_string(c.bootstrap); },
       [](C& c, const std::string& v) { c.bootstrap = parse_small(v); }},
  };
  return kFields;
}

}  // namespace

std::string to_string(DescriptorKind k) {
  switch (k) {
    case DescriptorKind::kJoints: return "joints";
    case DescriptorKind::kDepth: return "depth";
    case DescriptorKind::kBoth: return "both";
  }
  return "unknown";
}

DescriptorKind parse_descriptor_kind(const std::string& s) {
  if (s == "joints") return DescriptorKind::kJoints;
  if (s == "depth") return DescriptorKind::kDepth;
  if (s == "both") return DescriptorKind::kBoth;
  ThrowInvalid("unknown descriptor kind '" + s + "' (expected joints, depth or both)");
}

void write_config(std::ostream& os, const PipelineConfig& config) {
  os << kConfigTag << ' ' << kConfigVersion << '\n';
  for (const Field& f : fields()) os << f.key << " = " << f.get(config) << '\n';
}

std::string config_to_string(const PipelineConfig& config) {
  std::ostringstream os;
  write_config(os, config);
  return os.str();
}

PipelineConfig read_config(std::istream& is, const std::string& source) {
  PipelineConfig config;
  std::string line;
  int line_no = 0;
  bool header = false;
  std::map<std::string, int> seen;
  while (std::getline(is, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    if (!header) {
      const auto tokens = text::split_ws(line);
      if (tokens.size() != 2 || tokens[0] != kConfigTag) ThrowData(where + "expected '" + kConfigTag + " 1'");
      if (tokens[1] != std::to_string(kConfigVersion)) ThrowData(where + "unsupported config version " + tokens[1]);
      header = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) ThrowData(where + "expected 'key = value'");
    const std::string key = text::trim(line.substr(0, eq));
    const std::string value = text::trim(line.substr(eq + 1));
    if (seen.count(key)) ThrowData(where + "duplicate key '" + key + "'");
    seen[key] = line_no;
    bool known = false;
    for (const Field& f : fields()) {
      if (f.key != key) continue;
      known = true;
      try {
        f.set(config, value);
      } catch (const Error& e) {
        ThrowData(where + key + ": " + e.what());
      }
    }
    if (!known) ThrowData(where + "unknown key '" + key + "'");
  }
  if (!header) ThrowData(source + ": empty config (missing '" + kConfigTag + " 1' header)");
  try {
    validate_config(config);
  } catch (const Error& e) {
    ThrowData(source + ": " + e.what());
  }
  return config;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) ThrowData("cannot open config file " + path);
  return read_config(in, path);
}

void validate_config(const PipelineConfig& c) {
  if (c.window < 2) ThrowInvalid("window must be at least 2");
  for (double s : c.sigmas) {
    if (!(s > 0.0 && s < 1.0)) ThrowInvalid("filter variances must lie in (0, 1)");
  }
  if (c.grid_rows < 1 || c.grid_cols < 1) ThrowInvalid("grid must have at least one cell");
  if (c.pixel_pairs < 1) ThrowInvalid("pixel_pairs must be positive");
  if (!(c.epsilon > 0.0)) ThrowInvalid("epsilon must be positive");
  if (!(c.pattern_sigma2 > 0.0)) ThrowInvalid("pattern_sigma2 must be positive");
  if (c.subset_size < 1 || c.subset_size > kDefaultJointCount) ThrowInvalid("subset_size must be in [1, 25]");
  if (!(c.svm.C > 0.0)) ThrowInvalid("C must be positive");
  if (c.svm.gamma < 0.0) ThrowInvalid("gamma must be non-negative");
  if (!(c.svm.tolerance > 0.0)) ThrowInvalid("tolerance must be positive");
  if (c.svm.max_epochs < 1) ThrowInvalid("max_epochs must be positive");
  if (c.train_stride < 1) ThrowInvalid("train_stride must be positive");
  if (c.groups < 2) ThrowInvalid("groups must be at least 2");
  if (c.sequences < 1) ThrowInvalid("sequences must be positive");
  if (c.noise < 0.0) ThrowInvalid("noise must be non-negative");
  if (c.bootstrap < 0) ThrowInvalid("bootstrap must be non-negative");
}

BenchmarkOptions benchmark_options(const PipelineConfig& config) {
  BenchmarkOptions o;
  o.groups = config.groups;
  o.sequences = config.sequences;
  o.noise_sigma = config.noise;
  o.with_depth = config.descriptor != DescriptorKind::kJoints;
  o.with_boxes = true;
  return o;
}

}  // namespace rhi
