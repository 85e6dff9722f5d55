#include "rhi/model_file.hpp"

#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>

#include "rhi/error.hpp"
#include "rhi/text_io.hpp"

namespace rhi {

namespace {

constexpr const char* kModelTag = "rhi-model 1";
constexpr const char* kChecksumKey = "checksum ";

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string body_text(const TrainedModel& m) {
  std::ostringstream os;
  os << kModelTag << '\n';
  os << "config-begin\n";
  write_config(os, m.config);
  os << "config-end\n";
  os << "subset " << m.mean_subset.size();
  for (int j : m.mean_subset) os << ' ' << j;
  os << '\n';
  m.classifier.write(os);
  os << "end\n";
  return os.str();
}

}  // namespace

void write_model(std::ostream& os, const TrainedModel& model) { os << model_to_string(model); }

std::string model_to_string(const TrainedModel& model) {
  const std::string body = body_text(model);
  return body + kChecksumKey + std::to_string(fnv1a(body)) + "\n";
}

TrainedModel read_model(std::istream& is, const std::string& source) {
  const std::string all((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
  const auto fail = [&](const std::string& msg) -> void { ThrowData(source + ": " + msg); };
  if (all.rfind(std::string(kModelTag) + "\n", 0) != 0) fail("not a model file (missing 'rhi-model 1' header)");
  const auto pos = all.rfind(kChecksumKey);
  if (pos == std::string::npos || (pos > 0 && all[pos - 1] != '\n')) fail("truncated model file (no checksum)");
  const std::string body = all.substr(0, pos);
  const std::string stored = text::trim(all.substr(pos + std::char_traits<char>::length(kChecksumKey)));
  if (stored != std::to_string(fnv1a(body))) fail("checksum mismatch; the model file is corrupted");

  TrainedModel m;
  try {
    std::istringstream in(body);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    if (line != "config-begin") ThrowData("expected config-begin");
    std::ostringstream cfg;
    while (std::getline(in, line) && line != "config-end") cfg << line << '\n';
    if (line != "config-end") ThrowData("unterminated config block");
    std::istringstream cfg_in(cfg.str());
    m.config = read_config(cfg_in, source + " (embedded config)");
    text::expect_keyword(in, "subset");
    const auto n = text::read_int(in, "subset size");
    if (n < 1 || n > kDefaultJointCount) ThrowData("invalid subset size");
    for (long long i = 0; i < n; ++i) {
      const auto j = text::read_int(in, "subset index");
      if (j < 0 || j >= kDefaultJointCount) ThrowData("subset index out of range");
      m.mean_subset.push_back(static_cast<int>(j));
    }
    m.classifier = PairwiseModel::read(in);
    text::expect_keyword(in, "end");
  } catch (const Error& e) {
    ThrowData(source + ": " + e.what());
  }
  return m;
}

void save_model(const std::string& path, const TrainedModel& model) {
  const std::string data = model_to_string(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) ThrowData("cannot write model file " + path);
  out << data;
  if (!out) ThrowData("write failed for " + path);
}

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowData("cannot open model file " + path);
  return read_model(in, path);
}

}  // namespace rhi
