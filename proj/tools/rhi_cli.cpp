// rhi: generate synthetic scenes, extract RHI features, train, assign and
// evaluate from the command line.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rhi/error.hpp"
#include "rhi/pipeline.hpp"
#include "rhi/text_io.hpp"

namespace {

using namespace rhi;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInvariant = 3;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> window;
  std::string descriptor;
};

void add_common(CLI::App* app, CommonFlags& f) {
  app->add_option("--config", f.config_path, "flat key-value config file (rhi-config 1)");
  app->add_option("--seed", f.seed, "random seed (benchmark, bootstrap)");
  app->add_option("--windows", f.window, "RHI window length F")->check(CLI::Range(2, 64));
  app->add_option("--descriptor", f.descriptor, "joints | depth | both");
}

PipelineConfig resolve(const CommonFlags& f) {
  PipelineConfig c = f.config_path.empty() ? PipelineConfig{} : load_config(f.config_path);
  if (f.seed) c.seed = *f.seed;
  if (f.window) c.window = *f.window;
  if (!f.descriptor.empty()) c.descriptor = parse_descriptor_kind(f.descriptor);
  validate_config(c);
  return c;
}

void log_line(const std::string& msg) { std::cerr << "[rhi] " << msg << '\n'; }

// Writes through a temporary file so a failure never leaves a partial output.
void write_atomically(const std::string& path, const std::string& data) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) ThrowData("cannot write " + path);
    out << data;
    if (!out) ThrowData("write failed for " + path);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) ThrowData("cannot move " + tmp + " to " + path + ": " + ec.message());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) ThrowData("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<const Scene*> all_scenes(const Dataset& d) {
  std::vector<const Scene*> out;
  for (const auto& g : d.groups) {
    for (const Scene& s : g) out.push_back(&s);
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_gen_synth(const CommonFlags& flags, const std::string& out, std::optional<int> folds) {
  PipelineConfig c = resolve(flags);
  if (folds) c.groups = *folds;
  validate_config(c);
  const Dataset d = generate_dataset(c);
  save_dataset(out, d);
  std::size_t scenes = 0;
  std::size_t segments = 0;
  for (const auto& g : d.groups) {
    scenes += g.size();
    for (const auto& s : g) segments += s.segments.size();
  }
  std::cout << "wrote " << d.groups.size() << " groups, " << scenes << " scenes, " << segments << " segments to "
            << out << "\n";
  return 0;
}

int run_extract(const CommonFlags& flags, const std::string& in, const std::string& out, const std::string& model) {
  PipelineConfig c = resolve(flags);
  std::vector<int> subset;
  if (!model.empty()) {
    const TrainedModel m = load_model(model);
    c = m.config;
    subset = m.mean_subset;
  }
  const FeatureExtractor ex = subset.empty() ? FeatureExtractor(c) : FeatureExtractor(c, subset);
  const Dataset d = load_dataset(in);
  std::ostringstream os;
  os << "rhi-features 1\nlength " << ex.feature_length() << '\n';
  std::size_t rows = 0;
  for (const Scene* s : all_scenes(d)) {
    for (const Segment& seg : s->segments) {
      if (seg.length() <= c.window) continue;
      for (const auto& col : ex.extract_all(seg)) {
        for (const FeatureVector& fv : col) {
          std::string label = "-";
          if (seg.ground_truth) label = seg.ground_truth->at(fv.pair);
          os << fv.segment_id << ' ' << fv.pair.first() << ' ' << fv.pair.second() << ' ' << fv.window_start << ' '
             << label;
          for (double v : fv.values) os << ' ' << text::format_double(v);
          os << '\n';
          ++rows;
        }
      }
    }
  }
  write_atomically(out, os.str());
  std::cout << "wrote " << rows << " feature vectors of length " << ex.feature_length() << " to " << out << "\n";
  return 0;
}

int run_train(const CommonFlags& flags, const std::string& in, const std::string& out) {
  const PipelineConfig c = resolve(flags);
  const auto t0 = std::chrono::steady_clock::now();
  const Dataset d = load_dataset(in);
  const TrainedModel m = train_model(c, all_scenes(d), log_line);
  write_atomically(out, model_to_string(m));
  std::cout << "trained " << m.classifier.models().size() << " binary models over "
            << m.classifier.labels().size() << " classes in " << seconds_since(t0) << " s; model written to "
            << out << "\n";
  return 0;
}

int run_assign(const std::string& model_path, const std::string& in, const std::string& out) {
  const TrainedModel m = load_model(model_path);
  const FeatureExtractor ex(m.config, m.mean_subset);
  const Dataset d = load_dataset(in);
  const LabelSet& labels = m.classifier.labels();
  std::ostringstream os;
  os << "rhi-assignments 1\n";
  for (const Scene* s : all_scenes(d)) {
    for (const Segment& seg : s->segments) {
      if (seg.length() <= m.config.window) {
        log_line("skipping segment " + seg.id + ": shorter than window + 1");
        continue;
      }
      const SegmentAnalysis a = analyze_segment(m, ex, seg);
      os << "segment " << seg.id << ' ' << seg.start << ' ' << seg.end << " objective " << a.solution.objective
         << '\n';
      for (const auto& [pair, label] : a.solution.labels) {
        os << "pair " << pair.first() << ' ' << pair.second() << ' ' << labels[static_cast<std::size_t>(label)].name
           << '\n';
      }
    }
  }
  if (out.empty() || out == "-") {
    std::cout << os.str();
  } else {
    write_atomically(out, os.str());
  }
  return 0;
}

int run_evaluate(const CommonFlags& flags, const std::string& in, const std::string& model_path,
                 const std::string& out, std::optional<int> folds) {
  const auto t0 = std::chrono::steady_clock::now();
  PipelineConfig c = resolve(flags);
  EvaluationReport report;
  if (!model_path.empty()) {
    const TrainedModel m = load_model(model_path);
    if (in.empty()) ThrowInvalid("evaluate --model needs --in data");
    report = evaluate_fixed(m, load_dataset(in), log_line);
  } else {
    Dataset d;
    if (in.empty()) {
      if (folds) c.groups = *folds;
      validate_config(c);
      log_line("generating benchmark, seed " + std::to_string(c.seed));
      d = generate_dataset(c);
    } else {
      d = load_dataset(in);
    }
    report = evaluate_logo(c, d, folds.value_or(0), log_line);
  }
  const std::string json = report_to_json(report);
  const std::string table = render_report_table(report);
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) ThrowData("cannot create " + out + ": " + ec.message());
  write_atomically((std::filesystem::path(out) / "report.json").string(), json);
  write_atomically((std::filesystem::path(out) / "report.txt").string(), table);
  std::cout << table;
  log_line("evaluation finished in " + std::to_string(seconds_since(t0)) + " s");
  return 0;
}

int run_report(const std::string& in, const std::string& out) {
  const EvaluationReport r = report_from_json(read_file(in));
  const std::string table = render_report_table(r);
  if (out.empty() || out == "-") {
    std::cout << table;
  } else {
    write_atomically(out, table);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relation History Image activity recognition pipeline"};
  app.require_subcommand(1);

  CommonFlags gen_flags, ext_flags, train_flags, eval_flags;
  std::string gen_out, ext_in, ext_out, ext_model, train_in, train_out, assign_model, assign_in, assign_out;
  std::string eval_in, eval_model, eval_out, report_in, report_out;
  std::optional<int> gen_folds, eval_folds;

  auto* gen = app.add_subcommand("gen-synth", "generate the synthetic benchmark (one stream per group + manifest)");
  add_common(gen, gen_flags);
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--folds", gen_folds, "number of groups")->check(CLI::Range(2, 64));

  auto* ext = app.add_subcommand("extract", "write RHI feature vectors for every segment, pair and window");
  add_common(ext, ext_flags);
  ext->add_option("--in", ext_in, "stream file or manifest")->required();
  ext->add_option("--out", ext_out, "feature file")->required();
  ext->add_option("--model", ext_model, "take descriptor settings from a model file");

  auto* train = app.add_subcommand("train", "train the one-vs-one classifier on annotated data");
  add_common(train, train_flags);
  train->add_option("--in", train_in, "stream file or manifest")->required();
  train->add_option("--out", train_out, "model file")->required();

  auto* assign = app.add_subcommand("assign", "classify and assign activities per segment");
  assign->add_option("--model", assign_model, "model file")->required();
  assign->add_option("--in", assign_in, "stream file or manifest")->required();
  assign->add_option("--out", assign_out, "assignment file (default stdout)");

  auto* eval = app.add_subcommand("evaluate", "leave-one-group-out evaluation, or a fixed model with --model");
  add_common(eval, eval_flags);
  eval->add_option("--in", eval_in, "manifest or stream (default: generate the benchmark)");
  eval->add_option("--model", eval_model, "evaluate this model instead of cross-validating");
  eval->add_option("--out", eval_out, "report directory")->required();
  eval->add_option("--folds", eval_folds, "number of folds to run (groups when generating)")
      ->check(CLI::Range(1, 64));

  auto* rep = app.add_subcommand("report", "render a machine-readable report as a table");
  rep->add_option("--in", report_in, "report.json")->required();
  rep->add_option("--out", report_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) return run_gen_synth(gen_flags, gen_out, gen_folds);
    if (*ext) return run_extract(ext_flags, ext_in, ext_out, ext_model);
    if (*train) return run_train(train_flags, train_in, train_out);
    if (*assign) return run_assign(assign_model, assign_in, assign_out);
    if (*eval) return run_evaluate(eval_flags, eval_in, eval_model, eval_out, eval_folds);
    if (*rep) return run_report(report_in, report_out);
  } catch (const rhi::Error& e) {
    std::cerr << "rhi: error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::kInvalidArgument: return kExitUsage;
      case ErrorKind::kData: return kExitData;
      case ErrorKind::kInvariant: return kExitInvariant;
    }
  } catch (const std::exception& e) {
    std::cerr << "rhi: internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitUsage;
}
