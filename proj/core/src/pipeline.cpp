#include "rhi/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <set>

#include "rhi/error.hpp"
#include "rhi/parallel.hpp"
#include "rhi/synth_scene.hpp"

namespace rhi {

namespace {

void say(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

std::vector<const Scene*> pointers(const std::vector<Scene>& scenes) {
  std::vector<const Scene*> out;
  for (const Scene& s : scenes) out.push_back(&s);
  return out;
}

bool usable(const Segment& seg, int window) { return seg.length() > window; }

void finalize(EvaluationReport& report) {
  DetectionCounts counts;
  ConfusionMatrix confusion(report.labels.size());
  std::vector<std::uint8_t> outcomes;
  for (const FoldReport& f : report.folds) {
    counts += f.detection.counts;
    confusion += f.confusion;
    for (const SegmentTranscript& s : f.transcripts) {
      for (const PairTranscript& p : s.pairs) {
        if (p.known >= 0) outcomes.push_back(p.known == p.truth ? 1 : 0);
      }
    }
  }
  report.detection = detection_result(counts);
  report.confusion = std::move(confusion);
  report.known_pairs = bootstrap_accuracy(outcomes, report.config.bootstrap, report.config.seed);
}

std::optional<double> dataset_occlusion(const Dataset& dataset) {
  double sum = 0.0;
  std::size_t videos = 0;
  for (const auto& g : dataset.groups) {
    for (const Scene& s : g) {
      for (const Segment& seg : s.segments) {
        if (!seg.has_boxes()) return std::nullopt;
      }
      sum += video_occlusion(s.segments);
      ++videos;
    }
  }
  if (videos == 0) return std::nullopt;
  return sum / static_cast<double>(videos);
}

}  // namespace

std::vector<Scene> generate_group_scenes(const BenchmarkGroup& group) {
  std::vector<Scene> out(group.scenes.size());
  parallel_for(group.scenes.size(), default_thread_count(), [&](std::size_t i) {
    out[i].id = group.scenes[i].id;
    out[i].segments = generate_scene(group.scenes[i]);
  });
  return out;
}

Dataset generate_dataset(const PipelineConfig& config) {
  validate_config(config);
  const Benchmark bench = standard_benchmark(config.seed, benchmark_options(config));
  Dataset d;
  d.seed = config.seed;
  for (const BenchmarkGroup& g : bench.groups) {
    d.group_ids.push_back(g.index);
    d.groups.push_back(generate_group_scenes(g));
  }
  return d;
}

void save_dataset(const std::string& dir, const Dataset& dataset) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) ThrowData("cannot create directory " + dir + ": " + ec.message());
  Manifest m;
  m.seed = dataset.seed;
  for (std::size_t i = 0; i < dataset.groups.size(); ++i) {
    const std::string name = "group" + std::to_string(dataset.group_ids[i]) + ".rhis";
    write_stream_file((std::filesystem::path(dir) / name).string(), dataset.groups[i]);
    m.groups.emplace_back(dataset.group_ids[i], name);
  }
  write_manifest((std::filesystem::path(dir) / "manifest.txt").string(), m);
}

Dataset load_dataset(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) ThrowData("cannot open " + path);
  std::string first;
  probe >> first;
  Dataset d;
  if (first == "rhi-manifest") {
    const Manifest m = read_manifest(path);
    d.seed = m.seed;
    for (const auto& [g, file] : m.groups) {
      d.group_ids.push_back(g);
      d.groups.push_back(read_stream_file(manifest_entry_path(path, file)));
    }
  } else {
    d.group_ids.push_back(0);
    d.groups.push_back(read_stream_file(path));
  }
  return d;
}

std::vector<std::string> collect_label_names(const std::vector<const Scene*>& scenes) {
  std::set<std::string> names;
  for (const Scene* s : scenes) {
    for (const Segment& seg : s->segments) {
      if (!seg.ground_truth) continue;
      for (const auto& [pair, label] : *seg.ground_truth) {
        if (label != kNullLabelName) names.insert(label);
      }
    }
  }
  return {names.begin(), names.end()};
}

TrainedModel train_model(const PipelineConfig& config, const std::vector<const Scene*>& scenes, const Logger& log,
                         std::int64_t* sample_count) {
  validate_config(config);
  const std::vector<std::string> names = collect_label_names(scenes);
  if (names.empty()) ThrowData("training data has no annotated activities");
  const LabelSet labels(names);
  const FeatureExtractor extractor(config);

  std::vector<const Segment*> segments;
  for (const Scene* s : scenes) {
    for (const Segment& seg : s->segments) {
      if (!seg.ground_truth) ThrowData("training segment " + seg.id + " has no annotations");
      if (usable(seg, config.window)) {
        segments.push_back(&seg);
      } else {
        say(log, "skipping segment " + seg.id + ": shorter than window + 1");
      }
    }
  }
  std::vector<std::vector<FeatureVector>> per_segment(segments.size());
  parallel_for(segments.size(), default_thread_count(), [&](std::size_t i) {
    for (auto& col : extractor.extract_all(*segments[i], &labels, config.train_stride)) {
      for (auto& fv : col) per_segment[i].push_back(std::move(fv));
    }
  });
  std::vector<FeatureVector> samples;
  for (auto& v : per_segment) {
    for (auto& fv : v) samples.push_back(std::move(fv));
    v.clear();
    v.shrink_to_fit();
  }
  say(log, "training on " + std::to_string(samples.size()) + " windows, " + std::to_string(labels.size()) +
               " classes");
  if (sample_count != nullptr) *sample_count = static_cast<std::int64_t>(samples.size());

  ClassifierConfig cc;
  cc.svm = config.svm;
  cc.threads = default_thread_count();
  TrainedModel model;
  model.config = config;
  model.mean_subset = extractor.mean_subset();
  model.classifier = train_one_vs_one(samples, labels, cc);
  return model;
}

SegmentAnalysis analyze_segment(const TrainedModel& model, const FeatureExtractor& extractor, const Segment& segment) {
  const auto pairs = enumerate_pairs(segment.persons);
  const auto descriptors = extractor.extract_all(segment);
  SegmentAnalysis a;
  a.votes = segment_votes(model.classifier, descriptors, pairs, segment.id);
  a.windows = descriptors.empty() ? 0 : static_cast<std::int64_t>(descriptors.front().size());
  a.solution = solve_exact(make_problem(a.votes, model.classifier.labels().null_id()));
  return a;
}

FoldReport evaluate_model(const TrainedModel& model, const std::vector<const Scene*>& scenes, int test_group,
                          const Logger& log) {
  const FeatureExtractor extractor(model.config, model.mean_subset);
  const LabelSet& labels = model.classifier.labels();
  const int null_class = labels.null_id();

  std::vector<const Segment*> segments;
  for (const Scene* s : scenes) {
    for (const Segment& seg : s->segments) {
      if (usable(seg, model.config.window)) {
        segments.push_back(&seg);
      } else {
        say(log, "skipping segment " + seg.id + ": shorter than window + 1");
      }
    }
  }
  std::vector<SegmentAnalysis> results(segments.size());
  parallel_for(segments.size(), default_thread_count(),
               [&](std::size_t i) { results[i] = analyze_segment(model, extractor, *segments[i]); });

  FoldReport fold;
  fold.test_group = test_group;
  fold.confusion = ConfusionMatrix(labels.size());
  DetectionCounts counts;
  std::vector<std::uint8_t> outcomes;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& seg = *segments[i];
    const SegmentAnalysis& a = results[i];
    SegmentTranscript t;
    t.segment_id = seg.id;
    t.windows = a.windows;
    t.objective = a.solution.objective;
    PairLabels truth;
    for (std::size_t col = 0; col < a.votes.columns.size(); ++col) {
      PairTranscript p;
      p.pair = a.votes.columns[col];
      p.predicted = a.solution.labels.at(p.pair);
      if (seg.ground_truth) {
        const auto found = labels.find(seg.ground_truth->at(p.pair));
        if (!found) ThrowData("segment " + seg.id + ": label '" + seg.ground_truth->at(p.pair) + "' unknown to the model");
        p.truth = *found;
        truth[p.pair] = p.truth;
        fold.confusion.at(static_cast<std::size_t>(p.truth), static_cast<std::size_t>(p.predicted)) += 1;
        if (p.truth != null_class) {
          p.known = known_pair_label(a.votes, col, null_class);
          outcomes.push_back(p.known == p.truth ? 1 : 0);
        }
      }
      t.pairs.push_back(p);
    }
    if (seg.ground_truth) counts += count_detections(a.solution.labels, truth, null_class);
    fold.transcripts.push_back(std::move(t));
  }
  fold.detection = detection_result(counts);
  fold.known_pairs = bootstrap_accuracy(outcomes, model.config.bootstrap,
                                        model.config.seed + static_cast<std::uint64_t>(test_group + 1));
  return fold;
}

EvaluationReport evaluate_logo(const PipelineConfig& config, const Dataset& dataset, int max_folds, const Logger& log) {
  validate_config(config);
  const std::size_t groups = dataset.groups.size();
  if (groups < 2) ThrowData("leave-one-group-out needs at least two groups");
  std::size_t folds = groups;
  if (max_folds > 0) folds = std::min(folds, static_cast<std::size_t>(max_folds));

  EvaluationReport report;
  report.config = config;
  for (std::size_t f = 0; f < folds; ++f) {
    std::vector<const Scene*> train;
    for (std::size_t g = 0; g < groups; ++g) {
      if (g == f) continue;
      for (const Scene* s : pointers(dataset.groups[g])) train.push_back(s);
    }
    say(log, "fold " + std::to_string(f + 1) + "/" + std::to_string(folds) + ": test group " +
                 std::to_string(dataset.group_ids[f]));
    std::int64_t samples = 0;
    const TrainedModel model = train_model(config, train, log, &samples);
    std::vector<std::string> names;
    for (const auto& l : model.classifier.labels().labels()) names.push_back(l.name);
    if (report.labels.empty()) {
      report.labels = names;
    } else if (report.labels != names) {
      ThrowData("folds disagree on the label set; every group must contain every activity");
    }
    FoldReport fold = evaluate_model(model, pointers(dataset.groups[f]), dataset.group_ids[f], log);
    fold.train_samples = samples;
    say(log, "fold " + std::to_string(f + 1) + ": known-pairs accuracy " + std::to_string(fold.known_pairs.accuracy) +
                 ", detection F1 " + std::to_string(fold.detection.standard.f1));
    report.folds.push_back(std::move(fold));
  }
  finalize(report);
  report.occlusion = dataset_occlusion(dataset);
  return report;
}

EvaluationReport evaluate_fixed(const TrainedModel& model, const Dataset& dataset, const Logger& log) {
  EvaluationReport report;
  report.config = model.config;
  for (const auto& l : model.classifier.labels().labels()) report.labels.push_back(l.name);
  std::vector<const Scene*> scenes;
  for (const auto& g : dataset.groups) {
    for (const Scene* s : pointers(g)) scenes.push_back(s);
  }
  report.folds.push_back(evaluate_model(model, scenes, -1, log));
  finalize(report);
  report.occlusion = dataset_occlusion(dataset);
  return report;
}

}  // namespace rhi
