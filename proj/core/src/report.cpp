#include "rhi/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "rhi/error.hpp"

namespace rhi {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kInterpretation =
    "F1 and F2 are F-scores of the pair-detection protocol. 'standard' counts truth-null pairs predicted valid as "
    "false positives; 'literal' counts only truth-valid pairs given the wrong class. Known-pairs accuracy "
    "classifies truth-valid pairs by vote argmax over valid classes, with a percentile bootstrap 95% interval.";

Json scores_json(const PrfScores& s) {
  return Json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}, {"f2", s.f2}};
}

PrfScores scores_from(const Json& j) {
  PrfScores s;
  s.precision = j.at("precision").get<double>();
  s.recall = j.at("recall").get<double>();
  s.f1 = j.at("f1").get<double>();
  s.f2 = j.at("f2").get<double>();
  return s;
}

Json detection_json(const DetectionResult& d) {
  return Json{{"tp", d.counts.tp},         {"fp_class", d.counts.fp_class},
              {"fp_null", d.counts.fp_null}, {"fn", d.counts.fn},
              {"tn", d.counts.tn},         {"standard", scores_json(d.standard)},
              {"literal", scores_json(d.literal)}};
}

DetectionResult detection_from(const Json& j) {
  DetectionResult d;
  d.counts.tp = j.at("tp").get<std::int64_t>();
  d.counts.fp_class = j.at("fp_class").get<std::int64_t>();
  d.counts.fp_null = j.at("fp_null").get<std::int64_t>();
  d.counts.fn = j.at("fn").get<std::int64_t>();
  d.counts.tn = j.at("tn").get<std::int64_t>();
  d.standard = scores_from(j.at("standard"));
  d.literal = scores_from(j.at("literal"));
  return d;
}

Json accuracy_json(const AccuracyEstimate& a) {
  return Json{{"correct", a.correct},
              {"total", a.total},
              {"accuracy", a.accuracy},
              {"ci95", Json::array({a.ci_low, a.ci_high})}};
}

AccuracyEstimate accuracy_from(const Json& j) {
  AccuracyEstimate a;
  a.correct = j.at("correct").get<std::int64_t>();
  a.total = j.at("total").get<std::int64_t>();
  a.accuracy = j.at("accuracy").get<double>();
  a.ci_low = j.at("ci95").at(0).get<double>();
  a.ci_high = j.at("ci95").at(1).get<double>();
  return a;
}

Json confusion_json(const ConfusionMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.classes; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.classes; ++j) row.push_back(m.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

ConfusionMatrix confusion_from(const Json& j, std::size_t classes) {
  ConfusionMatrix m(classes);
  if (j.size() != classes) ThrowData("report: confusion matrix has the wrong size");
  for (std::size_t i = 0; i < classes; ++i) {
    if (j.at(i).size() != classes) ThrowData("report: confusion matrix has the wrong size");
    for (std::size_t k = 0; k < classes; ++k) m.at(i, k) = j.at(i).at(k).get<std::int64_t>();
  }
  return m;
}

Json label_json(const std::vector<std::string>& labels, int id) {
  if (id < 0) return nullptr;
  return labels.at(static_cast<std::size_t>(id));
}

int label_from(const Json& j, const std::vector<std::string>& labels) {
  if (j.is_null()) return -1;
  const auto name = j.get<std::string>();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == name) return static_cast<int>(i);
  }
  ThrowData("report: unknown label '" + name + "'");
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

std::string report_to_json(const EvaluationReport& r) {
  Json j;
  j["format"] = kReportFormat;
  j["interpretation"] = kInterpretation;
  j["config"] = config_to_string(r.config);
  j["labels"] = r.labels;
  j["aggregate"] = Json{{"detection", detection_json(r.detection)},
                        {"known_pairs", accuracy_json(r.known_pairs)},
                        {"confusion", confusion_json(r.confusion)}};
  j["occlusion_level"] = r.occlusion ? Json(*r.occlusion) : Json(nullptr);
  Json folds = Json::array();
  for (const FoldReport& f : r.folds) {
    Json fj;
    fj["test_group"] = f.test_group;
    fj["train_samples"] = f.train_samples;
    fj["detection"] = detection_json(f.detection);
    fj["known_pairs"] = accuracy_json(f.known_pairs);
    fj["confusion"] = confusion_json(f.confusion);
    Json transcripts = Json::array();
    for (const SegmentTranscript& t : f.transcripts) {
      Json pairs = Json::array();
      for (const PairTranscript& p : t.pairs) {
        pairs.push_back(Json{{"pair", Json::array({p.pair.first(), p.pair.second()})},
                             {"truth", label_json(r.labels, p.truth)},
                             {"predicted", label_json(r.labels, p.predicted)},
                             {"known", label_json(r.labels, p.known)}});
      }
      transcripts.push_back(Json{{"segment", t.segment_id},
                                 {"windows", t.windows},
                                 {"objective", t.objective},
                                 {"pairs", std::move(pairs)}});
    }
    fj["transcripts"] = std::move(transcripts);
    folds.push_back(std::move(fj));
  }
  j["folds"] = std::move(folds);
  return j.dump(1) + "\n";
}

EvaluationReport report_from_json(const std::string& text) {
  EvaluationReport r;
  try {
    const Json j = Json::parse(text);
    if (j.at("format").get<std::string>() != kReportFormat) ThrowData("report: unsupported format tag");
    std::istringstream cfg(j.at("config").get<std::string>());
    r.config = read_config(cfg, "report config");
    r.labels = j.at("labels").get<std::vector<std::string>>();
    const Json& agg = j.at("aggregate");
    r.detection = detection_from(agg.at("detection"));
    r.known_pairs = accuracy_from(agg.at("known_pairs"));
    r.confusion = confusion_from(agg.at("confusion"), r.labels.size());
    if (!j.at("occlusion_level").is_null()) r.occlusion = j.at("occlusion_level").get<double>();
    for (const Json& fj : j.at("folds")) {
      FoldReport f;
      f.test_group = fj.at("test_group").get<int>();
      f.train_samples = fj.at("train_samples").get<std::int64_t>();
      f.detection = detection_from(fj.at("detection"));
      f.known_pairs = accuracy_from(fj.at("known_pairs"));
      f.confusion = confusion_from(fj.at("confusion"), r.labels.size());
      for (const Json& tj : fj.at("transcripts")) {
        SegmentTranscript t;
        t.segment_id = tj.at("segment").get<std::string>();
        t.windows = tj.at("windows").get<std::int64_t>();
        t.objective = tj.at("objective").get<std::int64_t>();
        for (const Json& pj : tj.at("pairs")) {
          PairTranscript p;
          p.pair = CandidatePair(pj.at("pair").at(0).get<std::string>(), pj.at("pair").at(1).get<std::string>());
          p.truth = label_from(pj.at("truth"), r.labels);
          p.predicted = label_from(pj.at("predicted"), r.labels);
          p.known = label_from(pj.at("known"), r.labels);
          t.pairs.push_back(std::move(p));
        }
        f.transcripts.push_back(std::move(t));
      }
      r.folds.push_back(std::move(f));
    }
  } catch (const nlohmann::json::exception& e) {
    ThrowData(std::string("report: malformed JSON: ") + e.what());
  }
  return r;
}

std::string render_report_table(const EvaluationReport& r) {
  std::ostringstream os;
  const std::vector<std::string> head = {"fold", "group", "train", "segments", "KP-acc", "P",
                                         "R",    "F1",    "F2",    "P-lit",    "F1-lit", "F2-lit"};
  const std::vector<std::size_t> width = {5, 6, 8, 9, 8, 8, 8, 8, 8, 8, 8, 8};
  auto row = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << pad(cells[i], width[i]);
    os << '\n';
  };
  auto metrics = [](const AccuracyEstimate& a, const DetectionResult& d) {
    return std::vector<std::string>{fixed(a.accuracy),         fixed(d.standard.precision),
                                    fixed(d.standard.recall),  fixed(d.standard.f1),
                                    fixed(d.standard.f2),      fixed(d.literal.precision),
                                    fixed(d.literal.f1), fixed(d.literal.f2)};
  };
  os << "RHI evaluation (" << r.labels.size() << " classes incl. null, descriptor "
     << to_string(r.config.descriptor) << ", window " << r.config.window << ", seed " << r.config.seed << ")\n";
  row(head);
  std::size_t segments = 0;
  std::int64_t train = 0;
  for (std::size_t i = 0; i < r.folds.size(); ++i) {
    const FoldReport& f = r.folds[i];
    std::vector<std::string> cells = {std::to_string(i + 1), f.test_group < 0 ? "-" : std::to_string(f.test_group),
                                      std::to_string(f.train_samples), std::to_string(f.transcripts.size())};
    for (auto& m : metrics(f.known_pairs, f.detection)) cells.push_back(m);
    row(cells);
    segments += f.transcripts.size();
    train += f.train_samples;
  }
  std::vector<std::string> cells = {"all", "-", std::to_string(train), std::to_string(segments)};
  for (auto& m : metrics(r.known_pairs, r.detection)) cells.push_back(m);
  row(cells);
  const DetectionCounts& c = r.detection.counts;
  os << "known-pairs accuracy " << fixed(r.known_pairs.accuracy) << " (" << r.known_pairs.correct << "/"
     << r.known_pairs.total << "), 95% CI [" << fixed(r.known_pairs.ci_low) << ", " << fixed(r.known_pairs.ci_high)
     << "]\n";
  os << "detection counts: TP " << c.tp << ", FP wrong class " << c.fp_class << ", FP on null pairs " << c.fp_null
     << ", FN " << c.fn << ", TN " << c.tn << '\n';
  os << "occlusion level: " << (r.occlusion ? fixed(*r.occlusion) : std::string("n/a")) << '\n';
  os << "confusion (rows truth, columns predicted):\n";
  std::size_t name_width = 4;
  for (const auto& l : r.labels) name_width = std::max(name_width, l.size());
  os << std::string(name_width + 1, ' ');
  for (std::size_t j = 0; j < r.labels.size(); ++j) os << pad(std::to_string(j), 7);
  os << '\n';
  for (std::size_t i = 0; i < r.confusion.classes; ++i) {
    const std::string& name = i < r.labels.size() ? r.labels[i] : std::to_string(i);
    os << name << std::string(name_width + 1 - name.size(), ' ');
    for (std::size_t j = 0; j < r.confusion.classes; ++j) os << pad(std::to_string(r.confusion.at(i, j)), 7);
    os << '\n';
  }
  return os.str();
}

}  // namespace rhi
