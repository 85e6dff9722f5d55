#include "rhi/stream_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string_view>

#include "rhi/error.hpp"
#include "rhi/text_io.hpp"

namespace rhi {

namespace {

constexpr std::string_view kStreamTag = "rhi-stream";
constexpr std::string_view kManifestTag = "rhi-manifest";

void check_token(const std::string& s, const std::string& what) {
  if (s.empty() || std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; })) {
    ThrowInvalid(what + " '" + s + "' must be a non-empty token without whitespace");
  }
}

// Whitespace tokenizer over one line with error messages carrying the line.
class LineReader {
 public:
  LineReader(std::string_view line, std::string where) : rest_(line), where_(std::move(where)) {}

  bool done() {
    skip();
    return rest_.empty();
  }

  std::string_view token(const char* what) {
    skip();
    if (rest_.empty()) fail(std::string("missing ") + what);
    std::size_t n = 0;
    while (n < rest_.size() && rest_[n] != ' ' && rest_[n] != '\t' && rest_[n] != '\r') ++n;
    std::string_view tok = rest_.substr(0, n);
    rest_.remove_prefix(n);
    return tok;
  }

  double number(const char* what) {
    std::string_view tok = token(what);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
      fail(std::string("invalid ") + what + " '" + std::string(tok) + "'");
    }
    return v;
  }

  long long integer(const char* what) {
    std::string_view tok = token(what);
    long long v = 0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      fail(std::string("invalid ") + what + " '" + std::string(tok) + "'");
    }
    return v;
  }

  [[noreturn]] void fail(const std::string& msg) const { ThrowData(where_ + msg); }

 private:
  void skip() {
    while (!rest_.empty() && (rest_.front() == ' ' || rest_.front() == '\t' || rest_.front() == '\r')) {
      rest_.remove_prefix(1);
    }
  }

  std::string_view rest_;
  std::string where_;
};

struct FrameRecord {
  JointSet joints;
  std::optional<BoundingBox> box;
  std::size_t line = 0;
};

struct Annotation {
  std::int64_t start;
  std::int64_t end;
  CandidatePair pair;
  std::string label;
  std::size_t line;
};

struct SceneBuilder {
  std::string id;
  std::string source;
  std::map<PersonId, std::map<std::int64_t, FrameRecord>> frames;
  std::map<PersonId, std::map<std::int64_t, DepthPatch>> depth;
  std::vector<Annotation> annotations;

  std::string where(std::size_t line) const { return source + ":" + std::to_string(line) + ": "; }

  Scene build() const {
    Scene scene;
    scene.id = id;
    if (frames.empty()) {
      if (!annotations.empty()) ThrowData(where(annotations.front().line) + "annotation in scene without frames");
      return scene;
    }

    // Per-person presence interval, gaps rejected.
    std::map<PersonId, std::pair<std::int64_t, std::int64_t>> span;
    std::set<std::int64_t> cuts;
    for (const auto& [person, recs] : frames) {
      std::int64_t prev = recs.begin()->first;
      bool any_box = false;
      bool all_box = true;
      for (const auto& [frame, rec] : recs) {
        if (frame > prev + 1) {
          ThrowData(where(rec.line) + "person " + person + " missing frame " + std::to_string(prev + 1));
        }
        prev = frame;
        any_box = any_box || rec.box.has_value();
        all_box = all_box && rec.box.has_value();
      }
      if (any_box && !all_box) ThrowData(source + ": person " + person + " has boxes on only some frames");
      span[person] = {recs.begin()->first, recs.rbegin()->first + 1};
      cuts.insert(span[person].first);
      cuts.insert(span[person].second);
    }
    for (const auto& [person, patches] : depth) {
      const auto it = frames.find(person);
      if (it == frames.end()) ThrowData(source + ": depth for person " + person + " without skeleton frames");
      for (const auto& [frame, rec] : it->second) {
        if (!patches.contains(frame)) {
          ThrowData(where(rec.line) + "person " + person + " has no depth at frame " + std::to_string(frame));
        }
      }
      if (patches.size() != it->second.size()) {
        ThrowData(source + ": person " + person + " has depth on frames without skeleton data");
      }
    }
    for (const Annotation& a : annotations) {
      for (const PersonId& p : {a.pair.first(), a.pair.second()}) {
        const auto s = span.find(p);
        if (s == span.end() || a.start < s->second.first || a.end > s->second.second) {
          ThrowData(where(a.line) + "annotation covers frames where person " + p + " is absent");
        }
      }
      cuts.insert(a.start);
      cuts.insert(a.end);
    }
    for (std::size_t i = 0; i < annotations.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        const Annotation& a = annotations[i];
        const Annotation& b = annotations[j];
        if (a.pair == b.pair && a.start < b.end && b.start < a.end) {
          ThrowData(where(a.line) + "overlapping annotations for pair " + a.pair.to_string());
        }
      }
    }

    const std::vector<std::int64_t> bounds(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
      Segment seg;
      seg.start = bounds[k];
      seg.end = bounds[k + 1];
      for (const auto& [person, s] : span) {
        if (s.first <= seg.start && seg.end <= s.second) seg.persons.push_back(person);
      }
      if (seg.persons.empty()) continue;
      seg.id = id + "/" + std::to_string(scene.segments.size());
      for (const PersonId& p : seg.persons) {
        PersonTrack& t = seg.tracks[p];
        const auto& recs = frames.at(p);
        const auto dit = depth.find(p);
        for (std::int64_t f = seg.start; f < seg.end; ++f) {
          const FrameRecord& rec = recs.at(f);
          t.joints.push_back(rec.joints);
          if (rec.box) t.boxes.push_back(*rec.box);
          if (dit != depth.end()) t.depth.push_back(dit->second.at(f));
        }
      }
      if (!annotations.empty()) {
        std::map<CandidatePair, std::string> truth;
        for (const CandidatePair& pair : enumerate_pairs(seg.persons)) truth[pair] = kNullLabelName;
        for (const Annotation& a : annotations) {
          if (a.start <= seg.start && seg.end <= a.end) truth[a.pair] = a.label;
        }
        seg.ground_truth = std::move(truth);
      }
      seg.validate();
      scene.segments.push_back(std::move(seg));
    }
    return scene;
  }
};

}  // namespace

void emit_stream(std::ostream& os, std::span<const Scene> scenes) {
  std::size_t joint_count = kDefaultJointCount;
  for (const Scene& s : scenes) {
    for (const Segment& seg : s.segments) {
      for (const auto& [p, t] : seg.tracks) {
        if (!t.joints.empty()) joint_count = t.joints.front().joint_count();
      }
    }
  }
  os << kStreamTag << " 1\n";
  os << "joints " << joint_count << '\n';
  std::string line;
  for (const Scene& scene : scenes) {
    check_token(scene.id, "scene id");
    os << "scene " << scene.id << '\n';
    for (const Segment& seg : scene.segments) {
      seg.validate();
      for (std::int64_t f = seg.start; f < seg.end; ++f) {
        const auto i = static_cast<std::size_t>(f - seg.start);
        for (const PersonId& p : seg.persons) {
          check_token(p, "person id");
          const PersonTrack& t = seg.track(p);
          const JointSet& js = t.joints[i];
          if (js.joint_count() != joint_count) ThrowInvalid("mixed joint counts in one stream");
          line = "F " + std::to_string(f) + ' ' + p;
          for (const Vec3& v : js.positions) {
            line += ' ' + text::format_double(v.x);
            line += ' ' + text::format_double(v.y);
            line += ' ' + text::format_double(v.z);
          }
          if (!t.boxes.empty()) {
            const BoundingBox& b = t.boxes[i];
            line += " B " + text::format_double(b.x0) + ' ' + text::format_double(b.y0) + ' ' +
                    text::format_double(b.x1) + ' ' + text::format_double(b.y1);
          }
          os << line << '\n';
          if (!t.depth.empty()) {
            const DepthPatch& d = t.depth[i];
            os << "D " << f << ' ' << p << ' ' << d.width << ' ' << d.height;
            for (std::uint16_t v : d.depth) os << ' ' << v;
            os << '\n';
          }
        }
      }
    }
    for (const Segment& seg : scene.segments) {
      if (!seg.ground_truth) continue;
      for (const auto& [pair, label] : *seg.ground_truth) {
        if (label == kNullLabelName) continue;
        check_token(label, "label");
        os << "A " << seg.start << ' ' << seg.end << ' ' << pair.first() << ' ' << pair.second() << ' ' << label
           << '\n';
      }
    }
  }
}

std::vector<Scene> ingest_stream(std::istream& is, const std::string& source) {
  std::vector<Scene> scenes;
  std::optional<SceneBuilder> current;
  std::set<std::string> scene_ids;
  std::string line;
  std::size_t line_no = 0;
  std::size_t joint_count = 0;
  bool header = false;

  auto finish = [&] {
    if (current) scenes.push_back(current->build());
    current.reset();
  };
  auto open_scene = [&](const std::string& id, std::size_t at) {
    finish();
    if (!scene_ids.insert(id).second) {
      ThrowData(source + ":" + std::to_string(at) + ": duplicate scene '" + id + "'");
    }
    current.emplace();
    current->id = id;
    current->source = source;
  };

  while (std::getline(is, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    LineReader r(line, where);
    if (r.done() || line.front() == '#') continue;
    const std::string_view kind = r.token("record type");
    if (!header) {
      if (kind != kStreamTag) r.fail("expected '" + std::string(kStreamTag) + " 1' header");
      if (r.integer("version") != 1) r.fail("unsupported stream version");
      header = true;
      continue;
    }
    if (kind == "joints") {
      if (joint_count != 0) r.fail("joint count declared twice");
      const long long j = r.integer("joint count");
      if (j < 1) r.fail("joint count must be positive");
      joint_count = static_cast<std::size_t>(j);
    } else if (kind == "scene") {
      const std::string id(r.token("scene id"));
      open_scene(id, line_no);
    } else if (kind == "F") {
      if (joint_count == 0) r.fail("frame record before 'joints' declaration");
      if (!current) open_scene(source, line_no);
      FrameRecord rec;
      rec.line = line_no;
      rec.joints.timestamp = r.integer("frame index");
      rec.joints.person_id = std::string(r.token("person id"));
      rec.joints.positions.resize(joint_count);
      for (Vec3& v : rec.joints.positions) {
        v.x = r.number("coordinate");
        v.y = r.number("coordinate");
        v.z = r.number("coordinate");
      }
      if (!r.done()) {
        if (r.token("box marker") != "B") r.fail("expected 'B' box block or end of record");
        BoundingBox b;
        b.x0 = r.number("box coordinate");
        b.y0 = r.number("box coordinate");
        b.x1 = r.number("box coordinate");
        b.y1 = r.number("box coordinate");
        if (b.x1 < b.x0 || b.y1 < b.y0) r.fail("box corners out of order");
        rec.box = b;
      }
      if (!r.done()) r.fail("trailing fields in frame record");
      auto& per = current->frames[rec.joints.person_id];
      const std::int64_t f = rec.joints.timestamp;
      if (!per.emplace(f, std::move(rec)).second) {
        r.fail("duplicate frame " + std::to_string(f) + " for person " + per.at(f).joints.person_id);
      }
    } else if (kind == "D") {
      if (!current) open_scene(source, line_no);
      const std::int64_t f = r.integer("frame index");
      const std::string person(r.token("person id"));
      DepthPatch d;
      const long long w = r.integer("width");
      const long long h = r.integer("height");
      if (w < 1 || h < 1 || w * h > (1LL << 26)) r.fail("invalid depth patch size");
      d.width = static_cast<int>(w);
      d.height = static_cast<int>(h);
      d.depth.resize(static_cast<std::size_t>(w * h));
      for (auto& v : d.depth) {
        const long long x = r.integer("depth value");
        if (x < 0 || x > 65535) r.fail("depth value out of range");
        v = static_cast<std::uint16_t>(x);
      }
      if (!r.done()) r.fail("trailing fields in depth record");
      if (!current->depth[person].emplace(f, std::move(d)).second) {
        r.fail("duplicate depth for person " + person + " at frame " + std::to_string(f));
      }
    } else if (kind == "A") {
      if (!current) open_scene(source, line_no);
      Annotation a;
      a.line = line_no;
      a.start = r.integer("start frame");
      a.end = r.integer("end frame");
      const std::string p(r.token("person id"));
      const std::string q(r.token("person id"));
      a.pair = CandidatePair(p, q);
      a.label = std::string(r.token("label"));
      if (a.label == kNullLabelName) r.fail("annotations name valid activities only");
      if (!r.done()) r.fail("trailing fields in annotation record");
      if (a.end <= a.start) r.fail("annotation range is empty");
      current->annotations.push_back(std::move(a));
    } else {
      r.fail("unknown record type '" + std::string(kind) + "'");
    }
  }
  if (!header) ThrowData(source + ": empty stream (missing '" + std::string(kStreamTag) + " 1' header)");
  finish();
  return scenes;
}

std::vector<Scene> read_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) ThrowData("cannot open stream file " + path);
  return ingest_stream(in, path);
}

void write_stream_file(const std::string& path, std::span<const Scene> scenes) {
  std::ofstream out(path);
  if (!out) ThrowData("cannot write stream file " + path);
  emit_stream(out, scenes);
  if (!out) ThrowData("write failed for " + path);
}

std::vector<Segment> ingest_segments(const std::string& path) {
  std::vector<Segment> out;
  for (Scene& s : read_stream_file(path)) {
    for (Segment& seg : s.segments) out.push_back(std::move(seg));
  }
  return out;
}

void write_manifest(const std::string& path, const Manifest& manifest) {
  std::ofstream out(path);
  if (!out) ThrowData("cannot write manifest " + path);
  out << kManifestTag << " 1\n";
  out << "seed " << manifest.seed << '\n';
  for (const auto& [g, file] : manifest.groups) {
    check_token(file, "group file");
    out << "group " << g << ' ' << file << '\n';
  }
}

Manifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) ThrowData("cannot open manifest " + path);
  Manifest m;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::set<int> seen;
  while (std::getline(in, line)) {
    ++line_no;
    LineReader r(line, path + ":" + std::to_string(line_no) + ": ");
    if (r.done() || line.front() == '#') continue;
    const std::string_view kind = r.token("record type");
    if (!header) {
      if (kind != kManifestTag || r.integer("version") != 1) r.fail("expected 'rhi-manifest 1' header");
      header = true;
    } else if (kind == "seed") {
      const long long s = r.integer("seed");
      if (s < 0) r.fail("seed must be non-negative");
      m.seed = static_cast<std::uint64_t>(s);
    } else if (kind == "group") {
      const int g = static_cast<int>(r.integer("group index"));
      if (!seen.insert(g).second) r.fail("duplicate group " + std::to_string(g));
      m.groups.emplace_back(g, std::string(r.token("group file")));
    } else {
      r.fail("unknown manifest record '" + std::string(kind) + "'");
    }
    if (!r.done()) r.fail("trailing fields");
  }
  if (!header) ThrowData(path + ": empty manifest");
  if (m.groups.empty()) ThrowData(path + ": manifest lists no groups");
  return m;
}

std::string manifest_entry_path(const std::string& manifest_path, const std::string& entry) {
  const std::filesystem::path e(entry);
  if (e.is_absolute()) return entry;
  return (std::filesystem::path(manifest_path).parent_path() / e).string();
}

}  // namespace rhi
