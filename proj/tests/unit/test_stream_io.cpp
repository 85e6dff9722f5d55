#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <sstream>

#include "rhi/error.hpp"
#include "rhi/stream_io.hpp"
#include "rhi/synth_scene.hpp"
#include "test_support.hpp"

namespace rhi {
namespace {

const std::string kFixtures = RHI_FIXTURE_DIR;

std::string error_of(const std::string& text) {
  std::istringstream in(text);
  try {
    ingest_stream(in, "mem");
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
    return e.what();
  }
  return {};
}

std::vector<Scene> synthetic_scenes() {
  SceneScript s;
  s.id = "demo";
  s.persons = {"A", "B", "C"};
  s.seed = 9;
  s.with_depth = true;
  s.timeline = {{CandidatePair("A", "B"), "hug", 0, 45},
                {CandidatePair("C", "C"), "walk", 0, 20},
                {CandidatePair("C", "C"), "wave_robot", 20, 45}};
  return {Scene{"demo", generate_scene(s)}};
}

TEST(StreamIo, RoundTripPreservesSegments) {
  const auto scenes = synthetic_scenes();
  std::ostringstream out;
  emit_stream(out, scenes);
  std::istringstream in(out.str());
  const auto back = ingest_stream(in);
  ASSERT_EQ(back.size(), 1u);
  ASSERT_EQ(back[0].segments.size(), 2u);
  EXPECT_EQ(back[0].segments[0].id, "demo/0");
  for (std::size_t i = 0; i < 2; ++i) {
    const Segment& a = scenes[0].segments[i];
    const Segment& b = back[0].segments[i];
    EXPECT_EQ(a.start, b.start);
    EXPECT_EQ(a.end, b.end);
    EXPECT_EQ(a.persons, b.persons);
    EXPECT_EQ(a.ground_truth, b.ground_truth);
    for (const auto& p : a.persons) {
      EXPECT_EQ(a.track(p).depth, b.track(p).depth);
      EXPECT_EQ(a.track(p).boxes, b.track(p).boxes);
      const auto& ja = a.track(p).joints;
      const auto& jb = b.track(p).joints;
      ASSERT_EQ(ja.size(), jb.size());
      for (std::size_t f = 0; f < ja.size(); ++f) EXPECT_EQ(ja[f].positions, jb[f].positions);
    }
  }
  std::ostringstream again;
  emit_stream(again, back);
  EXPECT_EQ(again.str(), out.str());
}

TEST(StreamIo, TwoPersonFixture) {
  const auto scenes = read_stream_file(kFixtures + "/two_person_100.rhis");
  ASSERT_EQ(scenes.size(), 1u);
  ASSERT_EQ(scenes[0].segments.size(), 1u);
  const Segment& seg = scenes[0].segments[0];
  EXPECT_EQ(seg.length(), 100);
  EXPECT_EQ(enumerate_pairs(seg.persons).size(), 3u);
  ASSERT_TRUE(seg.ground_truth);
  EXPECT_EQ(seg.ground_truth->at(CandidatePair("alice", "bob")), "shake_hands");
  EXPECT_EQ(seg.ground_truth->at(CandidatePair("alice", "alice")), kNullLabelName);
}

TEST(StreamIo, SinglePersonFixtureIsUnannotated) {
  const auto segs = ingest_segments(kFixtures + "/single_person.rhis");
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_FALSE(segs[0].ground_truth);
  EXPECT_TRUE(segs[0].has_boxes());
}

TEST(StreamIo, GapFixtureNamesPersonAndFrame) {
  try {
    read_stream_file(kFixtures + "/gap.rhis");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
    EXPECT_NE(std::string(e.what()).find("person bob missing frame 13"), std::string::npos) << e.what();
  }
}

TEST(StreamIo, CutsAtPersonAndAnnotationChanges) {
  std::mt19937_64 rng(4);
  std::ostringstream s;
  s << "rhi-stream 1\njoints 2\n";
  for (int f = 0; f < 30; ++f) {
    s << "F " << f << " A 0 0 0 1 1 1\n";
    if (f >= 10) s << "F " << f << " B 0 0 1 1 1 2\n";
  }
  s << "A 10 20 A B hug\n";
  std::istringstream in(s.str());
  const auto scenes = ingest_stream(in, "cuts");
  ASSERT_EQ(scenes.size(), 1u);
  EXPECT_EQ(scenes[0].id, "cuts");
  const auto& segs = scenes[0].segments;
  ASSERT_EQ(segs.size(), 3u);
  EXPECT_EQ(segs[0].persons.size(), 1u);
  EXPECT_EQ(segs[1].start, 10);
  EXPECT_EQ(segs[1].ground_truth->at(CandidatePair("A", "B")), "hug");
  EXPECT_EQ(segs[2].start, 20);
  EXPECT_EQ(segs[2].ground_truth->at(CandidatePair("A", "B")), kNullLabelName);
}

TEST(StreamIo, MalformedLinesReportLineNumbers) {
  EXPECT_NE(error_of("rhi-stream 1\njoints 1\nF 0 A 1 2\n").find("mem:3:"), std::string::npos);
  EXPECT_NE(error_of("rhi-stream 1\njoints 1\n# note\nF 0 A 1 2 x\n").find("mem:4:"), std::string::npos);
  EXPECT_NE(error_of("rhi-stream 1\njoints 1\nQ 1\n").find("unknown record type"), std::string::npos);
  EXPECT_NE(error_of("F 0 A 1 2 3\n").find("header"), std::string::npos);
  EXPECT_NE(error_of("").find("empty stream"), std::string::npos);
  EXPECT_NE(error_of("rhi-stream 1\nF 0 A 1 2 3\n").find("before 'joints'"), std::string::npos);
  EXPECT_NE(error_of("rhi-stream 1\njoints 1\nF 0 A 1 2 3\nF 0 A 1 2 3\n").find("mem:4: duplicate frame"),
            std::string::npos);
  EXPECT_NE(error_of("rhi-stream 1\njoints 1\nF 0 A 1 2 3\nA 0 1 A A null\n").find("mem:4:"), std::string::npos);
}

TEST(Manifest, RoundTripAndResolution) {
  const auto dir = std::filesystem::temp_directory_path() / "rhi_manifest_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "manifest.txt").string();
  Manifest m;
  m.seed = 77;
  m.groups = {{0, "group0.rhis"}, {1, "group1.rhis"}};
  write_manifest(path, m);
  const Manifest back = read_manifest(path);
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.groups, m.groups);
  EXPECT_EQ(manifest_entry_path(path, "group1.rhis"), (dir / "group1.rhis").string());
  EXPECT_EQ(manifest_entry_path(path, "/abs/x.rhis"), "/abs/x.rhis");
  std::filesystem::remove_all(dir);
  EXPECT_THROW(read_manifest(path), Error);
}

}  // namespace
}  // namespace rhi
