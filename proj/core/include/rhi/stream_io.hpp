#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rhi/core_model.hpp"

namespace rhi {

// One recording: its segments in time order.
struct Scene {
  std::string id;
  std::vector<Segment> segments;

  friend bool operator==(const Scene&, const Scene&) = default;
};

// Skeleton-stream text format (see docs/stream_format.md):
//   rhi-stream 1
//   joints <J>
//   scene <id>
//   F <frame> <person> <3J coordinates> [B <x0> <y0> <x1> <y1>]
//   D <frame> <person> <width> <height> <width*height depth values>
//   A <start> <end> <person> <person> <label>
void emit_stream(std::ostream& os, std::span<const Scene> scenes);

// Cuts segments wherever the person set or an annotation changes. A person
// who disappears and comes back is reported as a missing frame.
std::vector<Scene> ingest_stream(std::istream& is, const std::string& source = "stream");

std::vector<Scene> read_stream_file(const std::string& path);
void write_stream_file(const std::string& path, std::span<const Scene> scenes);

// All segments of all scenes, in file order.
std::vector<Segment> ingest_segments(const std::string& path);

// Benchmark manifest: "rhi-manifest 1", "seed <n>", then "group <index> <file>"
// lines with paths relative to the manifest.
struct Manifest {
  std::uint64_t seed = 0;
  std::vector<std::pair<int, std::string>> groups;
};

void write_manifest(const std::string& path, const Manifest& manifest);
Manifest read_manifest(const std::string& path);
// Resolves a manifest entry against the manifest's directory.
std::string manifest_entry_path(const std::string& manifest_path, const std::string& entry);

}  // namespace rhi
