#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlplap/graph.hpp"
#include "nlplap/graphon.hpp"

namespace nlplap {

// Shortest round-trip decimal form (std::to_chars); the single float format
// used in every CSV so outputs compare byte-for-byte.
std::string format_double(double v);

// Writes via temp file + rename in the destination directory.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

// FNV-1a 64 of the file bytes, 16 hex digits; recorded in run manifests.
std::string file_digest_hex(const std::string& path);

// Step function CSV: header "left_breakpoint,value"; the right endpoint 1 is
// implicit.
void write_pwc_csv(const std::string& path, const PiecewiseConstantFn& f);
PiecewiseConstantFn read_pwc_csv(const std::string& path);

// Plain signal CSV: header "index,value".
void write_signal_csv(const std::string& path, const std::vector<double>& v);
std::vector<double> read_signal_csv(const std::string& path);

// Graph on disk: JSON header (n, kind, q_n, seed) + CSV edge list
// "i,j,weight" over the strict upper triangle, 0-based.
void write_graph(const WeightedGraph& g, const std::string& json_path,
                 const std::string& csv_path);
WeightedGraph read_graph(const std::string& json_path, const std::string& csv_path);

struct PointCloud {
  std::vector<Point2> pts;
  std::vector<double> value;  // empty when the file has no value column
};

// Coordinates CSV: header "id,x,y" or "id,x,y,value".
PointCloud read_coords_csv(const std::string& path);
void write_coords_csv(const std::string& path, const PointCloud& pc);

}  // namespace nlplap
