#include "nlplap/io.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

namespace nlplap {

namespace fs = std::filesystem;

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), res.ptr);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string file_digest_hex(const std::string& path) {
  const std::string bytes = read_file(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf;
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf.data());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

double parse_num(const std::string& s, const std::string& path) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\r')) ++pos;
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("malformed number '" + s + "' in '" + path + "'");
  }
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

void write_pwc_csv(const std::string& path, const PiecewiseConstantFn& f) {
  std::string out = "left_breakpoint,value\n";
  for (int i = 0; i < f.part.cells(); ++i) {
    out += format_double(f.part.x[i]);
    out += ',';
    out += format_double(f.value[i]);
    out += '\n';
  }
  write_file_atomic(path, out);
}

PiecewiseConstantFn read_pwc_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || lines[0] != "left_breakpoint,value") {
    throw std::runtime_error("'" + path + "' is not a step-function CSV (header mismatch)");
  }
  std::vector<double> bp, val;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cols = split_csv_line(lines[k]);
    if (cols.size() != 2) throw std::runtime_error("bad row in '" + path + "'");
    bp.push_back(parse_num(cols[0], path));
    val.push_back(parse_num(cols[1], path));
  }
  bp.push_back(1.0);
  return PiecewiseConstantFn{Partition::from_breakpoints(std::move(bp)), std::move(val)};
}

void write_signal_csv(const std::string& path, const std::vector<double>& v) {
  std::string out = "index,value\n";
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(v[i]);
    out += '\n';
  }
  write_file_atomic(path, out);
}

std::vector<double> read_signal_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty() || lines[0] != "index,value") {
    throw std::runtime_error("'" + path + "' is not a signal CSV (header mismatch)");
  }
  std::vector<double> v;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cols = split_csv_line(lines[k]);
    if (cols.size() != 2) throw std::runtime_error("bad row in '" + path + "'");
    v.push_back(parse_num(cols[1], path));
  }
  return v;
}

namespace {

std::string kind_name(WeightedGraph::Kind k) {
  switch (k) {
    case WeightedGraph::Kind::WeightedAvg:
      return "weighted-avg";
    case WeightedGraph::Kind::Simple01:
      return "simple01";
    case WeightedGraph::Kind::BernoulliScaled:
      return "bernoulli-scaled";
  }
  return "weighted-avg";
}

WeightedGraph::Kind kind_from_name(const std::string& s) {
  if (s == "weighted-avg") return WeightedGraph::Kind::WeightedAvg;
  if (s == "simple01") return WeightedGraph::Kind::Simple01;
  if (s == "bernoulli-scaled") return WeightedGraph::Kind::BernoulliScaled;
  throw std::runtime_error("unknown graph kind '" + s + "'");
}

}  // namespace

void write_graph(const WeightedGraph& g, const std::string& json_path,
                 const std::string& csv_path) {
  nlohmann::ordered_json hdr;
  hdr["schema_version"] = 1;
  hdr["n"] = g.n;
  hdr["kind"] = kind_name(g.kind);
  hdr["q_n"] = g.q_n;
  hdr["seed"] = g.seed;
  hdr["edge_count"] = g.edge_count();
  write_file_atomic(json_path, hdr.dump(2) + "\n");

  std::string out = "i,j,weight\n";
  for (int i = 0; i < g.n; ++i) {
    for (int j = i + 1; j < g.n; ++j) {
      if (g.w(i, j) != 0.0) {
        out += std::to_string(i);
        out += ',';
        out += std::to_string(j);
        out += ',';
        out += format_double(g.w(i, j));
        out += '\n';
      }
    }
  }
  write_file_atomic(csv_path, out);
}

WeightedGraph read_graph(const std::string& json_path, const std::string& csv_path) {
  nlohmann::json hdr;
  try {
    hdr = nlohmann::json::parse(read_file(json_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("'" + json_path + "' is not valid JSON: " + e.what());
  }
  WeightedGraph g;
  g.n = hdr.at("n").get<int>();
  if (g.n < 1) throw std::runtime_error("graph header has invalid n");
  g.kind = kind_from_name(hdr.at("kind").get<std::string>());
  g.q_n = hdr.at("q_n").get<double>();
  g.seed = hdr.at("seed").get<std::uint64_t>();
  g.w = Matrix(g.n);

  const auto lines = read_lines(csv_path);
  if (lines.empty() || lines[0] != "i,j,weight") {
    throw std::runtime_error("'" + csv_path + "' is not an edge CSV (header mismatch)");
  }
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cols = split_csv_line(lines[k]);
    if (cols.size() != 3) throw std::runtime_error("bad row in '" + csv_path + "'");
    const int i = static_cast<int>(parse_num(cols[0], csv_path));
    const int j = static_cast<int>(parse_num(cols[1], csv_path));
    if (i < 0 || j < 0 || i >= g.n || j >= g.n || i == j) {
      throw std::runtime_error("edge index out of range in '" + csv_path + "'");
    }
    const double w = parse_num(cols[2], csv_path);
    g.w(i, j) = w;
    g.w(j, i) = w;
  }
  return g;
}

PointCloud read_coords_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw std::runtime_error("'" + path + "' is empty");
  bool with_value;
  if (lines[0] == "id,x,y,value") {
    with_value = true;
  } else if (lines[0] == "id,x,y") {
    with_value = false;
  } else {
    throw std::runtime_error("'" + path + "' is not a coordinates CSV (header mismatch)");
  }
  PointCloud pc;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cols = split_csv_line(lines[k]);
    if (cols.size() != (with_value ? 4u : 3u)) {
      throw std::runtime_error("bad row in '" + path + "'");
    }
    pc.pts.push_back({parse_num(cols[1], path), parse_num(cols[2], path)});
    if (with_value) pc.value.push_back(parse_num(cols[3], path));
  }
  return pc;
}

void write_coords_csv(const std::string& path, const PointCloud& pc) {
  const bool with_value = !pc.value.empty();
  std::string out = with_value ? "id,x,y,value\n" : "id,x,y\n";
  for (std::size_t i = 0; i < pc.pts.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(pc.pts[i].x);
    out += ',';
    out += format_double(pc.pts[i].y);
    if (with_value) {
      out += ',';
      out += format_double(pc.value[i]);
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

}  // namespace nlplap
