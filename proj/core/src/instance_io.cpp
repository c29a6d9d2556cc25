#include "acquire/instance_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace acquire {

ParseError::ParseError(std::size_t line, std::string field, const std::string& detail)
    : std::runtime_error("line " + std::to_string(line) + ", field '" + field + "': " + detail),
      line_(line),
      field_(std::move(field)) {}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("format_double failed");
  return std::string(buf.data(), end);
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    while (pos_ < text_.size() || (pos_ == text_.size() && !done_)) {
      if (pos_ == text_.size()) {
        done_ = true;
        return false;
      }
      const auto nl = text_.find('\n', pos_);
      const auto stop = nl == std::string_view::npos ? text_.size() : nl;
      line = text_.substr(pos_, stop - pos_);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      pos_ = nl == std::string_view::npos ? text_.size() : nl + 1;
      ++line_no_;
      return true;
    }
    return false;
  }
  std::size_t line_no() const { return line_no_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
  bool done_ = false;
};

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line, const char* field) {
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, field, "cannot parse '" + std::string(token) + "'");
  }
  return value;
}

bool is_blank(std::string_view line) { return split_ws(line).empty(); }

}  // namespace

std::string save_graph(const GeometricGraph& g) {
  const PointSet& ps = g.pointset();
  std::string out = "rggv1 " + format_double(ps.side) + " " + format_double(g.radius()) + " " +
                    std::to_string(ps.points.size()) + "\n";
  for (const Point& p : ps.points) {
    out += format_double(p.x);
    out += ' ';
    out += format_double(p.y);
    out += '\n';
  }
  if (ps.seed || ps.sampler != Sampler::Synthetic) {
    out += "# ";
    if (ps.seed) out += "seed=" + std::to_string(*ps.seed) + " ";
    out += "sampler=" + to_string(ps.sampler) + "\n";
  }
  return out;
}

GeometricGraph load_graph(std::string_view text, AdjacencyMode mode) {
  LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw ParseError(1, "header", "empty file");
  const auto header = split_ws(line);
  if (header.empty() || header[0] != "rggv1") {
    throw ParseError(reader.line_no(), "header", "expected 'rggv1 <side> <r> <count>'");
  }
  if (header.size() != 4) throw ParseError(reader.line_no(), "header", "expected 4 fields");
  PointSet ps;
  ps.side = parse_number<double>(header[1], reader.line_no(), "side");
  const double r = parse_number<double>(header[2], reader.line_no(), "r");
  const auto count = parse_number<std::size_t>(header[3], reader.line_no(), "count");
  if (!(ps.side >= 0.0)) throw ParseError(reader.line_no(), "side", "must be non-negative");
  if (!(r > 0.0)) throw ParseError(reader.line_no(), "r", "must be positive");

  ps.points.reserve(count);
  while (ps.points.size() < count) {
    if (!reader.next(line)) {
      throw ParseError(reader.line_no() + 1, "point",
                       "truncated: expected " + std::to_string(count) + " points, found " +
                           std::to_string(ps.points.size()));
    }
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (fields[0].starts_with("#")) {
      throw ParseError(reader.line_no(), "point",
                       "truncated: trailer before all " + std::to_string(count) + " points");
    }
    if (fields.size() != 2) throw ParseError(reader.line_no(), "point", "expected 'x y'");
    const double x = parse_number<double>(fields[0], reader.line_no(), "x");
    const double y = parse_number<double>(fields[1], reader.line_no(), "y");
    if (!(x >= 0.0 && x <= ps.side)) throw ParseError(reader.line_no(), "x", "outside [0, side]");
    if (!(y >= 0.0 && y <= ps.side)) throw ParseError(reader.line_no(), "y", "outside [0, side]");
    ps.points.push_back({x, y});
  }

  while (reader.next(line)) {
    if (is_blank(line)) continue;
    const auto fields = split_ws(line);
    if (!fields[0].starts_with("#")) {
      throw ParseError(reader.line_no(), "trailer", "unexpected data after the last point");
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      std::string_view f = fields[i];
      if (i == 0) f.remove_prefix(1);
      if (f.starts_with("seed=")) {
        ps.seed = parse_number<std::uint64_t>(f.substr(5), reader.line_no(), "seed");
      } else if (f.starts_with("sampler=")) {
        auto s = sampler_from_string(f.substr(8));
        if (!s) throw ParseError(reader.line_no(), "sampler", "unknown sampler");
        ps.sampler = *s;
      }
    }
  }
  return GeometricGraph::build(std::move(ps), r, mode);
}

std::string save_protocol(const Protocol& p, std::size_t vertex_count) {
  std::string out = "atprotov1 " + std::to_string(vertex_count) + "\n";
  out.reserve(out.size() + p.moves.size() * 14);
  for (const Move& m : p.moves) {
    out += std::to_string(m.src);
    out += ' ';
    out += std::to_string(m.dst);
    out += '\n';
  }
  return out;
}

Protocol load_protocol(std::string_view text, std::size_t* vertex_count) {
  LineReader reader(text);
  std::string_view line;
  if (!reader.next(line)) throw ParseError(1, "header", "empty file");
  const auto header = split_ws(line);
  if (header.size() != 2 || header[0] != "atprotov1") {
    throw ParseError(reader.line_no(), "header", "expected 'atprotov1 <n>'");
  }
  const auto n = parse_number<std::size_t>(header[1], reader.line_no(), "n");
  if (vertex_count) *vertex_count = n;
  Protocol p;
  while (reader.next(line)) {
    const auto fields = split_ws(line);
    if (fields.empty() || fields[0].starts_with("#")) continue;
    if (fields.size() != 2) throw ParseError(reader.line_no(), "move", "expected 'src dst'");
    const auto src = parse_number<VertexId>(fields[0], reader.line_no(), "src");
    const auto dst = parse_number<VertexId>(fields[1], reader.line_no(), "dst");
    if (src >= n) throw ParseError(reader.line_no(), "src", "vertex id out of range");
    if (dst >= n) throw ParseError(reader.line_no(), "dst", "vertex id out of range");
    p.moves.push_back({src, dst});
  }
  return p;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace acquire
