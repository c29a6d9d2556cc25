#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "acquire/engine.hpp"
#include "acquire/geometric_graph.hpp"

namespace acquire {

/// Malformed instance or protocol text. what() names the line and field.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& detail);
  std::size_t line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

// Instance files:
//   rggv1 <side> <r> <count>
//   <x> <y>            (count lines)
//   # seed=<s> sampler=<name>   (optional)
std::string save_graph(const GeometricGraph& g);
GeometricGraph load_graph(std::string_view text,
                          AdjacencyMode mode = AdjacencyMode::Materialized);

// Protocol trace files:
//   atprotov1 <n>
//   <src> <dst>        (one per move)
std::string save_protocol(const Protocol& p, std::size_t vertex_count);
/// Returns the protocol and stores the header's vertex count in `vertex_count`.
Protocol load_protocol(std::string_view text, std::size_t* vertex_count = nullptr);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace acquire
