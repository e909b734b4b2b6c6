#pragma once

#include <string>

#include "algorithms.hpp"

namespace wfalab {

// JSON form of instances:
//   {"spaceX": <space>, "spaceY": <space>, "origin": [x, y], "requests": [[x, y], ...]}
// where <space> is {"kind": "real_line"}, {"kind": "uniform", "size": k},
// {"kind": "finite", "table": [[...], ...]} or {"kind": "scaled", "weight": w, "base": <space>}.
// Line coordinates and distances are rationals written as strings ("3/4")
// or JSON numbers; finite positions are row indices.
Instance instance_from_json(const std::string& text);
std::string instance_to_json(const Instance& instance);

// One JSON object per line: a "run" header, one "step" per request, and a
// closing "summary".
std::string trace_to_jsonl(const RunTrace& trace, const Instance& instance);

std::string summary_csv_header();
struct SummaryRow {
  std::string generator;
  std::uint64_t seed = 0;
  const RunTrace* trace = nullptr;
  std::size_t n = 0;
};
std::string summary_csv_row(const SummaryRow& row);

}  // namespace wfalab
