#pragma once

// Per-declaration processing records for the CLI and the corpus harness.

#include <string>
#include <vector>

#include "cocon/surface.hpp"

namespace cocon {

struct ReportRecord {
  std::string name;
  std::string judgment;   // the declared ascription
  std::string verdict;    // ok | type-error | unknown
  std::string detail;     // error class and message when not ok
  std::string normal_form;
  std::vector<std::string> translations;  // targets that re-checked
  long ms = 0;
  bool matches_expectation = false;
};

struct RunOptions {
  Mode default_mode = Mode::Simple;
  long fuel = 1000000;
  bool translate_internal = false;
  bool translate_fitch = false;
  bool evaluate = false;
  bool timings = false;
  bool trace = false;
};

struct FileResult {
  Mode mode = Mode::Simple;
  std::vector<ReportRecord> records;
  std::vector<std::string> traces;  // per-node translation log when requested
  bool all_match = true;
};

// Runs a source file through check (and optionally eval/translate); parse
// and scope failures yield a single record for the whole file.
FileResult run_source(const std::string& text, const RunOptions& opts);

std::string report_jsonl(const std::vector<ReportRecord>& records, bool timings);
std::string report_text(const std::vector<ReportRecord>& records);

}  // namespace cocon
