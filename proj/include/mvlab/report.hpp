// Report consolidation: merges verification/flow/diagnostic outputs (JSON
// reports and CSV traces) into one summary document plus a plot-ready
// long-format CSV.
#pragma once

#include <string>
#include <vector>

namespace mvlab {

std::string tool_version();

struct MergeResult {
  std::string summary_json;           // includes every input, sectioned
  std::string long_csv;               // header source,series,x,y
  std::vector<std::string> missing;   // inputs that do not exist or failed to read
  int files_merged = 0;
};

/// Paths may be files or directories (scanned non-recursively for .json and
/// .csv entries, in sorted order). Unreadable inputs are listed in
/// `missing`; the merge is deterministic given the same inputs.
MergeResult merge_reports(const std::vector<std::string>& paths);

}  // namespace mvlab
