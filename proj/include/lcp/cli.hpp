#pragma once

#include "lcp/bounds.hpp"

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace lcp {

// The `lcp` command line. `args` excludes the program name; `env` supplies
// LCP_SEED. Returns 0 on success, 1 when a check suite reports a FAIL and 2
// on usage, configuration or input errors.
int run_cli(const std::vector<std::string>& args, const std::map<std::string, std::string>& env,
            std::ostream& out, std::ostream& err);

// Envelope rows for `report`: per dimension, the largest perimeter seen in
// the report next to the bound curves n/sqrt(3), sqrt(2) n, 2n, 4n and
// 14 n^{3/2}. Header only when the report has no rows.
std::string envelope_csv(const std::vector<BoundReport>& reports);
// Fixed-width table, stably sorted by (n, check id), with a summary line.
std::string report_table(const std::vector<BoundReport>& reports);

}  // namespace lcp
