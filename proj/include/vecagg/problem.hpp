#pragma once

#include <string>
#include <vector>

#include "vecagg/scheme.hpp"

namespace vecagg {

/// A parsed problem file plus any out-of-range-entry warnings.
struct Problem {
  AggregationSpec spec;
  std::vector<std::string> warnings;
};

/// Parses the problem text format:
///
///   q K M N
///   <M rows of F, K entries each>
///   <N rows of G, K entries each>   (or the single token `identity`)
///   L <value>                        (optional, defaults to 1)
///
/// Blank lines and `#` comments are skipped. Entries outside [0, q) are
/// reduced with a warning. All structural problems raise ParseError with
/// the offending line number; instance-invariant violations raise
/// UsageError.
Problem parse_problem(const std::string& text);

}  // namespace vecagg
