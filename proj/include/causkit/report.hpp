#pragma once

#include <string>
#include <vector>

namespace causkit {

/// Outcome of a numerical or exact check. verdict <=> residual <= tolerance.
struct CheckReport {
  bool verdict = true;
  double residual = 0.0;
  std::string witness;
  double tolerance = 0.0;
};

/**
 * An input/output pair of a multipartite process. Both lists are usually of
 * length <= 1; longer lists group several systems into one event.
 **/
struct Event {
  std::string name;
  std::vector<std::string> ins;
  std::vector<std::string> outs;
};

/// Merges `next` into `acc`: conjunction of verdicts, max residual, first
/// failing witness kept.
void merge_into(CheckReport& acc, const CheckReport& next);

}  // namespace causkit
