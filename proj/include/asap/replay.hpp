#pragma once

#include <string>
#include <vector>

#include "asap/feasibility.hpp"
#include "asap/sequence_plan.hpp"

namespace asap {

struct ReplayReport {
  bool ok = true;
  std::vector<std::string> problems;
  double max_penetration = 0.0;  // over all assembly motions
  double max_drift = 0.0;        // over all stability re-checks
};

/// Independent validation of a plan against its assembly: step coverage, hold
/// limits, stability with the stored holds over N steps, collision-free
/// assembly motions, final placement and plane contact of each pose.
ReplayReport replay_plan(const Assembly& assembly, const SequencePlan& plan,
                         const FeasibilitySettings& settings);

}  // namespace asap
