#pragma once

#include <string>
#include <vector>

#include "asap/assembly.hpp"
#include "asap/physics.hpp"

namespace asap {

struct StabilityQuery {
  std::vector<PlacedPart> parts;  // subassembly already placed on the plane
  int max_held = 2;               // M
  int max_steps = 200;            // N
  double distance_threshold = 0.0;  // d_th, must be > 0
  SimConfig sim;

  void validate() const;
};

struct HoldPlan {
  std::vector<std::string> held_parts;  // in part order of the query
  bool stable = false;
  int simulations = 0;
};

/// Result of one N-step simulation with a fixed hold set.
struct HoldTrial {
  bool stable = true;
  int failed_part = -1;  // first unheld part (index order) that drifted or disconnected
  int steps = 0;
  bool diverged = false;
  double max_drift = 0.0;  // over unheld parts and simulated steps
};

HoldTrial simulate_hold_set(const StabilityQuery& q, const std::vector<char>& held);

/// Greedy hold-set growth: pin the first part seen falling and restart.
/// At most M+1 simulations.
HoldPlan check_stable_greedy(const StabilityQuery& q);

/// Every hold set of size 0..M in lexicographic order within each size; the
/// first stable one is returned. With `exhaustive` every set is simulated
/// (the full ΣC(n,k) cost) and the first stable one is still the witness.
/// Limited to 12 parts.
HoldPlan check_stable_combinatorial(const StabilityQuery& q, bool exhaustive = false);

inline constexpr std::size_t kOracleMaxParts = 12;

}  // namespace asap
