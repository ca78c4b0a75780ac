#include "asap/stability.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace asap {

void StabilityQuery::validate() const {
  if (parts.empty()) throw std::invalid_argument("stability query has no parts");
  if (max_held < 0) throw std::invalid_argument("max_held must be >= 0");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be >= 1");
  if (!(distance_threshold > 0.0)) throw std::invalid_argument("distance_threshold must be > 0");
}

HoldTrial simulate_hold_set(const StabilityQuery& q, const std::vector<char>& held) {
  SimScene scene(q.sim, true);
  for (std::size_t i = 0; i < q.parts.size(); ++i) {
    scene.add_part(q.parts[i].geometry, q.parts[i].pose, held[i] != 0);
  }
  const std::vector<Vec3> start = scene.positions();
  const double d2 = q.distance_threshold * q.distance_threshold;
  HoldTrial trial;
  for (int s = 0; s < q.max_steps; ++s) {
    try {
      scene.step();
    } catch (const SimulationDiverged& e) {
      std::clog << "warning: " << e.what() << "; treating as unstable\n";
      trial.stable = false;
      trial.diverged = true;
      trial.failed_part = static_cast<int>(scene.index_of(e.part_id));
      trial.steps = s + 1;
      return trial;
    }
    trial.steps = s + 1;
    for (std::size_t i = 0; i < scene.size(); ++i) {
      if (held[i]) continue;
      const double drift2 = (scene.state(i).position - start[i]).squaredNorm();
      trial.max_drift = std::max(trial.max_drift, std::sqrt(drift2));
      if (drift2 > d2 || scene.is_disconnected(i)) {
        trial.stable = false;
        trial.failed_part = static_cast<int>(i);
        return trial;
      }
    }
  }
  return trial;
}

namespace {

HoldPlan make_plan(const StabilityQuery& q, const std::vector<char>& held, bool stable, int sims) {
  HoldPlan plan;
  plan.stable = stable;
  plan.simulations = sims;
  if (stable) {
    for (std::size_t i = 0; i < held.size(); ++i) {
      if (held[i]) plan.held_parts.push_back(q.parts[i].geometry->id);
    }
  }
  return plan;
}

}  // namespace

HoldPlan check_stable_greedy(const StabilityQuery& q) {
  q.validate();
  std::vector<char> held(q.parts.size(), 0);
  int count = 0;
  int sims = 0;
  while (count <= q.max_held) {
    const HoldTrial trial = simulate_hold_set(q, held);
    ++sims;
    if (trial.stable) return make_plan(q, held, true, sims);
    held[trial.failed_part] = 1;
    ++count;
  }
  return make_plan(q, held, false, sims);
}

HoldPlan check_stable_combinatorial(const StabilityQuery& q, bool exhaustive) {
  q.validate();
  const int n = static_cast<int>(q.parts.size());
  if (q.parts.size() > kOracleMaxParts) {
    throw std::invalid_argument("combinatorial stability oracle is limited to 12 parts");
  }
  int sims = 0;
  std::vector<int> combo;
  std::vector<char> held(n, 0);
  std::vector<char> witness;
  for (int k = 0; k <= std::min(q.max_held, n); ++k) {
    combo.resize(k);
    for (int i = 0; i < k; ++i) combo[i] = i;
    while (true) {
      std::fill(held.begin(), held.end(), 0);
      for (int i : combo) held[i] = 1;
      ++sims;
      if (witness.empty() && simulate_hold_set(q, held).stable) {
        if (!exhaustive) return make_plan(q, held, true, sims);
        witness = held;
      } else if (!witness.empty()) {
        simulate_hold_set(q, held);
      }
      int pos = k - 1;
      while (pos >= 0 && combo[pos] == n - k + pos) --pos;
      if (pos < 0) break;
      ++combo[pos];
      for (int i = pos + 1; i < k; ++i) combo[i] = combo[i - 1] + 1;
    }
  }
  if (!witness.empty()) return make_plan(q, witness, true, sims);
  return make_plan(q, held, false, sims);
}

}  // namespace asap
