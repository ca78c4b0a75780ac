#include "asap/replay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace asap {

namespace {

double lowest_point(const Assembly& assembly, const PartSet& subset, const RigidTransform& pose) {
  double z = std::numeric_limits<double>::infinity();
  for (const auto& p : place(assembly, subset, pose)) {
    const Mat3 r = p.pose.rotation.toRotationMatrix();
    for (const Vec3& v : p.geometry->mesh.vertices) z = std::min(z, r.row(2).dot(v) + p.pose.translation.z());
  }
  return z;
}

}  // namespace

ReplayReport replay_plan(const Assembly& assembly, const SequencePlan& plan,
                         const FeasibilitySettings& settings) {
  ReplayReport report;
  auto fail = [&](const std::string& msg) {
    report.ok = false;
    report.problems.push_back(msg);
  };
  if (plan.assembly_id != assembly.id) fail("plan is for assembly '" + plan.assembly_id + "'");
  if (plan.steps.size() != assembly.size()) {
    fail("plan has " + std::to_string(plan.steps.size()) + " steps for " + std::to_string(assembly.size()) + " parts");
  }
  const FeasibilityChecker checker(assembly, settings);
  const double cell = assembly.max_cell_size();
  const double allowed = 2.0 * cell;

  PartSet present;
  for (std::size_t k = 0; k < plan.steps.size(); ++k) {
    const PlanStep& step = plan.steps[k];
    const std::string where = "step " + std::to_string(k) + " (" + step.part_id + ")";
    int part = -1;
    try {
      part = static_cast<int>(assembly.index_of(step.part_id));
    } catch (const std::out_of_range&) {
      fail(where + ": unknown part");
      continue;
    }
    if (present.contains(part)) {
      fail(where + ": part appears twice");
      continue;
    }
    if (static_cast<int>(step.held_parts.size()) > settings.max_held) {
      fail(where + ": holds " + std::to_string(step.held_parts.size()) + " parts, limit " +
           std::to_string(settings.max_held));
    }
    const PartSet subject = k == 0 ? PartSet().with(part) : present;
    std::vector<char> held(assembly.size(), 0);
    bool holds_ok = true;
    for (const auto& id : step.held_parts) {
      std::size_t h = 0;
      try {
        h = assembly.index_of(id);
      } catch (const std::out_of_range&) {
        fail(where + ": holds unknown part '" + id + "'");
        holds_ok = false;
        continue;
      }
      if (!subject.contains(static_cast<int>(h))) {
        fail(where + ": holds part '" + id + "' that is not in place");
        holds_ok = false;
      }
      held[h] = 1;
    }
    if (holds_ok) {
      const StabilityQuery q = checker.stability_query(subject, step.pose, settings.max_held);
      std::vector<char> local;
      for (int i : subject.indices()) local.push_back(held[i]);
      const HoldTrial trial = simulate_hold_set(q, local);
      report.max_drift = std::max(report.max_drift, trial.max_drift);
      if (!trial.stable) fail(where + ": partial assembly unstable with the stored holds");
    }

    if (k > 0) {
      const auto& wps = step.assembly_motion.waypoints;
      if (wps.empty()) {
        fail(where + ": no assembly motion");
      } else {
        const RigidTransform target = step.pose * assembly.parts[part].assembled;
        const RigidTransform& last = wps.back();
        if ((last.translation - target.translation).norm() > 1e-6 ||
            last.rotation.angularDistance(target.rotation) > 1e-6) {
          fail(where + ": motion does not end at the assembled placement");
        }
        const double depth = motion_max_penetration(place(assembly, present, step.pose),
                                                    *assembly.parts[part].geometry, wps, 0.5 * cell, true);
        report.max_penetration = std::max(report.max_penetration, depth);
        if (depth > allowed) fail(where + ": motion penetrates by " + std::to_string(depth) + " m");
      }
    }
    present = present.with(part);
    // The base part shares its pose with step 1 and may be held off the plane.
    const double z = lowest_point(assembly, present, step.pose);
    if ((k > 0 || plan.steps.size() == 1) && std::abs(z) > cell) fail(where + ": pose leaves the lowest point at z = " + std::to_string(z));
  }
  if (report.ok && present != PartSet::full(assembly.size())) fail("plan does not place every part");
  return report;
}

}  // namespace asap
