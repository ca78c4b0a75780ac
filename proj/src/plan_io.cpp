#include <fstream>
#include <iomanip>

#include "asap/assembly.hpp"
#include "asap/sequence_plan.hpp"

namespace asap {

std::vector<std::string> SequencePlan::order() const {
  std::vector<std::string> out;
  for (const auto& s : steps) out.push_back(s.part_id);
  return out;
}

SequencePlan build_sequence_plan(const Assembly& assembly, const std::vector<DisassemblyStep>& removals) {
  if (removals.size() + 1 != assembly.size()) {
    throw std::invalid_argument("a complete disassembly has n-1 removals");
  }
  SequencePlan plan;
  plan.assembly_id = assembly.id;
  PartSet remaining = PartSet::full(assembly.size());
  for (const auto& r : removals) remaining = remaining.without(r.part);
  const int base = remaining.indices().front();
  const DisassemblyStep& last = removals.back();
  PlanStep first;
  first.part_id = assembly.part_id(base);
  first.pose = last.pose.transform;
  first.held_parts = last.hold.held_parts;
  first.assembly_motion.part_id = first.part_id;
  plan.steps.push_back(first);
  for (auto it = removals.rbegin(); it != removals.rend(); ++it) {
    PlanStep step;
    step.part_id = assembly.part_id(it->part);
    step.pose = it->pose.transform;
    step.held_parts = it->hold.held_parts;
    step.assembly_motion = reverse_to_assembly(it->motion);
    plan.steps.push_back(step);
  }
  return plan;
}

nlohmann::json transform_to_json(const RigidTransform& tf) {
  const Quat& q = tf.rotation;
  return {{"rotation_quat", {q.w(), q.x(), q.y(), q.z()}},
          {"translation", {tf.translation.x(), tf.translation.y(), tf.translation.z()}}};
}

RigidTransform transform_from_json(const nlohmann::json& j) {
  const auto q = j.at("rotation_quat").get<std::vector<double>>();
  const auto t = j.at("translation").get<std::vector<double>>();
  if (q.size() != 4 || t.size() != 3) throw std::runtime_error("malformed rigid transform");
  return {Quat(q[0], q[1], q[2], q[3]).normalized(), Vec3(t[0], t[1], t[2])};
}

namespace {

nlohmann::json vec_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

Vec3 vec_from(const nlohmann::json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 3) throw std::runtime_error("expected a 3-vector");
  return {v[0], v[1], v[2]};
}

}  // namespace

nlohmann::json plan_to_json(const SequencePlan& plan) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : plan.steps) {
    nlohmann::json wps = nlohmann::json::array();
    for (const auto& w : s.assembly_motion.waypoints) {
      wps.push_back({{"position", vec_json(w.translation)},
                     {"quaternion", {w.rotation.w(), w.rotation.x(), w.rotation.y(), w.rotation.z()}}});
    }
    nlohmann::json forces = nlohmann::json::array();
    for (const auto& f : s.assembly_motion.force_sequence) forces.push_back(vec_json(f));
    steps.push_back({{"part_id", s.part_id},
                     {"pose", transform_to_json(s.pose)},
                     {"held_parts", s.held_parts},
                     {"waypoints", wps},
                     {"forces", forces},
                     {"motion_budget_used", s.assembly_motion.budget_used}});
  }
  return {{"assembly_id", plan.assembly_id},
          {"method", plan.method},
          {"steps", steps},
          {"stats", {{"evaluations", plan.evaluations}, {"wall_time_s", plan.wall_time_s}}}};
}

SequencePlan plan_from_json(const nlohmann::json& j) {
  SequencePlan plan;
  plan.assembly_id = j.at("assembly_id").get<std::string>();
  plan.method = j.value("method", std::string{});
  for (const auto& s : j.at("steps")) {
    PlanStep step;
    step.part_id = s.at("part_id").get<std::string>();
    step.pose = transform_from_json(s.at("pose"));
    step.held_parts = s.value("held_parts", std::vector<std::string>{});
    step.assembly_motion.part_id = step.part_id;
    for (const auto& w : s.value("waypoints", nlohmann::json::array())) {
      const auto q = w.at("quaternion").get<std::vector<double>>();
      if (q.size() != 4) throw std::runtime_error("malformed waypoint quaternion");
      step.assembly_motion.waypoints.push_back({Quat(q[0], q[1], q[2], q[3]).normalized(), vec_from(w.at("position"))});
    }
    for (const auto& f : s.value("forces", nlohmann::json::array())) step.assembly_motion.force_sequence.push_back(vec_from(f));
    step.assembly_motion.budget_used = s.value("motion_budget_used", 0);
    plan.steps.push_back(std::move(step));
  }
  if (j.contains("stats")) {
    plan.evaluations = j["stats"].value("evaluations", 0);
    plan.wall_time_s = j["stats"].value("wall_time_s", 0.0);
  }
  return plan;
}

void save_plan(const std::filesystem::path& path, const SequencePlan& plan) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setw(2) << plan_to_json(plan) << "\n";
}

SequencePlan load_plan(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return plan_from_json(nlohmann::json::parse(in));
}

}  // namespace asap
