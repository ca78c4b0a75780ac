#include "asap/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace asap {

SequenceEvaluator::SequenceEvaluator(const Assembly& assembly, const BaselineOptions& options,
                                     std::shared_ptr<FeasibilityCache> cache)
    : assembly_(assembly),
      options_(options),
      checker_(assembly, options.feasibility, std::move(cache)),
      budget_(options.budget),
      start_(std::chrono::steady_clock::now()) {}

double SequenceEvaluator::elapsed() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

bool SequenceEvaluator::timed_out() const { return options_.timeout_s > 0.0 && elapsed() > options_.timeout_s; }

std::optional<SequenceEvaluator::StepOutcome> SequenceEvaluator::step(const PartSet& node, int part) {
  const auto key = std::pair{node, part};
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  std::vector<StablePose> poses;
  try {
    poses = options_.feasibility.upright_only ? upright_poses(assembly_, node)
                                              : enumerate_stable_poses(assembly_, node, options_.feasibility.pose_k);
    if (static_cast<int>(poses.size()) > options_.feasibility.pose_k) poses.resize(options_.feasibility.pose_k);
  } catch (const DegenerateHull&) {
  }
  StepOutcome outcome;
  for (const StablePose& pose : poses) {
    if (budget_.exhausted() || timed_out()) return std::nullopt;
    budget_.consume();
    ++fresh_;
    AttemptResult r = checker_.attempt(node, part, pose);
    if (r.feasible()) {
      outcome.feasible = true;
      outcome.step = {part, pose, std::move(*r.motion), std::move(r.hold)};
      break;
    }
  }
  memo_.emplace(key, outcome);
  return outcome;
}

std::optional<bool> SequenceEvaluator::free_path(const PartSet& node, int part) {
  const auto key = std::pair{node, part};
  if (auto it = free_memo_.find(key); it != free_memo_.end()) return it->second;
  if (budget_.exhausted() || timed_out()) return std::nullopt;
  budget_.consume();
  ++fresh_;
  const bool ok = checker_.path(node, part, RigidTransform::identity(), false).plan.has_value();
  free_memo_.emplace(key, ok);
  return ok;
}

SequenceEvaluator::Evaluation SequenceEvaluator::evaluate(const std::vector<int>& order) {
  Evaluation ev;
  PartSet node = PartSet::full(assembly_.size());
  for (std::size_t k = 0; k + 1 < order.size(); ++k) {
    const auto outcome = step(node, order[k]);
    if (!outcome) {
      ev.exhausted = true;
      return ev;
    }
    if (!outcome->feasible) return ev;
    ev.steps.push_back(outcome->step);
    ev.fitness = static_cast<int>(k) + 1;
    node = node.without(order[k]);
  }
  return ev;
}

SequenceEvaluator::Evaluation evaluate_sequence(const Assembly& assembly, const std::vector<int>& order,
                                                const BaselineOptions& options) {
  SequenceEvaluator evaluator(assembly, options, nullptr);
  return evaluator.evaluate(order);
}

std::vector<int> order_crossover(const std::vector<int>& p1, const std::vector<int>& p2, std::size_t a,
                                 std::size_t b) {
  const std::size_t n = p1.size();
  std::vector<int> child(n, -1);
  std::vector<char> used(n, 0);
  for (std::size_t i = a; i < b; ++i) {
    child[i] = p1[i];
    used[p1[i]] = 1;
  }
  std::size_t pos = b % n;
  for (std::size_t k = 0; k < n; ++k) {
    const int gene = p2[(b + k) % n];
    if (used[gene]) continue;
    while (child[pos] != -1) pos = (pos + 1) % n;
    child[pos] = gene;
    used[gene] = 1;
  }
  return child;
}

namespace {

BaselineResult finish(SequenceEvaluator& ev, const Assembly& assembly, const std::string& method,
                      const std::vector<DisassemblyStep>* steps, FailureCause cause, int best) {
  BaselineResult r;
  r.cause = steps ? FailureCause::none : cause;
  r.evaluations = ev.budget().used();
  r.wall_time_s = ev.elapsed();
  r.best_fitness = best;
  if (steps) {
    SequencePlan plan = build_sequence_plan(assembly, *steps);
    plan.method = method;
    plan.evaluations = r.evaluations;
    plan.wall_time_s = r.wall_time_s;
    r.plan = std::move(plan);
  }
  return r;
}

FailureCause stop_cause(SequenceEvaluator& ev) {
  return ev.budget().exhausted() ? FailureCause::budget_exhausted : FailureCause::timeout;
}

void check_size(const Assembly& assembly) {
  if (assembly.size() < 2) throw std::invalid_argument("sequence search needs at least two parts");
}

}  // namespace

BaselineResult random_permutation_search(const Assembly& assembly, const BaselineOptions& options,
                                         std::shared_ptr<FeasibilityCache> cache) {
  check_size(assembly);
  SequenceEvaluator ev(assembly, options, std::move(cache));
  std::mt19937_64 rng(options.seed);
  std::vector<int> order(assembly.size());
  int best = 0, stall = 0;
  while (true) {
    if (ev.budget().exhausted() || ev.timed_out()) return finish(ev, assembly, "random-permutation", nullptr, stop_cause(ev), best);
    if (stall >= options.stall_limit) return finish(ev, assembly, "random-permutation", nullptr, FailureCause::tree_exhausted, best);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int before = ev.fresh_evaluations();
    const auto result = ev.evaluate(order);
    stall = ev.fresh_evaluations() == before ? stall + 1 : 0;
    best = std::max(best, result.fitness);
    if (result.complete(assembly.size())) return finish(ev, assembly, "random-permutation", &result.steps, FailureCause::none, best);
    if (result.exhausted) return finish(ev, assembly, "random-permutation", nullptr, stop_cause(ev), best);
  }
}

BaselineResult genetic_search(const Assembly& assembly, const BaselineOptions& options, const GaParams& params,
                              std::shared_ptr<FeasibilityCache> cache,
                              const std::vector<std::vector<int>>& initial_population) {
  check_size(assembly);
  if (params.population < 2 || params.tournament < 1 || params.elites < 0 || params.elites > params.population) {
    throw std::invalid_argument("invalid genetic-algorithm parameters");
  }
  const std::string method = "genetic";
  SequenceEvaluator ev(assembly, options, std::move(cache));
  std::mt19937_64 rng(options.seed);
  const std::size_t n = assembly.size();
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  struct Individual {
    std::vector<int> order;
    int fitness = 0;
  };
  std::vector<Individual> pop;
  int best = 0;
  std::vector<int> history;
  auto add = [&](std::vector<int> order, std::vector<Individual>& into) -> std::optional<BaselineResult> {
    const auto result = ev.evaluate(order);
    best = std::max(best, result.fitness);
    into.push_back({std::move(order), result.fitness});
    if (result.complete(n)) {
      history.push_back(best);
      auto r = finish(ev, assembly, method, &result.steps, FailureCause::none, best);
      r.best_fitness_per_generation = history;
      return r;
    }
    if (result.exhausted) {
      history.push_back(best);
      auto r = finish(ev, assembly, method, nullptr, stop_cause(ev), best);
      r.best_fitness_per_generation = history;
      return r;
    }
    return std::nullopt;
  };

  for (int i = 0; i < params.population; ++i) {
    std::vector<int> order;
    if (i < static_cast<int>(initial_population.size())) {
      order = initial_population[i];
    } else {
      order.resize(n);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
    }
    if (auto done = add(std::move(order), pop)) return *done;
  }

  const int stall_generations = std::max(1, options.stall_limit / params.population);
  int stall = 0;
  while (true) {
    history.push_back(best);
    if (ev.budget().exhausted() || ev.timed_out()) {
      auto r = finish(ev, assembly, method, nullptr, stop_cause(ev), best);
      r.best_fitness_per_generation = history;
      return r;
    }
    if (stall >= stall_generations) {
      auto r = finish(ev, assembly, method, nullptr, FailureCause::tree_exhausted, best);
      r.best_fitness_per_generation = history;
      return r;
    }
    std::vector<int> rank(pop.size());
    std::iota(rank.begin(), rank.end(), 0);
    std::stable_sort(rank.begin(), rank.end(), [&](int a, int b) { return pop[a].fitness > pop[b].fitness; });
    std::vector<Individual> next;
    for (int e = 0; e < params.elites; ++e) next.push_back(pop[rank[e]]);
    auto tournament = [&]() -> const Individual& {
      std::uniform_int_distribution<int> pick(0, static_cast<int>(pop.size()) - 1);
      int winner = pick(rng);
      for (int t = 1; t < params.tournament; ++t) {
        const int c = pick(rng);
        if (pop[c].fitness > pop[winner].fitness || (pop[c].fitness == pop[winner].fitness && c < winner)) winner = c;
      }
      return pop[winner];
    };
    const int before = ev.fresh_evaluations();
    while (static_cast<int>(next.size()) < params.population) {
      const Individual& a = tournament();
      const Individual& b = tournament();
      std::vector<int> child = a.order;
      if (unit(rng) < params.crossover_rate) {
        std::uniform_int_distribution<std::size_t> cut(0, n);
        std::size_t c1 = cut(rng), c2 = cut(rng);
        if (c1 > c2) std::swap(c1, c2);
        child = order_crossover(a.order, b.order, c1, c2);
      }
      if (unit(rng) < params.mutation_rate) {
        std::uniform_int_distribution<std::size_t> pos(0, n - 1);
        std::swap(child[pos(rng)], child[pos(rng)]);
      }
      if (auto done = add(std::move(child), next)) return *done;
    }
    stall = ev.fresh_evaluations() == before ? stall + 1 : 0;
    pop = std::move(next);
  }
}

BaselineResult gravity_free_search(const Assembly& assembly, const BaselineOptions& options,
                                   std::shared_ptr<FeasibilityCache> cache) {
  check_size(assembly);
  const std::string method = "gravity-free";
  SequenceEvaluator ev(assembly, options, std::move(cache));
  std::mt19937_64 rng(options.seed);
  int best = 0, stall = 0;
  while (true) {
    if (ev.budget().exhausted() || ev.timed_out()) return finish(ev, assembly, method, nullptr, stop_cause(ev), best);
    if (stall >= options.stall_limit) return finish(ev, assembly, method, nullptr, FailureCause::tree_exhausted, best);
    const int before = ev.fresh_evaluations();
    PartSet node = PartSet::full(assembly.size());
    std::vector<int> order;
    bool dead = false, out = false;
    while (node.count() > 1) {
      std::vector<int> candidates = node.indices();
      std::shuffle(candidates.begin(), candidates.end(), rng);
      bool found = false;
      for (int p : candidates) {
        const auto ok = ev.free_path(node, p);
        if (!ok) {
          out = true;
          break;
        }
        if (*ok) {
          order.push_back(p);
          node = node.without(p);
          found = true;
          break;
        }
      }
      if (out) break;
      if (!found) {
        dead = true;
        break;
      }
    }
    if (out) return finish(ev, assembly, method, nullptr, stop_cause(ev), best);
    if (!dead) {
      order.push_back(node.indices().front());
      const auto result = ev.evaluate(order);
      best = std::max(best, result.fitness);
      if (result.complete(assembly.size())) return finish(ev, assembly, method, &result.steps, FailureCause::none, best);
      if (result.exhausted) return finish(ev, assembly, method, nullptr, stop_cause(ev), best);
    }
    stall = ev.fresh_evaluations() == before ? stall + 1 : 0;
  }
}

}  // namespace asap
