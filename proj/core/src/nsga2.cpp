#include "seqpareto/nsga2.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

#include "seqpareto/error.hpp"
#include "seqpareto/random.hpp"

namespace seqpareto {

NsgaConfig NsgaConfig::for_scenario(Scenario s, std::uint64_t seed) {
  NsgaConfig c;
  c.seed = seed;
  if (s == Scenario::MaxMin) {
    c.crossover_rate = 0.85;
    c.mutation_rate = 0.1;
  }
  return c;
}

void NsgaConfig::validate() const {
  if (pop_size < 2 || pop_size % 2 != 0) throw ConfigError("pop_size must be even and >= 2");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw ConfigError("crossover_rate must lie in [0, 1]");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw ConfigError("mutation_rate must lie in [0, 1]");
  if (!(blend_alpha >= 0.0)) throw ConfigError("blend_alpha must be >= 0");
}

std::vector<std::vector<std::size_t>> fast_nondominated_sort(const std::vector<ObjectiveVector>& objectives,
                                                            const ObjectiveSpec& spec) {
  const std::size_t n = objectives.size();
  if (n == 0) throw EmptySetError("cannot sort an empty population");
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::size_t> count(n, 0);
  std::vector<std::vector<std::size_t>> fronts(1);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      if (dominates(objectives[p], objectives[q], spec)) {
        dominated[p].push_back(q);
      } else if (dominates(objectives[q], objectives[p], spec)) {
        ++count[p];
      }
    }
    if (count[p] == 0) fronts[0].push_back(p);
  }
  for (std::size_t r = 0; !fronts[r].empty(); ++r) {
    std::vector<std::size_t> next;
    for (std::size_t p : fronts[r]) {
      for (std::size_t q : dominated[p]) {
        if (--count[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

std::vector<double> crowding_distance(const std::vector<ObjectiveVector>& front, const ObjectiveSpec& spec) {
  const std::size_t n = front.size();
  if (n == 0) throw EmptySetError("crowding distance of an empty front");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, 0.0);
  if (n <= 2) return std::vector<double>(n, kInf);
  std::vector<std::vector<double>> c;
  c.reserve(n);
  for (const auto& y : front) c.push_back(spec.canonical(y));
  std::vector<std::size_t> order(n);
  for (std::size_t k = 0; k < spec.m(); ++k) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return c[a][k] < c[b][k]; });
    const double range = c[order.back()][k] - c[order.front()][k];
    dist[order.front()] = kInf;
    dist[order.back()] = kInf;
    if (!(range > 0.0)) continue;
    for (std::size_t t = 1; t + 1 < n; ++t) {
      dist[order[t]] += (c[order[t + 1]][k] - c[order[t - 1]][k]) / range;
    }
  }
  return dist;
}

namespace {

struct Individual {
  DesignPoint x;
  std::size_t row = 0;
  int rank = 0;
  double crowding = 0.0;
};

class Evaluator {
 public:
  explicit Evaluator(const CandidatePool& pool) : pool_(pool) {}

  void evaluate(Individual& ind) {
    ind.row = pool_.nearest(ind.x);
    ++evaluations_;
    seen_.insert(ind.row);
  }

  std::size_t evaluations() const noexcept { return evaluations_; }
  const std::set<std::size_t>& seen() const noexcept { return seen_; }

 private:
  const CandidatePool& pool_;
  std::size_t evaluations_ = 0;
  std::set<std::size_t> seen_;
};

// Assigns rank and crowding; returns the fronts over `pop` positions.
std::vector<std::vector<std::size_t>> rank_population(std::vector<Individual>& pop, const CandidatePool& pool,
                                                      const ObjectiveSpec& spec) {
  std::vector<ObjectiveVector> objs;
  objs.reserve(pop.size());
  for (const auto& ind : pop) objs.push_back(pool.objectives()[ind.row]);
  auto fronts = fast_nondominated_sort(objs, spec);
  for (std::size_t r = 0; r < fronts.size(); ++r) {
    std::vector<ObjectiveVector> fo;
    for (std::size_t i : fronts[r]) fo.push_back(objs[i]);
    const auto cd = crowding_distance(fo, spec);
    for (std::size_t t = 0; t < fronts[r].size(); ++t) {
      pop[fronts[r][t]].rank = static_cast<int>(r);
      pop[fronts[r][t]].crowding = cd[t];
    }
  }
  return fronts;
}

bool better(const Individual& a, const Individual& b) {
  if (a.rank != b.rank) return a.rank < b.rank;
  return a.crowding > b.crowding;
}

double rank0_hv(const std::vector<Individual>& pop, const CandidatePool& pool, const ObjectiveSpec& spec,
                const ObjectiveNormalizer& normalizer) {
  std::vector<ObjectiveVector> objs;
  for (const auto& ind : pop) objs.push_back(pool.objectives()[ind.row]);
  return normalizer.hypervolume(extract_pareto_front(objs, spec).objectives);
}

}  // namespace

NsgaResult nsga2_run(const CandidatePool& pool, const NsgaConfig& config, const ObjectiveSpec& spec) {
  config.validate();
  if (spec.m() != pool.num_objectives()) throw DimensionError("spec and pool disagree on objective count");
  const std::size_t d = pool.dims();
  const std::size_t n = config.pop_size;
  Rng rng(derive_seed(config.seed, 0x6e736761));
  const ObjectiveNormalizer normalizer(pool.objectives(), spec);
  Evaluator eval(pool);
  NsgaResult result;

  const double gene_rate = 1.0 / static_cast<double>(d);

  std::vector<Individual> pop(n);
  for (auto& ind : pop) {
    ind.x.resize(d);
    for (double& v : ind.x) v = uniform01(rng);
    eval.evaluate(ind);
  }
  rank_population(pop, pool, spec);
  result.generation_hv.push_back(rank0_hv(pop, pool, spec, normalizer));

  auto tournament = [&]() -> const Individual& {
    const Individual& a = pop[rng() % n];
    const Individual& b = pop[rng() % n];
    return better(b, a) ? b : a;
  };

  for (std::size_t gen = 0; gen < config.generations; ++gen) {
    std::vector<Individual> offspring;
    offspring.reserve(n);
    while (offspring.size() < n) {
      Individual c1{tournament().x};
      Individual c2{tournament().x};
      if (uniform01(rng) < config.crossover_rate) {
        for (std::size_t k = 0; k < d; ++k) {
          const double lo = std::min(c1.x[k], c2.x[k]);
          const double hi = std::max(c1.x[k], c2.x[k]);
          const double ext = config.blend_alpha * (hi - lo);
          const double a = lo - ext, span = hi - lo + 2.0 * ext;
          c1.x[k] = std::clamp(a + span * uniform01(rng), 0.0, 1.0);
          c2.x[k] = std::clamp(a + span * uniform01(rng), 0.0, 1.0);
        }
      }
      for (auto* c : {&c1, &c2}) {
        if (uniform01(rng) < config.mutation_rate) {
          for (double& v : c->x) {
            if (uniform01(rng) < gene_rate) v = uniform01(rng);
          }
        }
        eval.evaluate(*c);
        offspring.push_back(std::move(*c));
      }
    }

    std::vector<Individual> merged = std::move(pop);
    merged.insert(merged.end(), std::make_move_iterator(offspring.begin()),
                  std::make_move_iterator(offspring.end()));
    const auto fronts = rank_population(merged, pool, spec);
    std::vector<Individual> next;
    next.reserve(n);
    for (const auto& f : fronts) {
      if (next.size() + f.size() <= n) {
        for (std::size_t i : f) next.push_back(merged[i]);
        continue;
      }
      // Truncate: first copies of each pool row before repeats, then by crowding.
      std::vector<std::size_t> order(f.begin(), f.end());
      std::vector<bool> repeat(merged.size(), false);
      std::set<std::size_t> rows;
      for (std::size_t i : order) repeat[i] = !rows.insert(merged[i].row).second;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (repeat[a] != repeat[b]) return !repeat[a];
        return merged[a].crowding > merged[b].crowding;
      });
      for (std::size_t t = 0; next.size() < n; ++t) next.push_back(merged[order[t]]);
      break;
    }
    pop = std::move(next);
    rank_population(pop, pool, spec);
    result.generation_hv.push_back(rank0_hv(pop, pool, spec, normalizer));
  }

  std::vector<std::size_t> rows(eval.seen().begin(), eval.seen().end());
  std::vector<ObjectiveVector> objs;
  for (std::size_t r : rows) objs.push_back(pool.objectives()[r]);
  result.front = extract_pareto_front(objs, spec);
  for (auto& idx : result.front.indices) {
    result.front.points.push_back(pool.inputs()[rows[idx]]);
    idx = rows[idx];
  }
  const ParetoFront truth = extract_pareto_front(pool.objectives(), spec);
  result.function_evaluations = eval.evaluations();
  result.unique_evaluations = rows.size();
  result.report = evaluate_front(result.front.objectives, truth.objectives, normalizer, spec,
                                 result.unique_evaluations, pool.size());
  return result;
}

}  // namespace seqpareto
