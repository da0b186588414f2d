#include "lns/policies.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace lns {

namespace {

int incumbent_value(const PolicyContext& ctx, int index) {
  return static_cast<int>(std::round(ctx.incumbent->values[index]));
}

// k_f distinct elements of pool, uniformly, by partial Fisher-Yates
std::vector<int> sample_without_replacement(std::vector<int> pool, int k, Rng& rng) {
  const int n = static_cast<int>(pool.size());
  for (int t = 0; t < k; ++t) {
    const int j = t + rng.uniform_int(n - t);
    std::swap(pool[t], pool[j]);
  }
  pool.resize(k);
  return pool;
}

FixingSet fix_at_incumbent(const PolicyContext& ctx, const std::vector<int>& indices) {
  FixingSet fs;
  fs.entries.reserve(indices.size());
  for (int i : indices) fs.entries.push_back({i, incumbent_value(ctx, i)});
  return fs;
}

// sequential weighted sampling without replacement, renormalizing after
// each draw
std::vector<int> weighted_sample(const std::vector<int>& indices, std::vector<double> weights,
                                 int k, Rng& rng) {
  std::vector<int> remaining(indices);
  std::vector<int> out;
  out.reserve(k);
  for (int t = 0; t < k; ++t) {
    double total = 0.0;
    for (double w : weights) total += w;
    double u = rng.uniform01() * total;
    size_t pick = remaining.size() - 1;
    for (size_t i = 0; i < remaining.size(); ++i) {
      u -= weights[i];
      if (u < 0.0) {
        pick = i;
        break;
      }
    }
    out.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + pick);
    weights.erase(weights.begin() + pick);
  }
  return out;
}

}  // namespace

OracleNoise OracleNoise::draw(double error_rate, int n_binaries, Rng& rng) {
  OracleNoise noise;
  noise.error_rate = error_rate;
  noise.flipped.resize(n_binaries);
  for (int i = 0; i < n_binaries; ++i) noise.flipped[i] = rng.bernoulli(error_rate) ? 1 : 0;
  return noise;
}

double lb_radius(double k_prime, double ratio) {
  return std::max(1.0, std::floor((1.0 - ratio) * k_prime));
}

NeighbourhoodCut random_policy(PolicyContext& ctx, int k_f) {
  if (k_f > static_cast<int>(ctx.binaries.size()))
    throw std::invalid_argument("k_f exceeds the number of binaries");
  const std::vector<int> picked = sample_without_replacement(ctx.binaries, k_f, *ctx.rng);
  return NeighbourhoodCut::hard_fix(fix_at_incumbent(ctx, picked));
}

FixingSet correct_fixing_set(FixingSet raw, int k_f, PolicyContext& ctx) {
  const int size = raw.size();
  if (size > k_f) {
    // keep a uniform random subset of k_f entries
    std::vector<int> order(size);
    for (int i = 0; i < size; ++i) order[i] = i;
    order = sample_without_replacement(std::move(order), k_f, *ctx.rng);
    std::sort(order.begin(), order.end());
    FixingSet trimmed;
    trimmed.entries.reserve(k_f);
    for (int i : order) trimmed.entries.push_back(raw.entries[i]);
    return trimmed;
  }
  if (size < k_f) {
    std::unordered_set<int> used;
    for (const FixEntry& e : raw.entries) used.insert(e.index);
    std::vector<int> candidates;
    for (int i : ctx.binaries)
      if (!used.count(i)) candidates.push_back(i);
    const std::vector<int> extra =
        sample_without_replacement(std::move(candidates), k_f - size, *ctx.rng);
    for (int i : extra) raw.entries.push_back({i, incumbent_value(ctx, i)});
  }
  return raw;
}

std::optional<NeighbourhoodCut> rins_policy(PolicyContext& ctx, int k_f) {
  if (ctx.root_relaxation == nullptr) return std::nullopt;
  FixingSet raw;
  for (int i : ctx.binaries) {
    if (std::abs(ctx.root_relaxation->values[i] - ctx.incumbent->values[i]) <= kMatchTol)
      raw.entries.push_back({i, incumbent_value(ctx, i)});
  }
  return NeighbourhoodCut::hard_fix(correct_fixing_set(std::move(raw), k_f, ctx));
}

std::optional<NeighbourhoodCut> crossover_policy(PolicyContext& ctx, int k_f) {
  if (ctx.pool == nullptr || ctx.pool->size() < 2) return std::nullopt;
  // two best-objective distinct pool members
  std::vector<const Solution*> sorted;
  sorted.reserve(ctx.pool->size());
  for (const Solution& s : *ctx.pool) sorted.push_back(&s);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Solution* a, const Solution* b) { return a->objective < b->objective; });
  const Solution* first = sorted[0];
  const Solution* second = nullptr;
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->values != first->values) {
      second = sorted[i];
      break;
    }
  }
  if (second == nullptr) return std::nullopt;

  FixingSet raw;
  for (int i : ctx.binaries) {
    if (std::abs(first->values[i] - second->values[i]) <= kMatchTol)
      raw.entries.push_back({i, incumbent_value(ctx, i)});
  }
  return NeighbourhoodCut::hard_fix(correct_fixing_set(std::move(raw), k_f, ctx));
}

std::optional<NeighbourhoodCut> lb_policy(PolicyContext& ctx, double ratio) {
  if (ctx.root_relaxation == nullptr) return std::nullopt;
  const double k_prime = l1_distance(*ctx.incumbent, *ctx.root_relaxation, ctx.binaries);
  return NeighbourhoodCut::soft_lb(*ctx.incumbent, lb_radius(k_prime, ratio));
}

std::optional<NeighbourhoodCut> lb_relax_policy(PolicyContext& ctx, double ratio, int k_f) {
  if (ctx.lp_backend == nullptr || ctx.root_relaxation == nullptr) return std::nullopt;

  const double k_prime = l1_distance(*ctx.incumbent, *ctx.root_relaxation, ctx.binaries);
  const NeighbourhoodCut ball =
      NeighbourhoodCut::soft_lb(*ctx.incumbent, lb_radius(k_prime, ratio));
  // cut first (it spans the binaries), relax second
  const MipModel cut_lp = relax(apply_cut(*ctx.model, ball));

  BackendConfig cfg;
  cfg.time_limit = ctx.lp_time_limit;
  const SolveOutcome lp = ctx.lp_backend->solve_lp(cut_lp, cfg);
  if (lp.status != SolveStatus::Optimal || !lp.best) return std::nullopt;

  FixingSet raw;
  for (int i : ctx.binaries) {
    const double delta = std::abs(lp.best->values[i] - ctx.incumbent->values[i]);
    if (delta <= kMatchTol) raw.entries.push_back({i, incumbent_value(ctx, i)});
  }
  return NeighbourhoodCut::hard_fix(correct_fixing_set(std::move(raw), k_f, ctx));
}

NeighbourhoodCut oracle_policy(PolicyContext& ctx, const OracleNoise& noise, OracleMode mode,
                               double m_w, int k_f) {
  if (ctx.oracle_labels == nullptr)
    throw std::invalid_argument("oracle policy requires oracle labels");
  const std::vector<int>& labels = *ctx.oracle_labels;
  if (labels.size() != ctx.binaries.size())
    throw std::invalid_argument("oracle labels must have one entry per binary");

  // effective label after the per-run noise mask
  std::vector<int> effective(labels.size());
  for (size_t k = 0; k < labels.size(); ++k) {
    const int flip = k < noise.flipped.size() ? noise.flipped[k] : 0;
    effective[k] = labels[k] ^ flip;
  }

  if (mode == OracleMode::Deterministic) {
    FixingSet raw;
    for (size_t k = 0; k < ctx.binaries.size(); ++k) {
      const int i = ctx.binaries[k];
      if (incumbent_value(ctx, i) == effective[k]) raw.entries.push_back({i, effective[k]});
    }
    return NeighbourhoodCut::hard_fix(correct_fixing_set(std::move(raw), k_f, ctx));
  }

  // weighted mode delegates to the SLNS sampler with the noisy labels as
  // the prediction vector
  std::vector<double> weights(ctx.binaries.size());
  for (size_t k = 0; k < ctx.binaries.size(); ++k)
    weights[k] = incumbent_value(ctx, ctx.binaries[k]) == effective[k] ? m_w : 1.0;
  const std::vector<int> picked = weighted_sample(ctx.binaries, std::move(weights), k_f, *ctx.rng);
  return NeighbourhoodCut::hard_fix(fix_at_incumbent(ctx, picked));
}

std::optional<NeighbourhoodCut> slns_policy(PolicyContext& ctx, double m_w, int k_f) {
  if (ctx.predictions == nullptr) return std::nullopt;
  const std::vector<int>& pred = *ctx.predictions;
  if (pred.size() != ctx.binaries.size())
    throw std::invalid_argument("predictions must have one entry per binary");
  if (m_w < 1.0) throw std::invalid_argument("weight multiplier must be >= 1");

  std::vector<double> weights(ctx.binaries.size());
  for (size_t k = 0; k < ctx.binaries.size(); ++k)
    weights[k] = incumbent_value(ctx, ctx.binaries[k]) == pred[k] ? m_w : 1.0;
  const std::vector<int> picked = weighted_sample(ctx.binaries, std::move(weights), k_f, *ctx.rng);
  return NeighbourhoodCut::hard_fix(fix_at_incumbent(ctx, picked));
}

}  // namespace lns
