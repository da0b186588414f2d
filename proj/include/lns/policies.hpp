#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lns/model.hpp"
#include "lns/rng.hpp"
#include "lns/solver.hpp"

namespace lns {

// Read-only view of the run state handed to a destroy policy. The rng is the
// only mutable member and is owned by the run.
struct PolicyContext {
  const MipModel* model = nullptr;
  const Solution* incumbent = nullptr;            // x'
  const Solution* root_relaxation = nullptr;      // x~, may be null
  const std::vector<Solution>* pool = nullptr;    // feasible solutions
  const std::vector<int>* predictions = nullptr;  // x_bar per binary, may be null
  const std::vector<int>* oracle_labels = nullptr;  // x* per binary, may be null
  Rng* rng = nullptr;
  SolverBackend* lp_backend = nullptr;  // for LB-RELAX
  double lp_time_limit = 5.0;
  std::vector<int> binaries;  // cached binary index list of the model
};

// tolerance for "x~_i = x'_i" matching tests on reals
inline constexpr double kMatchTol = 1e-6;

// Noise applied to oracle labels: a fixed flip mask drawn once per run, so
// it behaves like one imperfect prediction vector.
struct OracleNoise {
  double error_rate = 0.0;
  std::vector<uint8_t> flipped;  // one per binary index

  static OracleNoise draw(double error_rate, int n_binaries, Rng& rng);
};

enum class OracleMode { Deterministic, Weighted };

// --- policy primitives -----------------------------------------------------
// All hard-fixing policies return exactly k_f entries fixed at the
// incumbent's (rounded) values; the correction pads or trims at random.

NeighbourhoodCut random_policy(PolicyContext& ctx, int k_f);

// nullopt when the required context input is missing (engine falls back)
std::optional<NeighbourhoodCut> rins_policy(PolicyContext& ctx, int k_f);
std::optional<NeighbourhoodCut> crossover_policy(PolicyContext& ctx, int k_f);
std::optional<NeighbourhoodCut> lb_policy(PolicyContext& ctx, double ratio);
std::optional<NeighbourhoodCut> lb_relax_policy(PolicyContext& ctx, double ratio, int k_f);
std::optional<NeighbourhoodCut> slns_policy(PolicyContext& ctx, double m_w, int k_f);

// throws std::invalid_argument when oracle labels are absent
NeighbourhoodCut oracle_policy(PolicyContext& ctx, const OracleNoise& noise, OracleMode mode,
                               double m_w, int k_f);

// Pads with random unfixed binaries at incumbent values or trims uniformly
// at random until |result| == k_f. Not applied to LB or random.
FixingSet correct_fixing_set(FixingSet raw, int k_f, PolicyContext& ctx);

// radius of the local branching ball: max(1, floor((1 - ratio) * k'))
double lb_radius(double k_prime, double ratio);

// --- engine-facing interface ----------------------------------------------

class DestroyPolicy {
 public:
  virtual ~DestroyPolicy() = default;
  virtual std::optional<NeighbourhoodCut> build(PolicyContext& ctx, double ratio, int k_f) = 0;
  virtual std::string_view name() const = 0;
};

class RandomPolicy final : public DestroyPolicy {
 public:
  std::optional<NeighbourhoodCut> build(PolicyContext& ctx, double, int k_f) override {
    return random_policy(ctx, k_f);
  }
  std::string_view name() const override { return "random"; }
};

class RinsPolicy final : public DestroyPolicy {
 public:
  std::optional<NeighbourhoodCut> build(PolicyContext& ctx, double, int k_f) override {
    return rins_policy(ctx, k_f);
  }
  std::string_view name() const override { return "rins"; }
};

class CrossoverPolicy final : public DestroyPolicy {
 public:
  std::optional<NeighbourhoodCut> build(PolicyContext& ctx, double, int k_f) override {
    return crossover_policy(ctx, k_f);
  }
  std::string_view name() const override { return "crossover"; }
};

class LocalBranchingPolicy final : public DestroyPolicy {
 public:
  std::optional<NeighbourhoodCut> build(PolicyContext& ctx, double ratio, int) override {
    return lb_policy(ctx, ratio);
  }
  std::string_view name() const override { return "lb"; }
};

class LbRelaxPolicy final : public DestroyPolicy {
 public:
  std::optional<NeighbourhoodCut> build(PolicyContext& ctx, double ratio, int k_f) override {
    return lb_relax_policy(ctx, ratio, k_f);
  }
  std::string_view name() const override { return "lb-relax"; }
};

class OraclePolicy final : public DestroyPolicy {
 public:
  OraclePolicy(OracleMode mode, double m_w, OracleNoise noise)
      : mode_(mode), m_w_(m_w), noise_(std::move(noise)) {}

  std::optional<NeighbourhoodCut> build(PolicyContext& ctx, double, int k_f) override {
    return oracle_policy(ctx, noise_, mode_, m_w_, k_f);
  }
  std::string_view name() const override {
    return mode_ == OracleMode::Deterministic ? "dolns" : "olns";
  }

 private:
  OracleMode mode_;
  double m_w_;
  OracleNoise noise_;
};

class SlnsPolicy final : public DestroyPolicy {
 public:
  explicit SlnsPolicy(double m_w) : m_w_(m_w) {}

  std::optional<NeighbourhoodCut> build(PolicyContext& ctx, double, int k_f) override {
    return slns_policy(ctx, m_w_, k_f);
  }
  std::string_view name() const override { return "slns"; }

 private:
  double m_w_;
};

}  // namespace lns
