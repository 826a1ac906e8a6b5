#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hcforge/instance.hpp"
#include "hcforge/partition.hpp"
#include "hcforge/rng.hpp"
#include "hcforge/tree.hpp"

namespace hcforge {

struct EprasConfig {
  double eps = 0.5;
  double delta = 0.1;
  double rho = 0.5;   // density parameters; the guarantee is conditioned on
  double tau = 0.5;   // not_all_small(rho, tau), the run is not
  PartitionBackend backend = PartitionBackend::Exact;
  double candidate_budget = 1e7;  // refuse grids larger than this
  double exact_budget = 5e8;      // assignment-state cap for the exact backend
  int max_internal_override = 0;  // 0 keeps the 20*k cap

  int k() const;                  // ceil(1/eps) buckets
  double eps_err() const;         // eps^3
  int max_sketch_internal() const;
  void check() const;
};

// A rooted shape whose leaves are bucket slots; internal nodes have >= 2
// children. Slots are numbered left to right in the canonical form.
struct SketchShape {
  struct SNode {
    int parent = -1;
    std::vector<int> children;
    int slot = -1;  // >= 0 marks a bucket slot (always a leaf of the shape)
  };
  std::vector<SNode> nodes;
  int root = -1;
  std::vector<int> slot_nodes;  // node id per slot index

  int slot_count() const { return static_cast<int>(slot_nodes.size()); }
  int internal_count() const;
  int max_arity() const;
  std::string canon() const;

  static SketchShape parse(const std::string& canon_text);
  // Single bucket slot as the root (the degenerate shape).
  static SketchShape lone_slot();
};

// Every isomorphism class of shapes with <= max_internal internal nodes and
// 2..max_buckets slots, exactly once, ordered by (slot count, canonical
// form). binary_only keeps shapes whose internal nodes all have arity 2.
std::vector<SketchShape> enumerate_sketch_shapes(int max_internal, int max_buckets,
                                                 bool binary_only = false);

// Sketch-level revenue: sum over slot pairs of beta_ij times the alpha-mass
// outside the subtree of the slots' LCA; the diagonal pairs the bucket's
// weight with the mass outside the slot itself.
double eval_sketch_revenue(const SketchShape& shape, std::span<const double> alpha,
                           std::span<const double> beta);

// Sketch-level dissimilarity: alpha-mass inside the LCA subtree; within-slot
// terms are dropped (b = 0).
double eval_sketch_dissimilarity(const SketchShape& shape, std::span<const double> alpha,
                                 std::span<const double> beta);

// Per-found-candidate record for the estimate-deviation accounting.
struct CandidateRecord {
  std::string shape;
  std::vector<double> alpha;          // grid targets
  std::vector<double> beta;           // grid targets
  std::vector<double> actual_sizes;   // from the found assignment
  std::vector<double> actual_weights;
  double estimate_target = 0.0;  // sketch formula at the grid values
  double estimate_actual = 0.0;  // sketch formula at the measured values
  double raw_value = 0.0;        // true objective of the materialized tree
  double scored_value = 0.0;     // true objective after binarization
};
using CandidateObserver = std::function<void(const CandidateRecord&)>;

struct EprasResult {
  HcTree tree;
  double value = 0.0;           // true objective of the returned tree
  double baseline_value = 0.0;  // average-linkage baseline on the channel
  long long candidates_tried = 0;
  long long candidates_found = 0;
  bool not_all_small_ok = true;
  std::string case_applied;   // hcc_pm: "sim" or "dis"; metric_shift extras
  double shifted_value = 0.0;  // metric_shift: value under shifted weights
};

// Enumerates shapes x alpha grids (last bucket takes the residual) x beta
// grids, queries the partition oracle, materializes found candidates
// (revenue: star auxiliaries; dissimilarity: seeded combs), scores the
// binarized tree by the true objective, and returns the argmax; the
// average-linkage tree always participates as a candidate. Ties break by
// canonical serialization.
EprasResult revenue_epras(const Instance& inst, const EprasConfig& cfg, Rng& rng,
                          const CandidateObserver& observer = {});
EprasResult dissimilarity_epras(const Instance& inst, const EprasConfig& cfg, Rng& rng,
                                const CandidateObserver& observer = {});

// Complementary-weight driver: runs both schemes and keeps the tree with the
// higher hcc. Requires w^d = 1 - w^s off-diagonal.
EprasResult hcc_pm(const Instance& inst, const EprasConfig& cfg, Rng& rng);

// Adds shift_eps to all similarity weights (clamped at 1), runs the revenue
// scheme on the shifted instance with rho = 1 and tau = shift_eps, and
// reports the returned tree's revenue under the original weights.
EprasResult metric_shift(const Instance& inst, double shift_eps, const EprasConfig& cfg,
                         Rng& rng);

// Upfront candidate count for the budget guard (shapes x alpha x beta).
double epras_candidate_count(int n, const EprasConfig& cfg, bool binary_only);

}  // namespace hcforge
