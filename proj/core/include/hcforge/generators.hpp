#pragma once

#include <string>
#include <vector>

#include "hcforge/instance.hpp"
#include "hcforge/objectives.hpp"
#include "hcforge/rng.hpp"

namespace hcforge {

// Each pair gets w^s ~ U[0,1] with the given probability, else 0. The
// complementary flag forces w^d = 1 - w^s on every pair; otherwise w^d is
// drawn independently by the same rule.
Instance random_instance(int n, double density, bool complementary, Rng& rng);

enum class SimilarityFn { Gaussian, LinearRamp, Inverse };

struct MetricConfig {
  std::vector<std::vector<double>> points;     // coordinate vectors, or
  std::vector<std::vector<double>> distances;  // an explicit distance matrix
  SimilarityFn similarity = SimilarityFn::LinearRamp;
  double sigma = 1.0;             // gaussian: exp(-d^2 / sigma^2)
  bool diameter_normalize = false;  // scale so the max distance is 1
  // metadata for the covering-constant report; not derived from the data
  double doubling_dimension = 1.0;
  double lipschitz = 1.0;
};

// Similarity weights w_ij = g(d_ij) on the (optionally normalized)
// distances; the dissimilarity channel stays zero. Triangle-inequality
// violations on explicit matrices are reported through the warnings output
// but do not fail generation.
Instance metric_instance(const MetricConfig& cfg, std::vector<std::string>* warnings = nullptr);

double similarity_value(SimilarityFn fn, double sigma, double d);

// Covering constant c = 2^{D(l+1)} / g(2^{-l}) from the declared metadata.
double metric_proof_constant(const MetricConfig& cfg);

// Appends a disconnected unit clique of n extra points on the sim channel.
Instance clique_augment(const Instance& inst);

// Appends a disconnected path of path_len extra points with unit weight on
// consecutive pairs. path_len <= 0 requests the n^2 default.
Instance path_augment(const Instance& inst, long long path_len = 0);

// Complement transform: the output's opposite channel gets 1 - w
// off-diagonal from the source channel (default: sim in, dis out). Applying
// it again with source = Dis returns the original instance.
Instance complement_instance(const Instance& inst, Channel source = Channel::Sim);

}  // namespace hcforge
