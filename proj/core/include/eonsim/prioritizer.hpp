#pragma once

#include <span>
#include <vector>

#include "eonsim/spectrum.hpp"

namespace eonsim {

// One service knocked out by a link failure, as seen by the restoration
// scheduler. detection_rank is the position in which the failure sweep
// discovered it and is unique within a batch.
struct DisruptedService {
  ServiceId id = kNoService;
  int bit_rate_gbps = 0;
  int priority = 1;        // 1..3
  double remaining_s = 0;  // departure time minus failure time, > 0
  int detection_rank = 0;
};

struct NormalizedTriple {
  double b = 0;  // bit rate share
  double t = 0;  // remaining holding time share
  double p = 0;  // priority share
};

// Weights over (bit rate, remaining time, priority) constrained to
//   w_b + w_t + w_p = 1,   w_p >= w_b + w_t,   w_b >= w_t,   all >= 0.
struct WeightVector {
  double w_b = 0;
  double w_t = 0;
  double w_p = 0;

  bool operator==(const WeightVector&) const = default;
};

struct NormalizationConfig {
  double bitrate_divisor = 400.0;
  double priority_divisor = 3.0;
};

// Optional per-batch trace of the weight optimization.
struct PrioritizerDebug {
  double sum_b = 0, sum_t = 0, sum_p = 0;
  int chosen_vertex = 0;  // 1..3
  WeightVector weights;
  std::vector<double> scores;  // aligned with the input batch
};

// b = bit_rate / divisor, p = priority / divisor, t = remaining time
// relative to the largest remaining time in the batch.
std::vector<NormalizedTriple> normalize(std::span<const DisruptedService> batch,
                                        const NormalizationConfig& cfg = {});

// Maximizes sum_b*w_b + sum_t*w_t + sum_p*w_p over the constraint set.
// The feasible region is a triangle with vertices (0,0,1), (0.5,0,0.5),
// (0.25,0.25,0.5); the optimum sits on one of them, preferred in that
// order on ties.
WeightVector solve_weights(std::span<const NormalizedTriple> triples);

// Weighted-sum ordering, highest score first, detection rank breaking
// score ties.
std::vector<ServiceId> rank_fdsp(std::span<const DisruptedService> batch,
                                 const NormalizationConfig& cfg = {},
                                 PrioritizerDebug* debug = nullptr);

// Baseline: serve in the order services were detected as disrupted.
std::vector<ServiceId> rank_fdfs(std::span<const DisruptedService> batch);

}  // namespace eonsim
