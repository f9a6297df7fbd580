#include "eonsim/prioritizer.hpp"

#include <algorithm>
#include <numeric>

#include "eonsim/errors.hpp"

namespace eonsim {

std::vector<NormalizedTriple> normalize(std::span<const DisruptedService> batch,
                                        const NormalizationConfig& cfg) {
  if (batch.empty()) throw ContractViolation("normalize: empty batch");
  if (cfg.bitrate_divisor <= 0 || cfg.priority_divisor <= 0) {
    throw ValidationError("normalize: divisors must be positive");
  }
  double max_remaining = 0;
  for (const DisruptedService& s : batch) {
    if (s.remaining_s <= 0) {
      throw ContractViolation("normalize: non-positive remaining time");
    }
    max_remaining = std::max(max_remaining, s.remaining_s);
  }
  std::vector<NormalizedTriple> out;
  out.reserve(batch.size());
  for (const DisruptedService& s : batch) {
    out.push_back({s.bit_rate_gbps / cfg.bitrate_divisor,
                   s.remaining_s / max_remaining,
                   s.priority / cfg.priority_divisor});
  }
  return out;
}

WeightVector solve_weights(std::span<const NormalizedTriple> triples) {
  if (triples.empty()) throw ContractViolation("solve_weights: empty input");
  double sum_b = 0, sum_t = 0, sum_p = 0;
  for (const NormalizedTriple& n : triples) {
    sum_b += n.b;
    sum_t += n.t;
    sum_p += n.p;
  }
  // Linear objective over a triangle: evaluate the three vertices and take
  // the best, keeping the earlier vertex on ties.
  static constexpr WeightVector kVertices[3] = {
      {0.0, 0.0, 1.0}, {0.5, 0.0, 0.5}, {0.25, 0.25, 0.5}};
  WeightVector best = kVertices[0];
  double best_value = sum_p;
  for (int v = 1; v < 3; ++v) {
    const WeightVector& w = kVertices[v];
    const double value = sum_b * w.w_b + sum_t * w.w_t + sum_p * w.w_p;
    if (value > best_value) {
      best_value = value;
      best = w;
    }
  }
  return best;
}

std::vector<ServiceId> rank_fdsp(std::span<const DisruptedService> batch,
                                 const NormalizationConfig& cfg,
                                 PrioritizerDebug* debug) {
  const auto triples = normalize(batch, cfg);
  const WeightVector w = solve_weights(triples);

  std::vector<double> scores(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    scores[i] = w.w_b * triples[i].b + w.w_t * triples[i].t + w.w_p * triples[i].p;
  }

  std::vector<std::size_t> order(batch.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (scores[x] != scores[y]) return scores[x] > scores[y];
    return batch[x].detection_rank < batch[y].detection_rank;
  });

  if (debug != nullptr) {
    debug->sum_b = debug->sum_t = debug->sum_p = 0;
    for (const NormalizedTriple& n : triples) {
      debug->sum_b += n.b;
      debug->sum_t += n.t;
      debug->sum_p += n.p;
    }
    debug->weights = w;
    debug->chosen_vertex = w == WeightVector{0.0, 0.0, 1.0}  ? 1
                           : w == WeightVector{0.5, 0.0, 0.5} ? 2
                                                              : 3;
    debug->scores = scores;
  }

  std::vector<ServiceId> ids;
  ids.reserve(order.size());
  for (std::size_t i : order) ids.push_back(batch[i].id);
  return ids;
}

std::vector<ServiceId> rank_fdfs(std::span<const DisruptedService> batch) {
  if (batch.empty()) throw ContractViolation("rank_fdfs: empty batch");
  std::vector<std::size_t> order(batch.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return batch[x].detection_rank < batch[y].detection_rank;
  });
  std::vector<ServiceId> ids;
  ids.reserve(order.size());
  for (std::size_t i : order) ids.push_back(batch[i].id);
  return ids;
}

}  // namespace eonsim
