#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "sia/model.hpp"

namespace sia::detail {

/// Integer form of the capacity constraint: every consumption factor
/// (1 + a[i][j][k]) and capacity is multiplied by the least common multiple
/// of the factor denominators, so comparisons stay exact in int64.
struct ScaledConsumption {
  std::int64_t scale = 1;
  int num_services = 0;
  int num_resources = 0;
  std::vector<std::int64_t> weights;  // [i][j][k], empty when scale == 1 and no overhead

  std::int64_t weight(int i, int j, int k) const {
    if (weights.empty()) return 1;
    return weights[(static_cast<std::size_t>(i) * static_cast<std::size_t>(num_services) + static_cast<std::size_t>(j)) *
                       static_cast<std::size_t>(num_resources) +
                   static_cast<std::size_t>(k)];
  }
};

inline ScaledConsumption scale_consumption(const Instance& inst) {
  ScaledConsumption s;
  s.num_services = inst.num_services();
  s.num_resources = inst.num_resources();
  if (!inst.has_overhead()) return s;
  for (int i = 0; i < inst.num_interfaces(); ++i) {
    for (int j = 0; j < inst.num_services(); ++j) {
      for (int k = 0; k < inst.num_resources(); ++k) {
        s.scale = std::lcm(s.scale, inst.overhead(i, j, k).denominator());
      }
    }
  }
  for (int i = 0; i < inst.num_interfaces(); ++i) {
    for (int j = 0; j < inst.num_services(); ++j) {
      for (int k = 0; k < inst.num_resources(); ++k) {
        const Rational w = inst.consumption_factor(i, j, k) * s.scale;
        s.weights.push_back(w.numerator());
      }
    }
  }
  return s;
}

}  // namespace sia::detail
