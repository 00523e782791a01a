#pragma once

// Hard instances behind the lower bounds, and exact-PMF reports comparing
// the powers of two PBDs.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "pbdpowers/core.hpp"
#include "pbdpowers/divergences.hpp"
#include "pbdpowers/errors.hpp"

namespace pbdpowers {

inline constexpr std::size_t kReportOrderCap = 10'000;

struct InstancePair {
  ProbVector left;
  ProbVector right;
  std::string label;

  InstancePair(ProbVector l, ProbVector r, std::string name)
      : left(std::move(l)), right(std::move(r)), label(std::move(name)) {
    detail::require(left.order() == right.order(), "InstancePair: orders differ");
  }
};

/// m groups of n/m equal entries; group i (1-based) holds 1 - a_i / kappa^i.
ProbVector separated_vector(int nu, std::int64_t kappa, int m, std::size_t n, const std::vector<int>& a);

/// p_j = (1 + cos(2 pi j / n)) / 8 and q_j = (1 + cos((2 pi j + pi) / n)) / 8.
/// Their first n-1 power sums coincide.
InstancePair chebyshev_pair(std::size_t n);

struct FanoTriple {
  double delta = 0.0;
  std::array<BinomialSpec, 3> members;
};

/// B(n, 1/2), B(n, 1/2 + delta/4), B(n, 1/2 + delta/2) with delta = 1/sqrt(nN).
FanoTriple fano_binomial_triple(std::size_t n, std::size_t N);

struct PowerRow {
  double power = 0.0;
  DistanceReport distances;
};

/// Exact distances between the k-th powers of the pair, one row per k.
std::vector<PowerRow> indistinguishability_report(const InstancePair& pair, const std::vector<double>& powers);

}  // namespace pbdpowers
