#pragma once

// Sample access to the powers of a hidden PBD, with a per-power ledger.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pbdpowers/core.hpp"
#include "pbdpowers/errors.hpp"
#include "pbdpowers/rng.hpp"

namespace pbdpowers {

struct LedgerEntry {
  double power = 0.0;
  std::uint64_t count = 0;
};

/// Cumulative sample counts keyed by the exact bit pattern of the power.
class Ledger {
 public:
  void record(double k, std::uint64_t count) {
    auto& e = entries_[power_bits(k)];
    e.power = k;
    e.count += count;
    total_ += count;
  }

  std::uint64_t count_at(double k) const {
    const auto it = entries_.find(power_bits(k));
    return it == entries_.end() ? 0 : it->second.count;
  }

  // Ascending in k (bit patterns of positive doubles sort like the values).
  std::vector<LedgerEntry> entries() const {
    std::vector<LedgerEntry> out;
    out.reserve(entries_.size());
    for (const auto& [bits, e] : entries_) out.push_back(e);
    return out;
  }

  std::size_t powers_queried() const noexcept { return entries_.size(); }
  std::uint64_t total() const noexcept { return total_; }

 private:
  std::map<std::uint64_t, LedgerEntry> entries_;
  std::uint64_t total_ = 0;
};

/// The query model: a learner may draw independent samples from any power
/// P_k of the hidden PBD. The hidden vector is never handed back out.
///
/// Draw number j at power k (counting from zero over the oracle's lifetime)
/// is an inverse-CDF lookup with one uniform from the sub-stream
/// mix_stream(seed, bits(k), j), so values at a given power do not depend on
/// how queries at other powers are interleaved. Histogram queries larger than
/// kHistogramDirectLimit(n) are drawn as one multinomial from the sub-stream
/// mix_stream(seed ^ kHistogramTag, bits(k), first index).
class PowerOracle {
 public:
  static constexpr std::uint64_t kHistogramTag = 0x5bd1e9955bd1e995ULL;

  PowerOracle(ProbVector hidden, std::uint64_t seed, std::optional<std::uint64_t> budget = std::nullopt)
      : hidden_(std::move(hidden)), seed_(seed), budget_(budget) {}

  std::size_t order() const noexcept { return hidden_.order(); }
  std::uint64_t seed() const noexcept { return seed_; }
  std::optional<std::uint64_t> budget() const noexcept { return budget_; }
  const Ledger& ledger() const noexcept { return ledger_; }
  std::uint64_t total() const noexcept { return ledger_.total(); }

  std::vector<int> query(double k, std::uint64_t count) {
    const std::uint64_t first = reserve(k, count);
    const PmfSampler& sampler = sampler_for(k);
    const std::uint64_t bits = power_bits(k);
    std::vector<int> out;
    out.reserve(count);
    for (std::uint64_t j = 0; j < count; ++j) {
      Xoshiro256 rng(mix_stream(seed_, bits, first + j));
      out.push_back(static_cast<int>(sampler.draw(rng)));
    }
    return out;
  }

  SampleHistogram query_histogram(double k, std::uint64_t count) {
    const std::uint64_t first = reserve(k, count);
    const PmfSampler& sampler = sampler_for(k);
    const std::uint64_t bits = power_bits(k);
    if (count <= histogram_direct_limit()) {
      SampleHistogram h(order());
      for (std::uint64_t j = 0; j < count; ++j) {
        Xoshiro256 rng(mix_stream(seed_, bits, first + j));
        h.add(sampler.draw(rng));
      }
      return h;
    }
    Xoshiro256 rng(mix_stream(seed_ ^ kHistogramTag, bits, first));
    return sampler.multinomial(rng, count);
  }

  std::uint64_t histogram_direct_limit() const noexcept { return 4 * (order() + 1); }

 private:
  std::uint64_t reserve(double k, std::uint64_t count) {
    if (!(k > 0.0) || !std::isfinite(k)) throw InvalidPower("query: power must be a positive real");
    detail::require(count >= 1, "query: count must be at least 1");
    if (budget_ && (ledger_.total() > *budget_ || count > *budget_ - ledger_.total())) {
      throw BudgetExhausted("query: sample budget of " + std::to_string(*budget_) + " would be exceeded");
    }
    const std::uint64_t first = ledger_.count_at(k);
    ledger_.record(k, count);
    return first;
  }

  const PmfSampler& sampler_for(double k) {
    const std::uint64_t bits = power_bits(k);
    auto it = samplers_.find(bits);
    if (it == samplers_.end()) it = samplers_.emplace(bits, PmfSampler(pmf_of_pbd(power(hidden_, k)))).first;
    return it->second;
  }

  ProbVector hidden_;
  std::uint64_t seed_;
  std::optional<std::uint64_t> budget_;
  Ledger ledger_;
  std::map<std::uint64_t, PmfSampler> samplers_;
};

/// Anything that yields batches of draws over {0, ..., order()}.
template <class S>
concept SampleSource = requires(S& s, std::uint64_t count) {
  { s.order() } -> std::convertible_to<std::size_t>;
  { s.histogram(count) } -> std::same_as<SampleHistogram>;
};

/// A single power of an oracle, seen as a sample source.
class PowerSource {
 public:
  PowerSource(PowerOracle& oracle, double k) : oracle_(&oracle), k_(k) {}
  std::size_t order() const noexcept { return oracle_->order(); }
  double power() const noexcept { return k_; }
  SampleHistogram histogram(std::uint64_t count) { return oracle_->query_histogram(k_, count); }

 private:
  PowerOracle* oracle_;
  double k_;
};

}  // namespace pbdpowers
