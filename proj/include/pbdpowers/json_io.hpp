#pragma once

// JSON forms of the library types and the instance file format.
//
// Instance files carry a "kind":
//   explicit   {"probs": [...]}  or  {"left": [...], "right": [...]}
//   separated  {"nu", "kappa", "m", "n", "a": [...]}  or  {"c", "s", "alpha": [...], "alpha_max"?}
//   chebyshev  {"n"}
//   fano       {"n", "N"}

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pbdpowers/core.hpp"
#include "pbdpowers/divergences.hpp"
#include "pbdpowers/errors.hpp"
#include "pbdpowers/instances.hpp"
#include "pbdpowers/learner_separated.hpp"
#include "pbdpowers/oracle.hpp"

namespace pbdpowers {

using json = nlohmann::json;

// JSON has no infinity; it is written as the string "inf".
inline json number_or_inf(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline json to_json(const ProbVector& pv) {
  return json{{"probs", std::vector<double>(pv.probs().begin(), pv.probs().end())}};
}

inline json to_json(const DiscretePMF& f) {
  return json{{"mass", std::vector<double>(f.mass().begin(), f.mass().end())}};
}

inline json to_json(const DistanceReport& d) {
  return json{{"tvd", d.tvd}, {"kl", number_or_inf(d.kl)}, {"hellinger", d.hellinger}};
}

inline json to_json(const Ledger& ledger) {
  json powers = json::array();
  for (const LedgerEntry& e : ledger.entries()) powers.push_back({{"k", e.power}, {"count", e.count}});
  return json{{"powers", powers}, {"total", ledger.total()}};
}

namespace detail {

inline ProbVector vector_field(const json& j, const char* op) {
  try {
    if (j.is_array()) return ProbVector(j.get<std::vector<double>>());
    if (j.is_object() && j.contains("probs")) return ProbVector(j.at("probs").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw PreconditionError(std::string(op) + ": " + e.what());
  }
  throw PreconditionError(std::string(op) + ": expected an array or {\"probs\": [...]}");
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw PreconditionError(std::string("instance: missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("instance: bad field \"") + key + "\": " + e.what());
  }
}

}  // namespace detail

inline ProbVector prob_vector_from_json(const json& j) { return detail::vector_field(j, "ProbVector"); }

inline DiscretePMF pmf_from_json(const json& j) {
  try {
    return DiscretePMF(j.at("mass").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("DiscretePMF: ") + e.what());
  }
}

inline std::string instance_kind(const json& j) {
  if (!j.is_object()) throw PreconditionError("instance: expected a JSON object");
  if (!j.contains("kind")) return j.contains("probs") ? "explicit" : "";
  return detail::field<std::string>(j, "kind");
}

/// The single vector an instance describes (explicit with "probs", or separated).
inline ProbVector instance_vector(const json& j) {
  const std::string kind = instance_kind(j);
  if (kind == "explicit") return detail::vector_field(j, "instance");
  if (kind == "separated") {
    if (j.contains("c")) {
      std::optional<int> amax;
      if (j.contains("alpha_max")) amax = detail::field<int>(j, "alpha_max");
      const auto spec = make_separated_instance(detail::field<double>(j, "c"), detail::field<int>(j, "s"),
                                                detail::field<std::vector<int>>(j, "alpha"), amax);
      detail::require(spec.pub.n <= kReportOrderCap, "instance: separated class order above 10^4");
      return spec.vector();
    }
    return separated_vector(detail::field<int>(j, "nu"), detail::field<std::int64_t>(j, "kappa"),
                            detail::field<int>(j, "m"), detail::field<std::size_t>(j, "n"),
                            detail::field<std::vector<int>>(j, "a"));
  }
  throw PreconditionError("instance: kind \"" + kind + "\" does not describe a single vector");
}

/// Pairs to compare. A single vector is paired with the binomial of equal mean.
inline std::vector<InstancePair> instance_pairs(const json& j) {
  const std::string kind = instance_kind(j);
  if (kind == "chebyshev") return {chebyshev_pair(detail::field<std::size_t>(j, "n"))};
  if (kind == "fano") {
    const FanoTriple t = fano_binomial_triple(detail::field<std::size_t>(j, "n"), detail::field<std::size_t>(j, "N"));
    std::vector<InstancePair> out;
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) {
        out.emplace_back(t.members[a].as_vector(), t.members[b].as_vector(),
                         "fano-" + std::to_string(a + 1) + "-" + std::to_string(b + 1));
      }
    }
    return out;
  }
  if (kind == "explicit" && j.contains("left")) {
    return {InstancePair(detail::vector_field(j.at("left"), "instance.left"),
                         detail::vector_field(j.at("right"), "instance.right"), "explicit")};
  }
  if (kind == "explicit" || kind == "separated") {
    ProbVector v = instance_vector(j);
    const double p = mean_var(v).mean / static_cast<double>(v.order());
    ProbVector b = ProbVector::constant(v.order(), p);
    return {InstancePair(std::move(v), std::move(b), kind + "-vs-binomial")};
  }
  throw PreconditionError("instance: unknown kind \"" + kind + "\"");
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw PreconditionError(path + ": " + e.what());
  }
}

}  // namespace pbdpowers
