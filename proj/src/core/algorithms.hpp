#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "potential.hpp"

namespace wfalab {

struct AlgorithmConfig {
  enum class Kind { kWfa, kGreedy, kRetrospective };
  Kind kind = Kind::kWfa;
  Rational lambda{1};  // WFA only, in (0,1]

  static AlgorithmConfig wfa(Rational lambda);
  static AlgorithmConfig greedy() { return {Kind::kGreedy, 0}; }
  static AlgorithmConfig retrospective() { return {Kind::kRetrospective, 0}; }

  bool is_wfa() const noexcept { return kind == Kind::kWfa; }
  // "wfa:1/2", "greedy", "retrospective"; parse accepts the same forms.
  std::string name() const;
  static AlgorithmConfig parse(std::string_view text);

  friend bool operator==(const AlgorithmConfig&, const AlgorithmConfig&) = default;
};

struct StepRecord {
  std::size_t index = 0;  // 1-based request number
  RequestPoint request;
  ProductPoint position_before;
  ProductPoint position_after;
  Rational move_cost;
  bool tie = false;  // WFA only: more than one point attained the minimum
  // WFA only, measured against the work function before the request.
  std::optional<Rational> nabla;
  std::optional<ProductPoint> nabla_witness;
  Rational delta_x;
  Rational delta_y;
  std::optional<Rational> phi_before;
  std::optional<Rational> phi_after;
  std::optional<LemmaReport> report;
  // Grid values after the request, when requested.
  std::optional<std::vector<std::pair<ProductPoint, Rational>>> work;
};

struct RunTrace {
  AlgorithmConfig algorithm;
  std::vector<StepRecord> steps;
  Rational total_cost;
  Rational opt_cost;
  std::optional<Rational> ratio;        // total / opt when opt > 0
  std::optional<Rational> nabla_total;  // WFA only
  ProductPoint final_position;
  Rational final_work;  // work function of the whole sequence at the final position
  std::optional<PotentialConfig> potential;
  std::vector<LemmaCheck> run_checks;
  std::optional<Rational> min_phi_increase_over_nabla;
  // (1/c5 - 1)/lambda, the ratio the potential argument certifies
  std::optional<Rational> certified_ratio;

  std::size_t lemma_failures() const;
  std::size_t tie_count() const;
};

struct RunOptions {
  bool verify = false;
  // Defaults to default_constants(lambda, auto_variant(instance)).
  std::optional<PotentialConfig> potential;
  bool audit = false;
  bool probe = true;
  bool record_work = false;
};

struct WfaMove {
  ProductPoint point;
  bool tie = false;
};

// Minimizer of W(t) + lambda*d(current, t) with W already updated by r.
// Candidates are the grid points on r and the projections of current onto
// r's two lines. Ties: nearest to current, then lexicographic.
WfaMove wfa_step(const WorkFunction& after, const ProductPoint& current, const RequestPoint& r,
                 const Rational& lambda);
// Nearer projection of current onto r; the x-line projection on ties.
ProductPoint greedy_step(const Instance& instance, const ProductPoint& current, const RequestPoint& r);
// Cheapest point of r under the updated work function; lexicographic ties.
ProductPoint retrospective_step(const WorkFunction& after, const RequestPoint& r);

// Serves the whole sequence online. Verification needs a WFA with lambda < 1.
RunTrace run(std::shared_ptr<const Instance> instance, const AlgorithmConfig& algorithm,
             const RunOptions& options = {});

}  // namespace wfalab
