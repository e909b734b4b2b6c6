#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "workfn.hpp"

namespace wfalab {

// Which potential to use. The plane variant weighs the slack to the
// rectangle spanned by two points and needs line components; the general
// variant uses balls around the first point and a second, larger slack
// parameter for the pair term, and works on any metric.
enum class PotentialVariant { kCnn, kGeneral };

const char* variant_name(PotentialVariant v);

struct PotentialConfig {
  PotentialVariant variant = PotentialVariant::kCnn;
  Rational lambda;
  // plane variant
  Rational alpha;
  Rational gamma;
  // general variant
  Rational mu;
  Rational eta;
  Rational beta;
  Rational kappa;
  // Per-case increase constants derived from the ones above.
  Rational c1, c2, c3, c4, c5;

  // alpha or beta: weight of the third point's slack.
  const Rational& region_weight() const;
  // gamma or kappa: weight of min G in the potential.
  const Rational& mix_weight() const;
  // Slack parameter of the pair term (lambda or mu) and of the third point.
  SlackParam pair_param() const;
  SlackParam point_param() const { return SlackParam::lambda(lambda); }

  // Lower bounds per unit of distance when a point is replaced by one that
  // dominates it: third point; one of the pair; the second point of the
  // region; the region's centre.
  Rational bound_third() const;
  Rational bound_pair() const;
  Rational bound_region_second() const;
  Rational bound_region_first() const;
  // Lipschitz constant of min G in one coordinate of the new request.
  Rational lipschitz_g() const { return Rational(2) + Rational(4) * region_weight(); }

  std::string describe() const;
};

// Builds a config and derives c1..c5. When the mixing weight is omitted it
// is set to c2 / (c2 + c4), the largest value for which c5 is valid.
PotentialConfig make_cnn_config(const Rational& lambda, const Rational& alpha,
                                std::optional<Rational> gamma = std::nullopt);
PotentialConfig make_general_config(const Rational& lambda, const Rational& mu, const Rational& eta,
                                    const Rational& beta, std::optional<Rational> kappa = std::nullopt);
PotentialConfig default_constants(const Rational& lambda, PotentialVariant variant);

// Throws Error(kInvalidArgument) naming the first violated constraint.
void validate(const PotentialConfig& cfg);
// The plane variant needs both components to be lines.
void check_compatible(const PotentialConfig& cfg, const Instance& instance);
// Plane variant for two unweighted real lines, general variant otherwise.
PotentialVariant auto_variant(const Instance& instance);

struct Region {
  enum class Kind { kBoks, kSpheres };
  Kind kind = Kind::kBoks;
  ProductPoint s1;
  ProductPoint s2;
  Rational eta;  // Spheres only

  static Region boks(ProductPoint a, ProductPoint b) { return {Kind::kBoks, std::move(a), std::move(b), 0}; }
  static Region spheres(ProductPoint a, ProductPoint b, Rational eta) {
    return {Kind::kSpheres, std::move(a), std::move(b), std::move(eta)};
  }
};

// Boks: coordinate-wise between s1 and s2 (lines only). Spheres: within
// eta times the s1-s2 distance of s1, separately in each component.
bool region_membership(const Instance& instance, const Region& region, const ProductPoint& t);
// min over t in the region of W(t) + p*d(t, s3), minus W(s3). Exact.
Rational region_slack(const WorkFunction& wf, const ProductPoint& s3, const Region& region,
                      const SlackParam& param);

Region region_for(const PotentialConfig& cfg, const ProductPoint& s1, const ProductPoint& s2);

// W(s1) - Sl(s2; s1)/2, checked against (W(s1) + W(s2) - p*d(s1, s2))/2.
Rational h_value(const WorkFunction& wf, const ProductPoint& s1, const ProductPoint& s2,
                 const SlackParam& pair);
Rational f_value(const WorkFunction& wf, const ProductPoint& s1, const ProductPoint& s2,
                 const ProductPoint& s3, const PotentialConfig& cfg);
Rational g_value(const WorkFunction& wf, const ProductPoint& s1, const ProductPoint& s2,
                 const ProductPoint& s3, const PotentialConfig& cfg);

struct Triple {
  ProductPoint s1, s2, s3;
  std::size_t cardinality() const;
  std::string str() const;
  friend bool operator==(const Triple&, const Triple&) = default;
};

struct TripleMin {
  Rational value;
  Triple triple;
};

struct PairMin {
  Rational value;
  ProductPoint s1, s2;
};

// Points on the support request: grid coordinates on line components, the
// whole space on finite ones. With refine, line components also get the
// midpoints of neighbouring coordinates and one unit past both ends.
std::vector<ProductPoint> potential_candidates(const WorkFunction& wf, bool refine = false);

TripleMin min_f(const WorkFunction& wf, const PotentialConfig& cfg, bool refine = false);
TripleMin min_g(const WorkFunction& wf, const PotentialConfig& cfg, bool refine = false);
PairMin min_h(const WorkFunction& wf, const PotentialConfig& cfg, bool refine = false);
// (1 - weight) min F + weight min G
Rational phi(const WorkFunction& wf, const PotentialConfig& cfg);

struct PotentialSummary {
  TripleMin f;
  TripleMin g;
  PairMin h;
  Rational phi;
};
PotentialSummary summarize(const WorkFunction& wf, const PotentialConfig& cfg, bool refine = false);

// Outcome of one inequality. margin >= 0 (> 0 for strict relations) iff it
// holds; for sampled checks the worst sample is kept.
struct LemmaCheck {
  std::string name;
  std::string relation;  // ">=", ">", "<=", "=="
  bool applicable = true;
  bool holds = true;
  Rational lhs;
  Rational rhs;
  Rational margin;
  std::size_t samples = 0;
};

struct LemmaReport {
  Rational nabla;
  ProductPoint nabla_witness;
  Rational delta_x;
  Rational delta_y;
  PotentialSummary before;
  PotentialSummary after;
  bool case_a = false;  // F minimizer after the step has at most two points
  std::optional<Rational> increase_ratio;  // (phi after - phi before) / nabla
  std::optional<Rational> probe_g_ratio;
  std::optional<Rational> probe_nabla_ratio;
  std::vector<LemmaCheck> checks;

  std::size_t failures() const;
  const LemmaCheck* find(const std::string& name) const;
};

struct VerifyOptions {
  bool audit = false;
  bool probe = true;
  Rational probe_step = Rational(1, 16);
  // Reuse of the previous step's summary of the same snapshot.
  const PotentialSummary* before = nullptr;
};

// Checks the per-request inequalities of the potential argument for the
// transition before -> after = before.update(next).
LemmaReport verify_step(const WorkFunction& before, const WorkFunction& after,
                        const RequestPoint& next, const PotentialConfig& cfg,
                        const VerifyOptions& options = {});

}  // namespace wfalab
