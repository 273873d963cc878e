#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wsn::fuzzy {

/// Trapezoid (a, b, c, d); a triangle when b == c. Evaluates to 1 on [b, c] and 0 outside [a, d].
struct MembershipFunction {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  static MembershipFunction trapezoid(double a, double b, double c, double d);
  static MembershipFunction triangle(double a, double peak, double d) { return trapezoid(a, peak, peak, d); }

  double operator()(double v) const;

  friend bool operator==(const MembershipFunction&, const MembershipFunction&) = default;
};

double membership(const MembershipFunction& mf, double v);

struct Term {
  std::string label;
  MembershipFunction mf;
};

class LinguisticVariable {
 public:
  LinguisticVariable(std::string name, double lo, double hi, std::vector<Term> terms);

  const std::string& name() const { return name_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  /// Index of a term label; throws ConfigError when absent.
  std::size_t index_of(std::string_view label) const;
  double clamp(double v) const;
  /// Membership degree of the (clamped) value in every term.
  std::vector<double> fuzzify(double v) const;

 private:
  std::string name_;
  double lo_;
  double hi_;
  std::vector<Term> terms_;
};

inline constexpr std::size_t kInputCount = 3;
using Crisp = std::array<double, kInputCount>;

struct Rule {
  std::array<std::size_t, kInputCount> antecedent{};
  std::size_t consequent = 0;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Three inputs, one output, and a total rule table: every antecedent combination exactly once.
class RuleBase {
 public:
  RuleBase(std::array<LinguisticVariable, kInputCount> inputs, LinguisticVariable output, std::vector<Rule> rules);

  const std::array<LinguisticVariable, kInputCount>& inputs() const { return inputs_; }
  const LinguisticVariable& output() const { return output_; }
  const std::vector<Rule>& rules() const { return rules_; }

  /// Rule whose antecedent matches the given term indices.
  const Rule& lookup(const std::array<std::size_t, kInputCount>& antecedent) const;

 private:
  std::array<LinguisticVariable, kInputCount> inputs_;
  LinguisticVariable output_;
  std::vector<Rule> rules_;
};

struct InputTerms {
  MembershipFunction low = MembershipFunction::trapezoid(0.0, 0.0, 0.2, 0.45);
  MembershipFunction medium = MembershipFunction::trapezoid(0.25, 0.45, 0.55, 0.75);
  MembershipFunction high = MembershipFunction::trapezoid(0.55, 0.8, 1.0, 1.0);
};

/// Residual_Energy, Reachability and Reception_Power on [0, 1] with Low/Medium/High terms.
std::array<LinguisticVariable, kInputCount> default_inputs(const InputTerms& terms = {});
/// Potential on [0, 1]: five evenly spaced triangles VeryLow..VeryHigh.
LinguisticVariable default_output();
/// Monotone table: consequent = round(mean of antecedent indices mapped Low->0, Medium->2, High->4).
std::vector<Rule> default_rules();
RuleBase default_rule_base(const InputTerms& terms = {});

/// Parses 27 lines of `E_term,R_term,RP_term -> P_term`. Blank lines and `#` comments are skipped.
std::vector<Rule> parse_rules(std::istream& in, const std::array<LinguisticVariable, kInputCount>& inputs,
                              const LinguisticVariable& output);
RuleBase load_rule_base(const std::filesystem::path& path, const InputTerms& terms = {});
void write_rules(std::ostream& out, const RuleBase& rb);

/// Union of consequent terms, each clipped at its firing strength.
class AggregatedSet {
 public:
  AggregatedSet(double lo, double hi) : lo_(lo), hi_(hi) {}

  void add(const MembershipFunction& mf, double height);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<std::pair<MembershipFunction, double>>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }

  double operator()(double v) const;

 private:
  double lo_;
  double hi_;
  std::vector<std::pair<MembershipFunction, double>> parts_;
};

/// Mamdani min-max inference. Inputs are clamped into their universes.
AggregatedSet infer(const RuleBase& rb, const Crisp& inputs);

inline constexpr std::size_t kDefaultResolution = 1001;

/// Centroid by uniform sampling of the output universe at `resolution` points (ends inclusive).
double defuzzify_centroid(const AggregatedSet& set, std::size_t resolution = kDefaultResolution);

/// infer + defuzzify_centroid with the output terms pre-sampled on the grid. Produces
/// the same value as the two-step path.
class Engine {
 public:
  explicit Engine(RuleBase rb, std::size_t resolution = kDefaultResolution);

  const RuleBase& rule_base() const { return rb_; }
  std::size_t resolution() const { return resolution_; }

  double evaluate(const Crisp& inputs) const;

 private:
  RuleBase rb_;
  std::size_t resolution_;
  std::vector<double> grid_;
  std::vector<std::vector<double>> term_samples_;  // [term][grid point]
};

}  // namespace wsn::fuzzy
