#include "wsn/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "wsn/errors.hpp"

namespace wsn::fuzzy {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Coverage is checked on a grid this fine.
constexpr std::size_t kCoverageSamples = 10001;

}  // namespace

MembershipFunction MembershipFunction::trapezoid(double a, double b, double c, double d) {
  if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d))) {
    throw ConfigError("membership breakpoints must be finite");
  }
  if (!(a <= b && b <= c && c <= d)) throw ConfigError("membership breakpoints must satisfy a <= b <= c <= d");
  return MembershipFunction{a, b, c, d};
}

double MembershipFunction::operator()(double v) const {
  if (v < a || v > d) return 0.0;
  if (v >= b && v <= c) return 1.0;
  if (v < b) return (v - a) / (b - a);
  return (d - v) / (d - c);
}

double membership(const MembershipFunction& mf, double v) { return mf(v); }

LinguisticVariable::LinguisticVariable(std::string name, double lo, double hi, std::vector<Term> terms)
    : name_(std::move(name)), lo_(lo), hi_(hi), terms_(std::move(terms)) {
  if (!(lo_ < hi_)) throw ConfigError("variable " + name_ + ": universe must satisfy lo < hi");
  if (terms_.empty()) throw ConfigError("variable " + name_ + ": needs at least one term");
  for (const Term& t : terms_) {
    if (t.mf.a < lo_ || t.mf.d > hi_) {
      throw ConfigError("variable " + name_ + ": term " + t.label + " leaves the universe");
    }
    if (std::count_if(terms_.begin(), terms_.end(), [&](const Term& o) { return o.label == t.label; }) != 1) {
      throw ConfigError("variable " + name_ + ": duplicate term " + t.label);
    }
  }
  for (std::size_t k = 0; k < kCoverageSamples; ++k) {
    const double v = lo_ + (hi_ - lo_) * static_cast<double>(k) / (kCoverageSamples - 1);
    const bool covered = std::any_of(terms_.begin(), terms_.end(), [&](const Term& t) { return t.mf(v) > 0.0; });
    if (!covered) {
      std::ostringstream msg;
      msg << "variable " << name_ << ": terms leave " << v << " uncovered";
      throw ConfigError(msg.str());
    }
  }
}

std::size_t LinguisticVariable::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].label == label) return i;
  }
  throw ConfigError("variable " + name_ + " has no term '" + std::string(label) + "'");
}

double LinguisticVariable::clamp(double v) const { return std::clamp(v, lo_, hi_); }

std::vector<double> LinguisticVariable::fuzzify(double v) const {
  const double x = clamp(v);
  std::vector<double> degrees;
  degrees.reserve(terms_.size());
  for (const Term& t : terms_) degrees.push_back(t.mf(x));
  return degrees;
}

RuleBase::RuleBase(std::array<LinguisticVariable, kInputCount> inputs, LinguisticVariable output,
                   std::vector<Rule> rules)
    : inputs_(std::move(inputs)), output_(std::move(output)), rules_(std::move(rules)) {
  std::size_t combos = 1;
  for (const auto& var : inputs_) combos *= var.term_count();
  if (rules_.size() != combos) {
    throw ConfigError("rule table has " + std::to_string(rules_.size()) + " rules, expected " +
                      std::to_string(combos));
  }
  std::vector<Rule> by_key(combos);
  std::vector<bool> seen(combos, false);
  for (const Rule& r : rules_) {
    std::size_t key = 0;
    for (std::size_t i = 0; i < kInputCount; ++i) {
      if (r.antecedent[i] >= inputs_[i].term_count()) throw ConfigError("rule antecedent index out of range");
      key = key * inputs_[i].term_count() + r.antecedent[i];
    }
    if (r.consequent >= output_.term_count()) throw ConfigError("rule consequent index out of range");
    if (seen[key]) throw ConfigError("rule table repeats an antecedent combination");
    seen[key] = true;
    by_key[key] = r;
  }
  // Canonical order makes lookup a direct index.
  rules_ = std::move(by_key);
}

const Rule& RuleBase::lookup(const std::array<std::size_t, kInputCount>& antecedent) const {
  std::size_t key = 0;
  for (std::size_t i = 0; i < kInputCount; ++i) {
    if (antecedent[i] >= inputs_[i].term_count()) throw ConfigError("antecedent index out of range");
    key = key * inputs_[i].term_count() + antecedent[i];
  }
  return rules_[key];
}

std::array<LinguisticVariable, kInputCount> default_inputs(const InputTerms& terms) {
  auto make = [&](std::string name) {
    return LinguisticVariable(std::move(name), 0.0, 1.0,
                              {{"Low", terms.low}, {"Medium", terms.medium}, {"High", terms.high}});
  };
  return {make("Residual_Energy"), make("Reachability"), make("Reception_Power")};
}

LinguisticVariable default_output() {
  using MF = MembershipFunction;
  return LinguisticVariable("Potential", 0.0, 1.0,
                            {{"VeryLow", MF::triangle(0.0, 0.0, 0.25)},
                             {"Low", MF::triangle(0.0, 0.25, 0.5)},
                             {"Medium", MF::triangle(0.25, 0.5, 0.75)},
                             {"High", MF::triangle(0.5, 0.75, 1.0)},
                             {"VeryHigh", MF::triangle(0.75, 1.0, 1.0)}});
}

std::vector<Rule> default_rules() {
  std::vector<Rule> rules;
  for (std::size_t e = 0; e < 3; ++e) {
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t p = 0; p < 3; ++p) {
        const double mean = 2.0 * static_cast<double>(e + r + p) / 3.0;
        rules.push_back(Rule{{e, r, p}, static_cast<std::size_t>(std::lround(mean))});
      }
    }
  }
  return rules;
}

RuleBase default_rule_base(const InputTerms& terms) {
  return RuleBase(default_inputs(terms), default_output(), default_rules());
}

std::vector<Rule> parse_rules(std::istream& in, const std::array<LinguisticVariable, kInputCount>& inputs,
                              const LinguisticVariable& output) {
  std::vector<Rule> rules;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;

    const auto where = [&] { return "rule file line " + std::to_string(line_no) + ": "; };
    const auto arrow = body.find("->");
    if (arrow == std::string::npos) throw ConfigError(where() + "missing '->'");

    std::vector<std::string> labels;
    std::istringstream lhs(body.substr(0, arrow));
    std::string cell;
    while (std::getline(lhs, cell, ',')) labels.push_back(trim(cell));
    if (labels.size() != kInputCount) throw ConfigError(where() + "expected 3 antecedent terms");

    Rule rule;
    try {
      for (std::size_t i = 0; i < kInputCount; ++i) rule.antecedent[i] = inputs[i].index_of(labels[i]);
      rule.consequent = output.index_of(trim(body.substr(arrow + 2)));
    } catch (const ConfigError& e) {
      throw ConfigError(where() + e.what());
    }
    rules.push_back(rule);
  }
  return rules;
}

RuleBase load_rule_base(const std::filesystem::path& path, const InputTerms& terms) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open rule file " + path.string());
  auto inputs = default_inputs(terms);
  auto output = default_output();
  auto rules = parse_rules(in, inputs, output);
  return RuleBase(std::move(inputs), std::move(output), std::move(rules));
}

void write_rules(std::ostream& out, const RuleBase& rb) {
  for (const Rule& r : rb.rules()) {
    for (std::size_t i = 0; i < kInputCount; ++i) {
      if (i) out << ',';
      out << rb.inputs()[i].terms()[r.antecedent[i]].label;
    }
    out << " -> " << rb.output().terms()[r.consequent].label << '\n';
  }
}

void AggregatedSet::add(const MembershipFunction& mf, double height) {
  if (!(height > 0.0)) return;
  parts_.emplace_back(mf, std::min(height, 1.0));
}

double AggregatedSet::operator()(double v) const {
  double mu = 0.0;
  for (const auto& [mf, height] : parts_) mu = std::max(mu, std::min(height, mf(v)));
  return mu;
}

namespace {

// Firing strength per output term: max over rules of min over antecedent memberships.
std::vector<double> term_strengths(const RuleBase& rb, const Crisp& inputs) {
  std::array<std::vector<double>, kInputCount> degrees;
  for (std::size_t i = 0; i < kInputCount; ++i) degrees[i] = rb.inputs()[i].fuzzify(inputs[i]);

  std::vector<double> strength(rb.output().term_count(), 0.0);
  for (const Rule& r : rb.rules()) {
    double s = 1.0;
    for (std::size_t i = 0; i < kInputCount; ++i) s = std::min(s, degrees[i][r.antecedent[i]]);
    strength[r.consequent] = std::max(strength[r.consequent], s);
  }
  return strength;
}

double grid_point(double lo, double hi, std::size_t k, std::size_t resolution) {
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(resolution - 1);
}

}  // namespace

AggregatedSet infer(const RuleBase& rb, const Crisp& inputs) {
  const auto strength = term_strengths(rb, inputs);
  AggregatedSet set(rb.output().lo(), rb.output().hi());
  for (std::size_t t = 0; t < strength.size(); ++t) set.add(rb.output().terms()[t].mf, strength[t]);
  return set;
}

double defuzzify_centroid(const AggregatedSet& set, std::size_t resolution) {
  if (resolution < 2) throw ConfigError("defuzzification resolution must be >= 2");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < resolution; ++k) {
    const double v = grid_point(set.lo(), set.hi(), k, resolution);
    const double mu = set(v);
    num += v * mu;
    den += mu;
  }
  if (!(den > 0.0)) throw InferenceError("cannot defuzzify an all-zero fuzzy set");
  return num / den;
}

Engine::Engine(RuleBase rb, std::size_t resolution) : rb_(std::move(rb)), resolution_(resolution) {
  if (resolution_ < 2) throw ConfigError("defuzzification resolution must be >= 2");
  const auto& out = rb_.output();
  grid_.resize(resolution_);
  for (std::size_t k = 0; k < resolution_; ++k) grid_[k] = grid_point(out.lo(), out.hi(), k, resolution_);
  term_samples_.resize(out.term_count());
  for (std::size_t t = 0; t < out.term_count(); ++t) {
    term_samples_[t].resize(resolution_);
    for (std::size_t k = 0; k < resolution_; ++k) term_samples_[t][k] = out.terms()[t].mf(grid_[k]);
  }
}

double Engine::evaluate(const Crisp& inputs) const {
  const auto strength = term_strengths(rb_, inputs);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < resolution_; ++k) {
    double mu = 0.0;
    for (std::size_t t = 0; t < strength.size(); ++t) {
      if (!(strength[t] > 0.0)) continue;
      mu = std::max(mu, std::min(std::min(strength[t], 1.0), term_samples_[t][k]));
    }
    num += grid_[k] * mu;
    den += mu;
  }
  if (!(den > 0.0)) throw InferenceError("no rule fired for the given inputs");
  return num / den;
}

}  // namespace wsn::fuzzy
