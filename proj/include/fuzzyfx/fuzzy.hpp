#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

namespace fuzzyfx {

enum class Term { Buy, Neutral, Sell };

inline constexpr std::array<Term, 3> kTerms = {Term::Buy, Term::Neutral, Term::Sell};

constexpr std::size_t index_of(Term t) noexcept { return static_cast<std::size_t>(t); }
std::string_view to_string(Term t) noexcept;

/// Trapezoid: ramp up a->b, plateau b->c, ramp down c->d. a == b or c == d
/// is a vertical shoulder.
struct MembershipFunction {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  bool operator==(const MembershipFunction&) const = default;
};

double membership(const MembershipFunction& mf, double x) noexcept;

/// Degree of membership per term, indexed by index_of(Term).
using Degrees = std::array<double, 3>;

/// Buy / Neutral / Sell zones over a closed domain.
struct TermSet {
  double domain_min = 0.0;
  double domain_max = 1.0;
  std::array<MembershipFunction, 3> terms{};

  const MembershipFunction& operator[](Term t) const { return terms[index_of(t)]; }
  MembershipFunction& operator[](Term t) { return terms[index_of(t)]; }

  /// Throws ConfigError unless every trapezoid is ordered and the terms
  /// cover the whole domain with a positive degree.
  void validate() const;

  bool operator==(const TermSet&) const = default;
};

/// Clamps x to the domain, then evaluates every term.
Degrees fuzzify(double x, const TermSet& ts) noexcept;

struct FuzzyRule {
  std::array<Term, 3> antecedent{};
  Term consequent = Term::Neutral;

  bool operator==(const FuzzyRule&) const = default;
};

/// Mamdani AND: min of the antecedent degrees.
double fire_rule(const FuzzyRule& rule, const std::array<Degrees, 3>& fuzzified) noexcept;

struct FuzzyVerdict {
  double res = 0.0;
  int fired_rule_count = 0;
};

inline constexpr std::size_t kRulesPerSystem = 12;
inline constexpr std::size_t kDefaultGridPoints = 1001;

/// Three-input, one-output Mamdani system: min implication, max
/// aggregation, centroid defuzzification over [0, 1]. The centroid is
/// integrated on the uniform grid refined with the aggregate's kinks.
/// Immutable once built; inference is reentrant.
class FuzzySystem {
 public:
  FuzzySystem(std::array<TermSet, 3> inputs, TermSet output, std::vector<FuzzyRule> rules,
              std::size_t grid_points = kDefaultGridPoints);

  /// std::nullopt when no rule fires (the aggregate has zero mass).
  std::optional<FuzzyVerdict> try_infer(const std::array<double, 3>& inputs) const;
  /// Same as try_infer but throws NoRuleFired.
  FuzzyVerdict infer(const std::array<double, 3>& inputs) const;

  const std::array<TermSet, 3>& inputs() const noexcept { return inputs_; }
  const TermSet& output() const noexcept { return output_; }
  const std::vector<FuzzyRule>& rules() const noexcept { return rules_; }
  std::size_t grid_points() const noexcept { return grid_.size(); }

 private:
  std::array<TermSet, 3> inputs_;
  TermSet output_;
  std::vector<FuzzyRule> rules_;
  std::vector<double> grid_;

  double aggregate(const std::array<double, 3>& clip, double x) const noexcept;
};

}  // namespace fuzzyfx
