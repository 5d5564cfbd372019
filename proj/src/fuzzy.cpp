#include "fuzzyfx/fuzzy.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "fuzzyfx/errors.hpp"

namespace fuzzyfx {

std::string_view to_string(Term t) noexcept {
  switch (t) {
    case Term::Buy:
      return "buy";
    case Term::Neutral:
      return "neutral";
    case Term::Sell:
      return "sell";
  }
  return "?";
}

double membership(const MembershipFunction& mf, double x) noexcept {
  if (x < mf.a || x > mf.d) return 0.0;
  if (x >= mf.b && x <= mf.c) return 1.0;
  if (x < mf.b) return (x - mf.a) / (mf.b - mf.a);
  return (mf.d - x) / (mf.d - mf.c);
}

void TermSet::validate() const {
  if (!(domain_min < domain_max)) throw ConfigError("term set domain must satisfy min < max");
  std::vector<double> points{domain_min, domain_max};
  for (Term t : kTerms) {
    const auto& mf = (*this)[t];
    if (!(mf.a <= mf.b && mf.b <= mf.c && mf.c <= mf.d))
      throw ConfigError("term '" + std::string(to_string(t)) + "' breakpoints must satisfy a <= b <= c <= d");
    for (double p : {mf.a, mf.b, mf.c, mf.d})
      if (p > domain_min && p < domain_max) points.push_back(p);
  }
  // Each term is positive on a single interval, so checking every
  // breakpoint and every midpoint between neighbours is exhaustive.
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  auto covered = [this](double x) {
    const auto deg = fuzzify(x, *this);
    return *std::max_element(deg.begin(), deg.end()) > 0.0;
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!covered(points[i]) || (i + 1 < points.size() && !covered(0.5 * (points[i] + points[i + 1]))))
      throw ConfigError("term set leaves part of [" + std::to_string(domain_min) + ", " +
                        std::to_string(domain_max) + "] with zero membership");
  }
}

Degrees fuzzify(double x, const TermSet& ts) noexcept {
  x = std::clamp(x, ts.domain_min, ts.domain_max);
  Degrees out{};
  for (Term t : kTerms) out[index_of(t)] = membership(ts[t], x);
  return out;
}

double fire_rule(const FuzzyRule& rule, const std::array<Degrees, 3>& fuzzified) noexcept {
  double strength = 1.0;
  for (std::size_t i = 0; i < 3; ++i) strength = std::min(strength, fuzzified[i][index_of(rule.antecedent[i])]);
  return strength;
}

FuzzySystem::FuzzySystem(std::array<TermSet, 3> inputs, TermSet output, std::vector<FuzzyRule> rules,
                         std::size_t grid_points)
    : inputs_(std::move(inputs)), output_(std::move(output)), rules_(std::move(rules)) {
  for (const auto& ts : inputs_) ts.validate();
  output_.validate();
  if (output_.domain_min != 0.0 || output_.domain_max != 1.0)
    throw ConfigError("output term set domain must be [0, 1]");
  if (rules_.size() != kRulesPerSystem)
    throw ConfigError("a fuzzy system needs exactly " + std::to_string(kRulesPerSystem) + " rules, got " +
                      std::to_string(rules_.size()));
  std::set<std::array<Term, 3>> seen;
  for (const auto& r : rules_)
    if (!seen.insert(r.antecedent).second) throw ConfigError("duplicate rule antecedent");
  if (grid_points < 2) throw ConfigError("defuzzification grid needs at least 2 points");

  const double last = static_cast<double>(grid_points - 1);
  grid_.resize(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) grid_[i] = static_cast<double>(i) / last;
}

double FuzzySystem::aggregate(const std::array<double, 3>& clip, double x) const noexcept {
  double mu = 0.0;
  for (Term t : kTerms) mu = std::max(mu, std::min(clip[index_of(t)], membership(output_[t], x)));
  return mu;
}

std::optional<FuzzyVerdict> FuzzySystem::try_infer(const std::array<double, 3>& inputs) const {
  const std::array<Degrees, 3> fuzzified = {fuzzify(inputs[0], inputs_[0]), fuzzify(inputs[1], inputs_[1]),
                                            fuzzify(inputs[2], inputs_[2])};
  // Rules sharing a consequent clip the same shape, so max over their
  // strengths first is equivalent to max over the clipped shapes.
  std::array<double, 3> clip{};
  int fired = 0;
  for (const auto& rule : rules_) {
    const double s = fire_rule(rule, fuzzified);
    if (s > 0.0) ++fired;
    auto& level = clip[index_of(rule.consequent)];
    level = std::max(level, s);
  }
  if (fired == 0) return std::nullopt;

  // The aggregate is piecewise linear. Refining the uniform grid with every
  // kink (breakpoints, clip levels, crossings of two clipped shapes) makes
  // the trapezoidal sums exact, so weakly fired rules with little mass are
  // integrated as accurately as strong ones.
  std::vector<double> nodes;
  for (Term t : kTerms) {
    const auto& mf = output_[t];
    const double s = clip[index_of(t)];
    if (s <= 0.0) continue;
    nodes.insert(nodes.end(), {mf.a, mf.b, mf.c, mf.d, mf.a + s * (mf.b - mf.a), mf.d - s * (mf.d - mf.c)});
  }
  nodes.push_back(0.0);
  nodes.push_back(1.0);
  std::erase_if(nodes, [](double x) { return x < 0.0 || x > 1.0; });
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  // Between consecutive structural nodes every clipped shape is linear, so
  // two shapes cross at most once there.
  const std::size_t structural = nodes.size();
  for (std::size_t i = 0; i + 1 < structural; ++i) {
    const double lo = nodes[i];
    const double hi = nodes[i + 1];
    for (std::size_t p = 0; p < 3; ++p) {
      for (std::size_t q = p + 1; q < 3; ++q) {
        auto diff = [&](double x) {
          return std::min(clip[p], membership(output_[kTerms[p]], x)) -
                 std::min(clip[q], membership(output_[kTerms[q]], x));
        };
        const double dl = diff(lo);
        const double dh = diff(hi);
        if ((dl < 0.0 && dh > 0.0) || (dl > 0.0 && dh < 0.0)) nodes.push_back(lo + (hi - lo) * dl / (dl - dh));
      }
    }
  }
  nodes.insert(nodes.end(), grid_.begin(), grid_.end());
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  // Exact moments of a linear piece: mass h(f0+f1)/2, first moment
  // h(f0(2x0+x1) + f1(x0+2x1))/6.
  double mass = 0.0;
  double moment = 0.0;
  double x0 = nodes.front();
  double f0 = aggregate(clip, x0);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    const double x1 = nodes[i];
    const double f1 = aggregate(clip, x1);
    const double h = x1 - x0;
    mass += h * (f0 + f1) / 2.0;
    moment += h * (f0 * (2.0 * x0 + x1) + f1 * (x0 + 2.0 * x1)) / 6.0;
    x0 = x1;
    f0 = f1;
  }
  if (mass <= 0.0) return std::nullopt;
  return FuzzyVerdict{std::clamp(moment / mass, 0.0, 1.0), fired};
}

FuzzyVerdict FuzzySystem::infer(const std::array<double, 3>& inputs) const {
  auto verdict = try_infer(inputs);
  if (!verdict) throw NoRuleFired();
  return *verdict;
}

}  // namespace fuzzyfx
