#include "twistlab/algebra.hpp"

#include <cmath>

#include "twistlab/error.hpp"

namespace twistlab {

namespace {

void require_group(const Group& a, const Group& b) {
  if (!(a == b)) throw Error(ErrorCode::backend_mismatch, "algebra elements over different groups");
}

}  // namespace

AlgebraElement::AlgebraElement(Group g, Terms terms) : group_(std::move(g)) {
  for (const auto& [x, c] : terms) add(x, c);
}

AlgebraElement AlgebraElement::delta(const Group& g, const GroupElement& x, Complex c) {
  AlgebraElement a(g);
  a.add(x, c);
  return a;
}

Complex AlgebraElement::coeff(const GroupElement& x) const {
  auto it = terms_.find(x);
  return it == terms_.end() ? Complex{} : it->second;
}

void AlgebraElement::add(const GroupElement& x, Complex c) {
  if (!group_.contains(x)) throw Error(ErrorCode::backend_mismatch, "support element not in group");
  auto [it, inserted] = terms_.try_emplace(x, c);
  if (!inserted) it->second += c;
  if (std::abs(it->second) < kDropThreshold) terms_.erase(it);
}

AlgebraElement AlgebraElement::scaled(Complex s) const {
  AlgebraElement out(group_);
  for (const auto& [x, c] : terms_) out.add(x, s * c);
  return out;
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& other) const {
  require_group(group_, other.group_);
  AlgebraElement out = *this;
  for (const auto& [x, c] : other.terms_) out.add(x, c);
  return out;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& other) const { return *this + other.scaled(-1.0); }

std::size_t AlgebraElement::max_word_length() const {
  std::size_t m = 0;
  for (const auto& [x, c] : terms_) m = std::max(m, group_.word_length(x));
  return m;
}

Json AlgebraElement::to_json() const {
  Json terms = Json::array();
  for (const auto& [x, c] : terms_)
    terms.push_back(Json{{"g", group_.element_to_json(x)}, {"re", c.real()}, {"im", c.imag()}});
  return Json{{"group", group_.to_json()}, {"terms", std::move(terms)}};
}

AlgebraElement AlgebraElement::from_json(const Group& g, const Json& j) {
  try {
    const Json& terms = j.is_array() ? j : j.at("terms");
    AlgebraElement a(g);
    for (const auto& t : terms) a.add(g.element_from_json(t.at("g")), Complex(t.value("re", 0.0), t.value("im", 0.0)));
    return a;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("algebra element: ") + e.what());
  }
}

AlgebraElement convolve(const AlgebraElement& a, const AlgebraElement& b, const Cocycle& sigma) {
  require_group(a.group(), b.group());
  require_group(a.group(), sigma.group());
  const Group& g = a.group();
  AlgebraElement::Terms acc;
  // Fixed accumulation order: x over sorted supp a, y over sorted supp b.
  for (const auto& [x, ax] : a.terms())
    for (const auto& [y, by] : b.terms()) acc[g.compose(x, y)] += sigma(x, y) * ax * by;
  AlgebraElement out(g);
  for (const auto& [x, c] : acc)
    if (std::abs(c) >= kDropThreshold) out.add(x, c);
  return out;
}

AlgebraElement involute(const AlgebraElement& a, const Cocycle& sigma) {
  require_group(a.group(), sigma.group());
  const Group& g = a.group();
  AlgebraElement out(g);
  for (const auto& [x, c] : a.terms()) {
    // h = x^-1 receives conj(sigma(h^-1, h)) conj(a_x) = conj(sigma(x, x^-1)) conj(a_x)
    const auto h = g.invert(x);
    out.add(h, std::conj(sigma(x, h)) * std::conj(c));
  }
  return out;
}

AlgebraElement positive_part(const AlgebraElement& a) {
  AlgebraElement out(a.group());
  for (const auto& [x, c] : a.terms()) out.add(x, std::abs(c));
  return out;
}

double l2_norm(const AlgebraElement& a) {
  double s = 0.0;
  for (const auto& [x, c] : a.terms()) s += std::norm(c);
  return std::sqrt(s);
}

double l1_norm(const AlgebraElement& a) {
  double s = 0.0;
  for (const auto& [x, c] : a.terms()) s += std::abs(c);
  return s;
}

double l1_distance(const AlgebraElement& a, const AlgebraElement& b) {
  require_group(a.group(), b.group());
  double s = 0.0;
  auto ia = a.terms().begin(), ib = b.terms().begin();
  while (ia != a.terms().end() || ib != b.terms().end()) {
    if (ib == b.terms().end() || (ia != a.terms().end() && ia->first < ib->first)) {
      s += std::abs(ia->second);
      ++ia;
    } else if (ia == a.terms().end() || ib->first < ia->first) {
      s += std::abs(ib->second);
      ++ib;
    } else {
      s += std::abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return s;
}

AlgebraElement power(const AlgebraElement& a, int n, const Cocycle& sigma, std::size_t support_cap) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "power needs n >= 1");
  AlgebraElement p = a;
  for (int k = 2; k <= n; ++k) {
    // Pairs that could land on distinct elements; collisions usually shrink this a lot.
    if (p.support_size() > 4 * support_cap / std::max<std::size_t>(1, a.support_size()))
      throw Error(ErrorCode::memory_budget_exceeded,
                  "power " + std::to_string(k) + " would exceed the support cap of " + std::to_string(support_cap));
    p = convolve(p, a, sigma);
    if (p.support_size() > support_cap)
      throw Error(ErrorCode::memory_budget_exceeded, "support of power " + std::to_string(k) + " exceeds cap");
  }
  return p;
}

AlgebraElement gauge(const AlgebraElement& a, const PhaseFunction& beta) {
  require_group(a.group(), beta.group());
  AlgebraElement out(a.group());
  for (const auto& [x, c] : a.terms()) out.add(x, beta(x) * c);
  return out;
}

AlgebraElement random_algebra_element(const Group& g, std::size_t terms, int radius, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  AlgebraElement a(g);
  for (std::size_t t = 0; t < terms; ++t) {
    const auto x = random_element(g, radius, rng);
    const double re = normal(rng), im = normal(rng);
    a.add(x, Complex(re, im));
  }
  return a;
}

AlgebraElement random_on_support(const Group& g, const std::vector<GroupElement>& support, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  AlgebraElement a(g);
  for (const auto& x : support) {
    const double re = normal(rng), im = normal(rng);
    a.add(x, Complex(re, im));
  }
  return a;
}

}  // namespace twistlab
