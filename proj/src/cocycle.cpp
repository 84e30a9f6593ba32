#include "twistlab/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "twistlab/error.hpp"
#include "twistlab/json_io.hpp"

namespace twistlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void require_same(const Group& a, const Group& b, const char* what) {
  if (!(a == b)) throw Error(ErrorCode::backend_mismatch, what);
}

std::vector<std::int64_t> exponent_sums(const Group& g, const GroupElement& x) {
  if (g.kind() == GroupKind::free) {
    std::vector<std::int64_t> e(g.rank(), 0);
    for (auto l : x.get_if<Word>()->letters) e[std::abs(l) - 1] += l > 0 ? 1 : -1;
    return e;
  }
  return x.get_if<LatticeVector>()->coords;
}

}  // namespace

// ---------------------------------------------------------------- PhaseFunction

struct PhaseFunction::Impl {
  enum class Kind { table, character, seeded, map, product, conjugate };
  Group group;
  Kind kind;
  std::vector<Complex> values;
  std::vector<double> angles;
  std::uint64_t seed = 0;
  std::map<GroupElement, Complex> entries;
  std::vector<PhaseFunction> parts;
};

PhaseFunction PhaseFunction::table(const Group& g, std::vector<Complex> values) {
  if (values.size() != g.order()) throw Error(ErrorCode::dimension_mismatch, "phase table needs |G| values");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (std::abs(std::abs(values[i]) - 1.0) > 1e-12)
      throw Error(ErrorCode::not_unit_modulus, "beta(" + std::to_string(i) + ") is not of modulus 1");
  if (std::abs(values[0] - 1.0) > 1e-12) throw Error(ErrorCode::invalid_argument, "beta(e) must be 1");
  values[0] = 1.0;
  return PhaseFunction(std::make_shared<Impl>(Impl{g, Impl::Kind::table, std::move(values), {}, 0, {}, {}}));
}

PhaseFunction PhaseFunction::character(const Group& g, std::vector<double> angles) {
  if (g.kind() != GroupKind::free && g.kind() != GroupKind::int_lattice)
    throw Error(ErrorCode::backend_mismatch, "character phases need a free group or int-lattice");
  const std::size_t n = g.kind() == GroupKind::free ? g.rank() : g.dim();
  if (angles.size() != n) throw Error(ErrorCode::dimension_mismatch, "one angle per generator");
  return PhaseFunction(std::make_shared<Impl>(Impl{g, Impl::Kind::character, {}, std::move(angles), 0, {}, {}}));
}

PhaseFunction PhaseFunction::seeded(const Group& g, std::uint64_t seed) {
  return PhaseFunction(std::make_shared<Impl>(Impl{g, Impl::Kind::seeded, {}, {}, seed, {}, {}}));
}

PhaseFunction PhaseFunction::map(const Group& g, std::map<GroupElement, Complex> values) {
  for (const auto& [x, v] : values) {
    if (!g.contains(x)) throw Error(ErrorCode::backend_mismatch, "phase map element not in group");
    if (std::abs(std::abs(v) - 1.0) > 1e-12)
      throw Error(ErrorCode::not_unit_modulus, "beta(" + g.element_to_string(x) + ") is not of modulus 1");
    if (g.is_identity(x) && std::abs(v - 1.0) > 1e-12) throw Error(ErrorCode::invalid_argument, "beta(e) must be 1");
  }
  return PhaseFunction(std::make_shared<Impl>(Impl{g, Impl::Kind::map, {}, {}, 0, std::move(values), {}}));
}

Complex PhaseFunction::operator()(const GroupElement& x) const {
  const Group& g = impl_->group;
  if (!g.contains(x)) throw Error(ErrorCode::backend_mismatch, "phase argument not in group");
  if (g.is_identity(x)) return 1.0;
  switch (impl_->kind) {
    case Impl::Kind::table: return impl_->values[g.index_of(x)];
    case Impl::Kind::character: {
      const auto e = exponent_sums(g, x);
      double s = 0.0;
      for (std::size_t j = 0; j < e.size(); ++j) s += impl_->angles[j] * static_cast<double>(e[j]);
      return std::polar(1.0, kTwoPi * s);
    }
    case Impl::Kind::seeded: {
      const std::uint64_t u = splitmix64(impl_->seed ^ splitmix64(x.hash()));
      return std::polar(1.0, kTwoPi * (static_cast<double>(u >> 11) * 0x1.0p-53));
    }
    case Impl::Kind::map: {
      auto it = impl_->entries.find(x);
      return it == impl_->entries.end() ? Complex(1.0) : it->second;
    }
    case Impl::Kind::product: {
      Complex v = 1.0;
      for (const auto& p : impl_->parts) v *= p(x);
      return v;
    }
    case Impl::Kind::conjugate: return std::conj(impl_->parts.front()(x));
  }
  return 1.0;
}

const Group& PhaseFunction::group() const { return impl_->group; }

PhaseFunction PhaseFunction::conjugate() const {
  return PhaseFunction(std::make_shared<Impl>(Impl{impl_->group, Impl::Kind::conjugate, {}, {}, 0, {}, {*this}}));
}

PhaseFunction PhaseFunction::times(const PhaseFunction& other) const {
  require_same(impl_->group, other.group(), "phase functions on different groups");
  return PhaseFunction(
      std::make_shared<Impl>(Impl{impl_->group, Impl::Kind::product, {}, {}, 0, {}, {*this, other}}));
}

Json PhaseFunction::to_json() const {
  const Group& g = impl_->group;
  switch (impl_->kind) {
    case Impl::Kind::table: return Json{{"kind", "table"}, {"values", complex_list_to_json(impl_->values)}};
    case Impl::Kind::character: return Json{{"kind", "character"}, {"angles", impl_->angles}};
    case Impl::Kind::seeded: return Json{{"kind", "seeded"}, {"seed", impl_->seed}};
    case Impl::Kind::map: {
      Json entries = Json::array();
      for (const auto& [x, v] : impl_->entries)
        entries.push_back(Json{{"g", g.element_to_json(x)}, {"re", v.real()}, {"im", v.imag()}});
      return Json{{"kind", "map"}, {"entries", std::move(entries)}};
    }
    case Impl::Kind::product: {
      Json parts = Json::array();
      for (const auto& p : impl_->parts) parts.push_back(p.to_json());
      return Json{{"kind", "product"}, {"factors", std::move(parts)}};
    }
    case Impl::Kind::conjugate: return Json{{"kind", "conjugate"}, {"of", impl_->parts.front().to_json()}};
  }
  return {};
}

PhaseFunction PhaseFunction::from_json(const Group& g, const Json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "table") return table(g, complex_list_from_json(j.at("values")));
    if (kind == "character") return character(g, j.at("angles").get<std::vector<double>>());
    if (kind == "seeded") return seeded(g, j.at("seed").get<std::uint64_t>());
    if (kind == "map") {
      std::map<GroupElement, Complex> values;
      for (const auto& e : j.at("entries"))
        values[g.element_from_json(e.at("g"))] = Complex(e.value("re", 0.0), e.value("im", 0.0));
      return map(g, std::move(values));
    }
    if (kind == "product") {
      const auto& f = j.at("factors");
      if (f.empty()) return map(g, {});
      PhaseFunction acc = from_json(g, f[0]);
      for (std::size_t i = 1; i < f.size(); ++i) acc = acc.times(from_json(g, f[i]));
      return acc;
    }
    if (kind == "conjugate") return from_json(g, j.at("of")).conjugate();
    throw Error(ErrorCode::parse_error, "unknown phase kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("phase function: ") + e.what());
  }
}

// ---------------------------------------------------------------- Cocycle

struct Cocycle::Impl {
  enum class Kind { trivial, table, bicharacter, coboundary, pullback, product, conjugate };
  Group group;
  Kind kind;
  std::vector<Complex> table;
  bool auto_normalized = false;
  std::vector<std::vector<double>> theta;
  std::optional<PhaseFunction> beta;
  std::vector<Cocycle> parts;
};

Cocycle Cocycle::trivial(const Group& g) {
  return Cocycle(std::make_shared<Impl>(Impl{g, Impl::Kind::trivial, {}, false, {}, std::nullopt, {}}));
}

Cocycle Cocycle::from_table(const Group& g, std::vector<Complex> values) {
  const std::size_t n = g.order();
  if (values.size() != n * n) throw Error(ErrorCode::dimension_mismatch, "cocycle table needs |G|^2 values");
  bool normalized = false;
  const Complex ee = values[0];
  if (ee != Complex(1.0) && std::abs(ee) > 0.0) {
    for (auto& v : values) v /= ee;
    normalized = true;
  }
  // Row and column of the identity are pinned to exactly 1 when they already are up to rounding.
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(values[i] - 1.0) <= 1e-13) values[i] = 1.0;
    if (std::abs(values[i * n] - 1.0) <= 1e-13) values[i * n] = 1.0;
  }
  return Cocycle(
      std::make_shared<Impl>(Impl{g, Impl::Kind::table, std::move(values), normalized, {}, std::nullopt, {}}));
}

Cocycle Cocycle::from_bicharacter(const Group& g, std::vector<std::vector<double>> theta) {
  if (g.kind() != GroupKind::int_lattice) throw Error(ErrorCode::backend_mismatch, "bicharacter needs an int-lattice");
  const auto d = static_cast<std::size_t>(g.dim());
  if (theta.size() != d) throw Error(ErrorCode::dimension_mismatch, "Theta must be d x d");
  for (const auto& row : theta)
    if (row.size() != d) throw Error(ErrorCode::dimension_mismatch, "Theta must be d x d");
  return Cocycle(
      std::make_shared<Impl>(Impl{g, Impl::Kind::bicharacter, {}, false, std::move(theta), std::nullopt, {}}));
}

Cocycle Cocycle::from_coboundary(const PhaseFunction& beta) {
  return Cocycle(std::make_shared<Impl>(Impl{beta.group(), Impl::Kind::coboundary, {}, false, {}, beta, {}}));
}

Cocycle Cocycle::pullback(const Group& extension, const Cocycle& on_quotient) {
  if (extension.kind() != GroupKind::extension) throw Error(ErrorCode::backend_mismatch, "pullback needs an extension");
  require_same(extension.extension().lambda, on_quotient.group(), "pullback cocycle must live on Lambda");
  return Cocycle(
      std::make_shared<Impl>(Impl{extension, Impl::Kind::pullback, {}, false, {}, std::nullopt, {on_quotient}}));
}

Complex Cocycle::operator()(const GroupElement& x, const GroupElement& y) const {
  const Group& g = impl_->group;
  switch (impl_->kind) {
    case Impl::Kind::trivial:
      if (!g.contains(x) || !g.contains(y)) throw Error(ErrorCode::backend_mismatch, "cocycle argument not in group");
      return 1.0;
    case Impl::Kind::table: {
      const auto n = g.order();
      return impl_->table[g.index_of(x) * n + g.index_of(y)];
    }
    case Impl::Kind::bicharacter: {
      const auto* vx = x.get_if<LatticeVector>();
      const auto* vy = y.get_if<LatticeVector>();
      if (!g.contains(x) || !g.contains(y)) throw Error(ErrorCode::backend_mismatch, "cocycle argument not in group");
      double s = 0.0;
      for (std::size_t i = 0; i < vx->coords.size(); ++i)
        for (std::size_t k = 0; k < vy->coords.size(); ++k)
          s += static_cast<double>(vx->coords[i]) * impl_->theta[i][k] * static_cast<double>(vy->coords[k]);
      return std::polar(1.0, kTwoPi * s);
    }
    case Impl::Kind::coboundary: {
      if (g.is_identity(x) || g.is_identity(y)) {
        if (!g.contains(x) || !g.contains(y)) throw Error(ErrorCode::backend_mismatch, "cocycle argument not in group");
        return 1.0;
      }
      const auto& beta = *impl_->beta;
      return std::conj(beta(x)) * std::conj(beta(y)) * beta(g.compose(x, y));
    }
    case Impl::Kind::pullback: {
      if (!g.contains(x) || !g.contains(y)) throw Error(ErrorCode::backend_mismatch, "cocycle argument not in group");
      const auto& lambda = g.extension().lambda;
      return impl_->parts.front()(lambda.element_at(x.get_if<ExtPair>()->h),
                                  lambda.element_at(y.get_if<ExtPair>()->h));
    }
    case Impl::Kind::product: {
      Complex v = 1.0;
      for (const auto& p : impl_->parts) v *= p(x, y);
      return v;
    }
    case Impl::Kind::conjugate: return std::conj(impl_->parts.front()(x, y));
  }
  return 1.0;
}

const Group& Cocycle::group() const { return impl_->group; }

std::string Cocycle::kind() const {
  switch (impl_->kind) {
    case Impl::Kind::trivial: return "trivial";
    case Impl::Kind::table: return "table";
    case Impl::Kind::bicharacter: return "bicharacter";
    case Impl::Kind::coboundary: return "coboundary";
    case Impl::Kind::pullback: return "pullback";
    case Impl::Kind::product: return "product";
    case Impl::Kind::conjugate: return "conjugate";
  }
  return "";
}

bool Cocycle::is_trivial() const { return impl_->kind == Impl::Kind::trivial; }
bool Cocycle::auto_normalized() const { return impl_->auto_normalized; }

std::optional<PhaseFunction> Cocycle::coboundary_phase() const {
  if (impl_->kind == Impl::Kind::coboundary) return impl_->beta;
  if (impl_->kind == Impl::Kind::conjugate) {
    // conj(d beta) = d conj(beta)
    if (auto b = impl_->parts.front().coboundary_phase()) return b->conjugate();
  }
  if (impl_->kind == Impl::Kind::product) {
    std::optional<PhaseFunction> acc;
    for (const auto& p : impl_->parts) {
      if (p.is_trivial()) continue;
      auto b = p.coboundary_phase();
      if (!b) return std::nullopt;
      acc = acc ? acc->times(*b) : *b;
    }
    return acc;
  }
  return std::nullopt;
}

std::vector<Complex> Cocycle::tabulate() const {
  const Group& g = impl_->group;
  const std::size_t n = g.order();
  if (impl_->kind == Impl::Kind::table) return impl_->table;
  std::vector<Complex> out(n * n);
  const auto elems = g.elements();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i * n + j] = (*this)(elems[i], elems[j]);
  return out;
}

Json Cocycle::to_json() const {
  switch (impl_->kind) {
    case Impl::Kind::trivial: return Json{{"kind", "trivial"}};
    case Impl::Kind::table: return Json{{"kind", "table"}, {"values", complex_list_to_json(impl_->table)}};
    case Impl::Kind::bicharacter: return Json{{"kind", "bicharacter"}, {"theta", impl_->theta}};
    case Impl::Kind::coboundary: return Json{{"kind", "coboundary"}, {"beta", impl_->beta->to_json()}};
    case Impl::Kind::pullback: return Json{{"kind", "pullback"}, {"cocycle", impl_->parts.front().to_json()}};
    case Impl::Kind::product: {
      Json f = Json::array();
      for (const auto& p : impl_->parts) f.push_back(p.to_json());
      return Json{{"kind", "product"}, {"factors", std::move(f)}};
    }
    case Impl::Kind::conjugate: return Json{{"kind", "conjugate"}, {"cocycle", impl_->parts.front().to_json()}};
  }
  return {};
}

Cocycle Cocycle::from_json(const Group& g, const Json& j) {
  try {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "trivial") return trivial(g);
    if (kind == "table") return from_table(g, complex_list_from_json(j.at("values")));
    if (kind == "bicharacter") return from_bicharacter(g, j.at("theta").get<std::vector<std::vector<double>>>());
    if (kind == "coboundary") {
      Cocycle c = from_coboundary(PhaseFunction::from_json(g, j.at("beta")));
      if (j.contains("base")) c = multiply(from_json(g, j.at("base")), c);
      return c;
    }
    if (kind == "pullback") {
      if (g.kind() != GroupKind::extension) throw Error(ErrorCode::backend_mismatch, "pullback needs an extension");
      return pullback(g, from_json(g.extension().lambda, j.at("cocycle")));
    }
    if (kind == "product") {
      Cocycle acc = trivial(g);
      for (const auto& f : j.at("factors")) acc = multiply(acc, from_json(g, f));
      return acc;
    }
    if (kind == "conjugate") return conjugate(from_json(g, j.at("cocycle")));
    throw Error(ErrorCode::parse_error, "unknown cocycle kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("cocycle: ") + e.what());
  }
}

Cocycle multiply(const Cocycle& a, const Cocycle& b) {
  require_same(a.group(), b.group(), "cocycles on different groups");
  if (a.is_trivial()) return b;
  if (b.is_trivial()) return a;
  std::vector<Cocycle> parts;
  for (const Cocycle* c : {&a, &b}) {
    if (c->impl_->kind == Cocycle::Impl::Kind::product)
      parts.insert(parts.end(), c->impl_->parts.begin(), c->impl_->parts.end());
    else
      parts.push_back(*c);
  }
  return Cocycle(std::make_shared<Cocycle::Impl>(
      Cocycle::Impl{a.group(), Cocycle::Impl::Kind::product, {}, false, {}, std::nullopt, std::move(parts)}));
}

Cocycle conjugate(const Cocycle& a) {
  if (a.is_trivial()) return a;
  if (a.impl_->kind == Cocycle::Impl::Kind::conjugate) return a.impl_->parts.front();
  return Cocycle(std::make_shared<Cocycle::Impl>(
      Cocycle::Impl{a.group(), Cocycle::Impl::Kind::conjugate, {}, false, {}, std::nullopt, {a}}));
}

// ---------------------------------------------------------------- validation

Json ValidationReport::to_json(const Group& g) const {
  Json failures_json = Json::array();
  for (const auto& w : failures) {
    Json elems = Json::array();
    for (const auto& x : w.elements) elems.push_back(g.element_to_json(x));
    failures_json.push_back(Json{{"check", w.check}, {"elements", std::move(elems)}, {"residual", w.residual}});
  }
  return Json{{"pass", pass},
              {"exhaustive", exhaustive},
              {"auto_normalized", auto_normalized},
              {"triples_checked", triples_checked},
              {"tolerance", tolerance},
              {"modulus_residual", modulus_residual},
              {"normalization_residual", normalization_residual},
              {"identity_residual", identity_residual},
              {"failures", std::move(failures_json)}};
}

GroupElement random_element(const Group& g, int radius, std::mt19937_64& rng) {
  switch (g.kind()) {
    case GroupKind::finite_table:
    case GroupKind::extension: {
      std::uniform_int_distribution<std::size_t> pick(0, g.order() - 1);
      return g.element_at(pick(rng));
    }
    case GroupKind::free: {
      if (g.rank() == 0) return g.identity();
      std::uniform_int_distribution<int> len(0, radius);
      std::uniform_int_distribution<int> letter(0, 2 * g.rank() - 1);
      const int n = len(rng);
      std::vector<std::int32_t> w;
      while (static_cast<int>(w.size()) < n) {
        const int c = letter(rng);
        const std::int32_t l = (c / 2 + 1) * (c % 2 == 0 ? 1 : -1);
        if (!w.empty() && w.back() == -l) continue;
        w.push_back(l);
      }
      return Word{std::move(w)};
    }
    case GroupKind::int_lattice: {
      std::vector<std::int64_t> v(g.dim(), 0);
      if (g.dim() == 0) return LatticeVector{v};
      std::uniform_int_distribution<int> len(0, radius);
      std::uniform_int_distribution<int> coord(0, 2 * g.dim() - 1);
      const int n = len(rng);
      for (int s = 0; s < n; ++s) {
        const int c = coord(rng);
        v[c / 2] += c % 2 == 0 ? 1 : -1;
      }
      return LatticeVector{std::move(v)};
    }
  }
  return g.identity();
}

ValidationReport validate(const Cocycle& sigma, const ValidateOptions& options) {
  const Group& g = sigma.group();
  ValidationReport report;
  report.tolerance = options.tolerance;
  report.auto_normalized = sigma.auto_normalized();
  auto note = [&](const char* check, std::vector<GroupElement> elems, double residual) {
    if (residual > options.tolerance && report.failures.size() < options.max_witnesses)
      report.failures.push_back(CocycleWitness{check, std::move(elems), residual});
  };
  const GroupElement e = g.identity();

  if (g.is_finite()) {
    report.exhaustive = true;
    const std::size_t n = g.order();
    const auto t = sigma.tabulate();
    const auto elems = g.elements();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const double r = std::abs(std::abs(t[i * n + j]) - 1.0);
        report.modulus_residual = std::max(report.modulus_residual, r);
        note("modulus", {elems[i], elems[j]}, r);
      }
    for (std::size_t i = 0; i < n; ++i) {
      const double r = std::max(std::abs(t[i] - 1.0), std::abs(t[i * n] - 1.0));
      report.normalization_residual = std::max(report.normalization_residual, r);
      note("normalization", {elems[i]}, r);
    }
    for (std::uint32_t x = 0; x < n; ++x)
      for (std::uint32_t y = 0; y < n; ++y) {
        const auto xy = g.compose_index(x, y);
        for (std::uint32_t z = 0; z < n; ++z) {
          const auto yz = g.compose_index(y, z);
          const double r = std::abs(t[x * n + y] * t[xy * n + z] - t[x * n + yz] * t[y * n + z]);
          report.identity_residual = std::max(report.identity_residual, r);
          if (r > options.tolerance) note("identity", {elems[x], elems[y], elems[z]}, r);
        }
      }
    report.triples_checked = n * n * n;
  } else {
    std::mt19937_64 rng(options.seed);
    for (std::size_t s = 0; s < options.samples; ++s) {
      const auto x = random_element(g, options.radius, rng);
      const auto y = random_element(g, options.radius, rng);
      const auto z = random_element(g, options.radius, rng);
      const Complex sxy = sigma(x, y);
      const double rm = std::abs(std::abs(sxy) - 1.0);
      report.modulus_residual = std::max(report.modulus_residual, rm);
      note("modulus", {x, y}, rm);
      const double rn = std::max(std::abs(sigma(e, x) - 1.0), std::abs(sigma(x, e) - 1.0));
      report.normalization_residual = std::max(report.normalization_residual, rn);
      note("normalization", {x}, rn);
      const double ri = std::abs(sxy * sigma(g.compose(x, y), z) - sigma(x, g.compose(y, z)) * sigma(y, z));
      report.identity_residual = std::max(report.identity_residual, ri);
      note("identity", {x, y, z}, ri);
    }
    report.triples_checked = options.samples;
  }
  report.pass = report.modulus_residual <= options.tolerance &&
                report.normalization_residual <= options.tolerance && report.identity_residual <= options.tolerance;
  return report;
}

SubgroupTable subgroup_table(const Group& g, std::span<const GroupElement> subgroup) {
  std::vector<GroupElement> elems(subgroup.begin(), subgroup.end());
  for (const auto& x : elems)
    if (!g.contains(x)) throw Error(ErrorCode::backend_mismatch, "subgroup element not in group");
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  if (elems.empty()) throw Error(ErrorCode::not_a_subgroup, "empty set");
  std::unordered_map<GroupElement, std::uint32_t, GroupElementHash> index;
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i], static_cast<std::uint32_t>(i));

  std::vector<std::vector<std::uint32_t>> table(elems.size(), std::vector<std::uint32_t>(elems.size()));
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const auto inv = g.invert(elems[i]);
    if (!index.contains(inv))
      throw Error(ErrorCode::not_a_subgroup, "not closed under inversion, witness " + g.element_to_string(elems[i]));
    for (std::size_t j = 0; j < elems.size(); ++j) {
      const auto p = g.compose(elems[i], elems[j]);
      auto it = index.find(p);
      if (it == index.end())
        throw Error(ErrorCode::not_a_subgroup, "not closed, witness pair (" + g.element_to_string(elems[i]) + ", " +
                                                   g.element_to_string(elems[j]) + ")");
      table[i][j] = it->second;
    }
  }
  return SubgroupTable{std::move(elems), Group::finite_table(std::move(table))};
}

Cocycle restrict(const Cocycle& sigma, std::span<const GroupElement> subgroup) {
  auto sub = subgroup_table(sigma.group(), subgroup);
  const std::size_t n = sub.elements.size();
  std::vector<Complex> values(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) values[i * n + j] = sigma(sub.elements[i], sub.elements[j]);
  return Cocycle::from_table(sub.group, std::move(values));
}

}  // namespace twistlab
