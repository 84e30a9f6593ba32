#include "twistlab/group.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "twistlab/error.hpp"

namespace twistlab {

namespace {

std::uint32_t letter_key(std::int32_t letter) {
  const std::int32_t gen = letter > 0 ? letter : -letter;
  return static_cast<std::uint32_t>(2 * (gen - 1) + (letter < 0 ? 1 : 0));
}

std::vector<std::uint32_t> canonical_lattice_word(const LatticeVector& v) {
  std::vector<std::uint32_t> word;
  for (std::size_t i = 0; i < v.coords.size(); ++i) {
    const std::int64_t c = v.coords[i];
    const std::uint32_t key = static_cast<std::uint32_t>(2 * i + (c < 0 ? 1 : 0));
    for (std::int64_t n = 0; n < (c < 0 ? -c : c); ++n) word.push_back(key);
  }
  return word;
}

std::size_t hash_mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t saturating_add(std::size_t a, std::size_t b) {
  return a > std::numeric_limits<std::size_t>::max() - b ? std::numeric_limits<std::size_t>::max() : a + b;
}

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) return 0;
  return a > std::numeric_limits<std::size_t>::max() / b ? std::numeric_limits<std::size_t>::max() : a * b;
}

[[noreturn]] void mismatch(const char* what) { throw Error(ErrorCode::backend_mismatch, what); }

}  // namespace

std::strong_ordering GroupElement::operator<=>(const GroupElement& other) const {
  if (value_.index() != other.value_.index()) return value_.index() <=> other.value_.index();
  return std::visit(
      [&](const auto& lhs) -> std::strong_ordering {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(other.value_);
        if constexpr (std::is_same_v<T, FiniteIndex>) {
          return lhs.value <=> rhs.value;
        } else if constexpr (std::is_same_v<T, Word>) {
          if (lhs.letters.size() != rhs.letters.size()) return lhs.letters.size() <=> rhs.letters.size();
          for (std::size_t i = 0; i < lhs.letters.size(); ++i) {
            const auto a = letter_key(lhs.letters[i]), b = letter_key(rhs.letters[i]);
            if (a != b) return a <=> b;
          }
          return std::strong_ordering::equal;
        } else if constexpr (std::is_same_v<T, LatticeVector>) {
          const auto a = canonical_lattice_word(lhs), b = canonical_lattice_word(rhs);
          if (a.size() != b.size()) return a.size() <=> b.size();
          if (auto c = a <=> b; c != 0) return c;
          return lhs.coords.size() <=> rhs.coords.size();
        } else {
          if (lhs.h != rhs.h) return lhs.h <=> rhs.h;
          return lhs.k <=> rhs.k;
        }
      },
      value_);
}

std::size_t GroupElement::hash() const {
  std::size_t h = value_.index();
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FiniteIndex>) {
          h = hash_mix(h, v.value);
        } else if constexpr (std::is_same_v<T, Word>) {
          for (auto l : v.letters) h = hash_mix(h, static_cast<std::size_t>(static_cast<std::int64_t>(l)));
        } else if constexpr (std::is_same_v<T, LatticeVector>) {
          for (auto c : v.coords) h = hash_mix(h, static_cast<std::size_t>(c));
        } else {
          h = hash_mix(hash_mix(h, v.k), v.h);
        }
      },
      value_);
  return h;
}

Word reduce_word(std::vector<std::int32_t> letters) {
  std::vector<std::int32_t> out;
  out.reserve(letters.size());
  for (auto l : letters) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return Word{std::move(out)};
}

std::string format_word(const Word& w) {
  if (w.letters.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) out += ' ';
    const auto l = w.letters[i];
    out += "x" + std::to_string(l > 0 ? l : -l);
    if (l < 0) out += "^-1";
  }
  return out;
}

Word parse_word(const std::string& text, int rank) {
  std::istringstream in(text);
  std::string token;
  std::vector<std::int32_t> letters;
  while (in >> token) {
    if (token == "e") continue;
    if (token.size() < 2 || token[0] != 'x')
      throw Error(ErrorCode::parse_error, "bad word token '" + token + "'");
    const auto caret = token.find('^');
    int gen = 0;
    long exponent = 1;
    try {
      std::size_t used = 0;
      gen = std::stoi(token.substr(1, caret == std::string::npos ? std::string::npos : caret - 1), &used);
      if (caret != std::string::npos) exponent = std::stol(token.substr(caret + 1));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::parse_error, "bad word token '" + token + "'");
    }
    if (gen < 1 || gen > rank) throw Error(ErrorCode::parse_error, "generator out of range in '" + token + "'");
    const std::int32_t letter = exponent < 0 ? -gen : gen;
    for (long n = 0; n < std::labs(exponent); ++n) letters.push_back(letter);
  }
  return reduce_word(std::move(letters));
}

struct Group::Impl {
  GroupKind kind{};
  std::uint32_t order = 0;
  std::vector<std::uint32_t> table;
  std::vector<std::uint32_t> inverse;
  int rank = 0;
  int dim = 0;
  std::optional<ExtensionData> ext;
};

Group Group::finite_table(std::vector<std::vector<std::uint32_t>> rows) {
  const std::size_t n = rows.size();
  if (n == 0) throw Error(ErrorCode::invalid_group, "empty multiplication table");
  auto impl = std::make_shared<Impl>();
  impl->kind = GroupKind::finite_table;
  impl->order = static_cast<std::uint32_t>(n);
  impl->table.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw Error(ErrorCode::invalid_group, "table is not square");
    std::vector<bool> seen(n, false);
    for (std::size_t j = 0; j < n; ++j) {
      const auto v = rows[i][j];
      if (v >= n) throw Error(ErrorCode::invalid_group, "table entry out of range");
      if (seen[v]) throw Error(ErrorCode::invalid_group, "row " + std::to_string(i) + " is not a permutation");
      seen[v] = true;
      impl->table[i * n + j] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (impl->table[i] != i || impl->table[i * n] != i)
      throw Error(ErrorCode::invalid_group, "index 0 is not the identity");
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        const auto ab = impl->table[a * n + b], bc = impl->table[b * n + c];
        if (impl->table[ab * n + c] != impl->table[a * n + bc])
          throw Error(ErrorCode::invalid_group, "not associative at (" + std::to_string(a) + "," + std::to_string(b) +
                                                    "," + std::to_string(c) + ")");
      }
  impl->inverse.resize(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (impl->table[a * n + b] == 0) impl->inverse[a] = static_cast<std::uint32_t>(b);
  return Group(std::move(impl));
}

Group Group::free(int rank) {
  if (rank < 0) throw Error(ErrorCode::invalid_group, "negative rank");
  auto impl = std::make_shared<Impl>();
  impl->kind = GroupKind::free;
  impl->rank = rank;
  return Group(std::move(impl));
}

Group Group::int_lattice(int dim) {
  if (dim < 0) throw Error(ErrorCode::invalid_group, "negative dimension");
  auto impl = std::make_shared<Impl>();
  impl->kind = GroupKind::int_lattice;
  impl->dim = dim;
  return Group(std::move(impl));
}

Group build_extension(const Group& k, const Group& lambda, const std::vector<std::vector<std::uint32_t>>& action,
                      const std::vector<std::uint32_t>& factor_set) {
  if (!k.is_finite() || !lambda.is_finite())
    throw Error(ErrorCode::unsupported, "extensions need finite K and finite Lambda");
  const std::uint32_t nk = static_cast<std::uint32_t>(k.order());
  const std::uint32_t nl = static_cast<std::uint32_t>(lambda.order());
  auto kmul = [&](std::uint32_t a, std::uint32_t b) { return k.compose_index(a, b); };
  auto lmul = [&](std::uint32_t a, std::uint32_t b) { return lambda.compose_index(a, b); };

  if (action.size() != nl) throw Error(ErrorCode::invalid_action, "action needs one permutation per Lambda element");
  for (std::uint32_t h = 0; h < nl; ++h) {
    const auto& phi = action[h];
    if (phi.size() != nk) throw Error(ErrorCode::invalid_action, "permutation of wrong size at h=" + std::to_string(h));
    std::vector<bool> seen(nk, false);
    for (auto v : phi) {
      if (v >= nk || seen[v]) throw Error(ErrorCode::invalid_action, "not a permutation at h=" + std::to_string(h));
      seen[v] = true;
    }
    for (std::uint32_t a = 0; a < nk; ++a)
      for (std::uint32_t b = 0; b < nk; ++b)
        if (phi[kmul(a, b)] != kmul(phi[a], phi[b]))
          throw Error(ErrorCode::invalid_action, "phi_h is not a homomorphism, witness (h,a,b)=(" + std::to_string(h) +
                                                     "," + std::to_string(a) + "," + std::to_string(b) + ")");
  }
  for (std::uint32_t a = 0; a < nk; ++a)
    if (action[0][a] != a) throw Error(ErrorCode::invalid_action, "phi_e is not the identity");

  if (factor_set.size() != static_cast<std::size_t>(nl) * nl)
    throw Error(ErrorCode::invalid_factor_set, "factor set needs |Lambda|^2 entries");
  auto kappa = [&](std::uint32_t h1, std::uint32_t h2) { return factor_set[h1 * nl + h2]; };
  for (auto v : factor_set)
    if (v >= nk) throw Error(ErrorCode::invalid_factor_set, "factor set value out of range");
  for (std::uint32_t h = 0; h < nl; ++h)
    if (kappa(0, h) != 0 || kappa(h, 0) != 0)
      throw Error(ErrorCode::invalid_factor_set, "factor set not normalized at h=" + std::to_string(h));
  for (std::uint32_t h1 = 0; h1 < nl; ++h1)
    for (std::uint32_t h2 = 0; h2 < nl; ++h2)
      for (std::uint32_t h3 = 0; h3 < nl; ++h3) {
        const auto lhs = kmul(action[h1][kappa(h2, h3)], kappa(h1, lmul(h2, h3)));
        const auto rhs = kmul(kappa(h1, h2), kappa(lmul(h1, h2), h3));
        if (lhs != rhs)
          throw Error(ErrorCode::invalid_factor_set, "cocycle condition fails, witness (h1,h2,h3)=(" +
                                                         std::to_string(h1) + "," + std::to_string(h2) + "," +
                                                         std::to_string(h3) + ")");
      }
  // phi_h1 o phi_h2 = Ad(kappa(h1,h2)) o phi_h1h2, needed for associativity.
  for (std::uint32_t h1 = 0; h1 < nl; ++h1)
    for (std::uint32_t h2 = 0; h2 < nl; ++h2) {
      const auto c = kappa(h1, h2);
      const auto cinv = k.invert_index(c);
      const auto h12 = lmul(h1, h2);
      for (std::uint32_t a = 0; a < nk; ++a)
        if (action[h1][action[h2][a]] != kmul(kmul(c, action[h12][a]), cinv))
          throw Error(ErrorCode::invalid_action, "action incompatible with factor set, witness (h1,h2,k)=(" +
                                                     std::to_string(h1) + "," + std::to_string(h2) + "," +
                                                     std::to_string(a) + ")");
    }

  auto impl = std::make_shared<Group::Impl>();
  impl->kind = GroupKind::extension;
  const std::uint32_t n = nk * nl;
  impl->order = n;
  impl->table.resize(static_cast<std::size_t>(n) * n);
  for (std::uint32_t x = 0; x < n; ++x) {
    const std::uint32_t k1 = x % nk, h1 = x / nk;
    for (std::uint32_t y = 0; y < n; ++y) {
      const std::uint32_t k2 = y % nk, h2 = y / nk;
      const auto kk = kmul(kmul(k1, action[h1][k2]), kappa(h1, h2));
      impl->table[static_cast<std::size_t>(x) * n + y] = kk + nk * lmul(h1, h2);
    }
  }
  impl->inverse.resize(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    const std::uint32_t kx = x % nk, h = x / nk;
    const std::uint32_t hinv = lambda.invert_index(h);
    // (k, h)^-1 = (kappa(h^-1, h)^-1 phi_{h^-1}(k^-1), h^-1)
    const auto kinv = kmul(k.invert_index(kappa(hinv, h)), action[hinv][k.invert_index(kx)]);
    impl->inverse[x] = kinv + nk * hinv;
    if (impl->table[static_cast<std::size_t>(x) * n + impl->inverse[x]] != 0)
      throw Error(ErrorCode::invalid_factor_set, "inverse formula failed; extension data inconsistent");
  }
  impl->ext = ExtensionData{k, lambda, action, factor_set};
  return Group(std::move(impl));
}

GroupKind Group::kind() const { return impl_->kind; }

bool Group::is_finite() const {
  return impl_->kind == GroupKind::finite_table || impl_->kind == GroupKind::extension;
}

std::size_t Group::order() const {
  if (!is_finite()) throw Error(ErrorCode::not_finite, "group is infinite");
  return impl_->order;
}

GroupElement Group::identity() const {
  switch (impl_->kind) {
    case GroupKind::finite_table: return FiniteIndex{0};
    case GroupKind::free: return Word{};
    case GroupKind::int_lattice: return LatticeVector{std::vector<std::int64_t>(impl_->dim, 0)};
    case GroupKind::extension: return ExtPair{0, 0};
  }
  return {};
}

bool Group::contains(const GroupElement& g) const {
  switch (impl_->kind) {
    case GroupKind::finite_table: {
      const auto* v = g.get_if<FiniteIndex>();
      return v && v->value < impl_->order;
    }
    case GroupKind::free: {
      const auto* w = g.get_if<Word>();
      if (!w) return false;
      for (std::size_t i = 0; i < w->letters.size(); ++i) {
        const auto l = w->letters[i];
        if (l == 0 || std::abs(l) > impl_->rank) return false;
        if (i > 0 && w->letters[i - 1] == -l) return false;
      }
      return true;
    }
    case GroupKind::int_lattice: {
      const auto* v = g.get_if<LatticeVector>();
      return v && v->coords.size() == static_cast<std::size_t>(impl_->dim);
    }
    case GroupKind::extension: {
      const auto* p = g.get_if<ExtPair>();
      return p && p->k < impl_->ext->k.order() && p->h < impl_->ext->lambda.order();
    }
  }
  return false;
}

bool Group::is_identity(const GroupElement& g) const { return g == identity(); }

GroupElement Group::compose(const GroupElement& a, const GroupElement& b) const {
  if (!contains(a) || !contains(b)) mismatch("element does not belong to this group");
  switch (impl_->kind) {
    case GroupKind::finite_table:
      return FiniteIndex{compose_index(a.get_if<FiniteIndex>()->value, b.get_if<FiniteIndex>()->value)};
    case GroupKind::free: {
      const auto& wa = a.get_if<Word>()->letters;
      const auto& wb = b.get_if<Word>()->letters;
      std::size_t cancel = 0;
      while (cancel < wa.size() && cancel < wb.size() && wa[wa.size() - 1 - cancel] == -wb[cancel]) ++cancel;
      std::vector<std::int32_t> out;
      out.reserve(wa.size() + wb.size() - 2 * cancel);
      out.insert(out.end(), wa.begin(), wa.end() - static_cast<std::ptrdiff_t>(cancel));
      out.insert(out.end(), wb.begin() + static_cast<std::ptrdiff_t>(cancel), wb.end());
      return Word{std::move(out)};
    }
    case GroupKind::int_lattice: {
      auto v = a.get_if<LatticeVector>()->coords;
      const auto& w = b.get_if<LatticeVector>()->coords;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += w[i];
      return LatticeVector{std::move(v)};
    }
    case GroupKind::extension: {
      const auto nk = static_cast<std::uint32_t>(impl_->ext->k.order());
      const auto pa = *a.get_if<ExtPair>(), pb = *b.get_if<ExtPair>();
      const auto r = compose_index(pa.k + nk * pa.h, pb.k + nk * pb.h);
      return ExtPair{r % nk, r / nk};
    }
  }
  return {};
}

GroupElement Group::invert(const GroupElement& a) const {
  if (!contains(a)) mismatch("element does not belong to this group");
  switch (impl_->kind) {
    case GroupKind::finite_table: return FiniteIndex{impl_->inverse[a.get_if<FiniteIndex>()->value]};
    case GroupKind::free: {
      const auto& w = a.get_if<Word>()->letters;
      std::vector<std::int32_t> out(w.rbegin(), w.rend());
      for (auto& l : out) l = -l;
      return Word{std::move(out)};
    }
    case GroupKind::int_lattice: {
      auto v = a.get_if<LatticeVector>()->coords;
      for (auto& c : v) c = -c;
      return LatticeVector{std::move(v)};
    }
    case GroupKind::extension: {
      const auto nk = static_cast<std::uint32_t>(impl_->ext->k.order());
      const auto p = *a.get_if<ExtPair>();
      const auto r = impl_->inverse[p.k + nk * p.h];
      return ExtPair{r % nk, r / nk};
    }
  }
  return {};
}

std::size_t Group::index_of(const GroupElement& g) const {
  if (!is_finite()) throw Error(ErrorCode::not_finite, "index_of on an infinite group");
  if (!contains(g)) mismatch("element does not belong to this group");
  if (impl_->kind == GroupKind::finite_table) return g.get_if<FiniteIndex>()->value;
  const auto p = *g.get_if<ExtPair>();
  return p.k + impl_->ext->k.order() * p.h;
}

GroupElement Group::element_at(std::size_t index) const {
  if (!is_finite()) throw Error(ErrorCode::not_finite, "element_at on an infinite group");
  if (index >= impl_->order) throw Error(ErrorCode::invalid_argument, "element index out of range");
  if (impl_->kind == GroupKind::finite_table) return FiniteIndex{static_cast<std::uint32_t>(index)};
  const auto nk = impl_->ext->k.order();
  return ExtPair{static_cast<std::uint32_t>(index % nk), static_cast<std::uint32_t>(index / nk)};
}

std::vector<GroupElement> Group::elements() const {
  std::vector<GroupElement> out;
  out.reserve(order());
  for (std::size_t i = 0; i < impl_->order; ++i) out.push_back(element_at(i));
  return out;
}

std::uint32_t Group::compose_index(std::uint32_t a, std::uint32_t b) const {
  return impl_->table[static_cast<std::size_t>(a) * impl_->order + b];
}

std::uint32_t Group::invert_index(std::uint32_t a) const { return impl_->inverse[a]; }

int Group::rank() const {
  if (impl_->kind != GroupKind::free) mismatch("rank() needs a free group");
  return impl_->rank;
}

int Group::dim() const {
  if (impl_->kind != GroupKind::int_lattice) mismatch("dim() needs an int-lattice");
  return impl_->dim;
}

const ExtensionData& Group::extension() const {
  if (impl_->kind != GroupKind::extension) mismatch("extension() needs an extension group");
  return *impl_->ext;
}

std::size_t Group::word_length(const GroupElement& g) const {
  if (!contains(g)) mismatch("element does not belong to this group");
  switch (impl_->kind) {
    case GroupKind::free: return g.get_if<Word>()->letters.size();
    case GroupKind::int_lattice: {
      std::size_t s = 0;
      for (auto c : g.get_if<LatticeVector>()->coords) s += static_cast<std::size_t>(c < 0 ? -c : c);
      return s;
    }
    default: return 0;
  }
}

std::size_t Group::ball_size(int r) const {
  if (r < 0) return 0;
  switch (impl_->kind) {
    case GroupKind::finite_table:
    case GroupKind::extension: return impl_->order;
    case GroupKind::free: {
      if (impl_->rank == 0) return 1;
      const std::size_t k2 = 2 * static_cast<std::size_t>(impl_->rank);
      std::size_t total = 1, sphere = k2;
      for (int n = 1; n <= r; ++n) {
        total = saturating_add(total, sphere);
        sphere = saturating_mul(sphere, k2 - 1);
      }
      return total;
    }
    case GroupKind::int_lattice: {
      // sum_i 2^i C(d, i) C(r, i)
      const int d = impl_->dim;
      long double total = 0.0L, cd = 1.0L, cr = 1.0L, p2 = 1.0L;
      for (int i = 0; i <= std::min(d, r); ++i) {
        total += p2 * cd * cr;
        cd = cd * (d - i) / (i + 1);
        cr = cr * (r - i) / (i + 1);
        p2 *= 2.0L;
      }
      if (total >= static_cast<long double>(std::numeric_limits<std::size_t>::max()))
        return std::numeric_limits<std::size_t>::max();
      return static_cast<std::size_t>(std::llround(static_cast<double>(total)));
    }
  }
  return 0;
}

std::vector<GroupElement> Group::enumerate_ball(int r) const {
  if (r < 0) throw Error(ErrorCode::invalid_argument, "negative radius");
  switch (impl_->kind) {
    case GroupKind::finite_table:
    case GroupKind::extension: return elements();
    case GroupKind::free: {
      std::vector<GroupElement> out;
      out.reserve(ball_size(r));
      out.emplace_back(Word{});
      std::vector<std::vector<std::int32_t>> sphere{{}};
      std::vector<std::int32_t> letters;
      for (int g = 1; g <= impl_->rank; ++g) {
        letters.push_back(g);
        letters.push_back(-g);
      }
      for (int n = 1; n <= r; ++n) {
        std::vector<std::vector<std::int32_t>> next;
        next.reserve(sphere.size() * (letters.size() - (n > 1 ? 1 : 0)));
        for (const auto& w : sphere)
          for (auto l : letters) {
            if (!w.empty() && w.back() == -l) continue;
            auto nw = w;
            nw.push_back(l);
            next.push_back(std::move(nw));
          }
        for (const auto& w : next) out.emplace_back(Word{w});
        sphere = std::move(next);
      }
      return out;
    }
    case GroupKind::int_lattice: {
      std::vector<GroupElement> out;
      std::vector<std::int64_t> v(impl_->dim, 0);
      std::function<void(int, int)> rec = [&](int i, int budget) {
        if (i == impl_->dim) {
          out.emplace_back(LatticeVector{v});
          return;
        }
        for (int c = -budget; c <= budget; ++c) {
          v[i] = c;
          rec(i + 1, budget - std::abs(c));
        }
        v[i] = 0;
      };
      rec(0, r);
      std::sort(out.begin(), out.end());
      return out;
    }
  }
  return {};
}

Json Group::to_json() const {
  switch (impl_->kind) {
    case GroupKind::finite_table: {
      Json table = Json::array();
      const auto n = impl_->order;
      for (std::uint32_t i = 0; i < n; ++i) {
        Json row = Json::array();
        for (std::uint32_t j = 0; j < n; ++j) row.push_back(impl_->table[static_cast<std::size_t>(i) * n + j]);
        table.push_back(std::move(row));
      }
      return Json{{"kind", "finite-table"}, {"order", n}, {"table", std::move(table)}};
    }
    case GroupKind::free: return Json{{"kind", "free"}, {"rank", impl_->rank}};
    case GroupKind::int_lattice: return Json{{"kind", "int-lattice"}, {"dim", impl_->dim}};
    case GroupKind::extension: {
      const auto& e = *impl_->ext;
      Json action = Json::object();
      for (std::size_t h = 0; h < e.action.size(); ++h) {
        bool trivial = true;
        for (std::size_t a = 0; a < e.action[h].size(); ++a) trivial = trivial && e.action[h][a] == a;
        if (!trivial) action[std::to_string(h)] = e.action[h];
      }
      Json factor = Json::object();
      const auto nl = e.lambda.order();
      for (std::size_t h1 = 0; h1 < nl; ++h1)
        for (std::size_t h2 = 0; h2 < nl; ++h2)
          if (auto v = e.factor_set[h1 * nl + h2]; v != 0)
            factor[std::to_string(h1) + "," + std::to_string(h2)] = v;
      return Json{{"kind", "extension"},
                  {"k", e.k.to_json()},
                  {"lambda", e.lambda.to_json()},
                  {"action", std::move(action)},
                  {"factorSet", std::move(factor)}};
    }
  }
  return {};
}

Group Group::from_json(const Json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "finite-table") {
      auto table = j.at("table").get<std::vector<std::vector<std::uint32_t>>>();
      if (j.contains("order") && j.at("order").get<std::size_t>() != table.size())
        throw Error(ErrorCode::invalid_group, "order does not match table size");
      return finite_table(std::move(table));
    }
    if (kind == "free") return free(j.at("rank").get<int>());
    if (kind == "int-lattice") return int_lattice(j.at("dim").get<int>());
    if (kind == "extension") {
      const Group k = from_json(j.at("k"));
      const Group lambda = from_json(j.at("lambda"));
      if (!k.is_finite() || !lambda.is_finite())
        throw Error(ErrorCode::unsupported, "extensions need finite K and finite Lambda");
      const auto nk = k.order(), nl = lambda.order();
      std::vector<std::vector<std::uint32_t>> action(nl);
      for (std::size_t h = 0; h < nl; ++h) {
        action[h].resize(nk);
        for (std::size_t a = 0; a < nk; ++a) action[h][a] = static_cast<std::uint32_t>(a);
      }
      std::vector<std::uint32_t> factor(nl * nl, 0);
      if (j.contains("action"))
        for (const auto& [key, perm] : j.at("action").items()) {
          const auto h = std::stoul(key);
          if (h >= nl) throw Error(ErrorCode::invalid_action, "action key out of range: " + key);
          action[h] = perm.get<std::vector<std::uint32_t>>();
        }
      if (j.contains("factorSet"))
        for (const auto& [key, value] : j.at("factorSet").items()) {
          const auto comma = key.find(',');
          if (comma == std::string::npos) throw Error(ErrorCode::parse_error, "factorSet key must be 'h1,h2'");
          const auto h1 = std::stoul(key.substr(0, comma)), h2 = std::stoul(key.substr(comma + 1));
          if (h1 >= nl || h2 >= nl) throw Error(ErrorCode::invalid_factor_set, "factorSet key out of range: " + key);
          factor[h1 * nl + h2] = value.get<std::uint32_t>();
        }
      return build_extension(k, lambda, action, factor);
    }
    throw Error(ErrorCode::parse_error, "unknown group kind '" + kind + "'");
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("group descriptor: ") + e.what());
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const Error*>(&e)) throw;
    throw Error(ErrorCode::parse_error, std::string("group descriptor: ") + e.what());
  }
}

Json Group::element_to_json(const GroupElement& g) const {
  if (!contains(g)) mismatch("element does not belong to this group");
  switch (impl_->kind) {
    case GroupKind::finite_table: return g.get_if<FiniteIndex>()->value;
    case GroupKind::free: return format_word(*g.get_if<Word>());
    case GroupKind::int_lattice: return g.get_if<LatticeVector>()->coords;
    case GroupKind::extension: {
      const auto p = *g.get_if<ExtPair>();
      const auto& lambda = impl_->ext->lambda;
      return Json::array({p.k, lambda.element_to_json(lambda.element_at(p.h))});
    }
  }
  return {};
}

GroupElement Group::element_from_json(const Json& j) const {
  try {
    switch (impl_->kind) {
      case GroupKind::finite_table: {
        const auto v = j.get<std::uint32_t>();
        if (v >= impl_->order) throw Error(ErrorCode::parse_error, "element index out of range");
        return FiniteIndex{v};
      }
      case GroupKind::free: return parse_word(j.get<std::string>(), impl_->rank);
      case GroupKind::int_lattice: {
        auto coords = j.get<std::vector<std::int64_t>>();
        if (coords.size() != static_cast<std::size_t>(impl_->dim))
          throw Error(ErrorCode::parse_error, "lattice vector of wrong dimension");
        return LatticeVector{std::move(coords)};
      }
      case GroupKind::extension: {
        if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::parse_error, "extension element must be [k, h]");
        const auto k = j[0].get<std::uint32_t>();
        if (k >= impl_->ext->k.order()) throw Error(ErrorCode::parse_error, "K index out of range");
        const auto& lambda = impl_->ext->lambda;
        const auto h = lambda.index_of(lambda.element_from_json(j[1]));
        return ExtPair{k, static_cast<std::uint32_t>(h)};
      }
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("group element: ") + e.what());
  }
  return {};
}

std::string Group::element_to_string(const GroupElement& g) const {
  const Json j = element_to_json(g);
  return j.is_string() ? j.get<std::string>() : j.dump();
}

bool Group::operator==(const Group& other) const {
  if (impl_ == other.impl_) return true;
  if (impl_->kind != other.impl_->kind) return false;
  switch (impl_->kind) {
    case GroupKind::finite_table: return impl_->table == other.impl_->table;
    case GroupKind::free: return impl_->rank == other.impl_->rank;
    case GroupKind::int_lattice: return impl_->dim == other.impl_->dim;
    case GroupKind::extension: {
      const auto &a = *impl_->ext, &b = *other.impl_->ext;
      return a.k == b.k && a.lambda == b.lambda && a.action == b.action && a.factor_set == b.factor_set;
    }
  }
  return false;
}

}  // namespace twistlab
