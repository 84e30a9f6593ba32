#include "twistlab/fixtures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "twistlab/error.hpp"

namespace twistlab::fixtures {

namespace {

using Table = std::vector<std::vector<std::uint32_t>>;

Permutation compose(const Permutation& g, const Permutation& h) {
  Permutation out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) out[x] = g[static_cast<std::size_t>(h[x])];
  return out;
}

std::size_t position(const std::vector<Permutation>& sorted, const Permutation& p) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), p);
  if (it == sorted.end() || *it != p) throw Error(ErrorCode::invalid_group, "permutation outside the group");
  return static_cast<std::size_t>(it - sorted.begin());
}

using Quaternion = std::array<double, 4>;  // w, x, y, z

Quaternion qmul(const Quaternion& a, const Quaternion& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3], a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1], a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

Quaternion qconj(const Quaternion& a) { return {a[0], -a[1], -a[2], -a[3]}; }

ComplexMatrix su2(const Quaternion& q) {
  const Complex i(0.0, 1.0);
  return ComplexMatrix::from_rows({{q[0] + i * q[1], q[2] + i * q[3]}, {-q[2] + i * q[3], q[0] - i * q[1]}});
}

ComplexMatrix power(const ComplexMatrix& m, int e) {
  ComplexMatrix out = ComplexMatrix::identity(m.rows());
  for (int i = 0; i < e; ++i) out = out * m;
  return out;
}

// Unit quaternions of the binary octahedral group, in a fixed generation order.
std::vector<Quaternion> binary_octahedral() {
  std::vector<Quaternion> out;
  for (int axis = 0; axis < 4; ++axis)
    for (double s : {1.0, -1.0}) {
      Quaternion q{0, 0, 0, 0};
      q[axis] = s;
      out.push_back(q);
    }
  for (int mask = 0; mask < 16; ++mask) {
    Quaternion q;
    for (int b = 0; b < 4; ++b) q[b] = (mask >> b & 1) ? -0.5 : 0.5;
    out.push_back(q);
  }
  const double r = std::numbers::sqrt2 / 2.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (double sa : {1.0, -1.0})
        for (double sb : {1.0, -1.0}) {
          Quaternion q{0, 0, 0, 0};
          q[a] = sa * r;
          q[b] = sb * r;
          out.push_back(q);
        }
  return out;
}

}  // namespace

std::vector<int> product_coordinates(const std::vector<int>& moduli, std::size_t index) {
  std::vector<int> c(moduli.size());
  for (std::size_t i = moduli.size(); i-- > 0;) {
    c[i] = static_cast<int>(index % static_cast<std::size_t>(moduli[i]));
    index /= static_cast<std::size_t>(moduli[i]);
  }
  return c;
}

std::size_t product_index(const std::vector<int>& moduli, const std::vector<int>& coords) {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    const int m = moduli[i];
    idx = idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(((coords[i] % m) + m) % m);
  }
  return idx;
}

Group product_cyclic(const std::vector<int>& moduli) {
  std::size_t n = 1;
  for (int m : moduli) {
    if (m < 1) throw Error(ErrorCode::invalid_argument, "cyclic factor must have positive order");
    n *= static_cast<std::size_t>(m);
  }
  Table t(n, std::vector<std::uint32_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = product_coordinates(moduli, i);
    for (std::size_t j = 0; j < n; ++j) {
      auto b = product_coordinates(moduli, j);
      for (std::size_t c = 0; c < b.size(); ++c) b[c] += a[c];
      t[i][j] = static_cast<std::uint32_t>(product_index(moduli, b));
    }
  }
  return Group::finite_table(std::move(t));
}

Group cyclic(int n) { return product_cyclic({n}); }

std::vector<Permutation> permutation_closure(const std::vector<Permutation>& generators) {
  if (generators.empty()) throw Error(ErrorCode::invalid_argument, "no generators");
  const std::size_t n = generators.front().size();
  Permutation id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<int>(i);
  std::set<Permutation> seen{id};
  std::vector<Permutation> frontier{id};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& p : frontier)
      for (const auto& g : generators) {
        auto q = compose(g, p);
        if (seen.insert(q).second) next.push_back(std::move(q));
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

Group permutation_group(const std::vector<Permutation>& elements) {
  std::vector<Permutation> sorted = elements;
  std::sort(sorted.begin(), sorted.end());
  Table t(sorted.size(), std::vector<std::uint32_t>(sorted.size()));
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = 0; j < sorted.size(); ++j)
      t[i][j] = static_cast<std::uint32_t>(position(sorted, compose(sorted[i], sorted[j])));
  return Group::finite_table(std::move(t));
}

std::vector<Permutation> symmetric_elements(int n) {
  Permutation p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  std::vector<Permutation> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

Group symmetric(int n) { return permutation_group(symmetric_elements(n)); }

std::vector<Permutation> dihedral4_elements() {
  std::vector<Permutation> out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 2; ++b) {
      Permutation p(4);
      for (int x = 0; x < 4; ++x) p[static_cast<std::size_t>(x)] = ((a + (b ? -x : x)) % 4 + 4) % 4;
      out.push_back(p);
    }
  std::sort(out.begin(), out.end());
  return out;
}

Group dihedral4() { return permutation_group(dihedral4_elements()); }

std::size_t dihedral4_index(int a, int b) {
  Permutation p(4);
  for (int x = 0; x < 4; ++x) p[static_cast<std::size_t>(x)] = ((a + (b ? -x : x)) % 4 + 4) % 4;
  return position(dihedral4_elements(), p);
}

Group quaternion8() {
  // 1, -1, i, -i, j, -j, k, -k as integer quaternions.
  std::vector<Quaternion> q;
  for (int axis = 0; axis < 4; ++axis)
    for (double s : {1.0, -1.0}) {
      Quaternion x{0, 0, 0, 0};
      x[axis] = s;
      q.push_back(x);
    }
  Table t(8, std::vector<std::uint32_t>(8));
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      const auto p = qmul(q[i], q[j]);
      t[i][j] = static_cast<std::uint32_t>(std::find(q.begin(), q.end(), p) - q.begin());
    }
  return Group::finite_table(std::move(t));
}

Cocycle bicharacter(const Group& g, int n, const std::vector<std::vector<int>>& m) {
  const std::size_t d = m.size();
  const std::vector<int> moduli(d, n);
  const std::size_t order = g.order();
  std::vector<Complex> values(order * order);
  for (std::size_t i = 0; i < order; ++i) {
    const auto x = product_coordinates(moduli, i);
    for (std::size_t j = 0; j < order; ++j) {
      const auto y = product_coordinates(moduli, j);
      long long e = 0;
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) e += static_cast<long long>(x[r]) * m[r][c] * y[c];
      e = ((e % n) + n) % n;
      values[i * order + j] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / n);
    }
  }
  return Cocycle::from_table(g, std::move(values));
}

Cocycle clock_shift(int n) { return bicharacter(product_cyclic({n, n}), n, {{0, 0}, {1, 0}}); }

ComplexMatrix shift_matrix(int n) {
  ComplexMatrix x(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) x(static_cast<std::size_t>((j + 1) % n), static_cast<std::size_t>(j)) = 1.0;
  return x;
}

ComplexMatrix clock_matrix(int n) {
  std::vector<Complex> d;
  for (int j = 0; j < n; ++j) d.push_back(std::polar(1.0, 2.0 * std::numbers::pi * j / n));
  return ComplexMatrix::diagonal(d);
}

Cocycle cocycle_from_projective(const Group& g, const std::vector<ComplexMatrix>& lifts) {
  const std::size_t n = g.order();
  if (lifts.size() != n) throw Error(ErrorCode::dimension_mismatch, "one lift per element required");
  std::vector<Complex> values(n * n);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) {
      const ComplexMatrix p = lifts[i] * lifts[j];
      const ComplexMatrix& q = lifts[g.compose_index(i, j)];
      Complex num = 0.0, den = 0.0;
      for (std::size_t e = 0; e < p.entries().size(); ++e) {
        num += std::conj(q.entries()[e]) * p.entries()[e];
        den += std::norm(q.entries()[e]);
      }
      const Complex c = num / den;
      if ((p - c * q).max_abs() > 1e-9)
        throw Error(ErrorCode::invalid_argument, "lifts do not form a projective representation");
      values[i * n + j] = c;
    }
  return Cocycle::from_table(g, std::move(values));
}

Cocycle dihedral4_projective() {
  const Complex i(0.0, 1.0);
  const ComplexMatrix r = ComplexMatrix::from_rows({{std::polar(1.0, -std::numbers::pi / 4), 0.0},
                                                    {0.0, std::polar(1.0, std::numbers::pi / 4)}});
  const ComplexMatrix s = ComplexMatrix::from_rows({{0.0, -i}, {-i, 0.0}});
  std::vector<ComplexMatrix> lifts(8);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 2; ++b) lifts[dihedral4_index(a, b)] = power(r, a) * power(s, b);
  return cocycle_from_projective(dihedral4(), lifts);
}

Cocycle symmetric4_projective() {
  const std::array<std::array<double, 3>, 4> diagonals{{{1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {-1, 1, 1}}};
  const auto elements = symmetric_elements(4);
  std::vector<ComplexMatrix> lifts(elements.size());
  std::vector<bool> have(elements.size(), false);
  for (const auto& q : binary_octahedral()) {
    Permutation p(4);
    for (std::size_t d = 0; d < 4; ++d) {
      const Quaternion v{0, diagonals[d][0], diagonals[d][1], diagonals[d][2]};
      const Quaternion w = qmul(qmul(q, v), qconj(q));
      int hit = -1;
      for (std::size_t e = 0; e < 4; ++e) {
        double plus = 0, minus = 0;
        for (int c = 0; c < 3; ++c) {
          plus += std::abs(w[static_cast<std::size_t>(c + 1)] - diagonals[e][static_cast<std::size_t>(c)]);
          minus += std::abs(w[static_cast<std::size_t>(c + 1)] + diagonals[e][static_cast<std::size_t>(c)]);
        }
        if (std::min(plus, minus) < 1e-9) hit = static_cast<int>(e);
      }
      if (hit < 0) throw Error(ErrorCode::invalid_group, "rotation does not permute the cube diagonals");
      p[d] = hit;
    }
    const std::size_t idx = position(elements, p);
    if (!have[idx]) {
      lifts[idx] = su2(q);
      have[idx] = true;
    }
  }
  return cocycle_from_projective(symmetric(4), lifts);
}

Cocycle seeded_coboundary(const Group& g, std::uint64_t seed) {
  return Cocycle::from_coboundary(PhaseFunction::seeded(g, seed));
}

Cocycle ExtensionFixture::transport(const Cocycle& sigma_on_g) const {
  const std::size_t n = g.order();
  std::vector<Complex> values(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      values[i * n + j] = sigma_on_g(g.element_at(from_extension[i]), g.element_at(from_extension[j]));
  return Cocycle::from_table(gamma, std::move(values));
}

ExtensionFixture extension_from_group(const std::string& name, const Group& g, const std::vector<std::uint32_t>& k,
                                      std::vector<std::uint32_t> section) {
  const auto n = static_cast<std::uint32_t>(g.order());
  std::vector<std::uint32_t> ks = k;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::vector<int> kpos(n, -1);
  for (std::size_t i = 0; i < ks.size(); ++i) kpos[ks[i]] = static_cast<int>(i);
  for (std::uint32_t x = 0; x < n; ++x)
    for (auto y : ks)
      if (kpos[g.compose_index(g.compose_index(x, y), g.invert_index(x))] < 0)
        throw Error(ErrorCode::invalid_argument, name + ": kernel is not a normal subgroup");

  // Coset label: smallest index in xK.
  std::vector<std::uint32_t> label(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    std::uint32_t m = n;
    for (auto y : ks) m = std::min(m, g.compose_index(x, y));
    label[x] = m;
  }
  if (section.empty()) {
    std::set<std::uint32_t> reps(label.begin(), label.end());
    section.assign(reps.begin(), reps.end());
  }
  const auto nl = static_cast<std::uint32_t>(section.size());
  if (static_cast<std::size_t>(nl) * ks.size() != n || section.front() != 0)
    throw Error(ErrorCode::invalid_argument, name + ": section must start at e and meet every coset once");
  std::map<std::uint32_t, std::uint32_t> coset;
  for (std::uint32_t h = 0; h < nl; ++h)
    if (!coset.emplace(label[section[h]], h).second)
      throw Error(ErrorCode::invalid_argument, name + ": two section elements in one coset");
  auto coset_of = [&](std::uint32_t x) { return coset.at(label[x]); };
  auto kernel = [&](std::uint32_t x) {
    const int p = kpos[x];
    if (p < 0) throw Error(ErrorCode::invalid_argument, name + ": element expected in the kernel");
    return static_cast<std::uint32_t>(p);
  };

  Table kt(ks.size(), std::vector<std::uint32_t>(ks.size()));
  for (std::size_t i = 0; i < ks.size(); ++i)
    for (std::size_t j = 0; j < ks.size(); ++j) kt[i][j] = kernel(g.compose_index(ks[i], ks[j]));
  Table lt(nl, std::vector<std::uint32_t>(nl));
  for (std::uint32_t a = 0; a < nl; ++a)
    for (std::uint32_t b = 0; b < nl; ++b) lt[a][b] = coset_of(g.compose_index(section[a], section[b]));

  std::vector<std::vector<std::uint32_t>> action(nl, std::vector<std::uint32_t>(ks.size()));
  std::vector<std::uint32_t> factor(static_cast<std::size_t>(nl) * nl);
  for (std::uint32_t h = 0; h < nl; ++h) {
    const auto s = section[h], s_inv = g.invert_index(section[h]);
    for (std::size_t i = 0; i < ks.size(); ++i) action[h][i] = kernel(g.compose_index(g.compose_index(s, ks[i]), s_inv));
    for (std::uint32_t h2 = 0; h2 < nl; ++h2) {
      const auto prod = g.compose_index(s, section[h2]);
      factor[h * nl + h2] = kernel(g.compose_index(prod, g.invert_index(section[lt[h][h2]])));
    }
  }
  ExtensionFixture f{name, g, build_extension(Group::finite_table(kt), Group::finite_table(lt), action, factor), {}, {},
                     0, 0};
  f.k_order = ks.size();
  f.lambda_order = nl;
  f.to_extension.resize(n);
  f.from_extension.resize(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    const auto h = coset_of(x);
    const auto kk = kernel(g.compose_index(x, g.invert_index(section[h])));
    const auto idx = kk + static_cast<std::uint32_t>(ks.size()) * h;
    f.to_extension[x] = idx;
    f.from_extension[idx] = x;
  }
  return f;
}

ExtensionFixture q8_over_center() { return extension_from_group("q8/center", quaternion8(), {0, 1}); }

ExtensionFixture d4_over_center() {
  return extension_from_group("d4/center", dihedral4(),
                              {static_cast<std::uint32_t>(dihedral4_index(0, 0)),
                               static_cast<std::uint32_t>(dihedral4_index(2, 0))});
}

ExtensionFixture s4_over_klein() {
  const auto elements = symmetric_elements(4);
  std::vector<std::uint32_t> klein, stabilizer;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto& p = elements[i];
    bool fixed_point_free_involution = true;
    for (int x = 0; x < 4; ++x)
      if (p[static_cast<std::size_t>(p[static_cast<std::size_t>(x)])] != x || p[static_cast<std::size_t>(x)] == x)
        fixed_point_free_involution = false;
    if (i == 0 || fixed_point_free_involution) klein.push_back(static_cast<std::uint32_t>(i));
    if (p[3] == 3) stabilizer.push_back(static_cast<std::uint32_t>(i));
  }
  return extension_from_group("s4/klein", symmetric(4), klein, stabilizer);
}

ExtensionFixture z3z3_over_z3() { return extension_from_group("z3xz3/z3", product_cyclic({3, 3}), {0, 3, 6}, {0, 1, 2}); }

ExtensionFixture z2z2_direct() { return extension_from_group("z2xz2/z2", product_cyclic({2, 2}), {0, 2}, {0, 1}); }

std::vector<NamedCocycle> extension_cocycles(const ExtensionFixture& f, std::uint64_t seed) {
  std::vector<NamedCocycle> out;
  out.push_back({"trivial", Cocycle::trivial(f.gamma)});
  const Cocycle cob = seeded_coboundary(f.gamma, seed);
  out.push_back({"coboundary", cob});
  std::optional<Cocycle> table;
  if (f.name == "d4/center") table = f.transport(dihedral4_projective());
  if (f.name == "s4/klein") table = f.transport(symmetric4_projective());
  if (f.name == "z3xz3/z3") table = f.transport(clock_shift(3));
  if (f.name == "z2xz2/z2") table = f.transport(clock_shift(2));
  if (table) {
    out.push_back({"table", *table});
    out.push_back({"table*coboundary", multiply(*table, cob)});
  }
  return out;
}

std::vector<ExtensionFixture> all_extensions() {
  return {q8_over_center(), d4_over_center(), s4_over_klein(), z3z3_over_z3(), z2z2_direct()};
}

std::vector<Cocycle> z4z4_transfer_cocycles(std::size_t count, std::uint64_t seed) {
  const Group g = product_cyclic({4, 4});
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> entry(0, 3);
  std::vector<Cocycle> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<std::vector<int>> m(2, std::vector<int>(2));
    for (auto& row : m)
      for (auto& v : row) v = entry(rng);
    out.push_back(multiply(bicharacter(g, 4, m), seeded_coboundary(g, seed + 1 + i)));
  }
  return out;
}

}  // namespace twistlab::fixtures
