#include <array>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "twistlab/crossed.hpp"
#include "twistlab/fixtures.hpp"
#include "twistlab/json_io.hpp"

using namespace twistlab;
namespace fx = twistlab::fixtures;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(TWISTLAB_DATA_DIR) + "/" + name, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json load(const std::string& name) { return Json::parse(slurp(name)); }

ComplexMatrix matrix_power(const ComplexMatrix& m, int k) {
  ComplexMatrix p = ComplexMatrix::identity(m.rows());
  for (int i = 0; i < k; ++i) p = p * m;
  return p;
}

}  // namespace

TEST_CASE("manifest digests match the shipped files") {
  const Json m = load("manifest.json");
  REQUIRE(m.contains("files"));
  CHECK(m["files"].size() > 50);
  for (const auto& [name, entry] : m["files"].items()) {
    INFO(name);
    CHECK(fnv1a_hex(slurp(name)) == entry["fnv1a"].get<std::string>());
  }
}

TEST_CASE("shipped fixtures reproduce from the builders") {
  CHECK(load("group_q8.json") == fx::quaternion8().to_json());
  CHECK(load("group_s4.json") == fx::symmetric(4).to_json());
  CHECK(load("group_d4.json") == fx::dihedral4().to_json());
  CHECK(load("cocycle_d4_projective.json") == fx::dihedral4_projective().to_json());
  CHECK(load("extension_s4_klein.json") == fx::s4_over_klein().gamma.to_json());
  const auto transfer = fx::z4z4_transfer_cocycles(20, 2024);
  CHECK(load("cocycle_z4xz4_7.json") == transfer[7].to_json());
}

TEST_CASE("frozen convention is the passing one") {
  const Json c = load("convention.json");
  CHECK(c["convention"] == "conjugated");
  CHECK(c["conjugated"]["pass"] == true);
  CHECK(c["as-printed"]["pass"] == false);
  CHECK(std::string(to_string(kDefaultConvention)) == c["convention"].get<std::string>());
}

TEST_CASE("quaternion table matches quaternion arithmetic") {
  using Q = std::array<int, 4>;
  const std::array<Q, 8> q{{{1, 0, 0, 0}, {-1, 0, 0, 0}, {0, 1, 0, 0}, {0, -1, 0, 0},
                            {0, 0, 1, 0}, {0, 0, -1, 0}, {0, 0, 0, 1}, {0, 0, 0, -1}}};
  auto mul = [](const Q& a, const Q& b) -> Q {
    return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3], a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1], a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
  };
  const Group g = fx::quaternion8();
  for (std::uint32_t a = 0; a < 8; ++a)
    for (std::uint32_t b = 0; b < 8; ++b) CHECK(q[g.compose_index(a, b)] == mul(q[a], q[b]));
}

TEST_CASE("dihedral indices follow r^a s^b") {
  const auto elems = fx::dihedral4_elements();
  const Group g = fx::dihedral4();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 2; ++b) {
      const auto& p = elems[fx::dihedral4_index(a, b)];
      for (int x = 0; x < 4; ++x) CHECK(p[x] == (a + (b ? 4 - x : x)) % 4);
    }
  CHECK(g.order() == 8);
}

TEST_CASE("clock and shift matrices realize the clock-shift cocycle") {
  for (int n = 2; n <= 6; ++n) {
    const ComplexMatrix x = fx::shift_matrix(n), z = fx::clock_matrix(n);
    const Cocycle c = fx::clock_shift(n);
    const Group& g = c.group();
    std::vector<ComplexMatrix> u;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) u.push_back(matrix_power(x, a) * matrix_power(z, b));
    double worst = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < u.size(); ++j) {
        const auto k = g.compose_index(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
        const auto s = c(g.element_at(i), g.element_at(j));
        worst = std::max(worst, (u[i] * u[j] - s * u[k]).max_abs());
      }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("projective fixtures are not coboundaries") {
  // A coboundary would give the same blocks as the untwisted algebra.
  CHECK(decompose_blocks(fx::dihedral4_projective()).sorted_sizes() !=
        decompose_blocks(Cocycle::trivial(fx::dihedral4())).sorted_sizes());
  CHECK(decompose_blocks(fx::symmetric4_projective()).sorted_sizes() !=
        decompose_blocks(Cocycle::trivial(fx::symmetric(4))).sorted_sizes());
}

TEST_CASE("extension fixtures carry a full set of cocycles") {
  for (const auto& f : fx::all_extensions()) {
    const auto list = fx::extension_cocycles(f);
    CHECK(list.size() >= 2);
    CHECK(list[0].name == "trivial");
    CHECK(list[1].name == "coboundary");
    for (const auto& c : list) CHECK(validate(c.sigma).pass);
    CHECK(f.k_order * f.lambda_order == f.g.order());
    for (std::uint32_t i = 0; i < f.g.order(); ++i) CHECK(f.from_extension[f.to_extension[i]] == i);
  }
}

TEST_CASE("transported cocycles agree through the identification") {
  const auto f = fx::d4_over_center();
  const Cocycle sigma = fx::dihedral4_projective();
  const Cocycle t = f.transport(sigma);
  double worst = 0;
  for (std::uint32_t a = 0; a < f.g.order(); ++a)
    for (std::uint32_t b = 0; b < f.g.order(); ++b)
      worst = std::max(worst, std::abs(t(f.gamma.element_at(f.to_extension[a]), f.gamma.element_at(f.to_extension[b])) -
                                       sigma(f.g.element_at(a), f.g.element_at(b))));
  CHECK(worst == 0.0);
}
