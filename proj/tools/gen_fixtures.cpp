// Regenerates the JSON fixtures shipped under data/v1.
//
//   gen_fixtures <output dir>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "twistlab/crossed.hpp"
#include "twistlab/fixtures.hpp"
#include "twistlab/json_io.hpp"
#include "twistlab/version.hpp"

using namespace twistlab;
namespace fx = twistlab::fixtures;
namespace fs = std::filesystem;

namespace {

Json manifest = Json::object();
fs::path out_dir;

void write(const std::string& name, const Json& j, const std::string& what) {
  const std::string text = j.dump(2) + "\n";
  std::ofstream(out_dir / name, std::ios::binary) << text;
  manifest[name] = Json{{"description", what}, {"fnv1a", fnv1a_hex(text)}};
}

Json terms(const Group& g, const std::vector<std::pair<Json, Complex>>& list) {
  AlgebraElement a(g);
  for (const auto& [x, c] : list) a.add(g.element_from_json(x), c);
  return a.to_json();
}

// Residual of the twisted-action axioms under both conventions on the Q8
// fixture with a nontrivial coboundary; the passing variant is the frozen default.
Json convention_probe() {
  const auto f = fx::q8_over_center();
  const Cocycle sigma = fx::seeded_coboundary(f.gamma, 11);
  Json j = Json::object();
  std::string chosen;
  for (auto c : {Convention::as_printed, Convention::conjugated}) {
    const auto report = verify_twisted_action(induced_action_data(sigma, c));
    j[std::string(to_string(c))] = Json{{"pass", report.pass}, {"max_residual", report.max_residual()}};
    if (report.pass && chosen.empty()) chosen = to_string(c);
  }
  j["fixture"] = f.name;
  j["cocycle"] = sigma.to_json();
  j["convention"] = chosen;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_fixtures <output dir>\n";
    return 1;
  }
  out_dir = argv[1];
  fs::create_directories(out_dir);

  const Group z2 = fx::cyclic(2), z3 = fx::cyclic(3), z6 = fx::cyclic(6);
  const Group s3 = fx::symmetric(3), s4 = fx::symmetric(4), d4 = fx::dihedral4(), q8 = fx::quaternion8();
  const Group z4z4 = fx::product_cyclic({4, 4});
  const Group f2 = Group::free(2);

  write("group_z2.json", z2.to_json(), "cyclic group of order 2");
  write("group_z3.json", z3.to_json(), "cyclic group of order 3");
  write("group_z6.json", z6.to_json(), "cyclic group of order 6");
  write("group_s3.json", s3.to_json(), "S3, permutations in lexicographic order");
  write("group_s4.json", s4.to_json(), "S4, permutations in lexicographic order");
  write("group_d4.json", d4.to_json(), "symmetries of a square");
  write("group_q8.json", q8.to_json(), "quaternion group 1,-1,i,-i,j,-j,k,-k");
  write("group_z4xz4.json", z4z4.to_json(), "Z4 x Z4, (a, b) at index 4a + b");
  write("group_f2.json", f2.to_json(), "free group on x1, x2");

  write("cocycle_trivial.json", Json{{"kind", "trivial"}}, "trivial cocycle (any group)");
  write("cocycle_z2_sign.json", Cocycle::from_table(z2, {1, 1, 1, -1}).to_json(), "sigma(1,1) = -1 on Z2");
  write("cocycle_z2_broken.json", Json{{"kind", "table"}, {"values", complex_list_to_json({1, 1, 1, {0, 2}})}},
        "table with |sigma(1,1)| = 2, fails validation");
  write("cocycle_d4_projective.json", fx::dihedral4_projective().to_json(), "nontrivial class on D4");
  write("cocycle_s4_projective.json", fx::symmetric4_projective().to_json(), "nontrivial class on S4");
  write("cocycle_f2_coboundary.json", fx::seeded_coboundary(f2, 42).to_json(), "d beta on F2, seeded beta");
  for (int n = 2; n <= 6; ++n) {
    const Cocycle c = fx::clock_shift(n);
    write("group_z" + std::to_string(n) + "xz" + std::to_string(n) + ".json", c.group().to_json(),
          "(Z_n)^2, (a, b) at index n a + b");
    write("cocycle_clock_shift_" + std::to_string(n) + ".json", c.to_json(), "q^{bc} on (Z_n)^2");
  }
  const auto transfer = fx::z4z4_transfer_cocycles(20, 2024);
  for (std::size_t i = 0; i < transfer.size(); ++i)
    write("cocycle_z4xz4_" + std::to_string(i) + ".json", transfer[i].to_json(), "bicharacter x coboundary on Z4 x Z4");

  for (const auto& f : fx::all_extensions()) {
    std::string stem = f.name;
    for (auto& ch : stem)
      if (ch == '/') ch = '_';
    write("extension_" + stem + ".json", f.gamma.to_json(), f.name + " as an extension (k, h)");
    for (const auto& c : fx::extension_cocycles(f)) {
      std::string cname = c.name;
      for (auto& ch : cname)
        if (ch == '*') ch = '_';
      write("extension_" + stem + "_" + cname + ".json", c.sigma.to_json(), c.name + " cocycle on " + f.name);
    }
  }

  write("element_z2_sum.json", terms(z2, {{0, 1.0}, {1, 1.0}}), "delta_0 + delta_1");
  write("element_z2_generator.json", terms(z2, {{1, 1.0}}), "delta_1");
  write("element_q8_sum.json", terms(q8, {{2, 1.0}, {4, 1.0}, {6, 1.0}}), "u_i + u_j + u_k");
  write("element_s3_transpositions.json", terms(s3, {{1, 1.0}, {2, 1.0}, {5, 1.0}}), "sum of transpositions");
  write("element_f2_identity.json", terms(f2, {{"e", 1.0}}), "delta_e");
  write("element_f2_sphere1.json", terms(f2, {{"x1", 1.0}, {"x1^-1", 1.0}, {"x2", 1.0}, {"x2^-1", 1.0}}),
        "u_x + u_x^-1 + u_y + u_y^-1");
  write("element_f2_x_sum.json", terms(f2, {{"x1", 1.0}, {"x1^-1", 1.0}}), "u_x + u_x^-1");
  write("element_f2_xy_sum.json", terms(f2, {{"x1 x2", 1.0}, {"x1 x2 x2", 1.0}}), "u_xy + u_xy^2");
  write("element_f2_xy.json", terms(f2, {{"x1 x2", 1.0}}), "u_xy");

  write("set_f2_semigroup.json", Json{{"t", "x1"}, {"elements", {"x2", "x2 x2"}}}, "t = x, F = {y, y^2}");
  write("set_f2_collision.json", Json{{"t", "e"}, {"elements", {"x1", "x1^-1"}}}, "t = e, F = {x, x^-1}");
  write("set_z2_all.json", Json{{"elements", {0, 1}}}, "S = Z2");
  write("set_z4xz4.json", Json{{"elements", {4, 1, 5}}}, "S = {(1,0), (0,1), (1,1)}");

  write("convention.json", convention_probe(), "frozen twisted-action convention");

  Json m{{"version", 1}, {"generator", std::string(kToolName) + " " + kVersion}, {"files", manifest}};
  std::ofstream(out_dir / "manifest.json", std::ios::binary) << m.dump(2) << "\n";
  std::cout << "wrote " << manifest.size() << " fixtures to " << out_dir << "\n";
  return 0;
}
