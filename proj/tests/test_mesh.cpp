#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "pnptg/mesh.hpp"

using pnptg::Mesh;
using pnptg::NodalField;
using pnptg::Vec3;

namespace {

double signed_volume(const Mesh& mesh, int t) {
  const auto& tet = mesh.tets()[t];
  const Vec3& a = mesh.nodes()[tet[0]];
  Vec3 e1, e2, e3;
  for (int d = 0; d < 3; ++d) {
    e1[d] = mesh.nodes()[tet[1]][d] - a[d];
    e2[d] = mesh.nodes()[tet[2]][d] - a[d];
    e3[d] = mesh.nodes()[tet[3]][d] - a[d];
  }
  const double det = e1[0] * (e2[1] * e3[2] - e2[2] * e3[1]) -
                     e1[1] * (e2[0] * e3[2] - e2[2] * e3[0]) +
                     e1[2] * (e2[0] * e3[1] - e2[1] * e3[0]);
  return det / 6.0;
}

Vec3 random_point(std::mt19937& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  return Vec3{unit(rng), unit(rng), unit(rng)};
}

}  // namespace

TEST_CASE("node, tet, and boundary counts") {
  const Mesh m1 = pnptg::build_unit_cube_mesh(1);
  CHECK(m1.num_nodes() == 8);
  CHECK(m1.num_tets() == 6);
  CHECK(m1.num_interior() == 0);
  int boundary = 0;
  for (int i = 0; i < m1.num_nodes(); ++i) boundary += m1.on_boundary(i);
  CHECK(boundary == 8);

  const Mesh m2 = pnptg::build_unit_cube_mesh(2);
  CHECK(m2.num_nodes() == 27);
  CHECK(m2.num_tets() == 48);
  CHECK(m2.num_interior() == 1);
  boundary = 0;
  for (int i = 0; i < m2.num_nodes(); ++i) boundary += m2.on_boundary(i);
  CHECK(boundary == 26);
  const int center = m2.interior_nodes()[0];
  CHECK(m2.nodes()[center][0] == 0.5);
  CHECK(m2.nodes()[center][1] == 0.5);
  CHECK(m2.nodes()[center][2] == 0.5);

  const Mesh m4 = pnptg::build_unit_cube_mesh(4);
  CHECK(m4.num_nodes() == 125);
  CHECK(m4.num_tets() == 384);
  CHECK(m4.num_interior() == 27);
}

TEST_CASE("rejects nonpositive resolution") {
  CHECK_THROWS_AS(pnptg::build_unit_cube_mesh(0), std::invalid_argument);
  CHECK_THROWS_AS(pnptg::build_unit_cube_mesh(-3), std::invalid_argument);
}

TEST_CASE("tet volumes are positive and partition the cube") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(4);
  double total = 0.0;
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const double vol = signed_volume(mesh, t);
    CHECK(vol > 0.0);
    CHECK(vol == doctest::Approx(mesh.tet_volume()).epsilon(1e-12));
    total += vol;
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
  CHECK(mesh.tet_volume() == doctest::Approx(1.0 / (6.0 * 64.0)).epsilon(1e-14));
}

TEST_CASE("boundary mask matches exact coordinate test") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(3);
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const Vec3& x = mesh.nodes()[i];
    const bool expect = x[0] == 0.0 || x[0] == 1.0 || x[1] == 0.0 ||
                        x[1] == 1.0 || x[2] == 0.0 || x[2] == 1.0;
    CHECK(mesh.on_boundary(i) == expect);
    if (expect) {
      CHECK(mesh.interior_index(i) == -1);
    } else {
      CHECK(mesh.interior_index(i) >= 0);
    }
  }
  for (int n = 1; n <= 5; ++n) {
    const Mesh m = pnptg::build_unit_cube_mesh(n);
    CHECK(m.num_interior() == (n - 1) * (n - 1) * (n - 1));
  }
}

TEST_CASE("stored gradients match coordinate-derived gradients") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(3);
  for (int t = 0; t < mesh.num_tets(); ++t) {
    const auto& tet = mesh.tets()[t];
    std::array<Vec3, 4> v;
    for (int a = 0; a < 4; ++a) v[a] = mesh.nodes()[tet[a]];
    const auto& grads = mesh.tet_gradients(t);
    Vec3 grad_sum{0.0, 0.0, 0.0};
    for (int a = 0; a < 4; ++a) {
      // lambda_a is affine, so exact differences give its gradient.
      const auto base = oracles::barycentric_in(v, v[0]);
      for (int d = 0; d < 3; ++d) {
        Vec3 shifted = v[0];
        shifted[d] += 1.0;
        const double expect = oracles::barycentric_in(v, shifted)[a] - base[a];
        CHECK(grads[a][d] == doctest::Approx(expect).epsilon(1e-12));
        grad_sum[d] += grads[a][d];
      }
    }
    for (int d = 0; d < 3; ++d) CHECK(std::abs(grad_sum[d]) < 1e-12);
  }
}

TEST_CASE("adjacency lists are ascending and consistent") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(2);
  long entries = 0;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    int prev = -1;
    for (const int* it = mesh.adjacent_tets_begin(i);
         it != mesh.adjacent_tets_end(i); ++it) {
      CHECK(*it > prev);
      prev = *it;
      const auto& tet = mesh.tets()[*it];
      CHECK((tet[0] == i || tet[1] == i || tet[2] == i || tet[3] == i));
      ++entries;
    }
  }
  CHECK(entries == 4L * mesh.num_tets());
}

TEST_CASE("locate_point at vertices") {
  const Mesh m1 = pnptg::build_unit_cube_mesh(1);
  const auto loc = pnptg::locate_point(m1, Vec3{0.0, 0.0, 0.0});
  int ones = 0;
  for (double l : loc.barycentric) {
    if (std::abs(l - 1.0) < 1e-12) ++ones;
  }
  CHECK(ones == 1);

  const Mesh m2 = pnptg::build_unit_cube_mesh(2);
  const auto center = pnptg::locate_point(m2, Vec3{0.5, 0.5, 0.5});
  const auto& tet = m2.tets()[center.tet];
  double value = 0.0;
  for (int a = 0; a < 4; ++a) {
    const Vec3& x = m2.nodes()[tet[a]];
    if (x[0] == 0.5 && x[1] == 0.5 && x[2] == 0.5) value = center.barycentric[a];
  }
  CHECK(value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("locate_point reproduces a global linear function at random points") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(2);
  std::vector<double> nodal(mesh.num_nodes());
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const Vec3& x = mesh.nodes()[i];
    nodal[i] = x[0] + 2.0 * x[1] + 3.0 * x[2];
  }
  std::mt19937 rng(20260819);
  for (int k = 0; k < 1000; ++k) {
    const Vec3 x = random_point(rng);
    const double expect = x[0] + 2.0 * x[1] + 3.0 * x[2];
    CHECK(std::abs(pnptg::eval_p1(mesh, nodal, x) - expect) < 1e-12);
  }
}

TEST_CASE("barycentric output is a clean partition of unity") {
  std::mt19937 rng(7);
  for (int n : {1, 2, 3, 5}) {
    const Mesh mesh = pnptg::build_unit_cube_mesh(n);
    for (int k = 0; k < 200; ++k) {
      Vec3 x = random_point(rng);
      if (k % 4 == 1) x[0] = 0.0;            // face
      if (k % 4 == 2) x[1] = 1.0;            // face
      if (k % 4 == 3) x[0] = x[1] = 0.5;     // edge-ish line
      const auto loc = pnptg::locate_point(mesh, x);
      CHECK(loc.tet >= 0);
      CHECK(loc.tet < mesh.num_tets());
      double sum = 0.0;
      for (double l : loc.barycentric) {
        CHECK(l >= -1e-12);
        sum += l;
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
    for (int i = 0; i < mesh.num_nodes(); ++i) {
      const auto loc = pnptg::locate_point(mesh, mesh.nodes()[i]);
      double sum = 0.0;
      for (double l : loc.barycentric) sum += l;
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("locate_point agrees with the brute-force scan oracle") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(3);
  std::mt19937 rng(99);
  std::vector<double> nodal(mesh.num_nodes());
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (double& v : nodal) v = coef(rng);
  for (int k = 0; k < 300; ++k) {
    const Vec3 x = random_point(rng);
    const auto fast = pnptg::locate_point(mesh, x);
    const auto slow = oracles::locate_by_scan(mesh, x);
    // Different tets are fine on shared faces; the interpolated value is not.
    double fast_val = 0.0, slow_val = 0.0;
    for (int a = 0; a < 4; ++a) {
      fast_val += fast.barycentric[a] * nodal[mesh.tets()[fast.tet][a]];
      slow_val += slow.barycentric[a] * nodal[mesh.tets()[slow.tet][a]];
    }
    CHECK(fast_val == doctest::Approx(slow_val).epsilon(1e-10));
  }
}

TEST_CASE("locate_point rejects points outside the closed cube") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(2);
  CHECK_THROWS_AS(pnptg::locate_point(mesh, Vec3{-0.01, 0.5, 0.5}),
                  std::domain_error);
  CHECK_THROWS_AS(pnptg::locate_point(mesh, Vec3{0.5, 1.01, 0.5}),
                  std::domain_error);
  CHECK_THROWS_AS(pnptg::locate_point(mesh, Vec3{0.5, 0.5, 2.0}),
                  std::domain_error);
}

TEST_CASE("fine tets nest inside coarse tets") {
  const Mesh coarse = pnptg::build_unit_cube_mesh(2);
  const Mesh fine = pnptg::build_unit_cube_mesh(4);
  for (int t = 0; t < fine.num_tets(); ++t) {
    const auto& tet = fine.tets()[t];
    Vec3 centroid{0.0, 0.0, 0.0};
    for (int a = 0; a < 4; ++a) {
      for (int d = 0; d < 3; ++d) centroid[d] += 0.25 * fine.nodes()[tet[a]][d];
    }
    const auto loc = pnptg::locate_point(coarse, centroid);
    std::array<Vec3, 4> cv;
    for (int a = 0; a < 4; ++a) cv[a] = coarse.nodes()[coarse.tets()[loc.tet][a]];
    // Every fine vertex must lie inside that same coarse tet.
    for (int a = 0; a < 4; ++a) {
      const auto lambda = oracles::barycentric_in(cv, fine.nodes()[tet[a]]);
      for (double l : lambda) {
        CHECK(l > -1e-12);
        CHECK(l < 1.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("prolongation of zero and of a linear function") {
  const Mesh coarse = pnptg::build_unit_cube_mesh(2);
  const Mesh fine = pnptg::build_unit_cube_mesh(4);

  NodalField zero{2, std::vector<double>(coarse.num_nodes(), 0.0)};
  const NodalField fine_zero = pnptg::prolongate(coarse, zero, fine);
  for (double v : fine_zero.values) CHECK(v == 0.0);

  NodalField linear{2, {}};
  linear.values.resize(coarse.num_nodes());
  for (int i = 0; i < coarse.num_nodes(); ++i) {
    linear.values[i] = coarse.nodes()[i][0];
  }
  const NodalField fine_linear = pnptg::prolongate(coarse, linear, fine);
  for (int i = 0; i < fine.num_nodes(); ++i) {
    CHECK(fine_linear.values[i] == fine.nodes()[i][0]);
  }
}

TEST_CASE("prolongation matches coarse evaluation at random points") {
  const Mesh coarse = pnptg::build_unit_cube_mesh(2);
  const Mesh fine = pnptg::build_unit_cube_mesh(8);
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  NodalField field{2, std::vector<double>(coarse.num_nodes())};
  for (double& v : field.values) v = coef(rng);
  const NodalField lifted = pnptg::prolongate(coarse, field, fine);
  for (int k = 0; k < 500; ++k) {
    const Vec3 x = random_point(rng);
    const double on_coarse = pnptg::eval_p1(coarse, field.values, x);
    const double on_fine = pnptg::eval_p1(fine, lifted.values, x);
    CHECK(std::abs(on_coarse - on_fine) < 1e-12);
  }
}

TEST_CASE("prolongation is linear") {
  const Mesh coarse = pnptg::build_unit_cube_mesh(2);
  const Mesh fine = pnptg::build_unit_cube_mesh(4);
  // Integer nodal values and dyadic weights make every intermediate exact.
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> small(-8, 8);
  NodalField u{2, std::vector<double>(coarse.num_nodes())};
  NodalField v{2, std::vector<double>(coarse.num_nodes())};
  for (int i = 0; i < coarse.num_nodes(); ++i) {
    u.values[i] = small(rng);
    v.values[i] = small(rng);
  }
  const double a = 2.0, b = 0.5;
  NodalField combo{2, std::vector<double>(coarse.num_nodes())};
  for (int i = 0; i < coarse.num_nodes(); ++i) {
    combo.values[i] = a * u.values[i] + b * v.values[i];
  }
  const NodalField pu = pnptg::prolongate(coarse, u, fine);
  const NodalField pv = pnptg::prolongate(coarse, v, fine);
  const NodalField pc = pnptg::prolongate(coarse, combo, fine);
  for (int i = 0; i < fine.num_nodes(); ++i) {
    CHECK(pc.values[i] == a * pu.values[i] + b * pv.values[i]);
  }
}

TEST_CASE("prolongation composes across levels") {
  const Mesh m2 = pnptg::build_unit_cube_mesh(2);
  const Mesh m4 = pnptg::build_unit_cube_mesh(4);
  const Mesh m8 = pnptg::build_unit_cube_mesh(8);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  NodalField field{2, std::vector<double>(m2.num_nodes())};
  for (double& v : field.values) v = coef(rng);
  const NodalField two_step =
      pnptg::prolongate(m4, pnptg::prolongate(m2, field, m4), m8);
  const NodalField one_step = pnptg::prolongate(m2, field, m8);
  for (int i = 0; i < m8.num_nodes(); ++i) {
    CHECK(std::abs(two_step.values[i] - one_step.values[i]) < 1e-12);
  }
}

TEST_CASE("prolongation rejects bad inputs") {
  const Mesh m2 = pnptg::build_unit_cube_mesh(2);
  const Mesh m3 = pnptg::build_unit_cube_mesh(3);
  NodalField field{2, std::vector<double>(m2.num_nodes(), 1.0)};
  CHECK_THROWS_AS(pnptg::prolongate(m2, field, m3), std::invalid_argument);
  NodalField wrong{2, std::vector<double>(5, 1.0)};
  const Mesh m4 = pnptg::build_unit_cube_mesh(4);
  CHECK_THROWS_AS(pnptg::prolongate(m2, wrong, m4), std::invalid_argument);
}

TEST_CASE("text export lists every node and tet") {
  const Mesh mesh = pnptg::build_unit_cube_mesh(1);
  std::ostringstream out;
  pnptg::write_mesh_text(mesh, out);
  std::istringstream in(out.str());
  std::string line;
  int v_lines = 0, t_lines = 0;
  REQUIRE(std::getline(in, line));
  CHECK(line == "mesh 1 8 6");
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) ++v_lines;
    if (line.rfind("t ", 0) == 0) ++t_lines;
  }
  CHECK(v_lines == 8);
  CHECK(t_lines == 6);
}
