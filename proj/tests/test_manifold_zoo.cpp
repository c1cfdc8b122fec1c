#include <gtest/gtest.h>

#include <random>

#include "acsm/spec_file.hpp"
#include "test_support.hpp"

using namespace acsm;
using namespace acsm::testing;

namespace {

std::vector<ZooEntry> named_entries() {
  return {example_flat_acs(1), example_flat_acs(2), example_flat_acs(3), example_r3_negative(),
          levi_civita_flat(1),  levi_civita_flat(2), sphere_line(),        twisted_contact()};
}

double section_value(const ZooEntry& e, const Point& p, const Vector& x) {
  return phi_sectional_k_curvature(evaluate_frame(e.manifold, p), x).value;
}

}  // namespace

TEST(Zoo, NamedEntriesPassValidators) {
  for (const ZooEntry& e : named_entries()) {
    for (const Point& p : grid_points(e.manifold)) {
      EXPECT_TRUE(validate_structure(e.manifold, p).ok()) << e.name;
      EXPECT_TRUE(validate_statistical(e.manifold, p).ok()) << e.name;
      EXPECT_TRUE(validate_acs(e.manifold, p).ok()) << e.name;
    }
  }
}

TEST(Zoo, GeneratedEntriesPassValidators) {
  std::mt19937_64 rng(3);
  for (const ZooEntry& e : generated_structures(6)) {
    for (const Point& p : sample_points(e.manifold, rng, 2)) {
      EXPECT_TRUE(validate_structure(e.manifold, p).ok()) << e.name;
      EXPECT_TRUE(validate_statistical(e.manifold, p).ok()) << e.name;
      EXPECT_TRUE(validate_acs(e.manifold, p).ok()) << e.name;
    }
  }
  for (const ZooEntry& e : {generate_random_acs(7, 3, GeneratorFamily::Mixed),
                            generate_random_acs(9, 4, GeneratorFamily::PlanarBlock)}) {
    const Point p(e.manifold.dim(), 0.25);
    EXPECT_TRUE(validate_acs(e.manifold, p).ok()) << e.name;
    EXPECT_TRUE(validate_statistical(e.manifold, p).ok()) << e.name;
  }
}

TEST(Zoo, GenerationIsDeterministic) {
  for (GeneratorFamily f : {GeneratorFamily::TrivialLambda, GeneratorFamily::PlanarBlock, GeneratorFamily::Mixed}) {
    for (std::uint64_t seed : {0u, 1u, 42u}) {
      const std::string a = write_spec_text(generate_random_acs(5, seed, f).description);
      const std::string b = write_spec_text(generate_random_acs(5, seed, f).description);
      EXPECT_EQ(a, b);
      EXPECT_NE(a, write_spec_text(generate_random_acs(5, seed + 1, f).description));
    }
  }
  EXPECT_EQ(write_spec_text(random_polynomial_metric(5, 3)), write_spec_text(random_polynomial_metric(5, 3)));
}

TEST(Zoo, UnsupportedDimensions) {
  for (std::size_t dim : {0u, 1u, 2u, 4u, 6u}) {
    EXPECT_THROW(generate_random_acs(dim, 0, GeneratorFamily::Mixed), UnsupportedDimension);
  }
  EXPECT_THROW(example_flat_acs(0), UnsupportedDimension);
  EXPECT_THROW(levi_civita_flat(0), UnsupportedDimension);
  EXPECT_THROW(random_polynomial_metric(11, 0), UnsupportedDimension);
  EXPECT_THROW(random_polynomial_metric(4, 0), UnsupportedDimension);
}

TEST(Zoo, FlatExampleOutcomes) {
  for (std::size_t n : {1u, 2u}) {
    const ZooEntry e = example_flat_acs(n);
    EXPECT_EQ(e.manifold.dim(), 2 * n + 1);
    const auto pts = grid_points(e.manifold);
    EXPECT_TRUE(is_cosymplectic(e.manifold, pts, 1e-9).cosymplectic);
    for (const Point& p : pts) {
      EXPECT_EQ(lambda_of(e.manifold, p).lambda, 1.0);
      const PointFrame f = evaluate_frame(e.manifold, p);
      EXPECT_TRUE(phi_compatibility(f).compatible());
      const GeodesicXi gx = geodesic_xi_check(f);
      EXPECT_EQ(gx.levi_civita, 0.0);
      EXPECT_EQ(gx.statistical, 1.0);
    }
  }
}

TEST(Zoo, NegativeExampleConstancySweep) {
  const ZooEntry e = example_r3_negative();
  double lo = 1e300, hi = -1e300;
  for (const Point& p : grid_points(e.manifold.box, 5)) {
    const PointFrame f = evaluate_frame(e.manifold, p);
    for (const Vector& x : horizontal_test_vectors(phi_basis(f, default_seed(f)))) {
      const double v = phi_sectional_k_curvature(f, x).value;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  EXPECT_NEAR(lo, -1.0, 1e-12);
  EXPECT_LE(hi - lo, 1e-9);
}

TEST(Zoo, TrivialLambdaSeed42) {
  const ZooEntry e = generate_random_acs(3, 42, GeneratorFamily::TrivialLambda);
  std::mt19937_64 rng(1);
  for (const Point& p : sample_points(e.manifold, rng, 3)) {
    const PointFrame f = evaluate_frame(e.manifold, p);
    const StatisticalCurvature sc = statistical_curvature(f, curvatures(e.manifold, p));
    const VanishingConditions v = vanishing_conditions(f, sc, phi_basis(f, default_seed(f)));
    for (std::size_t i = 0; i < 9; ++i) EXPECT_TRUE(v.holds[i]) << VanishingConditions::kNames[i];
    EXPECT_LE(max_abs(sc.kk), 1e-6);
    EXPECT_LE(max_abs_diff(sc.s, sc.r0), 1e-6);
    EXPECT_EQ(section_value(e, p, basis_vector(3, 0)), 0.0);
  }
}

TEST(Zoo, PlanarBlockQuotientMatchesBlockMagnitude) {
  // Hand-built block with a = 2 and the seeded entry at seed 7: the brute
  // quotient, the -2|K(e,e)|^2 form and the recorded a^2 all agree.
  ManifoldDescription d = detail::flat_contact_description("block", {"x1", "y1", "z"});
  detail::add_planar_block(d.entries, 0, 1.0, 1.0);  // |c| = sqrt(2) = a/sqrt(2) with a = 2
  const ZooEntry hand = detail::finish("block", d, {});
  const PointFrame fh = evaluate_frame(hand.manifold, Point{0.0, 0.0, 0.0});
  const Vector e1 = basis_vector(3, 0);
  EXPECT_NEAR(phi_sectional_k_curvature(fh, e1).value, -4.0, 1e-12);
  EXPECT_NEAR(-2.0 * fh.inner(fh.K(e1, e1), fh.K(e1, e1)), -4.0, 1e-12);

  const ZooEntry e = generate_random_acs(3, 7, GeneratorFamily::PlanarBlock);
  ASSERT_TRUE(e.expected.kphi.has_value());
  const PointFrame f = evaluate_frame(e.manifold, Point{0.1, -0.2, 0.3});
  const Vector kee = f.K(e1, e1);
  const double quotient = phi_sectional_k_curvature(f, e1).value;
  EXPECT_NEAR(quotient, -2.0 * f.inner(kee, kee), 1e-12);
  EXPECT_NEAR(quotient, *e.expected.kphi, 1e-9);
  EXPECT_LT(quotient, -0.2);
}

TEST(Zoo, MixedSectionsDiffer) {
  const ZooEntry e = generate_random_acs(5, 1, GeneratorFamily::Mixed);
  EXPECT_FALSE(*e.expected.kphi_constant);
  const Point p(5, 0.0);
  const double k1 = section_value(e, p, basis_vector(5, 0));
  const double k2 = section_value(e, p, basis_vector(5, 2));
  EXPECT_GT(std::abs(k1 - k2), 0.1);
  EXPECT_LT(k1, 0.0);
  EXPECT_LT(k2, 0.0);
}

TEST(Zoo, ExpectedOutcomesMatchAudit) {
  std::vector<ZooEntry> entries = named_entries();
  for (const ZooEntry& g : generated_structures(2)) entries.push_back(g);
  for (const ZooEntry& e : entries) {
    const auto pts = grid_points(e.manifold);
    const Report r = audit(e.manifold, pts);
    EXPECT_TRUE(r.ok()) << e.name;
    for (const Record* rec : r.find("vanishing.kphi_zero")) {
      EXPECT_EQ(rec->pass, *e.expected.vanishing) << e.name;
    }
    for (const Record* rec : r.find("phi_compat.equivalent")) {
      EXPECT_TRUE(rec->pass) << e.name;
    }
    for (const Record* rec : r.find("cosymplectic")) EXPECT_EQ(rec->pass, *e.expected.cosymplectic) << e.name;
    if (e.expected.kphi) {
      for (const Record* rec : r.find("kphi")) EXPECT_NEAR(*rec->value, *e.expected.kphi, 1e-9) << e.name;
    }
    if (e.expected.lambda) {
      for (const Record* rec : r.find("lambda")) EXPECT_NEAR(*rec->value, *e.expected.lambda, 1e-12) << e.name;
    }
    if (e.expected.kphi_constant) {
      EXPECT_EQ(only(r, "kphi.constancy").pass, *e.expected.kphi_constant) << e.name;
    }
    if (e.expected.geodesic) {
      for (const Record* rec : r.find("geodesic.levi_civita"))
        EXPECT_NEAR(*rec->value, e.expected.geodesic->first, 1e-9) << e.name;
      for (const Record* rec : r.find("geodesic.statistical"))
        EXPECT_NEAR(*rec->value, e.expected.geodesic->second, 1e-9) << e.name;
    }
  }
}

TEST(Zoo, CurvedMetricFamilyIsPositiveDefinite) {
  for (std::size_t dim : {3u, 5u, 7u, 9u}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const ChartManifold m = build_manifold(random_polynomial_metric(dim, seed));
      for (const Point& p : grid_points(m.box, 2)) {
        const Matrix g = evaluate_frame(m, p).g;
        Eigen::SelfAdjointEigenSolver<Matrix> es(g);
        EXPECT_GT(es.eigenvalues().minCoeff(), 0.5);
      }
    }
  }
}

TEST(Zoo, Names) {
  EXPECT_EQ(zoo_entry("example_flat_acs").manifold.dim(), 3u);
  EXPECT_EQ(zoo_entry("example_flat_acs:2").manifold.dim(), 5u);
  EXPECT_EQ(zoo_entry("levi_civita_flat:3").manifold.dim(), 7u);
  EXPECT_EQ(zoo_entry("example_r3_negative").name, "example_r3_negative");
  EXPECT_EQ(zoo_entry("sphere_line").name, "sphere_line");
  EXPECT_EQ(zoo_entry("twisted_contact").name, "twisted_contact");
  EXPECT_EQ(write_spec_text(zoo_entry("random:mixed:5:1").description),
            write_spec_text(generate_random_acs(5, 1, GeneratorFamily::Mixed).description));
  EXPECT_EQ(zoo_entry("random:trivial-lambda:3:9").name, "random:trivial-lambda:3:9");

  EXPECT_THROW(zoo_entry("nope"), SpecError);
  EXPECT_THROW(zoo_entry("example_flat_acs:x"), SpecError);
  EXPECT_THROW(zoo_entry("example_flat_acs:1:2"), SpecError);
  EXPECT_THROW(zoo_entry("sphere_line:2"), SpecError);
  EXPECT_THROW(zoo_entry("random:blocky:3:1"), SpecError);
  EXPECT_THROW(zoo_entry("random:mixed:3"), SpecError);
  EXPECT_THROW(zoo_entry("random:mixed:4:1"), UnsupportedDimension);
  EXPECT_EQ(zoo_names().size(), 6u);
}
