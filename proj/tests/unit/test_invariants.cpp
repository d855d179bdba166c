#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "modframe/error.hpp"
#include "modframe/invariants.hpp"

using namespace modframe;
using namespace modframe::testing;

namespace {

const AlgebraShape kScalars({1});

Frame scalar_frame(const std::vector<std::vector<Complex>>& vs) {
  return Frame::of_free_module(embed_hilbert_frame(vs, kScalars));
}

// Three unit vectors at 120 degrees, scaled to a normalized tight frame of C^2.
Frame mercedes() {
  std::vector<std::vector<Complex>> vs;
  const double s = std::sqrt(2.0 / 3.0);
  for (int j = 0; j < 3; ++j) {
    const double a = 2 * std::numbers::pi * j / 3;
    vs.push_back({s * std::cos(a), s * std::sin(a)});
  }
  return scalar_frame(vs);
}

bool is_projection(const AlgebraMatrix& q, double tol) {
  return max_abs_diff(q * q, q) <= tol && max_abs_diff(q.adjoint(), q) <= tol;
}

template <class F>
void expect_error(ErrorCode code, F&& body) {
  try {
    body();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(NormalizedTightMetric, NormalizedTightFrameKeepsItsMetric) {
  Rng rng(51);
  for (const auto& shape : small_shapes()) {
    const Frame f = random_normalized_tight_frame(rng, shape, 2, 3);
    const NormalizedTightMetric m = normalized_tight_inner_product(f);
    EXPECT_LE(max_abs_diff(m.metric, AlgebraMatrix::identity(shape, 2)), 1e-9);
    EXPECT_LE(max_abs_diff(m.invariant.gram, f.gram_matrix()), 1e-9);
  }
}

TEST(NormalizedTightMetric, DiagonalExample) {
  const Frame f = scalar_frame({{1, 0, 0, 0}, {0, 3, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 2}});
  const NormalizedTightMetric m = normalized_tight_inner_product(f);
  const double s[] = {1.0, 1.0 / 9.0, 0.25, 0.25};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_NEAR(std::abs(m.metric.flat(0)(i, j) - (i == j ? s[i] : 0.0)), 0.0, 1e-14);
      EXPECT_NEAR(std::abs(m.invariant.gram.flat(0)(i, j) - (i == j ? 1.0 : 0.0)), 0.0, 1e-14);
    }
  EXPECT_TRUE(m.check.is_normalized_tight);
}

TEST(NormalizedTightMetric, ReanalysisIsNormalizedTight) {
  Rng rng(52);
  const AlgebraShape shape({2});
  for (int t = 0; t < 20; ++t) {
    const Frame f = t % 2 ? random_free_frame(rng, shape, 2, 4) : random_submodule_frame(rng, shape, 3, 4);
    const NormalizedTightMetric m = normalized_tight_inner_product(f);
    EXPECT_NEAR(m.check.lower_bound, 1.0, 1e-8);
    EXPECT_NEAR(m.check.upper_bound, 1.0, 1e-8);
    EXPECT_LE(m.check.reconstruction_defect, 1e-8);
    // sum_j <x, x_j>_0 x_j = x on the module.
    const ModuleVector x = apply(f.projection(), random_vector(rng, shape, f.ambient_rank()));
    ModuleVector sum(shape, f.ambient_rank());
    for (const auto& xj : f.elements()) sum += metric_inner(m.metric, x, xj) * xj;
    EXPECT_LE(max_abs_diff(sum, x), 1e-8 * (1 + x.norm()));
  }
}

TEST(NormalizedTightMetric, RejectsNonFrames) {
  expect_error(ErrorCode::not_a_frame, [] { normalized_tight_inner_product(scalar_frame({{1, 0}})); });
}

TEST(GramInvariant, IsAnOrthogonalProjectionAndMatchesTheSvdRoute) {
  Rng rng(53);
  for (const auto& shape : small_shapes()) {
    for (int t = 0; t < 5; ++t) {
      const Frame f = random_submodule_frame(rng, shape, 3, 5);
      const AlgebraMatrix q = normalized_tight_inner_product(f).invariant.gram;
      EXPECT_TRUE(is_projection(q, 1e-9));
      for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t j = 0; j < f.size(); ++j)
          EXPECT_LE(max_abs_diff(q.entry(j, i), q.entry(i, j).adjoint()), 1e-12);
      EXPECT_LE(max_abs_diff(q, gram_invariant_by_svd(f)), 1e-9);
    }
  }
}

TEST(GramInvariant, IndependentOfTheStartingMetric) {
  // x_j R for invertible R is the same generating set seen through another
  // inner product; the normalized tight Gram matrix must not change.
  Rng rng(54);
  for (const auto& shape : small_shapes()) {
    for (int t = 0; t < 10; ++t) {
      const Frame f = random_free_frame(rng, shape, 2, 4);
      const Frame g = transform_frame(f, random_operator(rng, shape, 2, 2));
      const AlgebraMatrix qf = normalized_tight_inner_product(f).invariant.gram;
      const AlgebraMatrix qg = normalized_tight_inner_product(g).invariant.gram;
      EXPECT_LE(max_abs_diff(qf, qg), 1e-8);
      EXPECT_TRUE(grams_match(qf, qg, 1e-8));
    }
  }
}

TEST(UnitaryReconstruction, SameFrameGivesIdentityOnTheModule) {
  Rng rng(55);
  const AlgebraShape shape({2, 1});
  const Frame f = random_normalized_tight_frame(rng, shape, 2, 4);
  const UnitaryReconstruction u = build_unitary_from_matching_grams(f, f);
  EXPECT_LE(max_abs_diff(u.v, AlgebraMatrix::identity(shape, 2)), 1e-9);
  EXPECT_LE(u.image_residual, 1e-9);
}

TEST(UnitaryReconstruction, RecoversARandomUnitary) {
  Rng rng(56);
  for (const auto& shape : small_shapes()) {
    const Frame f = random_normalized_tight_frame(rng, shape, 2, 3);
    const AlgebraMatrix w = random_unitary_operator(rng, shape, 2);
    const Frame g = transform_frame(f, w);
    const UnitaryReconstruction u = build_unitary_from_matching_grams(f, g);
    EXPECT_LE(max_abs_diff(u.v, w), 1e-9);
    EXPECT_LE(u.isometry_defect, 1e-9);
    for (int probe = 0; probe < 5; ++probe) {
      const ModuleVector x = random_vector(rng, shape, 2);
      const ModuleVector y = random_vector(rng, shape, 2);
      EXPECT_LE(max_abs_diff(inner(apply(u.v, x), apply(u.v, y)), inner(x, y)), 1e-9 * (1 + x.norm() * y.norm()));
    }
  }
}

TEST(UnitaryReconstruction, CyclicShiftOfTheMercedesFrameIsARotation) {
  const Frame f = mercedes();
  const std::vector<std::size_t> shift = {1, 2, 0};
  const Frame g = permute_frame(f, shift);
  const AlgebraMatrix qf = normalized_tight_inner_product(f).invariant.gram;
  const AlgebraMatrix qg = normalized_tight_inner_product(g).invariant.gram;
  EXPECT_TRUE(grams_match(qf, qg, 1e-12));
  const UnitaryReconstruction u = build_unitary_from_matching_grams(f, g);
  // x V = x rotated by 120 degrees; V is the transpose of the rotation matrix.
  const double c = std::cos(2 * std::numbers::pi / 3);
  const double s = std::sin(2 * std::numbers::pi / 3);
  const CMatrix expected{{c, s}, {-s, c}};
  EXPECT_LE(max_abs_diff(u.v.flat(0), expected), 1e-12);
  EXPECT_LE(u.image_residual, 1e-12);
}

TEST(UnitaryReconstruction, PreconditionErrors) {
  Rng rng(57);
  const AlgebraShape shape({2});
  const Frame f = random_normalized_tight_frame(rng, shape, 2, 3);
  expect_error(ErrorCode::not_normalized_tight,
               [&] { build_unitary_from_matching_grams(f, random_free_frame(rng, shape, 2, 3)); });
  expect_error(ErrorCode::gram_mismatch,
               [&] { build_unitary_from_matching_grams(f, random_normalized_tight_frame(rng, shape, 2, 3)); });
  expect_error(ErrorCode::count_mismatch,
               [&] { build_unitary_from_matching_grams(f, random_normalized_tight_frame(rng, shape, 2, 4)); });
  const Frame with_zero = scalar_frame({{1, 0}, {0, 1}, {0, 0}});
  expect_error(ErrorCode::invalid_argument, [&] { build_unitary_from_matching_grams(with_zero, with_zero); });
}

TEST(UnitaryReconstruction, GramAndUnitaryConditionsAgreeOnRandomInstances) {
  Rng rng(58);
  int verified = 0;
  for (int t = 0; t < 500; ++t) {
    const auto& shapes = small_shapes();
    const AlgebraShape& shape = shapes[static_cast<std::size_t>(t) % shapes.size()];
    const Frame f = random_normalized_tight_frame(rng, shape, 2, 3);
    const AlgebraMatrix w = random_unitary_operator(rng, shape, 2);
    const Frame g = transform_frame(f, w);
    // Unitary image implies matching invariants.
    const AlgebraMatrix qf = normalized_tight_inner_product(f).invariant.gram;
    const AlgebraMatrix qg = normalized_tight_inner_product(g).invariant.gram;
    ASSERT_TRUE(grams_match(qf, qg, 1e-9)) << "trial " << t;
    // Matching invariants yield a verified unitary.
    const UnitaryReconstruction u = build_unitary_from_matching_grams(f, g);
    ASSERT_LE(u.image_residual, 1e-9) << "trial " << t;
    ASSERT_LE(u.isometry_defect, 1e-9) << "trial " << t;
    ++verified;
  }
  EXPECT_EQ(verified, 500);
}

TEST(Permutation, SearchFindsTheShuffle) {
  Rng rng(59);
  const AlgebraShape shape({1, 1});
  const Frame f = random_normalized_tight_frame(rng, shape, 2, 5);
  const std::vector<std::size_t> p = {3, 0, 4, 1, 2};
  const Frame g = permute_frame(f, p);
  const AlgebraMatrix qf = f.gram_matrix();
  const AlgebraMatrix qg = g.gram_matrix();
  EXPECT_FALSE(grams_match(qf, qg, 1e-9));
  const auto found = find_matching_permutation(qf, qg);
  ASSERT_TRUE(found.has_value());
  const Frame back = permute_frame(g, *found);
  EXPECT_TRUE(grams_match(qf, back.gram_matrix(), 1e-9));
  EXPECT_FALSE(find_matching_permutation(qf, random_normalized_tight_frame(rng, shape, 2, 5).gram_matrix()));
  const AlgebraMatrix big = AlgebraMatrix::identity(shape, 9);
  expect_error(ErrorCode::invalid_argument, [&] { find_matching_permutation(big, big); });
}

TEST(ChangeOfBasis, StandardAndScaledBases) {
  const Frame e = scalar_frame({{1, 0}, {0, 1}});
  const ChangeOfBasis same = change_of_basis_mp(e, e);
  EXPECT_LE(max_abs_diff(same.f, AlgebraMatrix::identity(kScalars, 2)), 1e-14);
  EXPECT_LE(max_abs_diff(same.g, AlgebraMatrix::identity(kScalars, 2)), 1e-14);
  const ChangeOfBasis scaled = change_of_basis_mp(e, scalar_frame({{2, 0}, {0, 2}}));
  EXPECT_LE(max_abs_diff(scaled.f, 2.0 * AlgebraMatrix::identity(kScalars, 2)), 1e-14);
  EXPECT_LE(max_abs_diff(scaled.g, 0.5 * AlgebraMatrix::identity(kScalars, 2)), 1e-14);
}

TEST(ChangeOfBasis, RandomRieszBasesSatisfyPenroseIdentities) {
  Rng rng(60);
  const AlgebraShape shape({2});
  for (int t = 0; t < 20; ++t) {
    const Frame x = random_free_frame(rng, shape, 2, 2);
    const Frame y = random_free_frame(rng, shape, 2, 2);
    const ChangeOfBasis c = change_of_basis_mp(x, y);
    EXPECT_LE(c.mp.max(), 1e-8);
    EXPECT_LE(c.y_residual, 1e-9);
    EXPECT_LE(c.x_residual, 1e-9);
  }
}

TEST(ChangeOfBasis, ZeroDivisorBasesOfTheSameModule) {
  // Riesz bases whose elements have non-invertible inner products.
  const AlgebraShape shape({1, 1});
  const AlgebraElement p1(shape, {CMatrix{{1.0}}, CMatrix{{0.0}}});
  const AlgebraElement p2(shape, {CMatrix{{0.0}}, CMatrix{{1.0}}});
  const AlgebraElement q2(shape, {CMatrix{{0.0}}, CMatrix{{Complex(0, 3)}}});
  const Frame x = Frame::of_free_module({ModuleVector(shape, std::span<const AlgebraElement>(&p1, 1)),
                                         ModuleVector(shape, std::span<const AlgebraElement>(&p2, 1))});
  const Frame y = Frame::of_free_module({ModuleVector(shape, std::span<const AlgebraElement>(&q2, 1)),
                                         ModuleVector(shape, std::span<const AlgebraElement>(&p1, 1))});
  const ChangeOfBasis c = change_of_basis_mp(x, y);
  EXPECT_LE(c.mp.max(), 1e-12);
  EXPECT_LE(c.y_residual, 1e-12);
  EXPECT_LE(c.x_residual, 1e-12);
}

TEST(ChangeOfBasis, Errors) {
  const Frame e = scalar_frame({{1, 0}, {0, 1}});
  expect_error(ErrorCode::not_riesz_basis, [&] { change_of_basis_mp(e, scalar_frame({{1, 0}, {0, 1}, {1, 1}})); });
  expect_error(ErrorCode::shape_mismatch, [&] {
    change_of_basis_mp(e, Frame::of_free_module({ModuleVector::basis(AlgebraShape({2}), 1, 0)}));
  });
}
