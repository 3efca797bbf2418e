#include <gtest/gtest.h>

#include <sstream>

#include "cnfold/graver.hpp"
#include "cnfold/nfold.hpp"
#include "support.hpp"

using namespace cnfold;
using cnfold::testing::M;
using cnfold::testing::V;

namespace {

NFoldStencil transport_2x2() {
  return NFoldStencil(IntMat::identity(4), M({{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}}));
}

// Complexity from brute-force inner bases, as an independent route.
std::size_t brute_complexity(const NFoldStencil& st, long long box) {
  GraverBasis inner = brute_force_graver(st.a2, box);
  if (inner.empty()) return 1;
  IntMat b(st.r, inner.size());
  for (std::size_t c = 0; c < inner.size(); ++c) {
    IntVec col = mat_vec(st.a1, inner.elements()[c]);
    for (std::size_t i = 0; i < st.r; ++i) b(i, c) = col[i];
  }
  GraverBasis outer = brute_force_graver(b, box);
  std::size_t best = 1;
  for (const auto& g : outer.elements()) best = std::max(best, static_cast<std::size_t>(to_int64(norm1(g))));
  return best;
}

}  // namespace

TEST(NFoldMatrix, SingleLayerStacksBlocks) {
  NFoldStencil st(M({{1, 2}}), M({{3, 4}, {5, 6}}));
  EXPECT_EQ(nfold_matrix(st, 1), M({{1, 2}, {3, 4}, {5, 6}}));
}

TEST(NFoldMatrix, TinyStencilTwoLayers) {
  NFoldStencil st(M({{1}}), M({{1}}));
  EXPECT_EQ(nfold_matrix(st, 2), M({{1, 1}, {1, 0}, {0, 1}}));
  EXPECT_THROW(nfold_matrix(st, 0), DimensionError);
}

TEST(NFoldMatrix, ThreeProductOfOnesIsK33Incidence) {
  IntMat expected = M({{1, 0, 0, 1, 0, 0, 1, 0, 0},
                       {0, 1, 0, 0, 1, 0, 0, 1, 0},
                       {0, 0, 1, 0, 0, 1, 0, 0, 1},
                       {1, 1, 1, 0, 0, 0, 0, 0, 0},
                       {0, 0, 0, 1, 1, 1, 0, 0, 0},
                       {0, 0, 0, 0, 0, 0, 1, 1, 1}});
  EXPECT_EQ(nproduct(M({{1, 1, 1}}), 3), expected);
}

TEST(NFoldMatrix, TwoProductOfOnesRowSums) {
  IntMat a = nproduct(M({{1, 1, 1}}), 2);
  ASSERT_EQ(a.rows(), 5u);
  ASSERT_EQ(a.cols(), 6u);
  for (std::size_t i = 0; i < 5; ++i) {
    Integer sum = 0;
    for (std::size_t j = 0; j < 6; ++j) sum += a(i, j);
    EXPECT_EQ(sum, i < 3 ? 2 : 3);
  }
  EXPECT_EQ(nproduct(M({{2, 3}}), 1), M({{1, 0}, {0, 1}, {2, 3}}));
}

TEST(NFoldStencil, ColumnMismatchRejected) {
  EXPECT_THROW(NFoldStencil(M({{1, 2}}), M({{1}})), DimensionError);
}

TEST(NFoldStencil, TextRoundTrip) {
  NFoldStencil st = transport_2x2();
  std::ostringstream os;
  write_stencil(os, st);
  std::istringstream is(os.str());
  EXPECT_EQ(read_stencil(is), st);
  std::istringstream bad("1 1 2\n1 2\n1 2\n1 3\n1 2 3\n");
  EXPECT_THROW(read_stencil(bad), ParseError);
}

TEST(NFoldRhs, SplitAndConcatenate) {
  NFoldRhs b = NFoldRhs::split(V({1, 2, 3, 4, 5}), 1, 2, 2);
  EXPECT_EQ(b.b0, V({1}));
  EXPECT_EQ(b.layers[1], V({4, 5}));
  EXPECT_EQ(b.concatenated(), V({1, 2, 3, 4, 5}));
  EXPECT_THROW(NFoldRhs::split(V({1, 2}), 1, 2, 2), DimensionError);
}

TEST(Bricks, TypeCountsNonzeroBricks) {
  IntVec x = V({0, 0, 1, -1, 0, 0, 2, 0});
  EXPECT_EQ(brick_type(x, 2), 2u);
  EXPECT_EQ(join_bricks(split_bricks(x, 2)), x);
}

TEST(Complexity, EmptyInnerBasisGivesOne) {
  EXPECT_EQ(graver_complexity(NFoldStencil(M({{1}}), M({{1}}))), 1u);
}

TEST(Complexity, SmallStencilIsTwo) {
  NFoldStencil st(M({{1, 0}}), M({{1, -1}}));
  EXPECT_EQ(graver_complexity(st), 2u);
  EXPECT_EQ(brute_complexity(st, 3), 2u);
}

TEST(Complexity, TwoByTwoTransportFrozen) {
  // Frozen from the brute-force route below.
  constexpr std::size_t kTransport2x2Complexity = 2;
  EXPECT_EQ(brute_complexity(transport_2x2(), 3), kTransport2x2Complexity);
  EXPECT_EQ(graver_complexity(transport_2x2()), kTransport2x2Complexity);
}

TEST(NFoldGraver, SingleLayerIsDirectBasis) {
  NFoldStencil st(M({{1, 1, 1}}), M({{1, 2, 3}}));
  EXPECT_EQ(nfold_graver(st, 1).elements(), graver_basis(st.stacked()).elements());
}

TEST(NFoldGraver, TrivialStencilHasEmptyBasis) {
  NFoldStencil st(M({{1}}), M({{1}}));
  for (std::size_t n : {1, 2, 5}) EXPECT_TRUE(nfold_graver(st, n).empty());
}

TEST(NFoldGraver, LiftMatchesDirectOnSmallStencil) {
  NFoldStencil st(M({{1, 0}}), M({{1, -1}}));
  NFoldOptions lift;
  lift.force_lift = true;
  EXPECT_EQ(nfold_graver(st, 3, lift).elements(), graver_basis(nfold_matrix(st, 3)).elements());
}

TEST(NFoldGraver, LiftMatchesDirectUpToComplexityPlusTwo) {
  std::vector<NFoldStencil> stencils{
      NFoldStencil(M({{1}}), M({{1}})),
      NFoldStencil(M({{1, 0}}), M({{1, -1}})),
      transport_2x2(),
      NFoldStencil(IntMat::identity(2), M({{1, 1}})),
      NFoldStencil(IntMat::identity(3), M({{2, 1, 1}})),
  };
  NFoldOptions lift;
  lift.force_lift = true;
  for (const auto& st : stencils) {
    std::size_t g = graver_complexity(st);
    for (std::size_t n = 1; n <= g + 2; ++n) {
      GraverBasis lifted = nfold_graver(st, n, lift);
      GraverBasis direct = graver_basis(nfold_matrix(st, n));
      EXPECT_EQ(lifted.elements(), direct.elements()) << "n=" << n << "\n" << matrix_to_string(st.stacked());
    }
  }
}

TEST(NFoldGraver, ElementsAreMinimalKernelVectorsAndLayerSymmetric) {
  NFoldStencil st = transport_2x2();
  const std::size_t n = 4;
  GraverBasis g = nfold_graver(st, n);
  IntMat a = nfold_matrix(st, n);
  for (const auto& e : g.elements()) {
    EXPECT_TRUE(is_zero(mat_vec(a, e)));
    auto bricks = split_bricks(e, st.t);
    std::rotate(bricks.begin(), bricks.begin() + 1, bricks.end());
    EXPECT_TRUE(g.contains(join_bricks(bricks)));
    std::swap(bricks[0], bricks[2]);
    EXPECT_TRUE(g.contains(join_bricks(bricks)));
  }
  // Minimality against the brute-force filter, layer-wise small case.
  EXPECT_EQ(nfold_graver(NFoldStencil(IntMat::identity(2), M({{1, 1}})), 2).elements(),
            brute_force_graver(nfold_matrix(NFoldStencil(IntMat::identity(2), M({{1, 1}})), 2), 1).elements());
}

TEST(NFoldGraver, PlacementGuard) {
  NFoldOptions opts;
  opts.force_lift = true;
  opts.max_lifted = 3;
  EXPECT_THROW(nfold_graver(transport_2x2(), 5, opts), GuardExceeded);
}
