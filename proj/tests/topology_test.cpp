#include <gtest/gtest.h>

#include "energynet/energynet.hpp"

using namespace energynet;

TEST(Topology, OffsetsAndSizes) {
  const LayeredTopology t({2, 4, 4, 3});
  EXPECT_EQ(t.num_layers(), 4u);
  EXPECT_EQ(t.num_hidden(), 2u);
  EXPECT_EQ(t.num_units(), 13u);
  EXPECT_EQ(t.num_blocks(), 3u);
  EXPECT_EQ(t.offset(0), 0u);
  EXPECT_EQ(t.offset(1), 2u);
  EXPECT_EQ(t.offset(2), 6u);
  EXPECT_EQ(t.offset(3), 10u);
  EXPECT_EQ(t.output_layer(), 0u);
  EXPECT_EQ(t.input_layer(), 3u);
}

TEST(Topology, IndexLocateRoundTrip) {
  const LayeredTopology t({3, 5, 2});
  for (std::size_t i = 0; i < t.num_units(); ++i) {
    const auto [k, u] = t.locate(i);
    EXPECT_EQ(t.index(k, u), i);
  }
  EXPECT_THROW(t.locate(10), Error);
  EXPECT_THROW(t.index(1, 5), Error);
}

TEST(Topology, RejectsDegenerate) {
  EXPECT_THROW(LayeredTopology({2, 3}), Error);
  EXPECT_THROW(LayeredTopology({2, 0, 3}), Error);
}

TEST(Network, GlobalWeightsAreSymmetricWithZeroDiagonal) {
  const LayeredTopology t({2, 3, 4, 2});
  Rng rng(3);
  const auto p = random_params<double>(t, rng);
  const Matrix<double> w = p.global_weights();
  EXPECT_EQ((w - w.transpose()).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(w.diagonal().cwiseAbs().maxCoeff(), 0.0);
  // Non-adjacent layers are uncoupled.
  EXPECT_EQ(w.block(0, 5, 2, 6).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Network, RandomWeightsRespectScale) {
  const LayeredTopology t({3, 8, 2});
  Rng rng(9);
  const auto p = random_params<double>(t, rng, 1.0);
  EXPECT_LE(p.block(0).cwiseAbs().maxCoeff(), 1.0 / std::sqrt(2.0));
  EXPECT_LE(p.block(1).cwiseAbs().maxCoeff(), 1.0 / std::sqrt(2.0));
  EXPECT_LE(p.block(0).cwiseAbs().maxCoeff(), 1.0 / std::sqrt(8.0));
  EXPECT_EQ(p.biases().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Network, RandomParamsDeterministic) {
  const LayeredTopology t({2, 4, 3});
  Rng a(5), b(5);
  EXPECT_EQ(random_params<double>(t, a).block(1), random_params<double>(t, b).block(1));
}

TEST(Network, ShapeValidation) {
  const LayeredTopology t({2, 3, 4});
  std::vector<Matrix<double>> blocks{Matrix<double>::Zero(2, 3), Matrix<double>::Zero(4, 3)};
  try {
    NetworkParams<double>(t, blocks, Vector<double>::Zero(9));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
  blocks[1] = Matrix<double>::Zero(3, 4);
  EXPECT_THROW(NetworkParams<double>(t, blocks, Vector<double>::Zero(8)), Error);
  EXPECT_NO_THROW(NetworkParams<double>(t, blocks, Vector<double>::Zero(9)));
}

TEST(Network, AssembleSymmetricAverages) {
  const LayeredTopology t({1, 2, 1});
  std::vector<Matrix<double>> fwd{Matrix<double>::Constant(1, 2, 1.0), Matrix<double>::Constant(2, 1, 0.0)};
  std::vector<Matrix<double>> bwd{Matrix<double>::Constant(2, 1, 3.0), Matrix<double>::Constant(1, 2, 2.0)};
  const auto p = assemble_symmetric<double>(t, fwd, bwd, Vector<double>::Zero(4));
  EXPECT_EQ(p.block(0)(0, 1), 2.0);
  EXPECT_EQ(p.block(1)(1, 0), 1.0);
  std::vector<Matrix<double>> bad{Matrix<double>::Zero(1, 2)};
  EXPECT_THROW(assemble_symmetric<double>(t, fwd, bad, Vector<double>::Zero(4)), Error);
}

TEST(Network, CastPreservesValues) {
  const LayeredTopology t({2, 3, 2});
  Rng rng(1);
  const auto p = random_params<double>(t, rng);
  const auto q = p.cast<long double>();
  EXPECT_EQ(static_cast<double>(q.block(0)(1, 2)), p.block(0)(1, 2));
}

TEST(State, ClampModesAndLayers) {
  const LayeredTopology t({2, 3, 2});
  StateVector<double> s(t.num_units());
  s.set_layer_mode(t, 2, ClampMode<double>::hard());
  EXPECT_TRUE(s.is_free(0));
  EXPECT_FALSE(s.is_free(5));
  s.layer(t, 1).setConstant(0.3);
  EXPECT_EQ(s.values[2], 0.3);
  EXPECT_EQ(s.values[5], 0.0);
  EXPECT_THROW(StateVector<double>(Vector<double>::Zero(3), std::vector<ClampMode<double>>(2)), Error);
}
