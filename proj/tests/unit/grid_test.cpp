#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "ddpen/grid/cost_map.hpp"
#include "ddpen/grid/costmap_io.hpp"
#include "ddpen/grid/distance_field.hpp"
#include "ddpen/grid/map_gen.hpp"
#include "ddpen/grid/shapes.hpp"
#include "test_util.hpp"

namespace ddpen::grid {
namespace {

// Nearest lethal cell center by scanning every pair of cells.
std::vector<double> brute_force_distances(const CostMap& map) {
  std::vector<double> out(map.size(), DistanceField::kNoObstacle);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const CellIndex a = map.cell_of(i);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < map.size(); ++j) {
      if (!map.is_lethal(j)) {
        continue;
      }
      const CellIndex b = map.cell_of(j);
      best = std::min(best, std::hypot(a.x - b.x, a.y - b.y) * map.resolution());
    }
    if (std::isfinite(best)) {
      out[i] = best;
    }
  }
  return out;
}

TEST(CostMap, DefaultGeometry) {
  const CostMap map = CostMap::make_default();
  EXPECT_EQ(map.width(), 200);
  EXPECT_EQ(map.height(), 200);
  EXPECT_EQ(map.size(), 200u * 200u);
  EXPECT_DOUBLE_EQ(map.extent_x(), 10.0);
  EXPECT_DOUBLE_EQ(map.origin().x(), -5.0);
}

TEST(CostMap, WorldToCellAtCenter) {
  const CostMap map = CostMap::make_default();
  const auto c = map.world_to_cell({0.0, 0.0});
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(*c, (CellIndex{100, 100}));
}

TEST(CostMap, WorldCellRoundTrip) {
  const CostMap map = CostMap::make_default();
  Rng rng(3);
  for (int k = 0; k < 1000; ++k) {
    const Point2 p(rng.uniform(-4.99, 4.99), rng.uniform(-4.99, 4.99));
    const auto c = map.world_to_cell(p);
    ASSERT_TRUE(c.has_value());
    const Point2 q = map.cell_to_world(*c);
    EXPECT_LE(std::abs(q.x() - p.x()), map.resolution() / 2 + 1e-12);
    EXPECT_LE(std::abs(q.y() - p.y()), map.resolution() / 2 + 1e-12);
  }
}

TEST(CostMap, FarPointIsOutOfBounds) {
  const CostMap map = CostMap::make_default();
  EXPECT_FALSE(map.world_to_cell({100.0, 100.0}).has_value());
  EXPECT_FALSE(map.world_to_cell({-5.01, 0.0}).has_value());
}

TEST(CostMap, RejectsCostsOutsideUnitRange) {
  CostMap map = CostMap::make_default();
  EXPECT_THROW(map.set(CellIndex{0, 0}, 1.5), std::invalid_argument);
  EXPECT_THROW(map.set(CellIndex{0, 0}, -0.1), std::invalid_argument);
  EXPECT_THROW(map.set(CellIndex{200, 0}, 0.5), std::out_of_range);
}

TEST(MapGen, ZeroObstaclesGivesEmptyMap) {
  MapGenParams params;
  params.min_obstacles = 0;
  params.max_obstacles = 0;
  const CostMap map = generate_random_map(params);
  for (double c : map.data()) {
    ASSERT_EQ(c, 0.0);
  }
}

TEST(MapGen, SameSeedIsBitIdentical) {
  MapGenParams params;
  params.seed = 9;
  EXPECT_EQ(generate_random_map(params), generate_random_map(params));
  MapGenParams other = params;
  other.seed = 10;
  EXPECT_FALSE(generate_random_map(params) == generate_random_map(other));
}

TEST(MapGen, Seed42HasFreeCenterAndObstacles) {
  MapGenParams params;
  params.seed = 42;
  const CostMap map = generate_random_map(params);
  EXPECT_LT(map.at(map.center_cell()), 1.0);
  bool any_lethal = false;
  for (std::size_t i = 0; i < map.size(); ++i) {
    any_lethal = any_lethal || map.is_lethal(i);
  }
  EXPECT_TRUE(any_lethal);
}

TEST(MapGen, CenterNeighborhoodFreeOverManySeeds) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    MapGenParams params;
    params.seed = seed;
    const CostMap map = generate_random_map(params);
    const CellIndex c = map.center_cell();
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        ASSERT_FALSE(map.is_lethal(CellIndex{c.x + dx, c.y + dy})) << "seed " << seed;
      }
    }
  }
}

TEST(MapGen, InvalidParamsRejected) {
  MapGenParams params;
  params.min_obstacles = 5;
  params.max_obstacles = 2;
  EXPECT_THROW(generate_random_map(params), std::invalid_argument);
  params = {};
  params.inflation_radius = -1.0;
  EXPECT_THROW(generate_random_map(params), std::invalid_argument);
}

TEST(MapGen, BlockedCenterExhaustsRetries) {
  MapGenParams params;
  params.min_obstacles = 40;
  params.max_obstacles = 40;
  params.scale_min = 20.0;
  params.scale_max = 20.0;
  params.max_retries = 3;
  EXPECT_THROW(generate_random_map(params), MapGenerationError);
}

TEST(Dilate, ZeroRadiusIsIdentity) {
  MapGenParams params;
  params.seed = 4;
  const CostMap map = generate_random_map(params);
  EXPECT_EQ(dilate(map, 0.0), map);
}

TEST(Dilate, SingleCellLinearDecay) {
  CostMap map(11, 11, 0.05, Point2::Zero());
  map.set(CellIndex{5, 5}, 1.0);
  const CostMap out = dilate(map, 0.15, DecayProfile::kLinear);
  EXPECT_NEAR(out.at(CellIndex{6, 5}), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(out.at(CellIndex{5, 4}), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(out.at(CellIndex{7, 5}), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(out.at(CellIndex{8, 5}), 0.0);
  EXPECT_EQ(out.at(CellIndex{5, 5}), 1.0);
}

TEST(Dilate, FullyLethalUnchanged) {
  CostMap map(20, 20, 0.05, Point2::Zero());
  map.fill(1.0);
  EXPECT_EQ(dilate(map, 0.5), map);
}

TEST(Dilate, NeverLowersCostAndLeavesFarCellsAlone) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const CostMap map = test::random_map(40, 40, rng, 0.05);
    const double radius = rng.uniform(0.0, 0.4);
    const CostMap out = dilate(map, radius);
    const DistanceField field = distance_field(map);
    for (std::size_t i = 0; i < map.size(); ++i) {
      ASSERT_GE(out.at(i), map.at(i));
      if (map.is_lethal(i)) {
        ASSERT_EQ(out.at(i), map.at(i));
      }
      if (field.at(map.cell_of(i)) >= radius) {
        ASSERT_EQ(out.at(i), map.at(i));
      }
    }
  }
}

TEST(DistanceField, EmptyMapIsSentinel) {
  const CostMap map(30, 20, 0.05, Point2::Zero());
  const DistanceField field = distance_field(map);
  EXPECT_FALSE(field.has_obstacles());
  for (double d : field.data()) {
    ASSERT_EQ(d, DistanceField::kNoObstacle);
  }
  EXPECT_GT(DistanceField::kNoObstacle, std::hypot(map.extent_x(), map.extent_y()));
}

TEST(DistanceField, SingleCellThreeRight) {
  CostMap map = CostMap::make_default();
  map.set(map.center_cell(), 1.0);
  const DistanceField field = distance_field(map);
  EXPECT_NEAR(field.at(CellIndex{103, 100}), 0.15, 1e-12);
  EXPECT_EQ(field.at(CellIndex{100, 100}), 0.0);
}

TEST(DistanceField, MatchesBruteForceOnRandomMaps) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int w = static_cast<int>(rng.uniform_int(1, 64));
    const int h = static_cast<int>(rng.uniform_int(1, 64));
    const CostMap map = test::random_map(w, h, rng, rng.uniform(0.0, 0.2));
    const DistanceField field = distance_field(map);
    const std::vector<double> expected = brute_force_distances(map);
    for (std::size_t i = 0; i < map.size(); ++i) {
      ASSERT_NEAR(field.data()[i], expected[i], 1e-9) << "trial " << trial << " cell " << i;
    }
  }
}

TEST(DistanceField, AdjacentCellsRespectTriangleBound) {
  Rng rng(6);
  const CostMap map = test::random_map(50, 50, rng, 0.03);
  const DistanceField field = distance_field(map);
  for (int y = 0; y < 50; ++y) {
    for (int x = 0; x + 1 < 50; ++x) {
      ASSERT_LE(std::abs(field.at(CellIndex{x, y}) - field.at(CellIndex{x + 1, y})),
                map.resolution() * std::sqrt(2.0) + 1e-12);
    }
  }
}

TEST(DistanceField, BilinearSampleHitsCellCenters) {
  Rng rng(7);
  const CostMap map = test::random_map(40, 40, rng, 0.05);
  const DistanceField field = distance_field(map);
  for (int k = 0; k < 100; ++k) {
    const CellIndex c{static_cast<int>(rng.uniform_int(0, 39)),
                      static_cast<int>(rng.uniform_int(0, 39))};
    EXPECT_NEAR(field.sample(map.cell_to_world(c)), field.at(c), 1e-12);
  }
  Eigen::Vector2d grad;
  EXPECT_EQ(field.sample(Point2(-10.0, 0.5), &grad), DistanceField::kNoObstacle);
  EXPECT_EQ(grad, Eigen::Vector2d::Zero());
}

TEST(CostMapIo, PgmRoundTripIsBitExact) {
  MapGenParams params;
  params.seed = 11;
  const CostMap map = generate_random_map(params);
  const CostMap back = from_pgm(to_pgm(map), to_sidecar_json(map));
  EXPECT_EQ(back, map);
}

TEST(CostMapIo, SaveLoadThroughFiles) {
  test::TempDir dir;
  CostMap map(7, 5, 0.1, Point2(1.5, -2.0));
  map.set(CellIndex{3, 2}, 1.0);
  map.set(CellIndex{0, 4}, 128.0 / 255.0);
  save_costmap(map, dir.path() / "m");
  EXPECT_EQ(load_costmap(dir.path() / "m.pgm"), map);
  EXPECT_EQ(load_costmap(dir.path() / "m"), map);
}

TEST(CostMapIo, MalformedInputThrows) {
  EXPECT_THROW(from_pgm("P5\n1 1\n255\n0\n", R"({"resolution_m":0.05,"origin_x_m":0,)"
                                             R"("origin_y_m":0,"lethal_threshold":1})"),
               CostMapIoError);
  EXPECT_THROW(from_pgm("P2\n2 1\n255\n0\n", R"({"resolution_m":0.05,"origin_x_m":0,)"
                                            R"("origin_y_m":0,"lethal_threshold":1})"),
               CostMapIoError);
}

TEST(Shapes, RasterizedCellsAreInsideShape) {
  CostMap map(100, 100, 0.05, Point2::Zero());
  const Shape box = Shape::box({2.5, 2.5}, 0.7, 1.0, 0.5);
  rasterize(map, box);
  int count = 0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    const bool inside = box.contains(map.cell_to_world(map.cell_of(i)));
    ASSERT_EQ(map.is_lethal(i), inside);
    count += inside ? 1 : 0;
  }
  EXPECT_NEAR(count * 0.05 * 0.05, 0.5, 0.05);
}

}  // namespace
}  // namespace ddpen::grid
