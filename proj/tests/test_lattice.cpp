#include <gtest/gtest.h>

#include <cmath>

#include "beamgap/errors.hpp"
#include "beamgap/lattice.hpp"

using namespace beamgap;

TEST(SquareExample, Geometry) {
  UnitCellGraph g = build_square_example(30.0, 0.2);
  ASSERT_EQ(g.vertices.size(), 5u);
  ASSERT_EQ(g.beams.size(), 3u);
  ASSERT_EQ(g.identifications.size(), 2u);
  EXPECT_NEAR(g.total_length(), 2.4, 1e-14);

  EXPECT_NEAR(g.beams[0].length, 1.0, 1e-14);
  EXPECT_NEAR(g.beams[1].length, 1.0, 1e-14);
  EXPECT_NEAR(g.beams[2].length, 0.4, 1e-14);
  EXPECT_EQ(g.beams[0].component, Component::Stiff);
  EXPECT_EQ(g.beams[1].component, Component::Stiff);
  EXPECT_EQ(g.beams[2].component, Component::Soft);

  // Soft segment direction and the +90-degree normal convention.
  double c = std::cos(M_PI / 6), s = std::sin(M_PI / 6);
  EXPECT_NEAR(g.beams[2].tangent.x(), c, 1e-14);
  EXPECT_NEAR(g.beams[2].tangent.y(), s, 1e-14);
  EXPECT_NEAR(g.beams[2].normal.x(), -s, 1e-14);
  EXPECT_NEAR(g.beams[2].normal.y(), c, 1e-14);

  // Soft endpoints ask for attachment, junctions do not.
  EXPECT_FALSE(g.vertex(0).clamped);
  EXPECT_TRUE(g.vertex(3).clamped);
  EXPECT_TRUE(g.vertex(4).clamped);
}

TEST(SquareExample, BeamLengthMatchesEndpoints) {
  UnitCellGraph g = build_square_example(55.0, 0.1);
  for (const Beam& b : g.beams) {
    Vec2 d = g.vertex(b.end_vertex).pos - g.vertex(b.start_vertex).pos;
    EXPECT_NEAR(d.norm(), b.length, 1e-13);
    EXPECT_NEAR((d / d.norm() - b.tangent).norm(), 0.0, 1e-13);
  }
}

TEST(SquareExample, RejectsDegenerateAngles) {
  EXPECT_THROW(build_square_example(0.0, 0.1), geometry_error);
  EXPECT_THROW(build_square_example(90.0, 0.1), geometry_error);
  EXPECT_THROW(build_square_example(-10.0, 0.1), geometry_error);
  EXPECT_THROW(build_square_example(30.0, 0.0), geometry_error);
}

TEST(SquareExample, RejectsSegmentReachingTheFrame) {
  // a cos(30 deg) = 0.433 would cross the stiff beams.
  EXPECT_THROW(build_square_example(30.0, 0.5), geometry_error);
  // At 45 degrees the bound tightens to a < 0.25/cos(45) = 0.3536.
  EXPECT_THROW(build_square_example(45.0, 0.36), geometry_error);
  EXPECT_NO_THROW(build_square_example(45.0, 0.35));
}

TEST(SoftSegment, StandsAlone) {
  UnitCellGraph g = build_soft_segment(30.0, 0.5);
  ASSERT_EQ(g.vertices.size(), 2u);
  ASSERT_EQ(g.beams.size(), 1u);
  EXPECT_EQ(g.beams[0].component, Component::Soft);
  EXPECT_NEAR(g.beams[0].length, 1.0, 1e-14);
  EXPECT_NEAR(g.total_length(), 1.0, 1e-14);
  EXPECT_TRUE(g.vertices[0].clamped);
  EXPECT_TRUE(g.vertices[1].clamped);
  EXPECT_THROW(build_soft_segment(30.0, 0.0), geometry_error);
}

TEST(VertexClasses, ResolvesPeriodicImages) {
  UnitCellGraph g = build_square_example(30.0, 0.2);
  VertexClasses cls(g);
  EXPECT_TRUE(cls.same_class(0, 1));
  EXPECT_TRUE(cls.same_class(0, 2));
  EXPECT_FALSE(cls.same_class(0, 3));
  EXPECT_FALSE(cls.same_class(3, 4));

  // v = rep + m.A must hold geometrically.
  for (const Vertex& v : g.vertices) {
    auto [rep, m] = cls.resolve(v.id);
    Vec2 expect = g.vertex(rep).pos + m[0] * g.lattice_vectors[0] +
                  m[1] * g.lattice_vectors[1];
    EXPECT_NEAR((v.pos - expect).norm(), 0.0, 1e-13) << "vertex " << v.id;
  }
}

TEST(VertexClasses, RejectsConflictingShifts) {
  UnitCellGraph g = build_square_example(30.0, 0.2);
  g.identifications.push_back({0, 1, {2, 0}});  // 1 is already 0 shifted by (1,0)
  EXPECT_THROW(VertexClasses cls(g), structure_error);
}

TEST(VertexClasses, RejectsUnknownVertex) {
  UnitCellGraph g = build_square_example(30.0, 0.2);
  g.identifications.push_back({0, 99, {1, 1}});
  EXPECT_THROW(VertexClasses cls(g), structure_error);
}

TEST(GraphValidation, StiffMustConnectAcrossPeriods) {
  // A single horizontal beam tiles into disconnected rows.
  UnitCellGraph g;
  g.lattice_vectors = {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}};
  g.vertices.push_back({0, Vec2{0.0, 0.0}, false});
  g.vertices.push_back({1, Vec2{1.0, 0.0}, false});
  g.identifications.push_back({0, 1, {1, 0}});
  Beam b;
  b.start_vertex = 0;
  b.end_vertex = 1;
  b.length = 1.0;
  b.tangent = Vec2{1.0, 0.0};
  b.normal = Vec2{0.0, 1.0};
  b.component = Component::Stiff;
  g.beams.push_back(b);
  EXPECT_THROW(validate_graph(g), structure_error);
}

TEST(GraphValidation, AcceptsTheSquareExample) {
  UnitCellGraph g = build_square_example(72.0, 0.07);
  EXPECT_NO_THROW(validate_graph(g));
}

TEST(MaterialParams, RejectsNonPositiveValues) {
  MaterialParams m;
  m.gamma = 0.0;
  EXPECT_THROW(m.validate(), config_error);
  m = MaterialParams{};
  m.kappa = -2.0;
  EXPECT_THROW(m.validate(), config_error);
  EXPECT_NO_THROW(MaterialParams{}.validate());
}

TEST(ScalingParams, DefaultContrastIsEpsilonSquared) {
  ScalingParams s = ScalingParams::with_default_contrast(0.25);
  EXPECT_NEAR(s.epsilon, 0.25, 1e-15);
  EXPECT_NEAR(s.contrast, 0.0625, 1e-15);
  EXPECT_NO_THROW(s.validate());
  s.epsilon = 0.0;
  EXPECT_THROW(s.validate(), config_error);
  s = ScalingParams::with_default_contrast(0.5);
  s.contrast = -1.0;
  EXPECT_THROW(s.validate(), config_error);
}

TEST(Subgraphs, SplitByComponent) {
  UnitCellGraph g = build_square_example(30.0, 0.2);
  UnitCellGraph stiff = stiff_subgraph(g);
  UnitCellGraph soft = soft_subgraph(g);
  EXPECT_EQ(stiff.beams.size(), 2u);
  EXPECT_EQ(soft.beams.size(), 1u);
  for (const Beam& b : stiff.beams) EXPECT_EQ(b.component, Component::Stiff);
  for (const Beam& b : soft.beams) EXPECT_EQ(b.component, Component::Soft);
  EXPECT_NEAR(stiff.total_length() + soft.total_length(), g.total_length(), 1e-13);
}
