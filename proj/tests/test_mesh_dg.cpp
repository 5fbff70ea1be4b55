#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>

#include "test_support.hpp"

using namespace hykin;

namespace {

template <int N>
void expect_matches_boost_table() {
  const auto [x, w] = gauss_legendre(N - 1);
  using Q = boost::math::quadrature::gauss<double, N>;
  std::vector<double> ref_x, ref_w;
  const auto& a = Q::abscissa();
  const auto& b = Q::weights();
  for (std::size_t i = 0; i < a.size(); ++i) {
    ref_x.push_back(0.5 * a[i]);
    ref_w.push_back(0.5 * b[i]);
    if (a[i] != 0.0) {
      ref_x.push_back(-0.5 * a[i]);
      ref_w.push_back(0.5 * b[i]);
    }
  }
  ASSERT_EQ(x.size(), ref_x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    bool found = false;
    for (std::size_t k = 0; k < ref_x.size(); ++k)
      if (std::abs(ref_x[k] - x[i]) < 1e-14) {
        EXPECT_NEAR(w[i], ref_w[k], 1e-14);
        found = true;
      }
    EXPECT_TRUE(found) << "node " << x[i];
  }
}

double poly_integral(int p) { return (p % 2 == 1) ? 0.0 : 2.0 * std::pow(0.5, p + 1) / (p + 1); }

}  // namespace

TEST(GaussLegendre, OrderZeroIsMidpoint) {
  const auto [x, w] = gauss_legendre(0);
  ASSERT_EQ(x.size(), 1u);
  EXPECT_EQ(x[0], 0.0);
  EXPECT_EQ(w[0], 1.0);
}

TEST(GaussLegendre, OrderOneNodesAndWeights) {
  const auto [x, w] = gauss_legendre(1);
  ASSERT_EQ(x.size(), 2u);
  EXPECT_NEAR(x[0], -1.0 / (2.0 * std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(x[1], 1.0 / (2.0 * std::sqrt(3.0)), 1e-15);
  EXPECT_NEAR(w[0], 0.5, 1e-15);
  EXPECT_NEAR(w[1], 0.5, 1e-15);
}

TEST(GaussLegendre, OrderTwoWeights) {
  const auto [x, w] = gauss_legendre(2);
  ASSERT_EQ(w.size(), 3u);
  EXPECT_NEAR(w[0], 5.0 / 18.0, 1e-15);
  EXPECT_NEAR(w[1], 8.0 / 18.0, 1e-15);
  EXPECT_NEAR(w[2], 5.0 / 18.0, 1e-15);
  EXPECT_NEAR(x[1], 0.0, 1e-16);
}

TEST(GaussLegendre, MatchesReferenceTables) {
  expect_matches_boost_table<3>();
  expect_matches_boost_table<4>();
  expect_matches_boost_table<5>();
  expect_matches_boost_table<7>();
}

TEST(GaussLegendre, SymmetricPositiveAndExactToDegree2KPlus1) {
  for (int K = 0; K <= 7; ++K) {
    const auto [x, w] = gauss_legendre(K);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      EXPECT_GT(w[i], 0.0);
      EXPECT_GT(x[i], -0.5);
      EXPECT_LT(x[i], 0.5);
      EXPECT_NEAR(x[i], -x[x.size() - 1 - i], 1e-15);
      sum += w[i];
    }
    EXPECT_NEAR(sum, 1.0, 1e-14);
    for (int p = 0; p <= 2 * K + 1; ++p) {
      double q = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) q += w[i] * std::pow(x[i], p);
      const double exact = poly_integral(p);
      EXPECT_NEAR(q, exact, 1e-12 * std::max(1.0, std::abs(exact))) << "K=" << K << " p=" << p;
    }
  }
}

TEST(NodalBasis, KroneckerProperty) {
  for (int K = 0; K <= 5; ++K) {
    NodalBasis b(K);
    for (int k = 0; k < b.size(); ++k)
      for (int l = 0; l < b.size(); ++l) EXPECT_NEAR(b.value(k, b.nodes()[l]), k == l ? 1.0 : 0.0, 1e-13);
  }
}

TEST(NodalBasis, DiffMatrixOrderZeroIsZero) {
  NodalBasis b(0);
  const auto D = lagrange_diff_matrix(b);
  ASSERT_EQ(D.size(), 1u);
  EXPECT_EQ(D[0], 0.0);
}

TEST(NodalBasis, DiffMatrixLinearExactness) {
  NodalBasis b(1);
  for (int k = 0; k < 2; ++k) {
    double s = 0.0;
    for (int l = 0; l < 2; ++l) s += b.diff(k, l) * b.nodes()[l];
    EXPECT_NEAR(s, 1.0, 1e-14);
  }
}

TEST(NodalBasis, DiffMatrixQuadratic) {
  NodalBasis b(2);
  for (int k = 0; k < 3; ++k) {
    double s = 0.0;
    for (int l = 0; l < 3; ++l) s += b.diff(k, l) * b.nodes()[l] * b.nodes()[l];
    EXPECT_NEAR(s, 2.0 * b.nodes()[k], 1e-13);
  }
}

TEST(NodalBasis, DiffMatrixRowsSumToZeroAndExactForPolynomials) {
  for (int K = 0; K <= 6; ++K) {
    NodalBasis b(K);
    for (int k = 0; k < b.size(); ++k) {
      double row = 0.0;
      for (int l = 0; l < b.size(); ++l) row += b.diff(k, l);
      EXPECT_NEAR(row, 0.0, 1e-12);
      for (int p = 1; p <= K; ++p) {
        double s = 0.0;
        for (int l = 0; l < b.size(); ++l) s += b.diff(k, l) * std::pow(b.nodes()[l], p);
        EXPECT_NEAR(s, p * std::pow(b.nodes()[k], p - 1), 1e-12);
      }
    }
  }
}

TEST(NodalBasis, EdgeTracesEvaluateBasisAtEndpoints) {
  for (int K = 0; K <= 4; ++K) {
    NodalBasis b(K);
    for (int k = 0; k < b.size(); ++k) {
      EXPECT_NEAR(b.left_trace()[k], b.value(k, -0.5), 1e-13);
      EXPECT_NEAR(b.right_trace()[k], b.value(k, 0.5), 1e-13);
    }
  }
}

TEST(Mesh, RejectsNonIncreasingEdges) {
  EXPECT_THROW(Axis({0.0, 0.5, 0.5, 1.0}), ConfigurationError);
  EXPECT_THROW(Axis({0.0, 0.6, 0.4}), ConfigurationError);
  EXPECT_THROW(Axis({0.0}), ConfigurationError);
}

TEST(Mesh, WidthsSumToExtent) {
  Axis a({0.0, 0.01, 0.3, 0.31, 1.0});
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    EXPECT_GT(a.width(i), 0.0);
    s += a.width(i);
  }
  EXPECT_NEAR(s, 1.0, 1e-12);
  Mesh<2> m({Axis::uniform(0.0, 2.0, 4), Axis::uniform(-1.0, 1.0, 3)});
  EXPECT_EQ(m.size(), 12);
  EXPECT_NEAR(m.domain_volume(), 4.0, 1e-14);
  double vol = 0.0;
  for (int c = 0; c < m.size(); ++c) vol += m.volume(c);
  EXPECT_NEAR(vol, 4.0, 1e-13);
}

TEST(Projection, ConstantAndLinearReproduced) {
  DgSpace<1> sp(Mesh<1>({Axis::uniform(0.0, 1.0, 7)}), 2);
  const Field c = project([](const std::array<double, 1>&) { return 3.25; }, sp);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i], 3.25);
  const Field lin = project([](const std::array<double, 1>& x) { return x[0]; }, sp);
  for (int cell = 0; cell < sp.cells(); ++cell)
    for (double xi : {-0.5, -0.2, 0.1, 0.5}) {
      const double x = sp.mesh().axis(0).center(cell) + xi * sp.mesh().width(cell, 0);
      EXPECT_NEAR(sp.evaluate(lin.cell(cell), {xi}), x, 1e-13);
    }
}

namespace {

double sine_interp_error(int n, int K) {
  DgSpace<1> sp(Mesh<1>({Axis::uniform(0.0, 1.0, n)}), K);
  auto f = [](double x) { return std::sin(2.0 * std::numbers::pi * x); };
  const Field q = project([&](const std::array<double, 1>& x) { return f(x[0]); }, sp);
  double err = 0.0;
  for (int c = 0; c < n; ++c) {
    const double lo = sp.mesh().axis(0).edge(c), h = sp.mesh().width(c, 0);
    err += boost::math::quadrature::gauss<double, 20>::integrate(
        [&](double x) {
          const double e = sp.evaluate(q.cell(c), {(x - lo) / h - 0.5}) - f(x);
          return e * e;
        },
        lo, lo + h);
  }
  return std::sqrt(err);
}

}  // namespace

TEST(Projection, SineInterpolationConvergesAtOrderKPlusOne) {
  for (int K : {1, 2}) {
    const double e1 = sine_interp_error(20, K), e2 = sine_interp_error(40, K), e3 = sine_interp_error(80, K);
    EXPECT_GT(std::log2(e1 / e2), K + 1 - 0.15);
    EXPECT_GT(std::log2(e2 / e3), K + 1 - 0.15);
  }
}

TEST(EdgeTraces, ConstantFieldHasEqualLimits) {
  DgSpace<2> sp(Mesh<2>({Axis::uniform(0.0, 1.0, 3), Axis::uniform(0.0, 1.0, 4)}), 1);
  const Field q = project([](const std::array<double, 2>&) { return 2.5; }, sp);
  for (int d = 0; d < 2; ++d)
    for (const auto& tp : edge_traces(q, sp, d)) {
      EXPECT_NEAR(tp.minus, 2.5, 1e-14);
      EXPECT_NEAR(tp.plus, 2.5, 1e-14);
    }
}

TEST(EdgeTraces, PiecewiseConstantJump) {
  DgSpace<1> sp(Mesh<1>({Axis::uniform(0.0, 1.0, 2)}), 0);
  const Field q = project([](const std::array<double, 1>& x) { return x[0] < 0.5 ? 1.0 : 2.0; }, sp);
  const auto tr = edge_traces(q, sp);
  ASSERT_EQ(tr.size(), 1u);
  EXPECT_EQ(tr[0].minus, 1.0);
  EXPECT_EQ(tr[0].plus, 2.0);
}

TEST(EdgeTraces, LinearFieldEndpointValues) {
  Mesh<1> mesh({Axis({0.0, 0.3, 0.45, 1.0})});
  DgSpace<1> sp(mesh, 1);
  Field q(sp);
  const double slopes[3] = {2.0, -1.0, 0.5}, offsets[3] = {1.0, 3.0, -2.0};
  for (int c = 0; c < 3; ++c)
    for (int n = 0; n < 2; ++n) q(c, n) = offsets[c] + slopes[c] * sp.node_position(c, n)[0];
  const auto tr = edge_traces(q, sp);
  ASSERT_EQ(tr.size(), 2u);
  for (int i = 0; i < 2; ++i) {
    const double x = mesh.axis(0).edge(i + 1);
    EXPECT_NEAR(tr[i].minus, offsets[i] + slopes[i] * x, 1e-13);
    EXPECT_NEAR(tr[i].plus, offsets[i + 1] + slopes[i + 1] * x, 1e-13);
  }
}
