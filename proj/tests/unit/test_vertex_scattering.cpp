#include <gtest/gtest.h>

#include "qgraph/graph.hpp"
#include "qgraph/vertex_scattering.hpp"

using namespace qgraph;

namespace {

double max_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

CMatrix sigma_of(const VertexCoupling& c, int n, int m, Complex k) {
  const VertexBlocks b = VertexBlocks::split(coupling_matrix(c, n + m), n);
  return effective_sigma(effective_coupling(b, k), k);
}

std::vector<Complex> k_grid() {
  std::vector<Complex> out;
  for (double re = 0.3; re < 20.0; re += 1.37)
    for (double im : {-2.0, -0.5, 0.0, 0.3}) out.emplace_back(re, im);
  return out;
}

}  // namespace

TEST(EffectiveCoupling, NoLeadsReturnsU) {
  const CMatrix u = coupling_matrix(Delta{2.0}, 3);
  const VertexBlocks b = VertexBlocks::split(u, 3);
  for (const Complex k : {Complex(1.0, 0.0), Complex(7.5, -1.0)}) EXPECT_EQ(effective_coupling(b, k), u);
}

TEST(EffectiveCoupling, NeumannWithLeadAtOne) {
  const VertexBlocks b = VertexBlocks::split(coupling_matrix(Neumann{}, 3), 2);
  EXPECT_LT(max_diff(effective_coupling(b, 1.0), b.u1), 1e-15);
}

TEST(EffectiveCoupling, BlocksReassemble) {
  const CMatrix u = coupling_matrix(DeltaPrimeS{0.7}, 5);
  EXPECT_EQ(VertexBlocks::split(u, 3).assemble(), u);
}

TEST(EffectiveCoupling, PoleCarriesK) {
  // Dirichlet lead block: (1-k)(-1) - (k+1) = -2, never singular; a coupling
  // with U4 = 1 has the pole (1-k) - (k+1) = -2k at k = 0.
  const VertexBlocks b = VertexBlocks::split(coupling_matrix(Neumann{}, 2), 1);
  try {
    effective_coupling(b, 0.0);
    FAIL() << "expected PoleError";
  } catch (const PoleError& e) {
    EXPECT_EQ(e.kind(), PoleError::Kind::EffectiveCoupling);
    EXPECT_EQ(e.k(), Complex(0.0, 0.0));
  }
}

TEST(EffectiveSigma, NeumannAndDirichlet) {
  for (const Complex k : k_grid()) {
    EXPECT_LT(max_diff(effective_sigma(CMatrix::Identity(3, 3), k), CMatrix::Identity(3, 3)), 1e-14);
    EXPECT_LT(max_diff(effective_sigma(-CMatrix::Identity(2, 2), k), -CMatrix::Identity(2, 2)), 1e-14);
  }
}

// The two-edge, one-lead delta vertex of the circle with two leads.
TEST(EffectiveSigma, DeltaVertexWithOneLead) {
  for (double alpha : {0.0, 1.0, 10.0}) {
    for (const Complex k : k_grid()) {
      const Complex a = alpha / (kI * k);
      CMatrix expected(2, 2);
      expected << a - 1.0, 2.0, 2.0, a - 1.0;
      expected /= (3.0 - a);
      EXPECT_LT(max_diff(sigma_of(Delta{alpha}, 2, 1, k), expected), 1e-12) << "alpha=" << alpha << " k=" << k;
    }
  }
}

TEST(EffectiveSigma, DeltaClosedFormAllSizes) {
  for (int n = 1; n <= 4; ++n)
    for (int m = 0; m <= 3; ++m)
      for (double alpha : {-3.0, 0.5, 4.0})
        for (const Complex k : k_grid()) {
          const Complex denom = static_cast<double>(n + m) - alpha / (kI * k);
          const CMatrix expected = (2.0 / denom) * ones(n) - CMatrix::Identity(n, n);
          EXPECT_LT(max_diff(sigma_of(Delta{alpha}, n, m, k), expected), 1e-10);
        }
}

TEST(EffectiveSigma, DeltaPrimeClosedForm) {
  for (int n = 1; n <= 4; ++n)
    for (int m = 0; m <= 3; ++m)
      for (double beta : {-2.0, 1.0, 3.0})
        for (const Complex k : k_grid()) {
          const Complex denom = kI * k * beta - static_cast<double>(n + m);
          if (std::abs(denom) < 1e-3) continue;
          const CMatrix expected = (2.0 / denom) * ones(n) + CMatrix::Identity(n, n);
          EXPECT_LT(max_diff(sigma_of(DeltaPrimeS{beta}, n, m, k), expected), 1e-10);
        }
}

TEST(EffectiveSigma, UnitaryWithoutLeads) {
  CMatrix h = CMatrix::Random(4, 4);
  h = (h + h.adjoint()).eval();
  const Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CMatrix u = es.eigenvectors() * es.eigenvalues().unaryExpr([](double x) { return std::exp(kI * x); }).asDiagonal() *
              es.eigenvectors().adjoint();
  for (double k = 0.25; k < 25.0; k += 0.61) {
    EXPECT_LT(unitarity_defect(effective_sigma(u, k)), 1e-10);
    EXPECT_LT(unitarity_defect(effective_sigma(coupling_matrix(DeltaPrimeS{1.3}, 3), k)), 1e-10);
  }
}

TEST(EffectiveSigma, HighEnergyLimits) {
  const CMatrix standard = (2.0 / 3.0) * ones(2) - CMatrix::Identity(2, 2);
  const double d3 = (sigma_of(Delta{2.0}, 2, 1, 1e3) - standard).norm();
  const double d4 = (sigma_of(Delta{2.0}, 2, 1, 1e4) - standard).norm();
  EXPECT_GT(d3 / d4, 5.0);
  EXPECT_LT(d3 / d4, 20.0);
  const double p3 = (sigma_of(DeltaPrimeS{2.0}, 2, 1, 1e3) - CMatrix::Identity(2, 2)).norm();
  const double p4 = (sigma_of(DeltaPrimeS{2.0}, 2, 1, 1e4) - CMatrix::Identity(2, 2)).norm();
  EXPECT_GT(p3 / p4, 5.0);
  EXPECT_LT(p3 / p4, 20.0);
}

TEST(EffectiveSigma, SigmaPoleIsTyped) {
  // delta'_s(beta) with n + m = 3: pole where i k beta = 3, i.e. k = -3i / beta.
  const Complex pole(0.0, -3.0);
  try {
    sigma_of(DeltaPrimeS{1.0}, 2, 1, pole);
    FAIL() << "expected PoleError";
  } catch (const PoleError& e) {
    EXPECT_EQ(e.kind(), PoleError::Kind::Sigma);
    EXPECT_NE(std::string(e.what()).find("sigma pole"), std::string::npos);
  }
}

TEST(EffectiveSigma, FactorsCommuteAndReproduceSigma) {
  const VertexBlocks b = VertexBlocks::split(coupling_matrix(Delta{1.5}, 4), 3);
  const Complex k(2.3, -0.4);
  const SigmaFactors f = sigma_factors(effective_coupling(b, k), k);
  EXPECT_LT(max_diff(f.denominator * f.numerator, f.numerator * f.denominator), 1e-12);
  EXPECT_LT(max_diff(-f.denominator.inverse() * f.numerator, effective_sigma(effective_coupling(b, k), k)), 1e-12);
}
