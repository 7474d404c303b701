#include <gtest/gtest.h>

#include "transit/transit.hpp"

using namespace transit;

TEST(Umbrella, EndToEndFromMomentsToTransition) {
  // moments of the standard Gaussian, truncated GNS, transition of the vacuum with itself
  const auto mu = gaussian_measure();
  const auto m = measure_moments(mu, 8);
  const auto jm = jacobi_from_moments(MomentSequence(m.values));
  ASSERT_EQ(jm.b.size(), 3u);
  EXPECT_NEAR(jm.b[0], 1.0, 1e-8);

  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  const Representation rep(2, {{"x", x}});
  Vector phi(2);
  phi << 1.0, 0.0;
  const auto r = transition_probability(rep, phi, phi);
  EXPECT_NEAR(r.probability, 1.0, 1e-10);
}
