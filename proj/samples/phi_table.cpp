// Prints Phi at a few points by all three routes, then F(1) and the
// Lang-Trotter prediction for pi_A(10^6, 1).

#include <cstdio>

#include "cstlab.hpp"

int main() {
  using namespace cstlab;
  std::printf("%6s %20s %20s %20s\n", "s", "closed", "quadrature", "convolution");
  for (double s : {0.0, 0.1, 0.25, 0.5, 0.75, 0.95}) {
    std::printf("%6.2f %20.15f %20.15f %20.15f\n", s, phi_closed(s), phi_marginal_quadrature(s),
                phi_convolution_oracle(s));
  }
  const auto F = euler_product_F(1, 1, 10000);
  std::printf("F(1) = %.15f +- %.3g\n", F.value_double(), F.tail_bound);
  std::printf("pi_A(1e6, 1) ~ %.3f\n", lt_prediction(1e6, 1, F.value_double()));
}
