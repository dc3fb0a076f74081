// Fit one Gaussian to a bimodal belief in both KL directions.

#include <cstdio>

#include "beliefapprox/approximators.hpp"

int main() {
  using namespace beliefapprox;
  const Density p = Mixture1D({0.5, 0.5}, {Gaussian1D(-3.0, 1.0), Gaussian1D(3.0, 1.0)});
  const auto family = ParametricFamily::gaussian();

  const auto approx = fit(p, family, FitDirection::approximation_kl);
  FitOptions start_right;
  start_right.init = std::vector<double>{2.0, 1.0};
  const auto infer = fit(p, family, FitDirection::inference_kl, start_right);

  for (const auto* r : {&approx, &infer}) {
    const auto& q = std::get<Gaussian1D>(r->fitted);
    std::printf("%-16s mean %8.4f  variance %8.4f  KL(p,q) %.6f\n", std::string(to_string(r->direction)).c_str(),
                q.mean(), q.variance(), kl(p, r->fitted));
  }
}
