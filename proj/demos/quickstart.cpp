// Minimal end-to-end run: generate a planted problem, certify step sizes from
// its audited moduli, solve, and compare against the plant.

#include <iostream>

#include "sspvip/generator.hpp"
#include "sspvip/solvers.hpp"

int main() {
  using namespace sspvip;

  GeneratorSpec spec;
  spec.dims = Dims{4, 4, 3, 3};
  SspvipProblem problem = generate_synthetic(spec, 7);

  ProblemModuli moduli = certified_problem_moduli(problem);
  const double lambda = auto_lambda(moduli);
  CertificationReport report = convergence_constants(moduli, lambda);
  if (!report.rho_interval) {
    std::cerr << "no admissible step interval for this draw\n";
    return 1;
  }
  const double rho = report.rho_interval->midpoint();
  const double gamma = report.gamma_interval.midpoint();
  report = certify(moduli, rho, lambda, gamma);
  std::cout << "rho=" << rho << " lambda=" << lambda << " gamma=" << gamma
            << " theta=" << (report.theta ? *report.theta : -1.0)
            << " certified=" << (report.certified ? "yes" : "no") << "\n";

  SolverParams params;
  params.rho = rho;
  params.lambda = lambda;
  params.gamma = gamma;
  params.tol = 1e-10;
  Candidate start{project(problem.set_x, Vec(problem.dims.x, 0.0)),
                  project(problem.set_y, Vec(problem.dims.y, 0.0))};
  SolveResult res = solve(problem, params, start);

  std::cout << (res.converged ? "converged" : "did not converge") << " in "
            << res.iterations << " iterations\n";
  if (problem.planted)
    std::cout << "distance to planted solution: "
              << starred_distance(res.final, *problem.planted) << "\n";
  return res.converged ? 0 : 1;
}
