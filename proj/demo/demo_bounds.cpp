// Small tour: a seeded lasso, FISTA vs FPGM-OPG, and the certificates behind
// their worst-case bounds.
#include <iomanip>
#include <iostream>

#include "proxpep/algorithms.hpp"
#include "proxpep/bounds.hpp"
#include "proxpep/pep.hpp"
#include "proxpep/problems.hpp"
#include "proxpep/rng.hpp"

using namespace proxpep;

int main() {
  SplitMix64 rng(7);
  CompositeProblem p = random_lasso(rng, 20);
  p = p.with_reference(solve_reference(p));
  const InitialCondition init = make_initial_condition(p, rng.normal_vector(p.dimension()));
  const double L = p.lipschitz();
  const double F_star = p.reference()->F;
  const std::size_t N = 30;

  std::cout << std::setprecision(6);
  std::cout << "L = " << L << "  R = " << init.R << "  F* = " << F_star << "\n\n";

  const RunTrace fista = run_fpgm(p, init.x0, N);
  const RunTrace opg = run_fpgm_opg(p, init.x0, N);
  std::cout << "FPGM      gap " << fista.F.back() - F_star << "  bound " << bound::fpgm_cost(N, L, init.R)
            << "  min mapping " << fista.omega_min() << "\n";
  std::cout << "FPGM-OPG  gap " << opg.F.back() - F_star << "  bound "
            << bound::fpgm_opg_cost(N, L, init.R) << "  min mapping " << opg.omega_min() << "  bound "
            << bound::fpgm_opg_mapping(N, L, init.R) << "\n\n";

  for (const TSequence& t : {fista_t_sequence(N), opg_t_sequence(N)}) {
    const StepSchedule h = step_coefficients(t);
    const CostCertificate cc = lemma2_certificate(t);
    const MappingCertificate mc = lemma4_certificate(t);
    const FeasibilityReport fc = check_feasibility(h, cc);
    const FeasibilityReport fm = check_feasibility(h, mc);
    std::cout << t.label() << ": cost certificate min eig " << fc.min_eigenvalue << " -> bound "
              << dual_bound_cost(cc, L, init.R) << "; mapping certificate min eig " << fm.min_eigenvalue
              << " -> bound " << dual_bound_mapping(mc, L, init.R) << "\n";
  }
  return 0;
}
