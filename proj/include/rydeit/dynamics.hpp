#pragma once

// Liouvillian construction, steady states, time propagation and observables.
// Vectorization is column-stacking throughout: vec(A X B) = (B^T kron A) vec(X),
// so vec(rho)[i + j*d] = rho(i, j).

#include "rydeit/model.hpp"
#include "rydeit/numerics.hpp"

#include <span>
#include <vector>

namespace rydeit {

struct DegenerateSteadyStateError : std::runtime_error {
    explicit DegenerateSteadyStateError(const std::string& what) : std::runtime_error(what) {}
};

struct PhysicalityLostError : std::runtime_error {
    explicit PhysicalityLostError(const std::string& what) : std::runtime_error(what) {}
};

struct DensityMatrix {
    ComplexMatrix rho;
    BasisLabels basis;
};

struct Liouvillian {
    ComplexMatrix matrix;  // d^2 x d^2
    int dim = 0;           // d
};

ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, int dim);

// L = -i(I kron H - H^T kron I)
//     + sum_k rate_k [conj(C) kron C - 1/2 I kron C^dag C - 1/2 (C^dag C)^T kron I]
// H and the rates must already be angular.
Liouvillian build_liouvillian(const ComplexMatrix& h, std::span<const JumpChannel> jumps);

// Unique stationary state of L, found by replacing the first row of L with the
// vectorized trace row (rhs 1) and solving. The result is projected to exact
// Hermiticity and validated. Throws DegenerateSteadyState when the numerical
// rank of L (threshold 1e-10 ||L||_F) is below d^2 - 1, i.e. when a conserved
// subspace makes the stationary state depend on the initial condition.
ComplexMatrix steady_state_matrix(const Liouvillian& l);
DensityMatrix steady_state(const Liouvillian& l, const BasisLabels& basis);

// Density-matrix invariants; throws PhysicalityLost on violation.
void validate_density(const ComplexMatrix& rho, double trace_tol = 1e-10,
                      double herm_tol = 1e-10, double eig_floor = -1e-8);

// Propagate rho0 under a static Liouvillian and sample at the given times
// (sorted, within [0, t_end]). Samples are drift-checked (trace and
// Hermiticity within 1e-8) before being projected and returned.
std::vector<ComplexMatrix> evolve_matrix(const ComplexMatrix& rho0, const Liouvillian& l,
                                         double t_end, std::span<const double> sample_times,
                                         const OdeOptions& opts = {});

std::vector<DensityMatrix> evolve(const DensityMatrix& rho0, const Liouvillian& l, double t_end,
                                  std::span<const double> sample_times,
                                  const OdeOptions& opts = {});

// Time-dependent variant: rho' = -i[H(t), rho] + dissipator. H(t) must be
// angular. Used for generators with residual laser phases.
using HamiltonianFn = std::function<ComplexMatrix(double t)>;
std::vector<ComplexMatrix> evolve_matrix(const ComplexMatrix& rho0, const HamiltonianFn& h_of_t,
                                         std::span<const JumpChannel> jumps, double t_end,
                                         std::span<const double> sample_times,
                                         const OdeOptions& opts = {});

double level_population(const DensityMatrix& dm, int atom, int lev);
double rydberg_population(const DensityMatrix& dm, int atom);

// 1/2 sum |eigenvalues| of the (Hermitian) difference.
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace rydeit
