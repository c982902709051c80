#pragma once

// Dense complex linear algebra and ODE integration primitives.
// Everything here is physics-agnostic; the model modules build on it.

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rydeit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct NotHermitianError : std::runtime_error {
    explicit NotHermitianError(const std::string& what) : std::runtime_error(what) {}
};

struct SingularMatrixError : std::runtime_error {
    explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

struct StepUnderflowError : std::runtime_error {
    explicit StepUnderflowError(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatchError : std::runtime_error {
    explicit DimensionMismatchError(const std::string& what) : std::runtime_error(what) {}
};

// Tensor product, atom-1-major: entry ((i1*b.rows+i2),(j1*b.cols+j2)) = a(i1,j1)*b(i2,j2).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

struct EigenDecomposition {
    RealVector values;      // ascending
    ComplexMatrix vectors;  // column i pairs with values[i]; unit norm, phase-fixed
};

// Eigendecomposition of a Hermitian matrix. Eigenvector phases are fixed by
// making the largest-magnitude component real and positive, so repeated calls
// and different backends agree. Throws NotHermitian if max|h - h^dag| exceeds
// hermitian_tol * max|h|.
EigenDecomposition eig_hermitian(const ComplexMatrix& h, double hermitian_tol = 1e-12);

// Solve a x = b by partially pivoted LU. Throws Singular if a pivot falls
// below 1e-13 * ||a||_F.
ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b);

// Rank with respect to threshold tol (counts singular values > tol).
int numerical_rank(const ComplexMatrix& a, double tol);

// Right-hand side writes dy in place; y must not be aliased with dy.
using OdeRhs = std::function<void(double t, const ComplexVector& y, ComplexVector& dy)>;

struct OdeOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
};

struct OdeResult {
    ComplexVector y;                    // state at the end of t_span
    std::vector<ComplexVector> samples; // dense output at the requested times
    long steps = 0;
    long rejected = 0;
};

// Adaptive Dormand-Prince 5(4) with max-norm error control and a 4th-order
// dense interpolant for the sample times. sample_times must be sorted and lie
// inside [t0, t1]. Throws StepUnderflow if the step drops below 1e-12 of the
// span.
OdeResult integrate_ode(const OdeRhs& rhs, ComplexVector y0, double t0, double t1,
                        const OdeOptions& opts = {},
                        std::span<const double> sample_times = {});

}  // namespace rydeit
