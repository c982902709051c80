#include "rydeit/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace rydeit {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i1 = 0; i1 < a.rows(); ++i1)
        for (Eigen::Index j1 = 0; j1 < a.cols(); ++j1) {
            const Complex aij = a(i1, j1);
            for (Eigen::Index i2 = 0; i2 < b.rows(); ++i2)
                for (Eigen::Index j2 = 0; j2 < b.cols(); ++j2)
                    out(i1 * b.rows() + i2, j1 * b.cols() + j2) = aij * b(i2, j2);
        }
    return out;
}

EigenDecomposition eig_hermitian(const ComplexMatrix& h, double hermitian_tol) {
    if (h.rows() != h.cols())
        throw DimensionMismatchError("eig_hermitian: matrix is not square");
    const double scale = h.cwiseAbs().maxCoeff();
    const double dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (dev > hermitian_tol * std::max(scale, 1.0))
        throw NotHermitianError("eig_hermitian: max |h - h^dag| = " + std::to_string(dev));

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (h + h.adjoint()));
    EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors()};

    // fix the free phase: largest-magnitude component real and positive
    for (Eigen::Index c = 0; c < out.vectors.cols(); ++c) {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index r = 0; r < out.vectors.rows(); ++r) {
            double m = std::abs(out.vectors(r, c));
            if (m > best + 1e-15) {
                best = m;
                imax = r;
            }
        }
        Complex z = out.vectors(imax, c);
        if (std::abs(z) > 0.0) out.vectors.col(c) *= std::conj(z) / std::abs(z);
    }
    return out;
}

ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b) {
    if (a.rows() != a.cols())
        throw DimensionMismatchError("solve_linear: matrix is not square");
    if (b.size() != a.rows())
        throw DimensionMismatchError("solve_linear: rhs length mismatch");
    Eigen::PartialPivLU<ComplexMatrix> lu(a);
    const double floor = 1e-13 * a.norm();
    const auto diag = lu.matrixLU().diagonal();
    for (Eigen::Index i = 0; i < diag.size(); ++i)
        if (std::abs(diag(i)) < floor)
            throw SingularMatrixError("solve_linear: pivot " + std::to_string(i) +
                                      " below 1e-13 * ||a||");
    return lu.solve(b);
}

int numerical_rank(const ComplexMatrix& a, double tol) {
    Eigen::ColPivHouseholderQR<ComplexMatrix> qr(a);
    const auto diag = qr.matrixQR().diagonal();
    int rank = 0;
    for (Eigen::Index i = 0; i < diag.size(); ++i)
        if (std::abs(diag(i)) > tol) ++rank;
    return rank;
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// y5 - y4 error weights
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// dense-output weights
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

double error_norm(const ComplexVector& err, const ComplexVector& y0, const ComplexVector& y1,
                  double atol, double rtol) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double scale = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        worst = std::max(worst, std::abs(err(i)) / scale);
    }
    return worst;
}

}  // namespace

OdeResult integrate_ode(const OdeRhs& rhs, ComplexVector y0, double t0, double t1,
                        const OdeOptions& opts, std::span<const double> sample_times) {
    if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0))
        throw std::invalid_argument("integrate_ode: tolerances must be positive");
    if (t1 < t0) throw std::invalid_argument("integrate_ode: t1 < t0");

    const Eigen::Index n = y0.size();
    OdeResult out;
    out.samples.reserve(sample_times.size());
    size_t next_sample = 0;
    auto emit_upto = [&](double t, const auto& interpolate) {
        while (next_sample < sample_times.size() && sample_times[next_sample] <= t + 1e-14) {
            out.samples.push_back(interpolate(sample_times[next_sample]));
            ++next_sample;
        }
    };
    emit_upto(t0, [&](double) { return y0; });

    if (t1 == t0) {
        out.y = std::move(y0);
        return out;
    }

    const double span = t1 - t0;
    ComplexVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    ComplexVector ytmp(n), ynew(n), err(n);
    ComplexVector rc2(n), rc3(n), rc4(n), rc5(n);

    double t = t0;
    ComplexVector y = std::move(y0);
    rhs(t, y, k1);

    // initial step from the first derivative's magnitude
    double h = span * 1e-3;
    {
        double dn = k1.cwiseAbs().maxCoeff();
        double yn = std::max(y.cwiseAbs().maxCoeff(), 1e-8);
        if (dn > 1e-14) h = std::min(span * 0.1, 0.01 * yn / dn);
        h = std::max(h, span * 1e-9);
    }

    while (t < t1) {
        if (h < 1e-12 * span)
            throw StepUnderflowError("integrate_ode: step underflow at t = " + std::to_string(t));
        if (t + h > t1) h = t1 - t;

        ytmp = y + h * (a21 * k1);
        rhs(t + h / 5.0, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        rhs(t + 3.0 * h / 10.0, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + 4.0 * h / 5.0, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + 8.0 * h / 9.0, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, ytmp, k6);
        ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, ynew, k7);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double en = error_norm(err, y, ynew, opts.abs_tol, opts.rel_tol);
        if (en <= 1.0) {
            if (next_sample < sample_times.size() && sample_times[next_sample] <= t + h + 1e-14) {
                rc2 = ynew - y;
                rc3 = h * k1 - rc2;
                rc4 = rc2 - h * k7 - rc3;
                rc5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                const ComplexVector& ybase = y;
                emit_upto(t + h, [&](double ts) -> ComplexVector {
                    const double th = std::clamp((ts - t) / h, 0.0, 1.0);
                    const double th1 = 1.0 - th;
                    return ybase +
                           th * (rc2 + th1 * (rc3 + th * (rc4 + th1 * rc5)));
                });
            }
            t += h;
            y.swap(ynew);
            k1.swap(k7);  // first-same-as-last
            ++out.steps;
            h *= std::clamp(0.9 * std::pow(std::max(en, 1e-10), -0.2), 1.0, 5.0);
        } else {
            ++out.rejected;
            h *= std::clamp(0.9 * std::pow(en, -0.2), 0.2, 0.9);
        }
    }

    emit_upto(t1, [&](double) { return y; });
    out.y = std::move(y);
    return out;
}

}  // namespace rydeit
