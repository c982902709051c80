#include "rydeit/dynamics.hpp"

#include <cmath>

namespace rydeit {

ComplexVector vec(const ComplexMatrix& m) {
    return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, int dim) {
    return Eigen::Map<const ComplexMatrix>(v.data(), dim, dim);
}

Liouvillian build_liouvillian(const ComplexMatrix& h, std::span<const JumpChannel> jumps) {
    if (h.rows() != h.cols()) throw DimensionMismatchError("build_liouvillian: H not square");
    const int d = static_cast<int>(h.rows());
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    const Complex im(0.0, 1.0);

    ComplexMatrix l = -im * (kron(id, h) - kron(h.transpose(), id));
    for (const JumpChannel& j : jumps) {
        if (j.op.rows() != d || j.op.cols() != d)
            throw DimensionMismatchError("build_liouvillian: jump operator dimension mismatch");
        const ComplexMatrix cdc = j.op.adjoint() * j.op;
        l += j.rate * (kron(j.op.conjugate(), j.op) - 0.5 * kron(id, cdc) -
                       0.5 * kron(cdc.transpose(), id));
    }
    return {std::move(l), d};
}

ComplexMatrix steady_state_matrix(const Liouvillian& l) {
    const int d = l.dim;
    const int n = d * d;
    const double norm = l.matrix.norm();
    const int rank = numerical_rank(l.matrix, 1e-10 * norm);
    if (rank < n - 1)
        throw DegenerateSteadyStateError("steady state not unique: rank " + std::to_string(rank) +
                                         " < " + std::to_string(n - 1) +
                                         " (conserved subspace; evolve from an initial state)");

    ComplexMatrix a = l.matrix;
    a.row(0).setZero();
    for (int i = 0; i < d; ++i) a(0, i * (d + 1)) = 1.0;
    ComplexVector b = ComplexVector::Zero(n);
    b(0) = 1.0;

    ComplexMatrix rho = unvec(solve_linear(a, b), d);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    validate_density(rho);
    return rho;
}

DensityMatrix steady_state(const Liouvillian& l, const BasisLabels& basis) {
    if (basis.dim() != l.dim)
        throw DimensionMismatchError("steady_state: basis dimension mismatch");
    return {steady_state_matrix(l), basis};
}

void validate_density(const ComplexMatrix& rho, double trace_tol, double herm_tol,
                      double eig_floor) {
    const double tr_err = std::abs(rho.trace() - Complex(1.0, 0.0));
    if (tr_err > trace_tol)
        throw PhysicalityLostError("trace deviates from 1 by " + std::to_string(tr_err));
    const double herm_err = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm_err > herm_tol)
        throw PhysicalityLostError("Hermiticity violated by " + std::to_string(herm_err));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho + rho.adjoint()),
                                                    Eigen::EigenvaluesOnly);
    const double emin = es.eigenvalues().minCoeff();
    if (emin < eig_floor)
        throw PhysicalityLostError("negative population " + std::to_string(emin));
}

namespace {

std::vector<ComplexMatrix> collect_samples(const OdeResult& res, int d) {
    std::vector<ComplexMatrix> out;
    out.reserve(res.samples.size());
    for (const ComplexVector& s : res.samples) {
        ComplexMatrix rho = unvec(s, d);
        const double tr_err = std::abs(rho.trace() - Complex(1.0, 0.0));
        const double herm_err = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        if (tr_err > 1e-8)
            throw PhysicalityLostError("evolve: trace drifted by " + std::to_string(tr_err));
        if (herm_err > 1e-8)
            throw PhysicalityLostError("evolve: Hermiticity drifted by " + std::to_string(herm_err));
        rho = 0.5 * (rho + rho.adjoint()).eval();
        rho /= rho.trace().real();
        out.push_back(std::move(rho));
    }
    return out;
}

}  // namespace

std::vector<ComplexMatrix> evolve_matrix(const ComplexMatrix& rho0, const Liouvillian& l,
                                         double t_end, std::span<const double> sample_times,
                                         const OdeOptions& opts) {
    if (rho0.rows() != l.dim) throw DimensionMismatchError("evolve: state dimension mismatch");
    const ComplexMatrix& lm = l.matrix;
    OdeRhs rhs = [&lm](double, const ComplexVector& y, ComplexVector& dy) { dy.noalias() = lm * y; };
    OdeResult res = integrate_ode(rhs, vec(rho0), 0.0, t_end, opts, sample_times);
    return collect_samples(res, l.dim);
}

std::vector<DensityMatrix> evolve(const DensityMatrix& rho0, const Liouvillian& l, double t_end,
                                  std::span<const double> sample_times, const OdeOptions& opts) {
    std::vector<DensityMatrix> out;
    for (ComplexMatrix& m : evolve_matrix(rho0.rho, l, t_end, sample_times, opts))
        out.push_back({std::move(m), rho0.basis});
    return out;
}

std::vector<ComplexMatrix> evolve_matrix(const ComplexMatrix& rho0, const HamiltonianFn& h_of_t,
                                         std::span<const JumpChannel> jumps, double t_end,
                                         std::span<const double> sample_times,
                                         const OdeOptions& opts) {
    const int d = static_cast<int>(rho0.rows());
    struct Channel {
        ComplexMatrix c, cdc;
        double rate;
    };
    std::vector<Channel> chans;
    for (const JumpChannel& j : jumps) chans.push_back({j.op, j.op.adjoint() * j.op, j.rate});

    const Complex im(0.0, 1.0);
    ComplexMatrix rho(d, d), drho(d, d), h(d, d), tmp(d, d);
    OdeRhs rhs = [&](double t, const ComplexVector& y, ComplexVector& dy) {
        rho = unvec(y, d);
        h = h_of_t(t);
        drho.noalias() = h * rho;
        drho.noalias() -= rho * h;
        drho *= -im;
        for (const Channel& ch : chans) {
            tmp.noalias() = ch.c * rho;
            drho.noalias() += ch.rate * (tmp * ch.c.adjoint());
            drho.noalias() -= (0.5 * ch.rate) * (ch.cdc * rho);
            drho.noalias() -= (0.5 * ch.rate) * (rho * ch.cdc);
        }
        dy = Eigen::Map<const ComplexVector>(drho.data(), d * d);
    };
    OdeResult res = integrate_ode(rhs, vec(rho0), 0.0, t_end, opts, sample_times);
    return collect_samples(res, d);
}

double level_population(const DensityMatrix& dm, int atom, int lev) {
    const int d = dm.basis.levels_per_atom;
    if (dm.basis.atoms == 1) return dm.rho(lev, lev).real();
    double total = 0.0;
    for (int other = 0; other < d; ++other) {
        const int idx = atom == 1 ? dm.basis.pair_index(lev, other) : dm.basis.pair_index(other, lev);
        total += dm.rho(idx, idx).real();
    }
    return total;
}

double rydberg_population(const DensityMatrix& dm, int atom) {
    return level_population(dm, atom, dm.basis.rydberg());
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(ComplexMatrix(a - b), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace rydeit
