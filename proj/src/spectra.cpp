#include "rydeit/spectra.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rydeit {

int DetuningGrid::size() const {
    return static_cast<int>(std::floor((max - min) / step + 1e-9)) + 1;
}

void DetuningGrid::validate() const {
    if (!(step > 0.0)) throw InvalidParamsError("grid step must be positive");
    if (max < min) throw InvalidParamsError("grid max below min");
}

DressedSingle dressed_single(const EffectiveParams& eff) {
    const double lc2 = std::norm(eff.lambda_c);
    if (lc2 == 0.0 && eff.eps_c == 0.0)
        throw InvalidParamsError("dressed_single: coupling block vanishes");
    DressedSingle out;
    out.varpi = std::sqrt(0.25 * eff.eps_c * eff.eps_c + lc2);
    out.e_plus = 0.5 * eff.eps_c + out.varpi;
    out.e_minus = 0.5 * eff.eps_c - out.varpi;
    auto state = [&](double e) {
        Eigen::Vector2cd s;
        s << Complex(e, 0.0), eff.lambda_c;
        return (s / s.norm()).eval();
    };
    out.state_plus = state(out.e_plus);
    out.state_minus = state(out.e_minus);
    return out;
}

DressedPair dressed_pair(const EffectiveParams& eff, double v) {
    const ComplexMatrix h = build_coupling_channel_hamiltonian(eff, v) / kTwoPi;
    const double scale = std::max(h.cwiseAbs().maxCoeff(), 1.0);

    DressedPair out;
    if (std::abs(eff.eps_c - eff.eps_c2) <= 1e-12 * scale) {
        // exchange symmetry holds: diagonalize the symmetric 3x3 sector and the
        // antisymmetric singlet separately
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        ComplexMatrix sym(3, 3);
        sym.setZero();
        sym(0, 0) = h(0, 0);
        sym(1, 1) = 0.5 * (h(1, 1) + h(2, 2));
        sym(2, 2) = h(3, 3);
        sym(1, 0) = std::sqrt(2.0) * h(1, 0);
        sym(0, 1) = std::conj(sym(1, 0));
        sym(2, 1) = std::sqrt(2.0) * h(3, 1);
        sym(1, 2) = std::conj(sym(2, 1));
        EigenDecomposition es = eig_hermitian(sym);

        std::array<std::pair<double, Eigen::Vector4cd>, 4> states;
        for (int k = 0; k < 3; ++k) {
            Eigen::Vector4cd vec4;
            vec4 << es.vectors(0, k), inv_sqrt2 * es.vectors(1, k), inv_sqrt2 * es.vectors(1, k),
                es.vectors(2, k);
            states[k] = {es.values(k), vec4};
        }
        Eigen::Vector4cd dark;
        dark << 0.0, inv_sqrt2, -inv_sqrt2, 0.0;
        states[3] = {0.5 * (h(1, 1) + h(2, 2)).real(), dark};
        std::stable_sort(states.begin(), states.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        for (int k = 0; k < 4; ++k) {
            out.energies(k) = states[k].first;
            out.amplitudes.col(k) = states[k].second;
        }
    } else {
        EigenDecomposition es = eig_hermitian(h);
        out.energies = es.values;
        out.amplitudes = es.vectors;
    }
    for (int k = 0; k < 4; ++k) out.vdw_shifts(k) = std::norm(out.amplitudes(3, k)) * v;
    return out;
}

PeakPrediction predict_peaks(const EffectiveParams& eff, double v, int sign_orientation) {
    const double o = sign_orientation >= 0 ? 1.0 : -1.0;
    const DressedSingle ds = dressed_single(eff);
    const DressedPair dp = dressed_pair(eff, v);

    PeakPrediction out;
    out.sign_orientation = o > 0 ? +1 : -1;
    out.at_doublet = {eff.e_ss + o * ds.e_plus, eff.e_ss + o * ds.e_minus};
    out.eit_center = eff.e_ss + o * 0.5 * (ds.e_plus + ds.e_minus);
    for (int j = 0; j < 4; ++j) {
        out.eight_lines[j] = {"+" + std::to_string(j + 1),
                              eff.e_ss + o * (dp.energies(j) - ds.e_plus)};
        out.eight_lines[4 + j] = {"-" + std::to_string(j + 1),
                                  eff.e_ss + o * (dp.energies(j) - ds.e_minus)};
    }
    return out;
}

int resolve_sign_orientation(const RawParams& raw) {
    RawParams single = raw;
    single.coupling_on_control = false;

    const EffectiveParams eff = derive_effective_params(single, 0.0);
    const DressedSingle ds = dressed_single(eff);
    const double span = ds.varpi + std::abs(eff.eps_c) + 0.3;
    DetuningGrid grid{eff.e_ss - 1.3 * span, eff.e_ss + 1.3 * span,
                      std::min(0.005, ds.varpi / 100.0)};
    const Spectrum spec = scan_spectrum(single, grid, 0.0);
    std::vector<Peak> peaks = find_peaks(spec);
    if (peaks.empty()) return +1;
    std::sort(peaks.begin(), peaks.end(),
              [](const Peak& a, const Peak& b) { return a.height > b.height; });
    if (peaks.size() > 2) peaks.resize(2);

    auto cost = [&](int o) {
        const PeakPrediction p = predict_peaks(eff, 0.0, o);
        double total = 0.0;
        for (double d : p.at_doublet) {
            double best = std::numeric_limits<double>::infinity();
            for (const Peak& pk : peaks) best = std::min(best, std::abs(pk.detuning - d));
            total += best;
        }
        return total;
    };
    return cost(+1) <= cost(-1) ? +1 : -1;
}

PeakPrediction predict_peaks(const RawParams& raw, double v) {
    return predict_peaks(derive_effective_params(raw, 0.0), v, resolve_sign_orientation(raw));
}

double susceptibility_im(double eps_p, double eps_c, double lambda_c, double gamma_r) {
    const Complex den(eps_p * (eps_p - eps_c) - lambda_c * lambda_c, -0.5 * gamma_r * eps_c);
    return (eps_p - eps_c) * eps_c * gamma_r / std::norm(den);
}

namespace {

double scan_point(const RawParams& raw, double delta_p, double v) {
    const EffectiveParams eff = derive_effective_params(raw, delta_p);
    if (raw.coupling_on_control) {
        const std::vector<int>& kept = reachable_pair_indices();
        const ComplexMatrix h = restrict_to(build_effective_hamiltonian(eff, v, true), kept);
        std::vector<JumpChannel> jumps = build_jump_operators(eff);
        for (JumpChannel& j : jumps) j.op = restrict_to(j.op, kept);
        const Liouvillian l = build_liouvillian(h, jumps);
        const ComplexMatrix rho = embed_from(steady_state_matrix(l), kept, kReducedPair.dim());
        return rydberg_population({rho, kReducedPair}, 1);
    }
    const ComplexMatrix h = build_single_atom_hamiltonian(eff);
    const std::vector<JumpChannel> jumps = build_single_atom_jump_operators(eff);
    const Liouvillian l = build_liouvillian(h, jumps);
    const ComplexMatrix rho = steady_state_matrix(l);
    return rho(kReducedSingle.rydberg(), kReducedSingle.rydberg()).real();
}

Spectrum make_spectrum(const RawParams& raw, const DetuningGrid& grid, double v) {
    grid.validate();
    if (std::norm(derive_effective_params(raw, grid.min).lambda_p) == 0.0)
        throw DegenerateSteadyStateError("scan_spectrum: probe off, steady state not unique");
    Spectrum spec;
    const int n = grid.size();
    spec.detunings.resize(n);
    spec.populations.resize(n);
    spec.v = raw.coupling_on_control ? v : 0.0;
    spec.fingerprint = params_fingerprint(raw, spec.v);
    for (int i = 0; i < n; ++i) spec.detunings[i] = grid.at(i);
    return spec;
}

}  // namespace

Spectrum scan_spectrum(const RawParams& raw, const DetuningGrid& grid, double v) {
    Spectrum spec = make_spectrum(raw, grid, v);
    const int n = static_cast<int>(spec.detunings.size());
    for (int i = 0; i < n; ++i) spec.populations[i] = scan_point(raw, spec.detunings[i], v);
    return spec;
}

Spectrum scan_spectrum_parallel(const RawParams& raw, const DetuningGrid& grid, double v,
                                int workers) {
    Spectrum spec = make_spectrum(raw, grid, v);
    const int n = static_cast<int>(spec.detunings.size());
    if (workers <= 0) workers = omp_get_max_threads();

    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(dynamic, 4) num_threads(workers)
    for (int i = 0; i < n; ++i) {
        try {
            spec.populations[i] = scan_point(raw, spec.detunings[i], v);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return spec;
}

std::vector<Peak> find_peaks(const Spectrum& spec, double prominence_fraction) {
    const auto& y = spec.populations;
    const auto& x = spec.detunings;
    const int n = static_cast<int>(y.size());
    if (n == 0) throw EmptySpectrumError("find_peaks: empty spectrum");

    std::vector<Peak> out;
    if (n < 3) return out;
    const double gmax = *std::max_element(y.begin(), y.end());
    if (gmax <= 0.0) return out;

    for (int i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] > y[i + 1])) continue;
        int jl = i;
        while (jl > 0 && y[jl - 1] <= y[jl]) --jl;
        int jr = i;
        while (jr + 1 < n && y[jr + 1] <= y[jr]) ++jr;
        const double prominence = y[i] - std::max(y[jl], y[jr]);
        if (prominence < prominence_fraction * gmax) continue;

        const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
        double offset = 0.0;
        if (denom < 0.0) offset = 0.5 * (y[i - 1] - y[i + 1]) / denom;
        offset = std::clamp(offset, -0.5, 0.5);
        const double step = x[1] - x[0];
        out.push_back({x[i] + offset * step, y[i] - 0.25 * (y[i - 1] - y[i + 1]) * offset});
    }
    return out;
}

MatchReport reconcile(const PeakPrediction& pred, std::span<const Peak> found, double tol,
                      double linewidth) {
    MatchReport report;
    std::vector<bool> peak_used(found.size(), false);

    for (const LabeledDetuning& line : pred.eight_lines) {
        MatchReport::Line m;
        m.label = line.label;
        m.predicted = line.detuning;
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < found.size(); ++k) {
            const double d = std::abs(found[k].detuning - line.detuning);
            if (d < best_dist) {
                best_dist = d;
                best = static_cast<int>(k);
            }
        }
        if (best >= 0 && best_dist <= tol) {
            m.matched = true;
            m.peak = found[best].detuning;
            m.height = found[best].height;
            m.residual = best_dist;
            peak_used[best] = true;
        }
        report.lines.push_back(std::move(m));
    }

    // second pass: a line with no peak of its own may ride on a matched
    // neighbour line's peak when the two lines are within 2 linewidths
    for (MatchReport::Line& m : report.lines) {
        if (m.matched) continue;
        for (const MatchReport::Line& other : report.lines) {
            if (!other.matched || other.merged) continue;
            if (std::abs(other.predicted - m.predicted) < 2.0 * linewidth) {
                m.matched = true;
                m.merged = true;
                m.peak = other.peak;
                m.height = other.height;
                m.residual = std::abs(m.predicted - other.peak);
                break;
            }
        }
    }

    for (const MatchReport::Line& m : report.lines) {
        if (!m.matched)
            ++report.unmatched_lines;
        else if (!m.merged)
            report.max_matched_residual = std::max(report.max_matched_residual, m.residual);
    }
    for (bool used : peak_used)
        if (!used) ++report.unmatched_peaks;
    return report;
}

}  // namespace rydeit
