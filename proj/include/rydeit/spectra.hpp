#pragma once

// Dressed-state analytics, spectrum scans, peak detection and the
// prediction-versus-simulation reconciliation. All energies and detunings in
// this module are cyclic MHz.

#include "rydeit/dynamics.hpp"
#include "rydeit/model.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace rydeit {

struct EmptySpectrumError : std::runtime_error {
    explicit EmptySpectrumError(const std::string& what) : std::runtime_error(what) {}
};

struct DetuningGrid {
    double min = 0.0;
    double max = 0.0;
    double step = 1.0;

    int size() const;
    double at(int i) const { return min + i * step; }
    void validate() const;
};

struct Spectrum {
    std::vector<double> detunings;
    std::vector<double> populations;
    double v = 0.0;
    std::uint64_t fingerprint = 0;
};

struct Peak {
    double detuning = 0.0;
    double height = 0.0;
};

// Dressed pair of the driven {g_c, r} transition of one atom.
struct DressedSingle {
    double e_plus = 0.0;
    double e_minus = 0.0;
    double varpi = 0.0;                  // half the splitting
    Eigen::Vector2cd state_plus;         // amplitudes over {g_c, r}
    Eigen::Vector2cd state_minus;
};

// Dressed states of the two-atom coupling channel {gc gc, gc r, r gc, r r}.
struct DressedPair {
    Eigen::Vector4d energies;     // ascending
    Eigen::Matrix4cd amplitudes;  // column j belongs to energies[j]
    Eigen::Vector4d vdw_shifts;   // |amplitude on rr|^2 * v per state
};

struct LabeledDetuning {
    std::string label;
    double detuning = 0.0;
};

struct PeakPrediction {
    std::array<double, 2> at_doublet{};        // {plus, minus}
    std::array<LabeledDetuning, 8> eight_lines{};
    double eit_center = 0.0;
    int sign_orientation = +1;  // empirically resolved sign of the E-terms about e_ss
};

// Closed-form dressed states; requires a nonvanishing coupling block.
DressedSingle dressed_single(const EffectiveParams& eff);

// Diagonalizes the coupling-channel Hamiltonian. When the two atoms' shifts
// coincide the exchange-symmetric and antisymmetric sectors are diagonalized
// separately, so the dark state comes out exactly (0, 1, -1, 0)/sqrt(2).
DressedPair dressed_pair(const EffectiveParams& eff, double v);

// Reference resonance positions. The detunings are e_ss + sign * E-term with
// the supplied sign orientation.
PeakPrediction predict_peaks(const EffectiveParams& eff, double v, int sign_orientation);

// Resolves the orientation once against a simulated single-atom spectrum and
// returns the oriented prediction.
PeakPrediction predict_peaks(const RawParams& raw, double v);
int resolve_sign_orientation(const RawParams& raw);

// Imaginary linear susceptibility of the single-atom scheme, as a closed-form
// reference curve (unnormalized).
double susceptibility_im(double eps_p, double eps_c, double lambda_c, double gamma_r);

// Steady-state Rydberg population of the probe atom over a detuning grid.
// Two-atom mode when raw.coupling_on_control, else the three-level single-atom
// system. Serial reference implementation.
Spectrum scan_spectrum(const RawParams& raw, const DetuningGrid& grid, double v);

// Same result, grid points distributed over an OpenMP worker pool. Output is
// identical to the serial scan for any worker count. workers <= 0 uses the
// runtime default.
Spectrum scan_spectrum_parallel(const RawParams& raw, const DetuningGrid& grid, double v,
                                int workers);

// Local maxima by 3-point comparison, kept when the height above the higher
// flanking minimum reaches prominence_fraction of the global maximum;
// positions refined by quadratic interpolation.
std::vector<Peak> find_peaks(const Spectrum& spec, double prominence_fraction = 0.02);

struct MatchReport {
    struct Line {
        std::string label;
        double predicted = 0.0;
        bool matched = false;
        bool merged = false;  // matched through a shared peak
        double peak = 0.0;
        double height = 0.0;
        double residual = 0.0;
    };
    std::vector<Line> lines;
    int unmatched_lines = 0;
    int unmatched_peaks = 0;
    double max_matched_residual = 0.0;
};

// Nearest matching of the eight predicted lines to found peaks within tol.
// A line left unmatched may share the peak of a matched line less than
// 2*linewidth away (a merged doublet component).
MatchReport reconcile(const PeakPrediction& pred, std::span<const Peak> found, double tol,
                      double linewidth);

}  // namespace rydeit
