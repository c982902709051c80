#pragma once

// Laboratory parameters and the operators built from them.
//
// Unit conventions, used project-wide:
//   * configuration values are cyclic MHz (a quoted value X means X = f/2pi),
//   * time is microseconds,
//   * every Hamiltonian matrix and jump rate returned by the build_* functions
//     is angular (rad/us); the 2pi conversion happens here and nowhere else.

#include "rydeit/numerics.hpp"

#include <cstdint>
#include <vector>

namespace rydeit {

struct DivisionByZeroError : std::runtime_error {
    explicit DivisionByZeroError(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidParamsError : std::runtime_error {
    explicit InvalidParamsError(const std::string& what) : std::runtime_error(what) {}
};

// Level ordering, fixed project-wide. The Rydberg state is always the last
// level, so it has index 2 in the three-level (reduced) basis and 3 in the
// four-level (full) basis. Two-atom product index = levels * i1 + i2.
namespace level {
inline constexpr int g_p = 0;
inline constexpr int g_c = 1;
inline constexpr int e_full = 2;
}  // namespace level

struct BasisLabels {
    int levels_per_atom = 3;
    int atoms = 2;

    int dim() const { return atoms == 1 ? levels_per_atom : levels_per_atom * levels_per_atom; }
    int pair_index(int i1, int i2) const { return levels_per_atom * i1 + i2; }
    int rydberg() const { return levels_per_atom - 1; }
    bool operator==(const BasisLabels&) const = default;
};

inline constexpr BasisLabels kReducedSingle{3, 1};
inline constexpr BasisLabels kReducedPair{3, 2};
inline constexpr BasisLabels kFullPair{4, 2};

// Everything in cyclic MHz. The Rabi frequencies may be complex; detunings and
// rates are real. delta_c2 is tied to delta_c1 through the two-photon coupling
// detuning delta_c = delta_c2 - delta_c1 (zero by default).
struct RawParams {
    Complex omega_p1{1.0, 0.0};
    Complex omega_p2{1.0, 0.0};
    Complex omega_c1{20.0, 0.0};
    Complex omega_c2{20.0, 0.0};
    double delta_p2 = 50.0;
    double delta_c1 = 1000.0;
    double delta_c2 = 1000.0;
    double gamma_ec = 3.0;
    double gamma_ep = 3.0;
    double gamma_r = 0.1;
    double v = 0.0;                    // vdW shift of |rr>
    bool coupling_on_control = true;   // false: coupling beams displaced off the control atom

    double delta_c() const { return delta_c2 - delta_c1; }

    // largest |Omega/Delta| over the driven transitions
    double dispersive_ratio() const;
    // sum of (Omega/Delta)^2 over the four beams
    double dispersive_bound() const;

    // Throws InvalidParams for zero detunings on driven beams or negative
    // rates. The dispersive-regime check is reported, not enforced, because it
    // is a warning-level condition.
    void validate() const;
};

// vdW shift from a C6 coefficient (MHz um^6) and a separation (um)
double vdw_from_c6(double c6, double r_sep);

// Derived two-photon couplings, level shifts and effective decay rates
// (cyclic MHz).
struct EffectiveParams {
    Complex lambda_p;
    Complex lambda_c;
    double eps_p = 0.0;
    double eps_c = 0.0;
    double eps_c2 = 0.0;  // control-atom counterpart of eps_c
    double alpha_1 = 0.0;
    double alpha_2 = 0.0;
    double beta_p = 0.0;
    double beta_c = 0.0;
    double e_ss = 0.0;  // beta_p - alpha_1, the overall Stark displacement
    double gamma_r1p = 0.0;
    double gamma_r1c = 0.0;
    double gamma_r2c = 0.0;
};

EffectiveParams derive_effective_params(const RawParams& raw, double delta_p);

struct JumpChannel {
    ComplexMatrix op;   // dimensionless lowering operator
    double rate = 0.0;  // angular, rad/us
};

// 9x9 two-atom reduced Hamiltonian (angular). With coupling_on_control false
// the control-atom coupling and shift terms are dropped and v is forced to 0.
ComplexMatrix build_effective_hamiltonian(const EffectiveParams& eff, double v,
                                          bool coupling_on_control);

// Jump channels of the reduced two-atom model; zero-rate channels are omitted.
std::vector<JumpChannel> build_jump_operators(const EffectiveParams& eff);

// 3x3 single-atom (probe-atom) Hamiltonian (angular).
ComplexMatrix build_single_atom_hamiltonian(const EffectiveParams& eff);

// Probe-atom jump channels for the single-atom mode.
std::vector<JumpChannel> build_single_atom_jump_operators(const EffectiveParams& eff);

// 4x4 coupling-channel block over {gc gc, gc r, r gc, r r} (angular).
ComplexMatrix build_coupling_channel_hamiltonian(const EffectiveParams& eff, double v);

// 16x16 lab-frame two-atom four-level Hamiltonian at time t (us), angular.
// Retains the explicit laser phases; no rotating frame removes all of them.
ComplexMatrix build_full_hamiltonian(const RawParams& raw, double delta_p, double t);

// Six decay channels of the full model, three per atom. The control atom's
// intermediate level recycles to the coupled ground state: its branch to the
// (undriven, hence trapping) probe ground state is folded into g_c, matching
// the reduced model's effective rates.
std::vector<JumpChannel> build_full_jump_operators(const RawParams& raw);

// Indices of the reduced two-atom basis reachable from |g_p g_c>: nothing
// drives or feeds the control atom's g_p level, so it is dropped before a
// steady-state solve (keeping it makes the stationary state non-unique).
const std::vector<int>& reachable_pair_indices();

// Restrict / embed between the 9-dim basis and a kept-index sub-basis.
ComplexMatrix restrict_to(const ComplexMatrix& op, const std::vector<int>& kept);
ComplexMatrix embed_from(const ComplexMatrix& op, const std::vector<int>& kept, int full_dim);

// FNV-1a over the parameter bytes plus v; identifies a spectrum's inputs.
std::uint64_t params_fingerprint(const RawParams& raw, double v);

}  // namespace rydeit
