#include "rydeit/model.hpp"

#include <cmath>
#include <cstring>

namespace rydeit {

namespace {

ComplexMatrix unit(int dim, int i, int j) {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    m(i, j) = 1.0;
    return m;
}

void check_driven(const Complex& omega, double delta, const char* name) {
    if (std::abs(omega) > 0.0 && delta == 0.0)
        throw DivisionByZeroError(std::string("detuning ") + name + " is zero on a driven beam");
}

}  // namespace

double RawParams::dispersive_ratio() const {
    double worst = 0.0;
    auto probe = [&](const Complex& om, double de) {
        if (std::abs(om) > 0.0 && de != 0.0)
            worst = std::max(worst, std::abs(om) / std::abs(de));
    };
    probe(omega_p1, delta_p2);  // delta_p1 ~ delta_p2 up to the scanned detuning
    probe(omega_p2, delta_p2);
    probe(omega_c1, delta_c1);
    probe(omega_c2, delta_c2);
    return worst;
}

double RawParams::dispersive_bound() const {
    auto term = [](const Complex& om, double de) {
        if (de == 0.0) return 0.0;
        double r = std::abs(om) / de;
        return r * r;
    };
    return term(omega_p1, delta_p2) + term(omega_p2, delta_p2) + term(omega_c1, delta_c1) +
           term(omega_c2, delta_c2);
}

void RawParams::validate() const {
    check_driven(omega_p1, delta_p2, "delta_p2");
    check_driven(omega_p2, delta_p2, "delta_p2");
    check_driven(omega_c1, delta_c1, "delta_c1");
    check_driven(omega_c2, delta_c2, "delta_c2");
    if (gamma_ec < 0.0 || gamma_ep < 0.0 || gamma_r < 0.0)
        throw InvalidParamsError("decay rates must be nonnegative");
}

double vdw_from_c6(double c6, double r_sep) {
    if (r_sep <= 0.0) throw InvalidParamsError("separation must be positive");
    return -c6 / std::pow(r_sep, 6);
}

EffectiveParams derive_effective_params(const RawParams& raw, double delta_p) {
    raw.validate();
    const double delta_p1 = raw.delta_p2 - delta_p;
    const double delta_c = raw.delta_c();

    check_driven(raw.omega_p1, delta_p1, "delta_p1");

    EffectiveParams out;
    auto inv = [](double x) { return 1.0 / x; };
    out.lambda_p = (std::abs(raw.omega_p1) > 0.0 && std::abs(raw.omega_p2) > 0.0)
                       ? -0.5 * std::conj(raw.omega_p1) * raw.omega_p2 *
                             (inv(delta_p1) + inv(raw.delta_p2))
                       : Complex{0.0, 0.0};
    out.lambda_c = (std::abs(raw.omega_c1) > 0.0 && std::abs(raw.omega_c2) > 0.0)
                       ? -0.5 * std::conj(raw.omega_c1) * raw.omega_c2 *
                             (inv(raw.delta_c1) + inv(raw.delta_c2))
                       : Complex{0.0, 0.0};
    out.beta_p = std::abs(raw.omega_p1) > 0.0 ? -std::norm(raw.omega_p1) / delta_p1 : 0.0;
    out.beta_c = std::abs(raw.omega_c1) > 0.0 ? std::norm(raw.omega_c1) / raw.delta_c1 : 0.0;
    const double stark_c2 = std::abs(raw.omega_c2) > 0.0 ? std::norm(raw.omega_c2) / raw.delta_c2 : 0.0;
    const double stark_p2 = std::abs(raw.omega_p2) > 0.0 ? std::norm(raw.omega_p2) / raw.delta_p2 : 0.0;
    out.alpha_1 = stark_c2 - stark_p2;
    out.alpha_2 = stark_c2;
    out.eps_p = out.beta_p - (delta_p + out.alpha_1);
    out.eps_c = out.beta_c - (-delta_c + out.alpha_1);
    out.eps_c2 = out.beta_c - (-delta_c + out.alpha_2);
    out.e_ss = out.beta_p - out.alpha_1;

    const double total = raw.gamma_ec + raw.gamma_ep + raw.gamma_r;
    if (total > 0.0) {
        out.gamma_r1p = raw.gamma_ep * raw.gamma_r / total;
        out.gamma_r1c = raw.gamma_ec * raw.gamma_r / total;
        out.gamma_r2c = (raw.gamma_ec + raw.gamma_ep) * raw.gamma_r / total;
    }
    return out;
}

ComplexMatrix build_effective_hamiltonian(const EffectiveParams& eff, double v,
                                          bool coupling_on_control) {
    const int d = kReducedPair.levels_per_atom;
    const int r = kReducedPair.rydberg();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);

    ComplexMatrix h1 = ComplexMatrix::Zero(d, d);
    h1(level::g_p, level::g_p) = eff.eps_p;
    h1(level::g_c, level::g_c) = eff.eps_c;
    h1(r, level::g_p) = eff.lambda_p;
    h1(level::g_p, r) = std::conj(eff.lambda_p);
    h1(r, level::g_c) = eff.lambda_c;
    h1(level::g_c, r) = std::conj(eff.lambda_c);

    ComplexMatrix h = kron(h1, id);
    if (coupling_on_control) {
        ComplexMatrix h2 = ComplexMatrix::Zero(d, d);
        h2(level::g_c, level::g_c) = eff.eps_c2;
        h2(r, level::g_c) = eff.lambda_c;
        h2(level::g_c, r) = std::conj(eff.lambda_c);
        h += kron(id, h2);
        h += v * kron(unit(d, r, r), unit(d, r, r));
    }
    return kTwoPi * h;
}

std::vector<JumpChannel> build_jump_operators(const EffectiveParams& eff) {
    const int d = kReducedPair.levels_per_atom;
    const int r = kReducedPair.rydberg();
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);

    std::vector<JumpChannel> out;
    if (eff.gamma_r1p > 0.0)
        out.push_back({kron(unit(d, level::g_p, r), id), kTwoPi * eff.gamma_r1p});
    if (eff.gamma_r1c > 0.0)
        out.push_back({kron(unit(d, level::g_c, r), id), kTwoPi * eff.gamma_r1c});
    if (eff.gamma_r2c > 0.0)
        out.push_back({kron(id, unit(d, level::g_c, r)), kTwoPi * eff.gamma_r2c});
    return out;
}

ComplexMatrix build_single_atom_hamiltonian(const EffectiveParams& eff) {
    const int d = kReducedSingle.levels_per_atom;
    const int r = kReducedSingle.rydberg();
    ComplexMatrix h = ComplexMatrix::Zero(d, d);
    h(level::g_p, level::g_p) = eff.eps_p;
    h(level::g_c, level::g_c) = eff.eps_c;
    h(r, level::g_p) = eff.lambda_p;
    h(level::g_p, r) = std::conj(eff.lambda_p);
    h(r, level::g_c) = eff.lambda_c;
    h(level::g_c, r) = std::conj(eff.lambda_c);
    return kTwoPi * h;
}

std::vector<JumpChannel> build_single_atom_jump_operators(const EffectiveParams& eff) {
    const int d = kReducedSingle.levels_per_atom;
    const int r = kReducedSingle.rydberg();
    std::vector<JumpChannel> out;
    if (eff.gamma_r1p > 0.0) out.push_back({unit(d, level::g_p, r), kTwoPi * eff.gamma_r1p});
    if (eff.gamma_r1c > 0.0) out.push_back({unit(d, level::g_c, r), kTwoPi * eff.gamma_r1c});
    return out;
}

ComplexMatrix build_coupling_channel_hamiltonian(const EffectiveParams& eff, double v) {
    // basis {gc gc, gc r, r gc, r r}
    ComplexMatrix h = ComplexMatrix::Zero(4, 4);
    h(0, 0) = eff.eps_c + eff.eps_c2;
    h(1, 1) = eff.eps_c;
    h(2, 2) = eff.eps_c2;
    h(3, 3) = v;
    h(1, 0) = h(3, 2) = eff.lambda_c;           // control-atom gc -> r
    h(2, 0) = h(3, 1) = eff.lambda_c;           // probe-atom gc -> r
    h(0, 1) = h(2, 3) = std::conj(eff.lambda_c);
    h(0, 2) = h(1, 3) = std::conj(eff.lambda_c);
    return kTwoPi * h;
}

ComplexMatrix build_full_hamiltonian(const RawParams& raw, double delta_p, double t) {
    const int d = kFullPair.levels_per_atom;
    const int r = kFullPair.rydberg();
    const int e = level::e_full;
    const double delta_p1 = raw.delta_p2 - delta_p;

    ComplexMatrix h = ComplexMatrix::Zero(d * d, d * d);
    auto add = [&](const Complex& amp, double freq, int to, int from, int atom) {
        const Complex ph = amp * std::exp(Complex(0.0, -kTwoPi * freq * t));
        for (int k = 0; k < d; ++k) {
            const int i = atom == 1 ? d * to + k : d * k + to;
            const int j = atom == 1 ? d * from + k : d * k + from;
            h(i, j) += ph;
            h(j, i) += std::conj(ph);
        }
    };
    const int atoms = raw.coupling_on_control ? 2 : 1;
    for (int atom = 1; atom <= atoms; ++atom) {
        add(raw.omega_c1, raw.delta_c1, e, level::g_c, atom);
        add(std::conj(raw.omega_c2), raw.delta_c2, e, r, atom);
    }
    add(std::conj(raw.omega_p1), delta_p1, level::g_p, e, 1);
    add(raw.omega_p2, raw.delta_p2, r, e, 1);
    h(d * r + r, d * r + r) += raw.v;
    return kTwoPi * h;
}

std::vector<JumpChannel> build_full_jump_operators(const RawParams& raw) {
    const int d = kFullPair.levels_per_atom;
    const int r = kFullPair.rydberg();
    const int e = level::e_full;
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);

    auto on_atom = [&](int to, int from, int atom) {
        return atom == 1 ? kron(unit(d, to, from), id) : kron(id, unit(d, to, from));
    };
    std::vector<JumpChannel> out;
    for (int atom = 1; atom <= 2; ++atom) {
        if (raw.gamma_r > 0.0) out.push_back({on_atom(e, r, atom), kTwoPi * raw.gamma_r});
        if (raw.gamma_ec > 0.0) out.push_back({on_atom(level::g_c, e, atom), kTwoPi * raw.gamma_ec});
        // the control atom recycles to g_c; g_p would trap it (nothing drives it)
        const int target = atom == 1 ? level::g_p : level::g_c;
        if (raw.gamma_ep > 0.0) out.push_back({on_atom(target, e, atom), kTwoPi * raw.gamma_ep});
    }
    return out;
}

const std::vector<int>& reachable_pair_indices() {
    static const std::vector<int> kept = [] {
        std::vector<int> k;
        const int d = kReducedPair.levels_per_atom;
        for (int i1 = 0; i1 < d; ++i1)
            for (int i2 = 0; i2 < d; ++i2)
                if (i2 != level::g_p) k.push_back(d * i1 + i2);
        return k;
    }();
    return kept;
}

ComplexMatrix restrict_to(const ComplexMatrix& op, const std::vector<int>& kept) {
    ComplexMatrix out(kept.size(), kept.size());
    for (size_t i = 0; i < kept.size(); ++i)
        for (size_t j = 0; j < kept.size(); ++j) out(i, j) = op(kept[i], kept[j]);
    return out;
}

ComplexMatrix embed_from(const ComplexMatrix& op, const std::vector<int>& kept, int full_dim) {
    ComplexMatrix out = ComplexMatrix::Zero(full_dim, full_dim);
    for (size_t i = 0; i < kept.size(); ++i)
        for (size_t j = 0; j < kept.size(); ++j) out(kept[i], kept[j]) = op(i, j);
    return out;
}

std::uint64_t params_fingerprint(const RawParams& raw, double v) {
    std::uint64_t hash = 14695981039346656037ULL;
    auto mix = [&](double x) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, sizeof bits);
        for (int k = 0; k < 8; ++k) {
            hash ^= (bits >> (8 * k)) & 0xffULL;
            hash *= 1099511628211ULL;
        }
    };
    for (const Complex& om : {raw.omega_p1, raw.omega_p2, raw.omega_c1, raw.omega_c2}) {
        mix(om.real());
        mix(om.imag());
    }
    for (double x : {raw.delta_p2, raw.delta_c1, raw.delta_c2, raw.gamma_ec, raw.gamma_ep,
                     raw.gamma_r, raw.coupling_on_control ? 1.0 : 0.0, v})
        mix(x);
    return hash;
}

}  // namespace rydeit
