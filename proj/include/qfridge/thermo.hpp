// thermo.hpp: heat currents, efficiency, cooling conditions, entropy
// production and stage labels.
//
// Sign convention: a current is positive when heat flows from the reservoir
// into the system.

#pragma once

#include "qfridge/dynamics.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qfridge {

// Tr{H_S D[rho]}.
inline double heat_current(const ComplexMatrix& hamiltonian, const Dissipator& d, const ComplexMatrix& rho) {
    const Complex q = (hamiltonian * apply_dissipator(d, rho)).trace();
    if (std::abs(q.imag()) > 1e-10) {
        std::ostringstream os;
        os << "heat_current: imaginary part " << q.imag() << " on channel " << d.channel.id.label();
        throw NumericalError(os.str());
    }
    return q.real();
}

inline double heat_current(const ComplexMatrix& hamiltonian, const Dissipator& d, const DensityMatrix& rho) {
    return heat_current(hamiltonian, d, rho.matrix());
}

// ----------------------------------- stages -----------------------------------

enum class StageLabel { Stage1, Stage2, Stage3, Stage4, Unclassified, Boundary };

inline std::string_view to_string(StageLabel s) {
    switch (s) {
        case StageLabel::Stage1: return "Stage1";
        case StageLabel::Stage2: return "Stage2";
        case StageLabel::Stage3: return "Stage3";
        case StageLabel::Stage4: return "Stage4";
        case StageLabel::Unclassified: return "Unclassified";
        case StageLabel::Boundary: return "Boundary";
    }
    return "Unclassified";
}

inline std::optional<StageLabel> stage_from_string(std::string_view s) {
    for (StageLabel l : {StageLabel::Stage1, StageLabel::Stage2, StageLabel::Stage3, StageLabel::Stage4,
                         StageLabel::Unclassified, StageLabel::Boundary})
        if (to_string(l) == s) return l;
    return std::nullopt;
}

// Sign patterns of (Q_C, Q_H, Q_R): (-,-,+) 1, (-,+,+) 2, (+,+,+) 3, (+,+,-) 4.
inline StageLabel classify_stage(double q_c, double q_h, double q_r, double tol) {
    if (std::abs(q_c) <= tol || std::abs(q_h) <= tol || std::abs(q_r) <= tol) return StageLabel::Boundary;
    const bool c = q_c > 0, h = q_h > 0, r = q_r > 0;
    if (!c && !h && r) return StageLabel::Stage1;
    if (!c && h && r) return StageLabel::Stage2;
    if (c && h && r) return StageLabel::Stage3;
    if (c && h && !r) return StageLabel::Stage4;
    return StageLabel::Unclassified;
}

inline double default_stage_tol(const SystemParams& p) { return 1e-12 * p.omega_C(); }

// --------------------------------- efficiency ---------------------------------

inline constexpr double kEfficiencyUndefinedBelow = 1e-14;

// Q_C / Q_H, or nullopt when |Q_H| <= 1e-14. Negative values are returned as is.
inline std::optional<double> efficiency(double q_c, double q_h) {
    if (!(std::abs(q_h) > kEfficiencyUndefinedBelow)) return std::nullopt;
    return q_c / q_h;
}

// ------------------------------ entropy production -----------------------------

// -Q / T with the T = 0 limit: a vanishing current contributes nothing, heat
// dumped into a zero-temperature bath contributes +inf.
inline double entropy_term(double q, double T) {
    if (T > 0.0) return -q / T;
    if (std::abs(q) <= kEfficiencyUndefinedBelow) return 0.0;
    return q < 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

// ------------------------------- current reports ------------------------------

struct DissipatorCurrent {
    ChannelId id;
    DissipatorSource source;
    double value{0.0};
};

struct HeatCurrentReport {
    std::vector<DissipatorCurrent> per_dissipator;
    double q_H{0.0}, q_R{0.0}, q_C{0.0};     // engineered reservoirs
    double qB_H{0.0}, qB_R{0.0}, qB_C{0.0};  // background, grouped by the qubit it acts on
    std::optional<double> eta;
    double sigma{0.0};
    StageLabel stage{StageLabel::Unclassified};

    double total() const { return q_H + q_R + q_C + qB_H + qB_R + qB_C; }
    double total_abs() const {
        double s = 0.0;
        for (const auto& d : per_dissipator) s += std::abs(d.value);
        return s;
    }
    // |sum| / sum|.|, zero when every current vanishes.
    double first_law_residual() const {
        const double a = total_abs();
        return a > 0.0 ? std::abs(total()) / a : 0.0;
    }
};

inline bool first_law_holds(const HeatCurrentReport& r, double rel_tol = 1e-10, double abs_floor = 1e-13) {
    return std::abs(r.total()) <= rel_tol * r.total_abs() || r.total_abs() <= abs_floor;
}

// sigma = -sum Q_a / T_a - sum Q^B_a / T0. T0 must be supplied whenever the
// report carries background currents.
inline double entropy_production(const HeatCurrentReport& r, const Temperatures& t, std::optional<double> T0) {
    double s = entropy_term(r.q_H, t.hot) + entropy_term(r.q_R, t.room) + entropy_term(r.q_C, t.cold);
    const bool has_background = std::any_of(r.per_dissipator.begin(), r.per_dissipator.end(), [](const auto& d) {
        return d.source == DissipatorSource::Background;
    });
    if (has_background) {
        if (!T0) throw std::invalid_argument("entropy_production: background currents present but T0 is absent");
        s += entropy_term(r.qB_H, *T0) + entropy_term(r.qB_R, *T0) + entropy_term(r.qB_C, *T0);
    }
    return s;
}

inline HeatCurrentReport make_report(const Generator& gen, const ComplexMatrix& rho, std::optional<double> stage_tol = {}) {
    HeatCurrentReport r;
    for (const auto& d : gen.dissipators) {
        const double q = heat_current(gen.hamiltonian, d, rho);
        r.per_dissipator.push_back({d.channel.id, d.source, q});
        const bool eng = d.source == DissipatorSource::Engineered;
        switch (d.channel.id.qubit) {
            case Qubit::H: (eng ? r.q_H : r.qB_H) += q; break;
            case Qubit::R: (eng ? r.q_R : r.qB_R) += q; break;
            case Qubit::C: (eng ? r.q_C : r.qB_C) += q; break;
        }
    }
    r.eta = efficiency(r.q_C, r.q_H);
    r.sigma = entropy_production(r, gen.temperatures(),
                                 gen.background.active() ? std::optional<double>(gen.background.temperature())
                                                         : std::nullopt);
    r.stage = classify_stage(r.q_C, r.q_H, r.q_R, stage_tol.value_or(default_stage_tol(gen.params)));
    return r;
}

inline HeatCurrentReport make_report(const Generator& gen, const DensityMatrix& rho, std::optional<double> stage_tol = {}) {
    return make_report(gen, rho.matrix(), stage_tol);
}

// ------------------------------- closed forms ----------------------------------

struct ReservoirCurrents {
    double cold{0.0};
    double hot{0.0};
    double room{0.0};
};

enum class S1Branch { Plus, Minus };  // (iii) on |l2>,|l4>,|l6>; (iv) on |l3>,|l5>,|l7>

// Filter S: Q_C = 2(w_C - g)(J+_H J-_R J+_C - J-_H J+_R J-_C) / N, Q_H = (w_H + g)/(w_C - g) Q_C,
// Q_R = -(Q_H + Q_C), with N the normalization of the chosen branch.
inline ReservoirCurrents currents_s1_analytic(const SystemParams& p, const Temperatures& t,
                                              S1Branch branch = S1Branch::Plus,
                                              const FilterConfig& filter = filter_S()) {
    if (!(filter == filter_S()))
        throw std::invalid_argument("currents_s1_analytic: filter " + filter.label() + " is not H{3} R{2} C{1}");
    const auto H = detail::rates_for(p, t, {Qubit::H, 3});
    const auto R = detail::rates_for(p, t, {Qubit::R, 2});
    const auto C = detail::rates_for(p, t, {Qubit::C, 1});
    const S1Constants k = s1_constants(p, t);
    const double n = branch == S1Branch::Plus ? k.n_plus : k.n_minus;
    const double flux = H.j_plus * R.j_minus * C.j_plus - H.j_minus * R.j_plus * C.j_minus;
    ReservoirCurrents q;
    q.cold = 2.0 * (p.omega_C() - p.g()) * flux / n;
    q.hot = (p.omega_H() + p.g()) / (p.omega_C() - p.g()) * q.cold;
    q.room = -(q.hot + q.cold);
    return q;
}

struct H2R1C3Currents {
    double q_C{0.0}, q_H{0.0}, q_R{0.0};
    double qB_C{0.0}, qB_H{0.0}, qB_R{0.0};
    double sum() const { return q_C + q_H + q_R + qB_C + qB_H + qB_R; }
};

// {H2, R1, C3} with vacuum background. Q^B_C is taken from conservation.
inline H2R1C3Currents currents_h2r1c3_analytic(const SystemParams& p, const Temperatures& t) {
    const H2R1C3Constants c = h2r1c3_constants(p, t);
    const Populations pop = steady_state_h2r1c3_analytic(p, t);
    const double rho66 = pop[5];
    const double g = p.g(), gamma = p.gamma();
    H2R1C3Currents q;
    q.q_C = 2.0 * p.omega_C() * (c.N * c.c3.j_plus - c.L * c.c3.j_minus) / c.K * rho66;
    q.q_H = (p.omega_H() - g) * (c.L * c.h2.j_plus - c.K * c.h2.j_minus) / c.K * rho66;
    q.q_R = -(p.omega_R() - g) * (c.K * c.r1.j_minus - c.N * c.r1.j_plus) / c.K * rho66;
    q.qB_H = -(2.0 * p.omega_H() - g) * gamma * rho66;
    q.qB_R = -(p.omega_R() - g) * gamma * rho66;
    q.qB_C = -(q.q_C + q.q_H + q.q_R + q.qB_H + q.qB_R);
    return q;
}

// ------------------------------ cooling conditions -----------------------------

enum class CoolingMode { Unfiltered, Revival, HighEfficiency };

inline std::string_view to_string(CoolingMode m) {
    switch (m) {
        case CoolingMode::Unfiltered: return "unfiltered";
        case CoolingMode::Revival: return "revival";
        case CoolingMode::HighEfficiency: return "high_efficiency";
    }
    return "unfiltered";
}

class DegenerateTemperatures : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct CoolingVerdict {
    bool cools{false};
    double ratio{0.0};   // frequency ratio of the mode
    double rhs{0.0};     // (1 - T_R/T_H) / (T_R/T_C - 1)
    double margin{0.0};  // rhs - ratio; cooling iff > 0
};

inline double temperature_ratio(const Temperatures& t) {
    if (!(t.cold > 0.0) || !(t.hot > 0.0)) throw std::invalid_argument("cooling_predicate: temperatures must be > 0");
    if (!(t.room > t.cold)) {
        std::ostringstream os;
        os << "cooling_predicate: T_R = " << t.room << " <= T_C = " << t.cold << " makes the condition singular";
        throw DegenerateTemperatures(os.str());
    }
    return (1.0 - t.room / t.hot) / (t.room / t.cold - 1.0);
}

inline CoolingVerdict cooling_verdict(double ratio, const Temperatures& t) {
    CoolingVerdict v;
    v.ratio = ratio;
    v.rhs = temperature_ratio(t);
    v.margin = v.rhs - v.ratio;
    v.cools = v.margin > 0.0;
    return v;
}

inline CoolingVerdict cooling_predicate(const SystemParams& p, const Temperatures& t, CoolingMode mode) {
    const double wc = p.omega_C(), wh = p.omega_H(), g = p.g();
    switch (mode) {
        case CoolingMode::Unfiltered: return cooling_verdict(wc / wh, t);
        case CoolingMode::Revival: return cooling_verdict((wc - g) / (wh + g), t);
        case CoolingMode::HighEfficiency: return cooling_verdict((wc + g) / (wh - g), t);
    }
    throw std::invalid_argument("cooling_predicate: unknown mode");
}

// True when the kept channels link some three eigenlevels into a closed cycle.
inline bool forms_three_level_cycle(const FilterConfig& f) {
    std::array<int, 8> parent{};
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (ChannelId id : f.kept_ids())
        for (const auto& term : channel_terms(id)) parent[find(term.from)] = find(term.to);
    std::array<int, 8> size{};
    for (int i = 0; i < 8; ++i) ++size[find(i)];
    return std::find(size.begin(), size.end(), 3) != size.end();
}

// Generalized form for a cycle-matched single-channel filter: ratio w_kept(C) / w_kept(H).
inline CoolingVerdict cooling_predicate(const SystemParams& p, const Temperatures& t, const FilterConfig& f) {
    const CycleMatchReport cm = cycle_match_check(f);
    if (cm.status != CycleMatch::Matched)
        throw std::invalid_argument("cooling_predicate: " + f.label() + " is not a cycle-matched single-channel filter");
    if (!forms_three_level_cycle(f))
        throw std::invalid_argument("cooling_predicate: " + f.label() + " does not close a three-level cycle");
    const double wc = channel_frequency(p, {Qubit::C, f.kept(Qubit::C).front()});
    const double wh = channel_frequency(p, {Qubit::H, f.kept(Qubit::H).front()});
    return cooling_verdict(wc / wh, t);
}

}  // namespace qfridge
