// reservoirs.hpp: thermal rates per channel, filter masks and background baths.

#pragma once

#include "qfridge/spectrum.hpp"

#include <array>
#include <bitset>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfridge {

// Physical-unit conversion at the I/O boundary. CODATA 2018 values.
namespace units {
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_B = 1.380649e-23;      // J / K (exact)
inline constexpr double k_B_over_hbar = k_B / hbar;  // rad s^-1 K^-1
inline constexpr double rad_per_s_per_GHz = 2.0 * std::numbers::pi * 1e9;

// w[natural] = 2 pi f[GHz] 1e9 / unit_scale
inline double frequency_from_GHz(double f_GHz, double unit_scale) {
    return rad_per_s_per_GHz * f_GHz / unit_scale;
}
inline double frequency_to_GHz(double w, double unit_scale) { return w * unit_scale / rad_per_s_per_GHz; }

// T[natural] = (k_B / hbar) T[K] / unit_scale
inline double temperature_from_K(double T_K, double unit_scale) { return k_B_over_hbar * T_K / unit_scale; }
inline double temperature_to_K(double T, double unit_scale) { return T * unit_scale / k_B_over_hbar; }
}  // namespace units

// ------------------------------- reservoirs ---------------------------------

struct Temperatures {
    double hot{0.0};
    double room{0.0};
    double cold{0.0};

    double of(Qubit q) const {
        switch (q) {
            case Qubit::H: return hot;
            case Qubit::R: return room;
            case Qubit::C: return cold;
        }
        return 0.0;
    }
    friend bool operator==(const Temperatures&, const Temperatures&) = default;
};

struct ReservoirSpec {
    Qubit qubit{Qubit::H};
    double temperature{0.0};  // natural units; 0 is vacuum
    double gamma{0.0};
    // Per-channel override of gamma, indexed by channel index - 1.
    std::array<std::optional<double>, 3> gamma_override{};

    double gamma_for(int channel_index) const {
        const auto& o = gamma_override.at(static_cast<std::size_t>(channel_index - 1));
        return o ? *o : gamma;
    }
};

inline void validate(const ReservoirSpec& r) {
    if (!std::isfinite(r.temperature) || r.temperature < 0.0)
        throw std::invalid_argument("ReservoirSpec: temperature must be finite and >= 0");
    if (!std::isfinite(r.gamma) || r.gamma < 0.0)
        throw std::invalid_argument("ReservoirSpec: gamma must be finite and >= 0");
}

// The three engineered reservoirs with a common gamma.
inline std::array<ReservoirSpec, 3> engineered_reservoirs(const Temperatures& t, double gamma) {
    std::array<ReservoirSpec, 3> out;
    for (Qubit q : kQubits) out[qubit_slot(q)] = ReservoirSpec{q, t.of(q), gamma, {}};
    return out;
}

// Which channels each engineered reservoir keeps.
class FilterConfig {
public:
    FilterConfig() = default;  // keeps nothing

    static FilterConfig all() {
        FilterConfig f;
        for (auto& m : f.mask_) m.set();
        return f;
    }
    static FilterConfig none() { return {}; }
    static FilterConfig single(int h, int r, int c) {
        FilterConfig f;
        f.keep({Qubit::H, h});
        f.keep({Qubit::R, r});
        f.keep({Qubit::C, c});
        return f;
    }
    static FilterConfig from_ids(const std::vector<ChannelId>& ids) {
        FilterConfig f;
        for (const auto& id : ids) f.keep(id);
        return f;
    }

    FilterConfig& keep(ChannelId id) {
        check(id);
        mask_[qubit_slot(id.qubit)].set(static_cast<std::size_t>(id.index - 1));
        return *this;
    }
    FilterConfig& drop(ChannelId id) {
        check(id);
        mask_[qubit_slot(id.qubit)].reset(static_cast<std::size_t>(id.index - 1));
        return *this;
    }
    FilterConfig& set_mask(Qubit q, std::bitset<3> m) {
        mask_[qubit_slot(q)] = m;
        return *this;
    }

    bool keeps(ChannelId id) const { return mask_[qubit_slot(id.qubit)].test(static_cast<std::size_t>(id.index - 1)); }
    std::bitset<3> mask(Qubit q) const { return mask_[qubit_slot(q)]; }
    std::vector<int> kept(Qubit q) const {
        std::vector<int> out;
        for (int j = 1; j <= 3; ++j)
            if (mask_[qubit_slot(q)].test(static_cast<std::size_t>(j - 1))) out.push_back(j);
        return out;
    }
    std::vector<ChannelId> kept_ids() const {
        std::vector<ChannelId> out;
        for (ChannelId id : all_channel_ids())
            if (keeps(id)) out.push_back(id);
        return out;
    }
    std::size_t count() const { return mask_[0].count() + mask_[1].count() + mask_[2].count(); }

    // e.g. "H{3} R{2} C{1}", "H{} R{1,2,3} C{2}"
    std::string label() const {
        std::ostringstream os;
        for (Qubit q : kQubits) {
            if (q != Qubit::H) os << ' ';
            os << qubit_letter(q) << '{';
            bool first = true;
            for (int j : kept(q)) {
                os << (first ? "" : ",") << j;
                first = false;
            }
            os << '}';
        }
        return os.str();
    }

    friend bool operator==(const FilterConfig&, const FilterConfig&) = default;

private:
    static void check(ChannelId id) {
        if (id.index < 1 || id.index > 3) throw std::invalid_argument("FilterConfig: channel index must be 1..3");
    }
    std::array<std::bitset<3>, 3> mask_{};
};

// The six per-qubit keep-patterns obtained by filtering out one or two channels.
inline std::vector<std::bitset<3>> partial_keep_patterns() {
    return {std::bitset<3>("001"), std::bitset<3>("010"), std::bitset<3>("100"),
            std::bitset<3>("011"), std::bitset<3>("101"), std::bitset<3>("110")};
}

// 27 configurations keeping exactly one channel per qubit, ordered (H, R, C) lexicographically.
inline std::vector<FilterConfig> single_channel_filters() {
    std::vector<FilterConfig> out;
    for (int h = 1; h <= 3; ++h)
        for (int r = 1; r <= 3; ++r)
            for (int c = 1; c <= 3; ++c) out.push_back(FilterConfig::single(h, r, c));
    return out;
}

// 6^3 = 216 configurations, every qubit filtered by one of the six keep-patterns.
inline std::vector<FilterConfig> all_partial_filters() {
    std::vector<FilterConfig> out;
    const auto pats = partial_keep_patterns();
    for (const auto& h : pats)
        for (const auto& r : pats)
            for (const auto& c : pats) {
                FilterConfig f;
                f.set_mask(Qubit::H, h).set_mask(Qubit::R, r).set_mask(Qubit::C, c);
                out.push_back(f);
            }
    return out;
}

struct BackgroundSpec {
    enum class Mode { None, Vacuum, Thermal };
    Mode mode{Mode::None};
    double T0{0.0};
    double gamma_B{0.0};

    static BackgroundSpec none() { return {}; }
    static BackgroundSpec vacuum(double gamma_B) { return {Mode::Vacuum, 0.0, gamma_B}; }
    static BackgroundSpec thermal(double T0, double gamma_B) { return {Mode::Thermal, T0, gamma_B}; }

    bool active() const noexcept { return mode != Mode::None; }
    double temperature() const noexcept { return mode == Mode::Thermal ? T0 : 0.0; }

    friend bool operator==(const BackgroundSpec&, const BackgroundSpec&) = default;
};

inline std::string_view to_string(BackgroundSpec::Mode m) {
    switch (m) {
        case BackgroundSpec::Mode::None: return "none";
        case BackgroundSpec::Mode::Vacuum: return "vacuum";
        case BackgroundSpec::Mode::Thermal: return "thermal";
    }
    return "none";
}

inline void validate(const BackgroundSpec& b) {
    if (b.mode == BackgroundSpec::Mode::Thermal && !(b.T0 > 0.0 && std::isfinite(b.T0)))
        throw std::invalid_argument("BackgroundSpec: thermal mode requires T0 > 0");
    if (b.active() && !(b.gamma_B > 0.0 && std::isfinite(b.gamma_B)))
        throw std::invalid_argument("BackgroundSpec: gamma_B must be > 0");
}

// ---------------------------------- rates -----------------------------------

// Bose-Einstein occupation 1/(exp(w/T) - 1); zero in the vacuum limit T = 0.
inline double mean_photon_number(double omega, double T) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("mean_photon_number: frequency must be > 0");
    if (!(T >= 0.0) || !std::isfinite(T)) throw std::invalid_argument("mean_photon_number: temperature must be >= 0");
    if (T == 0.0) return 0.0;
    return 1.0 / std::expm1(omega / T);
}

struct ChannelRates {
    ChannelId id;
    double j_plus{0.0};   // absorption, gamma n(w)
    double j_minus{0.0};  // emission, gamma (1 + n(w))
};

inline ChannelRates channel_rates(const TransitionChannel& ch, const ReservoirSpec& r) {
    if (ch.id.qubit != r.qubit) {
        throw std::invalid_argument("channel_rates: channel " + ch.id.label() + " does not couple to reservoir " +
                                    std::string(1, qubit_letter(r.qubit)));
    }
    const double gamma = r.gamma_for(ch.id.index);
    const double n = mean_photon_number(ch.frequency, r.temperature);
    return {ch.id, gamma * n, gamma * (1.0 + n)};
}

inline std::vector<TransitionChannel> select_channels(const std::vector<TransitionChannel>& channels,
                                                      const FilterConfig& f) {
    if (channels.size() != 9) throw std::invalid_argument("select_channels: expected all nine channels");
    std::vector<TransitionChannel> out;
    for (const auto& ch : channels)
        if (f.keeps(ch.id)) out.push_back(ch);
    return out;
}

// ------------------------------ diagnostics ---------------------------------

enum class CycleMatch { Matched, Mismatched, NotApplicable };

struct CycleMatchReport {
    CycleMatch status{CycleMatch::NotApplicable};
    // (offset_H + offset_C - offset_R) in units of g; zero iff matched.
    int offset_mismatch{0};
    std::string detail;
};

// For one kept channel per qubit: matched iff w(R) = w(H) + w(C) identically in
// the model parameters. Decided on the integer g-offsets, so no rounding enters.
inline CycleMatchReport cycle_match_check(const FilterConfig& f) {
    CycleMatchReport rep;
    const auto h = f.kept(Qubit::H), r = f.kept(Qubit::R), c = f.kept(Qubit::C);
    if (h.size() != 1 || r.size() != 1 || c.size() != 1) {
        rep.detail = "not applicable: " + f.label() + " does not keep exactly one channel per qubit";
        return rep;
    }
    const int oh = channel_offset({Qubit::H, h[0]});
    const int orr = channel_offset({Qubit::R, r[0]});
    const int oc = channel_offset({Qubit::C, c[0]});
    rep.offset_mismatch = oh + oc - orr;
    rep.status = rep.offset_mismatch == 0 ? CycleMatch::Matched : CycleMatch::Mismatched;
    std::ostringstream os;
    os << f.label() << ": w(H) + w(C) - w(R) = " << rep.offset_mismatch << " g";
    rep.detail = os.str();
    return rep;
}

// Warn (never fail) when gamma is not small against the channel spacing.
inline std::optional<std::string> markov_validity_warning(const SystemParams& p, double gamma) {
    const double gap = min_channel_gap(p);
    if (gamma >= 0.1 * gap) {
        std::ostringstream os;
        os << "Markov/secular validity: gamma = " << gamma << " is not << min channel spacing " << gap
           << " (threshold 0.1 * spacing)";
        return os.str();
    }
    return std::nullopt;
}

}  // namespace qfridge
