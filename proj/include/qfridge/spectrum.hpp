// spectrum.hpp: three-qubit Hamiltonian, its closed-form eigensystem and the
// nine lowering eigen-operators (transition channels).
//
// Basis convention: computational states |q_H q_R q_C> ordered |111>, |110>,
// ..., |000> (binary descending), so |q> = |1> is the first basis vector of
// every single-qubit factor. Eigenstates are indexed 0..7 in the order of the
// energies [w_R, w_H, g, -w_C, w_C, -g, -w_H, -w_R].

#pragma once

#include "qfridge/matrixcore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qfridge {

enum class Qubit { H = 0, R = 1, C = 2 };

inline constexpr std::array<Qubit, 3> kQubits{Qubit::H, Qubit::R, Qubit::C};

inline char qubit_letter(Qubit q) {
    switch (q) {
        case Qubit::H: return 'H';
        case Qubit::R: return 'R';
        case Qubit::C: return 'C';
    }
    return '?';
}

inline constexpr std::size_t qubit_slot(Qubit q) noexcept { return static_cast<std::size_t>(q); }

// Channel label (alpha, j), j in 1..3, numbered as in the eigen-operator table.
struct ChannelId {
    Qubit qubit{Qubit::H};
    int index{1};

    std::string label() const { return std::string(1, qubit_letter(qubit)) + std::to_string(index); }
    // Position 0..8 in the canonical order H1..H3, R1..R3, C1..C3.
    std::size_t flat() const { return 3 * qubit_slot(qubit) + static_cast<std::size_t>(index - 1); }

    friend auto operator<=>(const ChannelId&, const ChannelId&) = default;
};

inline std::vector<ChannelId> all_channel_ids() {
    std::vector<ChannelId> ids;
    for (Qubit q : kQubits)
        for (int j = 1; j <= 3; ++j) ids.push_back({q, j});
    return ids;
}

// ------------------------------- parameters ---------------------------------

// Model frequencies in natural units (hbar = k_B = 1). w_R is always w_C + w_H.
class SystemParams {
public:
    // Throws std::invalid_argument unless w_H > w_C > 0, 0 < g < w_C, gamma > 0.
    static SystemParams make(double omega_C, double omega_H, double g, double gamma,
                             double unit_scale = 1.0, bool allow_degenerate = false) {
        auto finite = [](double x) { return std::isfinite(x); };
        if (!finite(omega_C) || !finite(omega_H) || !finite(g) || !finite(gamma) || !finite(unit_scale)) {
            throw std::invalid_argument("SystemParams: non-finite parameter");
        }
        if (!(omega_C > 0.0)) throw std::invalid_argument("SystemParams: omega_C must be > 0");
        if (!(omega_H > omega_C)) throw std::invalid_argument("SystemParams: omega_H must exceed omega_C");
        if (!(g > 0.0)) throw std::invalid_argument("SystemParams: g must be > 0");
        if (!(g < omega_C)) throw std::invalid_argument("SystemParams: g must be < omega_C");
        if (!(gamma > 0.0)) throw std::invalid_argument("SystemParams: gamma must be > 0");
        if (!(unit_scale > 0.0)) throw std::invalid_argument("SystemParams: unit_scale must be > 0");
        SystemParams p;
        p.omega_C_ = omega_C;
        p.omega_H_ = omega_H;
        p.g_ = g;
        p.gamma_ = gamma;
        p.unit_scale_ = unit_scale;
        p.allow_degenerate_ = allow_degenerate;
        return p;
    }

    double omega_C() const noexcept { return omega_C_; }
    double omega_H() const noexcept { return omega_H_; }
    double omega_R() const noexcept { return omega_C_ + omega_H_; }
    double g() const noexcept { return g_; }
    double gamma() const noexcept { return gamma_; }
    double unit_scale() const noexcept { return unit_scale_; }
    bool allow_degenerate() const noexcept { return allow_degenerate_; }

    friend bool operator==(const SystemParams&, const SystemParams&) = default;

private:
    SystemParams() = default;

    double omega_C_{1.0};
    double omega_H_{3.0};
    double g_{0.5};
    double gamma_{0.1};
    double unit_scale_{1.0};
    bool allow_degenerate_{false};
};

// Channel frequency offset in units of g.
inline int channel_offset(ChannelId id) {
    static constexpr int table[3][3] = {
        {0, -1, +1},  // H: w_H, w_H - g, w_H + g
        {-1, 0, +1},  // R: w_R - g, w_R, w_R + g
        {-1, +1, 0},  // C: w_C - g, w_C + g, w_C
    };
    if (id.index < 1 || id.index > 3) throw std::invalid_argument("channel index must be 1..3");
    return table[qubit_slot(id.qubit)][id.index - 1];
}

inline double bare_frequency(const SystemParams& p, Qubit q) {
    switch (q) {
        case Qubit::H: return p.omega_H();
        case Qubit::R: return p.omega_R();
        case Qubit::C: return p.omega_C();
    }
    return 0.0;
}

inline double channel_frequency(const SystemParams& p, ChannelId id) {
    return bare_frequency(p, id.qubit) + channel_offset(id) * p.g();
}

// First pair of channels whose frequencies coincide within 1e3 * eps * w_C.
inline std::optional<std::pair<ChannelId, ChannelId>> find_degenerate_channels(const SystemParams& p) {
    const double tol = 1e3 * std::numeric_limits<double>::epsilon() * p.omega_C();
    const auto ids = all_channel_ids();
    for (std::size_t a = 0; a < ids.size(); ++a) {
        for (std::size_t b = a + 1; b < ids.size(); ++b) {
            if (std::abs(channel_frequency(p, ids[a]) - channel_frequency(p, ids[b])) <= tol) {
                return std::make_pair(ids[a], ids[b]);
            }
        }
    }
    return std::nullopt;
}

class DegeneracyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Throws DegeneracyError for coinciding channel frequencies unless the
// parameters opted into degenerate mode.
inline void enforce_degeneracy_guard(const SystemParams& p) {
    if (p.allow_degenerate()) return;
    if (auto hit = find_degenerate_channels(p)) {
        throw DegeneracyError("degenerate channel frequencies: " + hit->first.label() + " and " +
                              hit->second.label() + " (set allow_degenerate to override)");
    }
}

// Smallest |w_a - w_b| over distinct channel pairs.
inline double min_channel_gap(const SystemParams& p) {
    const auto ids = all_channel_ids();
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = a + 1; b < ids.size(); ++b)
            gap = std::min(gap, std::abs(channel_frequency(p, ids[a]) - channel_frequency(p, ids[b])));
    return gap;
}

// ------------------------------- Hamiltonian --------------------------------

namespace pauli {
// Single-qubit operators in the ordered basis (|1>, |0>).
inline ComplexMatrix sigma_z() { return (ComplexMatrix(2, 2) << 1, 0, 0, -1).finished(); }
inline ComplexMatrix sigma_plus() { return (ComplexMatrix(2, 2) << 0, 1, 0, 0).finished(); }   // |1><0|
inline ComplexMatrix sigma_minus() { return (ComplexMatrix(2, 2) << 0, 0, 1, 0).finished(); }  // |0><1|
inline ComplexMatrix id2() { return ComplexMatrix::Identity(2, 2); }

// Embed a one-qubit operator at position q of H (x) R (x) C.
inline ComplexMatrix embed(const ComplexMatrix& op, Qubit q) {
    const ComplexMatrix I = id2();
    switch (q) {
        case Qubit::H: return kron(kron(op, I), I);
        case Qubit::R: return kron(kron(I, op), I);
        case Qubit::C: return kron(kron(I, I), op);
    }
    return {};
}
}  // namespace pauli

// H_S = sum_a (w_a/2) sigma^z_a + g (s+_H s-_R s+_C + h.c.), computational basis.
inline ComplexMatrix build_hamiltonian(const SystemParams& p) {
    using namespace pauli;
    ComplexMatrix h = 0.5 * p.omega_H() * embed(sigma_z(), Qubit::H) +
                      0.5 * p.omega_R() * embed(sigma_z(), Qubit::R) +
                      0.5 * p.omega_C() * embed(sigma_z(), Qubit::C);
    const ComplexMatrix hop = kron(kron(sigma_plus(), sigma_minus()), sigma_plus());
    h += p.g() * (hop + hop.adjoint());
    return h;
}

// Index of a computational basis state |q_H q_R q_C> (q in {0,1}).
inline constexpr Eigen::Index computational_index(int qH, int qR, int qC) noexcept {
    return 7 - (4 * qH + 2 * qR + qC);
}

struct EigenSystem {
    std::array<double, 8> energies{};
    ComplexMatrix vectors;  // column i is |lambda_i> in the computational basis

    ComplexVector ket(Eigen::Index i) const { return vectors.col(i); }
    ComplexMatrix to_eigenbasis(const ComplexMatrix& op) const { return vectors.adjoint() * op * vectors; }
    ComplexMatrix from_eigenbasis(const ComplexMatrix& op) const { return vectors * op * vectors.adjoint(); }
};

inline EigenSystem eigensystem(const SystemParams& p) {
    EigenSystem es;
    es.energies = {p.omega_R(), p.omega_H(), p.g(), -p.omega_C(), p.omega_C(), -p.g(), -p.omega_H(), -p.omega_R()};
    es.vectors = ComplexMatrix::Zero(kSystemDim, kSystemDim);
    const double r = 1.0 / std::sqrt(2.0);
    es.vectors(computational_index(1, 1, 1), 0) = 1.0;
    es.vectors(computational_index(1, 1, 0), 1) = 1.0;
    es.vectors(computational_index(1, 0, 1), 2) = r;
    es.vectors(computational_index(0, 1, 0), 2) = r;
    es.vectors(computational_index(1, 0, 0), 3) = 1.0;
    es.vectors(computational_index(0, 1, 1), 4) = 1.0;
    es.vectors(computational_index(1, 0, 1), 5) = r;
    es.vectors(computational_index(0, 1, 0), 5) = -r;
    es.vectors(computational_index(0, 0, 1), 6) = 1.0;
    es.vectors(computational_index(0, 0, 0), 7) = 1.0;
    return es;
}

// Cross-check of the closed form against a numerical diagonalization: returns the
// largest deviation among sorted energies and ||H v_i - e_i v_i||.
inline double eigensystem_crosscheck(const SystemParams& p) {
    const ComplexMatrix h = build_hamiltonian(p);
    const EigenSystem es = eigensystem(p);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    std::array<double, 8> sorted = es.energies;
    std::sort(sorted.begin(), sorted.end());
    double dev = 0.0;
    for (int i = 0; i < 8; ++i) dev = std::max(dev, std::abs(sorted[i] - solver.eigenvalues()(i)));
    for (int i = 0; i < 8; ++i) {
        dev = std::max(dev, (h * es.ket(i) - es.energies[i] * es.ket(i)).norm());
    }
    return dev;
}

// ---------------------------- transition channels ---------------------------

// One matrix element c |lambda_to><lambda_from| of an eigen-operator.
struct ChannelTerm {
    int from;  // eigen-index 0..7
    int to;
    double coefficient;
};

struct TransitionChannel {
    ChannelId id;
    double frequency{0.0};
    std::vector<ChannelTerm> terms;
    ComplexMatrix op;        // computational basis
    ComplexMatrix op_eigen;  // eigenbasis
};

inline std::vector<ChannelTerm> channel_terms(ChannelId id) {
    const double r = 1.0 / std::sqrt(2.0);
    // {from, to, coefficient}, eigen-indices zero-based.
    switch (id.flat()) {
        case 0: return {{0, 4, 1.0}, {3, 7, 1.0}};  // H1: |5><1| + |8><4|
        case 1: return {{1, 2, r}, {5, 6, r}};      // H2
        case 2: return {{2, 6, r}, {1, 5, -r}};     // H3
        case 3: return {{0, 2, r}, {5, 7, -r}};     // R1
        case 4: return {{1, 3, 1.0}, {4, 6, 1.0}};  // R2
        case 5: return {{2, 7, r}, {0, 5, r}};      // R3
        case 6: return {{4, 2, r}, {5, 3, r}};      // C1
        case 7: return {{2, 3, r}, {4, 5, -r}};     // C2
        case 8: return {{0, 1, 1.0}, {6, 7, 1.0}};  // C3
    }
    throw std::invalid_argument("channel_terms: bad channel id");
}

inline TransitionChannel make_channel(const SystemParams& p, const EigenSystem& es, ChannelId id) {
    TransitionChannel ch;
    ch.id = id;
    ch.frequency = channel_frequency(p, id);
    ch.terms = channel_terms(id);
    ch.op_eigen = ComplexMatrix::Zero(kSystemDim, kSystemDim);
    for (const auto& t : ch.terms) ch.op_eigen(t.to, t.from) += t.coefficient;
    ch.op = es.from_eigenbasis(ch.op_eigen);
    return ch;
}

// All nine channels in canonical order H1..H3, R1..R3, C1..C3.
inline std::vector<TransitionChannel> transition_channels(const SystemParams& p) {
    const EigenSystem es = eigensystem(p);
    std::vector<TransitionChannel> out;
    out.reserve(9);
    for (ChannelId id : all_channel_ids()) out.push_back(make_channel(p, es, id));
    return out;
}

// max over channels of ||[H_S, A] + w A||_F.
inline double channel_commutator_residual(const ComplexMatrix& hamiltonian,
                                          const std::vector<TransitionChannel>& channels) {
    double worst = 0.0;
    for (const auto& ch : channels) {
        worst = std::max(worst, (commutator(hamiltonian, ch.op) + ch.frequency * ch.op).norm());
    }
    return worst;
}

inline double channel_commutator_check(const SystemParams& p) {
    return channel_commutator_residual(build_hamiltonian(p), transition_channels(p));
}

}  // namespace qfridge
