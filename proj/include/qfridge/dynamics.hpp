// dynamics.hpp: channel dissipators, the 64x64 Liouvillian, the 8x8 population
// rate matrix, steady states (numeric and closed form) and time propagation.
//
// The generator is the sum of secular dissipators for the kept engineered
// channels plus, optionally, all nine channels coupled to a background bath.
// It acts in the interaction picture of H_S, so populations in the eigenbasis
// decouple exactly from coherences.

#pragma once

#include "qfridge/matrixcore.hpp"
#include "qfridge/reservoirs.hpp"
#include "qfridge/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfridge {

using Populations = std::array<double, 8>;

class SolverFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// -------------------------------- dissipators --------------------------------

enum class DissipatorSource { Engineered, Background };

inline std::string_view to_string(DissipatorSource s) {
    return s == DissipatorSource::Engineered ? "engineered" : "background";
}

struct Dissipator {
    TransitionChannel channel;
    ChannelRates rates;
    DissipatorSource source{DissipatorSource::Engineered};
};

// J+ (2 A† rho A - A A† rho - rho A A†) + J- (2 A rho A† - A† A rho - rho A† A)
inline ComplexMatrix apply_dissipator(const Dissipator& d, const ComplexMatrix& rho) {
    const ComplexMatrix& A = d.channel.op;
    const ComplexMatrix Ad = A.adjoint();
    const ComplexMatrix AAd = A * Ad;
    const ComplexMatrix AdA = Ad * A;
    return d.rates.j_plus * (2.0 * Ad * rho * A - AAd * rho - rho * AAd) +
           d.rates.j_minus * (2.0 * A * rho * Ad - AdA * rho - rho * AdA);
}

// Matrix of apply_dissipator on column-major vec(rho).
inline ComplexMatrix dissipator_superoperator(const Dissipator& d) {
    const ComplexMatrix& A = d.channel.op;
    const ComplexMatrix Ad = A.adjoint();
    const ComplexMatrix AAd = A * Ad;
    const ComplexMatrix AdA = Ad * A;
    const ComplexMatrix I = identity(A.rows());
    const ComplexMatrix absorb = 2.0 * kron(A.transpose(), Ad) - kron(I, AAd) - kron(AAd.transpose(), I);
    const ComplexMatrix emit = 2.0 * kron(A.conjugate(), A) - kron(I, AdA) - kron(AdA.transpose(), I);
    return d.rates.j_plus * absorb + d.rates.j_minus * emit;
}

// --------------------------------- generator ---------------------------------

struct Generator {
    SystemParams params;
    EigenSystem eig;
    ComplexMatrix hamiltonian;
    std::array<ReservoirSpec, 3> reservoirs;
    FilterConfig filter;
    BackgroundSpec background;
    std::vector<Dissipator> dissipators;
    ComplexMatrix liouvillian;  // 64x64, acts on column-major vec(rho)

    ComplexMatrix apply(const ComplexMatrix& rho) const {
        ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
        for (const auto& d : dissipators) out += apply_dissipator(d, rho);
        return out;
    }

    Temperatures temperatures() const {
        return {reservoirs[0].temperature, reservoirs[1].temperature, reservoirs[2].temperature};
    }
};

inline Generator build_generator(const SystemParams& p, const FilterConfig& filter,
                                 const std::array<ReservoirSpec, 3>& reservoirs, const BackgroundSpec& background) {
    enforce_degeneracy_guard(p);
    for (Qubit q : kQubits) {
        const auto& r = reservoirs[qubit_slot(q)];
        if (r.qubit != q) throw std::invalid_argument("build_generator: reservoirs must be ordered H, R, C");
        validate(r);
    }
    validate(background);

    Generator gen{p, eigensystem(p), build_hamiltonian(p), reservoirs, filter, background, {}, {}};
    const auto channels = transition_channels(p);
    for (const auto& ch : select_channels(channels, filter)) {
        gen.dissipators.push_back({ch, channel_rates(ch, reservoirs[qubit_slot(ch.id.qubit)]),
                                   DissipatorSource::Engineered});
    }
    if (background.active()) {
        for (const auto& ch : channels) {
            const ReservoirSpec bath{ch.id.qubit, background.temperature(), background.gamma_B, {}};
            gen.dissipators.push_back({ch, channel_rates(ch, bath), DissipatorSource::Background});
        }
    }
    const Eigen::Index n2 = kSystemDim * kSystemDim;
    gen.liouvillian = ComplexMatrix::Zero(n2, n2);
    for (const auto& d : gen.dissipators) gen.liouvillian += dissipator_superoperator(d);
    return gen;
}

// Uniform gamma = p.gamma() on every engineered reservoir.
inline Generator build_generator(const SystemParams& p, const FilterConfig& filter, const Temperatures& temps,
                                 const BackgroundSpec& background = {}) {
    return build_generator(p, filter, engineered_reservoirs(temps, p.gamma()), background);
}

// ------------------------------ population matrix -----------------------------

struct PopulationMatrix {
    RealMatrix W;  // d p / dt = W p, eigenbasis populations
};

// Built from the channel matrix elements. Requires A†A and AA† to be diagonal
// in the eigenbasis, i.e. no two terms of a channel share a source or a target.
inline PopulationMatrix build_population_matrix(const std::vector<Dissipator>& dissipators) {
    PopulationMatrix pm{RealMatrix::Zero(kSystemDim, kSystemDim)};
    RealMatrix& W = pm.W;
    for (const auto& d : dissipators) {
        const auto& terms = d.channel.terms;
        for (std::size_t a = 0; a < terms.size(); ++a)
            for (std::size_t b = a + 1; b < terms.size(); ++b)
                if (terms[a].from == terms[b].from || terms[a].to == terms[b].to)
                    throw std::invalid_argument("build_population_matrix: channel " + d.channel.id.label() +
                                                " is not population-closed");
        for (const auto& t : terms) {
            const double w = t.coefficient * t.coefficient;
            const double down = 2.0 * d.rates.j_minus * w;
            const double up = 2.0 * d.rates.j_plus * w;
            W(t.to, t.from) += down;
            W(t.from, t.from) -= down;
            W(t.from, t.to) += up;
            W(t.to, t.to) -= up;
        }
    }
    return pm;
}

inline Populations eigen_populations(const EigenSystem& es, const ComplexMatrix& rho) {
    const ComplexMatrix r = es.to_eigenbasis(rho);
    Populations p{};
    for (int i = 0; i < 8; ++i) p[static_cast<std::size_t>(i)] = r(i, i).real();
    return p;
}

inline ComplexMatrix density_from_populations(const EigenSystem& es, const Populations& p) {
    ComplexMatrix d = ComplexMatrix::Zero(kSystemDim, kSystemDim);
    for (int i = 0; i < 8; ++i) d(i, i) = p[static_cast<std::size_t>(i)];
    return es.from_eigenbasis(d);
}

// Index of the population |lambda_i><lambda_i| inside the eigenbasis Liouvillian.
inline Eigen::Index population_slot(int i) noexcept { return static_cast<Eigen::Index>(i) * (kSystemDim + 1); }

// The Liouvillian expressed on vec(V† rho V).
inline ComplexMatrix liouvillian_in_eigenbasis(const Generator& gen) {
    const ComplexMatrix& V = gen.eig.vectors;
    const ComplexMatrix S = kron(V.transpose(), V.adjoint());  // vec(rho) -> vec(V† rho V)
    return S * gen.liouvillian * S.adjoint();
}

// --------------------------- invariant components ----------------------------

struct ComponentPartition {
    std::vector<std::vector<int>> closed;  // closed communicating classes, eigen-indices
    std::vector<int> transient;
    // For each transient state, indices into `closed` it can reach.
    std::vector<std::vector<std::size_t>> transient_targets;

    std::size_t count() const noexcept { return closed.size(); }
};

// Transition graph: i -> j whenever W(j, i) > 0. Closed classes are the
// strongly connected components with no outgoing edge.
inline ComponentPartition invariant_components(const PopulationMatrix& pm) {
    const RealMatrix& W = pm.W;
    const int n = static_cast<int>(W.rows());
    std::vector<std::vector<bool>> reach(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        reach[i][i] = true;
        for (int j = 0; j < n; ++j)
            if (i != j && W(j, i) > 0.0) reach[i][j] = true;
    }
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (reach[i][k])
                for (int j = 0; j < n; ++j)
                    if (reach[k][j]) reach[i][j] = true;

    ComponentPartition out;
    std::vector<int> class_of(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) {
        bool closed = true;
        for (int j = 0; j < n; ++j)
            if (reach[i][j] && !reach[j][i]) closed = false;
        if (!closed || class_of[i] >= 0) continue;
        std::vector<int> cls;
        for (int j = 0; j < n; ++j)
            if (reach[i][j] && reach[j][i]) {
                cls.push_back(j);
                class_of[j] = static_cast<int>(out.closed.size());
            }
        out.closed.push_back(std::move(cls));
    }
    for (int i = 0; i < n; ++i) {
        if (class_of[i] >= 0) continue;
        out.transient.push_back(i);
        std::vector<std::size_t> targets;
        for (std::size_t k = 0; k < out.closed.size(); ++k)
            if (reach[i][out.closed[k].front()]) targets.push_back(k);
        out.transient_targets.push_back(std::move(targets));
    }
    return out;
}

// ------------------------------ numeric steady states -------------------------

struct SteadyState {
    DensityMatrix rho;
    std::vector<int> support;  // eigen-indices of the closed class
    Populations populations{};
};

struct SteadyStateSet {
    std::vector<SteadyState> states;
    bool unique{false};
};

// ||L vec(rho)|| / ||L|| (Frobenius).
inline double relative_residual(const Generator& gen, const ComplexMatrix& rho) {
    const double lnorm = gen.liouvillian.norm();
    if (lnorm == 0.0) return 0.0;
    return (gen.liouvillian * vectorize(rho)).norm() / lnorm;
}

// One steady state per closed class: null vector of W restricted to the class,
// embedded as a diagonal state in the eigenbasis and checked against the full
// Liouvillian.
inline SteadyStateSet steady_states_numeric(const Generator& gen, const ComponentPartition& parts,
                                            double rank_tol = kDefaultRankTol, double residual_tol = 1e-9) {
    const PopulationMatrix pm = build_population_matrix(gen.dissipators);
    SteadyStateSet out;
    for (const auto& cls : parts.closed) {
        const auto m = static_cast<Eigen::Index>(cls.size());
        ComplexMatrix sub(m, m);
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = pm.W(cls[a], cls[b]);

        NullSpace ns;
        try {
            ns = null_space(sub, rank_tol);
        } catch (const RankAmbiguityError& e) {
            throw SolverFailure(std::string("steady state: ") + e.what());
        }
        if (ns.basis.size() != 1) {
            std::ostringstream os;
            os << "steady state: closed class has a " << ns.basis.size() << "-dimensional null space";
            throw SolverFailure(os.str());
        }
        const ComplexVector& v = ns.basis.front();
        const Complex total = v.sum();
        if (std::abs(total) == 0.0) throw SolverFailure("steady state: null vector sums to zero");

        Populations p{};
        for (Eigen::Index a = 0; a < m; ++a) p[static_cast<std::size_t>(cls[a])] = (v(a) / total).real();

        const ComplexMatrix rho = density_from_populations(gen.eig, p);
        auto checked = dm_validate(rho);
        if (auto* rej = std::get_if<DmRejection>(&checked)) {
            throw SolverFailure("steady state rejected as density matrix: " + rej->message());
        }
        const double res = relative_residual(gen, rho);
        if (!(res <= residual_tol)) {
            std::ostringstream os;
            os << "steady state residual " << res << " exceeds " << residual_tol;
            throw SolverFailure(os.str());
        }
        out.states.push_back({std::get<DensityMatrix>(std::move(checked)), cls, p});
    }
    out.unique = out.states.size() == 1;
    return out;
}

inline SteadyStateSet steady_states_numeric(const Generator& gen) {
    return steady_states_numeric(gen, invariant_components(build_population_matrix(gen.dissipators)));
}

// Independent route through the full 64x64 generator; valid only when its
// null space is one-dimensional (a unique steady state).
inline DensityMatrix steady_state_full_generator(const Generator& gen, double rank_tol = kDefaultRankTol) {
    const NullSpace ns = null_space(gen.liouvillian, rank_tol);
    if (ns.basis.size() != 1) {
        std::ostringstream os;
        os << "full-generator null space has dimension " << ns.basis.size() << ", expected 1";
        throw SolverFailure(os.str());
    }
    ComplexMatrix rho = unvectorize(ns.basis.front(), kSystemDim);
    const Complex tr = rho.trace();
    if (std::abs(tr) == 0.0) throw SolverFailure("full-generator null vector is traceless");
    rho /= tr;
    rho = 0.5 * (rho + rho.adjoint());
    return make_density_matrix(rho);
}

// --------------------------- mixture weights -----------------------------------

// Long-time weight of each closed class for an initial state: its own population
// plus absorption probabilities from transient states.
inline std::vector<double> branch_weights(const ComplexMatrix& rho0, const Generator& gen,
                                          const ComponentPartition& parts) {
    const Populations p0 = eigen_populations(gen.eig, rho0);
    std::vector<double> w(parts.closed.size(), 0.0);
    for (std::size_t k = 0; k < parts.closed.size(); ++k)
        for (int i : parts.closed[k]) w[k] += p0[static_cast<std::size_t>(i)];
    if (parts.transient.empty()) return w;

    const PopulationMatrix pm = build_population_matrix(gen.dissipators);
    const auto nt = static_cast<Eigen::Index>(parts.transient.size());
    RealMatrix A(nt, nt);
    for (Eigen::Index a = 0; a < nt; ++a)
        for (Eigen::Index b = 0; b < nt; ++b) A(a, b) = pm.W(parts.transient[b], parts.transient[a]);
    const Eigen::PartialPivLU<RealMatrix> lu(A);
    for (std::size_t k = 0; k < parts.closed.size(); ++k) {
        RealVector rhs(nt);
        for (Eigen::Index a = 0; a < nt; ++a) {
            double s = 0.0;
            for (int j : parts.closed[k]) s += pm.W(j, parts.transient[a]);
            rhs(a) = -s;
        }
        const RealVector h = lu.solve(rhs);
        for (Eigen::Index a = 0; a < nt; ++a) w[k] += p0[static_cast<std::size_t>(parts.transient[a])] * h(a);
    }
    return w;
}

// --------------------------------- propagation --------------------------------

struct PropagationResult {
    DensityMatrix rho;
    double time{0.0};
    std::size_t steps{0};
    bool converged{false};
    double derivative_norm{0.0};  // ||d rho/dt||_F at the end state
};

struct PropagationOptions {
    double dt{0.0};        // 0 selects 0.1 / ||L||_1
    double eps_ss{1e-10};  // stop once ||d rho/dt||_F drops below this
    double max_trace_drift{1e-6};
};

// Classical fourth-order Runge-Kutta with a fixed step. For the linear
// autonomous generator one RK4 step is x <- P x with
// P = I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24, which is precomputed.
inline PropagationResult propagate(const DensityMatrix& rho0, const Generator& gen, double t_final,
                                   PropagationOptions opt = {}) {
    if (!(t_final >= 0.0)) throw std::invalid_argument("propagate: t_final must be >= 0");
    const ComplexMatrix& L = gen.liouvillian;
    ComplexVector x = vectorize(rho0.matrix());
    const Complex tr0 = rho0.matrix().trace();

    auto derivative_norm = [&](const ComplexVector& v) { return (L * v).norm(); };
    auto finish = [&](double t, std::size_t steps, bool conv) {
        ComplexMatrix rho = unvectorize(x, kSystemDim);
        auto checked = dm_validate(rho);
        if (auto* rej = std::get_if<DmRejection>(&checked)) {
            throw NumericalError("propagate: end state rejected: " + rej->message());
        }
        return PropagationResult{std::get<DensityMatrix>(std::move(checked)), t, steps, conv, derivative_norm(x)};
    };

    const double lnorm1 = L.cwiseAbs().colwise().sum().maxCoeff();
    if (t_final == 0.0 || lnorm1 == 0.0) return finish(0.0, 0, derivative_norm(x) < opt.eps_ss);

    const double dt = opt.dt > 0.0 ? opt.dt : 0.1 / lnorm1;
    auto step_matrix = [&](double h) {
        const ComplexMatrix hL = h * L;
        const ComplexMatrix I = identity(L.rows());
        return ComplexMatrix(I + hL * (I + hL * (0.5 * I + hL * (I / 6.0 + hL / 24.0))));
    };
    const ComplexMatrix P = step_matrix(dt);

    double t = 0.0;
    std::size_t steps = 0;
    while (t < t_final) {
        if (derivative_norm(x) < opt.eps_ss) return finish(t, steps, true);
        const double h = std::min(dt, t_final - t);
        x = (h == dt) ? ComplexVector(P * x) : ComplexVector(step_matrix(h) * x);
        t += h;
        ++steps;
        // The RK4 map preserves the trace exactly in exact arithmetic, so an
        // unstable step shows up first as growth of ||rho||_F beyond 1.
        const Complex tr = unvectorize(x, kSystemDim).trace();
        const double drift = std::abs(tr - tr0);
        const double fro = x.norm();
        if (!(drift <= opt.max_trace_drift) || !(fro <= 1.0 + opt.max_trace_drift)) {
            std::ostringstream os;
            os << "propagate: unstable step at t = " << t << " (trace drift " << drift << ", ||rho||_F " << fro
               << ", dt = " << dt << ", ||L||_1 = " << lnorm1 << "); reduce the step";
            throw NumericalError(os.str());
        }
    }
    return finish(t, steps, derivative_norm(x) < opt.eps_ss);
}

// ------------------------------ closed forms -----------------------------------

namespace detail {
inline ChannelRates rates_for(const SystemParams& p, const Temperatures& t, ChannelId id, double extra_emission = 0.0) {
    const double w = channel_frequency(p, id);
    const double n = mean_photon_number(w, t.of(id.qubit));
    return {id, p.gamma() * n, p.gamma() * (1.0 + n) + extra_emission};
}

inline bool same_filter(const FilterConfig& f, int h, int r, int c) { return f == FilterConfig::single(h, r, c); }
}  // namespace detail

// Filter S = {H3, R2, C1}.
inline FilterConfig filter_S() { return FilterConfig::single(3, 2, 1); }

// Normalization constants K_i^± of the four-branch solution for filter S.
struct S1Constants {
    std::array<double, 3> k_plus{};   // populations of |l2>, |l4>, |l6>
    std::array<double, 3> k_minus{};  // populations of |l3>, |l5>, |l7>
    double n_plus{0.0};
    double n_minus{0.0};
};

inline S1Constants s1_constants(const SystemParams& p, const Temperatures& t) {
    const auto H = detail::rates_for(p, t, {Qubit::H, 3});
    const auto R = detail::rates_for(p, t, {Qubit::R, 2});
    const auto C = detail::rates_for(p, t, {Qubit::C, 1});
    // K_{1\3}, K_{2\2}, K_{3\1}: one formula, sign s selects (+) or (-).
    auto k13 = [&](bool s) {
        const double hp = s ? H.j_plus : H.j_minus, rp = s ? R.j_plus : R.j_minus;
        const double cp = s ? C.j_plus : C.j_minus, cm = s ? C.j_minus : C.j_plus;
        return 2.0 * (hp + cm) * rp + hp * cp;
    };
    auto k22 = [&](bool s) {
        const double hp = s ? H.j_plus : H.j_minus, hm = s ? H.j_minus : H.j_plus;
        const double rm = s ? R.j_minus : R.j_plus;
        const double cm = s ? C.j_minus : C.j_plus;
        return 2.0 * (hp + cm) * rm + hm * cm;
    };
    auto k31 = [&](bool s) {
        const double hm = s ? H.j_minus : H.j_plus, rp = s ? R.j_plus : R.j_minus;
        const double rm = s ? R.j_minus : R.j_plus, cp = s ? C.j_plus : C.j_minus;
        return 2.0 * rm * cp + hm * cp + 2.0 * hm * rp;
    };
    S1Constants k;
    k.k_plus = {k13(true), k22(true), k31(true)};
    k.k_minus = {k31(false), k22(false), k13(false)};
    k.n_plus = k.k_plus[0] + k.k_plus[1] + k.k_plus[2];
    k.n_minus = k.k_minus[0] + k.k_minus[1] + k.k_minus[2];
    return k;
}

// Branches (i) rho_11 = 1, (ii) rho_88 = 1, (iii) K+/N+ on |l2>,|l4>,|l6>,
// (iv) K-/N- on |l3>,|l5>,|l7>. Eigen-indices are zero-based in the arrays.
inline std::array<Populations, 4> steady_state_s1_analytic(const SystemParams& p, const Temperatures& t) {
    const S1Constants k = s1_constants(p, t);
    std::array<Populations, 4> br{};
    br[0][0] = 1.0;
    br[1][7] = 1.0;
    for (std::size_t i = 0; i < 3; ++i) {
        br[2][2 * i + 1] = k.k_plus[i] / k.n_plus;
        br[3][2 * i + 2] = k.k_minus[i] / k.n_minus;
    }
    return br;
}

struct AnalyticBranch {
    std::vector<int> support;
    Populations populations{};
};

// Closed-form branches for S and the two cycle-matched sets that share its
// structure, {H1,R1,C1} and {H3,R3,C3}. Each three-level cycle is solved by
// the spanning-tree formula p_a ∝ k_ba k_ca + k_bc k_ca + k_cb k_ba, which for
// S reproduces the K± constants.
inline std::vector<AnalyticBranch> steady_state_cycle_analytic(const SystemParams& p, const Temperatures& t,
                                                               const FilterConfig& f) {
    if (!detail::same_filter(f, 3, 2, 1) && !detail::same_filter(f, 1, 1, 1) && !detail::same_filter(f, 3, 3, 3)) {
        throw std::invalid_argument("steady_state_cycle_analytic: filter " + f.label() +
                                    " is not {H3,R2,C1}, {H1,R1,C1} or {H3,R3,C3}");
    }
    RealMatrix k = RealMatrix::Zero(8, 8);  // k(i, j): rate i -> j
    std::vector<std::vector<int>> adj(8);
    for (ChannelId id : f.kept_ids()) {
        const auto r = detail::rates_for(p, t, id);
        for (const auto& term : channel_terms(id)) {
            const double w = term.coefficient * term.coefficient;
            k(term.from, term.to) += 2.0 * r.j_minus * w;
            k(term.to, term.from) += 2.0 * r.j_plus * w;
            adj[term.from].push_back(term.to);
            adj[term.to].push_back(term.from);
        }
    }
    std::vector<AnalyticBranch> out;
    std::vector<bool> seen(8, false);
    for (int s = 0; s < 8; ++s) {
        if (seen[s]) continue;
        std::vector<int> cls{s};
        seen[s] = true;
        for (std::size_t q = 0; q < cls.size(); ++q)
            for (int nb : adj[cls[q]])
                if (!seen[nb]) {
                    seen[nb] = true;
                    cls.push_back(nb);
                }
        std::sort(cls.begin(), cls.end());
        AnalyticBranch b;
        b.support = cls;
        if (cls.size() == 1) {
            b.populations[cls[0]] = 1.0;
        } else if (cls.size() == 3) {
            const int a = cls[0], bb = cls[1], c = cls[2];
            auto tree = [&](int x, int y, int z) { return k(y, x) * k(z, x) + k(y, z) * k(z, x) + k(z, y) * k(y, x); };
            const double pa = tree(a, bb, c), pb = tree(bb, a, c), pc = tree(c, a, bb);
            const double n = pa + pb + pc;
            b.populations[a] = pa / n;
            b.populations[bb] = pb / n;
            b.populations[c] = pc / n;
        } else {
            throw std::logic_error("steady_state_cycle_analytic: unexpected component size");
        }
        out.push_back(b);
    }
    return out;
}

// {H2, R1, C3} with a vacuum background on all nine channels, uniform gamma.
inline FilterConfig filter_h2r1c3() { return FilterConfig::single(2, 1, 3); }

struct H2R1C3Constants {
    double K{0.0}, L{0.0}, N{0.0};
    ChannelRates h2, r1, c3;  // engineered rates (no background)
};

inline H2R1C3Constants h2r1c3_constants(const SystemParams& p, const Temperatures& t) {
    const double g = p.gamma();
    H2R1C3Constants c;
    c.h2 = detail::rates_for(p, t, {Qubit::H, 2});
    c.r1 = detail::rates_for(p, t, {Qubit::R, 1});
    c.c3 = detail::rates_for(p, t, {Qubit::C, 3});
    const double tH = c.h2.j_minus + g, tR = c.r1.j_minus + g, tC = c.c3.j_minus + g;
    const double hp = c.h2.j_plus, rp = c.r1.j_plus, cp = c.c3.j_plus;
    c.K = hp * rp + 2.0 * hp * cp + 2.0 * rp * tC;
    c.L = (rp + 2.0 * cp) * tH + 2.0 * cp * (tR + g);
    c.N = hp * (tR + g) + 2.0 * (tH + tR + g) * tC;
    return c;
}

// Nonzero populations rho_44 = rho_66 / 2 = K / (2(L+N) + 3K), rho_77 = (L/K) rho_66,
// rho_88 = (N/K) rho_66.
inline Populations steady_state_h2r1c3_analytic(const SystemParams& p, const Temperatures& t) {
    const H2R1C3Constants c = h2r1c3_constants(p, t);
    const double rho66 = 2.0 * c.K / (2.0 * (c.L + c.N) + 3.0 * c.K);
    Populations pop{};
    pop[3] = rho66 / 2.0;
    pop[5] = rho66;
    pop[6] = c.L / c.K * rho66;
    pop[7] = c.N / c.K * rho66;
    return pop;
}

}  // namespace qfridge
