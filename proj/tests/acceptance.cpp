// Standalone acceptance runner: one PASS/FAIL line per criterion.
#include "oracles.hpp"

#include <cstdio>
#include <functional>

using namespace qfridge;

namespace {

struct Outcome {
    bool pass{true};
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string config_path(const std::string& name) { return std::string(QFRIDGE_SOURCE_DIR) + "/configs/" + name; }

Outcome ac1() {
    std::mt19937_64 rng(1001);
    double eig = 0.0, comm = 0.0;
    for (int k = 0; k < 100; ++k) {
        const auto p = oracle::random_draw(rng).params;
        const EigenSystem es = eigensystem(p);
        const ComplexMatrix h = oracle::hamiltonian(p.omega_C(), p.omega_H(), p.g());
        for (int i = 0; i < 8; ++i)
            eig = std::max(eig, (h * es.ket(i) - es.energies[static_cast<std::size_t>(i)] * es.ket(i)).norm());
        eig = std::max(eig, (es.vectors.adjoint() * es.vectors - identity(8)).norm());
        eig = std::max(eig, eigensystem_crosscheck(p));
        comm = std::max(comm, channel_commutator_check(p));
    }
    return {eig <= 1e-12 && comm <= 1e-12, fmt("max eigen residual %.2e, max commutator residual %.2e", eig, comm)};
}

Outcome ac2() {
    std::mt19937_64 rng(1002);
    double dev = 0.0;
    bool four = true;
    for (int k = 0; k < 100; ++k) {
        const auto d = oracle::random_draw(rng, false);
        const auto gen = build_generator(d.params, filter_S(), d.temps);
        const auto set = steady_states_numeric(gen);
        if (set.states.size() != 4) {
            four = false;
            continue;
        }
        const auto ref = steady_state_s1_analytic(d.params, d.temps);
        for (const auto& st : set.states) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& br : ref) {
                double m = 0.0;
                for (std::size_t i = 0; i < 8; ++i) m = std::max(m, std::abs(st.populations[i] - br[i]));
                best = std::min(best, m);
            }
            dev = std::max(dev, best);
        }
    }
    return {four && dev <= 1e-9, std::string(four ? "4 states in every draw" : "state count differs") +
                                     fmt(", max population deviation %.2e", dev)};
}

Outcome ac3() {
    std::mt19937_64 rng(1003);
    double ratio_dev = 0.0, sum_dev = 0.0, branch_dev = 0.0;
    for (int k = 0; k < 100; ++k) {
        const auto d = oracle::random_draw(rng);
        const auto& p = d.params;
        const auto gen = build_generator(p, filter_S(), d.temps);
        const auto set = steady_states_numeric(gen);
        const auto iii = make_report(gen, set.states[1].rho);
        const auto iv = make_report(gen, set.states[2].rho);
        for (const auto* r : {&iii, &iv}) {
            ratio_dev = std::max(ratio_dev, rel(r->q_H / r->q_C, (p.omega_H() + p.g()) / (p.omega_C() - p.g())));
            sum_dev = std::max(sum_dev, std::abs(r->q_C + r->q_H + r->q_R) /
                                            (std::abs(r->q_C) + std::abs(r->q_H) + std::abs(r->q_R)));
        }
        branch_dev = std::max({branch_dev, rel(iv.q_C, iii.q_C), rel(iv.q_H, iii.q_H), rel(iv.q_R, iii.q_R)});
    }
    const bool ok = ratio_dev <= 1e-12 && sum_dev <= 1e-10 && branch_dev <= 1e-10;
    return {ok, fmt("ratio dev %.2e, sum dev %.2e, branch (iii) vs (iv) relative difference %.2e", ratio_dev, sum_dev,
                    branch_dev)};
}

Outcome ac4() {
    const auto p1 = SystemParams::make(1, 3, 9.0 / 17.0, 0.1);
    const auto g1 = build_generator(p1, filter_S(), {200, 40, 10});
    const auto s1 = steady_states_numeric(g1);
    const auto e1 = make_report(g1, s1.states[1].rho).eta;

    std::mt19937_64 rng(1004);
    double dev2 = 0.0;
    bool defined = e1.has_value();
    for (int k = 0; k < 20; ++k) {
        const auto d = oracle::random_draw(rng);
        const auto& p = d.params;
        const auto gen = build_generator(p, FilterConfig::single(2, 2, 2), d.temps);
        const auto set = steady_states_numeric(gen);
        for (const auto& st : set.states) {
            const auto r = make_report(gen, st.rho);
            if (r.total_abs() <= 1e-14) continue;
            if (!r.eta) {
                defined = false;
                continue;
            }
            dev2 = std::max(dev2, rel(*r.eta, (p.omega_C() + p.g()) / (p.omega_H() - p.g())));
        }
    }
    const double dev1 = e1 ? rel(*e1, 2.0 / 15.0) : 1.0;
    return {defined && dev1 <= 1e-12 && dev2 <= 1e-12, fmt("eta1 - 2/15 rel %.2e, eta2 max rel dev %.2e", dev1, dev2)};
}

// Q_C of the three-level branch on |l2>,|l4>,|l6> for filter S.
double s_branch_qc(const SystemParams& p, const Temperatures& t) {
    const auto gen = build_generator(p, filter_S(), t);
    const auto set = steady_states_numeric(gen);
    return make_report(gen, set.states[1].rho).q_C;
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

Outcome ac5() {
    double worst = 0.0;
    bool bracketed = true;
    std::mt19937_64 rng(1005);
    std::vector<std::pair<SystemParams, Temperatures>> cases;
    cases.push_back({SystemParams::make(1, 3, 9.0 / 17.0, 0.1), {100, 40, 10}});
    while (cases.size() < 11) {
        const auto d = oracle::random_draw(rng);
        const auto& p = d.params;
        const double r = (p.omega_C() - p.g()) / (p.omega_H() + p.g());
        const double den = 1.0 - r * (d.temps.room / d.temps.cold - 1.0);
        if (den > 0.05) cases.push_back({p, d.temps});
    }
    double pinned = 0.0;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto& [p, t0] = cases[k];
        const double r = (p.omega_C() - p.g()) / (p.omega_H() + p.g());
        const double expect = t0.room / (1.0 - r * (t0.room / t0.cold - 1.0));
        auto qc = [&, t = t0](double th) {
            Temperatures tt = t;
            tt.hot = th;
            return s_branch_qc(p, tt);
        };
        const double lo = t0.room * 1.0001, hi = expect * 20.0;
        if (!(qc(lo) < 0 && qc(hi) > 0)) {
            bracketed = false;
            continue;
        }
        const double root = bisect(qc, lo, hi);
        worst = std::max(worst, rel(root, expect));
        if (k == 0) pinned = root;
    }
    const auto p = SystemParams::make(1, 3, 9.0 / 17.0, 0.1);
    const double thr = bisect(
        [&](double th) { return cooling_predicate(p, {th, 40, 10}, CoolingMode::Revival).margin; }, 41, 1e4);
    bool unfiltered_false = true;
    for (double th = 40.5; th < 1e15; th *= 1.5)
        unfiltered_false = unfiltered_false && !cooling_predicate(p, {th, 40, 10}, CoolingMode::Unfiltered).cools;
    const bool ok = bracketed && worst <= 1e-6 && rel(pinned, 200.0 / 3.0) <= 1e-6 && rel(thr, 200.0 / 3.0) <= 1e-12 &&
                    unfiltered_false;
    return {ok, fmt("max root vs threshold rel %.2e, pinned root %.10g (200/3), predicate threshold %.12g", worst, pinned,
                    thr) +
                    (unfiltered_false ? ", unfiltered never cools" : ", unfiltered cools somewhere")};
}

Outcome ac6() {
    std::mt19937_64 rng(1006);
    double pop = 0.0, cur = 0.0;
    bool unique = true;
    for (int k = 0; k < 20; ++k) {
        const auto d = oracle::random_draw(rng);
        const double gamma_b = d.params.gamma() * (0.1 + 2.0 * std::uniform_real_distribution<double>()(rng));
        const auto gen = build_generator(d.params, filter_S(), d.temps, BackgroundSpec::vacuum(gamma_b));
        const auto set = steady_states_numeric(gen);
        if (!set.unique) {
            unique = false;
            continue;
        }
        ComplexMatrix ground = ComplexMatrix::Zero(8, 8);
        ground(7, 7) = 1.0;
        pop = std::max(pop, (set.states[0].rho.matrix() - ground).cwiseAbs().maxCoeff());
        for (const auto& dc : make_report(gen, set.states[0].rho).per_dissipator) cur = std::max(cur, std::abs(dc.value));
    }
    return {unique && pop <= 1e-10 && cur <= 1e-12,
            fmt("max |rho - |000><000|| %.2e, max |current| %.2e", pop, cur) + (unique ? "" : ", not unique")};
}

Outcome ac7() {
    std::mt19937_64 rng(1007);
    double pops = 0.0, cur = 0.0, cons = 0.0;
    int sign_ok = 0, n = 0;
    std::array<int, 6> wrong{};
    while (n < 100) {
        const auto d = oracle::random_draw(rng);
        const auto& p = d.params;
        const BackgroundSpec bg = BackgroundSpec::vacuum(p.gamma());
        const auto gen = build_generator(p, filter_h2r1c3(), d.temps, bg);
        const auto set = steady_states_numeric(gen);
        if (!set.unique) continue;
        ++n;
        const auto ana = steady_state_h2r1c3_analytic(p, d.temps);
        for (std::size_t i = 0; i < 8; ++i) pops = std::max(pops, std::abs(ana[i] - set.states[0].populations[i]));
        const auto model = oracle::build_model(p, filter_h2r1c3(), d.temps, bg);
        const auto q = oracle::currents(model, set.states[0].rho.matrix());
        const auto a = currents_h2r1c3_analytic(p, d.temps);
        const std::array<double, 6> av{a.q_H, a.q_R, a.q_C, a.qB_H, a.qB_R, a.qB_C};
        double mag = 0.0, sum = 0.0;
        for (double v : q) {
            mag += std::abs(v);
            sum += v;
        }
        for (std::size_t i = 0; i < 6; ++i) cur = std::max(cur, std::abs(av[i] - q[i]) / mag);
        cons = std::max(cons, std::abs(sum) / mag);
        bool ok = true;
        for (std::size_t i = 0; i < 6; ++i) {
            const bool good = i < 3 ? q[i] > 0 : q[i] < 0;
            if (!good) ++wrong[i];
            ok = ok && good;
        }
        if (ok) ++sign_ok;
    }
    const bool pass = pops <= 1e-9 && cur <= 1e-9 && cons <= 1e-10 && sign_ok == n;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "pop dev %.2e, current dev %.2e, conservation %.2e, sign pattern held in %d/%d draws "
                  "(wrong signs: H %d, R %d, C %d, B_H %d, B_R %d, B_C %d)",
                  pops, cur, cons, sign_ok, n, wrong[0], wrong[1], wrong[2], wrong[3], wrong[4], wrong[5]);
    return {pass, buf};
}

Outcome ac8() {
    const auto c = load_config(config_path("thermal_sweep.ini"));
    const auto r = run_sweep(c);
    std::vector<StageLabel> seq;
    bool rows_ok = true, sigma_pos = true, eta_up = true, eta_below = true;
    double prev_eta = -std::numeric_limits<double>::infinity();
    double max_eta = 0.0;
    for (const auto& row : r.rows) {
        if (!row.ok()) {
            rows_ok = false;
            continue;
        }
        sigma_pos = sigma_pos && row.sigma > 0.0;
        if (*row.stage != StageLabel::Boundary && (seq.empty() || seq.back() != *row.stage)) seq.push_back(*row.stage);
        if (row.q_C > 0.0 && row.eta) {
            eta_up = eta_up && *row.eta > prev_eta;
            prev_eta = *row.eta;
            eta_below = eta_below && *row.eta < 2.0 / 15.0;
            max_eta = std::max(max_eta, *row.eta);
        }
    }
    const std::vector<StageLabel> want{StageLabel::Stage1, StageLabel::Stage2, StageLabel::Stage3, StageLabel::Stage4};
    std::string s;
    for (auto st : seq) s += std::string(s.empty() ? "" : "->") + std::string(to_string(st));
    const bool ok = rows_ok && seq == want && eta_up && eta_below && sigma_pos;
    return {ok, "stages " + s + fmt(", max eta %.6f", max_eta) + (eta_up ? ", eta increasing" : ", eta not monotone") +
                    (sigma_pos ? ", sigma > 0" : ", sigma <= 0 somewhere") + (rows_ok ? "" : ", failed rows")};
}

Outcome ac9() {
    const auto c = load_config(config_path("census.ini"));
    std::set<std::string> cooling;
    for (const auto& row : scan_filters(c, ScanMode::SingleChannel))
        if (row.cools) cooling.insert(compact_label(row.filter));
    const std::set<std::string> expect{"H3R2C1", "H2R1C3", "H1R3C2", "H2R2C2", "H3R3C3", "H1R1C1"};
    std::string s;
    for (const auto& x : cooling) s += (s.empty() ? "" : " ") + x;
    return {cooling == expect, std::to_string(cooling.size()) + " cooling configs: " + s};
}

Outcome ac10() {
    std::mt19937_64 rng(1010);
    const auto filters = all_partial_filters();
    double eq_cur = 0.0, eq_sigma = 0.0, gibbs = 0.0;
    for (int k = 0; k < 20; ++k) {
        const auto d = oracle::random_draw(rng);
        const double T = d.temps.room;
        const FilterConfig f = k < 10 ? FilterConfig::all() : filters[static_cast<std::size_t>(rng() % filters.size())];
        const auto gen = build_generator(d.params, f, {T, T, T}, BackgroundSpec::thermal(T, 0.05));
        const auto set = steady_states_numeric(gen);
        const auto rep = make_report(gen, set.states[0].rho);
        for (const auto& dc : rep.per_dissipator) eq_cur = std::max(eq_cur, std::abs(dc.value));
        eq_sigma = std::max(eq_sigma, std::abs(rep.sigma));
        if (k < 10) {
            const auto plain = build_generator(d.params, FilterConfig::all(), {T, T, T});
            const auto s = steady_states_numeric(plain);
            gibbs = std::max(gibbs, (s.states[0].rho.matrix() - oracle::gibbs(plain.hamiltonian, T)).cwiseAbs().maxCoeff());
        }
    }

    double prop = 0.0;
    for (int k = 0; k < 5; ++k) {
        const auto d = oracle::random_draw(rng);
        const auto gen = build_generator(d.params, filters[static_cast<std::size_t>(rng() % filters.size())], d.temps,
                                         BackgroundSpec::thermal(d.temps.cold, 0.02));
        ComplexMatrix a = ComplexMatrix::Random(8, 8);
        ComplexMatrix m = a * a.adjoint();
        m /= m.trace();
        const auto r = propagate(make_density_matrix(m), gen, 50.0);
        prop = std::max({prop, std::abs(r.rho.matrix().trace() - Complex(1.0, 0.0)), hermiticity_defect(r.rho.matrix())});
    }

    double sigma_min = std::numeric_limits<double>::infinity(), wl = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const auto d = oracle::random_draw(rng);
        const auto& f = filters[static_cast<std::size_t>(rng() % filters.size())];
        BackgroundSpec bg;
        const int mode = static_cast<int>(rng() % 3);
        if (mode == 1) bg = BackgroundSpec::vacuum(0.02);
        if (mode == 2) bg = BackgroundSpec::thermal(0.5 * (d.temps.cold + d.temps.room), 0.02);
        const auto gen = build_generator(d.params, f, d.temps, bg);
        for (const auto& st : steady_states_numeric(gen).states) {
            const auto rep = make_report(gen, st.rho);
            const double s = bg.active() ? entropy_production(rep, d.temps, bg.temperature()) : rep.sigma;
            sigma_min = std::min(sigma_min, s);
        }
        if (k % 20 == 0) {
            const auto W = build_population_matrix(gen.dissipators).W;
            const ComplexMatrix Le = liouvillian_in_eigenbasis(gen);
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j)
                    wl = std::max(wl, std::abs(Le(population_slot(i), population_slot(j)) - W(i, j)));
        }
    }

    auto c = load_config(config_path("thermal_sweep.ini"));
    c.sweep->points = 40;
    const std::string a = sweep_csv(run_sweep(c, 1));
    const std::string b = sweep_csv(run_sweep(c, 4));
    const bool same = a == b;

    const bool ok = eq_cur <= 1e-12 && eq_sigma <= 1e-12 && gibbs <= 1e-10 && prop <= 1e-9 && sigma_min >= -1e-12 &&
                    wl <= 1e-12 && same;
    return {ok, fmt("equilibrium current %.2e sigma %.2e, ", eq_cur, eq_sigma) + fmt("Gibbs dev %.2e, ", gibbs) +
                    fmt("propagation defect %.2e, min sigma %.2e, W vs L %.2e", prop, sigma_min, wl) +
                    (same ? ", CSV byte-identical" : ", CSV differs")};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"AC1 eigensystem exactness", ac1},  {"AC2 four-branch reproduction", ac2},
        {"AC3 current identities", ac3},     {"AC4 efficiency values", ac4},
        {"AC5 cooling boundary", ac5},       {"AC6 vacuum background", ac6},
        {"AC7 three-channel closed form", ac7}, {"AC8 figure-level behavior", ac8},
        {"AC9 filter census", ac9},          {"AC10 property suite", ac10},
    };
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
