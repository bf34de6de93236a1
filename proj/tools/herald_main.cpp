// Command-line harness for the heralded-entanglement analysis library:
// state dumps, figure-style CSV sweeps, cache management, verification.
#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "herald/analysis.hpp"
#include "herald/entanglement.hpp"
#include "herald/heralding.hpp"

using namespace herald;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Common {
    double lambda = -1.0;
    double m_bar = -1.0;
    double g = 1.0;
    int n_max = -1;
    int n3_max = 300;
    std::string method = "hybrid";
    std::vector<double> etas;
    std::string pairs = "1,1;1,3;3,3;3,5";
    std::string out_path;
    std::string cache_path;
    int threads = 0;
    bool gnuplot = false;
};

double resolve_lambda(const Common& c) {
    if ((c.lambda >= 0.0) == (c.m_bar >= 0.0))
        throw CLI::ValidationError("exactly one of --lambda / --mbar must be given");
    return c.lambda >= 0.0 ? c.lambda : lambda_from_mean(c.m_bar);
}

SuccessMethod resolve_method(const Common& c) {
    if (c.method == "exact") return SuccessMethod::exact_truncated(c.n3_max);
    if (c.method == "rooftop") return SuccessMethod::rooftop();
    if (c.method == "hybrid") return SuccessMethod::hybrid(c.n3_max);
    throw CLI::ValidationError("--method must be exact, rooftop or hybrid");
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& s) {
    std::vector<std::pair<int, int>> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) {
        int a = 0, b = 0;
        if (std::sscanf(item.c_str(), "%d,%d", &a, &b) != 2)
            throw CLI::ValidationError("--pairs expects \"n1,n2;n1,n2;...\"");
        out.emplace_back(a, b);
    }
    if (out.empty()) throw CLI::ValidationError("--pairs is empty");
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open output file " + path);
    return f;
}

// Load the coefficient cache if present, build (and save) otherwise. Large
// tables are only built on explicit request so a typo cannot trigger an
// hour-long job.
CCoefficientTable obtain_table(const Common& c, int needed) {
    if (!c.cache_path.empty() && std::filesystem::exists(c.cache_path)) {
        CCoefficientTable t = CCoefficientTable::load_csv(c.cache_path);
        if (t.n3_max() >= needed) return t;
        std::cerr << "cache " << c.cache_path << " holds n3 <= " << t.n3_max()
                  << " but n3 <= " << needed << " is required\n";
    }
    if (needed > 400)
        throw std::runtime_error(
            "coefficient cache missing for n3_max = " + std::to_string(needed) +
            "; run `herald build-cache --n3max " + std::to_string(needed) +
            " --cache <path>` first");
    CCoefficientTable t = CCoefficientTable::build(needed);
    if (!c.cache_path.empty()) t.save_csv(c.cache_path);
    return t;
}

void write_gnuplot(const std::string& csv, const std::string& title, int ycols,
                   bool logx = false) {
    std::ofstream f(csv + ".gp");
    f << "set datafile separator ','\nset key autotitle columnhead\n";
    if (logx) f << "set logscale xy\n";
    f << "set title '" << title << "'\nplot ";
    for (int i = 0; i < ycols; ++i)
        f << "'" << csv << "' using 1:" << i + 2 << " with lines" << (i + 1 < ycols ? ", " : "\n");
}

int run_epr(const Common& c) {
    const double lam = resolve_lambda(c);
    const int n = c.n_max >= 0 ? c.n_max : truncation_level(lam, 1e-12);
    PhotonVector v = epr_state(EprParams::from_lambda(lam), n);
    auto f = open_out(c.out_path);
    f << "m,amplitude\n";
    for (const auto& [k, a] : v.sorted_entries())
        f << OccupationTuple::unpack(k).m_minus << ',' << fmt(a.real()) << "\n";
    std::cout << "epr: lambda=" << lam << " n_max=" << n << " norm2=" << fmt(v.norm2())
              << " tail=" << fmt(truncation_tail_bound(lam, n)) << "\n";
    return kExitOk;
}

int run_evolve(const Common& c, double t_max, int t_steps) {
    const double lam = resolve_lambda(c);
    const int n = c.n_max >= 0 ? c.n_max : truncation_level(lam, 1e-12);
    DotParams p;
    p.g = c.g;
    p.lambda = lam;
    auto f = open_out(c.out_path);
    f << "t,norm2,spin,tminus,tplus\n";
    for (int i = 0; i <= t_steps; ++i) {
        const double t = t_max * i / t_steps;
        DotState s = jc_evolve(p, t, n);
        double spin = 0.0, tm = 0.0, tp = 0.0;
        for (const auto& [k, a] : s.entries()) {
            const DotLevel l = DotLevel((k >> 32) & 3);
            const double w = std::norm(a);
            if (is_trion(l))
                (l == DotLevel::Tminus ? tm : tp) += w;
            else
                spin += w;
        }
        f << fmt(t) << ',' << fmt(spin + tm + tp) << ',' << fmt(spin) << ',' << fmt(tm) << ','
          << fmt(tp) << "\n";
    }
    if (c.gnuplot) write_gnuplot(c.out_path, "sector norms vs t", 4);
    return kExitOk;
}

int run_prob_grid(const Common& c, double mb_min, double mb_max, int steps) {
    auto pairs = parse_pairs(c.pairs);
    int needed = 1;
    for (auto [a, b] : pairs) {
        if (!(a & 1) || !(b & 1)) throw CLI::ValidationError("prob-grid pairs must be odd-odd");
        needed = std::max(needed, (a + b) / 2);
    }
    CCoefficientTable table = obtain_table(c, std::max(needed, 40));
    auto f = open_out(c.out_path);
    f << "mbar";
    for (auto [a, b] : pairs) f << ",P" << a << "_" << b;
    f << "\n";
    for (int i = 0; i <= steps; ++i) {
        const double mb = mb_min + (mb_max - mb_min) * i / steps;
        f << fmt(mb);
        for (auto [a, b] : pairs) f << ',' << fmt(prob_avg(a, b, mb, table));
        f << "\n";
    }
    if (c.gnuplot) write_gnuplot(c.out_path, "time-averaged outcome probabilities", int(pairs.size()));
    return kExitOk;
}

int run_success(const Common& c, double scaled_min, double scaled_max, int steps) {
    std::vector<double> etas = c.etas.empty() ? std::vector<double>{1.0, 0.1, 0.01} : c.etas;
    CCoefficientTable table = obtain_table(c, c.n3_max);
    const SuccessMethod method = resolve_method(c);
    // anchor: the eta = 1 curve at m_bar = 10; every other curve is rescaled
    // so its value at scaled m_bar = 1 matches
    const double target = prob_succ(10.0, {1.0}, method, &table);
    std::vector<double> scale(etas.size());
    for (std::size_t i = 0; i < etas.size(); ++i) {
        if (etas[i] == 1.0) {
            scale[i] = 10.0;
            continue;
        }
        double lo = 1.0, hi = 1e7;
        while (hi / lo > 1.0 + 1e-10) {
            const double mid = std::sqrt(lo * hi);
            (prob_succ(mid, {etas[i]}, method, &table) < target ? lo : hi) = mid;
        }
        scale[i] = std::sqrt(lo * hi);
    }
    auto f = open_out(c.out_path);
    f << "mbar_scaled";
    for (double e : etas) f << ",eta" << e;
    f << "\n";
    for (int i = 0; i <= steps; ++i) {
        const double v = scaled_min * std::pow(scaled_max / scaled_min, double(i) / steps);
        f << fmt(v);
        for (std::size_t j = 0; j < etas.size(); ++j)
            f << ',' << fmt(prob_succ(v * scale[j], {etas[j]}, method, &table));
        f << "\n";
    }
    std::cout << "anchors:";
    for (std::size_t j = 0; j < etas.size(); ++j)
        std::cout << " eta=" << etas[j] << " scale=" << fmt(scale[j]);
    std::cout << "\n";
    if (c.gnuplot) write_gnuplot(c.out_path, "success probability vs scaled mean photons", int(etas.size()), true);
    return kExitOk;
}

int run_mhalf(const Common& c, double eta_min, double eta_max, int steps) {
    CCoefficientTable table = obtain_table(c, c.n3_max);
    const SuccessMethod method = resolve_method(c);
    auto f = open_out(c.out_path);
    f << "eta,m_half,eta_m_half\n";
    for (int i = 0; i <= steps; ++i) {
        const double eta = eta_min * std::pow(eta_max / eta_min, double(i) / steps);
        const double mh = m_half({eta}, table, method);
        f << fmt(eta) << ',' << fmt(mh) << ',' << fmt(eta * mh) << "\n";
    }
    if (c.gnuplot) write_gnuplot(c.out_path, "m_half vs eta", 2, true);
    return kExitOk;
}

int run_zeta(const Common& c, double mb_min, double mb_max, int steps) {
    CCoefficientTable table = obtain_table(c, c.n3_max);
    auto f = open_out(c.out_path);
    f << "mbar,zeta\n";
    for (int i = 0; i <= steps; ++i) {
        const double mb = mb_min + (mb_max - mb_min) * i / steps;
        f << fmt(mb) << ',' << fmt(zeta(mb, table)) << "\n";
    }
    ZetaMax zm = zeta_max(table);
    std::cout << "zeta max " << fmt(zm.value) << " at mbar " << fmt(zm.m_bar)
              << " (single-photon reference: 1/8)\n";
    if (c.gnuplot) write_gnuplot(c.out_path, "first-order loss coefficient", 1);
    return kExitOk;
}

int run_coeffs(const Common& c, std::vector<int> rows) {
    if (rows.empty()) rows = {100, 200, 300};
    int needed = 0;
    for (int r : rows) needed = std::max(needed, r);
    CCoefficientTable table = obtain_table(c, needed);
    auto f = open_out(c.out_path);
    f << "n3,n1,n1_over_n3,C,C_over_D\n";
    for (int n3 : rows) {
        const double D = CCoefficientTable::d_closed(n3);
        for (int n1 = 1; n1 <= 2 * n3 - 1; n1 += 2) {
            const double cv = table.c(std::min(n1, 2 * n3 - n1), std::max(n1, 2 * n3 - n1));
            f << n3 << ',' << n1 << ',' << fmt(double(n1) / n3) << ',' << fmt(cv) << ','
              << fmt(cv / D) << "\n";
        }
    }
    if (table.n3_max() >= 300) {
        auto [alpha, beta] = table.fit_sigma(100, 300);
        std::cout << "sigma fit over n3 in [100,300]: alpha=" << fmt(alpha)
                  << " beta=" << fmt(beta) << "\n";
    }
    return kExitOk;
}

int run_false_positive(const Common& c, double mb_min, double mb_max, int steps) {
    std::vector<double> etas = c.etas.empty() ? std::vector<double>{0.1, 0.5, 1.0} : c.etas;
    BsElementTable table;
    auto f = open_out(c.out_path);
    f << "mbar,eta,total_positive,true_positive,false_positive,fp_over_tp\n";
    for (int i = 0; i <= steps; ++i) {
        const double mb = mb_min + (mb_max - mb_min) * i / steps;
        for (double eta : etas) {
            FalsePositiveResult r = prob_false_positive(mb, {eta}, table, 1e-9);
            f << fmt(mb) << ',' << fmt(eta) << ',' << fmt(r.total_positive) << ','
              << fmt(r.true_positive) << ',' << fmt(r.false_positive) << ','
              << fmt(r.true_positive > 0 ? r.false_positive / r.true_positive : 0.0) << "\n";
        }
    }
    return kExitOk;
}

int run_rate(double collection, double psucc, double rep_rate_hz) {
    if (collection <= 0.0 || psucc <= 0.0 || rep_rate_hz <= 0.0)
        throw CLI::ValidationError("rate-estimate inputs must be positive");
    if (psucc > 1.0 / 16.0)
        throw CLI::ValidationError("success probability cannot exceed 1/16");
    const double per_min = collection * collection * psucc * rep_rate_hz * 60.0;
    std::cout << "pairs per minute: " << fmt(per_min) << "\n";
    return kExitOk;
}

int run_verify(const Common& c) {
    int failures = 0;
    auto report = [&](const char* name, bool ok) {
        std::cout << (ok ? "[ ok ] " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };

    BsElementTable table;
    table.ensure(150);
    report("element tables unitary to 1e-10 (n <= 150)", table.unitarity_defect() < 1e-10);

    bool spot = true;
    for (auto [n, k, l] : {std::tuple{60, 31, 17}, {150, 75, 10}, {150, 2, 149}})
        spot = spot && std::abs(table.element(n, k, l) - bs_element(n, k, l)) < 1e-12;
    report("table elements match the direct evaluation", spot);

    CCoefficientTable ct = CCoefficientTable::build(50);
    bool sum_rule = true;
    for (int n3 = 1; n3 <= 50; ++n3)
        sum_rule = sum_rule &&
                   std::abs(ct.row_sum(n3) - CCoefficientTable::d_closed(n3)) < 1e-10;
    report("coefficient sum rule (n3 <= 50)", sum_rule);
    report("C(1,1) = 3/32", std::abs(ct.c(1, 1) - 3.0 / 32.0) < 1e-12);

    bool facts = true;
    for (auto [n1, n2] : {std::pair{1, 1}, {1, 3}, {3, 3}}) {
        const double mb = 0.9;
        facts = facts && std::abs(time_averaged_outcome_probability(n1, n2, mb, table) -
                                  ct.c(n1, n2) * f_factor(n1, n2, mb)) < 1e-12;
    }
    report("time averages factorize into C x f", facts);

    bool gauss = true;
    for (double r = 0.0; r <= 1.5; r += 0.3) {
        auto rep = validate_gaussian(standard_covariance(r));
        gauss = gauss && rep.pure && rep.physical && rep.epr_form;
    }
    report("standard covariance passes purity/physicality/form", gauss);

    DotParams p;
    p.lambda = 0.6;
    const int nl = truncation_level(0.6, 1e-12);
    const double norm0 = jc_evolve(p, 0.0, nl).norm2();
    bool unit = true;
    for (double t : {0.7, 3.3, 11.0})
        unit = unit && std::abs(jc_evolve(p, t, nl).norm2() - norm0) < 1e-12;
    report("evolution preserves the truncated norm", unit);

    OutcomeResult oo = heralded_outcome(p, p, 1.1, 1, 1, table);
    report("odd-odd heralds the Bell state", std::abs(fidelity_to_bell(oo) - 1.0) < 1e-10);
    auto ee = even_even_check(2, 2, 1.0, 1.0, table);
    report("even-even weights satisfy the separability inequality", ee.inequality_holds);

    const double ideal = prob_succ_ideal(1.0);
    CCoefficientTable small = CCoefficientTable::build(100);
    bool eta1 = std::abs(prob_succ(1.0, {1.0}, SuccessMethod::hybrid(100), &small) - ideal) < 1e-10;
    report("eta = 1 success probability reduces to the closed form", eta1);

    std::cout << (failures == 0 ? "verification passed\n" : "verification FAILED\n");
    return failures == 0 ? kExitOk : kExitVerifyFailed;
}

int run_build_cache(const Common& c) {
    if (c.cache_path.empty()) throw CLI::ValidationError("build-cache requires --cache");
    std::cout << "building coefficient table to n3 = " << c.n3_max << " ...\n";
    const double t0 = omp_get_wtime();
    CCoefficientTable t = CCoefficientTable::build(c.n3_max);
    t.save_csv(c.cache_path);
    std::cout << "done in " << omp_get_wtime() - t0 << " s, wrote " << c.cache_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heralded-entanglement simulator and analysis tool"};
    app.set_config("--config", "", "flat key=value configuration file");
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand name

    Common c;
    app.add_option("--lambda", c.lambda, "squeeze weight in [0,1)");
    app.add_option("--mbar", c.m_bar, "mean photons per mode");
    app.add_option("--g", c.g, "coupling constant (rad/time)");
    app.add_option("--nmax", c.n_max, "photon-number truncation (default: tail < 1e-12)");
    app.add_option("--n3max", c.n3_max, "coefficient-table extent");
    app.add_option("--method", c.method, "success-probability method: exact|rooftop|hybrid");
    app.add_option("--eta", c.etas, "detector efficiency (repeatable)");
    app.add_option("--pairs", c.pairs, "outcome pairs, e.g. \"1,1;1,3;3,3\"");
    app.add_option("--out", c.out_path, "output CSV path");
    app.add_option("--cache", c.cache_path, "coefficient cache CSV path");
    app.add_option("--threads", c.threads, "worker threads (default: machine parallelism)");
    app.add_flag("--gnuplot", c.gnuplot, "also write a gnuplot script next to the CSV");

    auto* epr = app.add_subcommand("epr", "dump the two-mode squeezed input state");
    auto* evolve = app.add_subcommand("evolve", "sector norms of one driven dot vs time");
    double t_max = 20.0, t_single = -1.0;
    int t_steps = 200;
    evolve->add_option("--t", t_single, "single evaluation time (overrides the grid)");
    evolve->add_option("--t-max", t_max, "largest g t");
    evolve->add_option("--t-steps", t_steps, "grid points");
    auto* probgrid = app.add_subcommand("prob-grid", "time-averaged outcome probabilities vs mbar");
    double mb_min = 0.0, mb_max = 10.0;
    int mb_steps = 200;
    probgrid->add_option("--mbar-min", mb_min);
    probgrid->add_option("--mbar-max", mb_max);
    probgrid->add_option("--mbar-steps", mb_steps);
    auto* success = app.add_subcommand("success", "success probability vs scaled mbar per eta");
    double sc_min = 0.05, sc_max = 10.0;
    int sc_steps = 120;
    success->add_option("--scaled-min", sc_min);
    success->add_option("--scaled-max", sc_max);
    success->add_option("--scaled-steps", sc_steps);
    auto* mhalf = app.add_subcommand("mhalf", "characteristic mean photon number vs eta");
    double eta_min = 1e-3, eta_max = 1.0;
    int eta_steps = 30;
    mhalf->add_option("--eta-min", eta_min);
    mhalf->add_option("--eta-max", eta_max);
    mhalf->add_option("--eta-steps", eta_steps);
    auto* zt = app.add_subcommand("zeta", "first-order loss coefficient vs mbar");
    double z_min = 0.0, z_max = 4.0;
    int z_steps = 200;
    zt->add_option("--mbar-min", z_min);
    zt->add_option("--mbar-max", z_max);
    zt->add_option("--mbar-steps", z_steps);
    auto* coeffs = app.add_subcommand("coeffs", "normalized coefficient rows (data collapse)");
    std::vector<int> rows;
    coeffs->add_option("--n3", rows, "rows to dump (default 100 200 300)");
    auto* fp = app.add_subcommand("false-positive", "coincident-click bookkeeping vs mbar, eta");
    double f_min = 0.5, f_max = 5.0;
    int f_steps = 9;
    fp->add_option("--mbar-min", f_min);
    fp->add_option("--mbar-max", f_max);
    fp->add_option("--mbar-steps", f_steps);
    auto* rate = app.add_subcommand("rate-estimate", "entanglement generation rate");
    double collection = 0.05, psucc = 1.0 / 32.0, rep_hz = 1.0 / 1.3e-6;
    rate->add_option("--collection", collection, "per-dot collection efficiency");
    rate->add_option("--psucc", psucc, "success probability");
    rate->add_option("--rep-rate", rep_hz, "repetition rate (Hz)");
    auto* verify = app.add_subcommand("verify", "run the invariant suites");
    auto* build = app.add_subcommand("build-cache", "build and store the coefficient table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (c.threads > 0) omp_set_num_threads(c.threads);

    try {
        auto need_out = [&]() {
            if (c.out_path.empty()) throw CLI::ValidationError("--out is required");
        };
        if (epr->parsed()) {
            need_out();
            return run_epr(c);
        }
        if (evolve->parsed()) {
            need_out();
            if (t_single >= 0.0) return run_evolve(c, t_single, 1);
            return run_evolve(c, t_max, t_steps);
        }
        if (probgrid->parsed()) {
            need_out();
            return run_prob_grid(c, mb_min, mb_max, mb_steps);
        }
        if (success->parsed()) {
            need_out();
            return run_success(c, sc_min, sc_max, sc_steps);
        }
        if (mhalf->parsed()) {
            need_out();
            return run_mhalf(c, eta_min, eta_max, eta_steps);
        }
        if (zt->parsed()) {
            need_out();
            return run_zeta(c, z_min, z_max, z_steps);
        }
        if (coeffs->parsed()) {
            need_out();
            return run_coeffs(c, rows);
        }
        if (fp->parsed()) {
            need_out();
            return run_false_positive(c, f_min, f_max, f_steps);
        }
        if (rate->parsed()) return run_rate(collection, psucc, rep_hz);
        if (verify->parsed()) return run_verify(c);
        if (build->parsed()) return run_build_cache(c);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
