#include "herald/analysis.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "herald/trig.hpp"

namespace herald {

namespace {

void require_odd_pair(int n1, int n2) {
    if (n1 < 1 || n2 < 1 || !(n1 & 1) || !(n2 & 1))
        throw std::invalid_argument("n1 and n2 must be odd and >= 1");
}

void require_eta(DetectorModel d) {
    if (!(d.eta > 0.0) || d.eta > 1.0)
        throw std::domain_error("detector efficiency must be in (0,1]");
}

// sum_{n3 > L} (n3+2)/16 x^{n3+1} / (m+1)^2, closed form. Upper bound on any
// neglected remainder since C rows sum to at most (n3+2)/16 and the
// efficiency factors are <= 1.
double series_tail_bound(int L, double x, double m_bar) {
    const int K = L + 1;
    const double xK = std::pow(x, K);
    const double t1 = xK * (K * (1.0 - x) + x) / ((1.0 - x) * (1.0 - x));  // sum n3 x^n3
    const double t0 = xK / (1.0 - x);                                      // sum x^n3
    return x * (t1 + 2.0 * t0) / (16.0 * (m_bar + 1.0) * (m_bar + 1.0));
}

// Partial sums over odd j in [lo, hi]: sum u^j and sum j u^j.
double sum_geo_odd(double u, int lo, int hi) {
    if (hi < lo) return 0.0;
    const int c = (hi - lo) / 2 + 1;
    const double t = u * u;
    return std::pow(u, lo) * (1.0 - std::pow(t, c)) / (1.0 - t);
}
double sum_lin_odd(double u, int lo, int hi) {
    if (hi < lo) return 0.0;
    const int c = (hi - lo) / 2 + 1;
    const double t = u * u;
    const double tc = std::pow(t, c);
    const double G = (1.0 - tc) / (1.0 - t);
    const double dG = (-double(c) * tc / t * (1.0 - t) + (1.0 - tc)) / ((1.0 - t) * (1.0 - t));
    return std::pow(u, lo) * (lo * G + 2.0 * t * dG);
}

// Rooftop inner sum: sum over odd n1 of roof(n1) (1-u^n1)(1-u^n2).
double rooftop_inner(int n3, double u, const RooftopLaw& law) {
    const double D = CCoefficientTable::d_closed(n3);
    if (u == 0.0) return D;
    if (n3 == 1) return D * (1.0 - u) * (1.0 - u);
    if (n3 == 2) return D * (1.0 - u) * (1.0 - u * u * u);
    const auto [a, b] = rooftop_ab(n3, law);
    double s;
    if (n3 & 1) {
        s = a * sum_lin_odd(u, 1, n3) + b * sum_geo_odd(u, 1, n3);
        s += (2.0 * a * n3 + b) * sum_geo_odd(u, n3 + 2, 2 * n3 - 1) -
             a * sum_lin_odd(u, n3 + 2, 2 * n3 - 1);
    } else {
        s = a * sum_lin_odd(u, 1, n3 - 1) + b * sum_geo_odd(u, 1, n3 - 1);
        s += (2.0 * a * n3 + b) * sum_geo_odd(u, n3 + 1, 2 * n3 - 1) -
             a * sum_lin_odd(u, n3 + 1, 2 * n3 - 1);
    }
    return D * (1.0 + std::pow(u, 2 * n3)) - 2.0 * s;
}

// Exact inner sum from a table row.
double exact_inner(int n3, double u, const CCoefficientTable& table) {
    double s = 0.0;
    for (int n1 = 1; n1 <= 2 * n3 - 1; n1 += 2) {
        const double cv = table.c(std::min(n1, 2 * n3 - n1), std::max(n1, 2 * n3 - n1));
        s += cv * (1.0 - std::pow(u, n1)) * (1.0 - std::pow(u, 2 * n3 - n1));
    }
    return s;
}

}  // namespace

double f_factor(int n1, int n2, double m_bar) {
    require_odd_pair(n1, n2);
    if (m_bar < 0.0) throw std::domain_error("f_factor: m_bar must be >= 0");
    if (m_bar == 0.0) return 0.0;
    const int n3 = (n1 + n2) / 2;
    const double x = m_bar / (m_bar + 1.0);
    return std::pow(x, n3 + 1) / ((m_bar + 1.0) * (m_bar + 1.0));
}

double c_coefficient(int n1, int n2, BsElementTable& table) {
    require_odd_pair(n1, n2);
    const int n3 = (n1 + n2) / 2;
    table.ensure(n3);
    const double* E = table.level(n3);
    const int w = n3 + 1;
    const int klo = std::max(n1 - n3, 0), khi = std::min(n1, n3);
    std::vector<double> A(std::size_t(n3) * (khi - klo + 1));
    const int nk = khi - klo + 1;
    for (int m = 1; m <= n3; ++m)
        for (int j = 0; j < nk; ++j)
            A[std::size_t(m - 1) * nk + j] =
                E[std::size_t(m - 1) * w + klo + j] * E[std::size_t(m) * w + n1 - klo - j];
    double acc = 0.0;
    for (int m = 1; m <= n3; ++m) {
        const double* am = &A[std::size_t(m - 1) * nk];
        const double* as = &A[std::size_t(n3 - m) * nk];
        double bmm = 0.0, bms = 0.0;
        for (int j = 0; j < nk; ++j) {
            bmm += am[j] * am[j];
            bms += am[j] * as[j];
        }
        acc += bmm + bms;
    }
    acc /= 8.0;
    if (n3 & 1) {
        const double* ac = &A[std::size_t((n3 + 1) / 2 - 1) * nk];
        double bcc = 0.0;
        for (int j = 0; j < nk; ++j) bcc += ac[j] * ac[j];
        acc -= bcc / 16.0;
    }
    return acc;
}

double prob_avg(int n1, int n2, double m_bar, const CCoefficientTable& table) {
    require_odd_pair(n1, n2);
    return table.c(n1, n2) * f_factor(n1, n2, m_bar);
}

double prob_succ_ideal(double m_bar) {
    if (m_bar < 0.0) throw std::domain_error("prob_succ_ideal: m_bar must be >= 0");
    if (m_bar == 0.0) return 0.0;
    const double x = m_bar / (m_bar + 1.0);
    return (1.0 / 32.0) * (4.0 * m_bar + 3.0) / (2.0 * m_bar + 1.0) * x * x;
}

SeriesEval prob_succ_ideal_series(double m_bar, double tail_rel) {
    if (m_bar < 0.0) throw std::domain_error("prob_succ_ideal_series: m_bar must be >= 0");
    SeriesEval ev;
    if (m_bar == 0.0) return ev;
    const double x = m_bar / (m_bar + 1.0);
    const double pref = 1.0 / ((m_bar + 1.0) * (m_bar + 1.0));
    double xp = x * x;  // x^{n3+1}
    for (int n3 = 1;; ++n3) {
        ev.value += pref * CCoefficientTable::d_closed(n3) * xp;
        ev.n3_used = n3;
        ev.tail_bound = series_tail_bound(n3, x, m_bar);
        if (n3 > 4 && ev.tail_bound <= tail_rel * ev.value) break;
        if (n3 > 100000000) throw std::runtime_error("ideal series failed to converge");
        xp *= x;
    }
    return ev;
}

std::map<int, double> detector_thinning(const std::map<int, double>& dist, DetectorModel d) {
    require_eta(d);
    std::map<int, double> out;
    for (const auto& [n, p] : dist) {
        if (n < 0) throw std::invalid_argument("detector_thinning: negative count");
        // binomial(n, m) eta^m (1-eta)^{n-m}, built multiplicatively
        double w = std::pow(1.0 - d.eta, n);
        if (d.eta == 1.0) {
            out[n] += p;
            continue;
        }
        const double r = d.eta / (1.0 - d.eta);
        for (int m = 0; m <= n; ++m) {
            out[m] += p * w;
            if (m < n) w *= r * double(n - m) / double(m + 1);
        }
    }
    return out;
}

std::pair<double, double> rooftop_ab(int n3, const RooftopLaw& law) {
    const double D = CCoefficientTable::d_closed(n3);
    if (n3 < 1) throw std::invalid_argument("rooftop_ab: n3 must be >= 1");
    if (n3 == 1) return {0.0, D};
    if (n3 == 2) return {0.0, D / 2.0};
    const double sig = law.alpha * n3 + law.beta;
    const double s2D = sig * sig * D;
    double e1a, e1b, P2, P3;
    if (n3 & 1) {
        const double M = (n3 - 1) / 2;
        e1a = (double(n3) * n3 + 1.0) / 2.0;
        e1b = n3;
        P2 = (4.0 / 3.0) * M * (M + 1) * (2 * M + 1);
        P3 = 4.0 * M * M * (M + 1) * (M + 1);
    } else {
        const double M = n3 / 2;
        e1a = double(n3) * n3 / 2.0;
        e1b = n3;
        P2 = 2.0 * M * (2 * M - 1) * (2 * M + 1) / 3.0;
        P3 = 2.0 * M * M * (2.0 * M * M - 1.0);
    }
    const double e2a = n3 * P2 - P3, e2b = P2;
    const double det = e1a * e2b - e1b * e2a;
    return {(D * e2b - e1b * s2D) / det, (e1a * s2D - e2a * D) / det};
}

SeriesEval prob_succ_detail(double m_bar, DetectorModel d, SuccessMethod method,
                            const CCoefficientTable* table, double tail_abs,
                            const RooftopLaw& law) {
    require_eta(d);
    if (m_bar < 0.0) throw std::domain_error("prob_succ: m_bar must be >= 0");
    SeriesEval ev;
    if (m_bar == 0.0) return ev;

    const bool needs_table = method.kind != SuccessMethod::Kind::Rooftop;
    if (needs_table && table == nullptr)
        throw std::invalid_argument("prob_succ: method requires a coefficient table");
    int exact_cap = 0;
    if (needs_table) exact_cap = std::min(method.n3_limit, table->n3_max());

    const double x = m_bar / (m_bar + 1.0);
    const double u = 1.0 - d.eta;
    const double pref = 1.0 / ((m_bar + 1.0) * (m_bar + 1.0));
    double xp = x * x;
    for (int n3 = 1;; ++n3) {
        double inner;
        if (method.kind == SuccessMethod::Kind::Rooftop)
            inner = rooftop_inner(n3, u, law);
        else if (n3 <= exact_cap)
            inner = exact_inner(n3, u, *table);
        else if (method.kind == SuccessMethod::Kind::Hybrid)
            inner = rooftop_inner(n3, u, law);
        else {  // ExactTruncated ran out of exact rows
            ev.tail_bound = series_tail_bound(n3 - 1, x, m_bar);
            break;
        }
        ev.value += pref * xp * inner;
        ev.n3_used = n3;
        ev.tail_bound = series_tail_bound(n3, x, m_bar);
        if (n3 > 4 && ev.tail_bound <= std::max(tail_abs, 1e-14 * ev.value)) break;
        xp *= x;
        if (n3 > 100000000) throw std::runtime_error("prob_succ series failed to converge");
    }
    return ev;
}

double prob_succ(double m_bar, DetectorModel d, SuccessMethod method,
                 const CCoefficientTable* table) {
    return prob_succ_detail(m_bar, d, method, table).value;
}

double m_half(DetectorModel d, const CCoefficientTable& table, SuccessMethod method,
              double rel_tol) {
    require_eta(d);
    const double target = 1.0 / 32.0;
    double lo = 1e-3, hi = 10.0 / d.eta;
    if (prob_succ(lo, d, method, &table) >= target || prob_succ(hi, d, method, &table) <= target)
        throw std::runtime_error("m_half: bracket failed");
    while ((hi - lo) > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (prob_succ(mid, d, method, &table) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double zeta(double m_bar, const CCoefficientTable& table) {
    if (m_bar < 0.0) throw std::domain_error("zeta: m_bar must be >= 0");
    if (m_bar == 0.0) return 0.0;
    const double x = m_bar / (m_bar + 1.0);
    const double pref = 1.0 / ((m_bar + 1.0) * (m_bar + 1.0));
    double s = 0.0, xp = x * x;
    for (int n3 = 1; n3 <= table.n3_max(); ++n3) {
        s += table.c(1, 2 * n3 - 1) * xp;
        // rows beyond the table are bounded by C <= 3/32
        if (n3 > 4 && (3.0 / 32.0) * xp * x / (1.0 - x) < 1e-15 * s) {
            xp = 0.0;
            break;
        }
        xp *= x;
    }
    if (xp != 0.0 && (3.0 / 32.0) * xp / (1.0 - x) > 1e-12 * s)
        throw std::runtime_error("zeta: coefficient table too small for this m_bar");
    return 2.0 * pref * s;
}

ZetaMax zeta_max(const CCoefficientTable& table, double lo, double hi) {
    // golden-section on the unimodal bump
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = zeta(c, table), fd = zeta(d, table);
    while (b - a > 1e-9) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = zeta(c, table);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = zeta(d, table);
        }
    }
    const double m = 0.5 * (a + b);
    return {zeta(m, table), m};
}

double time_averaged_outcome_probability(int n1, int n2, double m_bar, BsElementTable& table) {
    if (n1 < 0 || n2 < 0) throw std::invalid_argument("negative count");
    if (m_bar < 0.0) throw std::domain_error("m_bar must be >= 0");
    if (m_bar == 0.0) return (n1 == 0 && n2 == 0) ? 1.0 : 0.0;
    const double lam2 = m_bar / (m_bar + 1.0);
    const double om = 1.0 / (m_bar + 1.0);  // 1 - lambda^2
    const int T = n1 + n2;

    double total = 0.0;
    // holes: 0 = none (cos branch), 1 = sigma- hole, 2 = sigma+ hole
    for (int h1 = 0; h1 < 3; ++h1) {
        for (int h2 = 0; h2 < 3; ++h2) {
            const int holes = (h1 != 0) + (h2 != 0);
            if ((T + holes) % 2 != 0) continue;
            const int S = (T + holes) / 2;  // m + mu
            const int nsm = S - (h1 == 1) - (h2 == 1);
            const int nsp = S - (h1 == 2) - (h2 == 2);
            if (nsm < 0 || nsp < 0 || nsm + nsp != T) continue;
            const int mlo = (h1 != 0) ? 1 : 0;
            const int mhi = S - ((h2 != 0) ? 1 : 0);
            if (mhi < mlo) continue;
            const int klo = std::max(0, n1 - nsp), khi = std::min(n1, nsm);
            if (khi < klo) continue;
            table.ensure(std::max(nsm, nsp));
            const double* Em = table.level(nsm);
            const double* Ep = table.level(nsp);
            const int wm = nsm + 1, wp = nsp + 1;
            const int nm = mhi - mlo + 1, nk = khi - klo + 1;

            // M[m][k] with the path-a occupations (m - [h1==1], m - [h1==2])
            std::vector<double> M(std::size_t(nm) * nk);
            for (int m = mlo; m <= mhi; ++m) {
                const int am = m - (h1 == 1);  // path-a sigma- photons
                const int ap = m - (h1 == 2);
                double* row = &M[std::size_t(m - mlo) * nk];
                for (int k = klo; k <= khi; ++k)
                    row[k - klo] = Em[std::size_t(am) * wm + k] * Ep[std::size_t(ap) * wp + (n1 - k)];
            }

            // resonant time averages: diagonal m'=m and swap m'=S-m
            const bool s1 = h1 != 0, s2 = h2 != 0;  // sin or cos per dot
            double cbar = 0.0;
            for (int m = mlo; m <= mhi; ++m) {
                const double* row = &M[std::size_t(m - mlo) * nk];
                double gd = 0.0;
                for (int j = 0; j < nk; ++j) gd += row[j] * row[j];
                TrigFactor diag[4] = {{s1, m}, {s2, S - m}, {s1, m}, {s2, S - m}};
                cbar += gd * trig_product_mean(diag);
                const int msw = S - m;
                if (msw != m && msw >= mlo && msw <= mhi) {
                    const double* rsw = &M[std::size_t(msw - mlo) * nk];
                    double gs = 0.0;
                    for (int j = 0; j < nk; ++j) gs += row[j] * rsw[j];
                    TrigFactor sw[4] = {{s1, m}, {s2, S - m}, {s1, msw}, {s2, S - msw}};
                    cbar += gs * trig_product_mean(sw);
                }
            }
            const double pref = ((h1 != 0) ? 0.5 : 1.0) * ((h2 != 0) ? 0.5 : 1.0);
            total += pref * om * om * std::pow(lam2, S) * cbar;
        }
    }
    return total;
}

FalsePositiveResult prob_false_positive(double m_bar, DetectorModel d, BsElementTable& table,
                                        double coverage_eps) {
    require_eta(d);
    if (m_bar < 0.0) throw std::domain_error("m_bar must be >= 0");
    FalsePositiveResult r;
    if (m_bar == 0.0) {
        r.coverage = 1.0;
        return r;
    }
    const double u = 1.0 - d.eta;
    double cum = 0.0;
    for (int T = 0; T <= 100000; ++T) {
        table.ensure(T / 2 + 2);  // levels are grown before the parallel region
        std::vector<double> probs(std::size_t(T) + 1);
#pragma omp parallel for schedule(dynamic)
        for (int n1 = 0; n1 <= T; ++n1)
            probs[std::size_t(n1)] = time_averaged_outcome_probability(n1, T - n1, m_bar, table);
        for (int n1 = 0; n1 <= T; ++n1) {
            const int n2 = T - n1;
            const double p = probs[std::size_t(n1)];
            cum += p;
            if (n1 >= 1 && n2 >= 1) {
                const double fac =
                    (1.0 - std::pow(u, n1)) * (1.0 - std::pow(u, n2));
                r.total_positive += p * fac;
                if ((n1 & 1) && (n2 & 1)) r.true_positive += p * fac;
            }
        }
        if (1.0 - cum < coverage_eps) break;
    }
    r.coverage = cum;
    r.false_positive = r.total_positive - r.true_positive;
    return r;
}

double windowed_time_average(const std::function<double(double)>& f, double t_max,
                             int n_samples) {
    if (n_samples < 2 || t_max <= 0.0)
        throw std::invalid_argument("windowed_time_average: bad arguments");
    double acc = 0.0, wsum = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double t = (i + 0.5) * t_max / n_samples;
        const double ph = 2.0 * M_PI * double(i) / double(n_samples - 1);
        const double w = 0.42 - 0.5 * std::cos(ph) + 0.08 * std::cos(2.0 * ph);
        acc += w * f(t);
        wsum += w;
    }
    return acc / wsum;
}

}  // namespace herald
