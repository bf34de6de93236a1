#include "herald/ctable.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "herald/optics.hpp"

namespace herald {

namespace {

// One coefficient from the level-n3 element table E (row-major by l):
//   A_{km} = E(n3,k,m-1) E(n3,n1-k,m),   k in [max(n1-n3,0), min(n1,n3)]
//   C = 1/8 sum_m (B_mm + B_{m,n3+1-m}) - 1/32 B_cc (1 - (-1)^n3)
// The m sum starts at 1; the m = 0 term vanishes identically (sin 0).
double coefficient_from_level(const double* E, int n3, int n1, std::vector<double>& scratch) {
    const int w = n3 + 1;
    const int klo = std::max(n1 - n3, 0), khi = std::min(n1, n3);
    const int nk = khi - klo + 1;
    scratch.assign(std::size_t(n3) * nk, 0.0);
    for (int m = 1; m <= n3; ++m) {
        double* row = &scratch[std::size_t(m - 1) * nk];
        const double* e1 = &E[std::size_t(m - 1) * w];
        const double* e2 = &E[std::size_t(m) * w];
        for (int j = 0; j < nk; ++j) row[j] = e1[klo + j] * e2[n1 - klo - j];
    }
    double acc = 0.0;
    for (int m = 1; m <= n3; ++m) {
        const double* am = &scratch[std::size_t(m - 1) * nk];
        const double* as = &scratch[std::size_t(n3 - m) * nk];  // m' = n3+1-m
        double bmm = 0.0, bms = 0.0;
        for (int j = 0; j < nk; ++j) {
            bmm += am[j] * am[j];
            bms += am[j] * as[j];
        }
        acc += bmm + bms;
    }
    acc /= 8.0;
    if (n3 & 1) {
        const int mc = (n3 + 1) / 2;
        const double* ac = &scratch[std::size_t(mc - 1) * nk];
        double bcc = 0.0;
        for (int j = 0; j < nk; ++j) bcc += ac[j] * ac[j];
        acc -= bcc / 16.0;
    }
    return acc;
}

}  // namespace

CCoefficientTable CCoefficientTable::build(int n3_max, bool parallel) {
    if (n3_max < 1) throw std::invalid_argument("CCoefficientTable: n3_max must be >= 1");
    CCoefficientTable t;
    t.n3_max_ = n3_max;
    t.rows_.resize(std::size_t(n3_max));

    detail::BsLevelStepper stepper;
    stepper.step();  // level 0, unused
    std::vector<double> E;
    for (int n3 = 1; n3 <= n3_max; ++n3) {
        stepper.step();
        stepper.emit(E);
        auto& row = t.rows_[std::size_t(n3 - 1)];
        const int nodd = (n3 + 1) / 2;  // odd n1 <= n3
        row.assign(std::size_t(nodd), 0.0);
#pragma omp parallel if (parallel && n3 > 32)
        {
            std::vector<double> scratch;
#pragma omp for schedule(dynamic, 4)
            for (int i = 0; i < nodd; ++i)
                row[std::size_t(i)] = coefficient_from_level(E.data(), n3, 2 * i + 1, scratch);
        }
    }
    return t;
}

double CCoefficientTable::c(int n1, int n2) const {
    if (n1 < 1 || n2 < 1 || !(n1 & 1) || !(n2 & 1))
        throw std::invalid_argument("CCoefficientTable::c: n1, n2 must be odd and >= 1");
    if ((n1 + n2) % 2 != 0) throw std::invalid_argument("CCoefficientTable::c: bad pair");
    const int n3 = (n1 + n2) / 2;
    if (n3 > n3_max_) throw std::out_of_range("CCoefficientTable::c: n3 beyond table");
    const int a = std::min(n1, n2);
    return rows_[std::size_t(n3 - 1)][std::size_t((a - 1) / 2)];
}

double CCoefficientTable::row_sum(int n3) const {
    const auto& row = rows_.at(std::size_t(n3 - 1));
    double s = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        const int n1 = 2 * int(i) + 1;
        s += (n1 == n3) ? row[i] : 2.0 * row[i];  // mirror n1 > n3
    }
    return s;
}

double CCoefficientTable::d_closed(int n3) {
    return n3 / 16.0 + ((n3 & 1) ? 1.0 / 32.0 : 0.0);
}

double CCoefficientTable::sigma(int n3) const {
    const auto& row = rows_.at(std::size_t(n3 - 1));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) {
        const int n1 = 2 * int(i) + 1;
        const double mult = (n1 == n3) ? 1.0 : 2.0;
        const double d = double(n1 - n3);
        num += mult * row[i] * d * d;
        den += mult * row[i];
    }
    return std::sqrt(num / den);
}

std::pair<double, double> CCoefficientTable::fit_sigma(int lo, int hi) const {
    if (lo < 3 || hi > n3_max_ || hi <= lo)
        throw std::invalid_argument("fit_sigma: bad range");
    double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
    for (int n3 = lo; n3 <= hi; ++n3) {
        const double x = n3, y = sigma(n3);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        n += 1;
    }
    const double alpha = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double beta = (sy - alpha * sx) / n;
    return {alpha, beta};
}

void CCoefficientTable::save_csv(const std::string& path) const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("CCoefficientTable::save_csv: cannot open " + path);
    f << "# heraldsim-ctable v" << kFormatVersion << " n3max=" << n3_max_ << "\n";
    f << "n1,n2,C\n";
    char buf[64];
    for (int n3 = 1; n3 <= n3_max_; ++n3) {
        const auto& row = rows_[std::size_t(n3 - 1)];
        for (std::size_t i = 0; i < row.size(); ++i) {
            const int n1 = 2 * int(i) + 1;
            std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", n1, 2 * n3 - n1, row[i]);
            f << buf;
        }
    }
    if (!f) throw std::runtime_error("CCoefficientTable::save_csv: write failed");
}

CCoefficientTable CCoefficientTable::load_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("CCoefficientTable::load_csv: cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("ctable cache: empty file");
    int ver = 0, n3max = 0;
    if (std::sscanf(line.c_str(), "# heraldsim-ctable v%d n3max=%d", &ver, &n3max) != 2 ||
        ver != kFormatVersion)
        throw std::runtime_error("ctable cache: bad or mismatched header: " + line);
    std::getline(f, line);  // column header
    CCoefficientTable t;
    t.n3_max_ = n3max;
    t.rows_.resize(std::size_t(n3max));
    for (int n3 = 1; n3 <= n3max; ++n3)
        t.rows_[std::size_t(n3 - 1)].assign(std::size_t((n3 + 1) / 2),
                                            std::numeric_limits<double>::quiet_NaN());
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        int n1, n2;
        double cval;
        if (std::sscanf(line.c_str(), "%d,%d,%lf", &n1, &n2, &cval) != 3)
            throw std::runtime_error("ctable cache: bad row: " + line);
        const int n3 = (n1 + n2) / 2;
        if (n3 < 1 || n3 > n3max || n1 > n3)
            throw std::runtime_error("ctable cache: row out of range: " + line);
        t.rows_[std::size_t(n3 - 1)][std::size_t((n1 - 1) / 2)] = cval;
    }
    for (int n3 = 1; n3 <= n3max; ++n3)
        for (double v : t.rows_[std::size_t(n3 - 1)])
            if (std::isnan(v)) throw std::runtime_error("ctable cache: incomplete table");
    return t;
}

}  // namespace herald
