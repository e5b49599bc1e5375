#include "kgbench/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace kgbench {

double mean(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("mean of an empty sample");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double sample_stddev(const std::vector<double>& values) {
    if (values.size() < 2) throw std::invalid_argument("sample stddev needs n >= 2");
    const double m = mean(values);
    double sum = 0.0;
    for (double v : values) sum += (v - m) * (v - m);
    return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

namespace {

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 400;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double reg_inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
    if (df <= 0.0) throw std::invalid_argument("t CDF needs df > 0");
    const double x = df / (df + t * t);
    const double tail = 0.5 * reg_inc_beta(df / 2.0, 0.5, x);
    return t >= 0.0 ? 1.0 - tail : tail;
}

double t_quantile(double p, double df) {
    if (p <= 0.0 || p >= 1.0) throw std::invalid_argument("t quantile needs p in (0, 1)");
    if (df <= 0.0) throw std::invalid_argument("t quantile needs df > 0");
    if (p == 0.5) return 0.0;
    if (p < 0.5) return -t_quantile(1.0 - p, df);

    double lo = 0.0, hi = 1.0;
    while (student_t_cdf(hi, df) < p) {
        hi *= 2.0;
        if (hi > 1e12) break;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_cdf(mid, df) < p) lo = mid;
        else hi = mid;
        if ((hi - lo) <= 1e-14 * std::max(1.0, lo)) break;
    }
    return 0.5 * (lo + hi);
}

double ci_half_width(double stddev, std::size_t n, double level) {
    if (n < 2) throw std::invalid_argument("confidence interval needs n >= 2");
    const double q = t_quantile(0.5 + level / 2.0, static_cast<double>(n - 1));
    return q * stddev / std::sqrt(static_cast<double>(n));
}

}  // namespace kgbench
