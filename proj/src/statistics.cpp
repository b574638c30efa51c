#include "qtmsim/statistics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qtm {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

void require_open_half(double v, const char *what) {
    if (!(v > 0.0 && v < 0.5)) {
        throw std::invalid_argument(std::string(what) + " must lie in (0, 1/2)");
    }
}

}  // namespace

std::string_view convention_name(TailConvention c) {
    return c == TailConvention::two_sided ? "two-sided" : "paper-cols23";
}

TailConvention parse_convention(std::string_view name) {
    if (name == "two-sided") {
        return TailConvention::two_sided;
    }
    if (name == "paper-cols23") {
        return TailConvention::paper_cols23;
    }
    throw std::invalid_argument("unknown convention '" + std::string(name) + "' (two-sided|paper-cols23)");
}

std::string_view scale_name(EstimateScale s) { return s == EstimateScale::probability ? "probability" : "plusminus"; }

EstimateScale parse_scale(std::string_view name) {
    if (name == "probability") {
        return EstimateScale::probability;
    }
    if (name == "plusminus" || name == "pm1") {
        return EstimateScale::plusminus;
    }
    throw std::invalid_argument("unknown scale '" + std::string(name) + "' (probability|plusminus)");
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_upper_tail(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double normal_upper_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw std::domain_error("upper-tail probability must lie in (0, 1)");
    }
    if (q > 0.5) {
        return -normal_upper_quantile(1.0 - q);
    }
    if (q == 0.5) {
        return 0.0;
    }
    // Newton on log Q(x) - log q, kept inside a shrinking bracket.
    double lo = 0.0;
    double hi = 40.0;
    double x = std::sqrt(-2.0 * std::log(q));  // tail bound, close for small q
    const double target = std::log(q);
    for (int it = 0; it < 200; ++it) {
        double tail = normal_upper_tail(x);
        double f = std::log(tail) - target;
        if (f > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        double slope = -kInvSqrt2Pi * std::exp(-0.5 * x * x) / tail;
        double next = x - f / slope;
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - x) <= 1e-15 * (1.0 + x)) {
            return next;
        }
        x = next;
    }
    return x;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("quantile requires p in (0, 1)");
    }
    if (p < 0.5) {
        return -normal_upper_quantile(p);
    }
    return normal_upper_quantile(1.0 - p);
}

double critical_value(double epsilon, TailConvention c) {
    return normal_upper_quantile(c == TailConvention::two_sided ? epsilon / 2.0 : epsilon / 4.0);
}

std::int64_t required_n(double theta, double epsilon, TailConvention c) {
    require_open_half(theta, "θ");
    require_open_half(epsilon, "ε");
    double t = critical_value(epsilon * (1.0 + 1e-5), c);
    double root = t / (2.0 * theta);
    auto n = static_cast<std::int64_t>(std::ceil(root * root));
    return std::max<std::int64_t>(n, 1);
}

double achieved_epsilon(double theta, std::int64_t n) {
    if (!(theta >= 0.0 && theta < 0.5)) {
        throw std::invalid_argument("θ must lie in [0, 1/2)");
    }
    if (n < 1) {
        throw std::invalid_argument("n must be at least 1");
    }
    return 2.0 * normal_upper_tail(2.0 * theta * std::sqrt(static_cast<double>(n)));
}

double achieved_theta(double epsilon, std::int64_t n, TailConvention c) {
    require_open_half(epsilon, "ε");
    if (n < 1) {
        throw std::invalid_argument("n must be at least 1");
    }
    return critical_value(epsilon, c) / (2.0 * std::sqrt(static_cast<double>(n)));
}

std::vector<std::vector<std::int64_t>> build_table(const TableSpec &spec) {
    std::vector<std::vector<std::int64_t>> grid;
    grid.reserve(spec.thetas.size());
    for (double theta : spec.thetas) {
        auto &row = grid.emplace_back();
        for (double eps : spec.epsilons) {
            row.push_back(required_n(theta, eps, spec.convention));
        }
    }
    return grid;
}

AuditReport audit_table1() {
    static constexpr double thetas[] = {1.0 / 32, 1.0 / 64, 1.0 / 128};
    static constexpr double epsilons[] = {0.0455, 0.02, 0.01};
    static constexpr std::int64_t published[3][3] = {
        {1024, 1699, 2018},
        {4096, 6795, 8069},
        {16384, 27177, 32275},
    };
    AuditReport report;
    report.column1_two_sided = true;
    report.columns23_half_epsilon = true;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            AuditRecord r;
            r.theta = thetas[i];
            r.epsilon_stated = epsilons[j];
            r.n_paper = published[i][j];
            r.n_two_sided = required_n(r.theta, r.epsilon_stated, TailConvention::two_sided);
            r.n_paper_cols23 = required_n(r.theta, r.epsilon_stated, TailConvention::paper_cols23);
            r.epsilon_achieved = achieved_epsilon(r.theta, r.n_paper);
            r.verdict = r.n_paper == r.n_two_sided ? "consistent" : "inconsistent";
            if (j == 0) {
                report.column1_two_sided = report.column1_two_sided && r.n_paper == r.n_two_sided;
            } else {
                bool near = std::llabs(r.n_paper - r.n_paper_cols23) <= 1 &&
                            std::abs(r.epsilon_achieved - r.epsilon_stated / 2.0) <= 2e-4;
                report.columns23_half_epsilon = report.columns23_half_epsilon && near;
            }
            report.records.push_back(r);
        }
    }
    return report;
}

bool outside_band(std::int64_t k, std::int64_t n, double p1, double theta, EstimateScale scale) {
    double dev = static_cast<double>(k) / static_cast<double>(n) - p1;
    if (scale == EstimateScale::plusminus) {
        dev *= 2.0;
    }
    return std::abs(dev) >= theta - 1e-12;
}

double binomial_exceedance(std::int64_t n, double p1, double theta, EstimateScale scale) {
    if (n < 1 || n > 1'000'000) {
        throw std::invalid_argument("exact binomial tail supports 1 <= n <= 10^6");
    }
    if (!(p1 >= 0.0 && p1 <= 1.0)) {
        throw std::invalid_argument("p1 must lie in [0, 1]");
    }
    if (p1 == 0.0 || p1 == 1.0) {
        return outside_band(p1 == 1.0 ? n : 0, n, p1, theta, scale) ? 1.0 : 0.0;
    }
    const double lp = std::log(p1);
    const double lq = std::log1p(-p1);
    const double lfn = std::lgamma(static_cast<double>(n) + 1.0);
    double total = 0.0;
    for (std::int64_t k = 0; k <= n; ++k) {
        if (!outside_band(k, n, p1, theta, scale)) {
            continue;
        }
        double kd = static_cast<double>(k);
        double logpmf = lfn - std::lgamma(kd + 1.0) - std::lgamma(static_cast<double>(n - k) + 1.0) + kd * lp +
                        static_cast<double>(n - k) * lq;
        total += std::exp(logpmf);
    }
    return std::min(total, 1.0);
}

}  // namespace qtm
