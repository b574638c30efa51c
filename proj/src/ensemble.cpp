#include "qtmsim/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "qtmsim/measurement.hpp"
#include "qtmsim/rng.hpp"
#include "qtmsim/superposition.hpp"

namespace qtm {

namespace {

// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
// Results must be written to slot i so the reduction order is fixed.
void parallel_for(std::int64_t count, const std::function<void(std::int64_t)> &body) {
    auto workers = static_cast<std::int64_t>(std::max(1u, std::thread::hardware_concurrency()));
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::int64_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (std::int64_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::int64_t i = w; i < count; i += workers) {
                body(i);
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
}

// Size of block i when `total` is split into `parts` nearly equal blocks.
std::int64_t block_size(std::int64_t total, std::int64_t parts, std::int64_t i) {
    return total / parts + (i < total % parts ? 1 : 0);
}

void check_partitions(std::int64_t partitions, std::int64_t limit) {
    if (partitions < 1) {
        throw std::invalid_argument("partitions must be at least 1");
    }
    if (partitions > limit) {
        throw std::invalid_argument("partitions must not exceed the number of members");
    }
}

}  // namespace

std::int64_t sample_count_plus(double p1, std::int64_t n, std::uint64_t seed, std::int64_t partitions) {
    if (n < 1) {
        throw std::invalid_argument("ensemble size n must be at least 1");
    }
    check_partitions(partitions, n);
    if (p1 >= 1.0 - 1e-9) {
        return n;
    }
    if (p1 <= 1e-9) {
        return 0;
    }
    std::vector<std::int64_t> counts(static_cast<std::size_t>(partitions));
    auto draw = [&](std::int64_t i) {
        Rng rng = make_stream(seed, static_cast<std::uint64_t>(i));
        std::binomial_distribution<std::int64_t> bin(block_size(n, partitions, i), p1);
        counts[static_cast<std::size_t>(i)] = bin(rng);
    };
    if (partitions == 1) {
        draw(0);
    } else {
        parallel_for(partitions, draw);
    }
    std::int64_t total = 0;
    for (auto c : counts) {
        total += c;
    }
    return total;
}

EnsembleReport ensemble_measure(const Machine &m, std::string_view input, std::int64_t steps, std::int64_t cell,
                                const EnsembleConfig &cfg, std::optional<double> theta, EstimateScale scale) {
    if (cfg.n < 1) {
        throw std::invalid_argument("ensemble size n must be at least 1");
    }
    check_partitions(cfg.partitions, cfg.n);
    const auto symbols = encode_input(m, input);
    const Superposition final_state = run(m, symbols, steps);
    const QubitMarginal q = qubit_marginal(m, final_state, cell);

    EnsembleReport r;
    r.n = cfg.n;
    r.exact_p1 = q.p1;
    r.theta = theta;
    r.scale = scale;
    r.seed = cfg.seed;
    r.partitions = cfg.partitions;
    r.slow_path = cfg.slow_path;

    if (!cfg.slow_path) {
        r.count_plus = sample_count_plus(q.p1, cfg.n, cfg.seed, cfg.partitions);
    } else {
        const SymbolId one = m.symbol("1");
        const SymbolId zero = m.symbol("0");
        std::vector<std::int64_t> plus(static_cast<std::size_t>(cfg.partitions));
        std::int64_t begin_of_block = 0;
        std::vector<std::int64_t> starts;
        for (std::int64_t i = 0; i < cfg.partitions; ++i) {
            starts.push_back(begin_of_block);
            begin_of_block += block_size(cfg.n, cfg.partitions, i);
        }
        parallel_for(cfg.partitions, [&](std::int64_t i) {
            std::int64_t count = 0;
            std::int64_t first = starts[static_cast<std::size_t>(i)];
            std::int64_t last = first + block_size(cfg.n, cfg.partitions, i);
            for (std::int64_t j = first; j < last; ++j) {
                Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(j));
                Superposition member = run(m, symbols, steps);
                auto [symbol, post] = observe_cell(m, member, cell, rng, MachineModel::qtm);
                if (symbol == one) {
                    ++count;
                } else if (symbol != zero) {
                    throw std::domain_error("member observed a non-qubit symbol at cell " + std::to_string(cell));
                }
            }
            plus[static_cast<std::size_t>(i)] = count;
        });
        for (auto c : plus) {
            r.count_plus += c;
        }
    }
    r.count_minus = r.n - r.count_plus;
    r.average = static_cast<double>(2 * r.count_plus - r.n) / static_cast<double>(r.n);
    if (theta) {
        r.within_theta = !outside_band(r.count_plus, r.n, q.p1, *theta, scale);
    }
    return r;
}

std::int64_t realize_mbqtm(double theta, double epsilon, TailConvention convention) {
    return required_n(theta, epsilon, convention);
}

ErrorRate empirical_error_rate(double p1, std::int64_t n, double theta, EstimateScale scale, std::int64_t trials,
                               const EnsembleConfig &cfg) {
    if (!(p1 >= 0.0 && p1 <= 1.0)) {
        throw std::invalid_argument("p1 must lie in [0, 1]");
    }
    if (n < 1) {
        throw std::invalid_argument("ensemble size n must be at least 1");
    }
    if (trials < 1) {
        throw std::invalid_argument("trials must be at least 1");
    }
    check_partitions(cfg.partitions, trials);
    ErrorRate out;
    out.trials = trials;
    if (p1 == 0.0 || p1 == 1.0) {
        out.exceedances = outside_band(p1 == 1.0 ? n : 0, n, p1, theta, scale) ? trials : 0;
        out.rate = static_cast<double>(out.exceedances) / static_cast<double>(trials);
        return out;
    }
    std::vector<std::int64_t> hits(static_cast<std::size_t>(cfg.partitions));
    parallel_for(cfg.partitions, [&](std::int64_t i) {
        Rng rng = make_stream(cfg.seed, static_cast<std::uint64_t>(i));
        std::binomial_distribution<std::int64_t> bin(n, p1);
        std::int64_t local = 0;
        for (std::int64_t t = block_size(trials, cfg.partitions, i); t > 0; --t) {
            if (outside_band(bin(rng), n, p1, theta, scale)) {
                ++local;
            }
        }
        hits[static_cast<std::size_t>(i)] = local;
    });
    for (auto h : hits) {
        out.exceedances += h;
    }
    out.rate = static_cast<double>(out.exceedances) / static_cast<double>(trials);
    out.mc_sigma = std::sqrt(out.rate * (1.0 - out.rate) / static_cast<double>(trials));
    return out;
}

}  // namespace qtm
