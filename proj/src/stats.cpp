#include "elite_surge/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace elite_surge {

const char* direction_name(Direction d) {
    switch (d) {
        case Direction::HybridBetter: return "hybrid_better";
        case Direction::BaselineBetter: return "baseline_better";
        case Direction::None: return "none";
    }
    throw std::logic_error("unknown direction");
}

const char* significance_name(Significance s) {
    switch (s) {
        case Significance::MuchBetter: return "MUCH_BETTER";
        case Significance::Better: return "BETTER";
        case Significance::Equivalent: return "EQUIVALENT";
    }
    throw std::logic_error("unknown significance");
}

const char* significance_symbol(Significance s) {
    switch (s) {
        case Significance::MuchBetter: return ">>";
        case Significance::Better: return ">";
        case Significance::Equivalent: return "~";
    }
    throw std::logic_error("unknown significance");
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

namespace {

// Midranks of the pooled samples, doubled so they stay integral under ties
// of even count. Returns (2*rank) per pooled index, plus tie-group sizes.
void doubled_midranks(const std::vector<double>& pooled, std::vector<std::int64_t>& ranks2,
                      std::vector<std::int64_t>& tie_sizes) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&pooled](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
    ranks2.assign(n, 0);
    tie_sizes.clear();
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]])
            ++j;
        // ranks i+1 .. j+1 share the midrank (i+j+2)/2; doubled: i+j+2
        const auto rank2 = static_cast<std::int64_t>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k)
            ranks2[order[k]] = rank2;
        tie_sizes.push_back(static_cast<std::int64_t>(j - i + 1));
        i = j + 1;
    }
}

}  // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("mann_whitney_u needs at least 2 values per sample");
    const double n = static_cast<double>(a.size());
    const double m = static_cast<double>(b.size());
    const double big_n = n + m;

    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<std::int64_t> ranks2, tie_sizes;
    doubled_midranks(pooled, ranks2, tie_sizes);

    std::int64_t rank2_sum_a = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        rank2_sum_a += ranks2[i];
    const double rank_sum_a = 0.5 * static_cast<double>(rank2_sum_a);
    const double u = rank_sum_a - n * (n + 1.0) / 2.0;

    MannWhitneyResult result;
    result.u_statistic = u;

    double tie_term = 0.0;
    for (const auto t : tie_sizes) {
        const double td = static_cast<double>(t);
        tie_term += td * td * td - td;
    }
    const double variance =
        n * m / 12.0 * ((big_n + 1.0) - tie_term / (big_n * (big_n - 1.0)));
    if (variance <= 0.0) {
        // Every pooled value tied.
        result.u_statistic = n * m / 2.0;
        result.p_two_sided = 1.0;
        return result;
    }

    const double centred = u - n * m / 2.0;
    double z = 0.0;
    if (centred > 0.0)
        z = (centred - 0.5) / std::sqrt(variance);
    else if (centred < 0.0)
        z = (centred + 0.5) / std::sqrt(variance);
    result.p_two_sided = std::min(1.0, 2.0 * normal_cdf(-std::fabs(z)));
    return result;
}

MannWhitneyResult mann_whitney_u_exact(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw std::invalid_argument("mann_whitney_u_exact needs at least 2 values per sample");
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (n + m > 20)
        throw std::invalid_argument("exact enumeration limited to combined size 20");

    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::vector<std::int64_t> ranks2, tie_sizes;
    doubled_midranks(pooled, ranks2, tie_sizes);

    // Doubled U keeps every comparison integral: 2U = 2R_a - n(n+1).
    const auto offset = static_cast<std::int64_t>(n * (n + 1));
    std::int64_t rank2_obs = 0;
    for (std::size_t i = 0; i < n; ++i)
        rank2_obs += ranks2[i];
    const std::int64_t u2_obs = rank2_obs - offset;
    // 2U is centered at nm; extremeness is measured by |2U - nm|
    const auto nm2 = static_cast<std::int64_t>(n * m);

    MannWhitneyResult result;
    result.u_statistic = 0.5 * static_cast<double>(u2_obs);

    const std::int64_t dev_obs = std::llabs(u2_obs - nm2);

    std::vector<std::size_t> pick(n);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    std::uint64_t total = 0, extreme = 0;
    while (true) {
        std::int64_t rank2_sum = 0;
        for (const auto idx : pick)
            rank2_sum += ranks2[idx];
        const std::int64_t u2 = rank2_sum - offset;
        ++total;
        if (std::llabs(u2 - nm2) >= dev_obs)
            ++extreme;
        // next combination of n indices out of n+m
        std::size_t i = n;
        while (i > 0) {
            --i;
            if (pick[i] != i + m) {
                ++pick[i];
                for (std::size_t j = i + 1; j < n; ++j)
                    pick[j] = pick[j - 1] + 1;
                break;
            }
            if (i == 0)
                goto done;
        }
    }
done:
    result.p_two_sided = static_cast<double>(extreme) / static_cast<double>(total);
    return result;
}

namespace {

double median(std::span<const double> sample) {
    std::vector<double> copy(sample.begin(), sample.end());
    std::sort(copy.begin(), copy.end());
    const std::size_t n = copy.size();
    if (n % 2 == 1)
        return copy[n / 2];
    return 0.5 * (copy[n / 2 - 1] + copy[n / 2]);
}

}  // namespace

ComparisonVerdict classify(std::span<const double> hybrid_errors,
                           std::span<const double> baseline_errors) {
    const MannWhitneyResult test = mann_whitney_u(hybrid_errors, baseline_errors);
    ComparisonVerdict verdict;
    verdict.u_statistic = test.u_statistic;
    verdict.p_two_sided = test.p_two_sided;

    const double med_h = median(hybrid_errors);
    const double med_b = median(baseline_errors);
    if (med_h < med_b)
        verdict.direction = Direction::HybridBetter;
    else if (med_h > med_b)
        verdict.direction = Direction::BaselineBetter;
    else
        verdict.direction = Direction::None;

    if (verdict.direction == Direction::HybridBetter && verdict.p_two_sided < 0.01)
        verdict.symbol = Significance::MuchBetter;
    else if (verdict.direction == Direction::HybridBetter && verdict.p_two_sided < 0.05)
        verdict.symbol = Significance::Better;
    else
        verdict.symbol = Significance::Equivalent;
    return verdict;
}

}  // namespace elite_surge
