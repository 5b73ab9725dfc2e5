#pragma once

#include <span>

namespace elite_surge {

enum class Direction { HybridBetter, BaselineBetter, None };
enum class Significance { MuchBetter, Better, Equivalent };

const char* direction_name(Direction d);
const char* significance_name(Significance s);
/// Table symbol: ">>", ">", "~".
const char* significance_symbol(Significance s);

struct MannWhitneyResult {
    double u_statistic = 0.0;
    double p_two_sided = 1.0;
};

/// Standard normal CDF.
double normal_cdf(double z);

/// Rank-sum U of sample a with midrank tie handling; two-sided p from the
/// normal approximation with tie-corrected variance and continuity
/// correction. If every pooled value is equal, returns p = 1 and
/// U = |a||b|/2. Requires |a|, |b| >= 2.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// Exact permutation p-value by full enumeration of the C(|a|+|b|, |a|)
/// group assignments. Used as the small-sample oracle; requires
/// |a| + |b| <= 20.
MannWhitneyResult mann_whitney_u_exact(std::span<const double> a, std::span<const double> b);

struct ComparisonVerdict {
    double u_statistic = 0.0;
    double p_two_sided = 1.0;
    Direction direction = Direction::None;
    Significance symbol = Significance::Equivalent;
};

/// Three-symbol significance classification of final-error samples
/// (lower = better). Direction by median; ">>" needs p < 0.01, ">" needs
/// p < 0.05, both only when the hybrid median is better. Baseline-superior
/// outcomes report their direction and p but classify as "~".
ComparisonVerdict classify(std::span<const double> hybrid_errors,
                           std::span<const double> baseline_errors);

}  // namespace elite_surge
