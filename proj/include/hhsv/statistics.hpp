#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hhsv {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + correction_; }

private:
    double sum_ = 0.0;
    double correction_ = 0.0;
};

struct SampleSummary {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

/// Mean and standard error, reduced in index order with compensated sums.
SampleSummary summarize(const std::vector<double>& samples);

/// Runs body(path_index) for every index in [0, n_paths), split into contiguous chunks over
/// `workers` threads. Results must be written to per-index slots so the reduction order never
/// depends on the worker count. workers = 0 picks the hardware concurrency.
void parallel_paths(std::size_t n_paths, unsigned workers,
                    const std::function<void(std::size_t)>& body);

enum class ComparisonMode { two_sided, bound };
enum class Verdict { pass, fail, inconclusive };

const char* to_string(ComparisonMode mode);
const char* to_string(Verdict verdict);

struct McReport {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    double target = 0.0;
    ComparisonMode mode = ComparisonMode::two_sided;
    Verdict verdict = Verdict::fail;
    bool pass = false;
    std::size_t n_paths = 0;
    double wall_time_s = 0.0;
};

inline constexpr double kSeBand = 4.0;
inline constexpr double kInconclusiveRelSe = 0.25;

/// |estimate - target| <= 4 SE.
McReport two_sided_report(std::string name, const SampleSummary& s, double target);

/// estimate <= target (1 + 4 SE / |estimate|); inconclusive when SE / |estimate| > 25%.
McReport bound_report(std::string name, const SampleSummary& s, double target);

/// Difference of two independent estimates against zero with the joint SE.
McReport agreement_report(std::string name, const SampleSummary& a, const SampleSummary& b);

}  // namespace hhsv
