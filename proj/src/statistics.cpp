#include "hhsv/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace hhsv {

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        correction_ += (sum_ - t) + x;
    } else {
        correction_ += (x - t) + sum_;
    }
    sum_ = t;
}

SampleSummary summarize(const std::vector<double>& samples) {
    SampleSummary s;
    s.n = samples.size();
    if (s.n == 0) return s;
    CompensatedSum sum;
    for (double x : samples) sum.add(x);
    s.mean = sum.value() / static_cast<double>(s.n);
    if (s.n < 2) return s;
    CompensatedSum sq;
    for (double x : samples) sq.add((x - s.mean) * (x - s.mean));
    const double var = sq.value() / static_cast<double>(s.n - 1);
    s.std_error = std::sqrt(var / static_cast<double>(s.n));
    return s;
}

void parallel_paths(std::size_t n_paths, unsigned workers,
                    const std::function<void(std::size_t)>& body) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n_paths, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n_paths; ++i) body(i);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t chunk = (n_paths + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n_paths, begin + chunk);
        threads.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (failure) std::rethrow_exception(failure);
}

const char* to_string(ComparisonMode mode) {
    return mode == ComparisonMode::two_sided ? "two-sided" : "bound";
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "fail";
}

McReport two_sided_report(std::string name, const SampleSummary& s, double target) {
    McReport r;
    r.name = std::move(name);
    r.estimate = s.mean;
    r.std_error = s.std_error;
    r.target = target;
    r.mode = ComparisonMode::two_sided;
    r.n_paths = s.n;
    r.pass = std::abs(s.mean - target) <= kSeBand * s.std_error;
    r.verdict = r.pass ? Verdict::pass : Verdict::fail;
    return r;
}

McReport bound_report(std::string name, const SampleSummary& s, double target) {
    McReport r;
    r.name = std::move(name);
    r.estimate = s.mean;
    r.std_error = s.std_error;
    r.target = target;
    r.mode = ComparisonMode::bound;
    r.n_paths = s.n;
    const double rel_se = s.mean != 0.0 ? s.std_error / std::abs(s.mean) : 0.0;
    r.pass = s.mean <= target * (1.0 + kSeBand * rel_se);
    if (rel_se > kInconclusiveRelSe) {
        r.verdict = Verdict::inconclusive;
    } else {
        r.verdict = r.pass ? Verdict::pass : Verdict::fail;
    }
    return r;
}

McReport agreement_report(std::string name, const SampleSummary& a, const SampleSummary& b) {
    SampleSummary diff;
    diff.mean = a.mean - b.mean;
    diff.std_error = std::hypot(a.std_error, b.std_error);
    diff.n = std::min(a.n, b.n);
    return two_sided_report(std::move(name), diff, 0.0);
}

}  // namespace hhsv
