#include "hhsv/hawkes_sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hhsv/jump_mgf.hpp"

namespace hhsv {

namespace {

void require_in_horizon(const MarkedPointPath& path, double t) {
    if (!(t >= 0.0 && t <= path.horizon)) {
        std::ostringstream os;
        os << "time " << t << " outside [0, " << path.horizon << "]";
        throw std::out_of_range(os.str());
    }
}

std::size_t events_up_to(const MarkedPointPath& path, double t) {
    auto it = std::upper_bound(path.event_times.begin(), path.event_times.end(), t);
    return static_cast<std::size_t>(it - path.event_times.begin());
}

}  // namespace

std::size_t MarkedPointPath::count_at(double t) const {
    return events_up_to(*this, t);
}

double MarkedPointPath::compound_at(double t) const {
    const std::size_t n = events_up_to(*this, t);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += marks[i];
    return sum;
}

double intensity_at(const MarkedPointPath& path, double t) {
    require_in_horizon(path, t);
    const auto& p = path.params;
    const std::size_t n = events_up_to(path, t);
    double excitation = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        excitation += std::exp(-p.beta * (t - path.event_times[i]));
    }
    return p.lambda0 + p.alpha * excitation;
}

std::vector<double> intensity_after_events(const MarkedPointPath& path) {
    const auto& p = path.params;
    std::vector<double> out;
    out.reserve(path.size());
    double lambda = p.lambda0;
    double last = 0.0;
    for (double t : path.event_times) {
        lambda = p.lambda0 + (lambda - p.lambda0) * std::exp(-p.beta * (t - last)) + p.alpha;
        out.push_back(lambda);
        last = t;
    }
    return out;
}

MarkedPointPath simulate_hawkes(const HawkesParams& params, const JumpLaw& law, double horizon,
                                RngStream& stream) {
    if (!(horizon > 0.0)) throw std::invalid_argument("simulate_hawkes needs horizon > 0");
    MarkedPointPath path;
    path.params = params;
    path.horizon = horizon;

    // The excitation only decays between events, so the intensity at the current time
    // dominates the intensity until the next event.
    double t = 0.0;
    double lambda_t = params.lambda0;
    while (true) {
        const double bound = lambda_t;
        double wait = stream.exponential(bound);
        while (!(wait > 0.0)) wait = stream.exponential(bound);
        if (t + wait > horizon) break;
        t += wait;
        lambda_t = params.lambda0 + (lambda_t - params.lambda0) * std::exp(-params.beta * wait);
        if (stream.uniform() * bound <= lambda_t) {
            path.event_times.push_back(t);
            lambda_t += params.alpha;
        }
    }

    path.marks.reserve(path.event_times.size());
    for (std::size_t i = 0; i < path.event_times.size(); ++i) {
        path.marks.push_back(sample_mark(law, stream));
    }
    return path;
}

Compensators compensators(const MarkedPointPath& path, const JumpLaw& law, const TimeGrid& grid) {
    if (grid.t_start() < 0.0 || grid.t_end() > path.horizon) {
        throw std::out_of_range("compensator grid must lie within [0, T]");
    }
    const auto& p = path.params;
    const double mark_mean = mean(law);
    Compensators out;
    out.counting.resize(grid.size());
    out.compound.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid.at(k);
        const std::size_t n = path.count_at(t);
        double excitation = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            excitation += -std::expm1(-p.beta * (t - path.event_times[i]));
        }
        out.counting[k] = p.lambda0 * t + p.alpha / p.beta * excitation;
        out.compound[k] = mark_mean * out.counting[k];
    }
    return out;
}

void write_events_csv(std::ostream& os, const MarkedPointPath& path) {
    const auto lambdas = intensity_after_events(path);
    const auto old_precision = os.precision(15);
    os << "t_event,mark,lambda_after_event\n";
    for (std::size_t i = 0; i < path.size(); ++i) {
        os << path.event_times[i] << ',' << path.marks[i] << ',' << lambdas[i] << '\n';
    }
    os.precision(old_precision);
}

}  // namespace hhsv
