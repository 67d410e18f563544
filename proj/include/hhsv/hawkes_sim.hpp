#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "hhsv/model.hpp"
#include "hhsv/rng.hpp"

namespace hhsv {

/// Event times of the Hawkes process N on [0, T] with their marks J_i.
struct MarkedPointPath {
    std::vector<double> event_times;  // strictly increasing, in (0, T]
    std::vector<double> marks;        // J_i > 0, aligned with event_times
    HawkesParams params;
    double horizon = 0.0;

    std::size_t size() const { return event_times.size(); }
    /// N_t, right-continuous.
    std::size_t count_at(double t) const;
    /// L_t = sum of marks of events <= t.
    double compound_at(double t) const;
};

/// lambda_0 + alpha * sum_{t_i <= t} exp(-beta (t - t_i)); events at exactly t count.
double intensity_at(const MarkedPointPath& path, double t);

/// Intensity right after each event, via the decay-and-jump recurrence.
std::vector<double> intensity_after_events(const MarkedPointPath& path);

/// Ogata thinning with the current intensity as the dominating rate.
MarkedPointPath simulate_hawkes(const HawkesParams& params, const JumpLaw& law, double horizon,
                                RngStream& stream);

struct Compensators {
    std::vector<double> counting;  // Lambda^N on the grid
    std::vector<double> compound;  // Lambda^L = E[J] Lambda^N
};

/// Closed-form integrated intensity on each grid point.
Compensators compensators(const MarkedPointPath& path, const JumpLaw& law, const TimeGrid& grid);

/// CSV with header "t_event,mark,lambda_after_event".
void write_events_csv(std::ostream& os, const MarkedPointPath& path);

}  // namespace hhsv
