#pragma once

#include <limits>
#include <stdexcept>

#include "hhsv/model.hpp"
#include "hhsv/rng.hpp"

namespace hhsv {

/// Raised when the MGF is evaluated at or beyond its domain edge epsilon_J.
class DomainExceeded : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Right edge of the MGF domain: rate for exponential and gamma marks, +inf for constant.
double mgf_domain_edge(const JumpLaw& law);

/// M_J(t) = E[exp(t J)] in closed form. Throws DomainExceeded when t >= epsilon_J.
double mgf(const JumpLaw& law, double t);

/// Inverse of M_J on (0, inf). mgf_inverse(law, +inf) is epsilon_J.
double mgf_inverse(const JumpLaw& law, double y);

double mean(const JumpLaw& law);

struct MgfProfile {
    JumpLaw law;
    double epsilon_j;
    double mean;
};

MgfProfile profile(const JumpLaw& law);

/// One i.i.d. mark J > 0.
double sample_mark(const JumpLaw& law, RngStream& stream);

}  // namespace hhsv
