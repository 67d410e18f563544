#include "hhsv/jump_mgf.hpp"

#include <cmath>
#include <sstream>
#include <type_traits>

namespace hhsv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void throw_domain(double t, double edge) {
    std::ostringstream os;
    os << "MGF argument " << t << " is outside the domain (-inf, " << edge << ")";
    throw DomainExceeded(os.str());
}

}  // namespace

double mgf_domain_edge(const JumpLaw& law) {
    return std::visit(overloaded{[](const ExponentialJumps& e) { return e.rate; },
                                 [](const GammaJumps& g) { return g.rate; },
                                 [](const ConstantJumps&) { return kInfinity; }},
                      law);
}

double mgf(const JumpLaw& law, double t) {
    const double edge = mgf_domain_edge(law);
    if (!(t < edge)) throw_domain(t, edge);
    return std::visit(
        overloaded{[t](const ExponentialJumps& e) { return e.rate / (e.rate - t); },
                   [t](const GammaJumps& g) { return std::pow(1.0 - t / g.rate, -g.shape); },
                   [t](const ConstantJumps& c) { return std::exp(t * c.value); }},
        law);
}

double mgf_inverse(const JumpLaw& law, double y) {
    if (!(y > 0.0)) {
        throw std::invalid_argument("mgf_inverse needs y > 0");
    }
    if (std::isinf(y)) return mgf_domain_edge(law);
    return std::visit(
        overloaded{[y](const ExponentialJumps& e) { return e.rate * (1.0 - 1.0 / y); },
                   [y](const GammaJumps& g) {
                       return -g.rate * std::expm1(-std::log(y) / g.shape);
                   },
                   [y](const ConstantJumps& c) { return std::log(y) / c.value; }},
        law);
}

double mean(const JumpLaw& law) {
    return std::visit(overloaded{[](const ExponentialJumps& e) { return 1.0 / e.rate; },
                                 [](const GammaJumps& g) { return g.shape / g.rate; },
                                 [](const ConstantJumps& c) { return c.value; }},
                      law);
}

MgfProfile profile(const JumpLaw& law) { return {law, mgf_domain_edge(law), mean(law)}; }

double sample_mark(const JumpLaw& law, RngStream& stream) {
    auto draw = [&] {
        return std::visit(
            overloaded{
                [&stream](const ExponentialJumps& e) { return stream.exponential(e.rate); },
                [&stream](const GammaJumps& g) { return stream.gamma(g.shape, g.rate); },
                [](const ConstantJumps& c) { return c.value; }},
            law);
    };
    // Marks must be strictly positive; a zero can only come from a degenerate uniform draw.
    double x = draw();
    while (!(x > 0.0)) x = draw();
    return x;
}

}  // namespace hhsv
