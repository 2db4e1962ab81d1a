#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "hspde/grid.hpp"
#include "hspde/noise.hpp"

namespace hspde {

// Per-node coefficient samples, possibly time dependent.
struct CoefficientField {
    std::function<std::vector<double>(double)> eval;

    CoefficientField() = default;
    CoefficientField(std::vector<double> constant);  // NOLINT(google-explicit-constructor)
    CoefficientField(std::function<std::vector<double>(double)> fn);
    bool empty() const { return !eval; }
};

// Flow phi_t(x_j) of the scalar Stratonovich SDE dx = a1(t,x) o dw + b1(t,x) dt
// for every grid node, stored unwrapped (positions may leave [0, L)).
// The caller owns the sign convention: for the transport equation
// u_t = alpha u_x wdot the characteristic carrying the solution is
// xdot = -alpha wdot, so pass a1 = -alpha.
struct CharFlow {
    std::shared_ptr<const Grid1D> grid;
    std::vector<double> times;
    std::vector<std::vector<double>> positions;  // positions[t][node], unwrapped
    bool monotone = true;
    std::uint64_t driver_fingerprint = 0;

    size_t index_of(double t) const;
};

CharFlow flow_solve(std::shared_ptr<const Grid1D> grid, const CoefficientField& a1,
                    const CoefficientField& b1, const BrownianPath& path, int steps,
                    int record_every = 1);

// phi_t^{-1}(x_j) per node, by monotone interpolation of the unwrapped graph.
std::vector<double> flow_invert(const CharFlow& flow, double t);

// u(t, x_j) = u0(phi_t^{-1}(x_j)) via periodic cubic interpolation (scalar u0).
Field transport_solution(const Field& u0, const CharFlow& flow, double t);

// Representation with zeroth-order term (f = 0 case):
// u(t,x) = u0(phi_t^{-1}(x)) exp( int_0^t a0(phi^{-1}_{tau,t}(x)) o dhat w(tau) ),
// with the two-parameter inverse flow composed from the stored one-parameter
// flow and the backward integral discretized by the trapezoid/midpoint rule.
// a1 follows the same sign convention as flow_solve.
Field representation_lower_order(const Field& u0, std::span<const cplx> a0,
                                 const CoefficientField& a1, const BrownianPath& path, double t,
                                 int steps);

// Evaluate the stored flow at an off-node point (interpolates the periodic
// displacement phi - id).
double flow_evaluate(const CharFlow& flow, size_t time_index, double x0);

}  // namespace hspde
