#pragma once

#include <span>
#include <vector>

#include "hspde/grid.hpp"

namespace hspde {

// 4-point Lagrange interpolation on the uniform periodic grid, O(dx^4).
double interp_periodic_cubic(const Grid1D& grid, std::span<const double> samples, double x);
cplx interp_periodic_cubic(const Grid1D& grid, std::span<const cplx> samples, double x);

// Monotone cubic Hermite (Fritsch-Carlson) on strictly increasing knots.
// Preserves monotonicity of the data; used for inverting flow graphs.
struct MonotoneCubic {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<double> ds;  // Hermite slopes

    static MonotoneCubic fit(std::vector<double> xs, std::vector<double> ys);
    double eval(double x) const;
};

}  // namespace hspde
