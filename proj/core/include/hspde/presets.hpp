#pragma once

#include <cstdint>
#include <vector>

#include "hspde/grid.hpp"

namespace hspde {
namespace presets {

// Periodized Gaussian bump centered at `center` (sum over images, smooth).
double gaussian_bump_value(double x, double center, double sigma, double length);
Field gaussian_bump(std::shared_ptr<const Grid1D> grid, double center, double sigma,
                    double amplitude = 1.0);

// Single-kink datum amp * (1 - |sin(pi (x - center) / L)|): smooth everywhere
// except one slope break at `center`.
double triangle_kink_value(double x, double center, double length, double amplitude = 1.0);
Field triangle_kink(std::shared_ptr<const Grid1D> grid, double center, double amplitude = 1.0);

// Pulse with one sharp edge at `center` and a smooth raised-cosine return.
Field step(std::shared_ptr<const Grid1D> grid, double center, double width, double ramp,
           double amplitude = 1.0);

Field sine(std::shared_ptr<const Grid1D> grid, int harmonic, double amplitude = 1.0,
           double phase = 0.0);

Field complex_exponential(std::shared_ptr<const Grid1D> grid, int harmonic);

// sum over (k, re, im): (re + i im) e^{i 2 pi k x / L}
Field fourier_field(std::shared_ptr<const Grid1D> grid,
                    const std::vector<std::tuple<int, double, double>>& modes);

// Random field with spectrum ~ (1 + k^2)^{-decay/2} up to |k| <= cutoff;
// hermitian symmetry optional for real-valued fields.
Field random_smooth(std::shared_ptr<const Grid1D> grid, std::uint64_t seed, double decay,
                    int cutoff, bool real_valued = true);

// Coefficient samples offset + amplitude * sin(2 pi harmonic x / L + phase).
std::vector<double> affine_sine(const Grid1D& grid, double offset, double amplitude,
                                int harmonic = 1, double phase = 0.0);

std::vector<double> constant_coefficient(const Grid1D& grid, double value);

}  // namespace presets
}  // namespace hspde
