#include "hspde/presets.hpp"

#include <cmath>

#include "hspde/rng.hpp"

namespace hspde {
namespace presets {

double gaussian_bump_value(double x, double center, double sigma, double length) {
    double acc = 0.0;
    for (int img = -4; img <= 4; ++img) {
        const double d = x - center + img * length;
        acc += std::exp(-0.5 * d * d / (sigma * sigma));
    }
    return acc;
}

Field gaussian_bump(std::shared_ptr<const Grid1D> grid, double center, double sigma,
                    double amplitude) {
    const double L = grid->length;
    return Field::from_function(std::move(grid), [=](double x) {
        return cplx(amplitude * gaussian_bump_value(x, center, sigma, L), 0.0);
    });
}

double triangle_kink_value(double x, double center, double length, double amplitude) {
    return amplitude * (1.0 - std::abs(std::sin(kTwoPi * 0.5 * (x - center) / length)));
}

Field triangle_kink(std::shared_ptr<const Grid1D> grid, double center, double amplitude) {
    const double L = grid->length;
    return Field::from_function(std::move(grid), [=](double x) {
        return cplx(triangle_kink_value(x, center, L, amplitude), 0.0);
    });
}

Field step(std::shared_ptr<const Grid1D> grid, double center, double width, double ramp,
           double amplitude) {
    const double L = grid->length;
    return Field::from_function(std::move(grid), [=](double x) {
        double d = std::fmod(x - center, L);
        if (d < 0.0) d += L;
        double v = 0.0;
        if (d < width)
            v = 1.0;
        else if (d < width + ramp)
            v = 0.5 * (1.0 + std::cos(kTwoPi * 0.5 * (d - width) / ramp));
        return cplx(amplitude * v, 0.0);
    });
}

Field sine(std::shared_ptr<const Grid1D> grid, int harmonic, double amplitude, double phase) {
    const double L = grid->length;
    return Field::from_function(std::move(grid), [=](double x) {
        return cplx(amplitude * std::sin(kTwoPi * harmonic * x / L + phase), 0.0);
    });
}

Field complex_exponential(std::shared_ptr<const Grid1D> grid, int harmonic) {
    const double L = grid->length;
    return Field::from_function(std::move(grid), [=](double x) {
        const double arg = kTwoPi * harmonic * x / L;
        return cplx(std::cos(arg), std::sin(arg));
    });
}

Field fourier_field(std::shared_ptr<const Grid1D> grid,
                    const std::vector<std::tuple<int, double, double>>& modes) {
    const double L = grid->length;
    return Field::from_function(std::move(grid), [=](double x) {
        cplx acc(0.0, 0.0);
        for (const auto& [k, re, im] : modes) {
            const double arg = kTwoPi * k * x / L;
            acc += cplx(re, im) * cplx(std::cos(arg), std::sin(arg));
        }
        return acc;
    });
}

Field random_smooth(std::shared_ptr<const Grid1D> grid, std::uint64_t seed, double decay,
                    int cutoff, bool real_valued) {
    const CounterRng rng(seed, 0x5f1e1dULL);
    std::vector<std::tuple<int, double, double>> modes;
    std::uint64_t c = 0;
    for (int k = -cutoff; k <= cutoff; ++k) {
        const double w = std::pow(1.0 + static_cast<double>(k) * k, -0.5 * decay);
        const double re = w * rng.normal(c++);
        const double im = w * rng.normal(c++);
        modes.emplace_back(k, re, im);
    }
    if (real_valued) {
        // Enforce hermitian symmetry c_{-k} = conj(c_k).
        std::vector<std::tuple<int, double, double>> sym;
        for (const auto& [k, re, im] : modes) {
            if (k < 0) continue;
            if (k == 0) {
                sym.emplace_back(0, re, 0.0);
            } else {
                sym.emplace_back(k, re, im);
                sym.emplace_back(-k, re, -im);
            }
        }
        modes = std::move(sym);
    }
    return fourier_field(std::move(grid), modes);
}

std::vector<double> affine_sine(const Grid1D& grid, double offset, double amplitude, int harmonic,
                                double phase) {
    std::vector<double> v(static_cast<size_t>(grid.n));
    for (int j = 0; j < grid.n; ++j)
        v[static_cast<size_t>(j)] =
            offset + amplitude * std::sin(kTwoPi * harmonic * grid.nodes[static_cast<size_t>(j)] /
                                              grid.length +
                                          phase);
    return v;
}

std::vector<double> constant_coefficient(const Grid1D& grid, double value) {
    return std::vector<double>(static_cast<size_t>(grid.n), value);
}

}  // namespace presets
}  // namespace hspde
