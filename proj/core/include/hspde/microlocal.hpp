#pragma once

#include <string>
#include <vector>

#include "hspde/characteristics.hpp"
#include "hspde/grid.hpp"
#include "hspde/noise.hpp"

namespace hspde {

// Point of phase space; xi lives on R minus the zero section, x is periodic.
struct PhasePoint {
    double x = 0.0;
    double xi = 1.0;
};

struct WavefrontSet {
    std::vector<PhasePoint> points;
    std::vector<std::string> labels;  // provenance (which kink of u0)
};

// Trajectories of the stochastic bicharacteristic system for symbols of the
// supported form a1 = alpha(t,x) xi, b1 = beta(t,x) xi:
//   dx  =  alpha o dw + beta dt
//   dxi = -alpha'(x) xi o dw - beta'(x) xi dt
// Positions are stored unwrapped; wrap with mod_length() for display.
struct BicharFlow {
    std::vector<double> times;
    std::vector<std::vector<double>> x;   // x[point][time_index]
    std::vector<std::vector<double>> xi;  // xi[point][time_index]
    double length = 0.0;                  // spatial period

    double wrapped_x(size_t point, size_t time_index) const;
};

BicharFlow bichar_flow(std::shared_ptr<const Grid1D> grid, const CoefficientField& alpha,
                       const CoefficientField& beta, const std::vector<PhasePoint>& pts,
                       const BrownianPath& path, int steps, int record_every = 1);

// Phi_t(WF(u0)): endpoint of the bicharacteristic flow for every point.
WavefrontSet propagate_wavefront(const WavefrontSet& wf0, std::shared_ptr<const Grid1D> grid,
                                 const CoefficientField& alpha, const CoefficientField& beta,
                                 const BrownianPath& path, int steps);

struct Detection {
    double x = 0.0;
    double score = 0.0;
};

// Short-space Fourier singularity scan with a Gaussian window: the score of a
// center is its windowed spectral energy in the top band_fraction of
// frequencies, normalized by the largest window energy. Local maxima above
// rel_threshold * (global max score) and above the absolute floor are
// reported, sub-grid refined by a quadratic fit.
// max_frequency caps the analysis band (0 = Nyquist); band-limited solves
// (stability projection) must pass their band radius or the top band is empty.
std::vector<Detection> detect_singularities(const Field& u, double window_width,
                                            double band_fraction = 1.0 / 3.0,
                                            double rel_threshold = 0.5,
                                            double abs_floor = 1e-7, int max_frequency = 0);

}  // namespace hspde
