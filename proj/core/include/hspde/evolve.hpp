#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hspde/grid.hpp"
#include "hspde/noise.hpp"
#include "hspde/symbols.hpp"

namespace hspde {

// Data of du = a u o dw + (b u + g) dt + f dw on [0, horizon].
// noise_scale is the sqrt(eps) factor multiplying the dw terms.
struct SpdeProblem {
    TimeSymbolFamily a;
    TimeSymbolFamily b;
    std::function<Field(double)> f;  // empty = zero forcing
    std::function<Field(double)> g;
    Field u0;
    double sobolev_index = 0.0;
    double horizon = 1.0;
    double noise_scale = 1.0;
};

struct EvolveConfig {
    enum class Scheme { heun, midpoint };
    // Stochastic Heun amplifies mode xi by 1 + (xi dw)^4/4 per step, so the top
    // of the spectrum blows up from roundoff alone at practical step counts.
    // The automatic stability projection truncates every state to the band
    // where the realized quartic growth sum_i (c xi dw_i)^4 / 4 stays below
    // gamma_max. Data must be spectrally resolved inside that band; the
    // projection then never touches the converged solution.
    enum class Projection { automatic, off, fixed };

    int steps = 4096;
    std::optional<double> mollifier_eps;  // set: solve the J_eps-regularized equation
    Scheme scheme = Scheme::heun;
    int substeps_per_segment = 4;  // floor for the deterministic (Wong-Zakai) drives
    int record_every = 64;
    bool dealias = false;
    bool energy_log = true;
    double blowup_factor = 1e6;
    Projection projection = Projection::automatic;
    double gamma_max = 6.0;
    int projection_modes = 0;  // band radius when projection == fixed
};

// Stable band radius for a Heun solve of p along the given path (modes |k| <=
// radius are kept). Exposed for tests and for sizing experiments.
int stability_band(const SpdeProblem& p, const BrownianPath& path, const EvolveConfig& cfg);

struct Trajectory {
    std::vector<double> times;  // recorded state times, strictly increasing
    std::vector<Field> states;
    // Per integration step (when energy logging is on): |u|_s, <A u,u>_s,
    // <L u,u>_s at the step boundaries plus the driving increment.
    std::vector<double> energy_t;
    std::vector<double> energy_norm;
    std::vector<double> energy_quad_a;
    std::vector<double> energy_quad_l;
    std::vector<double> energy_dw;
    double sobolev_index = 0.0;
    std::uint64_t driver_fingerprint = 0;

    const Field& state_at(double t) const;  // exact recorded time lookup
};

// Stochastic Heun (Stratonovich predictor-corrector) along a sampled path.
// path.steps must be cfg.steps or an integer multiple of it.
Trajectory integrate_spde(const SpdeProblem& p, const BrownianPath& path,
                          const EvolveConfig& cfg);

// Deterministic Wong-Zakai drive u' = a u wdot^n + b u + f wdot^n + g,
// classical RK4 with an advective substep rule per polygonal segment.
Trajectory wong_zakai_solve(const SpdeProblem& p, const PolygonalPath& poly,
                            const EvolveConfig& cfg);

// Skeleton Psi(h)' = a Psi hdot + b Psi (unit-noise equation; the problem's
// noise_scale is not applied here).
Trajectory skeleton_solve(const SpdeProblem& p, const CameronMartinPath& h,
                          const EvolveConfig& cfg);

// Backward equation u(s) = phi - int_s^t a u o dhat w (- int b u dtau) solved by
// reversing the increments of the same stored path. Requires f = g = 0.
// The returned trajectory is indexed by s in [0, t_end], increasing.
Trajectory backward_solve(const SpdeProblem& p, const BrownianPath& path, double t_end,
                          const Field& phi, const EvolveConfig& cfg);

// Forward evolution operator U(s_from, t_to) applied to phi; s_from and t_to
// must lie on the step grid.
Field evolution_apply(const SpdeProblem& p, const BrownianPath& path, double s_from, double t_to,
                      const Field& phi, const EvolveConfig& cfg);

// Energy table per recorded step plus the cumulative drift of |u|_s^2 against
// the midpoint-rule prediction from the logged <A u,u>_s increments (valid for
// f = g = 0; the B dt term is not logged).
struct EnergyReport {
    std::vector<double> t;
    std::vector<double> norm_s;
    std::vector<double> quad_a;
    std::vector<double> quad_l;
    std::vector<double> predicted_cum;
    std::vector<double> drift;
    double max_abs_drift = 0.0;
};

EnergyReport energy_report(const Trajectory& traj);

}  // namespace hspde
