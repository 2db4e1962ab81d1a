#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hspde/evolve.hpp"
#include "hspde/noise.hpp"

namespace hspde {

struct McConfig {
    int num_paths = 64;
    std::uint64_t seed = 0;
    double norm_index = -2.0;  // Sobolev index for error measurement (default s-2)
    double confidence = 1.96;
    int threads = 1;
};

struct ConvergenceReport {
    std::vector<double> abscissae;
    std::vector<double> errors;    // mean of sup_t |.|^2 in the primary norm
    std::vector<double> std_errs;
    double fitted_slope = 0.0;     // least-squares slope in log-log
    // Extra norm indices tabulated alongside (index, errors, slope).
    struct ExtraNorm {
        double index;
        std::vector<double> errors;
        std::vector<double> std_errs;
        double slope;
    };
    std::vector<ExtraNorm> extra;
    int excluded_paths = 0;
    // Raw per-path squared sup-errors, rows aligned with abscissae.
    std::vector<std::vector<double>> per_path;
};

// Wong-Zakai error study: per path, a fine Heun reference and one
// wong_zakai_solve per n on the same path; E sup_t |u^n - u|^2 at mc.norm_index.
ConvergenceReport wz_convergence_study(const SpdeProblem& p, const std::vector<int>& ns,
                                       const EvolveConfig& cfg, const McConfig& mc);

// Small-noise study: noise_scale = sqrt(eps) per entry against the
// deterministic solve; errors also tabulated at s-1 and s.
ConvergenceReport small_noise_study(const SpdeProblem& p, const std::vector<double>& eps_list,
                                    const EvolveConfig& cfg, const McConfig& mc);

struct LdpRow {
    double eps = 0.0;
    double naive_prob = 0.0;
    double naive_se = 0.0;
    bool naive_zero_hits = false;  // estimate is the rule-of-three upper bound
    double eps_log_naive = 0.0;
    double tilted_prob = 0.0;
    double tilted_se = 0.0;
    double eps_log_tilted = 0.0;
    double lr_mean = 0.0;  // likelihood ratio mean under the tilted measure (target 1)
    double lr_se = 0.0;
};

struct LdpReport {
    std::vector<LdpRow> rows;
    double action = 0.0;  // I(h) = cm_action(h)
    double eta = 0.0;
    // Raw per-path statistics: one row per (eps, path).
    struct PathRow {
        double eps;
        int path;
        double naive_hit;
        double tilted_hit;
        double likelihood_ratio;
    };
    std::vector<PathRow> per_path;
};

// Tube-probability probe around the skeleton Psi(h): naive Monte Carlo and
// Girsanov importance sampling with shift h/sqrt(eps) and the exact discrete
// likelihood ratio exp(-sum hdot dw/sqrt(eps) - 1/2 sum hdot^2 dt/eps).
LdpReport ldp_probe(const SpdeProblem& p, const CameronMartinPath& h, double eta,
                    const std::vector<double>& eps_list, const EvolveConfig& cfg,
                    const McConfig& mc);

struct SupportReport {
    // Direction (a): distance of each sampled solution to the skeleton built
    // from its own polygonalization, per n.
    std::vector<int> ns;
    std::vector<double> median_distance;
    std::vector<double> mean_distance;
    std::vector<std::vector<double>> per_path_distance;  // [n index][path]
    // Direction (b): conditional tube frequencies per supplied driver.
    struct DriverRow {
        int accepted = 0;
        double conditional_freq = 0.0;
        bool inconclusive = false;  // fewer than 10 accepted paths
        double unconditional_freq = 0.0;
    };
    std::vector<DriverRow> drivers;
};

SupportReport support_probe(const SpdeProblem& p, const std::vector<CameronMartinPath>& drivers,
                            double eta, double delta, const std::vector<int>& poly_ns,
                            const EvolveConfig& cfg, const McConfig& mc);

struct MalliavinDerivative {
    enum class Kind { pointwise_theta, directional_h };
    Kind kind = Kind::pointwise_theta;
    Field data;
    double theta = 0.0;
    double t = 0.0;
};

// D_theta u(t) = U(theta,t) a_theta(x,D) u(theta); zero for theta > t.
MalliavinDerivative malliavin_pointwise(const SpdeProblem& p, const BrownianPath& path,
                                        double theta, double t, const EvolveConfig& cfg);

// D_h u(t) = int_0^t U(tau,t) a_tau u(tau) hdot(tau) dtau by trapezoid
// quadrature of malliavin_pointwise, thinned by `stride` steps.
MalliavinDerivative malliavin_directional(const SpdeProblem& p, const BrownianPath& path,
                                          const CameronMartinPath& h, double t,
                                          const EvolveConfig& cfg, int stride = 64);

struct NondegeneracyResult {
    double value = 0.0;  // int_0^t |D_theta u(t,x)|^2 dtheta
    bool verdict = false;
};

// Pointwise evaluation at x_point stands in for the s - 1 > d/2 embedding:
// the grid must resolve the field well enough that cubic interpolation of
// D_theta u(t, .) at a point is stable.
NondegeneracyResult nondegeneracy_check(const SpdeProblem& p, const BrownianPath& path,
                                        double x_point, double t, const EvolveConfig& cfg,
                                        double threshold = 1e-10, int stride = 64);

// Least-squares slope of log(y) vs log(x); pairs with y <= 0 are skipped.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hspde
