#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "hspde/grid.hpp"

namespace hspde {

// One separable term u -> post(x) . idft( m(xi) . dft( pre(x) . u ) ).
// Left (Kohn-Nirenberg) quantization uses post only; the pre slot exists so
// operators like d/dx(alpha u) keep an exact discrete adjoint.
// Coefficients are d'xd' matrices sampled per node, layout ((i*d'+j)*N + node);
// an empty vector means the identity matrix.
struct SymbolTerm {
    std::vector<cplx> multiplier;  // m(xi_k) per native-ordered frequency
    std::vector<cplx> post_coef;
    std::vector<cplx> pre_coef;
};

class SeparableSymbol {
  public:
    SeparableSymbol(std::shared_ptr<const Grid1D> grid, int components, double order,
                    std::vector<SymbolTerm> terms);

    const Grid1D& grid() const;
    const std::shared_ptr<const Grid1D>& grid_ptr() const;
    int components() const;
    double order() const;
    std::span<const SymbolTerm> terms() const;

    // Recorded constant C with |m_k(xi)| <= C (1+|xi|)^order on the grid.
    double multiplier_growth_constant() const;
    // Crude advection-speed bound used by the deterministic substep rule.
    double advective_speed() const;

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

Field apply_pdo(const SeparableSymbol& sym, const Field& u);
// Exact discrete adjoint in <.,.>_0: term-wise swap and conjugation of the
// coefficient slots, conj of the multiplier.
Field apply_adjoint(const SeparableSymbol& sym, const Field& u);

// a u = 1/2 (alpha d/dx u + d/dx(alpha u)) + a0 u on scalar fields; with
// a0 = 0 the discrete operator is exactly skew-adjoint.
SeparableSymbol make_symmetrized_transport(std::shared_ptr<const Grid1D> grid,
                                           std::span<const double> alpha,
                                           std::span<const cplx> a0 = {});

// Plain left-quantized transport a u = alpha(x) du/dx (+ a0 u).
SeparableSymbol make_transport(std::shared_ptr<const Grid1D> grid, std::span<const double> alpha,
                               std::span<const cplx> a0 = {});

// Zeroth-order multiplication operator.
SeparableSymbol make_multiplication(std::shared_ptr<const Grid1D> grid, std::span<const cplx> a0);

// General single-term builder (scalar): coefficient samples + multiplier samples.
SeparableSymbol make_term_symbol(std::shared_ptr<const Grid1D> grid, double order,
                                 std::vector<cplx> x_coef, std::vector<cplx> xi_mult);

SeparableSymbol symbol_sum(const SeparableSymbol& a, const SeparableSymbol& b);

// Time family of symbols: constant, piecewise-constant table, or callback.
class TimeSymbolFamily {
  public:
    TimeSymbolFamily() = default;  // the zero operator

    static TimeSymbolFamily constant(SeparableSymbol sym);
    static TimeSymbolFamily table(std::vector<double> times, std::vector<SeparableSymbol> symbols);
    static TimeSymbolFamily from_function(std::function<SeparableSymbol(double)> fn,
                                          std::vector<double> sample_times);

    bool empty() const;
    SeparableSymbol at(double t) const;
    const std::vector<double>& sample_times() const;
    // Continuity diagnostic for tables: largest adjacent-sample coefficient
    // deviation relative to the mean modulus.
    double max_adjacent_deviation() const;

  private:
    struct Table {
        std::vector<double> times;
        std::vector<SeparableSymbol> symbols;
    };
    struct Callback {
        std::function<SeparableSymbol(double)> fn;
        std::vector<double> times;
    };
    std::variant<std::monostate, SeparableSymbol, Table, Callback> impl_;
    static const std::vector<double> kNoTimes;
};

struct OperatorDiagnostics {
    double norm_A = 0.0;  // sup_t ||a_t + a_t*||_{H^s -> H^s}
    double norm_B = 0.0;
    double norm_L = 0.0;  // L = A a + a* A
    double norm_M = 0.0;  // M = L a + a* L
    double s = 0.0;
    int trials = 0;
    int iterations = 0;
};

// Randomized power iteration on T#T per sampled time; returns the max over
// time samples. Divergence is reported as +inf, the zero operator as 0.
OperatorDiagnostics estimate_conditions(const TimeSymbolFamily& fam_a,
                                        const TimeSymbolFamily& fam_b, double s, int trials,
                                        int iterations = 64, std::uint64_t seed = 0x5eedULL);

}  // namespace hspde
