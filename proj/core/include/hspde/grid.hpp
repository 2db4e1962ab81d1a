#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "hspde/errors.hpp"

namespace hspde {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925287;

// Periodic grid on [0, L) with N equispaced nodes, N a power of two >= 8.
// Frequencies xi_k = 2 pi k / L are stored in native FFT ordering:
// index i holds k = i for i < N/2 and k = i - N otherwise.
struct Grid1D {
    int n = 0;
    double length = 0.0;
    double dx = 0.0;
    std::vector<double> nodes;
    std::vector<double> freqs;

    static std::shared_ptr<const Grid1D> make(int n, double length = kTwoPi);
    double xi_max() const { return freqs[static_cast<size_t>(n) / 2] < 0
                                       ? -freqs[static_cast<size_t>(n) / 2]
                                       : freqs[static_cast<size_t>(n) / 2]; }
};

bool same_grid(const Grid1D& a, const Grid1D& b);

// A d'-component complex function sampled at the grid nodes.
// Storage is row-major by component: values[c*N + j].
class Field {
  public:
    Field() = default;
    Field(std::shared_ptr<const Grid1D> grid, int components);

    static Field zeros(std::shared_ptr<const Grid1D> grid, int components = 1);
    // Sample a scalar function of x into component 0.
    static Field from_function(std::shared_ptr<const Grid1D> grid,
                               const std::function<cplx(double)>& f);

    const Grid1D& grid() const { return *grid_; }
    const std::shared_ptr<const Grid1D>& grid_ptr() const { return grid_; }
    int components() const { return components_; }
    int size() const { return grid_ ? grid_->n : 0; }

    std::span<cplx> comp(int c);
    std::span<const cplx> comp(int c) const;
    std::span<cplx> raw() { return values_; }
    std::span<const cplx> raw() const { return values_; }

    cplx& at(int c, int j) { return values_[static_cast<size_t>(c) * grid_->n + j]; }
    const cplx& at(int c, int j) const { return values_[static_cast<size_t>(c) * grid_->n + j]; }

    bool finite() const;

    Field& operator+=(const Field& o);
    Field& operator-=(const Field& o);
    Field& operator*=(cplx a);
    // this += a * x
    Field& axpy(cplx a, const Field& x);

  private:
    std::shared_ptr<const Grid1D> grid_;
    int components_ = 0;
    std::vector<cplx> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(cplx a, Field x);

// Fourier coefficients of a Field, same layout, native frequency ordering.
struct SpectralField {
    std::shared_ptr<const Grid1D> grid;
    int components = 0;
    std::vector<cplx> coeffs;

    std::span<cplx> comp(int c) {
        return {coeffs.data() + static_cast<size_t>(c) * grid->n, static_cast<size_t>(grid->n)};
    }
    std::span<const cplx> comp(int c) const {
        return {coeffs.data() + static_cast<size_t>(c) * grid->n, static_cast<size_t>(grid->n)};
    }
};

// Normalized-forward DFT: u_hat_k = (1/N) sum_j u_j e^{-i xi_k x_j}, so the
// transform of a constant c has u_hat_0 = c. Rejects non-finite input.
SpectralField dft(const Field& u);
Field idft(const SpectralField& s);

// |u|_s = ( sum_c sum_k (1+|xi_k|^2)^s |u_hat_k|^2 )^{1/2}
double sobolev_norm(const Field& u, double s);
// <u,v>_s = sum (1+|xi_k|^2)^s u_hat_k conj(v_hat_k); linear in u.
cplx sobolev_inner(const Field& u, const Field& v, double s);

// Friedrichs mollifier with Gaussian profile chi_hat(eps xi) = e^{-(eps xi)^2/2}.
struct Mollifier {
    double epsilon = 0.0;
    std::vector<double> multiplier;  // chi_hat(eps xi_k) per native-ordered frequency

    static Mollifier make(const Grid1D& grid, double epsilon);
};

Field mollify(const Field& u, const Mollifier& m);

// Tight constant k(eps,eps') = max_k |chi_hat(eps xi_k) - chi_hat(eps' xi_k)| / (1+|xi_k|^2)^{1/2};
// |(J_eps - J_eps')v|_s <= k(eps,eps') |v|_{s+1} holds per frequency on the grid.
double mollifier_gap(double eps, double eps2, const Grid1D& grid);

// Exact spectral d/dx, component-wise.
Field spectral_derivative(const Field& u);

// Real-sample helper used for coefficient fields.
std::vector<double> spectral_derivative(const Grid1D& grid, std::span<const double> samples);

// 2/3-rule dealiasing: zero all modes with |k| > N/3.
void dealias_two_thirds(Field& u);

}  // namespace hspde
