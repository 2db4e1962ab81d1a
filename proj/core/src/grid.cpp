#include "hspde/grid.hpp"

#include <cmath>

#include "hspde/fft.hpp"

namespace hspde {

std::shared_ptr<const Grid1D> Grid1D::make(int n, double length) {
    if (n < 8 || (n & (n - 1)) != 0)
        throw ConfigError("grid size must be a power of two >= 8, got " + std::to_string(n));
    if (!(length > 0.0) || !std::isfinite(length))
        throw ConfigError("grid length must be positive and finite");
    auto g = std::make_shared<Grid1D>();
    g->n = n;
    g->length = length;
    g->dx = length / n;
    g->nodes.resize(static_cast<size_t>(n));
    g->freqs.resize(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) g->nodes[static_cast<size_t>(j)] = g->dx * j;
    for (int i = 0; i < n; ++i) {
        const int k = (i < n / 2) ? i : i - n;
        g->freqs[static_cast<size_t>(i)] = kTwoPi * k / length;
    }
    return g;
}

bool same_grid(const Grid1D& a, const Grid1D& b) {
    return a.n == b.n && a.length == b.length;
}

Field::Field(std::shared_ptr<const Grid1D> grid, int components)
    : grid_(std::move(grid)), components_(components) {
    if (components_ < 1) throw ConfigError("field needs at least one component");
    values_.assign(static_cast<size_t>(components_) * grid_->n, cplx(0.0, 0.0));
}

Field Field::zeros(std::shared_ptr<const Grid1D> grid, int components) {
    return Field(std::move(grid), components);
}

Field Field::from_function(std::shared_ptr<const Grid1D> grid,
                           const std::function<cplx(double)>& f) {
    Field u(grid, 1);
    for (int j = 0; j < u.size(); ++j) u.at(0, j) = f(u.grid().nodes[static_cast<size_t>(j)]);
    return u;
}

std::span<cplx> Field::comp(int c) {
    return {values_.data() + static_cast<size_t>(c) * grid_->n, static_cast<size_t>(grid_->n)};
}

std::span<const cplx> Field::comp(int c) const {
    return {values_.data() + static_cast<size_t>(c) * grid_->n, static_cast<size_t>(grid_->n)};
}

bool Field::finite() const {
    for (const cplx& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

namespace {
void check_compatible(const Field& a, const Field& b) {
    if (!same_grid(a.grid(), b.grid()) || a.components() != b.components())
        throw GridMismatchError("fields live on different grids or component counts");
}
}  // namespace

Field& Field::operator+=(const Field& o) {
    check_compatible(*this, o);
    for (size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

Field& Field::operator-=(const Field& o) {
    check_compatible(*this, o);
    for (size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

Field& Field::operator*=(cplx a) {
    for (cplx& v : values_) v *= a;
    return *this;
}

Field& Field::axpy(cplx a, const Field& x) {
    check_compatible(*this, x);
    for (size_t i = 0; i < values_.size(); ++i) values_[i] += a * x.values_[i];
    return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(cplx a, Field x) { return x *= a; }

SpectralField dft(const Field& u) {
    if (!u.finite()) throw NonFiniteError("dft: non-finite field values");
    const int n = u.size();
    SpectralField s;
    s.grid = u.grid_ptr();
    s.components = u.components();
    s.coeffs.resize(static_cast<size_t>(s.components) * n);
    const double scale = 1.0 / n;
    for (int c = 0; c < s.components; ++c) {
        fft_forward(u.comp(c).data(), s.comp(c).data(), n);
        for (cplx& v : s.comp(c)) v *= scale;
    }
    return s;
}

Field idft(const SpectralField& s) {
    Field u(s.grid, s.components);
    const int n = s.grid->n;
    for (int c = 0; c < s.components; ++c) fft_inverse(s.comp(c).data(), u.comp(c).data(), n);
    return u;
}

double sobolev_norm(const Field& u, double s) {
    if (!std::isfinite(s)) throw ConfigError("sobolev_norm: index must be finite");
    const SpectralField sp = dft(u);
    const auto& xi = u.grid().freqs;
    double acc = 0.0;
    for (int c = 0; c < sp.components; ++c) {
        auto coeffs = sp.comp(c);
        for (size_t k = 0; k < xi.size(); ++k)
            acc += std::pow(1.0 + xi[k] * xi[k], s) * std::norm(coeffs[k]);
    }
    return std::sqrt(acc);
}

cplx sobolev_inner(const Field& u, const Field& v, double s) {
    if (!same_grid(u.grid(), v.grid()) || u.components() != v.components())
        throw GridMismatchError("sobolev_inner: mismatched fields");
    const SpectralField su = dft(u);
    const SpectralField sv = dft(v);
    const auto& xi = u.grid().freqs;
    cplx acc(0.0, 0.0);
    for (int c = 0; c < su.components; ++c) {
        auto a = su.comp(c);
        auto b = sv.comp(c);
        for (size_t k = 0; k < xi.size(); ++k)
            acc += std::pow(1.0 + xi[k] * xi[k], s) * a[k] * std::conj(b[k]);
    }
    return acc;
}

Mollifier Mollifier::make(const Grid1D& grid, double epsilon) {
    if (!(epsilon > 0.0)) throw ConfigError("mollifier epsilon must be positive");
    Mollifier m;
    m.epsilon = epsilon;
    m.multiplier.resize(grid.freqs.size());
    for (size_t k = 0; k < grid.freqs.size(); ++k) {
        const double z = epsilon * grid.freqs[k];
        m.multiplier[k] = std::exp(-0.5 * z * z);
    }
    return m;
}

Field mollify(const Field& u, const Mollifier& m) {
    SpectralField s = dft(u);
    for (int c = 0; c < s.components; ++c) {
        auto coeffs = s.comp(c);
        for (size_t k = 0; k < m.multiplier.size(); ++k) coeffs[k] *= m.multiplier[k];
    }
    return idft(s);
}

double mollifier_gap(double eps, double eps2, const Grid1D& grid) {
    if (!(eps > 0.0) || !(eps2 > 0.0)) throw ConfigError("mollifier_gap: eps must be positive");
    double k_const = 0.0;
    for (double xi : grid.freqs) {
        const double a = std::exp(-0.5 * eps * eps * xi * xi);
        const double b = std::exp(-0.5 * eps2 * eps2 * xi * xi);
        const double val = std::abs(a - b) / std::sqrt(1.0 + xi * xi);
        if (val > k_const) k_const = val;
    }
    return k_const;
}

Field spectral_derivative(const Field& u) {
    SpectralField s = dft(u);
    const auto& xi = u.grid().freqs;
    for (int c = 0; c < s.components; ++c) {
        auto coeffs = s.comp(c);
        for (size_t k = 0; k < xi.size(); ++k) coeffs[k] *= cplx(0.0, xi[k]);
    }
    return idft(s);
}

std::vector<double> spectral_derivative(const Grid1D& grid, std::span<const double> samples) {
    std::vector<cplx> buf(samples.begin(), samples.end());
    std::vector<cplx> hat(buf.size());
    fft_forward(buf.data(), hat.data(), grid.n);
    for (size_t k = 0; k < hat.size(); ++k) hat[k] *= cplx(0.0, grid.freqs[k] / grid.n);
    fft_inverse(hat.data(), buf.data(), grid.n);
    std::vector<double> out(buf.size());
    for (size_t j = 0; j < buf.size(); ++j) out[j] = buf[j].real();
    return out;
}

void dealias_two_thirds(Field& u) {
    SpectralField s = dft(u);
    const int n = u.size();
    const int kcut = n / 3;
    for (int c = 0; c < s.components; ++c) {
        auto coeffs = s.comp(c);
        for (int i = 0; i < n; ++i) {
            const int k = (i < n / 2) ? i : i - n;
            if (k > kcut || k < -kcut) coeffs[static_cast<size_t>(i)] = cplx(0.0, 0.0);
        }
    }
    u = idft(s);
}

}  // namespace hspde
