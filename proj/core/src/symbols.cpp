#include "hspde/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hspde/fft.hpp"
#include "hspde/rng.hpp"

namespace hspde {

struct SeparableSymbol::Impl {
    std::shared_ptr<const Grid1D> grid;
    int components = 1;
    double order = 0.0;
    std::vector<SymbolTerm> terms;
    double growth = 0.0;
    double speed = 0.0;
};

namespace {

// out_i(j) = sum_l coef[i][l](j) in_l(j); empty coef acts as the identity.
void apply_coef(const std::vector<cplx>& coef, bool conj_transpose, const Field& in, Field& out) {
    const int n = in.size();
    const int d = in.components();
    if (coef.empty()) {
        out = in;
        return;
    }
    for (int i = 0; i < d; ++i) {
        auto oi = out.comp(i);
        std::fill(oi.begin(), oi.end(), cplx(0.0, 0.0));
        for (int l = 0; l < d; ++l) {
            const size_t base = conj_transpose ? (static_cast<size_t>(l) * d + i) * n
                                               : (static_cast<size_t>(i) * d + l) * n;
            auto il = in.comp(l);
            for (int j = 0; j < n; ++j) {
                const cplx c = conj_transpose ? std::conj(coef[base + static_cast<size_t>(j)])
                                              : coef[base + static_cast<size_t>(j)];
                oi[static_cast<size_t>(j)] += c * il[static_cast<size_t>(j)];
            }
        }
    }
}

void apply_multiplier(const std::vector<cplx>& mult, bool conjugate, SpectralField& s) {
    for (int c = 0; c < s.components; ++c) {
        auto coeffs = s.comp(c);
        for (size_t k = 0; k < mult.size(); ++k)
            coeffs[k] *= conjugate ? std::conj(mult[k]) : mult[k];
    }
}

void check_operand(const SeparableSymbol& sym, const Field& u) {
    if (!same_grid(sym.grid(), u.grid()))
        throw GridMismatchError("apply_pdo: symbol and field grids differ");
    if (sym.components() != u.components())
        throw GridMismatchError("apply_pdo: component count mismatch");
}

std::vector<cplx> derivative_multiplier(const Grid1D& grid) {
    std::vector<cplx> m(grid.freqs.size());
    for (size_t k = 0; k < m.size(); ++k) m[k] = cplx(0.0, grid.freqs[k]);
    return m;
}

std::vector<cplx> to_cplx(std::span<const double> v) {
    return std::vector<cplx>(v.begin(), v.end());
}

}  // namespace

SeparableSymbol::SeparableSymbol(std::shared_ptr<const Grid1D> grid, int components, double order,
                                 std::vector<SymbolTerm> terms) {
    if (terms.empty()) throw ConfigError("SeparableSymbol: term list must be nonempty");
    if (components < 1 || components > 2)
        throw ConfigError("SeparableSymbol: components must be 1 or 2");
    auto impl = std::make_shared<Impl>();
    impl->grid = std::move(grid);
    impl->components = components;
    impl->order = order;
    const size_t n = static_cast<size_t>(impl->grid->n);
    const size_t coef_len = static_cast<size_t>(components) * components * n;
    for (const SymbolTerm& t : terms) {
        if (t.multiplier.size() != n)
            throw ConfigError("SeparableSymbol: multiplier must have one sample per frequency");
        if (!t.post_coef.empty() && t.post_coef.size() != coef_len)
            throw ConfigError("SeparableSymbol: post coefficient has wrong size");
        if (!t.pre_coef.empty() && t.pre_coef.size() != coef_len)
            throw ConfigError("SeparableSymbol: pre coefficient has wrong size");
    }
    impl->terms = std::move(terms);

    double growth = 0.0;
    double speed = 0.0;
    for (const SymbolTerm& t : impl->terms) {
        double coef_mag = 1.0;
        auto scan = [&](const std::vector<cplx>& c) {
            if (c.empty()) return 1.0;
            double m = 0.0;
            for (const cplx& v : c) m = std::max(m, std::abs(v));
            return m * components;
        };
        coef_mag = scan(t.post_coef) * scan(t.pre_coef);
        double mult_growth = 0.0;
        double mult_speed = 0.0;
        for (size_t k = 0; k < n; ++k) {
            const double xi = std::abs(impl->grid->freqs[k]);
            const double m = std::abs(t.multiplier[k]);
            mult_growth = std::max(mult_growth, m / std::pow(1.0 + xi, order));
            mult_speed = std::max(mult_speed, m / std::max(1.0, xi));
        }
        growth = std::max(growth, coef_mag * mult_growth);
        speed += coef_mag * mult_speed;
    }
    impl->growth = growth;
    impl->speed = speed;
    impl_ = std::move(impl);
}

const Grid1D& SeparableSymbol::grid() const { return *impl_->grid; }
const std::shared_ptr<const Grid1D>& SeparableSymbol::grid_ptr() const { return impl_->grid; }
int SeparableSymbol::components() const { return impl_->components; }
double SeparableSymbol::order() const { return impl_->order; }
std::span<const SymbolTerm> SeparableSymbol::terms() const { return impl_->terms; }
double SeparableSymbol::multiplier_growth_constant() const { return impl_->growth; }
double SeparableSymbol::advective_speed() const { return impl_->speed; }

Field apply_pdo(const SeparableSymbol& sym, const Field& u) {
    check_operand(sym, u);
    Field out = Field::zeros(u.grid_ptr(), u.components());
    Field work(u.grid_ptr(), u.components());
    for (const SymbolTerm& t : sym.terms()) {
        apply_coef(t.pre_coef, false, u, work);
        SpectralField s = dft(work);
        apply_multiplier(t.multiplier, false, s);
        Field v = idft(s);
        apply_coef(t.post_coef, false, v, work);
        out += work;
    }
    return out;
}

Field apply_adjoint(const SeparableSymbol& sym, const Field& u) {
    check_operand(sym, u);
    Field out = Field::zeros(u.grid_ptr(), u.components());
    Field work(u.grid_ptr(), u.components());
    for (const SymbolTerm& t : sym.terms()) {
        apply_coef(t.post_coef, true, u, work);
        SpectralField s = dft(work);
        apply_multiplier(t.multiplier, true, s);
        Field v = idft(s);
        apply_coef(t.pre_coef, true, v, work);
        out += work;
    }
    return out;
}

SeparableSymbol make_symmetrized_transport(std::shared_ptr<const Grid1D> grid,
                                           std::span<const double> alpha,
                                           std::span<const cplx> a0) {
    if (alpha.size() != static_cast<size_t>(grid->n))
        throw ConfigError("make_symmetrized_transport: alpha needs one sample per node");
    std::vector<SymbolTerm> terms;
    std::vector<cplx> half_alpha(alpha.size());
    for (size_t j = 0; j < alpha.size(); ++j) {
        if (!std::isfinite(alpha[j]))
            throw NonFiniteError("make_symmetrized_transport: alpha not finite");
        half_alpha[j] = cplx(0.5 * alpha[j], 0.0);
    }
    SymbolTerm left;  // 1/2 alpha d/dx
    left.multiplier = derivative_multiplier(*grid);
    left.post_coef = half_alpha;
    SymbolTerm right;  // 1/2 d/dx (alpha .)
    right.multiplier = left.multiplier;
    right.pre_coef = std::move(half_alpha);
    terms.push_back(std::move(left));
    terms.push_back(std::move(right));
    if (!a0.empty()) {
        SymbolTerm zero;
        zero.multiplier.assign(static_cast<size_t>(grid->n), cplx(1.0, 0.0));
        zero.post_coef.assign(a0.begin(), a0.end());
        terms.push_back(std::move(zero));
    }
    return SeparableSymbol(std::move(grid), 1, 1.0, std::move(terms));
}

SeparableSymbol make_transport(std::shared_ptr<const Grid1D> grid, std::span<const double> alpha,
                               std::span<const cplx> a0) {
    std::vector<SymbolTerm> terms;
    SymbolTerm adv;
    adv.multiplier = derivative_multiplier(*grid);
    adv.post_coef = to_cplx(alpha);
    terms.push_back(std::move(adv));
    if (!a0.empty()) {
        SymbolTerm zero;
        zero.multiplier.assign(static_cast<size_t>(grid->n), cplx(1.0, 0.0));
        zero.post_coef.assign(a0.begin(), a0.end());
        terms.push_back(std::move(zero));
    }
    return SeparableSymbol(std::move(grid), 1, 1.0, std::move(terms));
}

SeparableSymbol make_multiplication(std::shared_ptr<const Grid1D> grid,
                                    std::span<const cplx> a0) {
    SymbolTerm t;
    t.multiplier.assign(static_cast<size_t>(grid->n), cplx(1.0, 0.0));
    t.post_coef.assign(a0.begin(), a0.end());
    std::vector<SymbolTerm> terms{std::move(t)};
    return SeparableSymbol(std::move(grid), 1, 0.0, std::move(terms));
}

SeparableSymbol make_term_symbol(std::shared_ptr<const Grid1D> grid, double order,
                                 std::vector<cplx> x_coef, std::vector<cplx> xi_mult) {
    SymbolTerm t;
    t.multiplier = std::move(xi_mult);
    t.post_coef = std::move(x_coef);
    std::vector<SymbolTerm> terms{std::move(t)};
    return SeparableSymbol(std::move(grid), 1, order, std::move(terms));
}

SeparableSymbol symbol_sum(const SeparableSymbol& a, const SeparableSymbol& b) {
    if (!same_grid(a.grid(), b.grid()) || a.components() != b.components())
        throw GridMismatchError("symbol_sum: incompatible symbols");
    std::vector<SymbolTerm> terms(a.terms().begin(), a.terms().end());
    terms.insert(terms.end(), b.terms().begin(), b.terms().end());
    return SeparableSymbol(a.grid_ptr(), a.components(), std::max(a.order(), b.order()),
                           std::move(terms));
}

const std::vector<double> TimeSymbolFamily::kNoTimes{};

TimeSymbolFamily TimeSymbolFamily::constant(SeparableSymbol sym) {
    TimeSymbolFamily f;
    f.impl_ = std::move(sym);
    return f;
}

TimeSymbolFamily TimeSymbolFamily::table(std::vector<double> times,
                                         std::vector<SeparableSymbol> symbols) {
    if (times.size() != symbols.size() || times.empty())
        throw ConfigError("TimeSymbolFamily::table: need matching nonempty times/symbols");
    if (!std::is_sorted(times.begin(), times.end()))
        throw ConfigError("TimeSymbolFamily::table: times must be sorted");
    TimeSymbolFamily f;
    f.impl_ = Table{std::move(times), std::move(symbols)};
    return f;
}

TimeSymbolFamily TimeSymbolFamily::from_function(std::function<SeparableSymbol(double)> fn,
                                                 std::vector<double> sample_times) {
    if (!fn) throw ConfigError("TimeSymbolFamily::from_function: empty callback");
    TimeSymbolFamily f;
    f.impl_ = Callback{std::move(fn), std::move(sample_times)};
    return f;
}

bool TimeSymbolFamily::empty() const {
    return std::holds_alternative<std::monostate>(impl_);
}

SeparableSymbol TimeSymbolFamily::at(double t) const {
    if (const auto* sym = std::get_if<SeparableSymbol>(&impl_)) return *sym;
    if (const auto* tab = std::get_if<Table>(&impl_)) {
        auto it = std::upper_bound(tab->times.begin(), tab->times.end(), t);
        size_t idx = (it == tab->times.begin()) ? 0 : static_cast<size_t>(it - tab->times.begin()) - 1;
        return tab->symbols[idx];
    }
    if (const auto* cb = std::get_if<Callback>(&impl_)) return cb->fn(t);
    throw ConfigError("TimeSymbolFamily: evaluating the zero family");
}

const std::vector<double>& TimeSymbolFamily::sample_times() const {
    if (const auto* tab = std::get_if<Table>(&impl_)) return tab->times;
    if (const auto* cb = std::get_if<Callback>(&impl_)) return cb->times;
    return kNoTimes;
}

double TimeSymbolFamily::max_adjacent_deviation() const {
    const auto* tab = std::get_if<Table>(&impl_);
    if (!tab || tab->symbols.size() < 2) return 0.0;
    double dev = 0.0;
    double scale = 0.0;
    for (size_t i = 0; i + 1 < tab->symbols.size(); ++i) {
        auto ta = tab->symbols[i].terms();
        auto tb = tab->symbols[i + 1].terms();
        if (ta.size() != tb.size()) return std::numeric_limits<double>::infinity();
        for (size_t k = 0; k < ta.size(); ++k) {
            auto cmp = [&](const std::vector<cplx>& u, const std::vector<cplx>& v) {
                if (u.size() != v.size()) {
                    dev = std::numeric_limits<double>::infinity();
                    return;
                }
                for (size_t j = 0; j < u.size(); ++j) {
                    dev = std::max(dev, std::abs(u[j] - v[j]));
                    scale = std::max(scale, std::abs(u[j]));
                }
            };
            cmp(ta[k].post_coef, tb[k].post_coef);
            cmp(ta[k].pre_coef, tb[k].pre_coef);
        }
    }
    return scale > 0.0 ? dev / scale : dev;
}

namespace {

// Multiply by the Sobolev weight (1+|xi|^2)^p in frequency.
Field sobolev_weight(const Field& u, double p) {
    SpectralField s = dft(u);
    const auto& xi = u.grid().freqs;
    for (int c = 0; c < s.components; ++c) {
        auto coeffs = s.comp(c);
        for (size_t k = 0; k < xi.size(); ++k)
            coeffs[k] *= std::pow(1.0 + xi[k] * xi[k], p);
    }
    return idft(s);
}

Field random_field(std::shared_ptr<const Grid1D> grid, int comps, const CounterRng& rng,
                   std::uint64_t tag) {
    Field u(grid, comps);
    std::uint64_t c = tag * 1000003ull;
    for (int i = 0; i < comps; ++i)
        for (int j = 0; j < grid->n; ++j) {
            const double re = rng.normal(c++);
            const double im = rng.normal(c++);
            u.at(i, j) = cplx(re, im);
        }
    return u;
}

// ||T||_{H^s -> H^s} via power iteration on T# T (T assumed self-adjoint in
// <.,.>_0, which holds for A, B, L, M). The norm is taken on the 2/3-resolved
// band: coefficient multiplication aliases the top third of the spectrum and
// the raw collocation commutator grows like O(N) there, which says nothing
// about the symbol family the diagnostic is probing.
double operator_norm(const std::function<Field(const Field&)>& op,
                     std::shared_ptr<const Grid1D> grid, int comps, double s, int trials,
                     int iterations, std::uint64_t seed) {
    const CounterRng rng(seed, 0x6f70ull);
    auto band_op = [&](const Field& u) {
        Field w = op(u);
        dealias_two_thirds(w);
        return w;
    };
    double best = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        Field v = random_field(grid, comps, rng, static_cast<std::uint64_t>(trial));
        dealias_two_thirds(v);
        double nv = sobolev_norm(v, s);
        if (nv == 0.0) continue;
        v *= cplx(1.0 / nv, 0.0);
        double lambda = 0.0;
        for (int it = 0; it < iterations; ++it) {
            Field tv = band_op(v);
            const double tn = sobolev_norm(tv, s);
            const double cand = tn * tn;  // |Tv|_s^2 with |v|_s = 1
            if (!std::isfinite(cand)) return std::numeric_limits<double>::infinity();
            const bool converged = std::abs(cand - lambda) <= 1e-6 * std::max(1.0, cand);
            lambda = cand;
            if (tn == 0.0 || converged) break;
            Field g = sobolev_weight(band_op(sobolev_weight(tv, s)), -s);
            const double gn = sobolev_norm(g, s);
            if (gn == 0.0) break;
            g *= cplx(1.0 / gn, 0.0);
            v = std::move(g);
        }
        best = std::max(best, lambda);
    }
    return std::sqrt(best);
}

}  // namespace

OperatorDiagnostics estimate_conditions(const TimeSymbolFamily& fam_a,
                                        const TimeSymbolFamily& fam_b, double s, int trials,
                                        int iterations, std::uint64_t seed) {
    if (trials < 1) throw ConfigError("estimate_conditions: trials >= 1 required");
    OperatorDiagnostics d;
    d.s = s;
    d.trials = trials;
    d.iterations = iterations;
    if (fam_a.empty() && fam_b.empty()) return d;

    std::vector<double> times{0.0};
    for (double t : fam_a.sample_times()) times.push_back(t);
    for (double t : fam_b.sample_times()) times.push_back(t);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    const TimeSymbolFamily& any = fam_a.empty() ? fam_b : fam_a;
    auto grid = any.at(times.front()).grid_ptr();
    const int comps = any.at(times.front()).components();

    for (double t : times) {
        if (!fam_b.empty()) {
            const SeparableSymbol b = fam_b.at(t);
            auto opB = [&](const Field& u) { return apply_pdo(b, u) + apply_adjoint(b, u); };
            d.norm_B = std::max(d.norm_B,
                                operator_norm(opB, grid, comps, s, trials, iterations, seed));
        }
        if (fam_a.empty()) continue;
        const SeparableSymbol a = fam_a.at(t);
        auto opA = [&](const Field& u) { return apply_pdo(a, u) + apply_adjoint(a, u); };
        auto opL = [&](const Field& u) {
            return opA(apply_pdo(a, u)) + apply_adjoint(a, opA(u));
        };
        auto opM = [&](const Field& u) {
            return opL(apply_pdo(a, u)) + apply_adjoint(a, opL(u));
        };
        d.norm_A = std::max(d.norm_A, operator_norm(opA, grid, comps, s, trials, iterations, seed));
        d.norm_L = std::max(d.norm_L, operator_norm(opL, grid, comps, s, trials, iterations, seed));
        d.norm_M = std::max(d.norm_M, operator_norm(opM, grid, comps, s, trials, iterations, seed));
    }
    return d;
}

}  // namespace hspde
