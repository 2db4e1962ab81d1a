#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "hspde/presets.hpp"
#include "hspde/symbols.hpp"

using namespace hspde;
using hspde::testing::random_complex_field;
using hspde::testing::rel_l2_error;

namespace {

SeparableSymbol derivative_symbol(std::shared_ptr<const Grid1D> g) {
    std::vector<cplx> ones(static_cast<size_t>(g->n), cplx(1.0, 0.0));
    std::vector<cplx> ixi(static_cast<size_t>(g->n));
    for (int k = 0; k < g->n; ++k)
        ixi[static_cast<size_t>(k)] = cplx(0.0, g->freqs[static_cast<size_t>(k)]);
    return make_term_symbol(g, 1.0, std::move(ones), std::move(ixi));
}

// 8th-order central finite difference of the first derivative.
Field fd8_derivative(const Field& u) {
    const Grid1D& g = u.grid();
    const int n = g.n;
    Field out(u.grid_ptr(), 1);
    const double c1 = 4.0 / 5.0, c2 = -1.0 / 5.0, c3 = 4.0 / 105.0, c4 = -1.0 / 280.0;
    for (int j = 0; j < n; ++j) {
        auto at = [&](int off) { return u.at(0, ((j + off) % n + n) % n); };
        out.at(0, j) = (c1 * (at(1) - at(-1)) + c2 * (at(2) - at(-2)) + c3 * (at(3) - at(-3)) +
                        c4 * (at(4) - at(-4))) /
                       g.dx;
    }
    return out;
}

}  // namespace

TEST_SUITE_BEGIN("symbols");

TEST_CASE("identity symbol leaves fields unchanged") {
    auto g = Grid1D::make(64);
    std::vector<cplx> ones_c(static_cast<size_t>(g->n), cplx(1.0, 0.0));
    std::vector<cplx> ones_m(static_cast<size_t>(g->n), cplx(1.0, 0.0));
    const SeparableSymbol id = make_term_symbol(g, 0.0, ones_c, ones_m);
    const Field u = random_complex_field(g, 3);
    CHECK(rel_l2_error(apply_pdo(id, u), u) < 1e-13);
}

TEST_CASE("derivative multiplier on a Fourier eigenfunction") {
    auto g = Grid1D::make(64);
    const SeparableSymbol D = derivative_symbol(g);
    const Field u = presets::complex_exponential(g, 1);
    Field want = u;
    want *= cplx(0.0, kTwoPi / g->length);
    CHECK(rel_l2_error(apply_pdo(D, u), want) < 1e-12);
}

TEST_CASE("variable-coefficient transport against a finite-difference oracle") {
    auto g = Grid1D::make(512);
    const auto alpha = presets::affine_sine(*g, 1.0, 0.5);
    const SeparableSymbol a = make_transport(g, alpha);
    const Field u = presets::gaussian_bump(g, 0.5 * g->length, 0.7);
    const Field got = apply_pdo(a, u);
    Field want = fd8_derivative(u);
    for (int j = 0; j < g->n; ++j) want.at(0, j) *= alpha[static_cast<size_t>(j)];
    CHECK(rel_l2_error(got, want) < 1e-6);
}

TEST_CASE("linearity of apply_pdo") {
    auto g = Grid1D::make(64);
    const auto alpha = presets::affine_sine(*g, 1.0, 0.5);
    const SeparableSymbol a = make_transport(g, alpha);
    const Field u = random_complex_field(g, 10);
    const Field v = random_complex_field(g, 11);
    const cplx lam(0.7, -0.3);
    Field lin = u;
    lin *= lam;
    lin += v;
    Field want = apply_pdo(a, u);
    want *= lam;
    want += apply_pdo(a, v);
    CHECK(rel_l2_error(apply_pdo(a, lin), want) < 1e-12);
}

TEST_CASE("exact duality of apply_pdo and apply_adjoint") {
    auto g = Grid1D::make(64);
    const auto alpha = presets::affine_sine(*g, 1.0, 0.5);
    std::vector<cplx> a0(static_cast<size_t>(g->n));
    for (int j = 0; j < g->n; ++j) a0[static_cast<size_t>(j)] = cplx(0.2, 0.4);
    const SeparableSymbol a = make_transport(g, alpha, a0);
    for (std::uint64_t k = 0; k < 100; ++k) {
        const Field u = random_complex_field(g, 1000 + k);
        const Field v = random_complex_field(g, 2000 + k);
        const cplx lhs = sobolev_inner(apply_pdo(a, u), v, 0.0);
        const cplx rhs = sobolev_inner(u, apply_adjoint(a, v), 0.0);
        CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
    }
}

TEST_CASE("double adjoint reproduces the operator") {
    auto g = Grid1D::make(64);
    const auto alpha = presets::affine_sine(*g, 0.8, 0.4, 2);
    const SeparableSymbol a = make_transport(g, alpha);
    const Field u = random_complex_field(g, 77);
    // (a*)* acting through the duality: <a**u, v> = <u, a* v>* ... realized by
    // swapping the roles; numerically check <a u, v> = <u, a* v> both ways.
    const Field v = random_complex_field(g, 78);
    const cplx d1 = sobolev_inner(apply_pdo(a, u), v, 0.0) -
                    sobolev_inner(u, apply_adjoint(a, v), 0.0);
    const cplx d2 = sobolev_inner(apply_adjoint(a, u), v, 0.0) -
                    sobolev_inner(u, apply_pdo(a, v), 0.0);
    CHECK(std::abs(d1) < 1e-11);
    CHECK(std::abs(d2) < 1e-11);
}

TEST_CASE("constant-coefficient adjoint is the conjugate multiplier") {
    auto g = Grid1D::make(64);
    std::vector<cplx> m(static_cast<size_t>(g->n));
    for (int k = 0; k < g->n; ++k)
        m[static_cast<size_t>(k)] = cplx(0.3, 0.1 * g->freqs[static_cast<size_t>(k)]);
    std::vector<cplx> mconj(m);
    for (cplx& v : mconj) v = std::conj(v);
    std::vector<cplx> ones(static_cast<size_t>(g->n), cplx(1.0, 0.0));
    const SeparableSymbol a = make_term_symbol(g, 1.0, ones, m);
    const SeparableSymbol aconj = make_term_symbol(g, 1.0, ones, mconj);
    const Field u = random_complex_field(g, 99);
    CHECK(rel_l2_error(apply_adjoint(a, u), apply_pdo(aconj, u)) < 1e-12);
}

TEST_CASE("symmetrized transport is exactly skew-adjoint") {
    auto g = Grid1D::make(128);
    SUBCASE("alpha = 1 reduces to the pure derivative") {
        const auto alpha = presets::constant_coefficient(*g, 1.0);
        const SeparableSymbol a = make_symmetrized_transport(g, alpha);
        const Field u = presets::complex_exponential(g, 3);
        Field want = u;
        want *= cplx(0.0, 3.0 * kTwoPi / g->length);
        CHECK(rel_l2_error(apply_pdo(a, u), want) < 1e-12);
    }
    SUBCASE("variable alpha: <a u, v> = -<u, a v>") {
        const auto alpha = presets::affine_sine(*g, 1.0, 0.5);
        const SeparableSymbol a = make_symmetrized_transport(g, alpha);
        for (std::uint64_t k = 0; k < 20; ++k) {
            const Field u = random_complex_field(g, 300 + k);
            const Field v = random_complex_field(g, 400 + k);
            const cplx lhs = sobolev_inner(apply_pdo(a, u), v, 0.0);
            const cplx rhs = sobolev_inner(u, apply_pdo(a, v), 0.0);
            CHECK(std::abs(lhs + rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
        }
    }
    SUBCASE("real quadratic form vanishes") {
        const auto alpha = presets::affine_sine(*g, 1.0, 0.5);
        const SeparableSymbol a = make_symmetrized_transport(g, alpha);
        const Field u = random_complex_field(g, 55);
        const cplx quad = sobolev_inner(apply_pdo(a, u), u, 0.0);
        CHECK(std::abs(quad.real()) < 1e-10 * std::norm(sobolev_norm(u, 0.0)));
    }
}

TEST_CASE("purely imaginary zeroth order contributes nothing to A") {
    auto g = Grid1D::make(64);
    std::vector<cplx> a0(static_cast<size_t>(g->n), cplx(0.0, 0.7));
    const SeparableSymbol a = make_multiplication(g, a0);
    const Field u = random_complex_field(g, 66);
    Field Au = apply_pdo(a, u);
    Au += apply_adjoint(a, u);
    CHECK(sobolev_norm(Au, 0.0) < 1e-12);
}

TEST_CASE("order consistency of the derivative multiplier") {
    auto g = Grid1D::make(128);
    const SeparableSymbol D = derivative_symbol(g);
    CHECK(D.multiplier_growth_constant() <= 1.0 + 1e-12);
    for (std::uint64_t k = 0; k < 5; ++k) {
        const Field u = random_complex_field(g, 500 + k);
        for (double s : {-1.0, 0.0, 1.0})
            CHECK(sobolev_norm(apply_pdo(D, u), s) <= sobolev_norm(u, s + 1.0) * (1.0 + 1e-12));
    }
}

TEST_CASE("matrix symbols (d' = 2) match a dense hand computation") {
    auto g = Grid1D::make(32);
    const int n = g->n;
    // coef[i][l](x): node-dependent 2x2 complex matrix.
    std::vector<cplx> coef(static_cast<size_t>(4 * n));
    for (int j = 0; j < n; ++j) {
        const double x = g->nodes[static_cast<size_t>(j)];
        coef[static_cast<size_t>(0 * n + j)] = cplx(1.0, 0.0);
        coef[static_cast<size_t>(1 * n + j)] = cplx(0.5 * std::sin(x), 0.0);
        coef[static_cast<size_t>(2 * n + j)] = cplx(0.0, 0.3);
        coef[static_cast<size_t>(3 * n + j)] = cplx(std::cos(x), 0.1);
    }
    std::vector<cplx> mult(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k)
        mult[static_cast<size_t>(k)] = cplx(0.0, g->freqs[static_cast<size_t>(k)]);
    SymbolTerm term;
    term.multiplier = mult;
    term.post_coef = coef;
    const SeparableSymbol a(g, 2, 1.0, {term});

    const Field u = random_complex_field(g, 123, 2);
    // Hand computation: v_c = idft(m uhat_c), out_i = sum_l coef[i][l] v_l.
    SpectralField s = dft(u);
    for (int c = 0; c < 2; ++c)
        for (int k = 0; k < n; ++k)
            s.comp(c)[static_cast<size_t>(k)] *= mult[static_cast<size_t>(k)];
    const Field v = idft(s);
    Field want(g, 2);
    for (int j = 0; j < n; ++j) {
        want.at(0, j) = coef[static_cast<size_t>(0 * n + j)] * v.at(0, j) +
                        coef[static_cast<size_t>(1 * n + j)] * v.at(1, j);
        want.at(1, j) = coef[static_cast<size_t>(2 * n + j)] * v.at(0, j) +
                        coef[static_cast<size_t>(3 * n + j)] * v.at(1, j);
    }
    CHECK(rel_l2_error(apply_pdo(a, u), want) < 1e-12);

    // Duality also holds for matrix symbols.
    const Field w = random_complex_field(g, 124, 2);
    const cplx lhs = sobolev_inner(apply_pdo(a, u), w, 0.0);
    const cplx rhs = sobolev_inner(u, apply_adjoint(a, w), 0.0);
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("time symbol family: table lookup and continuity diagnostic") {
    auto g = Grid1D::make(32);
    std::vector<double> times{0.0, 0.5};
    std::vector<SeparableSymbol> syms{
        make_transport(g, presets::constant_coefficient(*g, 1.0)),
        make_transport(g, presets::constant_coefficient(*g, 1.001))};
    const TimeSymbolFamily fam = TimeSymbolFamily::table(times, syms);
    CHECK(fam.at(0.25).terms()[0].post_coef[0].real() == doctest::Approx(1.0));
    CHECK(fam.at(0.75).terms()[0].post_coef[0].real() == doctest::Approx(1.001));
    CHECK(fam.at(0.5).terms()[0].post_coef[0].real() == doctest::Approx(1.001));
    CHECK(fam.max_adjacent_deviation() == doctest::Approx(0.001 / 1.001).epsilon(1e-6));
    CHECK(TimeSymbolFamily().empty());
}

TEST_CASE("estimate_conditions: skew-adjoint transport reports zero") {
    auto g = Grid1D::make(64);
    const auto alpha = presets::affine_sine(*g, 1.0, 0.5);
    const TimeSymbolFamily fam_a =
        TimeSymbolFamily::constant(make_symmetrized_transport(g, alpha));
    const OperatorDiagnostics d = estimate_conditions(fam_a, TimeSymbolFamily(), 0.0, 4, 32);
    CHECK(d.norm_A < 1e-8);
    CHECK(d.norm_L < 1e-8);
    CHECK(d.norm_M < 1e-8);
    CHECK(d.norm_B == 0.0);
}

TEST_CASE("estimate_conditions: multiplication operator norm oracle") {
    auto g = Grid1D::make(128);
    // a = beta(x) real: A = 2 beta, with L2 operator norm max |2 beta|.
    const auto beta = presets::affine_sine(*g, 1.0, 0.3);
    std::vector<cplx> bc(beta.begin(), beta.end());
    const TimeSymbolFamily fam_a = TimeSymbolFamily::constant(make_multiplication(g, bc));
    const OperatorDiagnostics d = estimate_conditions(fam_a, TimeSymbolFamily(), 0.0, 8, 256);
    double want = 0.0;
    for (double b : beta) want = std::max(want, std::abs(2.0 * b));
    CHECK(d.norm_A == doctest::Approx(want).epsilon(0.05));
    CHECK(d.norm_A <= want * (1.0 + 1e-6));
}

TEST_CASE("estimate_conditions: non-symmetrized transport stays O(1) under refinement") {
    double prev = 0.0;
    std::vector<double> norms;
    for (int n : {64, 128, 256}) {
        auto g = Grid1D::make(n);
        const auto alpha = presets::affine_sine(*g, 1.0, 0.5);
        const TimeSymbolFamily fam_a = TimeSymbolFamily::constant(make_transport(g, alpha));
        const OperatorDiagnostics d = estimate_conditions(fam_a, TimeSymbolFamily(), 0.0, 4, 64);
        CHECK(d.norm_A > 0.1);
        norms.push_back(d.norm_A);
        prev = d.norm_A;
    }
    (void)prev;
    // No growth with N beyond a modest factor.
    CHECK(norms[2] <= 1.2 * norms[0] + 1e-9);
}

TEST_SUITE_END();
