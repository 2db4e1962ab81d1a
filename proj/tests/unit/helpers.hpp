#pragma once

#include <cmath>

#include "hspde/grid.hpp"
#include "hspde/rng.hpp"

namespace hspde::testing {

inline Field random_complex_field(std::shared_ptr<const Grid1D> grid, std::uint64_t seed,
                                  int components = 1) {
    Field u(grid, components);
    const CounterRng rng(seed, 0x7e57ull);
    std::uint64_t c = 0;
    for (int i = 0; i < components; ++i)
        for (int j = 0; j < grid->n; ++j) {
            const double re = rng.normal(c++);
            const double im = rng.normal(c++);
            u.at(i, j) = cplx(re, im);
        }
    return u;
}

inline double rel_l2_error(const Field& got, const Field& want) {
    Field diff = got;
    diff -= want;
    const double denom = sobolev_norm(want, 0.0);
    return sobolev_norm(diff, 0.0) / (denom > 0.0 ? denom : 1.0);
}

}  // namespace hspde::testing
