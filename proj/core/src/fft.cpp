#include "hspde/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace hspde {
namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

// One plan pair per size, created lazily. FFTW plan execution with the
// new-array interface is thread-safe; only the planner needs the lock.
// FFTW_UNALIGNED lets us execute on arbitrary caller buffers.
PlanPair& plans_for(int n) {
    static std::mutex mtx;
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    fftw_complex* a = fftw_alloc_complex(static_cast<size_t>(n));
    fftw_complex* b = fftw_alloc_complex(static_cast<size_t>(n));
    PlanPair p;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p.fwd = fftw_plan_dft_1d(n, a, b, FFTW_FORWARD, flags);
    p.inv = fftw_plan_dft_1d(n, a, b, FFTW_BACKWARD, flags);
    fftw_free(a);
    fftw_free(b);
    return cache.emplace(n, p).first->second;
}

fftw_complex* as_fftw(std::complex<double>* p) {
    return reinterpret_cast<fftw_complex*>(p);
}

}  // namespace

void fft_forward(const std::complex<double>* in, std::complex<double>* out, int n) {
    PlanPair& p = plans_for(n);
    fftw_execute_dft(p.fwd, as_fftw(const_cast<std::complex<double>*>(in)), as_fftw(out));
}

void fft_inverse(const std::complex<double>* in, std::complex<double>* out, int n) {
    PlanPair& p = plans_for(n);
    fftw_execute_dft(p.inv, as_fftw(const_cast<std::complex<double>*>(in)), as_fftw(out));
}

}  // namespace hspde
