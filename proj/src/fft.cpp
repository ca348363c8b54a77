#include "ckn/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace ckn {

namespace {

// One plan pair per grid size, on plan-owned aligned buffers. All FFTW entry
// points (planning and execution) run under the same mutex: transforms stay
// single threaded and identical no matter the worker count.
struct PlanSet {
    int n = 0;
    double* real = nullptr;
    fftw_complex* cplx = nullptr;
    fftw_plan fwd{};
    fftw_plan bwd{};

    explicit PlanSet(int n_) : n(n_) {
        const std::size_t nr = static_cast<std::size_t>(n) * n * n;
        const std::size_t nc = static_cast<std::size_t>(n) * n * (n / 2 + 1);
        real = fftw_alloc_real(nr);
        cplx = fftw_alloc_complex(nc);
        fwd = fftw_plan_dft_r2c_3d(n, n, n, real, cplx, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_3d(n, n, n, cplx, real, FFTW_ESTIMATE);
    }
    PlanSet(const PlanSet&) = delete;
    ~PlanSet() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(real);
        fftw_free(cplx);
    }
};

std::mutex g_fftw_mutex;
std::map<int, std::unique_ptr<PlanSet>>& plan_cache() {
    static std::map<int, std::unique_ptr<PlanSet>> cache;
    return cache;
}

PlanSet& plans_for(int n) {
    auto& cache = plan_cache();
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<PlanSet>(n)).first;
    return *it->second;
}

} // namespace

SpectralScalar analyze(const ScalarLattice& u) {
    SpectralScalar out(u.grid);
    const std::size_t nr = u.grid.cells();
    const std::size_t nc = u.grid.spectral_size();
    const double scale = 1.0 / static_cast<double>(nr);
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    PlanSet& p = plans_for(u.grid.n);
    for (std::size_t i = 0; i < nr; ++i) p.real[i] = u.v[i];
    fftw_execute(p.fwd);
    for (std::size_t i = 0; i < nc; ++i)
        out.m[i] = std::complex<double>(p.cplx[i][0] * scale, p.cplx[i][1] * scale);
    return out;
}

ScalarLattice synthesize(const SpectralScalar& m) {
    ScalarLattice out(m.grid);
    const std::size_t nr = m.grid.cells();
    const std::size_t nc = m.grid.spectral_size();
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    PlanSet& p = plans_for(m.grid.n);
    for (std::size_t i = 0; i < nc; ++i) {
        p.cplx[i][0] = m.m[i].real();
        p.cplx[i][1] = m.m[i].imag();
    }
    fftw_execute(p.bwd);
    for (std::size_t i = 0; i < nr; ++i) out.v[i] = p.real[i];
    return out;
}

SpectralVector analyze(const VectorLattice& u) {
    SpectralVector out(u.grid);
    for (int d = 0; d < 3; ++d) {
        ScalarLattice comp;
        comp.grid = u.grid;
        comp.v = u.c[d];
        out.c[d] = analyze(comp);
    }
    return out;
}

VectorLattice synthesize(const SpectralVector& m) {
    VectorLattice out(m.grid);
    for (int d = 0; d < 3; ++d) out.c[d] = synthesize(m.c[d]).v;
    return out;
}

} // namespace ckn
