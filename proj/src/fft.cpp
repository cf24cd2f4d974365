#include "volterra/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <numeric>

#include "volterra/errors.hpp"

namespace volterra {

namespace {

// The FFTW planner is not re-entrant; plan execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void run(std::vector<cplx>& data, const std::vector<int>& dims, int sign) {
    if (dims.empty()) return;
    std::size_t total = 1;
    for (int d : dims) {
        if (d < 1) throw ContractViolation("fft: non-positive dimension");
        total *= static_cast<std::size_t>(d);
    }
    if (data.size() != total) throw ContractViolation("fft: data size does not match dimensions");
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buf, buf, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace

void fft_forward(std::vector<cplx>& data, const std::vector<int>& dims) { run(data, dims, FFTW_FORWARD); }

void fft_inverse(std::vector<cplx>& data, const std::vector<int>& dims) {
    run(data, dims, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= scale;
}

std::vector<int> cube_dims(int rank, int n) { return std::vector<int>(static_cast<std::size_t>(rank), n); }

std::vector<cplx> dft(const std::vector<cplx>& x) {
    std::vector<cplx> y = x;
    fft_forward(y, {static_cast<int>(y.size())});
    return y;
}

std::vector<cplx> idft(const std::vector<cplx>& X) {
    std::vector<cplx> y = X;
    fft_inverse(y, {static_cast<int>(y.size())});
    return y;
}

}  // namespace volterra
