#include "cpf/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

namespace cpf {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t& state) {
    return (splitmix64(state) >> 11) * 0x1.0p-53;
}

}  // namespace

std::uint64_t trajectory_seed(std::uint64_t base_seed, long trajectory_index) {
    std::uint64_t s = base_seed + 0x9e3779b97f4a7c15ULL *
                                      (static_cast<std::uint64_t>(trajectory_index) + 1);
    return splitmix64(s);
}

double OUPathSampler::gauss() {
    // Box-Muller; platform-independent arithmetic only.
    double u1 = uniform01(state_);
    double u2 = uniform01(state_);
    while (u1 <= 0.0) u1 = uniform01(state_);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

OUPathSampler::OUPathSampler(const ClassicalNoiseModel& model, double step,
                             std::uint64_t seed)
    : decay_(std::exp(-step / model.tau_c)),
      kick_(std::sqrt((model.gamma / (2.0 * model.tau_c)) *
                      (1.0 - std::exp(-2.0 * step / model.tau_c)))),
      state_(seed) {
    // Stationary marginal: variance gamma / 2 tau_c.
    xi_ = std::sqrt(model.gamma / (2.0 * model.tau_c)) * gauss();
}

double OUPathSampler::advance() {
    xi_ = xi_ * decay_ + kick_ * gauss();
    return xi_;
}

void OUPathSampler::set_step(const ClassicalNoiseModel& model, double step) {
    decay_ = std::exp(-step / model.tau_c);
    kick_ = std::sqrt((model.gamma / (2.0 * model.tau_c)) *
                      (1.0 - std::exp(-2.0 * step / model.tau_c)));
}

namespace {

struct AffineReadout {
    double a0;
    Complex w;  // Tr(E rho') = a0 + 2 Re(w e^{-2 i phi})
};

AffineReadout readout_coeffs(const ComplexMatrix& e, const ComplexMatrix& rho) {
    AffineReadout r;
    r.a0 = (e(0, 0) * rho(0, 0) + e(1, 1) * rho(1, 1)).real();
    r.w = e(1, 0) * rho(0, 1);
    return r;
}

}  // namespace

OracleResult mc_joint_prob(const ClassicalNoiseModel& model,
                           const MeasurementScheme& scheme, const DensityMatrix& rho0,
                           double t, double tau, long n_traj, std::uint64_t seed) {
    if (n_traj < 1000) throw validation_error("mc_joint_prob requires n_traj >= 1000");
    const std::size_t ny = scheme.middle.size();
    const std::size_t nx = scheme.first.size();
    const std::size_t nz = scheme.last.size();

    PostFirstStates pfs = build_post_first_states(rho0, scheme.first);
    std::vector<AffineReadout> past(ny * nx), future(nz * ny);
    for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t x = 0; x < nx; ++x)
            past[y * nx + x] = readout_coeffs(scheme.middle.effect(y), pfs.rho_x[x]);
    for (std::size_t z = 0; z < nz; ++z)
        for (std::size_t y = 0; y < ny; ++y)
            future[z * ny + y] =
                readout_coeffs(scheme.last.effect(z), scheme.middle.effect(y));

    const double h_target = model.tau_c / 50.0;
    const int n1 = std::max(1, static_cast<int>(std::ceil(t / h_target)));
    const int n2 = std::max(1, static_cast<int>(std::ceil(tau / h_target)));
    const double h1 = (t > 0.0) ? t / n1 : 0.0;
    const double h2 = (tau > 0.0) ? tau / n2 : 0.0;

    const std::size_t n_entries = nz * ny * nx;
    const long block_size = 16384;
    const long n_blocks = (n_traj + block_size - 1) / block_size;
    std::vector<std::vector<double>> block_sum(n_blocks), block_sq(n_blocks);

    auto run_block = [&](long b) {
        std::vector<double> sum(n_entries, 0.0), sq(n_entries, 0.0);
        const long lo = b * block_size;
        const long hi = std::min(n_traj, lo + block_size);
        for (long k = lo; k < hi; ++k) {
            // One continuous path across the middle measurement; the phase
            // integrals use the trapezoid of the sampled path.
            OUPathSampler path(model, h1 > 0.0 ? h1 : 1.0, trajectory_seed(seed, k));
            double phi1 = 0.0, phi2 = 0.0;
            if (t > 0.0) {
                double prev = path.value();
                for (int i = 0; i < n1; ++i) {
                    double next = path.advance();
                    phi1 += 0.5 * (prev + next) * h1;
                    prev = next;
                }
            }
            if (tau > 0.0) {
                path.set_step(model, h2);
                double prev = path.value();
                for (int i = 0; i < n2; ++i) {
                    double next = path.advance();
                    phi2 += 0.5 * (prev + next) * h2;
                    prev = next;
                }
            }
            Complex ph1 = std::polar(1.0, -2.0 * phi1);
            Complex ph2 = std::polar(1.0, -2.0 * phi2);
            for (std::size_t z = 0; z < nz; ++z)
                for (std::size_t y = 0; y < ny; ++y) {
                    const AffineReadout& f2 = future[z * ny + y];
                    double v2 = f2.a0 + 2.0 * (f2.w * ph2).real();
                    for (std::size_t x = 0; x < nx; ++x) {
                        const AffineReadout& f1 = past[y * nx + x];
                        double v1 = f1.a0 + 2.0 * (f1.w * ph1).real();
                        double p = v1 * v2;
                        sum[(z * ny + y) * nx + x] += p;
                        sq[(z * ny + y) * nx + x] += p * p;
                    }
                }
        }
        block_sum[b] = std::move(sum);
        block_sq[b] = std::move(sq);
    };

    unsigned n_threads = std::max(1u, std::thread::hardware_concurrency());
    if (n_threads <= 1 || n_blocks == 1) {
        for (long b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        std::atomic<long> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < n_threads; ++w)
            pool.emplace_back([&] {
                for (long b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1))
                    run_block(b);
            });
        for (auto& th : pool) th.join();
    }

    // Fixed block-order reduction: identical bytes for any thread count.
    std::vector<double> sum(n_entries, 0.0), sq(n_entries, 0.0);
    for (long b = 0; b < n_blocks; ++b)
        for (std::size_t i = 0; i < n_entries; ++i) {
            sum[i] += block_sum[b][i];
            sq[i] += block_sq[b][i];
        }

    OracleResult r;
    r.joint = JointDistribution(nz, ny, nx);
    r.stderr_table.assign(n_entries, 0.0);
    r.n_trajectories = n_traj;
    for (std::size_t i = 0; i < n_entries; ++i) {
        double mean = sum[i] / n_traj;
        double var = std::max(0.0, sq[i] / n_traj - mean * mean);
        r.joint.table[i] = mean;
        r.stderr_table[i] = std::sqrt(var / n_traj);
    }
    return r;
}

}  // namespace cpf
