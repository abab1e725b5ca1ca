// Times the scan kernels under the serial reference and the OpenMP path on
// identical inputs.  The outputs must match bit for bit; any mismatch is a
// bug, so it aborts the run.

#include "fpt/batteries.hpp"
#include "fpt/maps.hpp"
#include "fpt/sampling.hpp"
#include "fpt/viscosity.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace fpt;

namespace {

double time_ms(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const std::string& name, double serial_ms, double parallel_ms, bool identical) {
    if (!identical) {
        std::fprintf(stderr, "%s: serial and parallel results differ\n", name.c_str());
        std::exit(1);
    }
    std::printf("%-28s %10.1f ms %10.1f ms   x%.2f\n", name.c_str(), serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

}  // namespace

int main() {
    const int d = 8;
    const long n = 200000;
    const std::uint64_t seed = 2024;

    SplitMix64 rng(seed);
    Matrix rot = Matrix::Identity(d, d);
    {
        // random orthogonal via QR of a Gaussian matrix
        Matrix g(d, d);
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) g(r, c) = rng.normal();
        Eigen::HouseholderQR<Matrix> qr(g);
        rot = qr.householderQ();
    }
    Matrix coord = Matrix::Zero(3, d);
    coord(0, 0) = coord(1, 1) = coord(2, 2) = 1.0;
    const SeminormFamily family({Seminorm(Matrix::Identity(d, d), "euclid"), Seminorm(coord, "head3")});
    const Region domain = Region::ball(Vector::Zero(d), 10.0);
    const MapSpec map = MapSpec::affine(0.9 * rot, Vector::Zero(d), 0.9);

    std::printf("%-28s %13s %13s %8s\n", "kernel", "serial", "openmp", "speedup");

    {
        ModulusReport serial, parallel;
        const double ts = time_ms([&] { serial = verify_modulus(map, family, domain, n, seed, ExecPolicy::Serial); });
        const double tp = time_ms([&] { parallel = verify_modulus(map, family, domain, n, seed, ExecPolicy::Parallel); });
        bool same = serial.per_seminorm.size() == parallel.per_seminorm.size();
        for (std::size_t i = 0; same && i < serial.per_seminorm.size(); ++i)
            same = serial.per_seminorm[i].estimate == parallel.per_seminorm[i].estimate &&
                   serial.per_seminorm[i].pairs_used == parallel.per_seminorm[i].pairs_used;
        report("modulus_scan", ts, tp, same);
    }

    {
        DualityBatteryResult serial, parallel;
        const std::vector<int> dims{1, 2, 3, 5, 8};
        const double ts = time_ms([&] { serial = duality_identity_battery(dims, n / 4, seed, ExecPolicy::Serial); });
        const double tp = time_ms([&] { parallel = duality_identity_battery(dims, n / 4, seed, ExecPolicy::Parallel); });
        const bool same =
            serial.pairing_identity.max_violation == parallel.pairing_identity.max_violation &&
            serial.dual_norm_identity.max_violation == parallel.dual_norm_identity.max_violation;
        report("duality_battery", ts, tp, same);
    }

    {
        BatteryResult serial, parallel;
        const std::vector<int> dims{1, 2, 3, 5, 8};
        const double ts = time_ms([&] { serial = subgradient_battery(dims, n, seed, ExecPolicy::Serial); });
        const double tp = time_ms([&] { parallel = subgradient_battery(dims, n, seed, ExecPolicy::Parallel); });
        report("subgradient_battery", ts, tp,
               serial.max_violation == parallel.max_violation && serial.skipped == parallel.skipped);
    }

    {
        // independent inner solves from one cold start (validation sweep)
        const MapSpec f = MapSpec::contraction_toward(Vector::Ones(d), 0.5);
        const Schedule schedule = Schedule::harmonic(400);
        ImplicitTrajectory serial, parallel;
        const double ts = time_ms([&] {
            serial = run_implicit_scheme_cold(map, f, 0.5, schedule, family, domain, 1e-10, 200000,
                                              ExecPolicy::Serial);
        });
        const double tp = time_ms([&] {
            parallel = run_implicit_scheme_cold(map, f, 0.5, schedule, family, domain, 1e-10, 200000,
                                                ExecPolicy::Parallel);
        });
        bool same = serial.steps.size() == parallel.steps.size();
        for (std::size_t i = 0; same && i < serial.steps.size(); ++i)
            same = (serial.steps[i].z - parallel.steps[i].z).norm() == 0.0;
        report("cold_scheme_sweep", ts, tp, same);
    }

    return 0;
}
