#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "qhdkit/kernels.hpp"
#include "qhdkit/pauli.hpp"
#include "qhdkit/schedule.hpp"

namespace qhdkit {

enum class Backend { Direct, Embedded };

/// Which computational basis the amplitudes are indexed by.
struct BasisInfo {
    Backend backend = Backend::Direct;
    int n = 0;         // variables (direct)
    int N = 0;         // grid points per dimension (direct)
    int n_qubits = 0;  // embedded
};

struct StateVector {
    std::vector<std::complex<double>> amps;
    BasisInfo basis;

    std::size_t dimension() const { return amps.size(); }
    double norm() const;
    /// |amp|^2 per basis index.
    std::vector<double> probabilities() const;
};

struct EvolveConfig {
    int steps = 400;
    std::uint64_t seed = 0;
    int shots = 1000;
    std::size_t direct_cap = std::size_t{1} << 20;
    std::size_t embedded_cap = std::size_t{1} << 18;
    kernels::Exec exec = kernels::Exec::Parallel;
};

/// Uniform superposition over `dimension` basis states.
StateVector initial_state(std::size_t dimension);

/// Integrate the Schrodinger evolution from the uniform superposition
/// under the scheduled generator, by symmetric splitting between the
/// diagonal potential group and the kinetic group with coefficients
/// frozen at step midpoints. Every sub-propagator is unitary; aborts
/// with EvolveError if the final norm drifts beyond 1e-6.
StateVector evolve(const DiscretizedHamiltonian& dh, const Schedule& schedule,
                   const EvolveConfig& cfg);
StateVector evolve(const HamiltonianIR& ir, const Schedule& schedule,
                   const EvolveConfig& cfg);

/// Seeded i.i.d. computational-basis measurements.
std::vector<std::uint64_t> sample(const StateVector& psi, int shots, std::uint64_t seed);

/// Bitstring for an embedded-basis outcome (site 0 first).
std::string outcome_bitstring(std::uint64_t index, int n_qubits);
/// Grid multi-index for a direct-basis outcome (variable 0 first).
std::vector<int> outcome_multi_index(std::uint64_t index, int n, int N);

struct ConvergenceReport {
    int steps = 0;
    double tv_distance = 0.0;
    bool pass = false;
};

/// Re-run with doubled step count and report the total-variation distance
/// between the two outcome distributions; passes at <= 1e-3.
ConvergenceReport convergence_check(const DiscretizedHamiltonian& dh, const Schedule& schedule,
                                    const EvolveConfig& cfg);
ConvergenceReport convergence_check(const HamiltonianIR& ir, const Schedule& schedule,
                                    const EvolveConfig& cfg);

/// Debug dump: int64 dimension then interleaved re/im float64 pairs.
void dump_state(const StateVector& psi, const std::string& path);

}  // namespace qhdkit
