#pragma once

#include <random>

#include "spinwehrl/spin_ops.hpp"

namespace gen {

using Rng = std::mt19937_64;

/// Direction uniform on the sphere, length uniform in [min_tau, max_tau].
spinwehrl::BlochVector bloch(Rng& rng, double max_tau = 1.0, double min_tau = 0.0);

/// Ginibre-type state of random rank in [1, 2J+1].
spinwehrl::DensityMatrix density(Rng& rng, spinwehrl::SpinQuantumNumber j);

/// Full-rank state whose smallest eigenvalue is at least `floor`.
spinwehrl::DensityMatrix mixed_density(Rng& rng, spinwehrl::SpinQuantumNumber j, double floor = 1e-3);

/// Flat-Dirichlet populations, ordered m = J..-J.
Eigen::VectorXd populations(Rng& rng, spinwehrl::SpinQuantumNumber j);

double uniform(Rng& rng, double lo, double hi);
int integer(Rng& rng, int lo, int hi);

}  // namespace gen
