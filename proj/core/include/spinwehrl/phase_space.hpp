#pragma once

#include <complex>
#include <iosfwd>
#include <memory>
#include <vector>

#include "spinwehrl/spin_ops.hpp"

namespace spinwehrl {

/// Tensor-product quadrature on the unit sphere: Gauss-Legendre in cos(theta)
/// times the periodic trapezoid rule in phi. Nodes never touch the poles.
///
/// Node (i, k) lives at flat index i * n_phi + k. Weights integrate
/// f(theta, phi) against dOmega = sin(theta) dtheta dphi, so they sum to 4 pi.
///
/// theta_nodes / phi_nodes describe the rings in the grid's own frame, whose
/// pole may be tilted away from the z axis (see rotated_grid). The node_*
/// arrays hold the lab-frame angles of every node and are what integrands use.
struct SphereGrid {
  int n_theta = 0;
  int n_phi = 0;
  std::vector<double> theta_nodes;
  std::vector<double> cos_theta;
  std::vector<double> sin_theta;
  std::vector<double> phi_nodes;
  std::vector<double> weights;

  double pole_theta = 0.0;
  double pole_phi = 0.0;
  std::vector<double> node_theta;
  std::vector<double> node_phi;
  std::vector<double> node_cos_theta;
  std::vector<double> node_sin_theta;

  [[nodiscard]] bool tilted() const noexcept { return pole_theta != 0.0 || pole_phi != 0.0; }

  [[nodiscard]] std::size_t size() const noexcept { return weights.size(); }
  [[nodiscard]] std::size_t index(int i, int k) const noexcept {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_phi) + static_cast<std::size_t>(k);
  }
  /// sum_nodes w * f
  [[nodiscard]] double integrate(const std::vector<double>& values) const;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

inline constexpr int kDefaultThetaNodes = 96;
inline constexpr int kDefaultPhiNodes = 192;

/// Requires n_theta >= 8 and n_phi >= 8 (InvalidGrid otherwise).
SphereGrid make_grid(int n_theta, int n_phi);
GridPtr make_shared_grid(int n_theta = kDefaultThetaNodes, int n_phi = kDefaultPhiNodes);

/// Same ring and node count, with the grid's north pole moved to the lab
/// direction (pole_theta, pole_phi).
///
/// With nonzero clustering the rings are rebuilt as two Gauss-Legendre panels,
/// one per hemisphere of the grid frame, each graded toward its own pole by
/// 1 -/+ cos(theta) = (e^{c x} - 1) / (e^c - 1), x in [0, 1]. Use it when Q or
/// an integrand weight has a narrow feature at a pole.
SphereGrid rotated_grid(const SphereGrid& base, double pole_theta, double pole_phi, double clustering_north = 0.0,
                        double clustering_south = 0.0);

/// Grid suited to integrating 1/Q-weighted quantities of rho.
///
/// Near a spin coherent state (1 - |<J>|/J < 1e-2) Q has one deep minimum at
/// -<J>; the grid is tilted so its pole sits there and clustered toward it.
/// A damping bath with 0 < nbar < 0.05 makes the weight 1/(2 nbar + 1 - cos)
/// sharp at the lab north pole, which gets clustering of its own when the
/// two features are compatible (both on the z axis) or when only the bath one
/// is present. Otherwise the base grid is returned unchanged.
GridPtr adapted_grid(const DensityMatrix& rho, const GridPtr& base, double nbar = -1.0);

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// <J,m|Omega> for m = J..-J with psi = 0, plus exact angular derivatives.
struct CoherentStateVector {
  Eigen::VectorXcd amplitudes;
  Eigen::VectorXcd d_theta;
  Eigen::VectorXcd d_phi;
};

CoherentStateVector coherent_state(SpinQuantumNumber j, double theta, double phi);

/// Husimi function Q(Omega) = <Omega|rho|Omega> and its angular derivatives on
/// every grid node. Q is real, so both derivatives are stored as reals.
struct HusimiField {
  GridPtr grid;
  SpinQuantumNumber spin{1};
  std::vector<double> q;
  std::vector<double> dq_dtheta;
  std::vector<double> dq_dphi;

  /// (2J+1)/(4 pi) sum w q; equals 1 for a trace-one state.
  [[nodiscard]] double normalization() const;
};

HusimiField husimi(const DensityMatrix& rho, GridPtr grid);

/// Husimi transform of an arbitrary (not necessarily positive or unit-trace)
/// Hermitian operator; used for phase-space images of D(rho).
HusimiField husimi_of_operator(SpinQuantumNumber j, const Matrix& op, GridPtr grid);

/// Q at a single point.
double husimi_at(const DensityMatrix& rho, double theta, double phi);

/// S = -(2J+1)/(4 pi) int Q ln Q dOmega, with 0 ln 0 = 0.
double wehrl_entropy(const HusimiField& field);

/// Closed form of the spin-1/2 Wehrl entropy as a function of |tau|.
double wehrl_entropy_spin_half(double tau);

/// Phase-space images of [J+, rho], [J-, rho] and [Jz, rho].
struct PhaseSpaceCurrents {
  std::vector<cplx> j_plus;
  std::vector<cplx> j_minus;
  std::vector<cplx> j_z;
};

PhaseSpaceCurrents phase_space_currents(const HusimiField& field);

/// Writes "theta,phi,q" rows for every node.
void write_husimi_csv(const HusimiField& field, std::ostream& out);

// ---------------------------------------------------------------------------
// Two-mode (Schwinger boson) representation.

/// Wirtinger partial derivatives of V, treating alpha, beta and their
/// conjugates as independent variables.
struct VPartials {
  cplx d_alpha;
  cplx d_beta;
  cplx d_alpha_conj;
  cplx d_beta_conj;
};

/// V(alpha, beta) = sum rho_{m,m'} conj(a)^{J+m} conj(b)^{J-m} a^{J+m'} b^{J-m'}
///                  / sqrt((J+m)!(J-m)!(J+m')!(J-m')!)
/// A homogeneous polynomial of degree 2J in (alpha, beta).
class VFunction {
 public:
  explicit VFunction(const DensityMatrix& rho);

  [[nodiscard]] SpinQuantumNumber spin() const noexcept { return j_; }
  [[nodiscard]] double value(cplx alpha, cplx beta) const;
  [[nodiscard]] VPartials partials(cplx alpha, cplx beta) const;

  /// Q(alpha, beta) = exp(-|alpha|^2 - |beta|^2) V / pi^2.
  [[nodiscard]] double husimi(cplx alpha, cplx beta) const;

 private:
  SpinQuantumNumber j_;
  Matrix weighted_;  // rho_{m,m'} / sqrt(...)
};

/// Currents of the two-mode representation at one phase-space point.
struct TssCurrents {
  cplx j_plus;   // (conj(a) d_{conj b} - b d_a) V
  cplx j_minus;  // (conj(b) d_{conj a} - a d_b) V
  cplx j_z;      // (conj(a) d_{conj a} + b d_b - a d_a - conj(b) d_{conj b}) V / 2
  cplx f;        // ((nbar+1) b d_a - nbar conj(a) d_{conj b}) V
};

TssCurrents tss_correspondences(const VFunction& v, cplx alpha, cplx beta, double nbar);

struct AngleAction {
  double action = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double psi = 0.0;
};

/// alpha = sqrt(I) cos(theta/2) e^{-i(phi+psi)/2},
/// beta  = sqrt(I) sin(theta/2) e^{ i(phi-psi)/2}.
/// phi is reported in [0, 2 pi). Throws UndefinedAngles at the origin.
AngleAction angle_action_map(cplx alpha, cplx beta);

struct ModePair {
  cplx alpha;
  cplx beta;
};

ModePair angle_action_inverse(const AngleAction& aa);

}  // namespace spinwehrl
