#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "axiflow/gas.hpp"
#include "axiflow/nozzle.hpp"

namespace axiflow {

/// Boundary datum on the truncation stations ξ = ±L.
enum class EndData {
  /// ψ = m r²/f², the stream function of the unshielded uniform flow.
  kStreamExtension,
  /// ψ = m((r+δ)² − δ²)/((f+δ)² − δ²), the uniform flow of the shielded
  /// equation; coincides with kStreamExtension at δ = 0.
  kShieldedUniform,
};

std::string_view to_string(EndData data);
EndData end_data_from_string(std::string_view name);

struct SolverOptions {
  /// Converged when ‖∇J‖₂ ≤ tolerance·max(1, m).
  double tolerance = 1e-10;
  int max_iterations = 100;
  double sufficient_decrease = 1e-4;
  int max_backtracks = 50;
  EndData end_data = EndData::kStreamExtension;
};

/// Raised when the Newton system cannot be factorized.
class LinearSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Discrete stream function on a mapped grid plus solver metadata.
struct StreamSolution {
  std::shared_ptr<const MappedGrid> grid;
  std::vector<double> psi;  ///< nodal values, grid.index(i, j) order
  double m = 0.0;           ///< wall value, m₀/2π
  double energy = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Some quadrature point had |∇ψ/(r+δ)|² above the truncation start m̃².
  bool cutoff_active = false;
  /// Largest |∇ψ/(r+δ)|² over quadrature points.
  double max_momentum = 0.0;
  EndData end_data = EndData::kStreamExtension;
  std::vector<double> energy_history;

  double delta() const { return grid->delta(); }
  double m0() const;
};

/// ψ = m r²/f(x)² for 0 ≤ r ≤ f(x).
double dirichlet_data(double x, double r, double m, const NozzleProfile& profile);

/// Nodal vector equal to the boundary datum on ∂Ω_L and to the same
/// expression (m σ² for kStreamExtension) inside.
std::vector<double> dirichlet_extension(const MappedGrid& grid, double m, EndData end_data);

/// Overwrite boundary nodes of `psi` with the Dirichlet datum.
void apply_dirichlet(const MappedGrid& grid, double m, EndData end_data, std::span<double> psi);

/// Interior unknown numbering: -1 on boundary nodes.
std::vector<long> interior_numbering(const MappedGrid& grid);

/// J_L(ψ) = Σ_q w_q (r_q+δ) F(|∇ψ_q|²/(r_q+δ)²).
double assemble_energy(std::span<const double> psi, const MappedGrid& grid, const GasModel& gas);

/// ∂J_L/∂ψ at interior nodes, in interior_numbering order.
Eigen::VectorXd assemble_gradient(std::span<const double> psi, const MappedGrid& grid,
                                  const GasModel& gas);

/// Second derivative of J_L with respect to interior nodal values.
Eigen::SparseMatrix<double> assemble_hessian(std::span<const double> psi, const MappedGrid& grid,
                                             const GasModel& gas);

/// Largest |∇ψ/(r+δ)|² over quadrature points.
double max_quadrature_momentum(std::span<const double> psi, const MappedGrid& grid);

/// Minimize J_L by damped Newton with backtracking. `init`, if non-empty,
/// must already carry the boundary datum; otherwise the Dirichlet
/// extension is used.
StreamSolution newton_solve(std::shared_ptr<const MappedGrid> grid, const GasModel& gas, double m,
                            const SolverOptions& options = {},
                            std::span<const double> init = {});

struct ResidualNorms {
  double max = 0.0;
  double l2 = 0.0;
};

/// Finite-difference evaluation of div(∇ψ / ((r+δ) H̃(|∇ψ/(r+δ)|²))) at
/// interior nodes at least two rows from every edge of the grid and with
/// |x| ≤ L − end_margin. The end datum is not a solution of the shielded
/// equation for δ > 0, so a corner layer sits at the axis next to ξ = ±L.
ResidualNorms pde_residual(const StreamSolution& solution, const GasModel& gas,
                           double end_margin = 0.0);

/// Same, for an arbitrary nodal field on a grid.
ResidualNorms pde_residual(std::span<const double> psi, const MappedGrid& grid,
                           const GasModel& gas, double end_margin = 0.0);

/// ‖ψ_h − ψ_exact‖ in L²(Ω_L, dx dr) with ψ_h the bilinear interpolant,
/// by 3×3 Gauss quadrature per cell.
double l2_error(std::span<const double> psi, const MappedGrid& grid,
                const std::function<double(double, double)>& exact);

/// max |ψ_h − ψ_exact| over nodes.
double nodal_max_error(std::span<const double> psi, const MappedGrid& grid,
                       const std::function<double(double, double)>& exact);

}  // namespace axiflow
