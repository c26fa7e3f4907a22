#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "cfris/transforms.hpp"

namespace cfris {

using LinOp = std::function<CVec(const CVec&)>;

/// One convex quadratic constraint x^H P x + 2 Re(x^H q) + r <= 0, P PSD.
/// A null `quadratic` means P = 0 (affine constraint).
struct QuadraticConstraint {
    LinOp quadratic;
    CVec linear;
    double offset = 0.0;
};

/// Canonical concave maximization over complex vectors:
///   maximize  constant + 2 Re(c^H x) - x^H M x      (M PSD)
///   s.t.      x^H P_i x + 2 Re(x^H q_i) + r_i <= 0
///             |x_n| <= magnitude_bound[n]           (optional)
///             Im(x_n) = 0 for real coordinates      (optional)
/// Operators are matrix-free; PSD is verified probabilistically on entry to
/// the solver.
struct ConvexQcqp {
    Eigen::Index dim = 0;
    LinOp curvature;  // x -> M x; null means M = 0
    CVec linear;
    double constant = 0.0;
    std::vector<QuadraticConstraint> constraints;
    RVec magnitude_bound;           // size 0 = unbounded
    std::vector<bool> real_coords;  // size 0 = all complex

    double objective(const CVec& x) const;
    double constraint_value(std::size_t i, const CVec& x) const;
    double max_violation(const CVec& x) const;
};

enum class SolveStatus { kOptimal, kMaxIters, kInfeasible };

struct SolveResult {
    CVec x;
    double objective = 0.0;
    double feasibility = 0.0;   // max signed constraint value at x
    double stationarity = 0.0;  // scaled projected-gradient residual
    int iterations = 0;
    SolveStatus status = SolveStatus::kMaxIters;
};

struct SolverOptions {
    double tol_feas = 1e-7;
    double tol_kkt = 1e-6;
    int max_iters = 5000;         // total inner-iteration budget
    std::ostream* diag = nullptr; // optional per-iteration residual log
};

inline SolverOptions solver_options(const SystemConfig& cfg) {
    return {cfg.tol_feas, cfg.tol_kkt, cfg.solver_max_iters, nullptr};
}

/// Throws std::invalid_argument if a curvature/constraint operator fails the
/// probabilistic PSD check (smallest probed eigenvalue < -1e-9 * ||op||).
void verify_psd(const ConvexQcqp& p);

/// Projected spectral-gradient method with augmented-Lagrangian treatment of
/// the quadratic constraints; magnitude bounds handled by exact projection.
/// Never returns a point worse than a feasible warm start.
SolveResult solve_qcqp(const ConvexQcqp& p, const CVec& x0, const SolverOptions& opt);

/// Beamforming block update: concave surrogate in W under per-AP power,
/// per-RIS power and linearized SINR constraints, expanded at w_prev.
Beamformer solve_beamforming(const ChannelSet& ch, const RisState& ris,
                             const SlackState& slack, const Beamformer& w_prev,
                             const SystemConfig& cfg);

/// RIS block update: concave surrogate in theta under magnitude bounds,
/// per-RIS power and linearized SINR constraints, expanded at ris_prev.
RisState solve_ris(const ChannelSet& ch, const Beamformer& w_fixed, const SlackState& slack,
                   const RisState& ris_prev, const SystemConfig& cfg);

}  // namespace cfris
