#include "cfris/solver.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

namespace cfris {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double re_inner(const CVec& a, const CVec& b) { return a.dot(b).real(); }

}  // namespace

double ConvexQcqp::objective(const CVec& x) const {
    double quad = 0.0;
    if (curvature) quad = re_inner(x, curvature(x));
    return constant + 2.0 * linear.dot(x).real() - quad;
}

double ConvexQcqp::constraint_value(std::size_t i, const CVec& x) const {
    const QuadraticConstraint& con = constraints[i];
    double v = con.offset;
    if (con.quadratic) v += re_inner(x, con.quadratic(x));
    if (con.linear.size() > 0) v += 2.0 * x.dot(con.linear).real();
    return v;
}

double ConvexQcqp::max_violation(const CVec& x) const {
    double v = -kInf;
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        v = std::max(v, constraint_value(i, x));
    }
    return constraints.empty() ? 0.0 : v;
}

namespace {

// Probe-based PSD check of a matrix-free Hermitian operator: power iteration
// for the operator norm, then random quadratic forms against the tolerance
// -1e-9 * ||op||.
void check_psd_operator(const LinOp& op, Eigen::Index dim, const char* what) {
    if (!op || dim == 0) return;
    Rng rng(0x50534443u);
    CVec z(dim);
    for (Eigen::Index i = 0; i < dim; ++i) z(i) = rng.cnormal();
    z.normalize();
    double norm_est = 0.0;
    for (int it = 0; it < 12; ++it) {
        CVec az = op(z);
        const double n = az.norm();
        if (n == 0.0) break;
        norm_est = n;
        z = az / n;
    }
    const double tol = 1e-9 * std::max(norm_est, 1e-300);
    for (int probe = 0; probe < 16; ++probe) {
        CVec x(dim);
        for (Eigen::Index i = 0; i < dim; ++i) x(i) = rng.cnormal();
        const cplx form = x.dot(op(x));
        const double scale = x.squaredNorm();
        detail::require(form.real() >= -tol * scale,
                        std::string(what) + ": operator is not PSD");
        detail::require(std::abs(form.imag()) <= 1e-7 * std::max(std::abs(form.real()),
                                                                 norm_est * scale),
                        std::string(what) + ": operator is not Hermitian");
    }
}

}  // namespace

void verify_psd(const ConvexQcqp& p) {
    check_psd_operator(p.curvature, p.dim, "objective curvature");
    for (const auto& con : p.constraints) {
        check_psd_operator(con.quadratic, p.dim, "constraint");
    }
}

namespace {

class AugmentedProblem {
  public:
    AugmentedProblem(const ConvexQcqp& p, double penalty)
        : p_(p), lambda_(RVec::Zero(static_cast<Eigen::Index>(p.constraints.size()))),
          penalty_(penalty) {}

    const ConvexQcqp& problem() const { return p_; }
    double penalty() const { return penalty_; }
    void grow_penalty(double factor, double cap) {
        penalty_ = std::min(penalty_ * factor, cap);
    }

    RVec constraint_values(const CVec& x) const {
        RVec g(lambda_.size());
        for (Eigen::Index i = 0; i < g.size(); ++i) {
            g(i) = p_.constraint_value(static_cast<std::size_t>(i), x);
        }
        return g;
    }

    void update_multipliers(const CVec& x) {
        const RVec g = constraint_values(x);
        for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
            lambda_(i) = std::max(0.0, lambda_(i) + penalty_ * g(i));
        }
    }

    // minimized form: -objective + sum_i PHR penalty terms
    double value(const CVec& x) const {
        double v = -p_.objective(x);
        const RVec g = constraint_values(x);
        for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
            const double t = std::max(0.0, lambda_(i) + penalty_ * g(i));
            v += (t * t - lambda_(i) * lambda_(i)) / (2.0 * penalty_);
        }
        return v;
    }

    CVec gradient(const CVec& x) const {
        CVec grad = -2.0 * p_.linear;
        if (p_.curvature) grad += 2.0 * p_.curvature(x);
        for (std::size_t i = 0; i < p_.constraints.size(); ++i) {
            const double g = p_.constraint_value(i, x);
            const double y = std::max(0.0, lambda_(static_cast<Eigen::Index>(i)) +
                                               penalty_ * g);
            if (y == 0.0) continue;
            const QuadraticConstraint& con = p_.constraints[i];
            if (con.quadratic) grad += 2.0 * y * con.quadratic(x);
            if (con.linear.size() > 0) grad += 2.0 * y * con.linear;
        }
        return grad;
    }

  private:
    const ConvexQcqp& p_;
    RVec lambda_;
    double penalty_;
};

CVec project(const ConvexQcqp& p, CVec x) {
    if (!p.real_coords.empty()) {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (p.real_coords[static_cast<std::size_t>(i)]) x(i) = cplx(x(i).real(), 0.0);
        }
    }
    if (p.magnitude_bound.size() > 0) {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double bound = p.magnitude_bound(i);
            const double mag = std::abs(x(i));
            if (mag > bound) x(i) *= bound / mag;
        }
    }
    return x;
}

double stationarity_residual(const ConvexQcqp& p, const CVec& x, const CVec& grad) {
    const CVec moved = project(p, x - grad);
    return (x - moved).cwiseAbs().maxCoeff() / (1.0 + x.cwiseAbs().maxCoeff());
}

struct SpgOutcome {
    CVec x;
    CVec grad;
    int iters_used = 0;
};

// Nonmonotone projected spectral-gradient descent on the augmented
// Lagrangian (Birgin/Martinez/Raydan style).
SpgOutcome spg_minimize(const AugmentedProblem& al, const ConvexQcqp& p, CVec x,
                        double tol, int max_iters, std::ostream* diag) {
    constexpr int kMemory = 8;
    constexpr double kArmijo = 1e-4;

    x = project(p, std::move(x));
    double fx = al.value(x);
    CVec grad = al.gradient(x);

    std::vector<double> recent(kMemory, fx);
    double step = 1.0;
    {
        const double gnorm = grad.norm();
        if (gnorm > 0.0) step = std::max(1e-10, std::min(1.0 / gnorm, 1e10));
    }

    SpgOutcome out;
    int it = 0;
    for (; it < max_iters; ++it) {
        if (stationarity_residual(p, x, grad) <= tol) break;

        const double fmax = *std::max_element(recent.begin(), recent.end());
        CVec cand;
        double fcand = 0.0;
        bool accepted = false;
        double t = step;
        for (int bt = 0; bt < 40; ++bt) {
            cand = project(p, x - t * grad);
            const double dir_deriv = re_inner(grad, cand - x);
            if (dir_deriv >= 0.0) break;  // stationary along the projection arc
            fcand = al.value(cand);
            if (fcand <= fmax + kArmijo * dir_deriv) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;

        const CVec grad_new = al.gradient(cand);
        const CVec s = cand - x;
        const CVec yv = grad_new - grad;
        const double sy = re_inner(s, yv);
        const double ss = s.squaredNorm();
        step = (sy > 1e-300) ? std::clamp(ss / sy, 1e-10, 1e10) : std::min(t * 10.0, 1e10);

        x = std::move(cand);
        fx = fcand;
        grad = grad_new;
        recent[static_cast<std::size_t>(it % kMemory)] = fx;

        if (diag != nullptr) {
            *diag << "spg iter=" << it << " f=" << fx
                  << " res=" << stationarity_residual(p, x, grad) << "\n";
        }
    }
    out.x = std::move(x);
    out.grad = std::move(grad);
    out.iters_used = it;
    return out;
}

// Dedicated feasibility recovery: minimize sum max(0, g_i)^2 over the
// projected set.
CVec feasibility_phase(const ConvexQcqp& p, CVec x, int max_iters) {
    x = project(p, std::move(x));
    auto value = [&](const CVec& z) {
        double v = 0.0;
        for (std::size_t i = 0; i < p.constraints.size(); ++i) {
            v += std::pow(std::max(0.0, p.constraint_value(i, z)), 2);
        }
        return v;
    };
    auto gradient = [&](const CVec& z) {
        CVec g = CVec::Zero(p.dim);
        for (std::size_t i = 0; i < p.constraints.size(); ++i) {
            const double gi = p.constraint_value(i, z);
            if (gi <= 0.0) continue;
            const QuadraticConstraint& con = p.constraints[i];
            CVec cg = CVec::Zero(p.dim);
            if (con.quadratic) cg += 2.0 * con.quadratic(z);
            if (con.linear.size() > 0) cg += 2.0 * con.linear;
            g += 2.0 * gi * cg;
        }
        return g;
    };

    double fx = value(x);
    CVec grad = gradient(x);
    double step = 1.0;
    if (grad.norm() > 0.0) step = 1.0 / grad.norm();
    for (int it = 0; it < max_iters && fx > 0.0; ++it) {
        CVec cand;
        double fcand = fx;
        double t = step;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            cand = project(p, x - t * grad);
            fcand = value(cand);
            if (fcand < fx) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) break;
        const CVec gnew = gradient(cand);
        const CVec s = cand - x;
        const CVec yv = gnew - grad;
        const double sy = re_inner(s, yv);
        step = (sy > 1e-300) ? std::clamp(s.squaredNorm() / sy, 1e-12, 1e12) : t * 10.0;
        x = std::move(cand);
        fx = fcand;
        grad = gnew;
    }
    return x;
}

}  // namespace

SolveResult solve_qcqp(const ConvexQcqp& p, const CVec& x0, const SolverOptions& opt) {
    detail::require(x0.size() == p.dim, "solve_qcqp: warm start has wrong dimension");
    detail::require(x0.allFinite(), "solve_qcqp: warm start is not finite");
    verify_psd(p);

    AugmentedProblem al(p, 10.0);
    CVec x = project(p, x0);

    double best_obj = -kInf;
    CVec best_x;
    auto consider = [&](const CVec& z) {
        if (p.max_violation(z) <= opt.tol_feas) {
            const double obj = p.objective(z);
            if (obj > best_obj) {
                best_obj = obj;
                best_x = z;
            }
        }
    };
    consider(x);

    if (p.max_violation(x) > opt.tol_feas) {
        x = feasibility_phase(p, x, std::min(1000, opt.max_iters));
        if (p.max_violation(x) > opt.tol_feas && best_obj == -kInf) {
            // one more try from the multiplier loop below; flag if it fails
        }
        consider(x);
    }

    int used = 0;
    double prev_violation = kInf;
    double stat = kInf;
    const int outer_rounds = 40;
    for (int outer = 0; outer < outer_rounds && used < opt.max_iters; ++outer) {
        const double inner_tol =
            std::max(opt.tol_kkt * 0.25, 1e-3 * std::pow(0.3, outer));
        const int budget = std::min(opt.max_iters - used, 600);
        SpgOutcome res = spg_minimize(al, p, x, inner_tol, budget, opt.diag);
        used += res.iters_used;
        x = res.x;
        consider(x);

        const double violation = p.max_violation(x);
        al.update_multipliers(x);
        // stationarity with the freshly updated multipliers
        stat = stationarity_residual(p, x, al.gradient(x));

        if (opt.diag != nullptr) {
            *opt.diag << "al outer=" << outer << " viol=" << violation << " stat=" << stat
                      << " penalty=" << al.penalty() << "\n";
        }
        if (violation <= opt.tol_feas && stat <= opt.tol_kkt) break;
        if (violation > 0.25 * prev_violation && violation > opt.tol_feas) {
            al.grow_penalty(4.0, 1e10);
        }
        prev_violation = violation;
    }

    SolveResult result;
    if (best_obj > -kInf) {
        result.x = best_x;
    } else {
        result.x = x;  // infeasible: report the least-violating iterate we have
    }
    result.objective = p.objective(result.x);
    result.feasibility = p.max_violation(result.x);
    result.stationarity = (result.x - x).cwiseAbs().maxCoeff() == 0.0
                              ? stat
                              : stationarity_residual(p, result.x, al.gradient(result.x));
    result.iterations = used;
    if (result.feasibility > opt.tol_feas) {
        result.status = SolveStatus::kInfeasible;
    } else if (result.stationarity <= opt.tol_kkt) {
        result.status = SolveStatus::kOptimal;
    } else {
        result.status = SolveStatus::kMaxIters;
    }
    return result;
}

namespace {

struct BeamformingContext {
    CMat h;           // K x (L*N_t), row k = effective channel of user k
    RVec noise;       // per user: amplified RIS noise + user AWGN
    VecPowerOperators ops;
};

BeamformingContext beamforming_context(const ChannelSet& ch, const RisState& ris,
                                       const SystemConfig& cfg) {
    BeamformingContext ctx;
    const int users = ch.num_users();
    ctx.h.resize(users, ch.total_antennas());
    ctx.noise.resize(users);
    for (int k = 0; k < users; ++k) {
        ctx.h.row(k) = effective_channel(ch, ris, k);
        ctx.noise(k) = ris_noise_power(ch, ris, k, cfg) + cfg.noise_user;
    }
    ctx.ops = kron_power_operators(ch, ris, cfg);
    return ctx;
}

}  // namespace

Beamformer solve_beamforming(const ChannelSet& ch, const RisState& ris,
                             const SlackState& slack, const Beamformer& w_prev,
                             const SystemConfig& cfg) {
    const int users = ch.num_users();
    const int ants = ch.total_antennas();
    const Eigen::Index dim = static_cast<Eigen::Index>(users) * ants;
    const double y_nat = slack.ee_ratio * kLn2;
    const double gamma_th = std::pow(2.0, cfg.min_rate) - 1.0;

    const BeamformingContext ctx = beamforming_context(ch, ris, cfg);

    ConvexQcqp qp;
    qp.dim = dim;
    qp.linear = CVec::Zero(dim);
    for (int k = 0; k < users; ++k) {
        qp.linear.segment(static_cast<Eigen::Index>(k) * ants, ants) =
            std::sqrt(1.0 + slack.sinr_est(k)) * slack.qt_weight(k) *
            ctx.h.row(k).adjoint();
    }
    {
        double c0 = 0.0;
        for (int k = 0; k < users; ++k) c0 -= std::norm(slack.qt_weight(k)) * ctx.noise(k);
        double fixed_power = circuit_power(cfg);
        for (int r = 0; r < cfg.num_ris; ++r) fixed_power += ctx.ops.noise_offset[r];
        qp.constant = c0 - y_nat * fixed_power;
    }

    RVec rho2(users);
    for (int k = 0; k < users; ++k) rho2(k) = std::norm(slack.qt_weight(k));

    qp.curvature = [&ctx, &cfg, rho2, y_nat, users, ants](const CVec& x) {
        CVec out = (y_nat / cfg.amp_eff_ap) * x;
        for (int j = 0; j < users; ++j) {
            const Eigen::Index off = static_cast<Eigen::Index>(j) * ants;
            const auto col = x.segment(off, ants);
            CVec acc = CVec::Zero(ants);
            for (int k = 0; k < users; ++k) {
                const cplx inner = ctx.h.row(k).conjugate().dot(col);
                acc += (rho2(k) * inner) * ctx.h.row(k).adjoint();
            }
            out.segment(off, ants) += acc;
        }
        for (int r = 0; r < cfg.num_ris; ++r) {
            out += y_nat * ctx.ops.ris_apply(r, x);
        }
        return out;
    };

    // per-AP transmit power, normalized by the budget
    for (int l = 0; l < cfg.num_aps; ++l) {
        QuadraticConstraint con;
        con.quadratic = [&ctx, l, pmax = cfg.ap_power_max](const CVec& x) {
            return CVec(ctx.ops.ap_apply(l, x) / pmax);
        };
        con.offset = -1.0;
        qp.constraints.push_back(std::move(con));
    }
    // per-RIS transmit power (only when the surface amplifies anything)
    for (int r = 0; r < cfg.num_ris; ++r) {
        if (ctx.ops.amplified_rows[r].rows() == 0 && ctx.ops.noise_offset[r] == 0.0) continue;
        QuadraticConstraint con;
        con.quadratic = [&ctx, r, pmax = cfg.ris_power_max](const CVec& x) {
            return CVec(ctx.ops.ris_apply(r, x) / pmax);
        };
        con.offset = ctx.ops.noise_offset[r] / cfg.ris_power_max - 1.0;
        qp.constraints.push_back(std::move(con));
    }

    Beamformer w = w_prev;
    const double f3_start = surrogate_value(ch, w_prev, ris, slack, cfg);

    {
        // SINR floor linearized at the expansion point w_prev
        if (gamma_th > 0.0) {
            for (int k = 0; k < users; ++k) {
                const cplx alpha = cplx(ctx.h.row(k) * w.w.col(k));
                QuadraticConstraint con;
                con.quadratic = [&ctx, k, gamma_th, users, ants,
                                 s0 = cfg.noise_user](const CVec& x) {
                    CVec out = CVec::Zero(x.size());
                    for (int j = 0; j < users; ++j) {
                        if (j == k) continue;
                        const Eigen::Index off = static_cast<Eigen::Index>(j) * ants;
                        const cplx inner = ctx.h.row(k).conjugate().dot(x.segment(off, ants));
                        out.segment(off, ants) +=
                            (gamma_th / s0 * inner) * ctx.h.row(k).adjoint();
                    }
                    return out;
                };
                con.linear = CVec::Zero(dim);
                con.linear.segment(static_cast<Eigen::Index>(k) * ants, ants) =
                    -(alpha / cfg.noise_user) * ctx.h.row(k).adjoint();
                con.offset =
                    (std::norm(alpha) + gamma_th * ctx.noise(k)) / cfg.noise_user;
                qp.constraints.push_back(std::move(con));
            }
        }

        const CVec x0 = Eigen::Map<const CVec>(w.w.data(), dim);
        const SolveResult res = solve_qcqp(qp, x0, solver_options(cfg));
        if (res.feasibility <= cfg.tol_feas) {
            w.w = Eigen::Map<const CMat>(res.x.data(), ants, users);
        }
    }

    if (surrogate_value(ch, w, ris, slack, cfg) < f3_start) return w_prev;
    return w;
}

RisState solve_ris(const ChannelSet& ch, const Beamformer& w_fixed, const SlackState& slack,
                   const RisState& ris_prev, const SystemConfig& cfg) {
    const int users = ch.num_users();
    const Eigen::Index dim = ch.total_elements();
    if (dim == 0) return ris_prev;
    const double y_nat = slack.ee_ratio * kLn2;
    const double gamma_th = std::pow(2.0, cfg.min_rate) - 1.0;

    const QuadraticForms qf = build_quadratic_forms(ch, w_fixed, ris_prev, cfg);

    // diagonal of the theta-parameterized RIS transmit power (active coords)
    RVec power_diag = RVec::Zero(dim);
    for (int r = 0; r < cfg.num_ris; ++r) {
        for (int n = 0; n < cfg.ris_elements; ++n) {
            const int idx = r * cfg.ris_elements + n;
            if (!ris_prev.mask.active[idx]) continue;
            power_diag(idx) = (qf.power_diag[r](n) + cfg.noise_ris) / cfg.amp_eff_ris;
        }
    }

    ConvexQcqp qp;
    qp.dim = dim;
    qp.linear = CVec::Zero(dim);
    RVec rho2(users);
    for (int k = 0; k < users; ++k) {
        const cplx rho = slack.qt_weight(k);
        rho2(k) = std::norm(rho);
        qp.linear += std::sqrt(1.0 + slack.sinr_est(k)) * std::conj(rho) * qf.v_at(k, k);
        for (int j = 0; j < users; ++j) {
            qp.linear -= rho2(k) * qf.q2(k, j);
        }
    }
    {
        double c0 = 0.0;
        for (int k = 0; k < users; ++k) {
            const cplx rho = slack.qt_weight(k);
            c0 += 2.0 * std::sqrt(1.0 + slack.sinr_est(k)) *
                  std::real(std::conj(rho) * qf.s_at(k, k));
            double q3sum = cfg.noise_user;
            for (int j = 0; j < users; ++j) q3sum += qf.q3(k, j);
            c0 -= rho2(k) * q3sum;
        }
        double fixed_power = circuit_power(cfg);
        for (int l = 0; l < cfg.num_aps; ++l) fixed_power += ap_tx_power(w_fixed, l, cfg);
        qp.constant = c0 - y_nat * fixed_power;
    }

    qp.curvature = [&qf, &power_diag, rho2, y_nat, users](const CVec& x) {
        CVec out = y_nat * power_diag.cast<cplx>().cwiseProduct(x);
        for (int k = 0; k < users; ++k) {
            CVec acc = qf.noise_diag[k].cast<cplx>().cwiseProduct(x);
            for (int j = 0; j < users; ++j) {
                acc += qf.q1_apply(k, j, x);
            }
            out += rho2(k) * acc;
        }
        return out;
    };

    qp.magnitude_bound.resize(dim);
    for (Eigen::Index n = 0; n < dim; ++n) {
        qp.magnitude_bound(n) =
            ris_prev.mask.active[static_cast<std::size_t>(n)] ? cfg.max_active_amplitude : 1.0;
    }

    // per-RIS transmit power in theta coordinates, normalized by the budget
    for (int r = 0; r < cfg.num_ris; ++r) {
        bool has_active = false;
        for (int n = 0; n < cfg.ris_elements; ++n) {
            if (ris_prev.mask.active[r * cfg.ris_elements + n]) has_active = true;
        }
        if (!has_active) continue;
        QuadraticConstraint con;
        const Eigen::Index lo = static_cast<Eigen::Index>(r) * cfg.ris_elements;
        con.quadratic = [&power_diag, lo, ns = cfg.ris_elements,
                         pmax = cfg.ris_power_max](const CVec& x) {
            CVec out = CVec::Zero(x.size());
            out.segment(lo, ns) =
                power_diag.segment(lo, ns).cast<cplx>().cwiseProduct(x.segment(lo, ns)) / pmax;
            return out;
        };
        con.offset = -1.0;
        qp.constraints.push_back(std::move(con));
    }

    RisState ris = ris_prev;
    const double f4_start =
        surrogate_value_theta(ch, theta_vector(ris_prev), ris_prev.mask, w_fixed, slack, cfg);

    {
        const CVec expansion = theta_vector(ris);
        if (gamma_th > 0.0) {
            for (int k = 0; k < users; ++k) {
                QuadraticConstraint con;
                con.quadratic = [&qf, k, users, gamma_th, s0 = cfg.noise_user](const CVec& x) {
                    CVec acc = qf.noise_diag[k].cast<cplx>().cwiseProduct(x);
                    for (int j = 0; j < users; ++j) {
                        if (j == k) continue;
                        acc += qf.q1_apply(k, j, x);
                    }
                    return CVec(gamma_th / s0 * acc);
                };
                CVec q = CVec::Zero(dim);
                for (int j = 0; j < users; ++j) {
                    if (j == k) continue;
                    q += gamma_th * qf.q2(k, j);
                }
                q -= qf.q1_apply(k, k, expansion);
                q -= qf.q2(k, k);
                con.linear = q / cfg.noise_user;
                const double expansion_quad =
                    std::real(expansion.dot(qf.q1_apply(k, k, expansion)));
                double off = gamma_th * cfg.noise_user + expansion_quad - qf.q3(k, k);
                for (int j = 0; j < users; ++j) {
                    if (j == k) continue;
                    off += gamma_th * qf.q3(k, j);
                }
                con.offset = off / cfg.noise_user;
                qp.constraints.push_back(std::move(con));
            }
        }

        const SolveResult res = solve_qcqp(qp, expansion, solver_options(cfg));
        if (res.feasibility <= cfg.tol_feas) {
            ris.coeffs = res.x.conjugate();
        }
    }

    const double f4_end =
        surrogate_value_theta(ch, theta_vector(ris), ris.mask, w_fixed, slack, cfg);
    if (f4_end < f4_start) return ris_prev;
    return ris;
}

}  // namespace cfris
