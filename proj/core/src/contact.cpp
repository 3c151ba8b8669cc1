#include "mvam/contact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "mvam/error.hpp"

namespace mvam {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInf = std::numeric_limits<double>::infinity();
// Squared relative length below which a constraint normal counts as lying in
// the span of the active set.
constexpr double kDependent = 1e-14;

// min 0.5 |x|^2  s.t.  E x = e,  G x >= h.
// Goldfarb-Idnani dual active-set method. The problems here have at most a few
// dozen constraints, so the projections are recomputed from scratch each step.
struct MinNormQp {
  const MatrixXd& E;
  const VectorXd& e;
  const MatrixXd& G;
  const VectorXd& h;

  struct Failure {
    bool equality;
    Eigen::Index row;
  };

  std::optional<Failure> failure;
  VectorXd x;

  Eigen::Index n_eq() const { return E.rows(); }

  VectorXd normal(Eigen::Index id) const {
    return id < n_eq() ? VectorXd(E.row(id).transpose()) : VectorXd(G.row(id - n_eq()).transpose());
  }
  double target(Eigen::Index id) const { return id < n_eq() ? e(id) : h(id - n_eq()); }

  // z: component of n orthogonal to the active normals; r: coefficients of n
  // in the active normals.
  void project(const std::vector<Eigen::Index>& active, const VectorXd& n, VectorXd& z,
               VectorXd& r) const {
    if (active.empty()) {
      z = n;
      r.resize(0);
      return;
    }
    MatrixXd N(n.size(), static_cast<Eigen::Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k) N.col(static_cast<Eigen::Index>(k)) = normal(active[k]);
    const MatrixXd gram = N.transpose() * N;
    r = gram.ldlt().solve(N.transpose() * n);
    z = n - N * r;
  }

  bool solve() {
    const Eigen::Index nv = E.cols();
    x = VectorXd::Zero(nv);
    std::vector<Eigen::Index> active;
    std::vector<double> u;
    VectorXd z, r;

    for (Eigen::Index i = 0; i < n_eq(); ++i) {
      VectorXd np = normal(i);
      const double s = np.dot(x) - target(i);
      project(active, np, z, r);
      const double scale = std::max(1.0, np.squaredNorm());
      if (z.squaredNorm() <= kDependent * scale) {
        if (std::abs(s) > 1e-9 * std::max(1.0, std::abs(target(i)))) {
          failure = Failure{true, i};
          return false;
        }
        continue;  // redundant with earlier equalities
      }
      const double t = -s / z.dot(np);
      x += t * z;
      for (std::size_t k = 0; k < active.size(); ++k) u[k] -= t * r(static_cast<Eigen::Index>(k));
      active.push_back(i);
      u.push_back(t);
    }

    const Eigen::Index n_in = G.rows();
    const int max_iter = 50 + 10 * static_cast<int>(n_in + n_eq());
    for (int iter = 0; iter < max_iter; ++iter) {
      Eigen::Index p = -1;
      double worst = -1e-10;
      for (Eigen::Index j = 0; j < n_in; ++j) {
        const Eigen::Index id = n_eq() + j;
        if (std::find(active.begin(), active.end(), id) != active.end()) continue;
        const double s = G.row(j).dot(x) - h(j);
        if (s < worst) {
          worst = s;
          p = id;
        }
      }
      if (p < 0) {
        polish(active);
        return verify();
      }

      const VectorXd np = normal(p);
      double s_p = np.dot(x) - target(p);
      double u_p = 0.0;
      for (int inner = 0; inner < max_iter; ++inner) {
        project(active, np, z, r);
        double t1 = kInf;
        std::size_t drop = active.size();
        for (std::size_t k = 0; k < active.size(); ++k) {
          if (active[k] < n_eq()) continue;
          const double rk = r(static_cast<Eigen::Index>(k));
          if (rk > 1e-12 && u[k] / rk < t1) {
            t1 = u[k] / rk;
            drop = k;
          }
        }
        const double zn = z.dot(np);
        const double t2 = z.squaredNorm() > kDependent * std::max(1.0, np.squaredNorm()) ? -s_p / zn : kInf;
        const double t = std::min(t1, t2);
        if (t == kInf) {
          failure = Failure{false, p - n_eq()};
          return false;
        }
        for (std::size_t k = 0; k < active.size(); ++k) u[k] -= t * r(static_cast<Eigen::Index>(k));
        u_p += t;
        if (t2 != kInf) x += t * z;
        if (t2 <= t1) {
          active.push_back(p);
          u.push_back(u_p);
          break;
        }
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(drop));
        u.erase(u.begin() + static_cast<std::ptrdiff_t>(drop));
        s_p = np.dot(x) - target(p);
      }
    }
    failure = Failure{false, -1};
    return false;
  }

  // Ill-conditioned active sets can leave a point that is not actually
  // feasible; report the worst offender instead of returning it.
  bool verify() {
    Eigen::Index worst_row = -1;
    double worst = 0.0;
    bool equality = false;
    for (Eigen::Index i = 0; i < n_eq(); ++i) {
      const double tol = 1e-9 * std::max(1.0, std::abs(e(i)));
      const double v = std::abs(E.row(i).dot(x) - e(i)) / tol;
      if (v > 1.0 && v > worst) {
        worst = v;
        worst_row = i;
        equality = true;
      }
    }
    if (worst_row >= 0) {
      failure = Failure{true, worst_row};
      return false;
    }
    const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < G.rows(); ++j) {
      const double v = (h(j) - G.row(j).dot(x)) / (1e-9 * scale);
      if (v > 1.0 && v > worst) {
        worst = v;
        worst_row = j;
      }
    }
    if (worst_row >= 0) {
      failure = Failure{equality, worst_row};
      return false;
    }
    return true;
  }

  // Re-solve the active constraints as equalities so that they hold to
  // round-off rather than to the accumulated step error.
  void polish(const std::vector<Eigen::Index>& active) {
    if (active.empty()) return;
    MatrixXd N(x.size(), static_cast<Eigen::Index>(active.size()));
    VectorXd b(static_cast<Eigen::Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k) {
      N.col(static_cast<Eigen::Index>(k)) = normal(active[k]);
      b(static_cast<Eigen::Index>(k)) = target(active[k]);
    }
    const MatrixXd gram = N.transpose() * N;
    const VectorXd lambda = gram.ldlt().solve(b);
    x = N * lambda;
  }
};

}  // namespace

std::vector<ContactForce> distribute_contact_forces(const Wrench& wrench,
                                                    std::span<const Vec2> feet, const Vec2& com,
                                                    double mu) {
  if (feet.empty()) throw ContactInfeasibleError("support", "no stance feet to carry the wrench");
  if (!(mu >= 0.0)) throw ConfigError(fmt::format("friction coefficient must be nonnegative, got {}", mu));

  const auto nf = static_cast<Eigen::Index>(feet.size());
  MatrixXd E = MatrixXd::Zero(3, 2 * nf);
  VectorXd e(3);
  e << wrench.force.x, wrench.force.y, wrench.moment;
  MatrixXd G = MatrixXd::Zero(3 * nf, 2 * nf);
  VectorXd h = VectorXd::Zero(3 * nf);
  for (Eigen::Index i = 0; i < nf; ++i) {
    const Vec2 d = feet[static_cast<std::size_t>(i)] - com;
    E(0, 2 * i) = 1.0;
    E(1, 2 * i + 1) = 1.0;
    // (p - com) x F = dx Fz - dz Fx
    E(2, 2 * i) = -d.y;
    E(2, 2 * i + 1) = d.x;
    G(3 * i, 2 * i + 1) = 1.0;
    G(3 * i + 1, 2 * i) = -1.0;
    G(3 * i + 1, 2 * i + 1) = mu;
    G(3 * i + 2, 2 * i) = 1.0;
    G(3 * i + 2, 2 * i + 1) = mu;
  }

  MinNormQp qp{E, e, G, h, std::nullopt, {}};
  if (!qp.solve()) {
    const auto& f = *qp.failure;
    if (f.equality) {
      const char* which = f.row == 2 ? "moment balance" : "force balance";
      throw ContactInfeasibleError(
          which, fmt::format("{} cannot be met by {} stance feet (required force ({}, {}) N, "
                             "moment {} N m)",
                             which, feet.size(), wrench.force.x, wrench.force.y, wrench.moment));
    }
    if (f.row < 0) throw ContactInfeasibleError("solver", "force distribution did not converge");
    const auto foot = f.row / 3;
    const bool unilateral = f.row % 3 == 0;
    const std::string which = unilateral ? fmt::format("unilateral contact at foot {}", foot)
                                         : fmt::format("friction cone at foot {}", foot);
    throw ContactInfeasibleError(
        which, fmt::format("{} cannot be satisfied for required force ({}, {}) N, moment {} N m",
                           which, wrench.force.x, wrench.force.y, wrench.moment));
  }

  std::vector<ContactForce> out;
  out.reserve(feet.size());
  for (Eigen::Index i = 0; i < nf; ++i) {
    out.push_back({static_cast<std::size_t>(i), {qp.x(2 * i), qp.x(2 * i + 1)},
                   feet[static_cast<std::size_t>(i)]});
  }
  return out;
}

WrenchResidual wrench_residual(const Wrench& wrench, std::span<const ContactForce> forces,
                               const Vec2& com) {
  Vec2 total;
  double moment = 0.0;
  for (const auto& f : forces) {
    total += f.force;
    moment += cross(f.point - com, f.force);
  }
  return {norm(total - wrench.force), std::abs(moment - wrench.moment)};
}

}  // namespace mvam
