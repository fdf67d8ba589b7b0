#include "pnptg/solvers.hpp"

#include <cmath>
#include <stdexcept>

namespace pnptg {

namespace {

constexpr double kBreakdown = 1e-300;

int resolve_max_iterations(const SolverConfig& cfg, int dim) {
  if (cfg.max_iterations > 0) return cfg.max_iterations;
  return dim > 0 ? 10 * dim : 1;
}

std::vector<double> jacobi_inverse(const SparseMatrix& a) {
  std::vector<double> d = a.diagonal();
  for (double& v : d) {
    if (v == 0.0) throw std::invalid_argument("jacobi: zero diagonal entry");
    v = 1.0 / v;
  }
  return d;
}

void apply_preconditioner(const std::vector<double>& dinv,
                          const std::vector<double>& r, std::vector<double>& z,
                          ExecPolicy policy) {
  if (dinv.empty()) {
    z = r;
    return;
  }
  parallel_for(r.size(), policy, [&](std::size_t i) { z[i] = dinv[i] * r[i]; });
}

double true_relative_residual(const SparseMatrix& a,
                              const std::vector<double>& b,
                              const std::vector<double>& x, double bnorm,
                              ExecPolicy policy) {
  std::vector<double> r(b.size());
  a.multiply(x.data(), r.data(), policy);
  parallel_for(r.size(), policy, [&](std::size_t i) { r[i] = b[i] - r[i]; });
  return std::sqrt(deterministic_dot(r.data(), r.data(), r.size(), policy)) /
         bnorm;
}

void finish_report(const SparseMatrix& a, const std::vector<double>& b,
                   const SolverConfig& cfg, ExecPolicy policy,
                   SolveResult& res, double bnorm, int iterations) {
  res.report.iterations = iterations;
  res.report.final_relative_residual =
      true_relative_residual(a, b, res.x, bnorm, policy);
  res.report.converged =
      res.report.final_relative_residual <= cfg.rel_tolerance;
}

}  // namespace

double l2_vec(const std::vector<double>& v, ExecPolicy policy) {
  return std::sqrt(deterministic_dot(v.data(), v.data(), v.size(), policy));
}

SolveResult solve_cg(const SparseMatrix& a, const std::vector<double>& b,
                     const SolverConfig& cfg, ExecPolicy policy) {
  if (!a.symmetric) {
    throw std::invalid_argument("solve_cg requires the symmetric flag");
  }
  if (static_cast<int>(b.size()) != a.dim) {
    throw std::invalid_argument("solve_cg: dimension mismatch");
  }
  const std::size_t n = b.size();
  SolveResult res;
  res.x.assign(n, 0.0);
  const double bnorm = l2_vec(b, policy);
  if (n == 0 || bnorm == 0.0) {
    res.report.converged = true;
    return res;
  }
  const int maxit = resolve_max_iterations(cfg, a.dim);
  std::vector<double> dinv;
  if (cfg.preconditioner == Preconditioner::jacobi) dinv = jacobi_inverse(a);

  std::vector<double> r = b;
  std::vector<double> z(n), p(n), ap(n);
  apply_preconditioner(dinv, r, z, policy);
  p = z;
  double rz = deterministic_dot(r.data(), z.data(), n, policy);
  if (cfg.record_history) res.report.history.push_back(1.0);

  int it = 0;
  while (it < maxit) {
    ++it;
    a.multiply(p.data(), ap.data(), policy);
    const double pap = deterministic_dot(p.data(), ap.data(), n, policy);
    if (!(pap > 0.0)) break;  // not positive definite or numerical breakdown
    const double alpha = rz / pap;
    parallel_for(n, policy, [&](std::size_t i) {
      res.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    });
    const double rel = l2_vec(r, policy) / bnorm;
    if (cfg.record_history) res.report.history.push_back(rel);
    if (rel <= cfg.rel_tolerance) break;
    apply_preconditioner(dinv, r, z, policy);
    const double rz_next = deterministic_dot(r.data(), z.data(), n, policy);
    const double beta = rz_next / rz;
    rz = rz_next;
    parallel_for(n, policy, [&](std::size_t i) { p[i] = z[i] + beta * p[i]; });
  }
  finish_report(a, b, cfg, policy, res, bnorm, it);
  return res;
}

SolveResult solve_bicgstab(const SparseMatrix& a, const std::vector<double>& b,
                           const SolverConfig& cfg, ExecPolicy policy) {
  if (static_cast<int>(b.size()) != a.dim) {
    throw std::invalid_argument("solve_bicgstab: dimension mismatch");
  }
  const std::size_t n = b.size();
  SolveResult res;
  res.x.assign(n, 0.0);
  const double bnorm = l2_vec(b, policy);
  if (n == 0 || bnorm == 0.0) {
    res.report.converged = true;
    return res;
  }
  const int maxit = resolve_max_iterations(cfg, a.dim);
  std::vector<double> dinv;
  if (cfg.preconditioner == Preconditioner::jacobi) dinv = jacobi_inverse(a);

  std::vector<double> r = b;
  std::vector<double> rhat = b;
  std::vector<double> p(n, 0.0), v(n, 0.0), phat(n), s(n), shat(n), t(n);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  if (cfg.record_history) res.report.history.push_back(1.0);

  int it = 0;
  while (it < maxit) {
    ++it;
    const double rho_next = deterministic_dot(rhat.data(), r.data(), n, policy);
    if (std::abs(rho_next) < kBreakdown) break;
    if (it == 1) {
      p = r;
    } else {
      const double beta = (rho_next / rho) * (alpha / omega);
      parallel_for(n, policy, [&](std::size_t i) {
        p[i] = r[i] + beta * (p[i] - omega * v[i]);
      });
    }
    rho = rho_next;
    apply_preconditioner(dinv, p, phat, policy);
    a.multiply(phat.data(), v.data(), policy);
    const double rhat_v = deterministic_dot(rhat.data(), v.data(), n, policy);
    if (std::abs(rhat_v) < kBreakdown) break;
    alpha = rho / rhat_v;
    parallel_for(n, policy,
                 [&](std::size_t i) { s[i] = r[i] - alpha * v[i]; });
    double rel = l2_vec(s, policy) / bnorm;
    if (rel <= cfg.rel_tolerance) {
      parallel_for(n, policy,
                   [&](std::size_t i) { res.x[i] += alpha * phat[i]; });
      if (cfg.record_history) res.report.history.push_back(rel);
      break;
    }
    apply_preconditioner(dinv, s, shat, policy);
    a.multiply(shat.data(), t.data(), policy);
    const double tt = deterministic_dot(t.data(), t.data(), n, policy);
    if (tt == 0.0) break;
    omega = deterministic_dot(t.data(), s.data(), n, policy) / tt;
    parallel_for(n, policy, [&](std::size_t i) {
      res.x[i] += alpha * phat[i] + omega * shat[i];
      r[i] = s[i] - omega * t[i];
    });
    rel = l2_vec(r, policy) / bnorm;
    if (cfg.record_history) res.report.history.push_back(rel);
    if (rel <= cfg.rel_tolerance) break;
    if (std::abs(omega) < kBreakdown) break;
  }
  finish_report(a, b, cfg, policy, res, bnorm, it);
  return res;
}

}  // namespace pnptg
