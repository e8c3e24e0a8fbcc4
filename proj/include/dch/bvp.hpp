#pragma once

// Fourth-order Lobatto IIIA (Hermite-Simpson) collocation for first-order
// systems y' = f(x, y) with separated boundary conditions, solved by damped
// Newton on the global banded system.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dch/banded.hpp"
#include "dch/errors.hpp"

namespace dch::bvp {

template <std::size_t M>
using Vec = std::array<double, M>;
template <std::size_t M>
using Mat = std::array<std::array<double, M>, M>;

template <std::size_t M>
struct Problem {
  std::function<Vec<M>(double, const Vec<M>&)> rhs;
  std::function<Mat<M>(double, const Vec<M>&)> jacobian;
  /// Conditions at the left end: residuals and their gradients in y(a).
  std::size_t num_left = 0;
  std::function<void(const Vec<M>&, std::span<double>, std::span<Vec<M>>)> left;
  /// Conditions at the right end; M - num_left of them.
  std::function<void(const Vec<M>&, std::span<double>, std::span<Vec<M>>)> right;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 60;
  /// Smallest line-search factor before giving up.
  double min_damping = 1.0 / 1024.0;
};

template <std::size_t M>
struct Solution {
  std::vector<double> mesh;
  std::vector<Vec<M>> values;
  std::vector<Vec<M>> slopes;
  double residual = 0.0;
  int iterations = 0;

  /// C^1 piecewise-cubic Hermite interpolant of component c at x.
  double interpolate(std::size_t c, double x) const { return eval(c, x, 0); }
  /// Derivative of the Hermite interpolant.
  double interpolate_derivative(std::size_t c, double x) const { return eval(c, x, 1); }

 private:
  double eval(std::size_t c, double x, int deriv) const {
    const std::size_t k = locate(x);
    const double h = mesh[k + 1] - mesh[k];
    const double s = (x - mesh[k]) / h;
    const double y0 = values[k][c];
    const double y1 = values[k + 1][c];
    const double d0 = slopes[k][c] * h;
    const double d1 = slopes[k + 1][c] * h;
    if (deriv == 0) {
      const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
      const double h10 = s * (1 - s) * (1 - s);
      const double h01 = s * s * (3 - 2 * s);
      const double h11 = s * s * (s - 1);
      return h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1;
    }
    const double g00 = 6 * s * s - 6 * s;
    const double g10 = 3 * s * s - 4 * s + 1;
    const double g01 = -g00;
    const double g11 = 3 * s * s - 2 * s;
    return (g00 * y0 + g10 * d0 + g01 * y1 + g11 * d1) / h;
  }

  std::size_t locate(double x) const {
    if (x <= mesh.front()) return 0;
    if (x >= mesh.back()) return mesh.size() - 2;
    const auto it = std::upper_bound(mesh.begin(), mesh.end(), x);
    return static_cast<std::size_t>(it - mesh.begin()) - 1;
  }
};

template <std::size_t M>
class CollocationSolver {
 public:
  CollocationSolver(Problem<M> problem, std::vector<double> mesh)
      : problem_(std::move(problem)), mesh_(std::move(mesh)) {
    if (mesh_.size() < 2) throw DomainError("collocation mesh needs at least two nodes");
    if (problem_.num_left > M) throw DomainError("too many left boundary conditions");
  }

  std::size_t num_unknowns() const { return mesh_.size() * M; }

  /// Max-norm residual of the collocation equations at y.
  double residual_norm(const std::vector<Vec<M>>& y) const {
    std::vector<double> r(num_unknowns());
    assemble(y, r, nullptr);
    double m = 0.0;
    for (double v : r) m = std::max(m, std::abs(v));
    return m;
  }

  Solution<M> solve(std::vector<Vec<M>> y, const NewtonOptions& opt) const {
    if (y.size() != mesh_.size()) throw DomainError("initial guess does not match mesh");
    const std::size_t n = num_unknowns();
    const std::size_t pl = problem_.num_left;
    std::vector<double> r(n);
    std::vector<double> trial_r(n);
    assemble(y, r, nullptr);
    double norm = max_norm(r);
    int iter = 0;
    while (norm >= opt.tol) {
      if (++iter > opt.max_iter)
        throw NoConvergence("collocation Newton did not converge, residual " + std::to_string(norm));
      BandedMatrix jac(n, M - 1 + pl, 2 * M - 1 - pl);
      assemble(y, r, &jac);
      std::vector<double> delta(r);
      for (double& d : delta) d = -d;
      jac.solve_in_place(delta);
      double lambda = 1.0;
      bool accepted = false;
      std::vector<Vec<M>> trial(y.size());
      while (lambda >= opt.min_damping) {
        for (std::size_t j = 0; j < y.size(); ++j)
          for (std::size_t c = 0; c < M; ++c) trial[j][c] = y[j][c] + lambda * delta[j * M + c];
        bool finite = true;
        try {
          assemble(trial, trial_r, nullptr);
        } catch (const DomainError&) {
          finite = false;
        }
        const double trial_norm = finite ? max_norm(trial_r) : INFINITY;
        if (std::isfinite(trial_norm) && trial_norm < (1.0 - 0.25 * lambda) * norm) {
          y.swap(trial);
          r.swap(trial_r);
          norm = trial_norm;
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!accepted) {
        // Full step on a stagnating residual: accept at round-off level.
        double step = 0.0;
        double scale = 1.0;
        for (double d : delta) step = std::max(step, std::abs(d));
        for (const auto& v : y)
          for (double c : v) scale = std::max(scale, std::abs(c));
        if (step < 1e3 * opt.tol || step < 1e-12 * scale) break;
        throw NoConvergence("collocation line search failed, residual " + std::to_string(norm));
      }
    }
    Solution<M> sol;
    sol.mesh = mesh_;
    sol.slopes.resize(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) sol.slopes[j] = problem_.rhs(mesh_[j], y[j]);
    sol.values = std::move(y);
    sol.residual = norm;
    sol.iterations = iter;
    return sol;
  }

 private:
  static double max_norm(const std::vector<double>& r) {
    double m = 0.0;
    for (double v : r) m = std::isfinite(v) ? std::max(m, std::abs(v)) : INFINITY;
    return m;
  }

  void assemble(const std::vector<Vec<M>>& y, std::vector<double>& r, BandedMatrix* jac) const {
    const std::size_t pl = problem_.num_left;
    const std::size_t pr = M - pl;
    const std::size_t k = mesh_.size() - 1;
    if (jac) jac->set_zero();

    std::array<double, M> bc_r{};
    std::array<Vec<M>, M> bc_g{};
    if (pl > 0) {
      problem_.left(y.front(), std::span<double>(bc_r.data(), pl), std::span<Vec<M>>(bc_g.data(), pl));
      for (std::size_t a = 0; a < pl; ++a) {
        r[a] = bc_r[a];
        if (jac)
          for (std::size_t b = 0; b < M; ++b) (*jac)(a, b) = bc_g[a][b];
      }
    }

    std::vector<Vec<M>> f(y.size());
    for (std::size_t j = 0; j <= k; ++j) f[j] = problem_.rhs(mesh_[j], y[j]);

    for (std::size_t j = 0; j < k; ++j) {
      const double h = mesh_[j + 1] - mesh_[j];
      const double xm = mesh_[j] + 0.5 * h;
      Vec<M> ym;
      for (std::size_t c = 0; c < M; ++c)
        ym[c] = 0.5 * (y[j][c] + y[j + 1][c]) + 0.125 * h * (f[j][c] - f[j + 1][c]);
      const Vec<M> fm = problem_.rhs(xm, ym);
      const std::size_t row0 = pl + j * M;
      for (std::size_t c = 0; c < M; ++c)
        r[row0 + c] = y[j + 1][c] - y[j][c] - h / 6.0 * (f[j][c] + 4.0 * fm[c] + f[j + 1][c]);
      if (!jac) continue;

      const Mat<M> ja = problem_.jacobian(mesh_[j], y[j]);
      const Mat<M> jb = problem_.jacobian(mesh_[j + 1], y[j + 1]);
      const Mat<M> jm = problem_.jacobian(xm, ym);
      for (std::size_t a = 0; a < M; ++a) {
        for (std::size_t b = 0; b < M; ++b) {
          // d ym / d y_j = I/2 + h/8 ja;  d ym / d y_{j+1} = I/2 - h/8 jb.
          double left_mid = 0.0;
          double right_mid = 0.0;
          for (std::size_t q = 0; q < M; ++q) {
            const double id = q == b ? 0.5 : 0.0;
            left_mid += jm[a][q] * (id + 0.125 * h * ja[q][b]);
            right_mid += jm[a][q] * (id - 0.125 * h * jb[q][b]);
          }
          const double id = a == b ? 1.0 : 0.0;
          (*jac)(row0 + a, j * M + b) = -id - h / 6.0 * (ja[a][b] + 4.0 * left_mid);
          (*jac)(row0 + a, (j + 1) * M + b) = id - h / 6.0 * (jb[a][b] + 4.0 * right_mid);
        }
      }
    }

    if (pr > 0) {
      problem_.right(y.back(), std::span<double>(bc_r.data(), pr), std::span<Vec<M>>(bc_g.data(), pr));
      const std::size_t row0 = pl + k * M;
      for (std::size_t a = 0; a < pr; ++a) {
        r[row0 + a] = bc_r[a];
        if (jac)
          for (std::size_t b = 0; b < M; ++b) (*jac)(row0 + a, k * M + b) = bc_g[a][b];
      }
    }
  }

  Problem<M> problem_;
  std::vector<double> mesh_;
};

inline std::vector<double> uniform_mesh(double a, double b, std::size_t intervals) {
  std::vector<double> x(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i)
    x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(intervals);
  x.back() = b;
  return x;
}

}  // namespace dch::bvp
