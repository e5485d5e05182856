#include "block_qp.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace tmm::detail {

void project_box_simplex(const double* y, int n, const std::vector<double>& u, double mass, double* out) {
  const bool boxed = !u.empty();
  auto up = [&](int i) { return boxed ? u[i] : std::numeric_limits<double>::infinity(); };
  auto total = [&](double lam) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::clamp(y[i] - lam, 0.0, up(i));
    return s;
  };
  double lo = *std::min_element(y, y + n) - mass - 1.0;
  if (boxed)
    for (int i = 0; i < n; ++i) lo = std::min(lo, y[i] - u[i] - 1.0);
  double hi = *std::max_element(y, y + n);
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (total(mid) > mass ? lo : hi) = mid;
  }
  // Exact level on the identified linear piece.
  double lam = 0.5 * (lo + hi);
  for (int pass = 0; pass < 2; ++pass) {
    double s = -mass;
    int nfree = 0;
    for (int i = 0; i < n; ++i) {
      const double v = y[i] - lam;
      if (v >= up(i)) {
        s += up(i);
      } else if (v > 0.0) {
        s += y[i];
        ++nfree;
      }
    }
    if (nfree == 0) break;
    lam = s / nfree;
  }
  for (int i = 0; i < n; ++i) out[i] = std::clamp(y[i] - lam, 0.0, up(i));
}

BlockQp::BlockQp(Eigen::MatrixXd h, Eigen::VectorXd c, std::vector<Block> blocks)
    : h_(std::move(h)), c_(std::move(c)), blocks_(std::move(blocks)) {}

double BlockQp::energy(const Eigen::VectorXd& x) const { return 0.5 * x.dot(h_ * x) + c_.dot(x); }

Eigen::VectorXd BlockQp::gradient(const Eigen::VectorXd& x, Exec ex) const { return matvec(h_, x, ex) + c_; }

Eigen::VectorXd BlockQp::project(const Eigen::VectorXd& y) const {
  Eigen::VectorXd out(y.size());
  for (const auto& b : blocks_) project_box_simplex(y.data() + b.offset, b.size, b.upper, b.mass, out.data() + b.offset);
  return out;
}

void BlockQp::residuals(const Eigen::VectorXd& x, const Eigen::VectorXd& g, std::vector<double>& ell,
                        std::vector<double>& res) const {
  ell.assign(blocks_.size(), 0.0);
  res.assign(blocks_.size(), 0.0);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const auto& b = blocks_[k];
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < b.size; ++i) {
      const int j = b.offset + i;
      const bool at_upper = !b.upper.empty() && x[j] >= b.upper[i];
      if (x[j] > 0.0 && !at_upper) {
        lo = std::min(lo, g[j]);
        hi = std::max(hi, g[j]);
      }
    }
    if (!(lo <= hi)) {
      // No free cell. With saturated cells the level may sit anywhere between
      // the largest saturated and the smallest empty effective potential.
      double up_max = -std::numeric_limits<double>::infinity(), zero_min = -up_max;
      for (int i = 0; i < b.size; ++i) {
        const int j = b.offset + i;
        if (!b.upper.empty() && b.upper[i] <= 0.0) continue;
        if (x[j] <= 0.0) zero_min = std::min(zero_min, g[j]);
        else up_max = std::max(up_max, g[j]);
      }
      if (std::isinf(up_max)) {
        // empty block: cannot carry the mass, report the potential's spread
        ell[k] = g.segment(b.offset, b.size).minCoeff();
        res[k] = g.segment(b.offset, b.size).maxCoeff() - ell[k];
      } else if (std::isinf(zero_min)) {
        ell[k] = up_max;
        res[k] = 0.0;
      } else {
        ell[k] = 0.5 * (up_max + zero_min);
        res[k] = std::max(0.0, 0.5 * (up_max - zero_min));
      }
      continue;
    }
    const double l = 0.5 * (lo + hi);
    double r = 0.5 * (hi - lo);
    for (int i = 0; i < b.size; ++i) {
      const int j = b.offset + i;
      const bool at_upper = !b.upper.empty() && x[j] >= b.upper[i];
      if (!b.upper.empty() && b.upper[i] <= 0.0) continue;
      if (x[j] <= 0.0) r = std::max(r, l - g[j]);
      if (at_upper) r = std::max(r, g[j] - l);
    }
    ell[k] = l;
    res[k] = r;
  }
}

double BlockQp::min_projected_eigenvalue() const {
  const int n = static_cast<int>(h_.rows());
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n);
  for (const auto& b : blocks_) p.block(b.offset, b.offset, b.size, b.size).array() -= 1.0 / b.size;
  const double shift = 10.0 * h_.cwiseAbs().maxCoeff() * n;
  Eigen::MatrixXd m = p * h_ * p + shift * (Eigen::MatrixXd::Identity(n, n) - p);
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

int BlockQp::descend(Eigen::VectorXd& x, double& fx, int iters, double tol, const QpOptions& opt) const {
  // Lipschitz estimate by power iteration; backtracking corrects underestimates.
  Eigen::VectorXd v = Eigen::VectorXd::Ones(x.size()).normalized();
  double lip = 1.0;
  for (int it = 0; it < 30; ++it) {
    Eigen::VectorXd w = matvec(h_, v, opt.exec);
    lip = w.norm();
    if (lip == 0.0) break;
    v = w / lip;
  }
  lip = std::max(lip, 1e-12);

  Eigen::VectorXd y = x, z;
  double t = 1.0;
  std::vector<double> ell, res;
  int it = 0;
  for (; it < iters; ++it) {
    if (it % opt.check_every == 0) {
      residuals(x, gradient(x, opt.exec), ell, res);
      if (*std::max_element(res.begin(), res.end()) <= tol) break;
    }
    const Eigen::VectorXd gy = gradient(y, opt.exec);
    const double fy = 0.5 * y.dot(gy + c_);
    double fz;
    for (int bt = 0;; ++bt) {
      z = project(y - gy / lip);
      fz = 0.5 * z.dot(matvec(h_, z, opt.exec)) + c_.dot(z);
      const Eigen::VectorXd d = z - y;
      if (fz <= fy + gy.dot(d) + 0.5 * lip * d.squaredNorm() + 1e-14 * std::abs(fy) || bt > 60) break;
      lip *= 2.0;
    }
    Eigen::VectorXd xn = (fz <= fx) ? z : x;
    const double fxn = std::min(fz, fx);
    if (opt.check_monotone && fxn > fx)
      throw std::logic_error("equilibrium solver: energy increased at iteration " + std::to_string(it));
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = xn + (t / tn) * (z - xn) + ((t - 1.0) / tn) * (xn - x);
    x = std::move(xn);
    fx = fxn;
    t = tn;
  }
  return it;
}

QpResult BlockQp::solve(const Eigen::VectorXd& x0, const QpOptions& opt) const {
  QpResult out;
  Eigen::VectorXd x = project(x0);
  double fx = energy(x);
  const double first_tol = opt.polish ? std::max(opt.tol, opt.coarse_tol) : opt.tol;
  out.iterations = descend(x, fx, opt.iters, first_tol, opt);

  if (opt.polish) {
    Eigen::VectorXd xp = x;
    if (polish(xp)) {
      const double fp = energy(xp);
      if (fp <= fx + 1e-12 * std::max(1.0, std::abs(fx))) {
        x = xp;
        fx = fp;
        out.polished = true;
      }
    }
  }
  out.grad = gradient(x, opt.exec);
  residuals(x, out.grad, out.ell, out.residual);
  if (*std::max_element(out.residual.begin(), out.residual.end()) > opt.tol && out.iterations < opt.iters) {
    out.iterations += descend(x, fx, opt.iters - out.iterations, opt.tol, opt);
    out.grad = gradient(x, opt.exec);
    residuals(x, out.grad, out.ell, out.residual);
  }
  out.x = x;
  out.energy = fx;
  return out;
}

bool BlockQp::polish(Eigen::VectorXd& x) const {
  const int n = static_cast<int>(x.size());
  const int nb = static_cast<int>(blocks_.size());
  // status: 0 at zero, 1 free, 2 at upper bound
  std::vector<int> status(n, 1), blk(n);
  std::vector<double> up(n, std::numeric_limits<double>::infinity());
  for (int k = 0; k < nb; ++k) {
    const auto& b = blocks_[k];
    for (int i = 0; i < b.size; ++i) {
      const int j = b.offset + i;
      blk[j] = k;
      if (!b.upper.empty()) up[j] = b.upper[i];
      status[j] = x[j] <= 0.0 ? 0 : (x[j] >= up[j] ? 2 : 1);
    }
  }
  std::set<std::vector<int>> seen;
  const double gscale = std::max(1.0, c_.cwiseAbs().maxCoeff());
  for (int round = 0; round < 200; ++round) {
    if (!seen.insert(status).second) return false;
    std::vector<int> fidx;
    for (int j = 0; j < n; ++j)
      if (status[j] == 1) fidx.push_back(j);
    std::vector<int> bcount(nb, 0);
    for (int j : fidx) ++bcount[blk[j]];
    std::vector<int> lrow(nb, -1);
    int m = static_cast<int>(fidx.size());
    for (int k = 0; k < nb; ++k)
      if (bcount[k] > 0) lrow[k] = m++;
      else return false;

    Eigen::VectorXd xfix = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j)
      if (status[j] == 2) xfix[j] = up[j];
    const Eigen::VectorXd hfix = h_ * xfix;

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    const int nf = static_cast<int>(fidx.size());
    for (int a = 0; a < nf; ++a) {
      for (int b = 0; b < nf; ++b) kkt(a, b) = h_(fidx[a], fidx[b]);
      const int r = lrow[blk[fidx[a]]];
      kkt(a, r) = -1.0;
      kkt(r, a) = 1.0;
      rhs[a] = -c_[fidx[a]] - hfix[fidx[a]];
    }
    for (int k = 0; k < nb; ++k) {
      double fixed = 0.0;
      for (int i = 0; i < blocks_[k].size; ++i) fixed += xfix[blocks_[k].offset + i];
      rhs[lrow[k]] = blocks_[k].mass - fixed;
    }
    const Eigen::VectorXd sol = kkt.partialPivLu().solve(rhs);
    if (!sol.allFinite()) return false;

    Eigen::VectorXd xn = xfix;
    for (int a = 0; a < nf; ++a) xn[fidx[a]] = sol[a];
    const Eigen::VectorXd g = h_ * xn + c_;
    const double eps = 1e-11 * gscale;
    bool changed = false;
    std::vector<int> ns = status;
    for (int j = 0; j < n; ++j) {
      const double l = sol[lrow[blk[j]]];
      if (status[j] == 1) {
        if (xn[j] < 0.0) ns[j] = 0;
        else if (xn[j] > up[j]) ns[j] = 2;
      } else if (status[j] == 0) {
        if (g[j] < l - eps) ns[j] = 1;
      } else {
        if (g[j] > l + eps) ns[j] = 1;
      }
      changed |= ns[j] != status[j];
    }
    if (!changed) {
      x = xn;
      return true;
    }
    status = std::move(ns);
  }
  return false;
}

}  // namespace tmm::detail
