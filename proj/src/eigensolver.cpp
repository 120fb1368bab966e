#include "rholap/eigensolver.hpp"

#include "rholap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace rholap {

EigenPairs dense_smallest(const Eigen::MatrixXd& s, std::size_t k, bool want_vectors) {
  const auto n = static_cast<std::size_t>(s.rows());
  if (k < 1 || k > n) throw InputError("requested eigenvalue count out of range");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense eigensolver failed");
  const auto kk = static_cast<Eigen::Index>(k);
  EigenPairs out;
  out.values = es.eigenvalues().head(kk);
  const Eigen::MatrixXd v = es.eigenvectors().leftCols(kk);
  out.residuals = ((s * v) - v * out.values.asDiagonal()).colwise().norm().transpose();
  if (want_vectors) out.vectors = v;
  return out;
}

namespace {

class BlockLanczos {
 public:
  BlockLanczos(const SparseRowMatrix& s, std::size_t k, const LanczosOptions& opts)
      : s_(s), n_(s.rows()), k_(static_cast<Eigen::Index>(k)), opts_(opts), rng_(opts.seed) {
    p_ = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::max<std::size_t>(opts.block_size, 1)), n_);
    max_steps_ = opts.max_steps ? opts.max_steps : 10 * k + 200;
    const auto cap = std::min<Eigen::Index>(n_, p_ * static_cast<Eigen::Index>(max_steps_ + 1));
    q_.resize(n_, cap);
  }

  EigenPairs run() {
    Eigen::MatrixXd start(n_, p_);
    fill_random(start);
    Eigen::MatrixXd unused;
    append_block(start, unused, false);

    Eigen::Index next_check = std::max<Eigen::Index>(k_ + p_, 2 * p_);
    for (std::size_t step = 0; step < max_steps_; ++step) {
      const std::size_t j = sizes_.size() - 1;
      const Eigen::Index off = offsets_[j];
      const Eigen::Index pj = sizes_[j];
      Eigen::MatrixXd w = s_ * q_.middleCols(off, pj);
      Eigen::MatrixXd a = q_.middleCols(off, pj).transpose() * w;
      a = 0.5 * (a + a.transpose()).eval();
      w -= q_.middleCols(off, pj) * a;
      if (j > 0) w -= q_.middleCols(offsets_[j - 1], sizes_[j - 1]) * b_[j - 1].transpose();
      a_.push_back(a);

      Eigen::MatrixXd bj;
      append_block(w, bj, true);
      b_.push_back(bj);
      iterations_ = step + 1;

      const Eigen::Index cols = used_cols();
      const bool exhausted = sizes_.back() == 0;
      if (exhausted || cols >= next_check || step + 1 == max_steps_) {
        if (cols - sizes_.back() >= k_ && ritz(exhausted)) return finish(true);
        next_check = static_cast<Eigen::Index>(1.15 * static_cast<double>(cols)) + p_;
      }
      if (exhausted) break;
    }
    ritz(false);
    EigenPairs partial = finish(false);
    throw ConvergenceError("block Lanczos did not converge within " + std::to_string(max_steps_) + " steps",
                           std::move(partial));
  }

 private:
  Eigen::Index used_cols() const { return offsets_.back() + sizes_.back(); }

  void fill_random(Eigen::MatrixXd& m) {
    std::normal_distribution<double> g(0.0, 1.0);
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = g(rng_);
  }

  // Orthogonalizes the columns of w against the basis and each other, appends
  // them as the next block and records w = Q_next * coeff. Columns that vanish
  // are replaced by random directions so the block keeps its width.
  void append_block(Eigen::MatrixXd& w, Eigen::MatrixXd& coeff, bool record) {
    const Eigen::Index base = offsets_.empty() ? 0 : used_cols();
    const Eigen::Index room = std::min<Eigen::Index>(p_, q_.cols() - base);
    const double scale = std::max(1.0, w.norm());
    if (record) coeff = Eigen::MatrixXd::Zero(p_, w.cols());
    Eigen::Index added = 0;
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      Eigen::VectorXd v = w.col(c);
      for (int pass = 0; pass < 2; ++pass) {
        if (base > 0) v -= q_.leftCols(base) * (q_.leftCols(base).transpose() * v);
        for (Eigen::Index t = 0; t < added; ++t) {
          const double h = q_.col(base + t).dot(v);
          v -= h * q_.col(base + t);
          if (record) coeff(t, c) += h;
        }
      }
      const double nv = v.norm();
      if (added < room && nv > 1e-10 * scale) {
        q_.col(base + added) = v / nv;
        if (record) coeff(added, c) = nv;
        ++added;
      }
    }
    // Breakdown: an invariant subspace was found, continue in a fresh direction.
    while (added < room) {
      Eigen::MatrixXd r(n_, 1);
      fill_random(r);
      Eigen::VectorXd v = r.col(0);
      for (int pass = 0; pass < 2; ++pass) {
        v -= q_.leftCols(base + added) * (q_.leftCols(base + added).transpose() * v);
      }
      const double nv = v.norm();
      if (nv < 1e-8) break;
      q_.col(base + added) = v / nv;
      ++added;
    }
    if (record) coeff.conservativeResize(added, Eigen::NoChange);
    offsets_.push_back(base);
    sizes_.push_back(added);
  }

  bool ritz(bool exhausted) {
    const std::size_t nblocks = a_.size();
    const Eigen::Index m = offsets_[nblocks - 1] + sizes_[nblocks - 1];
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t j = 0; j < nblocks; ++j) {
      t.block(offsets_[j], offsets_[j], sizes_[j], sizes_[j]) = a_[j];
      if (j + 1 < nblocks) {
        const auto& b = b_[j];
        t.block(offsets_[j + 1], offsets_[j], b.rows(), b.cols()) = b;
        t.block(offsets_[j], offsets_[j + 1], b.cols(), b.rows()) = b.transpose();
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    theta_ = es.eigenvalues();
    y_ = es.eigenvectors();
    const double spread = std::max({std::abs(theta_(0)), std::abs(theta_(m - 1)), 1e-300});
    const Eigen::Index kk = std::min(k_, m);
    est_ = Eigen::VectorXd::Zero(kk);
    const auto& b_last = b_[nblocks - 1];
    const Eigen::Index last_off = offsets_[nblocks - 1];
    const Eigen::Index last_size = sizes_[nblocks - 1];
    bool ok = kk == k_;
    for (Eigen::Index i = 0; i < kk; ++i) {
      if (!exhausted && b_last.rows() > 0)
        est_(i) = (b_last * y_.col(i).segment(last_off, last_size)).norm();
      if (est_(i) > opts_.tol * spread) ok = false;
    }
    basis_cols_ = m;
    return ok;
  }

  EigenPairs finish(bool converged) {
    EigenPairs out;
    out.converged = converged;
    out.iterations = iterations_;
    const Eigen::Index kk = std::min<Eigen::Index>(k_, theta_.size());
    out.values = theta_.head(kk);
    Eigen::MatrixXd x = q_.leftCols(basis_cols_) * y_.leftCols(kk);
    out.residuals = ((s_ * x) - x * out.values.asDiagonal()).colwise().norm().transpose();
    if (opts_.want_vectors) out.vectors = std::move(x);
    return out;
  }

  const SparseRowMatrix& s_;
  Eigen::Index n_;
  Eigen::Index k_;
  Eigen::Index p_;
  LanczosOptions opts_;
  std::size_t max_steps_;
  std::mt19937_64 rng_;

  Eigen::MatrixXd q_;
  std::vector<Eigen::Index> offsets_;
  std::vector<Eigen::Index> sizes_;
  std::vector<Eigen::MatrixXd> a_;
  std::vector<Eigen::MatrixXd> b_;
  std::size_t iterations_ = 0;

  Eigen::VectorXd theta_;
  Eigen::MatrixXd y_;
  Eigen::VectorXd est_;
  Eigen::Index basis_cols_ = 0;
};

}  // namespace

EigenPairs lanczos_smallest(const SparseRowMatrix& s, std::size_t k, const LanczosOptions& opts) {
  if (s.rows() != s.cols()) throw InputError("matrix must be square");
  if (k < 1 || static_cast<Eigen::Index>(k) > s.rows()) throw InputError("requested eigenvalue count out of range");
  BlockLanczos solver(s, k, opts);
  return solver.run();
}

}  // namespace rholap
