#include <ardnet/regress.hpp>

#include <map>

namespace ardnet {

namespace {

Matrix design(const Matrix& X, bool intercept) {
  if (!intercept) return X;
  Matrix out(X.rows(), X.cols() + 1);
  out.col(0).setOnes();
  out.rightCols(X.cols()) = X;
  return out;
}

// Returns false when the design is rank deficient.
bool solve(const Matrix& A, const Vector& y, Vector& beta) {
  Eigen::ColPivHouseholderQR<Matrix> qr(A);
  qr.setThreshold(1e-10);
  if (qr.rank() < A.cols()) return false;
  beta = qr.solve(y);
  return true;
}

}  // namespace

OlsResult ols_regress(const Vector& y, const Matrix& X, const OlsOptions& options) {
  if (X.rows() != y.size()) throw ValidationError("ols_regress: y and X have different row counts");
  const Matrix A = design(X, options.add_intercept);
  if (A.rows() <= A.cols()) throw ValidationError("ols_regress: need more observations than coefficients");
  if (!A.allFinite() || !y.allFinite()) throw ValidationError("ols_regress: non-finite input");
  OlsResult out;
  if (!solve(A, y, out.coefficients)) throw ValidationError("ols_regress: design matrix is rank deficient");
  out.residual_ss = (y - A * out.coefficients).squaredNorm();
  if (options.bootstrap <= 0) return out;

  // Group rows into blocks.
  std::vector<std::vector<Eigen::Index>> blocks;
  if (options.clusters) {
    if (static_cast<Eigen::Index>(options.clusters->size()) != y.size()) {
      throw ValidationError("ols_regress: cluster ids must match the number of rows");
    }
    std::map<int, std::size_t> slot;
    for (Eigen::Index r = 0; r < y.size(); ++r) {
      const int id = (*options.clusters)[static_cast<std::size_t>(r)];
      auto [it, inserted] = slot.emplace(id, blocks.size());
      if (inserted) blocks.emplace_back();
      blocks[it->second].push_back(r);
    }
  } else {
    for (Eigen::Index r = 0; r < y.size(); ++r) blocks.push_back({r});
  }
  if (blocks.size() < 2) throw ValidationError("ols_regress: bootstrap needs at least two clusters");

  Rng rng = make_stream(options.seed, 0xb0);
  std::uniform_int_distribution<std::size_t> pick(0, blocks.size() - 1);
  std::vector<Vector> draws;
  int attempts = 0;
  while (static_cast<int>(draws.size()) < options.bootstrap) {
    if (++attempts > 20 * options.bootstrap) throw NumericalError("ols_regress: bootstrap designs keep failing");
    std::vector<Eigen::Index> rows;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const auto& blk = blocks[pick(rng)];
      rows.insert(rows.end(), blk.begin(), blk.end());
    }
    Matrix Ab(static_cast<Eigen::Index>(rows.size()), A.cols());
    Vector yb(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      Ab.row(static_cast<Eigen::Index>(r)) = A.row(rows[r]);
      yb(static_cast<Eigen::Index>(r)) = y(rows[r]);
    }
    Vector beta;
    if (Ab.rows() > Ab.cols() && solve(Ab, yb, beta)) draws.push_back(std::move(beta));
  }
  const auto B = static_cast<double>(draws.size());
  Vector mean = Vector::Zero(A.cols());
  for (const auto& d : draws) mean += d;
  mean /= B;
  Vector ss = Vector::Zero(A.cols());
  for (const auto& d : draws) ss += (d - mean).array().square().matrix();
  out.bootstrap_sd = (ss / (B - 1.0)).array().sqrt().matrix();
  out.bootstrap_draws = static_cast<int>(draws.size());
  return out;
}

}  // namespace ardnet
