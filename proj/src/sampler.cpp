#include <ardnet/likelihood.hpp>
#include <ardnet/sampler.hpp>
#include <ardnet/sphere.hpp>

#include <cmath>
#include <sstream>

namespace ardnet {

double adapt_jump_scale(double window_acceptance, double current_scale, double target) {
  return std::clamp(current_scale * std::exp(window_acceptance - target), 1e-4, 1e4);
}

Vector update_center_gibbs(const PointSet& members, const Vector& weights, double eta, Rng& rng,
                           const Vector& prior_mu, double prior_kappa) {
  const auto dim = members.cols() > 0 ? members.cols() : prior_mu.size();
  Vector resultant = Vector::Zero(dim);
  for (Eigen::Index r = 0; r < members.rows(); ++r) resultant += weights(r) * members.row(r).transpose();
  resultant *= eta;
  if (prior_kappa > 0 && prior_mu.size() == dim) resultant += prior_kappa * prior_mu;
  const double kappa = resultant.norm();
  if (kappa < 1e-12) return sphere::sample_uniform(static_cast<int>(dim), rng);
  return sphere::sample_vmf(resultant / kappa, kappa, rng);
}

namespace {

const double kLogFloor = std::log(kLambdaFloor);

inline double cell_loglik(double count, double log_lambda) {
  const double ll = std::max(log_lambda, kLogFloor);
  return count * ll - std::exp(ll);
}

double sample_scaled_inv_chi2(double dof, double scale, Rng& rng) {
  std::gamma_distribution<double> gamma(dof / 2.0, 2.0);
  return dof * scale / gamma(rng);
}

struct Block {
  std::string name;
  Vector scale;
  Vector window_accept;
  Vector window_tries;
  double retained_accept = 0.0;
  double retained_tries = 0.0;

  Block(std::string n, Eigen::Index size, double initial) : name(std::move(n)) {
    scale = Vector::Constant(size, initial);
    window_accept = Vector::Zero(size);
    window_tries = Vector::Zero(size);
  }
  void record(Eigen::Index i, bool accepted, bool retained_phase) {
    window_tries(i) += 1.0;
    if (accepted) window_accept(i) += 1.0;
    if (retained_phase) {
      retained_tries += 1.0;
      if (accepted) retained_accept += 1.0;
    }
  }
  // Mean acceptance over the window, or -1 when the block did not run.
  double window_rate() const {
    const double tries = window_tries.sum();
    return tries > 0 ? window_accept.sum() / tries : -1.0;
  }
  void adapt(double target) {
    for (Eigen::Index i = 0; i < scale.size(); ++i) {
      if (window_tries(i) > 0) scale(i) = adapt_jump_scale(window_accept(i) / window_tries(i), scale(i), target);
    }
  }
  void reset_window() {
    window_accept.setZero();
    window_tries.setZero();
  }
};

class Chain {
 public:
  Chain(const ArdDataset& data, const PriorConfig& priors, const AnchorSpec& anchors, ModelParams params, Rng& rng,
        const SamplerOptions& options)
      : data_(data), priors_(priors), anchors_(anchors), p_(std::move(params)), rng_(rng), opt_(options),
        m_(data.m()), K_(data.K()), dim_(p_.dim()), latent_(priors.latent_model),
        blocks_{{"z", m_, options.initial_scale},       {"centers", K_, 0.0},
                {"centers_rw", K_, options.initial_scale}, {"d", m_, options.initial_scale},
                {"beta", K_, options.initial_scale},     {"eta", K_, options.initial_scale},
                {"zeta", 1, options.initial_scale},   {"zeta_scale", 1, options.initial_scale}} {
    y_ = data.y.cast<double>();
    anchored_.assign(static_cast<std::size_t>(K_), 0);
    for (int g : p_.fixed_centers) anchored_[static_cast<std::size_t>(g)] = 1;
    members_.resize(static_cast<std::size_t>(K_));
    traits_.resize(static_cast<std::size_t>(m_));
    if (data.has_census()) {
      for (int r = 0; r < m_; ++r) {
        const int node = data.ard_index[static_cast<std::size_t>(r)];
        for (int k = 0; k < K_; ++k) {
          if (data.census_traits(node, k)) {
            members_[static_cast<std::size_t>(k)].push_back(r);
            traits_[static_cast<std::size_t>(r)].push_back(k);
          }
        }
      }
    }
    sample_d_ = opt_.update_d && priors.degree_mode != DegreeMode::observed;
    sample_beta_ = opt_.update_beta && priors.prevalence_mode == PrevalenceMode::estimated;
    if (!latent_) {
      p_.zeta = 0.0;
    }
    refresh_all();
  }

  PosteriorDraws run() {
    PosteriorDraws out;
    out.config = priors_;
    const int T = priors_.T;
    const int burn = T / 2;
    if (T == 0) {
      out.draws.push_back(snapshot());
      out.sweeps.push_back(0);
      finish(out);
      return out;
    }
    for (int t = 1; t <= T; ++t) {
      const bool retained_phase = t > burn;
      sweep(retained_phase);
      if (opt_.on_sweep) opt_.on_sweep(t, snapshot());
      if (t % priors_.adapt_window == 0 || t == T) {
        const double lp = current_log_posterior();
        std::ostringstream line;
        line << "sweep " << t << " logpost " << lp;
        for (auto& b : blocks_) {
          const double rate = b.window_rate();
          if (rate >= 0) {
            out.acceptance_log[b.name].push_back(rate);
            line << ' ' << b.name << '=' << rate;
          }
          if (!retained_phase) b.adapt(opt_.target_acceptance);
          b.reset_window();
        }
        out.log_posterior_trace.push_back(lp);
        if (opt_.progress) opt_.progress(line.str());
      }
      if (retained_phase && (t - burn) % priors_.thin == 0) {
        out.draws.push_back(snapshot());
        out.sweeps.push_back(t);
      }
    }
    finish(out);
    return out;
  }

 private:
  void finish(PosteriorDraws& out) const {
    for (const auto& b : blocks_) {
      out.jump_scales[b.name] = b.scale;
      if (b.retained_tries > 0) out.retained_acceptance[b.name] = b.retained_accept / b.retained_tries;
    }
  }

  ModelParams snapshot() const {
    ModelParams s = p_;
    s.nu = nu_from_degree(p_.degrees(), latent_ ? p_.zeta : 0.0, data_.n, dim_);
    return s;
  }

  double current_log_posterior() const {
    const double lp = log_posterior(p_, data_, priors_).value;
    if (std::isnan(lp)) throw NumericalError("run_chain: log posterior is NaN");
    return lp;
  }

  // ---- caches --------------------------------------------------------------

  double log_lambda_cell(int i, int k, double log_cr) const {
    return p_.log_d(i) + p_.beta(k) + log_czeta_ + log_ceta_(k) - log_c0_ - log_cr;
  }

  void refresh_all() {
    log_c0_ = sphere::log_vmf_norm_const(0.0, dim_);
    log_czeta_ = latent_ ? sphere::log_vmf_norm_const(p_.zeta, dim_) : log_c0_;
    log_ceta_.resize(K_);
    for (int k = 0; k < K_; ++k) log_ceta_(k) = latent_ ? sphere::log_vmf_norm_const(p_.eta(k), dim_) : 0.0;
    log_cr_.resize(m_, K_);
    log_lambda_.resize(m_, K_);
    for (int k = 0; k < K_; ++k) refresh_column(k);
  }

  void refresh_column(int k) {
    for (int i = 0; i < m_; ++i) {
      if (latent_) {
        const double c = p_.z.row(i).dot(p_.centers.row(k));
        log_cr_(i, k) = sphere::log_vmf_norm_const(combined_concentration(p_.zeta, p_.eta(k), c), dim_);
      } else {
        log_cr_(i, k) = log_ceta_(k);
      }
      log_lambda_(i, k) = log_lambda_cell(i, k, log_cr_(i, k));
    }
  }

  double column_loglik(int k) const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) s += cell_loglik(y_(i, k), log_lambda_(i, k));
    return s;
  }

  double total_loglik() const {
    double s = 0.0;
    for (int k = 0; k < K_; ++k) s += column_loglik(k);
    return s;
  }

  Vector member_sum(int k) const {
    Vector s = Vector::Zero(dim_);
    for (int r : members_[static_cast<std::size_t>(k)]) s += p_.z.row(r).transpose();
    return s;
  }

  bool accept(double log_ratio, const char* block) {
    if (std::isnan(log_ratio)) throw NumericalError(std::string("run_chain: NaN acceptance ratio in block ") + block);
    return std::log(uniform01(rng_)) < log_ratio;
  }

  Block& block(int idx) { return blocks_[static_cast<std::size_t>(idx)]; }

  // ---- blocks --------------------------------------------------------------

  void sweep(bool retained_phase) {
    if (latent_ && opt_.update_z) update_positions(retained_phase);
    if (latent_ && opt_.update_centers) update_centers(retained_phase);
    if (sample_d_) update_degrees(retained_phase);
    if (sample_beta_) update_shares(retained_phase);
    if (latent_ && opt_.update_eta) update_concentrations(retained_phase);
    if (latent_ && opt_.update_zeta) {
      update_zeta(retained_phase);
      if (sample_d_ && priors_.degree_mode != DegreeMode::pinned) update_zeta_with_scale(retained_phase);
    }
    if (opt_.update_hyper) update_hyperparameters();
    if (latent_ && !p_.fixed_centers.empty() && (opt_.update_z || opt_.update_centers)) repin_anchors();
  }

  void update_positions(bool retained_phase) {
    Block& b = block(0);
    Eigen::RowVectorXd new_log_cr(K_);
    for (int i = 0; i < m_; ++i) {
      const Vector current = p_.z.row(i).transpose();
      const Vector proposal = sphere::propose_vmf_step(current, b.scale(i), rng_);
      double delta = 0.0;
      for (int k = 0; k < K_; ++k) {
        const double c = proposal.dot(p_.centers.row(k));
        new_log_cr(k) = sphere::log_vmf_norm_const(combined_concentration(p_.zeta, p_.eta(k), c), dim_);
        delta += cell_loglik(y_(i, k), log_lambda_cell(i, k, new_log_cr(k))) - cell_loglik(y_(i, k), log_lambda_(i, k));
      }
      for (int k : traits_[static_cast<std::size_t>(i)]) {
        delta += p_.eta(k) * (proposal - current).dot(p_.centers.row(k));
      }
      const bool ok = accept(delta, "z");
      b.record(i, ok, retained_phase);
      if (ok) {
        p_.z.row(i) = proposal.transpose();
        log_cr_.row(i) = new_log_cr;
        for (int k = 0; k < K_; ++k) log_lambda_(i, k) = log_lambda_cell(i, k, new_log_cr(k));
      }
    }
  }

  // Column-k log-likelihood if center k were at `center`; fills the candidate caches.
  double column_loglik_at(int k, const Vector& center, Vector& cand_log_cr) const {
    double s = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double c = p_.z.row(i).dot(center);
      cand_log_cr(i) = sphere::log_vmf_norm_const(combined_concentration(p_.zeta, p_.eta(k), c), dim_);
      s += cell_loglik(y_(i, k), log_lambda_cell(i, k, cand_log_cr(i)));
    }
    return s;
  }

  void set_center(int k, const Vector& center, const Vector& cand_log_cr) {
    p_.centers.row(k) = center.transpose();
    log_cr_.col(k) = cand_log_cr;
    for (int i = 0; i < m_; ++i) log_lambda_(i, k) = log_lambda_cell(i, k, cand_log_cr(i));
  }

  void update_centers(bool retained_phase) {
    Block& gibbs = block(1);
    Block& walk = block(2);
    Vector cand(m_);
    for (int k = 0; k < K_; ++k) {
      if (anchored_[static_cast<std::size_t>(k)]) continue;
      const auto& mem = members_[static_cast<std::size_t>(k)];
      PointSet member_z(static_cast<Eigen::Index>(mem.size()), dim_);
      for (std::size_t j = 0; j < mem.size(); ++j) member_z.row(static_cast<Eigen::Index>(j)) = p_.z.row(mem[j]);
      const Vector ones = Vector::Ones(static_cast<Eigen::Index>(mem.size()));

      // Conjugate proposal; its density is the membership factor, so only the
      // ARD likelihood enters the acceptance ratio.
      const double current_ll = column_loglik(k);
      const Vector proposal = update_center_gibbs(member_z, ones, p_.eta(k), rng_, Vector(dim_), 0.0);
      const double proposal_ll = column_loglik_at(k, proposal, cand);
      bool ok = accept(proposal_ll - current_ll, "centers");
      gibbs.record(k, ok, retained_phase);
      if (ok) set_center(k, proposal, cand);

      // Random-walk refinement.
      const Vector current = p_.centers.row(k).transpose();
      const Vector step = sphere::propose_vmf_step(current, walk.scale(k), rng_);
      const double before = column_loglik(k);
      const double after = column_loglik_at(k, step, cand);
      const double delta = after - before + p_.eta(k) * (step - current).dot(member_sum(k));
      ok = accept(delta, "centers_rw");
      walk.record(k, ok, retained_phase);
      if (ok) set_center(k, step, cand);
    }
  }

  void update_degrees(bool retained_phase) {
    Block& b = block(3);
    for (int i = 0; i < m_; ++i) {
      const double step = b.scale(i) * standard_normal(rng_);
      const double old_ld = p_.log_d(i);
      const double new_ld = old_ld + step;
      double delta = 0.0;
      for (int k = 0; k < K_; ++k) {
        delta += cell_loglik(y_(i, k), log_lambda_(i, k) + step) - cell_loglik(y_(i, k), log_lambda_(i, k));
      }
      const double r_new = new_ld - p_.mu_d;
      const double r_old = old_ld - p_.mu_d;
      delta += -0.5 * (r_new * r_new - r_old * r_old) / p_.sigma2_d;
      const bool ok = accept(delta, "d");
      b.record(i, ok, retained_phase);
      if (ok) {
        p_.log_d(i) = new_ld;
        log_lambda_.row(i).array() += step;
      }
    }
    if (priors_.degree_mode == DegreeMode::pinned) {
      const double shift = std::log(priors_.pinned_mean_degree / p_.degrees().mean());
      p_.log_d.array() += shift;
      log_lambda_.array() += shift;
    }
  }

  void update_shares(bool retained_phase) {
    Block& b = block(4);
    for (int k = 0; k < K_; ++k) {
      const double step = b.scale(k) * standard_normal(rng_);
      double delta = 0.0;
      for (int i = 0; i < m_; ++i) {
        delta += cell_loglik(y_(i, k), log_lambda_(i, k) + step) - cell_loglik(y_(i, k), log_lambda_(i, k));
      }
      const double r_new = p_.beta(k) + step - p_.mu_beta;
      const double r_old = p_.beta(k) - p_.mu_beta;
      delta += -0.5 * (r_new * r_new - r_old * r_old) / p_.sigma2_beta;
      const bool ok = accept(delta, "beta");
      b.record(k, ok, retained_phase);
      if (ok) {
        p_.beta(k) += step;
        log_lambda_.col(k).array() += step;
      }
    }
    if (data_.total_prop && !data_.has_census()) {
      // Scale calibration: sum_k b_k = total_prop, compensated in d so lambda is unchanged.
      const double shift = std::log(*data_.total_prop / p_.beta.array().exp().sum());
      p_.beta.array() += shift;
      p_.log_d.array() -= shift;
    }
  }

  void update_concentrations(bool retained_phase) {
    Block& b = block(5);
    Vector cand_cr(m_);
    for (int k = 0; k < K_; ++k) {
      const double old_eta = p_.eta(k);
      const double new_eta = old_eta + b.scale(k) * standard_normal(rng_);
      const double prior_new = priors_.eta.log_density(new_eta);
      if (new_eta < 0 || !std::isfinite(prior_new)) {
        b.record(k, false, retained_phase);
        continue;
      }
      const double new_log_ceta = sphere::log_vmf_norm_const(new_eta, dim_);
      double delta = -column_loglik(k);
      double new_col = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double c = p_.z.row(i).dot(p_.centers.row(k));
        cand_cr(i) = sphere::log_vmf_norm_const(combined_concentration(p_.zeta, new_eta, c), dim_);
        const double ll = p_.log_d(i) + p_.beta(k) + log_czeta_ + new_log_ceta - log_c0_ - cand_cr(i);
        new_col += cell_loglik(y_(i, k), ll);
      }
      delta += new_col;
      const auto n_members = static_cast<double>(members_[static_cast<std::size_t>(k)].size());
      if (n_members > 0) {
        delta += n_members * (new_log_ceta - log_ceta_(k)) +
                 (new_eta - old_eta) * p_.centers.row(k).dot(member_sum(k).transpose());
      }
      delta += prior_new - priors_.eta.log_density(old_eta);
      const bool ok = accept(delta, "eta");
      b.record(k, ok, retained_phase);
      if (ok) {
        p_.eta(k) = new_eta;
        log_ceta_(k) = new_log_ceta;
        log_cr_.col(k) = cand_cr;
        for (int i = 0; i < m_; ++i) log_lambda_(i, k) = log_lambda_cell(i, k, cand_cr(i));
      }
    }
  }

  void update_zeta(bool retained_phase) {
    Block& b = block(6);
    const double old_zeta = p_.zeta;
    const double new_zeta = old_zeta + b.scale(0) * standard_normal(rng_);
    const double prior_new = priors_.zeta.log_density(new_zeta);
    if (new_zeta <= 0 || !std::isfinite(prior_new)) {
      b.record(0, false, retained_phase);
      return;
    }
    const double new_log_czeta = sphere::log_vmf_norm_const(new_zeta, dim_);
    Matrix cand_cr(m_, K_);
    Matrix cand_ll(m_, K_);
    double new_total = 0.0;
    for (int k = 0; k < K_; ++k) {
      for (int i = 0; i < m_; ++i) {
        const double c = p_.z.row(i).dot(p_.centers.row(k));
        cand_cr(i, k) = sphere::log_vmf_norm_const(combined_concentration(new_zeta, p_.eta(k), c), dim_);
        cand_ll(i, k) = p_.log_d(i) + p_.beta(k) + new_log_czeta + log_ceta_(k) - log_c0_ - cand_cr(i, k);
        new_total += cell_loglik(y_(i, k), cand_ll(i, k));
      }
    }
    const double delta = new_total - total_loglik() + prior_new - priors_.zeta.log_density(old_zeta);
    const bool ok = accept(delta, "zeta");
    b.record(0, ok, retained_phase);
    if (ok) {
      p_.zeta = new_zeta;
      log_czeta_ = new_log_czeta;
      log_cr_ = std::move(cand_cr);
      log_lambda_ = std::move(cand_ll);
    }
  }

  // zeta moves jointly with a common shift of log d and mu_d that cancels the
  // average change in log lambda. The shift depends only on (zeta, zeta') and is
  // antisymmetric, so the move is a volume-preserving involution pair.
  void update_zeta_with_scale(bool retained_phase) {
    Block& b = block(7);
    const double old_zeta = p_.zeta;
    const double new_zeta = old_zeta + b.scale(0) * standard_normal(rng_);
    const double prior_new = priors_.zeta.log_density(new_zeta);
    if (new_zeta <= 0 || !std::isfinite(prior_new)) {
      b.record(0, false, retained_phase);
      return;
    }
    const double new_log_czeta = sphere::log_vmf_norm_const(new_zeta, dim_);
    Matrix cand_cr(m_, K_);
    for (int k = 0; k < K_; ++k) {
      for (int i = 0; i < m_; ++i) {
        const double c = p_.z.row(i).dot(p_.centers.row(k));
        cand_cr(i, k) = sphere::log_vmf_norm_const(combined_concentration(new_zeta, p_.eta(k), c), dim_);
      }
    }
    const double shift = -((new_log_czeta - log_czeta_) - (cand_cr - log_cr_).mean());
    Matrix cand_ll = log_lambda_;
    cand_ll.array() += (new_log_czeta - log_czeta_) + shift;
    cand_ll -= cand_cr - log_cr_;
    double new_total = 0.0;
    for (int k = 0; k < K_; ++k) {
      for (int i = 0; i < m_; ++i) new_total += cell_loglik(y_(i, k), cand_ll(i, k));
    }
    double delta = new_total - total_loglik() + prior_new - priors_.zeta.log_density(old_zeta);
    delta += priors_.mu_d.log_density(p_.mu_d + shift) - priors_.mu_d.log_density(p_.mu_d);
    const bool ok = accept(delta, "zeta_scale");
    b.record(0, ok, retained_phase);
    if (ok) {
      p_.zeta = new_zeta;
      p_.log_d.array() += shift;
      p_.mu_d += shift;
      log_czeta_ = new_log_czeta;
      log_cr_ = std::move(cand_cr);
      log_lambda_ = std::move(cand_ll);
    }
  }

  // Conjugate draws for (mu, sigma2) of a Normal prior on `values`.
  void draw_location_scale(const Vector& values, const LocationHyperprior& loc, const ScaleHyperprior& scale,
                           double& mu, double& sigma2) {
    const auto count = static_cast<double>(values.size());
    if (count < 3) return;
    const double mean = values.mean();
    double precision = count / sigma2;
    double centre = mean;
    if (!loc.flat) {
      precision += 1.0 / loc.var;
      centre = (loc.mean / loc.var + values.sum() / sigma2) / precision;
    }
    mu = centre + standard_normal(rng_) / std::sqrt(precision);
    const double ss = (values.array() - mu).square().sum();
    if (scale.flat) {
      sigma2 = sample_scaled_inv_chi2(count - 2.0, ss / (count - 2.0), rng_);
    } else {
      const double dof = scale.dof + count;
      sigma2 = sample_scaled_inv_chi2(dof, (scale.dof * scale.scale + ss) / dof, rng_);
    }
    sigma2 = std::max(sigma2, 1e-8);
  }

  void update_hyperparameters() {
    if (sample_d_) draw_location_scale(p_.log_d, priors_.mu_d, priors_.sigma2_d, p_.mu_d, p_.sigma2_d);
    if (sample_beta_) draw_location_scale(p_.beta, priors_.mu_beta, priors_.sigma2_beta, p_.mu_beta, p_.sigma2_beta);
  }

  void repin_anchors() {
    PointSet current(static_cast<Eigen::Index>(p_.fixed_centers.size()), dim_);
    for (std::size_t a = 0; a < p_.fixed_centers.size(); ++a) {
      current.row(static_cast<Eigen::Index>(a)) = p_.centers.row(p_.fixed_centers[a]);
    }
    std::vector<int> idx(p_.fixed_centers.size());
    for (std::size_t a = 0; a < idx.size(); ++a) idx[a] = static_cast<int>(a);
    const auto aligned = sphere::procrustes_align(current, idx, anchors_.targets);
    const Matrix& r = aligned.rotation.matrix;
    if ((r - Matrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > 1e-14) {
      p_.z = p_.z * r.transpose();
      p_.centers = p_.centers * r.transpose();
    }
    for (std::size_t a = 0; a < p_.fixed_centers.size(); ++a) {
      p_.centers.row(p_.fixed_centers[a]) = anchors_.targets.row(static_cast<Eigen::Index>(a));
    }
  }

  const ArdDataset& data_;
  const PriorConfig& priors_;
  const AnchorSpec& anchors_;
  ModelParams p_;
  Rng& rng_;
  SamplerOptions opt_;
  int m_, K_, dim_;
  bool latent_;
  bool sample_d_ = false, sample_beta_ = false;
  std::vector<Block> blocks_;
  Matrix y_;
  std::vector<char> anchored_;
  std::vector<std::vector<int>> members_;
  std::vector<std::vector<int>> traits_;
  double log_c0_ = 0.0, log_czeta_ = 0.0;
  Vector log_ceta_;
  Matrix log_cr_;
  Matrix log_lambda_;
};

void check_anchors(const PriorConfig& priors, const AnchorSpec& anchors, const ModelParams& params,
                   const SamplerOptions& options) {
  if (!priors.latent_model || !(options.update_z || options.update_centers)) return;
  sphere::validate_anchor_targets(anchors.targets);
  if (anchors.groups != params.fixed_centers) throw ValidationError("run_chain: anchors differ from the starting point");
}

}  // namespace

PosteriorDraws run_chain_from(const ArdDataset& data, const PriorConfig& priors, const AnchorSpec& anchors,
                              ModelParams initial, Rng& rng, const SamplerOptions& options) {
  priors.validate();
  check_anchors(priors, anchors, initial, options);
  Chain chain(data, priors, anchors, std::move(initial), rng, options);
  return chain.run();
}

PosteriorDraws run_chain(const ArdDataset& data, const PriorConfig& priors, const AnchorSpec& anchors,
                         std::uint64_t seed, const SamplerOptions& options) {
  priors.validate();
  Rng rng = make_stream(seed, 0x51);
  ModelParams init = initialize_params(data, priors, anchors, rng);
  auto out = run_chain_from(data, priors, anchors, std::move(init), rng, options);
  out.seed = seed;
  return out;
}

}  // namespace ardnet
