#include <ardnet/model.hpp>
#include <ardnet/sphere.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace ardnet {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::vector<int> ArdDataset::non_ard_index() const {
  std::vector<char> is_ard(static_cast<std::size_t>(std::max(n, 0)), 0);
  for (int id : ard_index) {
    if (id >= 0 && id < n) is_ard[static_cast<std::size_t>(id)] = 1;
  }
  std::vector<int> out;
  for (int i = 0; i < n; ++i) {
    if (!is_ard[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

bool ArdDataset::operator==(const ArdDataset& o) const {
  auto same_opt = [](const std::optional<Vector>& a, const std::optional<Vector>& b) {
    if (a.has_value() != b.has_value()) return false;
    return !a || (a->size() == b->size() && *a == *b);
  };
  return n == o.n && y == o.y && census_traits.rows() == o.census_traits.rows() &&
         census_traits.cols() == o.census_traits.cols() && census_traits == o.census_traits &&
         group_sizes.size() == o.group_sizes.size() && group_sizes == o.group_sizes &&
         covariate_distance.rows() == o.covariate_distance.rows() &&
         covariate_distance.cols() == o.covariate_distance.cols() && covariate_distance == o.covariate_distance &&
         ard_index == o.ard_index && same_opt(reported_degrees, o.reported_degrees) && total_prop == o.total_prop &&
         trait_names == o.trait_names;
}

double ScalarPrior::log_density(double x) const {
  if (!std::isfinite(x)) return kNegInf;
  switch (kind) {
    case Kind::gamma:
      if (x <= 0) return kNegInf;
      return a * std::log(b) - std::lgamma(a) + (a - 1.0) * std::log(x) - b * x;
    case Kind::uniform:
      if (x < a || x > b) return kNegInf;
      return -std::log(b - a);
  }
  return kNegInf;
}

double ScalarPrior::mean() const { return kind == Kind::gamma ? a / b : 0.5 * (a + b); }

void ScalarPrior::validate(const char* name) const {
  if (kind == Kind::gamma && !(a > 0 && b > 0)) {
    throw ValidationError(std::string(name) + " prior: Gamma shape and rate must be > 0");
  }
  if (kind == Kind::uniform && !(a >= 0 && b > a)) {
    throw ValidationError(std::string(name) + " prior: Uniform bounds must satisfy 0 <= lo < hi");
  }
}

double LocationHyperprior::log_density(double x) const {
  if (flat) return 0.0;
  const double r = x - mean;
  return -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * r * r / var;
}

double ScaleHyperprior::log_density(double s2) const {
  if (s2 <= 0) return kNegInf;
  if (flat) return 0.0;
  const double h = dof / 2.0;
  return h * std::log(h) - std::lgamma(h) + dof * std::log(std::sqrt(scale)) - (h + 1.0) * std::log(s2) -
         dof * scale / (2.0 * s2);
}

void PriorConfig::validate() const {
  zeta.validate("zeta");
  eta.validate("eta");
  if (p < 2) throw ValidationError("latent dimension p must be >= 2");
  if (T < 0 || T % 2 != 0) throw ValidationError("chain length T must be even and >= 0");
  if (thin < 1) throw ValidationError("thin must be >= 1");
  if (adapt_window < 1) throw ValidationError("adapt_window must be >= 1");
  if (knn_k < 1) throw ValidationError("knn_k must be >= 1");
  if (n_graph_draws < 0) throw ValidationError("graph draw count must be >= 0");
  if (!mu_d.flat && !(mu_d.var > 0)) throw ValidationError("mu_d hyperprior variance must be > 0");
  if (!mu_beta.flat && !(mu_beta.var > 0)) throw ValidationError("mu_beta hyperprior variance must be > 0");
  if (!sigma2_d.flat && !(sigma2_d.dof > 0 && sigma2_d.scale > 0)) {
    throw ValidationError("sigma2_d hyperprior must have dof > 0 and scale > 0");
  }
  if (!sigma2_beta.flat && !(sigma2_beta.dof > 0 && sigma2_beta.scale > 0)) {
    throw ValidationError("sigma2_beta hyperprior must have dof > 0 and scale > 0");
  }
  if (degree_mode == DegreeMode::pinned && !(pinned_mean_degree > 0)) {
    throw ValidationError("pinned degree mode needs pinned_mean_degree > 0");
  }
}

AnchorSpec default_anchors(int dim) {
  AnchorSpec spec;
  spec.groups = {0, 1, 2};
  spec.targets = PointSet::Zero(3, dim);
  for (int a = 0; a < 3 && a < dim; ++a) spec.targets(a, a) = 1.0;
  return spec;
}

ValidatedDataset validate_dataset(const ArdDataset& raw, double min_sampling_share, int required_anchors) {
  std::vector<std::string> errors;
  const int m = raw.m();
  const int K = raw.K();
  auto err = [&errors](auto&&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    errors.push_back(os.str());
  };

  if (raw.n <= 0) err("population size n must be > 0");
  if (m > raw.n) err("ARD sample size m=", m, " exceeds n=", raw.n);
  if (K < required_anchors) err("K=", K, " groups is fewer than the ", required_anchors, " required anchors");
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < K; ++k) {
      if (raw.y(i, k) < 0) err("ARD count y[", i, "][", k, "] = ", raw.y(i, k), " is negative");
    }
  }
  if (static_cast<int>(raw.ard_index.size()) != m) {
    err("ard_index has ", raw.ard_index.size(), " entries but y has ", m, " rows");
  } else {
    std::vector<int> sorted = raw.ard_index;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) err("ard_index has duplicate node ids");
    if (!sorted.empty() && (sorted.front() < 0 || sorted.back() >= raw.n)) err("ard_index has ids outside [0, n)");
  }
  if (raw.group_sizes.size() != K) err("group_sizes has ", raw.group_sizes.size(), " entries, expected K=", K);
  if (raw.has_census()) {
    if (raw.census_traits.rows() != raw.n) err("census has ", raw.census_traits.rows(), " rows, expected n=", raw.n);
    if (raw.census_traits.cols() != K) err("census has ", raw.census_traits.cols(), " trait columns, expected K=", K);
    if (errors.empty()) {
      for (int i = 0; i < raw.n; ++i) {
        for (int k = 0; k < K; ++k) {
          const int v = raw.census_traits(i, k);
          if (v != 0 && v != 1) err("census[", i, "][", k, "] = ", v, " is not 0/1");
        }
      }
      for (int k = 0; k < K; ++k) {
        if (raw.group_sizes(k) != raw.census_traits.col(k).sum()) {
          err("group size N_", k, " = ", raw.group_sizes(k), " differs from census column sum ",
              raw.census_traits.col(k).sum());
        }
      }
    }
  }
  const int non = raw.n - m;
  if (raw.covariate_distance.rows() != non || raw.covariate_distance.cols() != (non > 0 ? m : raw.covariate_distance.cols())) {
    if (!(non == 0 && raw.covariate_distance.size() == 0)) {
      err("covariate distance must be (n-m) x m = ", non, " x ", m, ", got ", raw.covariate_distance.rows(), " x ",
          raw.covariate_distance.cols());
    }
  }
  for (Eigen::Index r = 0; r < raw.covariate_distance.rows(); ++r) {
    for (Eigen::Index c = 0; c < raw.covariate_distance.cols(); ++c) {
      const double v = raw.covariate_distance(r, c);
      if (!std::isfinite(v) || v < 0) err("covariate distance [", r, "][", c, "] = ", v, " is not finite and >= 0");
    }
  }
  if (raw.reported_degrees) {
    if (raw.reported_degrees->size() != m) err("reported degrees has ", raw.reported_degrees->size(), " entries, expected m=", m);
    for (Eigen::Index i = 0; i < raw.reported_degrees->size(); ++i) {
      const double v = (*raw.reported_degrees)(i);
      if (!(v >= 0) || v != std::floor(v)) err("reported degree [", i, "] = ", v, " is not a nonnegative integer");
    }
  }
  if (!errors.empty()) {
    std::ostringstream os;
    os << "dataset validation failed:";
    for (const auto& e : errors) os << "\n  - " << e;
    throw ValidationError(os.str());
  }

  ValidatedDataset out{raw, false, {}};
  if (raw.sampling_share() < min_sampling_share) {
    out.excluded = true;
    std::ostringstream os;
    os << "sampling share " << raw.sampling_share() << " below floor " << min_sampling_share << "; excluded";
    out.warnings.push_back(os.str());
  }
  return out;
}

PrevalenceResult fix_group_prevalence(const Vector& group_sizes, int n) {
  if (n <= 0) throw ValidationError("fix_group_prevalence: n must be > 0");
  PrevalenceResult out;
  out.b = group_sizes / static_cast<double>(n);
  for (Eigen::Index k = 0; k < group_sizes.size(); ++k) {
    if (group_sizes(k) <= 0) {
      out.empty_groups.push_back(static_cast<int>(k));
      out.warnings.push_back("group " + std::to_string(k) + " is empty in the census; dropped");
    }
  }
  if (group_sizes.size() > 0 && (group_sizes.array() >= n).all()) {
    out.warnings.push_back("every group contains the whole population; prevalences are degenerate");
  }
  return out;
}

ArdDataset drop_groups(const ArdDataset& data, const std::vector<int>& groups) {
  std::vector<int> keep;
  for (int k = 0; k < data.K(); ++k) {
    if (std::find(groups.begin(), groups.end(), k) == groups.end()) keep.push_back(k);
  }
  ArdDataset out = data;
  const auto kept = static_cast<Eigen::Index>(keep.size());
  out.y.resize(data.m(), kept);
  out.census_traits.resize(data.census_traits.rows(), data.has_census() ? kept : 0);
  out.group_sizes.resize(kept);
  out.trait_names.clear();
  for (Eigen::Index c = 0; c < kept; ++c) {
    const int k = keep[static_cast<std::size_t>(c)];
    out.y.col(c) = data.y.col(k);
    if (data.has_census()) out.census_traits.col(c) = data.census_traits.col(k);
    out.group_sizes(c) = data.group_sizes(k);
    if (static_cast<std::size_t>(k) < data.trait_names.size()) out.trait_names.push_back(data.trait_names[static_cast<std::size_t>(k)]);
  }
  return out;
}

namespace {

// Greedy farthest-point placement of `count` directions among random candidates,
// keeping clear of the already fixed rows.
PointSet spread_directions(const PointSet& fixed, int count, int dim, Rng& rng) {
  const int n_candidates = 64 * std::max(count, 1) + 256;
  PointSet candidates(n_candidates, dim);
  for (int c = 0; c < n_candidates; ++c) candidates.row(c) = sphere::sample_uniform(dim, rng).transpose();
  PointSet chosen(fixed.rows() + count, dim);
  chosen.topRows(fixed.rows()) = fixed;
  Vector closest = Vector::Constant(n_candidates, 2.0);  // min over chosen of (1 - cos)
  auto update = [&](Eigen::Index row) {
    for (int c = 0; c < n_candidates; ++c) {
      closest(c) = std::min(closest(c), 1.0 - candidates.row(c).dot(chosen.row(row)));
    }
  };
  for (Eigen::Index r = 0; r < fixed.rows(); ++r) update(r);
  for (int j = 0; j < count; ++j) {
    Eigen::Index best = 0;
    closest.maxCoeff(&best);
    const Eigen::Index row = fixed.rows() + j;
    chosen.row(row) = candidates.row(best);
    update(row);
  }
  return chosen.bottomRows(count);
}

}  // namespace

ModelParams initialize_params(const ArdDataset& data, const PriorConfig& priors, const AnchorSpec& anchors,
                              Rng& rng) {
  const int m = data.m();
  const int K = data.K();
  const int dim = priors.dim();
  if (anchors.groups.size() < 3 && priors.latent_model) {
    throw ValidationError("initialize_params: at least three anchored groups are required");
  }
  if (static_cast<Eigen::Index>(anchors.groups.size()) != anchors.targets.rows()) {
    throw ValidationError("initialize_params: anchor groups and targets differ in count");
  }
  for (int g : anchors.groups) {
    if (g < 0 || g >= K) throw ValidationError("initialize_params: anchored group index out of range");
  }

  ModelParams params;
  params.fixed_centers = anchors.groups;

  // Prevalences.
  Vector b(K);
  if (data.has_census() || data.group_sizes.size() == K) {
    b = data.group_sizes / static_cast<double>(data.n);
  } else {
    b.setConstant(1.0 / K);
  }
  if (priors.prevalence_mode == PrevalenceMode::estimated && !data.has_census()) {
    const Vector col = data.y.cast<double>().colwise().sum().transpose();
    const double total = col.sum();
    const double scale = data.total_prop.value_or(1.0);
    for (int k = 0; k < K; ++k) b(k) = total > 0 ? std::max(col(k), 0.5) / total * scale : scale / K;
  }
  for (int k = 0; k < K; ++k) b(k) = std::max(b(k), 1e-6);
  params.beta = b.array().log();

  // Degrees.
  params.log_d.resize(m);
  const double bsum = b.sum();
  for (int i = 0; i < m; ++i) {
    double d;
    if (data.reported_degrees) {
      d = std::max((*data.reported_degrees)(i), 0.5);
    } else {
      d = std::max(static_cast<double>(data.y.row(i).sum()), 0.5) / bsum;
    }
    params.log_d(i) = std::log(d);
  }
  if (priors.degree_mode == DegreeMode::pinned) {
    params.log_d.array() += std::log(priors.pinned_mean_degree / params.degrees().mean());
  }

  // Centers: anchors at their targets, the rest spread out.
  params.centers.resize(K, dim);
  std::vector<char> anchored(static_cast<std::size_t>(K), 0);
  for (std::size_t a = 0; a < anchors.groups.size(); ++a) {
    params.centers.row(anchors.groups[a]) = anchors.targets.row(static_cast<Eigen::Index>(a));
    anchored[static_cast<std::size_t>(anchors.groups[a])] = 1;
  }
  std::vector<int> free_groups;
  for (int k = 0; k < K; ++k) {
    if (!anchored[static_cast<std::size_t>(k)]) free_groups.push_back(k);
  }
  const PointSet spread = spread_directions(anchors.targets, static_cast<int>(free_groups.size()), dim, rng);
  for (std::size_t j = 0; j < free_groups.size(); ++j) {
    params.centers.row(free_groups[j]) = spread.row(static_cast<Eigen::Index>(j));
  }

  // Positions at the prevalence-weighted mean direction of known groups; one
  // round of moving free centers to their members' mean direction in between.
  PointSet fallback(m, dim);
  for (int i = 0; i < m; ++i) fallback.row(i) = sphere::sample_uniform(dim, rng).transpose();
  auto place_positions = [&] {
    params.z.resize(m, dim);
    for (int i = 0; i < m; ++i) {
      Vector dir = Vector::Zero(dim);
      for (int k = 0; k < K; ++k) {
        if (data.y(i, k) > 0) dir += (data.y(i, k) / b(k)) * params.centers.row(k).transpose();
      }
      const double norm = dir.norm();
      if (norm > 1e-12) {
        params.z.row(i) = (dir / norm).transpose();
      } else {
        params.z.row(i) = fallback.row(i);
      }
    }
  };
  place_positions();
  if (data.has_census()) {
    for (int k : free_groups) {
      Vector sum = Vector::Zero(dim);
      for (int r = 0; r < m; ++r) {
        if (data.census_traits(data.ard_index[static_cast<std::size_t>(r)], k)) sum += params.z.row(r).transpose();
      }
      if (sum.norm() > 1e-12) params.centers.row(k) = (sum / sum.norm()).transpose();
    }
    place_positions();
  }

  params.eta = Vector::Constant(K, priors.eta.mean());
  params.zeta = priors.latent_model ? priors.zeta.mean() : 0.0;

  const double mean_log_d = params.log_d.mean();
  params.mu_d = mean_log_d;
  params.sigma2_d = m > 1 ? std::max((params.log_d.array() - mean_log_d).square().sum() / (m - 1), 1e-2) : 1.0;
  params.mu_beta = params.beta.mean();
  params.sigma2_beta =
      K > 1 ? std::max((params.beta.array() - params.mu_beta).square().sum() / (K - 1), 1e-2) : 1.0;
  params.nu = Vector::Zero(m);
  return params;
}

bool concentrations_distinct(const Vector& eta) {
  if (eta.size() < 2) return false;
  return eta.maxCoeff() - eta.minCoeff() > 1e-12;
}

}  // namespace ardnet
