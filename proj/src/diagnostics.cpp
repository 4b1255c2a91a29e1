#include <ardnet/sampler.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ardnet {

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s / static_cast<double>(v.size() - 1);
}

// Split every chain in half, dropping the middle draw of odd-length chains.
std::vector<std::vector<double>> split_halves(const std::vector<std::vector<double>>& chains) {
  std::vector<std::vector<double>> out;
  for (const auto& c : chains) {
    const std::size_t half = c.size() / 2;
    out.emplace_back(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(half));
    out.emplace_back(c.end() - static_cast<std::ptrdiff_t>(half), c.end());
  }
  return out;
}

void require_chains(const std::vector<std::vector<double>>& chains, const char* who) {
  if (chains.empty()) throw ValidationError(std::string(who) + ": no chains");
  const auto len = chains.front().size();
  if (len < 4) throw ValidationError(std::string(who) + ": need at least 4 draws per chain");
  for (const auto& c : chains) {
    if (c.size() != len) throw ValidationError(std::string(who) + ": chains have different lengths");
  }
}

bool is_constant(const std::vector<std::vector<double>>& chains) {
  const double first = chains.front().front();
  for (const auto& c : chains) {
    for (double x : c) {
      if (x != first) return false;
    }
  }
  return true;
}

struct BetweenWithin {
  double W = 0.0;
  double var_plus = 0.0;
};

BetweenWithin between_within(const std::vector<std::vector<double>>& chains) {
  const auto M = static_cast<double>(chains.size());
  const auto N = static_cast<double>(chains.front().size());
  std::vector<double> means;
  double W = 0.0;
  for (const auto& c : chains) {
    const double mu = mean_of(c);
    means.push_back(mu);
    W += var_of(c, mu);
  }
  W /= M;
  const double grand = mean_of(means);
  double B = 0.0;
  for (double mu : means) B += (mu - grand) * (mu - grand);
  B *= N / (M - 1.0);
  return {W, (N - 1.0) / N * W + B / N};
}

}  // namespace

double split_rhat(const std::vector<std::vector<double>>& chains) {
  require_chains(chains, "split_rhat");
  if (is_constant(chains)) return 1.0;
  const auto halves = split_halves(chains);
  const auto bw = between_within(halves);
  if (!(bw.W > 0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(bw.var_plus / bw.W);
}

double effective_sample_size(const std::vector<std::vector<double>>& chains) {
  require_chains(chains, "effective_sample_size");
  if (is_constant(chains)) return 0.0;
  const auto halves = split_halves(chains);
  const auto M = halves.size();
  const auto N = halves.front().size();
  const auto bw = between_within(halves);
  if (!(bw.var_plus > 0)) return 0.0;

  // Variogram-based autocorrelation estimate rho_t = 1 - V_t / (2 var_plus).
  auto rho = [&](std::size_t lag) {
    double v = 0.0;
    for (const auto& c : halves) {
      for (std::size_t i = lag; i < N; ++i) v += (c[i] - c[i - lag]) * (c[i] - c[i - lag]);
    }
    v /= static_cast<double>(M * (N - lag));
    return 1.0 - v / (2.0 * bw.var_plus);
  };

  // Geyer initial positive sequence over pairs (rho_{2t} + rho_{2t+1}).
  double sum = 0.0;
  for (std::size_t t = 1; t + 1 < N; t += 2) {
    const double pair = rho(t) + rho(t + 1);
    if (pair < 0) break;
    sum += pair;
  }
  const double tau = 1.0 + 2.0 * sum;
  const double total = static_cast<double>(M * N);
  return std::min(total / std::max(tau, 1e-12), total * std::log10(total));
}

double ChainDiagnostics::max_rhat() const {
  double out = 0.0;
  for (const auto& p : parameters) {
    if (!p.degenerate) out = std::max(out, p.rhat);
  }
  return out;
}

ChainDiagnostics summarize_chain(const std::vector<PosteriorDraws>& chains) {
  if (chains.empty()) throw ValidationError("summarize_chain: no chains");
  const auto len = chains.front().draws.size();
  if (len < 10) throw ValidationError("summarize_chain: need at least 10 retained draws per chain");
  for (const auto& c : chains) {
    if (c.draws.size() != len) throw ValidationError("summarize_chain: chains have different lengths");
  }
  const auto& first = chains.front().draws.front();
  const auto K = first.eta.size();
  const auto m = first.log_d.size();

  ChainDiagnostics out;
  auto add = [&](const std::string& name, auto&& extract) {
    std::vector<std::vector<double>> series;
    for (const auto& c : chains) {
      std::vector<double> s;
      s.reserve(len);
      for (const auto& d : c.draws) s.push_back(extract(d));
      series.push_back(std::move(s));
    }
    ParameterDiagnostics p;
    p.name = name;
    p.degenerate = is_constant(series);
    std::vector<double> all;
    for (const auto& s : series) all.insert(all.end(), s.begin(), s.end());
    p.mean = mean_of(all);
    p.sd = std::sqrt(var_of(all, p.mean));
    p.rhat = split_rhat(series);
    p.ess = effective_sample_size(series);
    if (!p.degenerate && p.rhat >= 1.1) {
      std::ostringstream w;
      w << "Rhat for " << name << " is " << p.rhat << " (>= 1.1)";
      out.warnings.push_back(w.str());
    }
    out.parameters.push_back(std::move(p));
  };

  if (chains.front().config.latent_model) {
    add("zeta", [](const ModelParams& d) { return d.zeta; });
    for (Eigen::Index k = 0; k < K; ++k) {
      add("eta[" + std::to_string(k) + "]", [k](const ModelParams& d) { return d.eta(k); });
    }
  }
  add("mu_d", [](const ModelParams& d) { return d.mu_d; });
  add("sigma2_d", [](const ModelParams& d) { return d.sigma2_d; });
  const Eigen::Index picks = std::min<Eigen::Index>(10, m);
  for (Eigen::Index j = 0; j < picks; ++j) {
    const Eigen::Index i = picks > 1 ? j * (m - 1) / (picks - 1) : 0;
    add("log_d[" + std::to_string(i) + "]", [i](const ModelParams& d) { return d.log_d(i); });
  }
  return out;
}

}  // namespace ardnet
