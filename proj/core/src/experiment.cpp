#include "cwrmt/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <Eigen/Core>
#include <json.hpp>

#include "cwrmt/circuits.hpp"
#include "cwrmt/correlations.hpp"
#include "cwrmt/definetti.hpp"
#include "cwrmt/errors.hpp"
#include "cwrmt/parallel.hpp"
#include "cwrmt/spectral.hpp"

namespace cwrmt {

using nlohmann::json;

std::string_view to_string(Task task) {
  switch (task) {
    case Task::esd:
      return "esd";
    case Task::moments:
      return "moments";
    case Task::norm:
      return "norm";
    case Task::correlations:
      return "correlations";
    case Task::oracle:
      return "oracle";
    case Task::graphcheck:
      return "graphcheck";
    case Task::laplace:
      return "laplace";
  }
  return "unknown";
}

Task parse_task(std::string_view name) {
  for (auto t : {Task::esd, Task::moments, Task::norm, Task::correlations, Task::oracle,
                 Task::graphcheck, Task::laplace}) {
    if (to_string(t) == name) return t;
  }
  throw ConfigError("unknown task '" + std::string(name) +
                    "' (expected esd, moments, norm, correlations, oracle, graphcheck or laplace)");
}

bool RunReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

// ---------------------------------------------------------------------------
// Config parsing

namespace {

template <class T>
T get_field(const json& j, const char* key, const char* context) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(context) + "." + key + ": " + e.what());
  }
}

template <class T>
void read_optional(const json& j, const char* key, const char* context, T& out) {
  if (j.contains(key)) out = get_field<T>(j, key, context);
}

Potential parse_potential(const json& j) {
  const auto type = get_field<std::string>(j, "type", "ensemble.potential");
  if (type == "curie_weiss") {
    return curie_weiss_potential(get_field<double>(j, "beta", "ensemble.potential"));
  }
  throw ConfigError("ensemble.potential.type: unsupported potential '" + type +
                    "' (expected curie_weiss)");
}

}  // namespace

void ExperimentSpec::validate() const {
  if (replicas < 1) throw ConfigError("replicas: must be at least 1");
  if (k_max < 1) throw ConfigError("k_max: must be at least 1");
  if (gamma < 0.0) throw ConfigError("gamma: must be non-negative");
  const bool needs_grid = task != Task::graphcheck && task != Task::laplace;
  if (needs_grid && N_grid.empty()) throw ConfigError("n / n_grid: at least one dimension required");
  for (auto N : N_grid) {
    if (N < 1) throw ConfigError("n_grid: dimensions must be positive");
    EnsembleConfig cfg = ensemble;
    cfg.N = static_cast<std::size_t>(N);
    cfg.validate();
  }
  if ((task == Task::moments) && replicas < 2) {
    throw ConfigError("replicas: the moments task needs at least 2 replicas for variances");
  }
  if (task == Task::correlations && replicas < 100) {
    throw ConfigError("replicas: the correlations task needs at least 100 replicas");
  }
  if (task == Task::oracle && mc_samples < 2) throw ConfigError("mc_samples: must be at least 2");
  if ((task == Task::laplace || task == Task::correlations) && ensemble.kind == EnsembleKind::iid) {
    throw ConfigError("ensemble.kind: task " + std::string(to_string(task)) +
                      " needs a mixing potential");
  }
  if (task == Task::laplace && scales.empty()) throw ConfigError("scales: must be non-empty");
  for (int K : K_list) {
    if (K < 0) throw ConfigError("K: entries must be non-negative");
  }
}

ExperimentSpec parse_experiment_spec(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");

  ExperimentSpec spec;
  if (root.contains("task")) spec.task = parse_task(get_field<std::string>(root, "task", "config"));

  if (root.contains("ensemble")) {
    const json& e = root.at("ensemble");
    if (!e.is_object()) throw ConfigError("ensemble: must be an object");
    if (e.contains("kind")) {
      spec.ensemble.kind = parse_ensemble_kind(get_field<std::string>(e, "kind", "ensemble"));
    }
    read_optional(e, "beta", "ensemble", spec.ensemble.beta);
    read_optional(e, "alpha", "ensemble", spec.ensemble.alpha);
    if (e.contains("potential")) spec.ensemble.potential = parse_potential(e.at("potential"));
    if (e.contains("diagonal_law")) {
      const auto law = get_field<std::string>(e, "diagonal_law", "ensemble");
      if (law == "marginal_of_n") {
        spec.ensemble.diagonal_law = DiagonalLaw::marginal_of_n;
      } else if (law == "own_length") {
        spec.ensemble.diagonal_law = DiagonalLaw::own_length;
      } else {
        throw ConfigError("ensemble.diagonal_law: expected marginal_of_n or own_length");
      }
    }
  }
  if (root.contains("n")) spec.N_grid = {get_field<std::int64_t>(root, "n", "config")};
  read_optional(root, "n_grid", "config", spec.N_grid);
  read_optional(root, "gamma", "config", spec.gamma);
  read_optional(root, "replicas", "config", spec.replicas);
  read_optional(root, "k_max", "config", spec.k_max);
  read_optional(root, "K", "config", spec.K_list);
  read_optional(root, "scales", "config", spec.scales);
  read_optional(root, "mc_samples", "config", spec.mc_samples);
  read_optional(root, "seed", "config", spec.seed);
  read_optional(root, "write_eigenvalues", "config", spec.write_eigenvalues);
  if (root.contains("out")) spec.output_dir = get_field<std::string>(root, "out", "config");

  if (root.contains("tolerances")) {
    const json& t = root.at("tolerances");
    auto& tol = spec.tolerances;
    read_optional(t, "ks_max", "tolerances", tol.ks_max);
    read_optional(t, "moment2_abs", "tolerances", tol.moment2_abs);
    read_optional(t, "moment4_lo", "tolerances", tol.moment4_lo);
    read_optional(t, "moment4_hi", "tolerances", tol.moment4_hi);
    read_optional(t, "identity_rel", "tolerances", tol.identity_rel);
    read_optional(t, "norm_vs_magnetization", "tolerances", tol.norm_vs_magnetization);
    read_optional(t, "norm_b_max", "tolerances", tol.norm_b_max);
    read_optional(t, "variance_max", "tolerances", tol.variance_max);
    read_optional(t, "sigmas", "tolerances", tol.sigmas);
    read_optional(t, "laplace_ratio", "tolerances", tol.laplace_ratio);
  }
  if (spec.ensemble.kind == EnsembleKind::generalized && !spec.ensemble.potential &&
      spec.ensemble.beta > 0.0) {
    spec.ensemble.potential = curie_weiss_potential(spec.ensemble.beta);
  }
  if (spec.scales.empty()) spec.scales = {1e3, 1e4, 1e5, 1e6};
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_spec(buffer.str());
}

// ---------------------------------------------------------------------------
// Task execution

namespace {

struct Stats {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double standard_error = 0.0;
};

Stats stats_of(const std::vector<double>& xs) {
  Stats s;
  const auto n = static_cast<double>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= n;
  if (xs.size() > 1) {
    for (double x : xs) s.variance += (x - s.mean) * (x - s.mean);
    s.variance /= (n - 1.0);
    s.standard_error = std::sqrt(s.variance / n);
  }
  return s;
}

std::string key(std::int64_t N, const std::string& name) {
  return "N=" + std::to_string(N) + "/" + name;
}

std::string fmt(double v) {
  std::ostringstream o;
  o << std::setprecision(6) << v;
  return o.str();
}

class Output {
 public:
  explicit Output(const std::filesystem::path& dir) : dir_(dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  std::ofstream open(const std::string& name) const {
    std::ofstream out(dir_ / name);
    if (!out) throw IoError("cannot write " + (dir_ / name).string());
    return out;
  }

 private:
  std::filesystem::path dir_;
};

std::string per_n_name(const std::string& stem, std::int64_t N, std::size_t grid_size) {
  return grid_size == 1 ? stem + ".csv" : stem + "_N" + std::to_string(N) + ".csv";
}

void add_check(RunReport& r, std::string name, double value, double threshold, bool pass,
               std::string detail = {}) {
  r.checks.push_back({std::move(name), value, threshold, pass, std::move(detail)});
}

struct ReplicaSpectra {
  std::vector<SpectralSummary> summaries;
  std::vector<double> latent_abs;  // |t| (shared-t kinds), NaN otherwise
};

ReplicaSpectra sample_spectra(const ExperimentSpec& spec, std::int64_t N, double gamma,
                              unsigned k_max) {
  EnsembleConfig cfg = spec.ensemble;
  cfg.N = static_cast<std::size_t>(N);
  cfg.seed = spec.seed;
  const EnsembleSampler sampler(cfg);
  ReplicaSpectra out;
  out.summaries.resize(spec.replicas);
  out.latent_abs.resize(spec.replicas, std::nan(""));
  parallel_for(spec.replicas, [&](std::size_t r) {
    const SpinMatrix X = sampler.sample(r);
    out.summaries[r] = summarize(scale(X, gamma), k_max);
    if (X.latent_t().size() == 1) out.latent_abs[r] = std::abs(X.latent_t().front());
  });
  return out;
}

void identity_checks(RunReport& r, std::int64_t N, const ReplicaSpectra& spectra) {
  double trace = 0.0;
  double frob = 0.0;
  for (const auto& s : spectra.summaries) {
    trace = std::max(trace, s.trace_defect);
    frob = std::max(frob, s.frobenius_defect);
  }
  const double tol = r.spec.tolerances.identity_rel;
  r.aggregates[key(N, "max_trace_defect")] = trace;
  r.aggregates[key(N, "max_frobenius_defect")] = frob;
  add_check(r, key(N, "trace_identity"), trace, tol, trace <= tol);
  add_check(r, key(N, "frobenius_identity"), frob, tol, frob <= tol);
}

void run_esd(RunReport& r, const Output& out) {
  const auto& spec = r.spec;
  const auto& tol = spec.tolerances;
  for (auto N : spec.N_grid) {
    const auto spectra = sample_spectra(spec, N, spec.gamma, std::max(4u, static_cast<unsigned>(spec.k_max)));
    std::vector<double> ks, m2, m4;
    std::vector<std::vector<double>> eig;
    for (const auto& s : spectra.summaries) {
      ks.push_back(s.ks_to_semicircle);
      m2.push_back(s.moments[1]);
      m4.push_back(s.moments[3]);
      eig.push_back(s.eigenvalues);
    }
    r.per_replica[key(N, "ks")] = ks;
    r.per_replica[key(N, "moment4")] = m4;
    const Stats ks_s = stats_of(ks);
    const Stats m4_s = stats_of(m4);
    double m2_dev = 0.0;
    for (double v : m2) m2_dev = std::max(m2_dev, std::abs(v - 1.0));
    r.aggregates[key(N, "mean_ks")] = ks_s.mean;
    r.aggregates[key(N, "stderr_ks")] = ks_s.standard_error;
    r.aggregates[key(N, "mean_moment2")] = stats_of(m2).mean;
    r.aggregates[key(N, "mean_moment4")] = m4_s.mean;
    r.aggregates[key(N, "stderr_moment4")] = m4_s.standard_error;
    add_check(r, key(N, "mean_ks"), ks_s.mean, tol.ks_max, ks_s.mean < tol.ks_max);
    if (spec.gamma == 0.5) {
      add_check(r, key(N, "moment2_exact"), m2_dev, tol.moment2_abs, m2_dev <= tol.moment2_abs);
      add_check(r, key(N, "moment4_range"), m4_s.mean, tol.moment4_hi,
                m4_s.mean >= tol.moment4_lo && m4_s.mean <= tol.moment4_hi,
                "range [" + fmt(tol.moment4_lo) + ", " + fmt(tol.moment4_hi) + "]");
    }
    identity_checks(r, N, spectra);
    r.lines.push_back("N=" + std::to_string(N) + " mean KS " + fmt(ks_s.mean) + ", moment4 " +
                      fmt(m4_s.mean));

    if (spec.write_eigenvalues) {
      auto f = out.open(per_n_name("eigenvalues", N, spec.N_grid.size()));
      write_eigenvalues_csv(f, eig);
    }
    auto h = out.open(per_n_name("hist", N, spec.N_grid.size()));
    write_histogram_csv(h, histogram(eig));
  }
}

void run_moments(RunReport& r, const Output& out) {
  const auto& spec = r.spec;
  const auto& tol = spec.tolerances;
  const auto k_max = static_cast<unsigned>(std::max(spec.k_max, 4));
  auto csv = out.open("moments.csv");
  csv << "N,k,mean,stderr,replicate_variance,semicircle\n" << std::setprecision(17);
  std::vector<double> var4;
  for (auto N : spec.N_grid) {
    const auto spectra = sample_spectra(spec, N, spec.gamma, k_max);
    for (unsigned k = 1; k <= k_max; ++k) {
      std::vector<double> vals;
      for (const auto& s : spectra.summaries) vals.push_back(s.moments[k - 1]);
      const Stats st = stats_of(vals);
      r.per_replica[key(N, "moment" + std::to_string(k))] = vals;
      csv << N << ',' << k << ',' << st.mean << ',' << st.standard_error << ',' << st.variance
          << ',' << semicircle_moment(k) << '\n';
      r.aggregates[key(N, "mean_moment" + std::to_string(k))] = st.mean;
      r.aggregates[key(N, "variance_moment" + std::to_string(k))] = st.variance;
      if (k == 4) var4.push_back(st.variance);
    }
    identity_checks(r, N, spectra);
    r.lines.push_back("N=" + std::to_string(N) + " moment4 " +
                      fmt(r.aggregates[key(N, "mean_moment4")]) + ", replicate variance " +
                      fmt(var4.back()));
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < var4.size(); ++i) decreasing = decreasing && var4[i] < var4[i - 1];
  add_check(r, "variance_moment4_decreasing", var4.back(), 0.0, decreasing);
  add_check(r, "variance_moment4_final", var4.back(), tol.variance_max,
            var4.back() < tol.variance_max);
  const auto N_last = spec.N_grid.back();
  if (spec.gamma == 0.5) {
    const double m4 = r.aggregates[key(N_last, "mean_moment4")];
    add_check(r, key(N_last, "moment4_range"), m4, tol.moment4_hi,
              m4 >= tol.moment4_lo && m4 <= tol.moment4_hi);
  }
}

void run_norm(RunReport& r, const Output& out) {
  const auto& spec = r.spec;
  const auto& tol = spec.tolerances;
  auto csv = out.open("norms.csv");
  csv << "N,replica,norm_A,norm_B,abs_latent_t\n" << std::setprecision(17);
  std::vector<double> mean_b;
  for (auto N : spec.N_grid) {
    const auto spectra = sample_spectra(spec, N, 0.5, 2);
    std::vector<double> a, b;
    bool lower_bound_ok = true;
    for (std::size_t i = 0; i < spectra.summaries.size(); ++i) {
      const double na = spectra.summaries[i].operator_norm;
      const double nb = na / std::sqrt(static_cast<double>(N));
      a.push_back(na);
      b.push_back(nb);
      const double t = spectra.latent_abs[i];
      if (!std::isnan(t)) lower_bound_ok = lower_bound_ok && na >= t * std::sqrt(double(N)) - 3.0;
      csv << N << ',' << i << ',' << na << ',' << nb << ',' << t << '\n';
    }
    r.per_replica[key(N, "norm_A")] = a;
    r.per_replica[key(N, "norm_B")] = b;
    const Stats sa = stats_of(a);
    const Stats sb = stats_of(b);
    r.aggregates[key(N, "mean_norm_A")] = sa.mean;
    r.aggregates[key(N, "stderr_norm_A")] = sa.standard_error;
    r.aggregates[key(N, "mean_norm_B")] = sb.mean;
    r.aggregates[key(N, "stderr_norm_B")] = sb.standard_error;
    mean_b.push_back(sb.mean);
    add_check(r, key(N, "norm_lower_bound"), 0.0, 3.0, lower_bound_ok,
              "||A_N|| >= |t| sqrt(N) - 3 on every replica");
    r.lines.push_back("N=" + std::to_string(N) + " mean ||A_N|| " + fmt(sa.mean) +
                      ", mean ||B_N|| " + fmt(sb.mean));
  }
  const bool cw = spec.ensemble.kind == EnsembleKind::full_cw;
  if (cw && spec.ensemble.beta > 1.0) {
    const double m = magnetization(spec.ensemble.beta);
    const double dev = std::abs(mean_b.back() - m);
    r.aggregates["magnetization"] = m;
    add_check(r, "norm_B_vs_magnetization", dev, tol.norm_vs_magnetization,
              dev < tol.norm_vs_magnetization);
  } else if (cw && spec.ensemble.beta < 1.0) {
    bool decreasing = true;
    for (std::size_t i = 1; i < mean_b.size(); ++i) decreasing = decreasing && mean_b[i] < mean_b[i - 1];
    add_check(r, "norm_B_decreasing", mean_b.back(), 0.0, decreasing);
    add_check(r, "norm_B_small", mean_b.back(), tol.norm_b_max, mean_b.back() < tol.norm_b_max);
  }
}

void run_correlations(RunReport& r, const Output& out) {
  const auto& spec = r.spec;
  EnsembleConfig cfg = spec.ensemble;
  cfg.N = static_cast<std::size_t>(spec.N_grid.front());
  std::vector<CorrelationReport> rows;
  for (int K : spec.K_list) {
    const std::string label = std::string(to_string(cfg.kind)) + "(beta=" + fmt(cfg.beta) + ")";
    rows.push_back(correlation_report(cfg, K, spec.replicas, spec.seed, label));
    const auto& row = rows.back();
    const double diff = std::abs(row.exact - row.mc_estimate);
    const double allowed = std::max(spec.tolerances.sigmas * row.mc_stderr, 1e-12);
    add_check(r, "K=" + std::to_string(K) + "/exact_vs_mc", diff, allowed, diff <= allowed);
    r.aggregates["K=" + std::to_string(K) + "/exact"] = row.exact;
    r.aggregates["K=" + std::to_string(K) + "/asymptotic"] = row.asymptotic;
    r.aggregates["K=" + std::to_string(K) + "/mc"] = row.mc_estimate;
    r.lines.push_back("K=" + std::to_string(K) + " exact " + fmt(row.exact) + ", asymptotic " +
                      fmt(row.asymptotic) + ", MC " + fmt(row.mc_estimate) + " +- " +
                      fmt(row.mc_stderr));
  }
  auto csv = out.open("correlations.csv");
  write_correlations_csv(csv, rows);
}

void run_oracle(RunReport& r, const Output& out) {
  const auto& spec = r.spec;
  auto csv = out.open("oracle.csv");
  csv << "N,k,gamma,exact,mc_estimate,mc_stderr\n" << std::setprecision(17);
  for (auto N : spec.N_grid) {
    EnsembleConfig cfg = spec.ensemble;
    cfg.N = static_cast<std::size_t>(N);
    for (int k : spec.K_list) {
      if (k < 1) continue;
      const double exact = exact_trace_moment(cfg, k, spec.gamma);
      const Estimate mc = mc_trace_moment(cfg, k, spec.gamma, spec.mc_samples, spec.seed);
      const double diff = std::abs(exact - mc.mean);
      const double allowed = std::max(spec.tolerances.sigmas * mc.standard_error, 1e-12);
      const std::string name = key(N, "k=" + std::to_string(k));
      add_check(r, name + "/exact_vs_mc", diff, allowed, diff <= allowed);
      r.aggregates[name + "/exact"] = exact;
      r.aggregates[name + "/mc"] = mc.mean;
      csv << N << ',' << k << ',' << spec.gamma << ',' << exact << ',' << mc.mean << ','
          << mc.standard_error << '\n';
      r.lines.push_back(name + " exact " + fmt(exact) + ", MC " + fmt(mc.mean) + " +- " +
                        fmt(mc.standard_error));
    }
  }
}

void run_graphcheck(RunReport& r, const Output& out) {
  const int k_max = r.spec.k_max;
  const auto edges = verify_simple_edge_bound(k_max);
  const auto rho_sigma = verify_rho_sigma_bound(k_max);
  r.aggregates["classes_checked"] = static_cast<double>(edges.classes_checked);
  r.aggregates["nontrivial_classes"] = static_cast<double>(edges.nontrivial);
  r.aggregates["violations"] = static_cast<double>(edges.violations.size());
  r.aggregates["rho_sigma_violations"] = static_cast<double>(rho_sigma.violations.size());
  add_check(r, "simple_edge_bound", static_cast<double>(edges.violations.size()), 0.0,
            edges.violations.empty());
  add_check(r, "rho_sigma_bound", static_cast<double>(rho_sigma.violations.size()), 0.0,
            rho_sigma.violations.empty());
  r.lines.push_back("classes checked: " + std::to_string(edges.classes_checked));
  r.lines.push_back("violations: " + std::to_string(edges.violations.size()));
  for (const auto& v : edges.violations) r.lines.push_back("  " + v);
  for (const auto& v : rho_sigma.violations) r.lines.push_back("  " + v);

  auto csv = out.open("classes.csv");
  std::vector<CircuitClass> all;
  for (int k = 1; k <= k_max; ++k) {
    auto cls = enumerate_classes(k);
    all.insert(all.end(), std::make_move_iterator(cls.begin()), std::make_move_iterator(cls.end()));
  }
  write_classes_csv(csv, all);
}

void run_laplace(RunReport& r, const Output& out) {
  const auto& spec = r.spec;
  const Potential potential = *spec.ensemble.mixing_potential();
  const LaplaceExpansion expansion = find_minimum(potential);
  r.aggregates["minimum_a"] = expansion.a;
  r.aggregates["minimum_nu"] = expansion.nu;
  r.aggregates["minimum_P"] = expansion.P;
  auto csv = out.open("laplace.csv");
  csv << "K,scale,exact,asymptotic,ratio\n" << std::setprecision(17);
  std::vector<double> scales = spec.scales;
  std::sort(scales.begin(), scales.end());
  std::map<int, double> last_ratio;
  for (double s : scales) {
    const DeFinettiMeasure measure = DeFinettiMeasure::create(potential, s);
    for (int K : spec.K_list) {
      const double exact = measure.moment(K);
      const double asym = laplace_moment_asymptotic(expansion, K, s);
      const double ratio = asym != 0.0 ? exact / asym : std::nan("");
      csv << K << ',' << s << ',' << exact << ',' << asym << ',' << ratio << '\n';
      last_ratio[K] = ratio;
    }
  }
  for (auto [K, ratio] : last_ratio) {
    if (std::isnan(ratio)) continue;
    const double dev = std::abs(ratio - 1.0);
    add_check(r, "K=" + std::to_string(K) + "/ratio_at_largest_scale", dev,
              spec.tolerances.laplace_ratio, dev <= spec.tolerances.laplace_ratio);
    r.lines.push_back("K=" + std::to_string(K) + " exact/asymptotic at scale " +
                      fmt(scales.back()) + ": " + fmt(ratio));
  }
}

json spec_to_json(const ExperimentSpec& spec) {
  json e = {{"kind", std::string(to_string(spec.ensemble.kind))},
            {"beta", spec.ensemble.beta},
            {"alpha", spec.ensemble.alpha},
            {"diagonal_law",
             spec.ensemble.diagonal_law == DiagonalLaw::own_length ? "own_length" : "marginal_of_n"}};
  if (spec.ensemble.potential) e["potential"] = spec.ensemble.potential->label();
  const auto& t = spec.tolerances;
  return {{"task", std::string(to_string(spec.task))},
          {"ensemble", e},
          {"gamma", spec.gamma},
          {"replicas", spec.replicas},
          {"k_max", spec.k_max},
          {"n_grid", spec.N_grid},
          {"K", spec.K_list},
          {"scales", spec.scales},
          {"mc_samples", spec.mc_samples},
          {"out", spec.output_dir.string()},
          {"seed", spec.seed},
          {"tolerances",
           {{"ks_max", t.ks_max},
            {"moment2_abs", t.moment2_abs},
            {"moment4_lo", t.moment4_lo},
            {"moment4_hi", t.moment4_hi},
            {"identity_rel", t.identity_rel},
            {"norm_vs_magnetization", t.norm_vs_magnetization},
            {"norm_b_max", t.norm_b_max},
            {"variance_max", t.variance_max},
            {"sigmas", t.sigmas},
            {"laplace_ratio", t.laplace_ratio}}}};
}

}  // namespace

RunReport run(const ExperimentSpec& spec) {
  spec.validate();
  RunReport report;
  report.spec = spec;
  const Output out(spec.output_dir);

  const auto start = std::chrono::steady_clock::now();
  switch (spec.task) {
    case Task::esd:
      run_esd(report, out);
      break;
    case Task::moments:
      run_moments(report, out);
      break;
    case Task::norm:
      run_norm(report, out);
      break;
    case Task::correlations:
      run_correlations(report, out);
      break;
    case Task::oracle:
      run_oracle(report, out);
      break;
    case Task::graphcheck:
      run_graphcheck(report, out);
      break;
    case Task::laplace:
      run_laplace(report, out);
      break;
  }
  report.timings_seconds["total"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"pass", c.pass},
                      {"detail", c.detail}});
  }
  json summary = {{"spec", spec_to_json(spec)},
                  {"aggregates", report.aggregates},
                  {"per_replica", report.per_replica},
                  {"checks", checks},
                  {"passed", report.passed()},
                  {"versions",
                   {{"cwrmt", "0.1.0"},
                    {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                  std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                  std::to_string(EIGEN_MINOR_VERSION)}}},
                  {"timings_seconds", report.timings_seconds}};
  report.summary_json = summary.dump(2);
  auto f = out.open("summary.json");
  f << report.summary_json << '\n';
  return report;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const DomainError*>(&e) ||
      dynamic_cast<const PreconditionError*>(&e) ||
      dynamic_cast<const UnsupportedEnsembleError*>(&e)) {
    return kExitConfig;
  }
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const ResourceError*>(&e)) return kExitResource;
  return kExitNumeric;
}

}  // namespace cwrmt
