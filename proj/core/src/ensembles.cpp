#include "cwrmt/ensembles.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

#include "cwrmt/errors.hpp"

namespace cwrmt {

std::string_view to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::full_cw:
      return "full_cw";
    case EnsembleKind::diagonal_cw:
      return "diagonal_cw";
    case EnsembleKind::generalized:
      return "generalized";
    case EnsembleKind::iid:
      return "iid";
  }
  return "unknown";
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  for (auto kind : {EnsembleKind::full_cw, EnsembleKind::diagonal_cw, EnsembleKind::generalized,
                    EnsembleKind::iid}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown ensemble kind '" + std::string(name) +
                    "' (expected full_cw, diagonal_cw, generalized or iid)");
}

void EnsembleConfig::validate() const {
  if (N < 1) throw ConfigError("ensemble: N must be at least 1");
  if (N > kMaxDimension) {
    throw ConfigError("ensemble: N = " + std::to_string(N) + " exceeds the cap of " +
                      std::to_string(kMaxDimension));
  }
  switch (kind) {
    case EnsembleKind::full_cw:
    case EnsembleKind::diagonal_cw:
      if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw ConfigError("ensemble: " + std::string(to_string(kind)) + " requires beta > 0");
      }
      break;
    case EnsembleKind::generalized:
      if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ConfigError("ensemble: generalized requires alpha > 0");
      }
      if (!potential) throw ConfigError("ensemble: generalized requires a potential");
      if (!potential->even()) throw ConfigError("ensemble: generalized requires an even potential");
      break;
    case EnsembleKind::iid:
      break;
  }
}

std::optional<Potential> EnsembleConfig::mixing_potential() const {
  switch (kind) {
    case EnsembleKind::full_cw:
    case EnsembleKind::diagonal_cw:
      return curie_weiss_potential(beta);
    case EnsembleKind::generalized:
      return potential;
    case EnsembleKind::iid:
      break;
  }
  return std::nullopt;
}

double EnsembleConfig::mixing_scale() const {
  const auto n = static_cast<double>(N);
  switch (kind) {
    case EnsembleKind::full_cw:
      return n * n;
    case EnsembleKind::diagonal_cw:
      return n;
    case EnsembleKind::generalized:
      return std::pow(n, alpha);
    case EnsembleKind::iid:
      break;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------

SpinMatrix::SpinMatrix(EnsembleConfig config, std::vector<std::int8_t> entries,
                       std::vector<double> latent_t)
    : config_(std::move(config)),
      n_(config_.N),
      entries_(std::move(entries)),
      latent_t_(std::move(latent_t)) {
  if (entries_.size() != n_ * n_) {
    throw PreconditionError("SpinMatrix: expected " + std::to_string(n_ * n_) + " entries, got " +
                            std::to_string(entries_.size()));
  }
}

bool SpinMatrix::is_symmetric() const noexcept {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (entries_[i * n_ + j] != entries_[j * n_ + i]) return false;
    }
  }
  return true;
}

bool SpinMatrix::is_spin_valued() const noexcept {
  for (auto v : entries_) {
    if (v != 1 && v != -1) return false;
  }
  return true;
}

ScaledMatrix::ScaledMatrix(const SpinMatrix& source, double gamma)
    : source_(&source),
      gamma_(gamma),
      factor_(std::pow(static_cast<double>(source.N()), -gamma)) {}

Eigen::MatrixXd ScaledMatrix::dense() const {
  const std::size_t n = source_->N();
  Eigen::MatrixXd out(n, n);
  const auto& e = source_->entries();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = factor_ * e[i * n + j];
    }
  }
  return out;
}

ScaledMatrix scale(const SpinMatrix& X, double gamma) {
  if (!(gamma >= 0.0)) throw DomainError("scale: gamma must be non-negative");
  return ScaledMatrix(X, gamma);
}

SamplingStreams SamplingStreams::for_replica(std::uint64_t seed, std::uint64_t replica) {
  return {seed_stream(seed, replica, Purpose::latent), seed_stream(seed, replica, Purpose::spins)};
}

// ---------------------------------------------------------------------------

namespace {

std::int8_t draw_spin(RandomStream& rng, double plus_probability) {
  return rng.uniform() < plus_probability ? std::int8_t{1} : std::int8_t{-1};
}

SpinMatrix fill_shared_t(const EnsembleConfig& cfg, double t, RandomStream& spins) {
  const std::size_t n = cfg.N;
  std::vector<std::int8_t> entries(n * n);
  const double p = 0.5 * (1.0 + t);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto s = draw_spin(spins, p);
      entries[i * n + j] = s;
      entries[j * n + i] = s;
    }
  }
  return SpinMatrix(cfg, std::move(entries), {t});
}

void require_kind(const EnsembleConfig& cfg, EnsembleKind kind) {
  if (cfg.kind != kind) {
    throw PreconditionError("sampler for " + std::string(to_string(kind)) + " called with kind " +
                            std::string(to_string(cfg.kind)));
  }
  cfg.validate();
}

}  // namespace

SpinMatrix sample_full_cw(const EnsembleConfig& cfg, const DeFinettiMeasure& mixture,
                          SamplingStreams& streams) {
  require_kind(cfg, EnsembleKind::full_cw);
  const double t = mixture.sample_t(streams.latent);
  return fill_shared_t(cfg, t, streams.spins);
}

SpinMatrix sample_generalized(const EnsembleConfig& cfg, const DeFinettiMeasure& mixture,
                              SamplingStreams& streams) {
  require_kind(cfg, EnsembleKind::generalized);
  const double t = mixture.sample_t(streams.latent);
  return fill_shared_t(cfg, t, streams.spins);
}

SpinMatrix sample_diagonal_cw(
    const EnsembleConfig& cfg,
    const std::function<const DeFinettiMeasure&(std::size_t)>& law_for_length,
    SamplingStreams& streams) {
  require_kind(cfg, EnsembleKind::diagonal_cw);
  const std::size_t n = cfg.N;
  std::vector<std::int8_t> entries(n * n);
  std::vector<double> ts(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = law_for_length(n - k).sample_t(streams.latent);
    ts[k] = t;
    const double p = 0.5 * (1.0 + t);
    for (std::size_t i = 0; i + k < n; ++i) {
      const auto s = draw_spin(streams.spins, p);
      entries[i * n + i + k] = s;
      entries[(i + k) * n + i] = s;
    }
  }
  return SpinMatrix(cfg, std::move(entries), std::move(ts));
}

SpinMatrix sample_iid(const EnsembleConfig& cfg, SamplingStreams& streams) {
  require_kind(cfg, EnsembleKind::iid);
  const std::size_t n = cfg.N;
  std::vector<std::int8_t> entries(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto s = draw_spin(streams.spins, 0.5);
      entries[i * n + j] = s;
      entries[j * n + i] = s;
    }
  }
  return SpinMatrix(cfg, std::move(entries), {});
}

// ---------------------------------------------------------------------------

EnsembleSampler::EnsembleSampler(EnsembleConfig config) : config_(std::move(config)) {
  config_.validate();
  if (config_.kind == EnsembleKind::iid) return;
  const Potential potential = *config_.mixing_potential();
  if (config_.kind == EnsembleKind::diagonal_cw && config_.diagonal_law == DiagonalLaw::own_length) {
    per_length_.reserve(config_.N);
    for (std::size_t len = 1; len <= config_.N; ++len) {
      per_length_.push_back(DeFinettiMeasure::create(potential, static_cast<double>(len)));
    }
    return;
  }
  mixture_ = DeFinettiMeasure::create(potential, config_.mixing_scale());
}

const DeFinettiMeasure* EnsembleSampler::mixture() const noexcept {
  if (mixture_) return &*mixture_;
  if (!per_length_.empty()) return &per_length_.back();
  return nullptr;
}

SpinMatrix EnsembleSampler::sample(std::uint64_t replica) const {
  EnsembleConfig cfg = config_;
  cfg.replica_index = replica;
  auto streams = SamplingStreams::for_replica(cfg.seed, replica);
  switch (cfg.kind) {
    case EnsembleKind::full_cw:
      return sample_full_cw(cfg, *mixture_, streams);
    case EnsembleKind::generalized:
      return sample_generalized(cfg, *mixture_, streams);
    case EnsembleKind::diagonal_cw:
      if (!per_length_.empty()) {
        return sample_diagonal_cw(
            cfg, [this](std::size_t len) -> const DeFinettiMeasure& { return per_length_[len - 1]; },
            streams);
      }
      return sample_diagonal_cw(
          cfg, [this](std::size_t) -> const DeFinettiMeasure& { return *mixture_; }, streams);
    case EnsembleKind::iid:
      return sample_iid(cfg, streams);
  }
  throw UnsupportedEnsembleError("unknown ensemble kind");
}

// ---------------------------------------------------------------------------

void write_matrix(std::ostream& out, const SpinMatrix& X) {
  const auto& cfg = X.config();
  std::ostringstream latent;
  latent << std::setprecision(17);
  if (X.latent_t().empty()) {
    latent << '-';
  } else {
    for (std::size_t i = 0; i < X.latent_t().size(); ++i) {
      if (i) latent << ',';
      latent << X.latent_t()[i];
    }
  }
  out << std::setprecision(17) << X.N() << ' ' << to_string(cfg.kind) << ' ' << cfg.beta << ' '
      << cfg.alpha << ' ' << cfg.seed << ' ' << cfg.replica_index << ' ' << latent.str() << '\n';
  for (std::size_t i = 0; i < X.N(); ++i) {
    for (std::size_t j = 0; j < X.N(); ++j) {
      if (j) out << ' ';
      out << X(i, j);
    }
    out << '\n';
  }
}

SpinMatrix read_matrix(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw IoError("matrix dump: missing header");
  std::istringstream hs(header);
  EnsembleConfig cfg;
  std::string kind;
  std::string latent;
  if (!(hs >> cfg.N >> kind >> cfg.beta >> cfg.alpha >> cfg.seed >> cfg.replica_index >> latent)) {
    throw IoError("matrix dump: malformed header '" + header + "'");
  }
  try {
    cfg.kind = parse_ensemble_kind(kind);
  } catch (const ConfigError& e) {
    throw IoError(std::string("matrix dump: ") + e.what());
  }
  if (cfg.N < 1 || cfg.N > kMaxDimension) throw IoError("matrix dump: dimension out of range");

  std::vector<double> ts;
  if (latent != "-") {
    std::istringstream ls(latent);
    std::string item;
    while (std::getline(ls, item, ',')) ts.push_back(std::stod(item));
  }

  std::vector<std::int8_t> entries(cfg.N * cfg.N);
  for (auto& e : entries) {
    int v = 0;
    if (!(in >> v) || (v != 1 && v != -1)) throw IoError("matrix dump: entries must be +1 or -1");
    e = static_cast<std::int8_t>(v);
  }
  return SpinMatrix(std::move(cfg), std::move(entries), std::move(ts));
}

}  // namespace cwrmt
