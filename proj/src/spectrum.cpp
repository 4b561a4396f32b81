#include "gkcs/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "gkcs/errors.hpp"

namespace gkcs {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

SpectrumModel SpectrumModel::quasi_harmonic(double alpha, double upsilon) {
  require_finite(alpha, "alpha");
  require_finite(upsilon, "upsilon");
  if (!(alpha > 0.0)) throw DomainError("quasi-harmonic model: alpha must be positive");
  if (upsilon < 0.0) throw DomainError("quasi-harmonic model: upsilon must be nonnegative");
  SpectrumModel m;
  m.kind_ = SpectrumKind::QuasiHarmonic;
  m.alpha_ = alpha;
  m.upsilon_ = upsilon;
  m.mu_ = 2.0 * upsilon;
  return m;
}

SpectrumModel SpectrumModel::morse(double mu) {
  require_finite(mu, "mu");
  if (!(mu > 0.0)) throw DomainError("Morse model: mu must be positive");
  SpectrumModel m;
  m.kind_ = SpectrumKind::Morse;
  m.alpha_ = 1.0;
  m.mu_ = mu;
  return m;
}

SpectrumModel SpectrumModel::mathews_lakshmanan(double alpha, double lambda_tilde) {
  require_finite(alpha, "alpha");
  require_finite(lambda_tilde, "lambda_tilde");
  if (!(alpha > 0.0)) throw DomainError("Mathews-Lakshmanan model: alpha must be positive");
  SpectrumModel m;
  m.kind_ = SpectrumKind::MathewsLakshmanan;
  m.alpha_ = alpha;
  m.lambda_tilde_ = lambda_tilde;
  if (lambda_tilde > 0.0) {
    // e_{n+1} - e_n = 1 - lambda~ (n + 1) > 0  <=>  n < 1/lambda~ - 1.
    const double bound = 1.0 / lambda_tilde - 1.0;
    m.n_max_valid_ = static_cast<int>(std::ceil(bound)) - 1;
  }
  return m;
}

SpectrumModel SpectrumModel::custom(std::string name, std::function<double(int)> e, double omega) {
  require_finite(omega, "omega");
  if (!(omega > 0.0)) throw DomainError("custom model: omega must be positive");
  if (!e) throw DomainError("custom model: level function is empty");
  SpectrumModel m;
  m.kind_ = SpectrumKind::Custom;
  m.alpha_ = omega;
  m.custom_name_ = std::move(name);
  m.custom_e_ = std::make_shared<const std::function<double(int)>>(std::move(e));
  if ((*m.custom_e_)(0) != 0.0) throw DomainError("custom model: e(0) must be 0");
  return m;
}

void SpectrumModel::check_level(int n) const {
  if (n < 0) throw DomainError("level index must be nonnegative, got " + std::to_string(n));
  if (n_max_valid_ && n > *n_max_valid_) {
    throw SpectrumRangeError("level " + std::to_string(n) + " beyond the truncated spectrum (n_max_valid = " +
                             std::to_string(*n_max_valid_) + ")");
  }
}

double SpectrumModel::e(int n) const {
  check_level(n);
  const double x = n;
  switch (kind_) {
    case SpectrumKind::QuasiHarmonic:
      return x * (1.0 + upsilon_ * upsilon_ * (x + 1.0));
    case SpectrumKind::Morse:
      return x * mu_ * mu_;
    case SpectrumKind::MathewsLakshmanan:
      return x * (1.0 - 0.5 * lambda_tilde_ * (x + 1.0));
    case SpectrumKind::Custom:
      return (*custom_e_)(n);
  }
  return 0.0;
}

double SpectrumModel::ground_energy() const {
  switch (kind_) {
    case SpectrumKind::QuasiHarmonic:
    case SpectrumKind::MathewsLakshmanan:
      return 0.5 * alpha_;
    case SpectrumKind::Morse:
    case SpectrumKind::Custom:
      return 0.0;
  }
  return 0.0;
}

double SpectrumModel::energy(int n) const {
  check_level(n);
  const double x = n;
  switch (kind_) {
    case SpectrumKind::QuasiHarmonic:
      return alpha_ * ((x + 0.5) + upsilon_ * upsilon_ * x * (x + 1.0));
    case SpectrumKind::Morse:
      return x * mu_ * mu_;
    case SpectrumKind::MathewsLakshmanan:
      return alpha_ * ((x + 0.5) - 0.5 * lambda_tilde_ * x * (x + 1.0));
    case SpectrumKind::Custom:
      return omega() * e(n);
  }
  return 0.0;
}

std::optional<double> SpectrumModel::effective_upsilon() const {
  if (kind_ == SpectrumKind::QuasiHarmonic) return upsilon_;
  if (kind_ == SpectrumKind::MathewsLakshmanan && lambda_tilde_ <= 0.0) return std::sqrt(-0.5 * lambda_tilde_);
  return std::nullopt;
}

double SpectrumModel::e_derivative(int order, double n) const {
  if (order < 1) throw DomainError("e_derivative: order must be >= 1");
  switch (kind_) {
    case SpectrumKind::QuasiHarmonic: {
      const double u2 = upsilon_ * upsilon_;
      if (order == 1) return 1.0 + u2 * (2.0 * n + 1.0);
      if (order == 2) return 2.0 * u2;
      return 0.0;
    }
    case SpectrumKind::Morse:
      return order == 1 ? mu_ * mu_ : 0.0;
    case SpectrumKind::MathewsLakshmanan:
      if (order == 1) return 1.0 - 0.5 * lambda_tilde_ * (2.0 * n + 1.0);
      if (order == 2) return -lambda_tilde_;
      return 0.0;
    case SpectrumKind::Custom: {
      // Central differences with unit step around the nearest level; the
      // levels only exist at integers.
      const int c = std::max((order + 1) / 2, static_cast<int>(std::lround(n)));
      switch (order) {
        case 1:
          return 0.5 * (e(c + 1) - e(c - 1));
        case 2:
          return e(c + 1) - 2.0 * e(c) + e(c - 1);
        case 3:
          return 0.5 * (e(c + 2) - 2.0 * e(c + 1) + 2.0 * e(c - 1) - e(c - 2));
        default: {
          const int start = c - order / 2;
          double acc = 0.0;
          double binom = 1.0;
          for (int k = 0; k <= order; ++k) {
            acc += (((order - k) % 2 == 0) ? 1.0 : -1.0) * binom * e(start + k);
            binom = binom * (order - k) / (k + 1.0);
          }
          return acc;
        }
      }
    }
  }
  return 0.0;
}

std::string SpectrumModel::name() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case SpectrumKind::QuasiHarmonic:
      os << "quasiharmonic(alpha=" << alpha_ << ", upsilon=" << upsilon_ << ")";
      break;
    case SpectrumKind::Morse:
      os << "morse(mu=" << mu_ << ")";
      break;
    case SpectrumKind::MathewsLakshmanan:
      os << "mathews-lakshmanan(alpha=" << alpha_ << ", lambda_tilde=" << lambda_tilde_ << ")";
      break;
    case SpectrumKind::Custom:
      os << "custom(" << custom_name_ << ")";
      break;
  }
  return os.str();
}

std::vector<std::string> SpectrumModel::warnings() const {
  std::vector<std::string> out;
  if (kind_ == SpectrumKind::QuasiHarmonic && upsilon_ > 2.0) {
    out.push_back("upsilon = " + std::to_string(upsilon_) + " is outside the studied range [0, 2]");
  }
  if (kind_ == SpectrumKind::Morse && mu_ > 4.0) {
    out.push_back("mu = " + std::to_string(mu_) + " is outside the studied range (0, 4]");
  }
  return out;
}

bool operator==(const SpectrumModel& a, const SpectrumModel& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case SpectrumKind::QuasiHarmonic:
      return a.alpha_ == b.alpha_ && a.upsilon_ == b.upsilon_;
    case SpectrumKind::Morse:
      return a.mu_ == b.mu_;
    case SpectrumKind::MathewsLakshmanan:
      return a.alpha_ == b.alpha_ && a.lambda_tilde_ == b.lambda_tilde_;
    case SpectrumKind::Custom:
      return a.custom_e_ == b.custom_e_ && a.alpha_ == b.alpha_;
  }
  return false;
}

double e_n(const SpectrumModel& model, int n) { return model.e(n); }

double energy(const SpectrumModel& model, int n) { return model.energy(n); }

std::string to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::QuasiHarmonic:
      return "quasiharmonic";
    case SpectrumKind::Morse:
      return "morse";
    case SpectrumKind::MathewsLakshmanan:
      return "mathews-lakshmanan";
    case SpectrumKind::Custom:
      return "custom";
  }
  return "unknown";
}

ShapeInvarianceChain ShapeInvarianceChain::harmonic(double omega, double ground_energy) {
  return {[omega](double) { return omega; }, [](double a) { return a; }, 1.0, ground_energy};
}

ShapeInvarianceChain ShapeInvarianceChain::quasi_harmonic(double omega, double upsilon, double ground_energy) {
  const double u2 = upsilon * upsilon;
  return {[omega, u2](double a) { return omega * (1.0 + 2.0 * u2 * a); }, [](double a) { return a + 1.0; }, 1.0,
          ground_energy};
}

ShapeInvarianceChain ShapeInvarianceChain::morse(double mu) {
  const double m2 = mu * mu;
  return {[m2](double) { return m2; }, [](double a) { return a; }, 1.0, 0.0};
}

ShapeInvarianceChain ShapeInvarianceChain::for_model(const SpectrumModel& model) {
  switch (model.kind()) {
    case SpectrumKind::QuasiHarmonic:
      return quasi_harmonic(model.omega(), model.upsilon(), model.ground_energy());
    case SpectrumKind::Morse:
      return morse(model.mu());
    case SpectrumKind::MathewsLakshmanan:
      if (auto u = model.effective_upsilon()) return quasi_harmonic(model.omega(), *u, model.ground_energy());
      throw DomainError("no shape-invariance chain for a truncated Mathews-Lakshmanan spectrum");
    case SpectrumKind::Custom:
      break;
  }
  throw DomainError("no shape-invariance chain for custom spectra");
}

std::vector<double> si_spectrum(const ShapeInvarianceChain& chain, int n_max) {
  if (n_max < 0) throw DomainError("si_spectrum: n_max must be nonnegative");
  if (!chain.remainder || !chain.param_map) throw InvalidChainError("shape-invariance chain is missing a rule");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  double e = chain.ground_energy;
  double a = chain.alpha_1;
  out.push_back(e);
  for (int i = 1; i <= n_max; ++i) {
    const double r = chain.remainder(a);
    if (!(r > 0.0)) {
      throw InvalidChainError("non-increasing chain: R(alpha_" + std::to_string(i) + ") = " + std::to_string(r));
    }
    e += r;
    out.push_back(e);
    a = chain.param_map(a);
  }
  return out;
}

double si_energy(const ShapeInvarianceChain& chain, int n) {
  if (n < 0) throw DomainError("si_energy: n must be nonnegative");
  return si_spectrum(chain, n).back();
}

}  // namespace gkcs
