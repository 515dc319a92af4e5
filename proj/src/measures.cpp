#include "wicksell/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wicksell/errors.hpp"
#include "wicksell/format.hpp"

namespace wicksell {
namespace {

constexpr double kMassTolerance = 1e-12;

void check_atoms(std::span<const double> atoms) {
  for (double z : atoms) {
    if (!std::isfinite(z) || z < 0.0) {
      std::ostringstream os;
      os.precision(17);
      os << "atoms must be finite and nonnegative, got " << z;
      throw InvalidInput(os.str());
    }
  }
}

double parse_positive(const std::string& text, const std::string& spec) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !(value > 0.0) ||
      !std::isfinite(value)) {
    throw InvalidInput("bad positive number in prior spec '" + spec + "'");
  }
  return value;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<double> atoms,
                                 std::vector<double> weights) {
  if (atoms.size() != weights.size()) {
    throw InvalidInput("atoms and weights differ in length");
  }
  if (atoms.empty()) throw InvalidInput("measure needs at least one atom");
  check_atoms(atoms);
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw InvalidInput("weights must be finite and nonnegative");
    }
  }

  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  if (!std::is_sorted(atoms.begin(), atoms.end())) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return atoms[a] < atoms[b];
                     });
  }

  atoms_.reserve(atoms.size());
  weights_.reserve(atoms.size());
  for (std::size_t i : order) {
    if (!atoms_.empty() && atoms_.back() == atoms[i]) {
      weights_.back() += weights[i];
    } else {
      atoms_.push_back(atoms[i]);
      weights_.push_back(weights[i]);
    }
  }

  std::size_t keep = 0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (weights_[i] > 0.0) {
      atoms_[keep] = atoms_[i];
      weights_[keep] = weights_[i];
      ++keep;
    }
  }
  atoms_.resize(keep);
  weights_.resize(keep);
  if (atoms_.empty()) throw InvalidInput("measure has no positive weight");

  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (std::abs(total - 1.0) > kMassTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "weights must sum to 1, got " << total;
    throw InvalidInput(os.str());
  }
}

DiscreteMeasure DiscreteMeasure::normalized(std::vector<double> atoms,
                                            std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw InvalidInput("weights must be finite and nonnegative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw InvalidInput("weights sum to zero");
  for (double& w : weights) w /= total;
  return DiscreteMeasure(std::move(atoms), std::move(weights));
}

DiscreteMeasure DiscreteMeasure::point_mass(double atom) {
  return DiscreteMeasure({atom}, {1.0});
}

DiscreteMeasure canonicalize(const DiscreteMeasure& measure) {
  return DiscreteMeasure(
      std::vector<double>(measure.atoms().begin(), measure.atoms().end()),
      std::vector<double>(measure.weights().begin(), measure.weights().end()));
}

TabulatedCdf::TabulatedCdf(std::vector<double> x, std::vector<double> cdf)
    : x_(std::move(x)), f_(std::move(cdf)) {
  if (x_.size() != f_.size() || x_.size() < 2) {
    throw InvalidInput("tabulated cdf needs at least two (x, F) pairs");
  }
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(f_[i])) {
      throw InvalidInput("tabulated cdf has non-finite entries");
    }
    if (i > 0 && (x_[i] <= x_[i - 1] || f_[i] < f_[i - 1])) {
      throw InvalidInput(
          "tabulated cdf needs increasing x and nondecreasing F");
    }
  }
  if (x_.front() < 0.0) throw InvalidInput("tabulated cdf starts below 0");
  if (f_.front() != 0.0 || f_.back() != 1.0) {
    throw InvalidInput("tabulated cdf must run from 0 to 1");
  }
}

double TabulatedCdf::cdf(double x) const {
  if (x <= x_.front()) return 0.0;
  if (x >= x_.back()) return 1.0;
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double t = (x - x_[i]) / (x_[i + 1] - x_[i]);
  return f_[i] + t * (f_[i + 1] - f_[i]);
}

double TabulatedCdf::density(double x) const {
  if (x < x_.front() || x >= x_.back()) return 0.0;
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  return (f_[i + 1] - f_[i]) / (x_[i + 1] - x_[i]);
}

double TabulatedCdf::quantile(double p) const {
  if (p < 0.0 || p > 1.0 || std::isnan(p)) {
    throw InvalidInput("quantile level outside [0, 1]");
  }
  if (p <= 0.0) return x_.front();
  const auto it = std::lower_bound(f_.begin(), f_.end(), p);
  const std::size_t j = static_cast<std::size_t>(it - f_.begin());
  if (j == 0) return x_.front();
  const std::size_t i = j - 1;
  const double t = (p - f_[i]) / (f_[j] - f_[i]);
  return x_[i] + t * (x_[j] - x_[i]);
}

double TabulatedCdf::max_density() const {
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
    best = std::max(best, (f_[i + 1] - f_[i]) / (x_[i + 1] - x_[i]));
  }
  return best;
}

BaseMeasureSpec::BaseMeasureSpec(double total_mass, Family family)
    : total_mass_(total_mass), family_(std::move(family)) {
  if (!(total_mass_ > 0.0) || !std::isfinite(total_mass_)) {
    throw InvalidInput("prior total mass must be positive and finite");
  }
  if (const auto* e = std::get_if<ExponentialBase>(&family_)) {
    if (!(e->rate > 0.0) || !std::isfinite(e->rate)) {
      throw InvalidInput("exponential base rate must be positive");
    }
  } else if (const auto* u = std::get_if<UniformBase>(&family_)) {
    if (!(u->upper > 0.0) || !std::isfinite(u->upper)) {
      throw InvalidInput("uniform base upper bound must be positive");
    }
  }
}

BaseMeasureSpec BaseMeasureSpec::default_for(std::span<const double> data) {
  if (data.empty()) throw InvalidInput("no data to scale the prior");
  const double mean =
      std::accumulate(data.begin(), data.end(), 0.0) /
      static_cast<double>(data.size());
  if (!(mean > 0.0)) {
    throw InvalidInput("data mean must be positive to scale the prior");
  }
  return BaseMeasureSpec(1.0, ExponentialBase{1.0 / mean});
}

BaseMeasureSpec BaseMeasureSpec::parse(const std::string& spec,
                                       std::span<const double> data) {
  double mass = 1.0;
  std::string family = spec;
  if (const auto star = spec.find('*'); star != std::string::npos) {
    mass = parse_positive(spec.substr(0, star), spec);
    family = spec.substr(star + 1);
  }
  if (family == "default") {
    return BaseMeasureSpec(mass, default_for(data).family());
  }
  const auto colon = family.find(':');
  if (colon != std::string::npos) {
    const std::string name = family.substr(0, colon);
    const double param = parse_positive(family.substr(colon + 1), spec);
    if (name == "exp") return BaseMeasureSpec(mass, ExponentialBase{param});
    if (name == "uniform") return BaseMeasureSpec(mass, UniformBase{param});
  }
  throw InvalidInput("prior spec must look like [mass*]default, "
                     "[mass*]exp:rate or [mass*]uniform:upper, got '" +
                     spec + "'");
}

double BaseMeasureSpec::sample(RandomStream& rng) const {
  return std::visit(
      [&rng](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialBase>) {
          return rng.exponential() / f.rate;
        } else if constexpr (std::is_same_v<T, UniformBase>) {
          return rng.open_uniform() * f.upper;
        } else {
          return f.cdf.quantile(rng.open_uniform());
        }
      },
      family_);
}

double BaseMeasureSpec::density_bound() const {
  return std::visit(
      [this](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialBase>) {
          return total_mass_ * f.rate;
        } else if constexpr (std::is_same_v<T, UniformBase>) {
          return total_mass_ / f.upper;
        } else {
          return total_mass_ * f.cdf.max_density();
        }
      },
      family_);
}

std::string BaseMeasureSpec::describe() const {
  std::ostringstream os;
  os << format_double(total_mass_) << "*";
  std::visit(
      [&os](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialBase>) {
          os << "exp:" << format_double(f.rate);
        } else if constexpr (std::is_same_v<T, UniformBase>) {
          os << "uniform:" << format_double(f.upper);
        } else {
          os << "table[" << f.cdf.knots().size() << "]";
        }
      },
      family_);
  return os.str();
}

DPPosterior::DPPosterior(BaseMeasureSpec prior, std::vector<double> data)
    : prior_(std::move(prior)), data_(std::move(data)) {
  if (data_.empty()) throw InvalidInput("posterior needs at least one datum");
  check_atoms(data_);
}

DiscreteMeasure empirical_measure(std::span<const double> data) {
  if (data.empty()) throw InvalidInput("empirical measure of empty data");
  check_atoms(data);
  std::vector<double> atoms(data.begin(), data.end());
  std::sort(atoms.begin(), atoms.end());
  std::vector<double> unique_atoms;
  std::vector<double> weights;
  const double n = static_cast<double>(atoms.size());
  std::size_t i = 0;
  while (i < atoms.size()) {
    std::size_t j = i;
    while (j < atoms.size() && atoms[j] == atoms[i]) ++j;
    unique_atoms.push_back(atoms[i]);
    weights.push_back(static_cast<double>(j - i) / n);
    i = j;
  }
  return DiscreteMeasure::normalized(std::move(unique_atoms),
                                     std::move(weights));
}

DiscreteMeasure draw_bayesian_bootstrap(std::span<const double> data,
                                        RandomStream& rng) {
  if (data.empty()) throw InvalidInput("Bayesian bootstrap of empty data");
  check_atoms(data);
  std::vector<double> weights(data.size());
  for (double& w : weights) w = rng.exponential();
  return DiscreteMeasure::normalized(
      std::vector<double>(data.begin(), data.end()), std::move(weights));
}

StickBreakingDraw draw_stick_breaking(const BaseMeasureSpec& prior,
                                      RandomStream& rng,
                                      double truncation_tol) {
  if (!(truncation_tol > 0.0 && truncation_tol < 1.0)) {
    throw InvalidInput("truncation tolerance must lie in (0, 1)");
  }
  std::vector<double> atoms;
  std::vector<double> weights;
  double residual = 1.0;
  while (residual >= truncation_tol) {
    const double v = rng.beta(1.0, prior.total_mass());
    atoms.push_back(prior.sample(rng));
    weights.push_back(residual * v);
    residual *= 1.0 - v;
  }
  const std::size_t sticks = atoms.size();
  atoms.push_back(prior.sample(rng));
  weights.push_back(residual);
  return {DiscreteMeasure::normalized(std::move(atoms), std::move(weights)),
          sticks};
}

DPDraw draw_dp_posterior_parts(const DPPosterior& posterior, RandomStream& rng,
                               double truncation_tol) {
  const double v = rng.beta(posterior.prior().total_mass(),
                            static_cast<double>(posterior.n()));
  StickBreakingDraw q =
      draw_stick_breaking(posterior.prior(), rng, truncation_tol);
  DiscreteMeasure b = draw_bayesian_bootstrap(posterior.data(), rng);

  std::vector<double> atoms;
  std::vector<double> weights;
  atoms.reserve(q.measure.size() + b.size());
  weights.reserve(q.measure.size() + b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    atoms.push_back(b.atoms()[i]);
    weights.push_back((1.0 - v) * b.weights()[i]);
  }
  for (std::size_t i = 0; i < q.measure.size(); ++i) {
    atoms.push_back(q.measure.atoms()[i]);
    weights.push_back(v * q.measure.weights()[i]);
  }
  return {DiscreteMeasure::normalized(std::move(atoms), std::move(weights)), v,
          q.sticks};
}

DiscreteMeasure draw_dp_posterior(const DPPosterior& posterior,
                                  RandomStream& rng, double truncation_tol) {
  return draw_dp_posterior_parts(posterior, rng, truncation_tol).measure;
}

double integrate(const DiscreteMeasure& measure,
                 const std::function<double(double)>& f) {
  double total = 0.0;
  for (std::size_t i = 0; i < measure.size(); ++i) {
    const double value = f(measure.atoms()[i]);
    if (!std::isfinite(value)) {
      std::ostringstream os;
      os.precision(17);
      os << "integrand is not finite at atom " << measure.atoms()[i];
      throw NumericDomainError(os.str());
    }
    total += measure.weights()[i] * value;
  }
  return total;
}

}  // namespace wicksell
