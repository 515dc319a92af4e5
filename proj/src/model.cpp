#include "wicksell/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "wicksell/errors.hpp"
#include "wicksell/format.hpp"

namespace wicksell {
namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.5) || !std::isfinite(gamma)) {
    throw InvalidModel("Hoelder exponent must exceed 1/2");
  }
}

double parse_number(const std::string& text, const std::string& spec) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidModel("bad number in model spec '" + spec + "'");
  }
  if (used != text.size()) {
    throw InvalidModel("bad number in model spec '" + spec + "'");
  }
  return value;
}

}  // namespace

double holder_constant(double gamma) {
  check_gamma(gamma);
  return 0.5 / std::pow(kHolderCenter, gamma);
}

double holder_cdf(double gamma, double y) {
  const double k = holder_constant(gamma);
  if (!(y >= 0.0 && y <= kHolderSpan)) {
    throw InvalidInput("Hoelder cdf argument outside [0, 10]");
  }
  if (y <= kHolderCenter) return 0.5 - k * std::pow(kHolderCenter - y, gamma);
  return 0.5 + k * std::pow(y - kHolderCenter, gamma);
}

double holder_inverse(double gamma, double p) {
  const double k = holder_constant(gamma);
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidInput("Hoelder quantile level outside [0, 1]");
  }
  if (p <= 0.5) {
    return kHolderCenter - std::pow((0.5 - p) / k, 1.0 / gamma);
  }
  return kHolderCenter + std::pow((p - 0.5) / k, 1.0 / gamma);
}

TrueModel::TrueModel(Family family, std::optional<double> gamma)
    : family_(std::move(family)), gamma_(gamma) {}

TrueModel TrueModel::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw InvalidModel("exponential rate must be positive");
  }
  return TrueModel(ExponentialFamily{rate}, 1.0);
}

TrueModel TrueModel::holder_peak(double gamma) {
  check_gamma(gamma);
  return TrueModel(HolderPeakFamily{gamma}, gamma);
}

TrueModel TrueModel::tabulated(TabulatedCdf cdf, std::optional<double> gamma) {
  return TrueModel(TabulatedFamily{std::move(cdf)}, gamma);
}

TrueModel TrueModel::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) {
    throw InvalidModel("model spec must look like family:param, got '" +
                       spec + "'");
  }
  const std::string family = spec.substr(0, colon);
  const double param = parse_number(spec.substr(colon + 1), spec);
  if (family == "exp") return exponential(param);
  if (family == "holder") return holder_peak(param);
  if (family == "uniform") {
    if (!(param > 0.0) || !std::isfinite(param)) {
      throw InvalidModel("uniform model needs a positive upper bound");
    }
    return tabulated(TabulatedCdf({0.0, param}, {0.0, 1.0}), 1.0);
  }
  throw InvalidModel("unknown model family '" + family + "'");
}

std::string TrueModel::spec() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialFamily>) {
          os << "exp:" << format_double(f.rate);
        } else if constexpr (std::is_same_v<T, HolderPeakFamily>) {
          os << "holder:" << format_double(f.gamma);
        } else {
          const auto knots = f.cdf.knots();
          if (knots.size() == 2 && knots[0] == 0.0) {
            os << "uniform:" << format_double(knots[1]);
          } else {
            os << "table[" << knots.size() << " knots]";
          }
        }
      },
      family_);
  return os.str();
}

double TrueModel::cdf(double x) const {
  return std::visit(
      [x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialFamily>) {
          return x <= 0.0 ? 0.0 : -std::expm1(-f.rate * x);
        } else if constexpr (std::is_same_v<T, HolderPeakFamily>) {
          if (x <= 0.0) return 0.0;
          if (x >= kHolderSpan) return 1.0;
          return holder_cdf(f.gamma, x);
        } else {
          return f.cdf.cdf(x);
        }
      },
      family_);
}

double TrueModel::survival(double x) const {
  return std::visit(
      [x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialFamily>) {
          return x <= 0.0 ? 1.0 : std::exp(-f.rate * x);
        } else if constexpr (std::is_same_v<T, HolderPeakFamily>) {
          if (x <= 0.0) return 1.0;
          if (x >= kHolderSpan) return 0.0;
          const double k = holder_constant(f.gamma);
          if (x <= kHolderCenter) {
            return 0.5 + k * std::pow(kHolderCenter - x, f.gamma);
          }
          return 0.5 - k * std::pow(x - kHolderCenter, f.gamma);
        } else {
          return 1.0 - f.cdf.cdf(x);
        }
      },
      family_);
}

double TrueModel::density(double x) const {
  return std::visit(
      [x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialFamily>) {
          return x < 0.0 ? 0.0 : f.rate * std::exp(-f.rate * x);
        } else if constexpr (std::is_same_v<T, HolderPeakFamily>) {
          if (x < 0.0 || x > kHolderSpan) return 0.0;
          const double k = holder_constant(f.gamma);
          const double d = std::abs(x - kHolderCenter);
          if (d == 0.0) {
            return f.gamma < 1.0 ? std::numeric_limits<double>::infinity()
                                 : (f.gamma == 1.0 ? k : 0.0);
          }
          return k * f.gamma * std::pow(d, f.gamma - 1.0);
        } else {
          return f.cdf.density(x);
        }
      },
      family_);
}

double TrueModel::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidInput("quantile level outside [0, 1]");
  }
  return std::visit(
      [p](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialFamily>) {
          return -std::log1p(-p) / f.rate;
        } else if constexpr (std::is_same_v<T, HolderPeakFamily>) {
          return holder_inverse(f.gamma, p);
        } else {
          return f.cdf.quantile(p);
        }
      },
      family_);
}

double TrueModel::survival_quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) {
    throw InvalidInput("survival level outside [0, 1]");
  }
  return std::visit(
      [u](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialFamily>) {
          return -std::log(u) / f.rate;
        } else if constexpr (std::is_same_v<T, HolderPeakFamily>) {
          const double k = holder_constant(f.gamma);
          if (u <= 0.5) {
            return kHolderCenter + std::pow((0.5 - u) / k, 1.0 / f.gamma);
          }
          return kHolderCenter - std::pow((u - 0.5) / k, 1.0 / f.gamma);
        } else {
          return f.cdf.quantile(1.0 - u);
        }
      },
      family_);
}

double TrueModel::support_end() const {
  return std::visit(
      [](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialFamily>) {
          return std::numeric_limits<double>::infinity();
        } else if constexpr (std::is_same_v<T, HolderPeakFamily>) {
          return kHolderSpan;
        } else {
          return f.cdf.quantile(1.0);
        }
      },
      family_);
}

std::vector<double> TrueModel::singular_points() const {
  return std::visit(
      [](const auto& f) -> std::vector<double> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ExponentialFamily>) {
          return {};
        } else if constexpr (std::is_same_v<T, HolderPeakFamily>) {
          return {kHolderCenter};
        } else {
          const auto knots = f.cdf.knots();
          return std::vector<double>(knots.begin(), knots.end());
        }
      },
      family_);
}

std::optional<double> TrueModel::holder_k() const {
  if (const auto* h = std::get_if<HolderPeakFamily>(&family_)) {
    return holder_constant(h->gamma);
  }
  return std::nullopt;
}

}  // namespace wicksell
