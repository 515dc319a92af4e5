#ifndef WICKSELL_MODEL_HPP_
#define WICKSELL_MODEL_HPP_

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wicksell/measures.hpp"

namespace wicksell {

// F0(x) = 1 - exp(-rate x).
struct ExponentialFamily {
  double rate;
};

// F0(y) = 1/2 - K (5 - y)^gamma on [0, 5] and 1/2 + K (y - 5)^gamma on
// [5, 10], with K = 1 / (2 * 5^gamma) so that F0(0) = 0 and F0(10) = 1.
struct HolderPeakFamily {
  double gamma;
};

struct TabulatedFamily {
  TabulatedCdf cdf;
};

inline constexpr double kHolderCenter = 5.0;
inline constexpr double kHolderSpan = 10.0;

double holder_constant(double gamma);
double holder_cdf(double gamma, double y);
double holder_inverse(double gamma, double p);

// Ground-truth distribution F0 of the (squared) sphere radii X.
class TrueModel {
 public:
  using Family =
      std::variant<ExponentialFamily, HolderPeakFamily, TabulatedFamily>;

  static TrueModel exponential(double rate);
  static TrueModel holder_peak(double gamma);
  static TrueModel tabulated(TabulatedCdf cdf,
                             std::optional<double> gamma = std::nullopt);

  // "exp:1.2", "holder:0.8", "uniform:1" (F0 uniform on [0, b]).
  static TrueModel parse(const std::string& spec);

  const Family& family() const { return family_; }
  std::string spec() const;

  double cdf(double x) const;
  // 1 - cdf(x), computed without cancellation where the family allows it.
  double survival(double x) const;
  double density(double x) const;
  double quantile(double p) const;
  // Inverse of the survival function: the x with survival(x) = u.
  double survival_quantile(double u) const;

  // Smallest x with cdf(x) = 1 (infinity for unbounded support).
  double support_end() const;
  // Points where the density is not smooth (kinks or integrable blow-ups).
  std::vector<double> singular_points() const;

  // Local Hoelder exponent at the model's designated point (x = 5 for the
  // peak family; 1 for the Lipschitz exponential family).
  std::optional<double> gamma() const { return gamma_; }
  // The constant K of the peak family.
  std::optional<double> holder_k() const;

 private:
  TrueModel(Family family, std::optional<double> gamma);

  Family family_;
  std::optional<double> gamma_;
};

}  // namespace wicksell

#endif  // WICKSELL_MODEL_HPP_
