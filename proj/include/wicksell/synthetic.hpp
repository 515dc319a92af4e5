#ifndef WICKSELL_SYNTHETIC_HPP_
#define WICKSELL_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "wicksell/model.hpp"
#include "wicksell/quadrature.hpp"

namespace wicksell {

enum class CenterMode { Origin, Centroid };

CenterMode parse_center_mode(const std::string& name);
std::string to_string(CenterMode mode);

struct SyntheticSource {
  std::string model;
  std::uint64_t seed;
};

struct IngestedSource {
  std::string path;
  CenterMode center;
  double center_x;
  double center_y;
};

struct ObservationFile {
  std::string path;
};

struct SampleSet {
  std::vector<double> z_values;
  std::variant<SyntheticSource, IngestedSource, ObservationFile> provenance;

  std::string describe() const;
};

// Z_i = (1 - U_i^2) X_i with X_i = F0^{-1}(U'_i); the uniforms come from
// Seed(seed).stream() in the order U'_1, U_1, U'_2, U_2, ...
SampleSet sample_observables(const TrueModel& model, std::size_t n,
                             std::uint64_t seed);

// Squared distances to the chosen center of 2D positions read from a text
// file: two numeric columns separated by commas or whitespace, an optional
// header line, '#' comments and blank lines ignored. Extra columns are
// ignored.
SampleSet ingest_positions(const std::filesystem::path& path,
                           CenterMode center);

// Observables Z, one per line (first column), with the same comment, header
// and delimiter rules as ingest_positions. Values must be nonnegative.
SampleSet read_observables(const std::filesystem::path& path);

// Piecewise-linear cdf knots (x, F) from a two-column file; same text rules.
TabulatedCdf read_tabulated_cdf(const std::filesystem::path& path);

// parse() plus "table:FILE" for a tabulated model read from FILE.
TrueModel parse_model_spec(const std::string& spec);

struct ModelTruth {
  double f0;
  double v0;
  double g0;
};

// F0(x), V0(x) and g0(x). Exponential models use closed forms (g0 via the
// modified Bessel function K0); other families go through quadrature.
ModelTruth model_truth(const TrueModel& model, double x,
                       const QuadOptions& options = {});

// g0(z) = (rate / 2) exp(-rate z / 2) K0(rate z / 2) for F0 = Exp(rate).
double g0_exponential(double rate, double z);

}  // namespace wicksell

#endif  // WICKSELL_SYNTHETIC_HPP_
